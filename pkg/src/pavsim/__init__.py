"""Trial-based Pavlovian conditioning simulator.

Five associative learning models behind one experiment-design language, with
randomized-trial averaging, configural cues, CSV export, plotting, a CLI and
a local simulation service.
"""

from .config import apply_parameter_map, resolve_parameters
from .dsl import (
    ExperimentSpec,
    ParseError,
    ParseWarning,
    PhaseSpec,
    parse_phase,
    parse_rw_file,
    parse_stimulus,
    serialize_phase,
    serialize_rw_file,
)
from .engine import (
    SimulationResult,
    ValidationError,
    compound_value,
    run_experiment,
    run_phase_randomized,
    run_phase_sequential,
)
from .export import ExportTable, PlotOptions, export_csv, render_phase_plots
from .models import (
    MODEL_NAMES,
    MODELS,
    ModelParameters,
    RunParameters,
    StimulusState,
    get_model,
    model_defaults,
)
from .stimuli import US, StimulusId, TrialSpec

__version__ = "0.1.0"

__all__ = [
    "ExperimentSpec",
    "ExportTable",
    "MODELS",
    "MODEL_NAMES",
    "ModelParameters",
    "ParseError",
    "ParseWarning",
    "PhaseSpec",
    "PlotOptions",
    "RunParameters",
    "SimulationResult",
    "StimulusId",
    "StimulusState",
    "TrialSpec",
    "US",
    "ValidationError",
    "apply_parameter_map",
    "compound_value",
    "export_csv",
    "get_model",
    "model_defaults",
    "parse_phase",
    "parse_rw_file",
    "parse_stimulus",
    "render_phase_plots",
    "resolve_parameters",
    "run_experiment",
    "run_phase_randomized",
    "run_phase_sequential",
    "serialize_phase",
    "serialize_rw_file",
]
