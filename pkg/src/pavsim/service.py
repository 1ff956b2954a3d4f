"""Local HTTP service exposing parsing, validation and simulation.

JSON over loopback; schemas are versioned under ``/v1``.  Responses are
self-describing: every plotted number comes from the response series, so a
client never recomputes model math.
"""
from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from .config import resolve_parameters
from .dsl import ExperimentSpec, ParseError, parse_phase, parse_rw_file, serialize_phase
from .engine import SNAPSHOT_FIELDS, SimulationResult, ValidationError, run_experiment
from .export import export_csv
from .models import MODEL_NAMES, get_model

# Guardrails: designs beyond these sizes get a 422 with advice instead of a
# hung request.
MAX_STIMULI = 2000
MAX_RANDOM_RUNS = 100_000

DEFAULT_UI_ORIGINS = ["http://localhost:5173", "http://127.0.0.1:5173"]


class SimulationOptions(BaseModel):
    configural_cues: bool | None = None
    num_random_runs: int | None = None
    seed: int = 0


class SimulationRequest(BaseModel):
    experiment: str | None = Field(default=None, description="Raw .rw file text.")
    groups: list[dict[str, Any]] | None = Field(
        default=None, description='Structured groups: [{"name": ..., "phases": [...]}].'
    )
    model_name: str | None = None
    parameters: dict[str, Any] = Field(default_factory=dict)
    options: SimulationOptions = Field(default_factory=SimulationOptions)


def _error(status: int, field: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"errors": [{"field": field, "message": message}]})


def _build_spec(request: SimulationRequest) -> ExperimentSpec:
    if request.experiment is not None:
        return parse_rw_file(request.experiment)
    spec = ExperimentSpec()
    seen: set[str] = set()
    for index, group in enumerate(request.groups or []):
        name = str(group.get("name", ""))
        if not name:
            raise ParseError(f"group {index} has no name")
        if name in seen:
            raise ParseError(f"duplicate group name {name!r}")
        seen.add(name)
        phases = [parse_phase(str(cell)) for cell in group.get("phases", [])]
        spec.groups.append((name, phases))
    from .dsl import PhaseSpec

    width = spec.phase_count
    for _, phases in spec.groups:
        phases.extend(PhaseSpec() for _ in range(width - len(phases)))
    return spec


def _series_payload(result: SimulationResult) -> list[dict[str, Any]]:
    tracked = get_model(result.model_name).tracked_fields
    groups = []
    for group in result.groups:
        phases = []
        for phase in group.phases:
            series = []
            for name in sorted(phase.cs_series):
                kind = "configural" if name.startswith("q(") else "cs"
                entry: dict[str, Any] = {"name": name, "kind": kind}
                rows = phase.cs_series[name]
                for i, field_name in enumerate(SNAPSHOT_FIELDS):
                    if field_name in tracked:
                        entry[field_name] = [row[i] for row in rows]
                series.append(entry)
            for name in sorted(phase.compound_series):
                series.append(
                    {"name": name, "kind": "compound", "v": list(phase.compound_series[name])}
                )
            for name in sorted(phase.trial_type_series):
                series.append(
                    {"name": name, "kind": "trial-type", "v": list(phase.trial_type_series[name])}
                )
            phases.append({"series": series})
        groups.append({"name": group.name, "phases": phases})
    return groups


def _run(request: SimulationRequest) -> tuple[SimulationResult, list[str]]:
    spec = _build_spec(request)
    model_name = request.model_name or spec.model_name or "Rescorla Wagner"
    get_model(model_name)  # raises on unknown
    params, warnings = resolve_parameters(model_name, spec.parameters, request.parameters)
    if request.options.configural_cues is not None:
        params.configural_cues = request.options.configural_cues
    if request.options.num_random_runs is not None:
        params.num_random_runs = request.options.num_random_runs

    stimulus_count = len(
        {sid for _, phases in spec.groups for phase in phases
         for _, trial in phase.trials for sid in trial.stimuli}
    )
    if stimulus_count > MAX_STIMULI:
        raise ValidationError(
            [f"design names {stimulus_count} stimuli (limit {MAX_STIMULI}); split the design"]
        )
    if params.num_random_runs > MAX_RANDOM_RUNS:
        raise ValidationError(
            [f"num_random_runs={params.num_random_runs} exceeds {MAX_RANDOM_RUNS}; "
             "lower the run count"]
        )
    result = run_experiment(spec, params, model_name, seed=request.options.seed)
    return result, warnings


def create_app() -> FastAPI:
    app = FastAPI(title="pavsim service", version="1")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=DEFAULT_UI_ORIGINS,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ParseError)
    async def _parse_error(request: Request, exc: ParseError):
        return _error(422, "experiment", str(exc))

    @app.exception_handler(ValidationError)
    async def _validation_error(request: Request, exc: ValidationError):
        return _error(422, "parameters", str(exc))

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return _error(422, "model_name" if "unknown model" in str(exc) else "request", str(exc))

    @app.get("/v1/models")
    def models() -> list[dict[str, Any]]:
        out = []
        for name in MODEL_NAMES:
            model = get_model(name)
            out.append(
                {
                    "name": name,
                    "enabled_parameters": sorted(model.enabled_parameters),
                    "defaults": model.defaults(),
                    "bounds": {k: list(v) for k, v in model.bounds().items()},
                }
            )
        return out

    @app.post("/v1/parse-phase")
    def parse_phase_endpoint(body: dict[str, str]):
        text = body.get("text", "")
        try:
            phase = parse_phase(text)
        except ParseError as exc:
            return _error(422, "text", str(exc))
        return {
            "randomized": phase.randomized,
            "beta_override": phase.beta_override,
            "lambda_override": phase.lambda_override,
            "trials": [
                {"repeat": count, "stimuli": [str(s) for s in trial.ordered_stimuli],
                 "us": trial.us.value}
                for count, trial in phase.trials
            ],
            "canonical": serialize_phase(phase),
        }

    @app.post("/v1/simulate")
    def simulate(request: SimulationRequest) -> dict[str, Any]:
        result, warnings = _run(request)
        model = get_model(result.model_name)
        return {
            "model_name": result.model_name,
            "seed": result.seed,
            "groups": _series_payload(result),
            "warnings": warnings,
            "enabled_parameters": sorted(model.enabled_parameters),
        }

    @app.post("/v1/export")
    def export(request: SimulationRequest) -> Response:
        result, _ = _run(request)
        return Response(content=export_csv(result).to_csv(), media_type="text/csv")

    return app


app = create_app()


def main() -> None:
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=8730)


if __name__ == "__main__":
    main()
