"""Per-stimulus learning state and the five trial-level update rules.

Every model exposes one step contract: given the state of a single stimulus
and the trial context (effective US rate, asymptote, and the summed strengths
of all stimuli present on the trial), return the updated state.  Steps are
pure; the engine snapshots the trial sums once, so stimuli on the same trial
update from identical inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, ClassVar


@dataclass(frozen=True)
class StimulusState:
    """Mutable learning quantities of one stimulus (net, excitatory and
    inhibitory strengths, the learning-rate variables, and salience).

    ``alpha0`` keeps the stimulus's initial learning rate, which the unified
    variable-rate model reuses on every trial.
    """

    v: float = 0.0
    v_e: float = 0.0
    v_i: float = 0.0
    alpha: float = 0.0
    alpha_mack: float = 0.0
    alpha_hall: float = 0.0
    salience: float = 0.0
    alpha0: float = 0.0


@dataclass(frozen=True)
class RunParameters:
    """Trial context handed to a step: the US rate selected for this trial,
    the asymptote (zero on nonreinforced trials), the trial sign, and the
    strength sums over the stimuli present on the trial."""

    beta: float
    lamda: float
    sign: int
    sigma: float
    sigma_e: float
    sigma_i: float


@dataclass
class ModelParameters:
    """Global and per-stimulus parameter values for one simulation.

    Override maps are keyed by the canonical stimulus string (including
    ``q(...)`` cues).  ``alpha0_override``, when set, replaces the snapshot of
    the initial learning rate that the variable-rate model keeps per stimulus.
    """

    alpha: float = 0.15
    alpha_mack: float = 0.9
    alpha_hall: float = 0.9
    beta: float = 0.5
    beta_neg: float = 0.3
    lamda: float = 0.8
    gamma: float = 0.1
    theta_e: float = 0.8
    theta_i: float = 0.1
    salience: float = 0.2
    decay: float = 0.02
    num_random_runs: int = 100
    configural_cues: bool = False
    alpha_overrides: dict[str, float] = field(default_factory=dict)
    alpha_mack_overrides: dict[str, float] = field(default_factory=dict)
    alpha_hall_overrides: dict[str, float] = field(default_factory=dict)
    salience_overrides: dict[str, float] = field(default_factory=dict)
    alpha0_override: float | None = None

    def validate(self) -> list[str]:
        """Return a list of out-of-bounds parameter descriptions (empty if ok)."""
        problems = []
        if not 0.0 <= self.gamma <= 1.0:
            problems.append(f"gamma={self.gamma} outside [0, 1]")
        if not 0.0 <= self.decay <= 1.0:
            problems.append(f"decay={self.decay} outside [0, 1]")
        if self.num_random_runs < 1:
            problems.append(f"num_random_runs={self.num_random_runs} must be >= 1")
        if self.beta <= 0:
            problems.append(f"beta={self.beta} must be > 0")
        if self.beta_neg <= 0:
            problems.append(f"beta_neg={self.beta_neg} must be > 0")
        if self.lamda < 0:
            problems.append(f"lamda={self.lamda} must be >= 0")
        for name in ("alpha", "alpha_mack", "alpha_hall", "salience"):
            value = getattr(self, name)
            if not math.isfinite(value):
                problems.append(f"{name}={value} must be finite")
        return problems


def _clamp(x: float, lo: float, hi: float) -> float:
    return min(max(x, lo), hi)


StepFn = Callable[[StimulusState, RunParameters, ModelParameters], StimulusState]


class Model:
    """Base class: a named update rule plus its parameter surface."""

    name: ClassVar[str]
    # Parameter names this model reads; everything else is inert and a UI
    # should gray it out.
    enabled_parameters: ClassVar[frozenset[str]]
    # State fields with meaningful values for this model, used by exports.
    tracked_fields: ClassVar[frozenset[str]]

    @classmethod
    def defaults(cls) -> dict[str, float]:
        return {}

    @classmethod
    def bounds(cls) -> dict[str, tuple[float, float]]:
        return {
            "alpha": (0.0, 1.0),
            "alpha_mack": (0.05, 1.0),
            "alpha_hall": (0.5, 1.0),
            "salience": (0.0, 1.0),
            "gamma": (0.0, 1.0),
            "decay": (0.0, 1.0),
        }

    @staticmethod
    def step(s: StimulusState, rp: RunParameters, p: ModelParameters) -> StimulusState:
        raise NotImplementedError


class RescorlaWagner(Model):
    """Constant-rate global error correction: dV = alpha * beta * (lambda - sigma)."""

    name = "Rescorla Wagner"
    enabled_parameters = frozenset({"alpha", "lambda", "beta", "betan", "num_trials"})
    tracked_fields = frozenset({"v", "alpha"})

    @classmethod
    def defaults(cls):
        return {"alpha": 0.15, "beta": 0.5, "betan": 0.3, "lambda": 0.8}

    @staticmethod
    def step(s: StimulusState, rp: RunParameters, p: ModelParameters) -> StimulusState:
        return replace(s, v=s.v + s.alpha * rp.beta * (rp.lamda - rp.sigma))


class PearceKayeHall(Model):
    """Separate excitatory/inhibitory links; attention tracks the absolute
    prediction error with recency weight gamma."""

    name = "Pearce Kaye Hall"
    enabled_parameters = frozenset(
        {"alpha", "salience", "lambda", "beta", "betan", "gamma", "num_trials"}
    )
    tracked_fields = frozenset({"v", "v_e", "v_i", "alpha"})

    @classmethod
    def defaults(cls):
        return {
            "alpha": 0.9,
            "salience": 0.2,
            "beta": 0.5,
            "betan": 0.3,
            "lambda": 1.0,
            "gamma": 0.1,
        }

    @staticmethod
    def step(s: StimulusState, rp: RunParameters, p: ModelParameters) -> StimulusState:
        rho = rp.lamda - (rp.sigma_e - rp.sigma_i)
        v_e, v_i = s.v_e, s.v_i
        if rho >= 0:
            # Excitatory growth scales with the full asymptote, not the error.
            v_e = v_e + s.salience * rp.beta * s.alpha * rp.lamda
        else:
            v_i = v_i + s.salience * p.beta_neg * s.alpha * abs(rho)
        alpha = p.gamma * abs(rho) + (1.0 - p.gamma) * s.alpha
        return replace(s, v=v_e - v_i, v_e=v_e, v_i=v_i, alpha=alpha)


class MackintoshExtended(Model):
    """Attention shifts toward the best available predictor; the attentional
    change compares a stimulus's own error against that of its trial partners."""

    name = "Mackintosh Extended"
    enabled_parameters = frozenset(
        {"alpha", "lambda", "beta", "betan", "thetaE", "thetaI", "num_trials"}
    )
    tracked_fields = frozenset({"v", "v_e", "v_i", "alpha"})

    @classmethod
    def defaults(cls):
        return {
            "alpha": 0.9,
            "beta": 0.5,
            "betan": 0.3,
            "lambda": 1.0,
            "thetaE": 0.8,
            "thetaI": 0.1,
        }

    @staticmethod
    def step(s: StimulusState, rp: RunParameters, p: ModelParameters) -> StimulusState:
        rho = rp.lamda - (rp.sigma_e - rp.sigma_i)
        ve_x = rp.sigma_e - s.v_e  # partners' summed strengths
        vi_x = rp.sigma_i - s.v_i
        alpha, v_e, v_i = s.alpha, s.v_e, s.v_i
        if rho > 0:
            delta = s.alpha * rp.beta * (1.0 - s.v_e + s.v_i) * rho
            alpha -= p.theta_e * (
                abs(rp.lamda - s.v_e + s.v_i) - abs(rp.lamda - ve_x + vi_x)
            )
            v_e += delta
        elif rho < 0:
            delta = s.alpha * p.beta_neg * (1.0 - s.v_i + s.v_e) * -rho
            alpha -= p.theta_i * (
                abs(-rho - s.v_i + s.v_e) - abs(-rho - vi_x + ve_x)
            )
            v_i += delta
        alpha = _clamp(alpha, 0.05, 1.0)
        return replace(s, v=v_e - v_i, v_e=v_e, v_i=v_i, alpha=alpha)


class LePelleyHybrid(Model):
    """Hybrid attention: the product of a predictiveness rate (theta updates,
    clamped to [0.05, 1]) and an error-tracking salience rate (gamma update,
    clamped to [0.5, 1]) drives learning."""

    name = "Le Pelley's Hybrid"
    enabled_parameters = frozenset(
        {
            "alpha_mack",
            "alpha_hall",
            "lambda",
            "beta",
            "betan",
            "gamma",
            "thetaE",
            "thetaI",
            "num_trials",
        }
    )
    tracked_fields = frozenset({"v", "v_e", "v_i", "alpha_mack", "alpha_hall"})

    @classmethod
    def defaults(cls):
        return {
            "alpha_mack": 0.9,
            "alpha_hall": 0.9,
            "beta": 0.5,
            "betan": 0.3,
            "lambda": 1.0,
            "gamma": 0.1,
            "thetaE": 0.8,
            "thetaI": 0.1,
        }

    @staticmethod
    def step(s: StimulusState, rp: RunParameters, p: ModelParameters) -> StimulusState:
        rho = rp.lamda - (rp.sigma_e - rp.sigma_i)
        ve_x = rp.sigma_e - s.v_e
        vi_x = rp.sigma_i - s.v_i
        am, ah = s.alpha_mack, s.alpha_hall
        rate = am * ah
        d_ve = d_vi = 0.0
        if rho >= 0:
            d_ve = rate * rp.beta * (1.0 - s.v_e + s.v_i) * rho
            am = am - p.theta_e * ah * (
                abs(rp.lamda - s.v_e + s.v_i) - abs(rp.lamda - ve_x + vi_x)
            )
        else:
            d_vi = rate * p.beta_neg * (1.0 - s.v_i + s.v_e) * -rho
            am = am - p.theta_i * ah * (
                abs(-rho - s.v_i + s.v_e) - abs(-rho - vi_x + ve_x)
            )
        ah = p.gamma * abs(rho) + (1.0 - p.gamma) * s.alpha_hall
        am = _clamp(am, 0.05, 1.0)
        ah = _clamp(ah, 0.5, 1.0)
        v_e = s.v_e + d_ve
        v_i = s.v_i + d_vi
        return replace(s, v=v_e - v_i, v_e=v_e, v_i=v_i, alpha_mack=am, alpha_hall=ah)


class UnifiedRate(Model):
    """Error-correction learning with a unified variable rate: exposure decays
    the rate, and the stimulus's own predictive value times the global error
    pushes against or with the decay.  Under-predicted reinforcement keeps the
    rate of a predictive stimulus high; a predicted outcome that fails to
    arrive accelerates the loss.  The rate stays in [0, 1]."""

    name = "MLAB Model"
    enabled_parameters = frozenset({"alpha", "lambda", "beta", "betan", "decay", "num_trials"})
    tracked_fields = frozenset({"v", "alpha"})

    @classmethod
    def defaults(cls):
        return {"alpha": 0.5, "beta": 0.5, "betan": 0.3, "lambda": 1.0, "decay": 0.02}

    @staticmethod
    def step(s: StimulusState, rp: RunParameters, p: ModelParameters) -> StimulusState:
        error = rp.lamda - rp.sigma
        v = s.v + s.alpha * rp.beta * error
        # Rate update uses the pre-update value and sums.
        alpha = s.alpha * (1.0 - p.decay) + s.alpha0 * s.v * error
        return replace(s, v=v, alpha=_clamp(alpha, 0.0, 1.0))


MODELS: dict[str, type[Model]] = {
    cls.name: cls
    for cls in (RescorlaWagner, PearceKayeHall, MackintoshExtended, LePelleyHybrid, UnifiedRate)
}

MODEL_NAMES = tuple(MODELS)

# Parameter-name mapping between the ModelParameters fields and the flat keys
# used in files, on the command line, and by the service.
PARAMETER_KEYS = {
    "alpha": "alpha",
    "alpha_mack": "alpha_mack",
    "alpha_hall": "alpha_hall",
    "beta": "beta",
    "betan": "beta_neg",
    "lambda": "lamda",
    "gamma": "gamma",
    "thetaE": "theta_e",
    "thetaI": "theta_i",
    "salience": "salience",
    "decay": "decay",
    "num_trials": "num_random_runs",
}


def get_model(name: str) -> type[Model]:
    try:
        return MODELS[name]
    except KeyError:
        known = ", ".join(MODEL_NAMES)
        raise ValueError(f"unknown model {name!r}; known models: {known}") from None


def model_defaults(name: str) -> ModelParameters:
    """Default parameter values for a model, with every other field left at
    its package-wide default (those fields are inert for the model)."""
    model = get_model(name)
    params = ModelParameters()
    for key, value in model.defaults().items():
        setattr(params, PARAMETER_KEYS[key], value)
    return params
