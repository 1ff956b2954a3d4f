"""Resolution of flat parameter key/value maps into ModelParameters.

The same key names appear in ``@`` lines of ``.rw`` files, on the command
line, and in service requests: global keys like ``beta`` or ``thetaE``, and
per-stimulus keys like ``alpha_D``, ``alpha_mack_B'``, ``salience_q(AB)``.
Precedence is most-specific-wins: command line / request over file over model
defaults.
"""
from __future__ import annotations

import re

from .dsl import ParseError, parse_stimulus
from .models import PARAMETER_KEYS, ModelParameters, model_defaults
from .stimuli import StimulusId

_PER_CS_PREFIXES = (
    ("alpha_mack_", "alpha_mack_overrides"),
    ("alpha_hall_", "alpha_hall_overrides"),
    ("alpha_", "alpha_overrides"),
    ("salience_", "salience_overrides"),
)

# Keys parsed for compatibility but without a governing update rule; they are
# reported back so callers can warn.
IGNORED_KEYS = frozenset({"xi_hall", "habituation", "rho", "nu", "kay"})


_CS_RE = re.compile(r"[A-Z]'*(?:\^\d+)?")


def parse_stimulus_key(text: str) -> StimulusId:
    """Parse a stimulus name as used in per-CS parameter keys, accepting
    configural-cue names ``q(...)``."""
    if text.startswith("q(") and text.endswith(")"):
        inner = text[2:-1]
        parts = []
        pos = 0
        while pos < len(inner):
            match = _CS_RE.match(inner, pos)
            if match is None:
                raise ParseError(f"malformed configural cue name {text!r}", position=pos)
            parts.append(parse_stimulus(match.group()))
            pos = match.end()
        if len(parts) < 2:
            raise ParseError(f"configural cue {text!r} needs >= 2 constituents")
        return StimulusId.configural(tuple(parts))
    return parse_stimulus(text)


def apply_parameter_map(
    params: ModelParameters, mapping: dict[str, object]
) -> list[str]:
    """Apply flat key/value entries onto ``params`` in place.

    Returns warnings for unknown or parsed-but-ignored keys; unknown keys are
    left untouched elsewhere (files preserve them verbatim).
    """
    warnings: list[str] = []
    for key, raw in mapping.items():
        if key in ("model",):
            continue
        if key in IGNORED_KEYS or any(
            key.startswith(f"{ig}_") for ig in ("habituations",)
        ):
            warnings.append(f"parameter {key!r} has no governing equation; ignored")
            continue
        if key in PARAMETER_KEYS:
            field = PARAMETER_KEYS[key]
            try:
                value = int(raw) if field == "num_random_runs" else float(raw)  # type: ignore[arg-type]
            except (TypeError, ValueError):
                warnings.append(f"parameter {key!r} has non-numeric value {raw!r}; ignored")
                continue
            setattr(params, field, value)
            continue
        if key == "configural_cues":
            params.configural_cues = str(raw).strip().lower() in ("1", "true", "yes", "on")
            continue
        matched = False
        for prefix, attr in _PER_CS_PREFIXES:
            if key.startswith(prefix):
                name = key[len(prefix):]
                try:
                    sid = parse_stimulus_key(name)
                    value = float(raw)  # type: ignore[arg-type]
                except (ParseError, TypeError, ValueError):
                    break
                getattr(params, attr)[str(sid)] = value
                matched = True
                break
        if not matched:
            warnings.append(f"unknown parameter key {key!r} preserved but unused")
    return warnings


def resolve_parameters(
    model_name: str,
    *maps: dict[str, object],
) -> tuple[ModelParameters, list[str]]:
    """Model defaults overlaid with each map in order (later maps win)."""
    params = model_defaults(model_name)
    warnings: list[str] = []
    for mapping in maps:
        warnings.extend(apply_parameter_map(params, mapping))
    return params, warnings
