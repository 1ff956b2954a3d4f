"""Parser and serializer for the experiment design language.

Phase strings follow the grammar

    Phase := [rand/] [beta=B/] [lambda=L/] T0 Trial0 [/ T1 Trial1 [/ ...]]
    Trial := CS0 [CS1 [...]] US
    CS    := {A-Z} ['+ | '*^{0-9}+]
    US    := ++ | + | -

Whole experiments live in ``.rw`` files: a pipe-separated group table plus
``@key=value;key=value`` parameter lines.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .stimuli import US, StimulusId, TrialSpec


class ParseError(ValueError):
    """Malformed design text.  ``position`` is a 0-based offset into the input;
    ``line`` is 1-based when the input is a whole file."""

    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        self.position = position
        self.line = line
        where = ""
        if line is not None:
            where += f" at line {line}"
        if position is not None:
            where += f" at offset {position}"
        super().__init__(message + where)


class ParseWarning(UserWarning):
    """Non-fatal oddity in design text (e.g. duplicate CS letters in a trial)."""


@dataclass(frozen=True)
class PhaseSpec:
    """One phase: flags plus an ordered list of (repeat count, trial)."""

    randomized: bool = False
    beta_override: float | None = None
    lambda_override: float | None = None
    trials: tuple[tuple[int, TrialSpec], ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.trials

    def expanded(self) -> list[TrialSpec]:
        """Trial list with repeat counts unrolled, in design order."""
        out: list[TrialSpec] = []
        for count, trial in self.trials:
            out.extend([trial] * count)
        return out


@dataclass
class ExperimentSpec:
    """Parsed design table: ordered groups, each with the same phase count."""

    groups: list[tuple[str, list[PhaseSpec]]] = field(default_factory=list)
    parameters: dict[str, str] = field(default_factory=dict)
    model_name: str | None = None

    @property
    def phase_count(self) -> int:
        return max((len(p) for _, p in self.groups), default=0)


class _Scanner:
    def __init__(self, text: str, base: int = 0):
        self.text = text
        self.pos = 0
        self.base = base  # offset of `text` within the enclosing input

    def error(self, message: str, pos: int | None = None) -> ParseError:
        at = self.pos if pos is None else pos
        return ParseError(message, position=self.base + at)

    @property
    def done(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if not self.done else ""

    def take_digits(self) -> str:
        start = self.pos
        while not self.done and self.peek().isdigit():
            self.pos += 1
        return self.text[start:self.pos]

    def parse_cs(self) -> StimulusId:
        ch = self.peek()
        if ch.islower():
            raise self.error(f"stimulus letters are uppercase, got {ch!r}")
        if not ("A" <= ch <= "Z"):
            raise self.error(f"expected stimulus letter, got {ch!r}")
        self.pos += 1
        primes = 0
        while self.peek() == "'":
            primes += 1
            self.pos += 1
        caret = None
        if self.peek() == "^":
            self.pos += 1
            digits = self.take_digits()
            if not digits:
                raise self.error("caret without digits")
            caret = int(digits)
            if caret < 1:
                raise self.error("caret index must be >= 1", pos=self.pos - len(digits))
        return StimulusId(letter=ch, primes=primes, caret=caret)


def parse_stimulus(text: str) -> StimulusId:
    """Parse a single stimulus name, consuming the whole string."""
    if not text:
        raise ParseError("empty stimulus name", position=0)
    sc = _Scanner(text)
    if sc.peek().isdigit():
        raise sc.error("digits before the stimulus letter")
    sid = sc.parse_cs()
    if not sc.done:
        raise sc.error(f"stray characters after stimulus: {sc.text[sc.pos:]!r}")
    return sid


def _parse_trial(segment: str, base: int) -> tuple[int, TrialSpec]:
    sc = _Scanner(segment, base)
    digits = sc.take_digits()
    repeat = 1
    if digits:
        repeat = int(digits)
        if repeat < 1:
            raise sc.error("repeat count must be >= 1", pos=0)
    stimuli: set[StimulusId] = set()
    us: US | None = None
    while not sc.done:
        ch = sc.peek()
        if ch == "+":
            if sc.text[sc.pos:sc.pos + 2] == "++":
                us = US.DOUBLE_PLUS
                sc.pos += 2
            else:
                us = US.PLUS
                sc.pos += 1
            break
        if ch == "-":
            us = US.MINUS
            sc.pos += 1
            break
        sid = sc.parse_cs()
        if sid in stimuli:
            warnings.warn(
                f"duplicate stimulus {sid} in trial {segment!r} collapses to one",
                ParseWarning,
                stacklevel=3,
            )
        stimuli.add(sid)
    if us is None:
        raise sc.error(f"trial {segment!r} has no US symbol (+, ++ or -)")
    if not sc.done:
        raise sc.error(f"stray characters after US symbol: {sc.text[sc.pos:]!r}")
    if not stimuli:
        raise ParseError(f"trial {segment!r} has no stimuli", position=base)
    return repeat, TrialSpec(stimuli=frozenset(stimuli), us=us)


def _parse_number(text: str, base: int, name: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"malformed {name} value {text!r}", position=base) from None
    if not math.isfinite(value):
        raise ParseError(f"{name} value must be finite", position=base)
    return value


def parse_phase(text: str) -> PhaseSpec:
    """Parse one phase string.  The empty string is a valid (empty) phase."""
    stripped = "".join(text.split())  # hand-edited files pad table cells
    if not stripped:
        return PhaseSpec()
    segments: list[tuple[str, int]] = []
    offset = 0
    for seg in stripped.split("/"):
        segments.append((seg, offset))
        offset += len(seg) + 1

    randomized = False
    beta: float | None = None
    lam: float | None = None
    idx = 0
    while idx < len(segments):
        seg, base = segments[idx]
        if seg == "rand":
            if randomized:
                raise ParseError("duplicate rand/ prefix", position=base)
            randomized = True
        elif seg.startswith("beta="):
            if beta is not None:
                raise ParseError("duplicate beta= prefix", position=base)
            beta = _parse_number(seg[5:], base + 5, "beta")
            if beta <= 0:
                raise ParseError("per-phase beta must be > 0", position=base + 5)
        elif seg.startswith("lambda="):
            if lam is not None:
                raise ParseError("duplicate lambda= prefix", position=base)
            lam = _parse_number(seg[7:], base + 7, "lambda")
            if lam < 0:
                raise ParseError("per-phase lambda must be >= 0", position=base + 7)
        else:
            break
        idx += 1

    trials = []
    for seg, base in segments[idx:]:
        if not seg:
            raise ParseError("empty trial between slashes", position=base)
        trials.append(_parse_trial(seg, base))
    return PhaseSpec(
        randomized=randomized,
        beta_override=beta,
        lambda_override=lam,
        trials=tuple(trials),
    )


def _format_number(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return repr(value)


def serialize_phase(phase: PhaseSpec) -> str:
    """Canonical text for a phase; inverse of :func:`parse_phase`."""
    parts: list[str] = []
    if phase.randomized:
        parts.append("rand")
    if phase.beta_override is not None:
        parts.append(f"beta={_format_number(phase.beta_override)}")
    if phase.lambda_override is not None:
        parts.append(f"lambda={_format_number(phase.lambda_override)}")
    for count, trial in phase.trials:
        prefix = str(count) if count != 1 else ""
        parts.append(prefix + str(trial))
    return "/".join(parts)


def parse_rw_file(content: str) -> ExperimentSpec:
    """Parse a ``.rw`` experiment file (LF or CRLF)."""
    spec = ExperimentSpec()
    names: set[str] = set()
    for lineno, raw in enumerate(content.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("@"):
            for pair in line[1:].split(";"):
                pair = pair.strip()
                if not pair:
                    continue
                key, eq, value = pair.partition("=")
                if not eq or not key.strip():
                    raise ParseError(f"malformed parameter pair {pair!r}", line=lineno)
                key = key.strip()
                value = value.strip()
                if key == "model":
                    spec.model_name = value
                else:
                    spec.parameters[key] = value
            continue
        cells = line.split("|")
        name = cells[0].strip()
        if not name:
            raise ParseError("empty group name", line=lineno)
        if name in names:
            raise ParseError(f"duplicate group name {name!r}", line=lineno)
        names.add(name)
        phases = []
        for cellno, cell in enumerate(cells[1:], start=1):
            try:
                phases.append(parse_phase(cell))
            except ParseError as exc:
                raise ParseError(
                    f"cell {cellno} ({cell.strip()!r}): {exc.args[0]}", line=lineno
                ) from exc
        spec.groups.append((name, phases))
    # All groups carry the same phase count; missing cells are empty phases.
    width = spec.phase_count
    for _, phases in spec.groups:
        phases.extend(PhaseSpec() for _ in range(width - len(phases)))
    return spec


def serialize_rw_file(spec: ExperimentSpec) -> str:
    """Serialize an experiment to ``.rw`` text (LF line endings)."""
    lines: list[str] = []
    if spec.model_name is not None:
        lines.append(f"@model={spec.model_name}")
    if spec.parameters:
        lines.append("@" + ";".join(f"{k}={v}" for k, v in spec.parameters.items()))
    width = spec.phase_count
    for name, phases in spec.groups:
        if "|" in name or "\n" in name or "\r" in name:
            raise ValueError(f"group name {name!r} cannot contain '|' or newlines")
        cells = [serialize_phase(p) for p in phases]
        cells.extend([""] * (width - len(cells)))
        lines.append("|".join([name] + cells))
    return "\n".join(lines) + ("\n" if lines else "")
