"""Stimulus identifiers and trial descriptions.

A conditioned stimulus is named by an uppercase letter, an optional run of
prime characters, and an optional caret index (e.g. ``A``, ``B''``, ``C^14``).
All three parts together identify the stimulus: ``A``, ``A'`` and ``A^1`` are
three unrelated cues.  A configural cue stands for the conjunction of two or
more plain stimuli and is written ``q(AB)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


@dataclass(frozen=True)
class StimulusId:
    """Identity of a single CS or of a configural cue.

    Plain stimuli carry ``letter``/``primes``/``caret``; configural cues carry
    a sorted tuple of plain constituents instead.
    """

    letter: str = ""
    primes: int = 0
    caret: int | None = None
    parts: tuple["StimulusId", ...] = field(default=())

    def __post_init__(self) -> None:
        if self.parts:
            if len(self.parts) < 2:
                raise ValueError("configural cue needs at least 2 constituents")
            if any(p.is_configural for p in self.parts):
                raise ValueError("configural cues cannot nest")
            if self.letter:
                raise ValueError("configural cue cannot also carry a letter")
        else:
            if len(self.letter) != 1 or not "A" <= self.letter <= "Z":
                raise ValueError(f"invalid stimulus letter {self.letter!r}")
            if self.primes < 0:
                raise ValueError("prime count must be >= 0")
            if self.caret is not None and self.caret < 1:
                raise ValueError("caret index must be >= 1")

    @property
    def is_configural(self) -> bool:
        return bool(self.parts)

    @staticmethod
    def configural(constituents: "tuple[StimulusId, ...] | frozenset[StimulusId]") -> "StimulusId":
        """Build the configural cue of a compound, in canonical constituent order."""
        ordered = tuple(sorted(constituents, key=lambda s: s.sort_key))
        return StimulusId(parts=ordered)

    @property
    def sort_key(self):
        if self.is_configural:
            # Configural cues sort after all plain stimuli.
            return (1, tuple(p.sort_key for p in self.parts))
        return (0, self.letter, self.primes, self.caret or 0)

    def __str__(self) -> str:
        if self.is_configural:
            return "q(" + "".join(str(p) for p in self.parts) + ")"
        text = self.letter + "'" * self.primes
        if self.caret is not None:
            text += f"^{self.caret}"
        return text

    def __repr__(self) -> str:
        return f"StimulusId({str(self)!r})"


class US(Enum):
    """Unconditioned-stimulus marker at the end of a trial string."""

    DOUBLE_PLUS = "++"
    PLUS = "+"
    MINUS = "-"

    @property
    def reinforced(self) -> bool:
        return self is not US.MINUS


@dataclass(frozen=True)
class TrialSpec:
    """One trial: a set of plain stimuli plus the US marker."""

    stimuli: frozenset[StimulusId]
    us: US

    def __post_init__(self) -> None:
        if not self.stimuli:
            raise ValueError("trial needs at least one stimulus")
        if any(s.is_configural for s in self.stimuli):
            raise ValueError("trial strings name plain stimuli only")

    @property
    def ordered_stimuli(self) -> tuple[StimulusId, ...]:
        return tuple(sorted(self.stimuli, key=lambda s: s.sort_key))

    def __str__(self) -> str:
        return "".join(str(s) for s in self.ordered_stimuli) + self.us.value
