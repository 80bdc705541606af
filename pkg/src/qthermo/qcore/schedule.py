"""Control-parameter paths lambda(t) on [0, tau]."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .operators import InvalidInputError


@dataclass(frozen=True)
class Schedule:
    """A parameter path on [0, tau], sampleable at arbitrary t."""

    duration: float
    sampler: Callable[[float], float]
    label: str = ""

    def __post_init__(self):
        if not (self.duration > 0.0) or not np.isfinite(self.duration):
            raise InvalidInputError("schedule duration must be positive and finite")

    def __call__(self, t: float) -> float:
        return float(self.sampler(t))

    def derivative(self, t: float, h: float | None = None) -> float:
        """Richardson-refined central-difference time derivative.

        The stencil is clamped into [0, tau]; at the boundary a one-sided
        second-order formula is used.
        """
        if h is None:
            h = max(1e-5 * self.duration, 1e-12)
        if t - h < 0.0 or t + h > self.duration:
            lo, hi = max(0.0, t - h), min(self.duration, t + h)
            if hi <= lo:
                raise InvalidInputError("degenerate differentiation stencil")
            return (self(hi) - self(lo)) / (hi - lo)
        d1 = (self(t + h) - self(t - h)) / (2.0 * h)
        d2 = (self(t + 0.5 * h) - self(t - 0.5 * h)) / h
        return (4.0 * d2 - d1) / 3.0

    @staticmethod
    def constant(value: float, duration: float = 1.0, label: str = "const") -> "Schedule":
        return Schedule(duration, lambda t: value, label)

    @staticmethod
    def linear(start: float, stop: float, duration: float, label: str = "linear") -> "Schedule":
        span = stop - start
        return Schedule(duration, lambda t: start + span * (t / duration), label)

    @staticmethod
    def smooth(start: float, stop: float, duration: float, label: str = "smooth") -> "Schedule":
        """Sine-squared ramp with vanishing endpoint velocities."""
        span = stop - start
        return Schedule(
            duration,
            lambda t: start + span * np.sin(0.5 * np.pi * t / duration) ** 2,
            label,
        )
