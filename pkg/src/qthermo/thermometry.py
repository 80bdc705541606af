"""Quantum Fisher information of thermal probes and Cramer-Rao bounds.

For a probe in a canonical state only the population term of the QFI
survives, giving F(T) = beta^4 Var(H).  All closed forms below follow
that normalization (k_B = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .qcore import InvalidInputError


@dataclass(frozen=True)
class ProbeSpectrum:
    """Ascending energy levels; degeneracies enter as repeated entries."""

    energies: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        if e.ndim != 1 or e.size < 2:
            raise InvalidInputError("spectrum needs at least two levels")
        if not np.all(np.isfinite(e)):
            raise InvalidInputError("energies must be finite")
        if np.any(np.diff(e) < 0.0):
            raise InvalidInputError("energies must be nondecreasing")
        e.setflags(write=False)
        object.__setattr__(self, "energies", e)

    @property
    def dim(self) -> int:
        return self.energies.size


def thermal_populations(spectrum: ProbeSpectrum, temperature: float) -> np.ndarray:
    beta = 1.0 / temperature
    logw = -beta * spectrum.energies
    return np.exp(logw - logsumexp(logw))


def qfi_thermal(spectrum: ProbeSpectrum | Sequence[float], temperature: float) -> float:
    """F(T) = beta^4 Var(H) for a Gibbs probe; equals sum |dT p_n|^2 / p_n."""
    if not isinstance(spectrum, ProbeSpectrum):
        spectrum = ProbeSpectrum(np.asarray(spectrum, dtype=float))
    if temperature <= 0.0:
        raise InvalidInputError("temperature must be positive")
    beta = 1.0 / temperature
    p = thermal_populations(spectrum, temperature)
    e = spectrum.energies
    mean = float(p @ e)
    var = float(p @ (e - mean) ** 2)
    return beta**4 * var


def qfi_qubit(delta: float, temperature: float) -> float:
    """Two-level closed form, gap delta."""
    x = delta / (2.0 * temperature)
    return delta**2 / (4.0 * temperature**4 * math.cosh(x) ** 2)


def qfi_oscillator(delta: float, temperature: float) -> float:
    """Harmonic-ladder closed form, spacing delta."""
    x = delta / (2.0 * temperature)
    return delta**2 / (4.0 * temperature**4 * math.sinh(x) ** 2)


def qfi_harmonic_d(delta: float, temperature: float, d: int) -> float:
    """Closed form for the d-level ladder with spacing delta.

    Evaluated in a form that stays finite for beta*delta*d >> 1, where it
    approaches the oscillator expression.
    """
    if d < 2:
        raise InvalidInputError("d must be >= 2")
    if temperature <= 0.0:
        raise InvalidInputError("temperature must be positive")
    beta = 1.0 / temperature
    x = beta * delta
    # numerator and denominator of the ladder formula scaled by exp(-2 x d)
    ed = math.exp(-x * d)
    num = math.exp(x) \
        + (2.0 * (d * d - 1.0) * math.exp(x) - d * d * (1.0 + math.exp(2.0 * x))) * ed \
        + math.exp(x) * ed * ed
    den = (math.expm1(x)) ** 2 * (1.0 - ed) ** 2
    return beta**4 * delta**2 * num / den


def cramer_rao(fisher: float, measurements: int) -> float:
    """Variance lower bound 1/(M F); returns inf when F = 0."""
    if measurements < 1:
        raise InvalidInputError("measurement count must be >= 1")
    if fisher < 0.0:
        raise InvalidInputError("Fisher information must be nonnegative")
    if fisher == 0.0:
        return math.inf
    return 1.0 / (measurements * fisher)


@dataclass(frozen=True)
class QfiCurve:
    temperatures: np.ndarray
    values: np.ndarray
    t_star: float
    f_max: float


def qfi_curve(spectrum: ProbeSpectrum | Sequence[float],
              temperatures: Sequence[float]) -> QfiCurve:
    ts = np.asarray(temperatures, dtype=float)
    vals = np.array([qfi_thermal(spectrum, t) for t in ts])
    if np.any(vals < 0.0):
        raise InvalidInputError("QFI must be nonnegative")
    k = int(np.argmax(vals))
    return QfiCurve(temperatures=ts, values=vals, t_star=float(ts[k]),
                    f_max=float(vals[k]))


@dataclass(frozen=True)
class OptimalProbeResult:
    spectrum: ProbeSpectrum
    gap: float
    f_max: float


def _degenerate_probe(gap: float, dim: int) -> ProbeSpectrum:
    return ProbeSpectrum(np.array([0.0] + [gap] * (dim - 1)))


def optimal_probe(dim: int, temperature: float,
                  gap_window: tuple[float, float] = (1e-3, 1e3),
                  tol: float = 1e-12) -> OptimalProbeResult:
    """Maximal-QFI probe: ground level + (dim-1)-fold degenerate excited level.

    The optimal gap is located by golden-section search on log(gap/T) over
    `gap_window` * T; the QFI of this family is unimodal in the gap.
    """
    if dim < 2:
        raise InvalidInputError("dim must be >= 2")
    lo = math.log(gap_window[0] * temperature)
    hi = math.log(gap_window[1] * temperature)
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0

    def objective(log_gap: float) -> float:
        return qfi_thermal(_degenerate_probe(math.exp(log_gap), dim), temperature)

    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = objective(d)
    gap = math.exp(0.5 * (a + b))
    return OptimalProbeResult(spectrum=_degenerate_probe(gap, dim), gap=gap,
                              f_max=objective(0.5 * (a + b)))
