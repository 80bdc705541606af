"""State-counting utilities behind the canonical-ensemble construction."""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma
from typing import Sequence

import numpy as np

from .operators import InvalidInputError


def multiplicity(occupations: Sequence[int]) -> float:
    """ln[N! / (n_1! n_2! ... n_m!)] for integer occupations summing to N."""
    ns = list(occupations)
    if any(n < 0 for n in ns):
        raise InvalidInputError("occupations must be nonnegative")
    if any(int(n) != n for n in ns):
        raise InvalidInputError("occupations must be integers")
    total = int(sum(ns))
    out = lgamma(total + 1.0)
    for n in ns:
        out -= lgamma(int(n) + 1.0)
    return out


@dataclass(frozen=True)
class OccupancyResult:
    fractions: np.ndarray     # n_j / N
    beta: float               # Lagrange multiplier in n_j = mu * exp(beta * e_j)
    residual_energy: float    # relative residual of the energy constraint


def boltzmann_occupancy(levels: Sequence[float], n_total: int, e_total: float,
                        tol: float = 1e-12, max_iter: int = 200) -> OccupancyResult:
    """Most-likely occupation fractions for N subsystems at fixed total energy.

    Maximizes the Stirling-approximated log multiplicity subject to
    sum(n_j) = N and sum(n_j e_j) = E, giving n_j = mu * exp(beta e_j);
    beta is found by bisection on the mean-energy constraint.
    """
    e = np.asarray(levels, dtype=float)
    if e.size < 2:
        raise InvalidInputError("need at least two levels")
    if n_total <= 0:
        raise InvalidInputError("n_total must be positive")
    target = e_total / n_total
    lo, hi = float(np.min(e)), float(np.max(e))
    if not (lo <= target <= hi):
        raise InvalidInputError(
            f"total energy {e_total} unattainable: mean energy must lie in [{lo * n_total}, {hi * n_total}]"
        )

    def mean_energy(beta: float) -> float:
        w = beta * e
        w = w - np.max(w)
        f = np.exp(w)
        f = f / f.sum()
        return float(f @ e)

    # mean_energy is increasing in beta for the +beta*e convention
    b_lo, b_hi = -1.0, 1.0
    span = float(np.ptp(e))
    scale = 1.0 / max(span, 1e-300)
    b_lo, b_hi = -scale, scale
    for _ in range(200):
        if mean_energy(b_lo) <= target:
            break
        b_lo *= 2.0
    for _ in range(200):
        if mean_energy(b_hi) >= target:
            break
        b_hi *= 2.0
    for _ in range(max_iter):
        mid = 0.5 * (b_lo + b_hi)
        if mean_energy(mid) < target:
            b_lo = mid
        else:
            b_hi = mid
        if b_hi - b_lo < tol * max(1.0, abs(mid)):
            break
    beta = 0.5 * (b_lo + b_hi)
    w = beta * e
    w = w - np.max(w)
    fractions = np.exp(w)
    fractions = fractions / fractions.sum()
    resid = abs(float(fractions @ e) - target) / max(abs(target), span)
    return OccupancyResult(fractions=fractions, beta=beta, residual_energy=resid)
