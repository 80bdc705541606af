"""Kraus channels and a few standard single-qubit families."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .operators import (DensityState, InvalidInputError, Operator, density,
                        max_abs)

CPTP_TOL = 1e-10


@dataclass(frozen=True)
class Channel:
    """A completely positive trace-preserving map given by Kraus operators."""

    kraus: tuple[Operator, ...]

    def __post_init__(self):
        if not self.kraus:
            raise InvalidInputError("channel needs at least one Kraus operator")
        dim = self.kraus[0].dim
        if any(k.dim != dim for k in self.kraus):
            raise InvalidInputError("all Kraus operators must share one dimension")
        acc = sum(k.matrix.conj().T @ k.matrix for k in self.kraus)
        if max_abs(acc - np.eye(dim)) > CPTP_TOL:
            raise InvalidInputError("Kraus completeness violated: channel is not trace preserving")
        object.__setattr__(self, "kraus", tuple(self.kraus))

    @property
    def dim(self) -> int:
        return self.kraus[0].dim

    @property
    def unital(self) -> bool:
        acc = sum(k.matrix @ k.matrix.conj().T for k in self.kraus)
        return max_abs(acc - np.eye(self.dim)) <= CPTP_TOL

    def apply(self, rho: DensityState | np.ndarray) -> DensityState:
        mat = rho.matrix if isinstance(rho, DensityState) else np.asarray(rho, dtype=complex)
        out = sum(k.matrix @ mat @ k.matrix.conj().T for k in self.kraus)
        return density(0.5 * (out + out.conj().T))

    def apply_matrix(self, mat: np.ndarray) -> np.ndarray:
        """Apply to an arbitrary (not necessarily unit-trace) matrix."""
        return sum(k.matrix @ mat @ k.matrix.conj().T for k in self.kraus)


def unitary_channel(u: Operator) -> Channel:
    return Channel((u,))


def dephasing_channel(p: float) -> Channel:
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError("dephasing strength must lie in [0, 1]")
    k0 = np.sqrt(1.0 - p) * np.eye(2)
    k1 = np.sqrt(p) * np.diag([1.0, 0.0])
    k2 = np.sqrt(p) * np.diag([0.0, 1.0])
    return Channel((Operator(k0), Operator(k1), Operator(k2)))


def amplitude_damping_channel(p: float) -> Channel:
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError("damping strength must lie in [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - p)]])
    k1 = np.array([[0.0, np.sqrt(p)], [0.0, 0.0]])
    return Channel((Operator(k0), Operator(k1)))


def depolarizing_channel(p: float) -> Channel:
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError("depolarizing strength must lie in [0, 1]")
    eye = np.eye(2, dtype=complex)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    ops = [np.sqrt(1 - 3 * p / 4) * eye, np.sqrt(p / 4) * sx,
           np.sqrt(p / 4) * sy, np.sqrt(p / 4) * sz]
    return Channel(tuple(Operator(k) for k in ops))


def random_channel(dim: int, n_kraus: int, rng: np.random.Generator) -> Channel:
    """Haar-ish random CPTP map from a random isometry."""
    g = rng.normal(size=(dim * n_kraus, dim)) + 1j * rng.normal(size=(dim * n_kraus, dim))
    q, _ = np.linalg.qr(g)
    kraus = tuple(Operator(q[i * dim:(i + 1) * dim, :]) for i in range(n_kraus))
    return Channel(kraus)


def compose(first: Channel, then: Channel) -> Channel:
    ops = tuple(Operator(b.matrix @ a.matrix) for a in first.kraus for b in then.kraus)
    return Channel(ops)


def kraus_from_sequence(mats: Sequence[np.ndarray]) -> Channel:
    return Channel(tuple(Operator(m) for m in mats))
