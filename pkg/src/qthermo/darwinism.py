"""Spin-star pure dephasing and the mutual-information redundancy plateau.

The joint state keeps the two-branch form
    alpha |up> (x)_i |e_up(t)>  +  beta |down> (x)_i |e_down(t)>,
so every marginal has rank <= 2 and its entropy follows from a 2x2 Gram
matrix; N up to 20 is cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qcore import InvalidInputError

MAX_ENV = 20


@dataclass(frozen=True)
class SpinStarSpec:
    n_env: int
    coupling: float
    alpha: float
    beta: float
    time: float

    def __post_init__(self):
        if not (1 <= self.n_env <= MAX_ENV):
            raise InvalidInputError(f"environment size must be in [1, {MAX_ENV}]")
        if abs(self.alpha**2 + self.beta**2 - 1.0) > 1e-12:
            raise InvalidInputError("amplitudes must satisfy alpha^2 + beta^2 = 1")


def branch_env_qubits(spec: SpinStarSpec) -> tuple[np.ndarray, np.ndarray]:
    """Single-qubit environment branch states for the up/down system branches."""
    phase = spec.coupling * spec.time
    up = np.array([np.exp(-1j * phase), np.exp(1j * phase)]) / math.sqrt(2.0)
    down = np.array([np.exp(1j * phase), np.exp(-1j * phase)]) / math.sqrt(2.0)
    return up, down


def evolve_spin_star(spec: SpinStarSpec) -> np.ndarray:
    """Joint pure state (statevector of dimension 2^(N+1), system first)."""
    up, down = branch_env_qubits(spec)
    env_up = np.array([1.0 + 0j])
    env_down = np.array([1.0 + 0j])
    for _ in range(spec.n_env):
        env_up = np.kron(env_up, up)
        env_down = np.kron(env_down, down)
    dim_env = env_up.size
    psi = np.zeros(2 * dim_env, dtype=complex)
    psi[:dim_env] = spec.alpha * env_up
    psi[dim_env:] = spec.beta * env_down
    return psi


def reduced_system(spec: SpinStarSpec) -> np.ndarray:
    """2x2 system state in the pointer basis."""
    c = math.cos(2.0 * spec.coupling * spec.time) ** spec.n_env
    a2 = spec.alpha**2
    off = spec.alpha * spec.beta * c
    return np.array([[a2, off], [off, 1.0 - a2]], dtype=complex)


def reduced_env_qubit(spec: SpinStarSpec) -> np.ndarray:
    """Any single environment qubit in the computational basis."""
    up, down = branch_env_qubits(spec)
    # no cross terms: the two system branches are orthogonal
    return spec.alpha**2 * np.outer(up, up.conj()) \
        + spec.beta**2 * np.outer(down, down.conj())


def _two_branch_entropy(w_a: float, w_b: float, overlap: float) -> float:
    """Entropy of w_a |u><u| + w_b |v><v| with |<u|v>| = overlap."""
    disc = math.sqrt(max((w_a - w_b) ** 2 + 4.0 * w_a * w_b * overlap**2, 0.0))
    lam = [(w_a + w_b + disc) / 2.0, (w_a + w_b - disc) / 2.0]
    s = 0.0
    for p in lam:
        if p > 1e-300:
            s -= p * math.log(p)
    return s


def system_entropy(spec: SpinStarSpec) -> float:
    c = math.cos(2.0 * spec.coupling * spec.time) ** spec.n_env
    return _two_branch_entropy(spec.alpha**2, spec.beta**2, abs(c))


def mutual_information_fraction(spec: SpinStarSpec, n_frag: int) -> float:
    """I(S : E_f) for a fragment of n_frag environment qubits."""
    if not 0 <= n_frag <= spec.n_env:
        raise InvalidInputError("fragment size out of range")
    if n_frag == 0:
        return 0.0
    c1 = abs(math.cos(2.0 * spec.coupling * spec.time))
    a2, b2 = spec.alpha**2, spec.beta**2
    s_sys = _two_branch_entropy(a2, b2, c1**spec.n_env)
    s_frag = _two_branch_entropy(a2, b2, c1**n_frag)
    # the S:E_f block is two orthogonal branches with the traced-out
    # complement contributing the remaining overlap power; n_frag = N gives
    # overlap 1 and hence the purity of the full joint state
    s_joint = _two_branch_entropy(a2, b2, c1 ** (spec.n_env - n_frag))
    return s_sys + s_frag - s_joint


def mutual_info_curve(spec: SpinStarSpec, fragment_sizes=None) -> dict:
    if fragment_sizes is None:
        fragment_sizes = range(spec.n_env + 1)
    fractions, infos = [], []
    for n in fragment_sizes:
        fractions.append(n / spec.n_env)
        infos.append(mutual_information_fraction(spec, int(n)))
    return {
        "fractions": np.array(fractions),
        "mutual_information": np.array(infos),
        "system_entropy": system_entropy(spec),
    }
