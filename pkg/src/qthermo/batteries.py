"""Passivity, ergotropy, multi-copy extraction, and charging speed limits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qcore import (DensityState, InvalidInputError, Operator, density,
                    eig_herm, max_abs, partial_trace, vn_entropy)

COMMUTATION_TOL = 1e-10
POPULATION_TIE_TOL = 1e-12
BEATS_TOL = 1e-12
DEFAULT_DIM_CAP = 1024


@dataclass(frozen=True)
class BatterySpec:
    """Nondegenerate battery Hamiltonian given by its ascending levels."""

    energies: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        if e.ndim != 1 or e.size < 2:
            raise InvalidInputError("battery needs at least two levels")
        if np.any(np.diff(e) <= 0.0):
            raise InvalidInputError("battery levels must be strictly increasing")
        e.setflags(write=False)
        object.__setattr__(self, "energies", e)

    @property
    def dim(self) -> int:
        return self.energies.size

    def hamiltonian(self) -> Operator:
        return Operator(np.diag(self.energies).astype(complex), hermitian=True)


def _energy_sorted_populations(rho: DensityState, hamiltonian: Operator):
    """Populations of rho in the energy eigenbasis plus the off-diagonal norm."""
    w, v = eig_herm(hamiltonian)
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    in_basis = v.conj().T @ rho.matrix @ v
    pops = np.diag(in_basis).real
    off = max_abs(in_basis - np.diag(np.diag(in_basis)))
    return w, pops, off


def is_passive(rho: DensityState, hamiltonian: Operator) -> bool:
    """True iff rho commutes with H and its populations decrease with energy."""
    if rho.dim != hamiltonian.dim:
        raise InvalidInputError("state and Hamiltonian dimensions differ")
    energies, pops, off = _energy_sorted_populations(rho, hamiltonian)
    if off > COMMUTATION_TOL:
        return False
    for i in range(len(pops) - 1):
        # ties in energy make the ordering inside the block irrelevant
        if energies[i + 1] - energies[i] < 1e-12:
            continue
        if pops[i + 1] > pops[i] + POPULATION_TIE_TOL:
            return False
    return True


def _swap_sequence(perm: np.ndarray) -> list[tuple[int, int]]:
    """Decompose the permutation into transpositions (cycle-wise, canonical)."""
    perm = list(perm)
    seen = [False] * len(perm)
    swaps: list[tuple[int, int]] = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cycle = [start]
        seen[start] = True
        nxt = perm[start]
        while nxt != start:
            cycle.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt]
        for k in range(1, len(cycle)):
            swaps.append((int(cycle[0]), int(cycle[k])))
    return swaps


@dataclass(frozen=True)
class ExtractionReport:
    ergotropy: float
    initial_energy: float
    passive_energy: float
    final_populations: np.ndarray       # in ascending-energy order
    swap_sequence: list[tuple[int, int]]
    passive_state: DensityState
    beats_classical: bool | None = None
    mutual_information: float | None = None


def ergotropy(rho: DensityState, hamiltonian: Operator) -> ExtractionReport:
    """Maximal cyclic-unitary work: populations sorted down against the spectrum."""
    if rho.dim != hamiltonian.dim:
        raise InvalidInputError("state and Hamiltonian dimensions differ")
    w, v = eig_herm(hamiltonian)
    order = np.argsort(w, kind="stable")
    energies = w[order]
    basis = v[:, order]
    p = np.clip(rho.eigenvalues, 0.0, None)     # ascending from eigh
    p_desc = p[::-1].copy()
    initial = float(np.trace(rho.matrix @ hamiltonian.matrix).real)
    passive_energy = float(p_desc @ energies)
    work = initial - passive_energy
    passive_mat = (basis * p_desc) @ basis.conj().T
    passive = density(0.5 * (passive_mat + passive_mat.conj().T))

    # swap sequence in the energy-ordered basis: where each initial
    # population (read off in energy order) must go to reach passive order
    _, pops_in_energy_basis, _ = _energy_sorted_populations(rho, hamiltonian)
    # stable argsort on (-p, index) canonicalizes ties deterministically
    target_of = np.empty(len(p), dtype=int)
    target_of[np.argsort(-pops_in_energy_basis, kind="stable")] = np.arange(len(p))
    swaps = _swap_sequence(target_of)

    return ExtractionReport(
        ergotropy=max(work, 0.0) if abs(work) < 1e-14 else work,
        initial_energy=initial,
        passive_energy=passive_energy,
        final_populations=p_desc,
        swap_sequence=swaps,
        passive_state=passive,
    )


def _product_diagonal(populations: np.ndarray, copies: int) -> np.ndarray:
    out = populations
    for _ in range(copies - 1):
        out = np.outer(out, populations).reshape(-1)
    return out


def _sum_hamiltonian_diagonal(energies: np.ndarray, copies: int) -> np.ndarray:
    grids = np.meshgrid(*([energies] * copies), indexing="ij")
    return sum(grids).reshape(-1)


@dataclass(frozen=True)
class MultiCopyResult:
    w_classical: float
    w_global: float
    beats_classical: bool
    p1_threshold: float | None
    single_copy: ExtractionReport


def multi_copy_strategies(spec: BatterySpec, populations: Sequence[float],
                          copies: int, dim_cap: int = DEFAULT_DIM_CAP) -> MultiCopyResult:
    """Local (per-battery) vs global extraction from `copies` identical batteries."""
    if copies not in (2, 3):
        raise InvalidInputError("copies must be 2 or 3")
    if spec.dim**copies > dim_cap:
        raise InvalidInputError(
            f"joint dimension {spec.dim**copies} exceeds the configured cap {dim_cap}")
    p = np.asarray(populations, dtype=float)
    if p.shape != (spec.dim,) or np.any(p < 0.0) or abs(p.sum() - 1.0) > 1e-10:
        raise InvalidInputError("populations must be a distribution over the levels")

    single = ergotropy(density(np.diag(p)), spec.hamiltonian())
    w_classical = copies * single.ergotropy

    joint_p = _product_diagonal(p, copies)
    joint_e = _sum_hamiltonian_diagonal(spec.energies, copies)
    # global passive rearrangement on the diagonal joint state
    order_e = np.argsort(joint_e, kind="stable")
    p_desc = np.sort(joint_p)[::-1]
    w_global = float(joint_p @ joint_e - p_desc @ joint_e[order_e])

    threshold = None
    if spec.dim == 3:
        threshold = math.sqrt(p[0] * p[2])
    return MultiCopyResult(
        w_classical=w_classical,
        w_global=w_global,
        beats_classical=bool(w_global - w_classical > BEATS_TOL),
        p1_threshold=threshold,
        single_copy=single,
    )


def final_state_correlations(spec: BatterySpec, populations: Sequence[float],
                             copies: int = 2, dim_cap: int = DEFAULT_DIM_CAP) -> dict:
    """Mutual information of the globally passive final multi-battery state."""
    if copies != 2:
        raise InvalidInputError("correlation report is defined for two copies")
    res = multi_copy_strategies(spec, populations, copies, dim_cap=dim_cap)
    p = np.asarray(populations, dtype=float)
    joint_p = _product_diagonal(p, copies)
    joint_e = _sum_hamiltonian_diagonal(spec.energies, copies)
    order_e = np.argsort(joint_e, kind="stable")
    final_diag = np.empty_like(joint_p)
    final_diag[order_e] = np.sort(joint_p)[::-1]
    joint = density(np.diag(final_diag))
    dims = [spec.dim] * copies
    rho_1 = partial_trace(joint, dims, [0])
    rho_2 = partial_trace(joint, dims, [1])
    mi = vn_entropy(rho_1) + vn_entropy(rho_2) - vn_entropy(joint)
    return {
        "mutual_information": max(mi, 0.0),
        "beats_classical": res.beats_classical,
        "w_classical": res.w_classical,
        "w_global": res.w_global,
        "final_diagonal": final_diag,
    }


@dataclass(frozen=True)
class ChargingTimes:
    tau_qsl: float
    tau_parallel: float
    tau_optimal: float


def charging_times(copies: int, e_max: float, energy: float | None = None,
                   spread: float | None = None) -> ChargingTimes:
    """Quantum-speed-limit charging times under a bounded generator norm."""
    if copies < 1 or e_max <= 0.0:
        raise InvalidInputError("need copies >= 1 and e_max > 0")
    if energy is None:
        energy = e_max
    if spread is None:
        spread = e_max
    if energy <= 0.0 or spread <= 0.0:
        raise InvalidInputError("energy scales must be positive")
    return ChargingTimes(
        tau_qsl=math.pi / (2.0 * min(energy, spread)),
        tau_parallel=copies * math.pi / (2.0 * e_max),
        tau_optimal=math.pi / (2.0 * e_max),
    )


def collective_charging_hamiltonian(spec: BatterySpec, copies: int,
                                    e_max: float) -> Operator:
    """E_max (|0...0><d-1...d-1| + h.c.) on the `copies`-battery space."""
    dim = spec.dim**copies
    mat = np.zeros((dim, dim), dtype=complex)
    mat[0, dim - 1] = e_max
    mat[dim - 1, 0] = e_max
    return Operator(mat, hermitian=True)
