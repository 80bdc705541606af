"""Quantum work statistics: two-time-measurement distributions, the quantum
Jarzynski equality, measurement-free eigenstate work, and the generalized
fluctuation theorem for arbitrary observables under CPTP maps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .qcore import (Channel, DensityState, InvalidInputError, Operator,
                    SpectralDecomposition, density, eig_herm, gibbs_state,
                    max_abs, propagate_unitary, relative_entropy, spectral,
                    unitary_channel)

ATOM_COALESCE_TOL = 1e-9
NORMALIZATION_TOL = 1e-10
PROB_FLOOR = 1e-15


def coalesce_atoms(values: Sequence[float], probs: Sequence[float],
                   tol: float = ATOM_COALESCE_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Merge atoms whose values agree to `tol`; probabilities add."""
    order = np.argsort(values, kind="stable")
    vals = np.asarray(values, dtype=float)[order]
    ps = np.asarray(probs, dtype=float)[order]
    out_v: list[float] = []
    out_p: list[float] = []
    for v, p in zip(vals, ps):
        if out_v and abs(v - out_v[-1]) <= tol:
            out_p[-1] += p
            out_v[-1] = out_v[-1]   # anchor value of the atom stays put
        else:
            out_v.append(float(v))
            out_p.append(float(p))
    return np.array(out_v), np.array(out_p)


@dataclass(frozen=True)
class WorkDistribution:
    """Atomic distribution of a work-like random variable."""

    values: np.ndarray
    probabilities: np.ndarray
    beta: float | None = None
    delta_f: float | None = None
    label: str = ""

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        p = np.asarray(self.probabilities, dtype=float)
        if v.shape != p.shape or v.ndim != 1:
            raise InvalidInputError("values and probabilities must be 1-d and aligned")
        if np.any(p < -1e-12):
            raise InvalidInputError("negative probability atom")
        if abs(p.sum() - 1.0) > NORMALIZATION_TOL:
            raise InvalidInputError(f"atoms sum to {p.sum()}, not 1")
        v.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "probabilities", p)

    def mean(self) -> float:
        return float(self.probabilities @ self.values)

    def exponential_average(self, factor: float) -> float:
        """<exp(factor * W)> over the atoms."""
        return float(self.probabilities @ np.exp(factor * self.values))


def _projective_transition_table(dec_i: SpectralDecomposition,
                                 dec_f: SpectralDecomposition,
                                 rho0: DensityState,
                                 channel: Channel) -> np.ndarray:
    """p[m, n] = tr[ P_n^f  E( P_m^i rho0 P_m^i ) ]."""
    table = np.zeros((len(dec_i.values), len(dec_f.values)))
    for m, proj_m in enumerate(dec_i.projectors):
        branch = proj_m @ rho0.matrix @ proj_m
        weight = np.trace(branch).real
        if weight < PROB_FLOOR:
            continue
        mapped = channel.apply_matrix(branch)
        for n, proj_n in enumerate(dec_f.projectors):
            table[m, n] = max(np.trace(proj_n @ mapped).real, 0.0)
    return table


def ttm_work_distribution(h_of_t: Callable[[float], Operator], beta: float,
                          tau: float, slices: int = 1024,
                          rho0: DensityState | None = None,
                          label: str = "") -> WorkDistribution:
    """Two-time-measurement work distribution for a unitary protocol.

    The initial state defaults to the Gibbs state of H(0); work atoms sit at
    E_n(tau) - E_m(0) with degenerate levels handled by projectors.
    """
    h0, h_tau = h_of_t(0.0), h_of_t(tau)
    dec_i = spectral(h0)
    dec_f = spectral(h_tau)
    g0 = gibbs_state(h0, beta)
    g_tau = gibbs_state(h_tau, beta)
    if rho0 is None:
        rho0 = g0.state
    u = propagate_unitary(h_of_t, tau, slices=slices)
    table = _projective_transition_table(dec_i, dec_f, rho0, unitary_channel(u))
    vals, probs = [], []
    for m, e_m in enumerate(dec_i.values):
        for n, e_n in enumerate(dec_f.values):
            if table[m, n] > 0.0:
                vals.append(e_n - e_m)
                probs.append(table[m, n])
    v, p = coalesce_atoms(vals, probs)
    delta_f = -(g_tau.ln_z - g0.ln_z) / beta
    return WorkDistribution(values=v, probabilities=p, beta=beta,
                            delta_f=delta_f, label=label)


@dataclass(frozen=True)
class JarzynskiCheck:
    lhs: float          # <exp(-beta W)>
    rhs: float          # exp(-beta dF)
    gap: float


def jarzynski_check(dist: WorkDistribution) -> JarzynskiCheck:
    if dist.beta is None or dist.delta_f is None:
        raise InvalidInputError("distribution lacks beta / delta_f metadata")
    lhs = dist.exponential_average(-dist.beta)
    rhs = math.exp(-dist.beta * dist.delta_f)
    return JarzynskiCheck(lhs=lhs, rhs=rhs, gap=abs(lhs - rhs))


@dataclass(frozen=True)
class EigenstateWorkResult:
    distribution: WorkDistribution      # atoms (W_m, p_m)
    lhs: float                          # <exp(-beta W)> over the eigenstate atoms
    rhs: float                          # exp(-beta dF) * exp(-correction)
    correction: float                   # relative entropy of the evolved-eigenbasis guess
    info_free_energy: float             # F_tau + correction / beta
    mean_work: float


def eigenstate_work(h_of_t: Callable[[float], Operator], beta: float, tau: float,
                    slices: int = 1024) -> EigenstateWorkResult:
    """Measurement-free work from time-evolved energy eigenstates.

    W_m = <m| U^dag H_tau U |m> - E_m(0) with Gibbs weights p_m; satisfies
    the modified Jarzynski equality with the best-guess-state correction.
    """
    h0, h_tau = h_of_t(0.0), h_of_t(tau)
    w0, v0 = eig_herm(h0)
    g0 = gibbs_state(h0, beta)
    g_tau = gibbs_state(h_tau, beta)
    u = propagate_unitary(h_of_t, tau, slices=slices)
    evolved = u.matrix @ v0                       # columns U|m>
    theta = np.einsum("im,ij,jm->m", evolved.conj(), h_tau.matrix, evolved).real
    log_w = -beta * w0
    log_w -= log_w.max()
    p_m = np.exp(log_w)
    p_m /= p_m.sum()
    work = theta - w0

    # best-guess thermal state built on the evolved eigenbasis
    log_guess = -beta * theta
    shift = log_guess.max()
    guess_weights = np.exp(log_guess - shift)
    z_tilde_log = math.log(guess_weights.sum()) + shift
    guess_pops = guess_weights / guess_weights.sum()
    rho_tilde = density((evolved * guess_pops) @ evolved.conj().T)
    correction = relative_entropy(rho_tilde, g_tau.state)

    vals, probs = coalesce_atoms(work, p_m)
    delta_f = -(g_tau.ln_z - g0.ln_z) / beta
    dist = WorkDistribution(values=vals, probabilities=probs, beta=beta,
                            delta_f=delta_f, label="eigenstate-work")
    lhs = dist.exponential_average(-beta)
    rhs = math.exp(-beta * delta_f) * math.exp(-correction)
    f_tau = -g_tau.ln_z / beta
    return EigenstateWorkResult(
        distribution=dist, lhs=lhs, rhs=rhs, correction=correction,
        info_free_energy=f_tau + correction / beta,
        mean_work=float(p_m @ work),
    )


@dataclass(frozen=True)
class ObservablePair:
    """Initial/final observables with their spectral decompositions."""

    initial: Operator
    final: Operator
    dec_initial: SpectralDecomposition = field(init=False, repr=False)
    dec_final: SpectralDecomposition = field(init=False, repr=False)

    def __post_init__(self):
        dec_i = spectral(self.initial)
        dec_f = spectral(self.final)
        for dec in (dec_i, dec_f):
            completeness = sum(dec.projectors)
            if max_abs(completeness - np.eye(dec.dim)) > 1e-10:
                raise InvalidInputError("projector completeness violated")
        object.__setattr__(self, "dec_initial", dec_i)
        object.__setattr__(self, "dec_final", dec_f)


@dataclass(frozen=True)
class GeneralizedFtResult:
    distribution: WorkDistribution      # atoms of Delta omega
    lhs: float                          # <exp(-Delta omega)>
    efficacy: float                     # tr[exp(-Omega_f) E(M_i(rho0) exp(Omega_i))]
    gap: float


def first_measurement_average(pair: ObservablePair, rho0: DensityState) -> np.ndarray:
    out = np.zeros_like(rho0.matrix)
    for proj in pair.dec_initial.projectors:
        out += proj @ rho0.matrix @ proj
    return out


def generalized_ft(pair: ObservablePair, rho0: DensityState,
                   channel: Channel) -> GeneralizedFtResult:
    """Exponential identity <exp(-dOmega)> = quantum efficacy, verified exactly."""
    if pair.initial.dim != rho0.dim or channel.dim != rho0.dim:
        raise InvalidInputError("dimension mismatch between pair, state, and channel")
    table = _projective_transition_table(pair.dec_initial, pair.dec_final,
                                         rho0, channel)
    vals, probs = [], []
    for m, w_m in enumerate(pair.dec_initial.values):
        for n, w_n in enumerate(pair.dec_final.values):
            if table[m, n] > 0.0:
                vals.append(w_n - w_m)
                probs.append(table[m, n])
    v, p = coalesce_atoms(vals, probs)
    dist = WorkDistribution(values=v, probabilities=p, label="generalized-ft")
    lhs = dist.exponential_average(-1.0)

    exp_plus_i = pair.dec_initial.function(np.exp)
    exp_minus_f = pair.dec_final.function(lambda x: np.exp(-x))
    m_avg = first_measurement_average(pair, rho0)
    efficacy = float(np.trace(exp_minus_f @ channel.apply_matrix(m_avg @ exp_plus_i)).real)
    return GeneralizedFtResult(distribution=dist, lhs=lhs, efficacy=efficacy,
                               gap=abs(lhs - efficacy))
