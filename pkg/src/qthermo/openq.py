"""Open-system thermodynamics: thermal-qubit dynamics with an entropy ledger,
Spohn's inequality, driven entropy production, and entropy production as
system-environment correlation.

Heat sign convention: Q > 0 means heat flowing INTO the system; boundaries
that use the opposite convention translate explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .qcore import (DensityState, InvalidInputError, Operator, density,
                    embed, funm_herm, gibbs_state, hermitian_op,
                    lindblad_evolve, lindblad_rhs, max_abs,
                    mutual_information, partial_trace, relative_entropy,
                    sigma_minus, sigma_plus, sigma_z, vn_entropy)

DIM_CAP = 2**10
INVARIANCE_TOL = 1e-8


@dataclass(frozen=True)
class ThermalQubitSpec:
    """Qubit of frequency omega_s damped by emission gamma and absorption big_gamma."""

    omega_s: float
    gamma: float          # emission rate (sigma_-)
    big_gamma: float      # absorption rate (sigma_+)
    drive: Callable[[float], Operator] | None = None

    def __post_init__(self):
        if self.gamma < 0.0 or self.big_gamma < 0.0 or self.gamma + self.big_gamma == 0.0:
            raise InvalidInputError("rates must be nonnegative and not both zero")
        if self.omega_s <= 0.0:
            raise InvalidInputError("omega_s must be positive")

    @property
    def bath_beta(self) -> float:
        """Inverse bath temperature from the rate ratio (negative for inversion)."""
        return math.log(self.gamma / self.big_gamma) / (2.0 * self.omega_s)

    def hamiltonian(self, t: float = 0.0) -> Operator:
        h = self.omega_s * sigma_z.matrix
        if self.drive is not None:
            h = h + self.drive(t).matrix
        return hermitian_op(h)

    def bath_state(self) -> DensityState:
        return gibbs_state(hermitian_op(self.omega_s * sigma_z.matrix),
                           self.bath_beta).state


def _log_density(rho: DensityState, floor: float = 1e-300) -> np.ndarray:
    w = np.clip(rho.eigenvalues, floor, None)
    v = rho.eigenvectors
    return (v * np.log(w)) @ v.conj().T


@dataclass(frozen=True)
class EpLedger:
    times: np.ndarray
    entropy: np.ndarray            # S(rho(t))
    heat: np.ndarray               # integrated Q into the system
    work: np.ndarray               # integrated driving work
    entropy_production: np.ndarray  # dS - beta Q
    sigma_rate: np.ndarray         # -d/dt S(rho || rho_beta)
    spohn_rate: np.ndarray


@dataclass(frozen=True)
class ThermalQubitResult:
    path: object
    ledger: EpLedger
    bath_beta: float


def thermal_qubit_evolve(spec: ThermalQubitSpec, rho0: DensityState, tau: float,
                         steps: int = 800) -> ThermalQubitResult:
    """Lindblad path of the damped qubit plus its entropy-production ledger."""
    jumps = [(sigma_minus, spec.gamma), (sigma_plus, spec.big_gamma)]
    h_of_t = (lambda t: spec.hamiltonian(t))
    path = lindblad_evolve(h_of_t, jumps, rho0, tau, steps=steps)
    beta = spec.bath_beta
    rho_beta = spec.bath_state()
    ln_rho_beta = _log_density(rho_beta)

    jump_mats = [sigma_minus.matrix, sigma_plus.matrix]
    rates = [spec.gamma, spec.big_gamma]
    n = len(path.times)
    entropy = np.empty(n)
    q_rate = np.empty(n)
    w_rate = np.empty(n)
    sigma_rate = np.empty(n)
    spohn = np.empty(n)
    for k, (t, state) in enumerate(zip(path.times, path.states)):
        h = spec.hamiltonian(t).matrix
        gen = lindblad_rhs(h, jump_mats, rates, state.matrix)
        entropy[k] = vn_entropy(state)
        q_rate[k] = float(np.trace(h @ gen).real)
        if spec.drive is None:
            w_rate[k] = 0.0
        else:
            dt = max(path.times[1] - path.times[0], 1e-9)
            h_dot = (spec.hamiltonian(min(t + dt, tau)).matrix
                     - spec.hamiltonian(max(t - dt, 0.0)).matrix) \
                / (min(t + dt, tau) - max(t - dt, 0.0))
            w_rate[k] = float(np.trace(h_dot @ state.matrix).real)
        # dissipative part of the generator drives the entropy rates
        ln_rho = _log_density(state)
        diss = lindblad_rhs(np.zeros_like(h), jump_mats, rates, state.matrix)
        sigma_rate[k] = float(np.trace(diss @ (ln_rho_beta - ln_rho)).real)
        spohn[k] = sigma_rate[k]

    from scipy.integrate import cumulative_simpson
    heat = cumulative_simpson(q_rate, x=path.times, initial=0.0)
    work = cumulative_simpson(w_rate, x=path.times, initial=0.0)
    ep = (entropy - entropy[0]) - beta * heat
    ledger = EpLedger(times=path.times, entropy=entropy, heat=heat, work=work,
                      entropy_production=ep, sigma_rate=sigma_rate,
                      spohn_rate=spohn)
    return ThermalQubitResult(path=path, ledger=ledger, bath_beta=beta)


class LindbladGenerator:
    """L(rho) for a fixed Hamiltonian and jump list."""

    def __init__(self, hamiltonian: Operator, jumps: Sequence[tuple[Operator, float]]):
        self.h = hamiltonian.matrix
        self.jump_mats = [op.matrix for op, _ in jumps]
        self.rates = [r for _, r in jumps]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return lindblad_rhs(self.h, self.jump_mats, self.rates, rho)


def spohn_rate(generator: LindbladGenerator, rho: DensityState,
               invariant: DensityState) -> float:
    """sigma_bar = tr[L(rho) (ln rho_bar - ln rho)] >= 0 for divisible dynamics."""
    resid = max_abs(generator.apply(invariant.matrix))
    if resid > INVARIANCE_TOL:
        raise InvalidInputError(
            f"claimed invariant state has generator residual {resid:.2e}")
    ln_bar = _log_density(invariant)
    ln_rho = _log_density(rho)
    return float(np.trace(generator.apply(rho.matrix) @ (ln_bar - ln_rho)).real)


# ---------------------------------------------------------------------------
# Driven entropy production along a slow control path
# ---------------------------------------------------------------------------

def _d_log_gibbs(h_of_lambda: Callable[[float], Operator], beta: float,
                 lam: float, step: float) -> np.ndarray:
    """d/d_lambda ln rho_eq(lambda) by Richardson-refined central differences."""
    def log_eq(x: float) -> np.ndarray:
        return _log_density(gibbs_state(h_of_lambda(x), beta).state)

    d1 = (log_eq(lam + step) - log_eq(lam - step)) / (2.0 * step)
    d2 = (log_eq(lam + 0.5 * step) - log_eq(lam - 0.5 * step)) / step
    return (4.0 * d2 - d1) / 3.0


@dataclass(frozen=True)
class DrivenEpResult:
    entropy_production: float
    endpoint_term: float
    integral_term: float
    cross_check: float          # dH - beta dE + beta W assembled independently
    nodes_used: int


def driven_entropy_production(rho_ss: Callable[[float], DensityState],
                              h_of_lambda: Callable[[float], Operator],
                              beta: float, lam_start: float, lam_end: float,
                              nodes: int = 16, tol: float = 1e-8,
                              fd_step: float | None = None) -> DrivenEpResult:
    """Mean entropy production for a driven steady-state path.

    Gauss-Legendre quadrature of -tr[rho_ss d_lambda ln rho_eq] with node
    doubling until two consecutive estimates agree to `tol`; the result is
    cross-checked against the dH - beta dE + beta W assembly.
    """
    span = lam_end - lam_start
    if fd_step is None:
        fd_step = 1e-4 * max(abs(span), 1.0)

    def quad(fn, n: int) -> float:
        x, w = leggauss(n)
        lam = lam_start + 0.5 * span * (x + 1.0)
        return 0.5 * span * float(sum(wi * fn(li) for wi, li in zip(w, lam)))

    def integrand(lam: float) -> float:
        dlog = _d_log_gibbs(h_of_lambda, beta, lam, fd_step)
        return float(np.trace(rho_ss(lam).matrix @ dlog).real)

    est_prev = quad(integrand, nodes)
    n = nodes
    while True:
        n *= 2
        est = quad(integrand, n)
        if abs(est - est_prev) <= tol * max(1.0, abs(est)):
            break
        if n > 2048:
            raise RuntimeError(
                f"quadrature did not converge: last estimates {est_prev}, {est}")
        est_prev = est
    integral = est

    g0 = gibbs_state(h_of_lambda(lam_start), beta)
    g1 = gibbs_state(h_of_lambda(lam_end), beta)
    s0 = relative_entropy(rho_ss(lam_start), g0.state)
    s1 = relative_entropy(rho_ss(lam_end), g1.state)
    total = s0 - s1 - integral

    # independent route: Sigma = dH - beta dE + beta W
    def dh_dlambda(lam: float) -> np.ndarray:
        hp = h_of_lambda(lam + fd_step).matrix
        hm = h_of_lambda(lam - fd_step).matrix
        return (hp - hm) / (2.0 * fd_step)

    def work_integrand(lam: float) -> float:
        return float(np.trace(rho_ss(lam).matrix @ dh_dlambda(lam)).real)

    w_mean = quad(work_integrand, n)
    dh_entropy = vn_entropy(rho_ss(lam_end)) - vn_entropy(rho_ss(lam_start))
    de = rho_ss(lam_end).expectation(h_of_lambda(lam_end)) \
        - rho_ss(lam_start).expectation(h_of_lambda(lam_start))
    cross = dh_entropy - beta * de + beta * w_mean
    return DrivenEpResult(entropy_production=total, endpoint_term=s0 - s1,
                          integral_term=integral, cross_check=cross,
                          nodes_used=n)


# ---------------------------------------------------------------------------
# Entropy production as system-environment correlation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrelationEpResult:
    d_entropy_system: float       # S_S(t) - S_S(0)
    irreversible: float           # S(rho_t || rho_S(t) x rho_E(0))
    reversible: float             # sum_i beta_i Q_i (Q into the system)
    mutual_information: float
    env_relative_entropy: float   # S(rho_E(t) || rho_E(0))
    residual: float               # decomposition identity defect
    heats: np.ndarray


def ep_as_correlation(h_system: Operator, env_hamiltonians: Sequence[Operator],
                      h_interaction: Operator, rho_s0: DensityState,
                      betas: Sequence[float], tau: float,
                      dim_cap: int = DIM_CAP) -> CorrelationEpResult:
    """Exact joint-unitary entropy bookkeeping for a finite environment."""
    dims = [h_system.dim] + [h.dim for h in env_hamiltonians]
    total_dim = int(np.prod(dims))
    if total_dim > dim_cap:
        raise InvalidInputError(f"joint dimension {total_dim} exceeds cap {dim_cap}")
    if len(betas) != len(env_hamiltonians):
        raise InvalidInputError("one beta per environment unit")

    h_total = embed(h_system, 0, dims).matrix.astype(complex)
    for i, h_env in enumerate(env_hamiltonians):
        h_total = h_total + embed(h_env, i + 1, dims).matrix
    h_total = h_total + h_interaction.matrix

    env_states = [gibbs_state(h, b).state for h, b in zip(env_hamiltonians, betas)]
    rho0 = rho_s0.matrix
    for st in env_states:
        rho0 = np.kron(rho0, st.matrix)
    u = funm_herm(hermitian_op(h_total), lambda w: np.exp(-1j * tau * w))
    rho_t = density(u @ rho0 @ u.conj().T)
    rho0 = density(rho0)

    rho_s_t = partial_trace(rho_t, dims, [0])
    env_indices = list(range(1, len(dims)))
    rho_e_t = partial_trace(rho_t, dims, env_indices)
    rho_e_0 = partial_trace(rho0, dims, env_indices)

    d_s = vn_entropy(rho_s_t) - vn_entropy(rho_s0)
    heats = np.array([
        env_states[i].expectation(env_hamiltonians[i])
        - partial_trace(rho_t, dims, [i + 1]).expectation(env_hamiltonians[i])
        for i in range(len(env_hamiltonians))
    ])
    reversible = float(np.dot(betas, heats))
    product = density(np.kron(rho_s_t.matrix, rho_e_0.matrix))
    irreversible = relative_entropy(rho_t, product)
    mi = mutual_information(rho_t, rho_s_t, rho_e_t)
    env_rel = relative_entropy(rho_e_t, rho_e_0)
    residual = abs(d_s - irreversible - reversible)
    return CorrelationEpResult(
        d_entropy_system=d_s, irreversible=irreversible, reversible=reversible,
        mutual_information=mi, env_relative_entropy=env_rel,
        residual=residual, heats=heats,
    )
