"""Erasure bounds: the non-equilibrium Landauer equality and the
full-counting-statistics family of lower bounds on dissipated heat.

Conventions here follow the erasure literature: entropy changes are
initial minus final, and Q_E > 0 is heat dumped INTO the environment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .fluctuation import coalesce_atoms
from .qcore import (DensityState, InvalidInputError, Operator, density, embed,
                    funm_herm, gibbs_state, hermitian_op, max_abs,
                    mutual_information, partial_trace, relative_entropy,
                    spectral, vn_entropy)


class AssumptionViolation(ValueError):
    """A Reeb-Wolf assumption needed for the erasure bound does not hold."""


@dataclass(frozen=True)
class ErasureModel:
    """System + thermal environment with a joint unitary family U(t)."""

    dim_system: int
    h_env: Operator
    beta: float
    rho_s0: DensityState
    unitary: Callable[[float], Operator]
    joint_rho0: DensityState | None = None

    def __post_init__(self):
        if self.rho_s0.dim != self.dim_system:
            raise AssumptionViolation("system state dimension mismatch")
        if self.joint_rho0 is not None:
            expect = np.kron(self.rho_s0.matrix, self.env_state().matrix)
            if max_abs(self.joint_rho0.matrix - expect) > 1e-10:
                raise AssumptionViolation(
                    "assumption 2/3 violated: initial joint state must be "
                    "rho_S (x) thermal environment (factorized, Gibbs bath)")

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_system, self.h_env.dim)

    def env_state(self) -> DensityState:
        return gibbs_state(self.h_env, self.beta).state

    def initial_state(self) -> DensityState:
        return density(np.kron(self.rho_s0.matrix, self.env_state().matrix))

    def evolved(self, t: float) -> DensityState:
        u = self.unitary(t).matrix
        joint_dim = self.dim_system * self.h_env.dim
        if u.shape != (joint_dim, joint_dim):
            raise AssumptionViolation(
                "assumption 4 violated: U(t) must act on the joint space")
        if max_abs(u @ u.conj().T - np.eye(joint_dim)) > 1e-9:
            raise AssumptionViolation("assumption 4 violated: U(t) is not unitary")
        rho0 = self.initial_state().matrix
        return density(u @ rho0 @ u.conj().T)


@dataclass(frozen=True)
class LandauerEqualityResult:
    beta_heat: float              # beta <Q_E>
    d_entropy_system: float       # S(rho_S^0) - S(rho_S^t)
    mutual_information: float
    env_relative_entropy: float
    residual: float


def landauer_equality(model: ErasureModel, t: float) -> LandauerEqualityResult:
    dims = model.dims
    rho_t = model.evolved(t)
    rho_s_t = partial_trace(rho_t, dims, [0])
    rho_e_t = partial_trace(rho_t, dims, [1])
    rho_e_0 = model.env_state()
    heat = rho_e_t.expectation(model.h_env) - rho_e_0.expectation(model.h_env)
    d_s = vn_entropy(model.rho_s0) - vn_entropy(rho_s_t)
    mi = mutual_information(rho_t, rho_s_t, rho_e_t)
    rel = relative_entropy(rho_e_t, rho_e_0)
    residual = abs(model.beta * heat - (d_s + mi + rel))
    return LandauerEqualityResult(beta_heat=model.beta * heat, d_entropy_system=d_s,
                                  mutual_information=mi, env_relative_entropy=rel,
                                  residual=residual)


@dataclass(frozen=True)
class FcsReport:
    eta: np.ndarray
    theta: np.ndarray
    bounds: np.ndarray            # B^eta = -(beta/eta) Theta(eta)
    heat_values: np.ndarray       # atoms of Q_E
    heat_probs: np.ndarray
    mean_heat: float
    heat_second_cumulant: float
    mean_heat_from_theta: float   # central-difference check of -dTheta/deta at 0
    max_bound: float
    beta_mean_heat: float


def default_eta_grid(beta: float, n: int = 16) -> np.ndarray:
    return np.geomspace(1e-2, 1e2, n) * abs(beta)


def heat_distribution(model: ErasureModel, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Two-point environment-energy statistics of the exact joint evolution."""
    dims = model.dims
    dec = spectral(model.h_env)
    projectors = [embed(Operator(p, hermitian=True), 1, dims).matrix
                  for p in dec.projectors]
    u = model.unitary(t).matrix
    rho0 = np.kron(model.rho_s0.matrix, model.env_state().matrix)
    vals, probs = [], []
    for n_idx, proj_n in enumerate(projectors):
        branch = proj_n @ rho0 @ proj_n
        if np.trace(branch).real < 1e-15:
            continue
        moved = u @ branch @ u.conj().T
        for m_idx, proj_m in enumerate(projectors):
            p = float(np.trace(proj_m @ moved).real)
            # floor at the matrix-algebra noise scale: amplitudes ~eps
            # square to ~1e-32 probabilities that are exact zeros
            if p > 1e-14:
                vals.append(dec.values[m_idx] - dec.values[n_idx])
                probs.append(p)
    v, p = coalesce_atoms(vals, probs)
    return v, p / p.sum()


def fcs_report(model: ErasureModel, t: float,
               eta_grid: Sequence[float] | None = None) -> FcsReport:
    """Cumulant generating function Theta(eta) = ln <exp(-eta Q_E)> and the
    one-parameter family of lower bounds on the dissipated heat."""
    if eta_grid is None:
        eta_grid = default_eta_grid(model.beta)
    eta = np.asarray(eta_grid, dtype=float)
    if np.any(eta <= 0.0):
        raise InvalidInputError("eta grid must be positive")
    q_vals, q_probs = heat_distribution(model, t)

    def theta(x: float) -> float:
        # stable log-sum-exp over the atoms
        expo = -x * q_vals + np.log(np.clip(q_probs, 1e-300, None))
        m = expo.max()
        return m + math.log(np.exp(expo - m).sum())

    th = np.array([theta(x) for x in eta])
    bounds = -(model.beta / eta) * th
    mean_q = float(q_probs @ q_vals)
    var_q = float(q_probs @ (q_vals - mean_q) ** 2)
    h = 1e-6 * max(abs(model.beta), 1.0)
    mean_from_theta = -(theta(h) - theta(-h)) / (2.0 * h)
    return FcsReport(
        eta=eta, theta=th, bounds=bounds, heat_values=q_vals,
        heat_probs=q_probs, mean_heat=mean_q, heat_second_cumulant=var_q,
        mean_heat_from_theta=mean_from_theta,
        max_bound=float(bounds.max()),
        beta_mean_heat=model.beta * mean_q,
    )


# ---------------------------------------------------------------------------
# Reference erasure model: qubit reset against a cold qubit bath
# ---------------------------------------------------------------------------

def partial_swap_unitary(theta: float) -> Operator:
    """exp(-i theta SWAP) on two qubits."""
    swap = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            swap[2 * i + j, 2 * j + i] = 1.0
    return Operator(funm_herm(hermitian_op(swap), lambda w: np.exp(-1j * theta * w)))


def qubit_reset_model(beta: float = 3.0, gap: float = 1.0,
                      theta: float = math.pi / 2,
                      rho_s0: DensityState | None = None) -> ErasureModel:
    """Maximally mixed bit erased via a (partial) swap with a cold qubit."""
    if rho_s0 is None:
        rho_s0 = density(0.5 * np.eye(2))
    h_env = hermitian_op(np.diag([0.0, gap]))
    return ErasureModel(dim_system=2, h_env=h_env, beta=beta, rho_s0=rho_s0,
                        unitary=lambda t: partial_swap_unitary(theta * t))
