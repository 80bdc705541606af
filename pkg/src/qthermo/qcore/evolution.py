"""Unitary propagators and a fixed-step Lindblad integrator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .operators import (DensityState, InvalidInputError, Operator, density,
                        expm_herm_factor, max_abs)

TRACE_DRIFT_LIMIT = 1e-6
MIN_EIG_LIMIT = -1e-7


class IntegrationFailure(RuntimeError):
    """Step-size instability detected during open-system integration."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


HamiltonianPath = Callable[[float], Operator]


def propagate_unitary(h_of_t: HamiltonianPath | Operator, tau: float,
                      slices: int = 1024) -> Operator:
    """Time-ordered propagator from midpoint-rule slice exponentials.

    Exact for constant H; second-order in the slice width otherwise.
    """
    if slices < 1:
        raise InvalidInputError("slices must be >= 1")
    if isinstance(h_of_t, Operator):
        fixed = h_of_t
        h_of_t = lambda t: fixed  # noqa: E731
    dt = tau / slices
    u = None
    for k in range(slices):
        t_mid = (k + 0.5) * dt
        h = h_of_t(t_mid)
        step = expm_herm_factor(h.matrix, factor=-1j * dt)
        u = step if u is None else step @ u
    return Operator(u)


def evolve_state(rho: DensityState, u: Operator) -> DensityState:
    mat = u.matrix @ rho.matrix @ u.matrix.conj().T
    return density(0.5 * (mat + mat.conj().T))


@dataclass(frozen=True)
class LindbladPath:
    times: np.ndarray
    states: list[DensityState]
    trace_drift: float          # max |tr(rho) - 1| before renormalization checks
    error_estimate: float       # step-halving defect at the final time

    @property
    def final(self) -> DensityState:
        return self.states[-1]


def lindblad_rhs(h_mat: np.ndarray, jump_mats: Sequence[np.ndarray],
                 rates: Sequence[float], rho: np.ndarray) -> np.ndarray:
    out = -1j * (h_mat @ rho - rho @ h_mat)
    for L, g in zip(jump_mats, rates):
        Ld = L.conj().T
        LdL = Ld @ L
        out += g * (L @ rho @ Ld - 0.5 * (LdL @ rho + rho @ LdL))
    return out


def _integrate(h_of_t, jump_mats, rates, rho0: np.ndarray, tau: float, steps: int):
    dt = tau / steps
    rho = rho0.copy()
    states = [rho.copy()]
    for k in range(steps):
        t = k * dt
        h1 = h_of_t(t).matrix
        h2 = h_of_t(t + 0.5 * dt).matrix
        h3 = h_of_t(t + dt).matrix
        k1 = lindblad_rhs(h1, jump_mats, rates, rho)
        k2 = lindblad_rhs(h2, jump_mats, rates, rho + 0.5 * dt * k1)
        k3 = lindblad_rhs(h2, jump_mats, rates, rho + 0.5 * dt * k2)
        k4 = lindblad_rhs(h3, jump_mats, rates, rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        states.append(rho.copy())
    return states


def lindblad_evolve(hamiltonian: HamiltonianPath | Operator,
                    jumps: Sequence[tuple[Operator, float]],
                    rho0: DensityState, tau: float, steps: int = 400) -> LindbladPath:
    """Fixed-step RK4 integration of the Lindblad master equation.

    Trace is preserved to 1e-8 and the minimum eigenvalue stays above -1e-7
    for stable step sizes; drift beyond 1e-6 raises IntegrationFailure.
    """
    if steps < 1:
        raise InvalidInputError("steps must be >= 1")
    for _, rate in jumps:
        if rate < 0.0:
            raise InvalidInputError("jump rates must be nonnegative")
    if isinstance(hamiltonian, Operator):
        fixed = hamiltonian
        h_of_t = lambda t: fixed  # noqa: E731
    else:
        h_of_t = hamiltonian
    jump_mats = [op.matrix for op, _ in jumps]
    rates = [rate for _, rate in jumps]

    coarse = _integrate(h_of_t, jump_mats, rates, rho0.matrix, tau, steps)
    fine = _integrate(h_of_t, jump_mats, rates, rho0.matrix, tau, 2 * steps)
    err = max_abs(coarse[-1] - fine[-1])

    times = np.linspace(0.0, tau, steps + 1)
    drift = max(abs(np.trace(r).real - 1.0) for r in coarse)
    if drift > TRACE_DRIFT_LIMIT:
        raise IntegrationFailure(
            f"trace drift {drift:.3e} exceeds {TRACE_DRIFT_LIMIT:.0e}; reduce the step size",
            diagnostics={"trace_drift": drift, "steps": steps, "tau": tau,
                         "error_estimate": err},
        )
    states = []
    for r in coarse:
        min_eig = float(np.linalg.eigvalsh(r)[0])
        if min_eig < MIN_EIG_LIMIT:
            raise IntegrationFailure(
                f"positivity lost (min eigenvalue {min_eig:.3e}); reduce the step size",
                diagnostics={"min_eig": min_eig, "steps": steps, "tau": tau},
            )
        states.append(density(r / np.trace(r).real))
    return LindbladPath(times=times, states=states, trace_drift=drift,
                        error_estimate=err)
