"""Thermal states, von Neumann and relative entropies."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .operators import (DensityState, InvalidInputError, Operator, density,
                        eig_herm, max_abs)

SUPPORT_TOL = 1e-12
EQUALITY_TOL = 1e-8


@dataclass(frozen=True)
class GibbsResult:
    """exp(-beta H)/Z together with ln Z and F = -ln Z / beta."""

    state: DensityState
    beta: float
    ln_z: float

    @property
    def free_energy(self) -> float:
        if self.beta == 0.0:
            raise InvalidInputError("free energy undefined at beta = 0")
        return -self.ln_z / self.beta


def gibbs_state(hamiltonian: Operator, beta: float) -> GibbsResult:
    """Canonical state at inverse temperature beta (negative beta permitted)."""
    if not hamiltonian.hermitian:
        if max_abs(hamiltonian.matrix - hamiltonian.matrix.conj().T) > 1e-10:
            raise InvalidInputError("gibbs_state requires a hermitian Hamiltonian")
    if not np.isfinite(beta):
        raise InvalidInputError("beta must be finite")
    w, v = eig_herm(hamiltonian.matrix)
    log_weights = -beta * w
    ln_z = float(logsumexp(log_weights))
    pops = np.exp(log_weights - ln_z)
    mat = (v * pops) @ v.conj().T
    mat = 0.5 * (mat + mat.conj().T)
    return GibbsResult(state=density(mat), beta=beta, ln_z=ln_z)


def vn_entropy(rho: DensityState) -> float:
    """S(rho) = -tr(rho ln rho), natural log."""
    w = np.clip(rho.eigenvalues, 0.0, None)
    nz = w[w > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def relative_entropy(rho: DensityState, sigma: DensityState) -> float:
    """S(rho || sigma); returns math.inf on support violation."""
    if rho.dim != sigma.dim:
        raise InvalidInputError("relative entropy needs equal dimensions")
    w_r = np.clip(rho.eigenvalues, 0.0, None)
    w_s, v_s = sigma.eigenvalues, sigma.eigenvectors
    # weight of rho outside the support of sigma
    dead = w_s <= SUPPORT_TOL
    if np.any(dead):
        p_out = 0.0
        for idx in np.nonzero(dead)[0]:
            vec = v_s[:, idx]
            p_out += float((vec.conj() @ rho.matrix @ vec).real)
        if p_out > 1e-10:
            return math.inf
    nz = w_r[w_r > 0.0]
    tr_rho_ln_rho = float(np.sum(nz * np.log(nz)))
    ln_sigma_diag = np.log(np.clip(w_s, SUPPORT_TOL, None))
    ln_sigma = (v_s * ln_sigma_diag) @ v_s.conj().T
    tr_rho_ln_sigma = float(np.trace(rho.matrix @ ln_sigma).real)
    return max(tr_rho_ln_rho - tr_rho_ln_sigma, 0.0)


def entropies(rho: DensityState, sigma: DensityState | None = None) -> dict:
    out = {"vn": vn_entropy(rho)}
    if sigma is not None:
        out["relative"] = relative_entropy(rho, sigma)
    return out


def mutual_information(rho_joint: DensityState, rho_a: DensityState,
                       rho_b: DensityState) -> float:
    return vn_entropy(rho_a) + vn_entropy(rho_b) - vn_entropy(rho_joint)
