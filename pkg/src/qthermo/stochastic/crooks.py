"""Discrete-time Markov work statistics and the detailed work relation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..fluctuation import coalesce_atoms
from ..qcore import InvalidInputError
from ._streams import chunked, trajectory_rng

CHUNK = 50_000


@dataclass(frozen=True)
class MarkovChainSpec:
    """Finite-state system with Metropolis dynamics along a protocol."""

    energy: Callable[[int, float], float]      # H(state; lam)
    n_states: int
    beta: float
    protocol: np.ndarray                       # lam_0 .. lam_N

    def __post_init__(self):
        if self.n_states < 2:
            raise InvalidInputError("need at least two states")
        lam = np.asarray(self.protocol, dtype=float)
        if lam.size < 2:
            raise InvalidInputError("protocol needs at least two values")
        lam.setflags(write=False)
        object.__setattr__(self, "protocol", lam)
        # local detailed balance of the transition kernel, all pairs and lams
        for lam_k in lam:
            t = self.transition_matrix(lam_k)
            for a in range(self.n_states):
                for b in range(self.n_states):
                    lhs = t[a, b] * math.exp(-self.beta * self.energy(a, lam_k))
                    rhs = t[b, a] * math.exp(-self.beta * self.energy(b, lam_k))
                    if abs(lhs - rhs) > 1e-12 * max(abs(lhs), abs(rhs), 1e-30):
                        raise InvalidInputError(
                            "transition kernel violates detailed balance")

    @property
    def n_steps(self) -> int:
        return self.protocol.size - 1

    def energies(self, lam: float) -> np.ndarray:
        return np.array([self.energy(s, lam) for s in range(self.n_states)])

    def transition_matrix(self, lam: float) -> np.ndarray:
        """Metropolis kernel with a uniform proposal over the other states."""
        e = self.energies(lam)
        n = self.n_states
        t = np.zeros((n, n))
        for a in range(n):
            for b in range(n):
                if a == b:
                    continue
                t[a, b] = (1.0 / (n - 1)) * min(1.0, math.exp(-self.beta * (e[b] - e[a])))
            t[a, a] = 1.0 - t[a].sum()
        return t

    def gibbs_weights(self, lam: float) -> np.ndarray:
        w = np.exp(-self.beta * (self.energies(lam) - self.energies(lam).min()))
        return w / w.sum()

    def free_energy_difference(self) -> float:
        def ln_z(lam):
            e = self.energies(lam)
            m = (-self.beta * e).max()
            return m + math.log(np.exp(-self.beta * e - m).sum())
        return -(ln_z(self.protocol[-1]) - ln_z(self.protocol[0])) / self.beta

    def reversed_protocol(self) -> np.ndarray:
        return self.protocol[::-1].copy()


def _sample_paths(spec: MarkovChainSpec, n_traj: int, seed: int,
                  reverse: bool) -> np.ndarray:
    """Per-trajectory work for the forward or reversed process."""
    lam = spec.reversed_protocol() if reverse else spec.protocol
    kernels = [spec.transition_matrix(l) for l in lam]
    cumulative = [np.cumsum(k, axis=1) for k in kernels]
    energy_table = np.array([[spec.energy(s, l) for s in range(spec.n_states)]
                             for l in lam])
    start_weights = np.cumsum(spec.gibbs_weights(lam[0]))
    n_steps = spec.n_steps
    work = np.empty(n_traj)
    for lo, hi in chunked(n_traj, CHUNK):
        n = hi - lo
        u = np.empty((n, n_steps + 1))
        for i in range(lo, hi):
            u[i - lo] = trajectory_rng(seed + (1 << 40 if reverse else 0),
                                       i).random(n_steps + 1)
        state = np.searchsorted(start_weights, u[:, 0], side="right")
        state = np.clip(state, 0, spec.n_states - 1)
        w = np.zeros(n)
        for k in range(n_steps):
            if not reverse:
                # update lam then take a random step at the new lam
                w += energy_table[k + 1, state] - energy_table[k, state]
                cum = cumulative[k + 1]
            else:
                cum = cumulative[k]
            state = (u[:, k + 1, None] > cum[state]).sum(axis=1)
            state = np.clip(state, 0, spec.n_states - 1)
            if reverse:
                # random step happened at the current lam; now update lam
                w += energy_table[k + 1, state] - energy_table[k, state]
        work[lo:hi] = w
    return work


def exact_work_distribution(spec: MarkovChainSpec,
                            reverse: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Exhaustive path sum; exact atoms for small chains."""
    n_paths = spec.n_states ** (spec.n_steps + 1)
    if n_paths > 2_000_000:
        raise InvalidInputError("state space too large for exhaustive enumeration")
    lam = spec.reversed_protocol() if reverse else spec.protocol
    kernels = [spec.transition_matrix(l) for l in lam]
    energy_table = np.array([[spec.energy(s, l) for s in range(spec.n_states)]
                             for l in lam])
    p0 = spec.gibbs_weights(lam[0])
    vals, probs = [], []

    def walk(step: int, state: int, prob: float, w: float):
        if prob == 0.0:
            return
        if step == spec.n_steps:
            vals.append(w)
            probs.append(prob)
            return
        if not reverse:
            w_new = w + energy_table[step + 1, state] - energy_table[step, state]
            kern = kernels[step + 1]
            for nxt in range(spec.n_states):
                walk(step + 1, nxt, prob * kern[state, nxt], w_new)
        else:
            kern = kernels[step]
            for nxt in range(spec.n_states):
                w_new = w + energy_table[step + 1, nxt] - energy_table[step, nxt]
                walk(step + 1, nxt, prob * kern[state, nxt], w_new)

    for s in range(spec.n_states):
        walk(0, s, float(p0[s]), 0.0)
    return coalesce_atoms(vals, probs, tol=1e-12)


@dataclass(frozen=True)
class CrooksReport:
    forward_work: np.ndarray
    reverse_work: np.ndarray
    delta_f: float
    beta: float
    slope: float                  # fitted beta from the histogram log-ratio
    intercept: float              # fitted -beta dF
    integral_lhs: float           # <exp(-beta (W - dF))>_F
    integral_se: float
    crossing: float | None        # W where P_F(W) = P_R(-W)
    excluded_bins: int


def _atomic_counts(samples: np.ndarray, atoms: np.ndarray,
                   tol: float = 1e-9) -> np.ndarray:
    idx = np.searchsorted(atoms, samples)
    idx = np.clip(idx, 0, len(atoms) - 1)
    left = np.clip(idx - 1, 0, len(atoms) - 1)
    use_left = np.abs(samples - atoms[left]) < np.abs(samples - atoms[idx])
    idx = np.where(use_left, left, idx)
    off = np.abs(samples - atoms[idx]) > tol
    if np.any(off):
        raise InvalidInputError("sampled work value does not sit on an atom")
    return np.bincount(idx, minlength=len(atoms))


def crooks_markov(spec: MarkovChainSpec, n_traj: int, seed: int,
                  min_count: int = 20) -> CrooksReport:
    """Sampled forward/reverse work statistics and the detailed-ratio test.

    Work takes values on a discrete atom grid, so the ratio test aligns the
    two sampled histograms atom by atom; atoms with too few counts on
    either side are excluded and reported.
    """
    w_f = _sample_paths(spec, n_traj, seed, reverse=False)
    w_r = _sample_paths(spec, n_traj, seed, reverse=True)
    delta_f = spec.free_energy_difference()
    beta = spec.beta

    atoms = np.unique(np.round(np.concatenate([w_f, -w_r]), 9))
    merged = [atoms[0]]
    for v in atoms[1:]:
        if v - merged[-1] > 1e-9:
            merged.append(v)
    atoms = np.array(merged)
    h_f = _atomic_counts(w_f, atoms)
    h_r = _atomic_counts(-w_r, atoms)
    keep = (h_f >= min_count) & (h_r >= min_count)
    excluded = int(np.count_nonzero(~keep))
    if np.count_nonzero(keep) >= 2:
        y = np.log(h_f[keep] / h_r[keep])
        weights = 1.0 / (1.0 / h_f[keep] + 1.0 / h_r[keep])  # multinomial errors
        a = np.vstack([atoms[keep], np.ones(keep.sum())]).T
        wa = a * weights[:, None]
        coef = np.linalg.solve(a.T @ wa, wa.T @ y)
        slope, intercept = float(coef[0]), float(coef[1])
    else:
        slope, intercept = math.nan, math.nan

    crossing = None
    if np.count_nonzero(keep) >= 2:
        cs = atoms[keep]
        sign = np.log(h_f[keep] / h_r[keep])
        for i in range(len(sign) - 1):
            if sign[i] == 0.0:
                crossing = float(cs[i])
                break
            if sign[i] * sign[i + 1] < 0.0:
                f0, f1 = sign[i], sign[i + 1]
                crossing = float(cs[i] + (cs[i + 1] - cs[i]) * (-f0) / (f1 - f0))
                break

    y = np.exp(-beta * (w_f - delta_f))
    return CrooksReport(
        forward_work=w_f, reverse_work=w_r, delta_f=delta_f, beta=beta,
        slope=slope, intercept=intercept,
        integral_lhs=float(y.mean()),
        integral_se=float(y.std(ddof=1) / math.sqrt(n_traj)),
        crossing=crossing, excluded_bins=excluded,
    )


def two_state_spec(beta: float = 1.0, gap0: float = 0.0, gap1: float = 2.0,
                   n_steps: int = 8) -> MarkovChainSpec:
    """Driven two-state system: level splitting ramps from gap0 to gap1."""
    lam = np.linspace(gap0, gap1, n_steps + 1)
    return MarkovChainSpec(
        energy=lambda s, l: 0.0 if s == 0 else float(l),
        n_states=2, beta=beta, protocol=lam,
    )
