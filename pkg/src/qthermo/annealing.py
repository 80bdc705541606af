"""Transverse-field Ising annealing, the exponential-average diagnostic,
kink statistics, and repetition-code Hamiltonian encoding."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fluctuation import _projective_transition_table
from .qcore import (DensityState, InvalidInputError, Operator, density,
                    eig_herm, identity, kron, lindblad_rhs,
                    propagate_unitary, pure_state, sigma_minus, sigma_x,
                    sigma_z, spectral, unitary_channel)

DENSE_CAP_QUBITS = 14


def _site_op(op: Operator, site: int, n: int) -> np.ndarray:
    mats = [identity(2)] * n
    mats[site] = op
    return kron(*mats).matrix


def pauli_sums(n: int) -> dict:
    """Cached transverse-field and bond operators for an open chain."""
    sx = sum(_site_op(sigma_x, i, n) for i in range(n))
    bonds = [ _site_op(sigma_z, i, n) @ _site_op(sigma_z, i + 1, n)
              for i in range(n - 1) ]
    return {"sx": sx, "bonds": bonds}


@dataclass(frozen=True)
class IsingChainSpec:
    """Open transverse-field Ising chain with annealing schedules.

    H(t) = 2*pi * [ -g(t) sum sigma_x - Delta(t) sum J_n sigma_z sigma_z ],
    with g(tau) = 0 and Delta(0) = 0 enforced at the endpoints.
    """

    length: int
    tau: float
    couplings: np.ndarray | None = None
    g0: float = 1.0
    delta1: float = 1.0
    g_of_t: Callable[[float], float] | None = None
    delta_of_t: Callable[[float], float] | None = None

    def __post_init__(self):
        if self.length < 2:
            raise InvalidInputError("chain length must be >= 2")
        if self.length > DENSE_CAP_QUBITS:
            raise InvalidInputError(
                f"length {self.length} exceeds the dense cap {DENSE_CAP_QUBITS}")
        if self.tau <= 0.0:
            raise InvalidInputError("anneal time must be positive")
        j = self.couplings
        if j is None:
            j = np.ones(self.length - 1)
        j = np.asarray(j, dtype=float)
        if j.shape != (self.length - 1,):
            raise InvalidInputError("need one coupling per bond")
        j.setflags(write=False)
        object.__setattr__(self, "couplings", j)
        if abs(self.g(self.tau)) > 1e-12 or abs(self.delta(0.0)) > 1e-12:
            raise InvalidInputError("schedules must satisfy g(tau) = 0, Delta(0) = 0")

    def g(self, t: float) -> float:
        if self.g_of_t is not None:
            return float(self.g_of_t(t))
        return self.g0 * (1.0 - t / self.tau)

    def delta(self, t: float) -> float:
        if self.delta_of_t is not None:
            return float(self.delta_of_t(t))
        return self.delta1 * (t / self.tau)


def build_anneal(spec: IsingChainSpec) -> Callable[[float], Operator]:
    """Hamiltonian path of the annealing protocol."""
    ops = pauli_sums(spec.length)
    coupling_term = sum(j * b for j, b in zip(spec.couplings, ops["bonds"]))

    def h(t: float) -> Operator:
        mat = 2.0 * math.pi * (-spec.g(t) * ops["sx"] - spec.delta(t) * coupling_term)
        return Operator(mat, hermitian=True)

    return h


def diagnostic_observables(length: int) -> tuple[Operator, Operator]:
    """Renormalized endpoint observables (sum sigma_x - 1, sum sigma_z sigma_z)."""
    ops = pauli_sums(length)
    omega_i = Operator(ops["sx"] - np.eye(2**length), hermitian=True)
    omega_f = Operator(sum(ops["bonds"]), hermitian=True)
    return omega_i, omega_f


def paramagnet_ground_state(length: int) -> DensityState:
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    vec = plus.copy()
    for _ in range(length - 1):
        vec = np.kron(vec, plus)
    return pure_state(vec)


class _LindbladPropagator:
    """Linear map X -> propagated X under a time-dependent master equation."""

    def __init__(self, h_of_t, jump_mats, rates, tau, steps):
        self.h_of_t = h_of_t
        self.jump_mats = jump_mats
        self.rates = rates
        self.tau = tau
        self.steps = steps

    @property
    def dim(self) -> int:
        return self.h_of_t(0.0).dim

    def apply_matrix(self, x: np.ndarray) -> np.ndarray:
        dt = self.tau / self.steps
        out = x.astype(complex).copy()
        for k in range(self.steps):
            t = k * dt
            h1 = self.h_of_t(t).matrix
            h2 = self.h_of_t(t + 0.5 * dt).matrix
            h3 = self.h_of_t(t + dt).matrix
            k1 = lindblad_rhs(h1, self.jump_mats, self.rates, out)
            k2 = lindblad_rhs(h2, self.jump_mats, self.rates, out + 0.5 * dt * k1)
            k3 = lindblad_rhs(h2, self.jump_mats, self.rates, out + 0.5 * dt * k2)
            k4 = lindblad_rhs(h3, self.jump_mats, self.rates, out + dt * k3)
            out = out + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return out


@dataclass(frozen=True)
class DiagnosticReport:
    omega_values: np.ndarray        # final-observable outcomes
    probabilities: np.ndarray
    kinks: np.ndarray               # domain walls per outcome
    exp_average: float              # <exp(-d omega)>
    efficacy: float
    identity_gap: float             # |<exp(-d omega)> - efficacy|
    efficacy_deviation: float       # |<exp(-d omega)> - 1|
    ground_state_probability: float
    prob_top: float                 # P(omega_f = L - 1)


def run_diagnostic(spec: IsingChainSpec, noise: str = "none",
                   rate: float = 0.0, steps: int | None = None,
                   slices: int | None = None,
                   shots: int | None = None,
                   seed: int = 0) -> DiagnosticReport:
    """Two-point (Omega_i, Omega_f) statistics of the anneal.

    noise: "none" (unitary TDSE), "dephasing" (sigma_z jumps, unital), or
    "amplitude-damping" (sigma_- jumps).  Exact outcome distribution unless
    `shots` is finite, in which case multinomial sampling noise is added.
    """
    if noise not in ("none", "dephasing", "amplitude-damping"):
        raise InvalidInputError(f"unknown noise model {noise!r}")
    if rate < 0.0:
        raise InvalidInputError("noise rate must be nonnegative")
    n = spec.length
    h_of_t = build_anneal(spec)
    omega_i, omega_f = diagnostic_observables(n)
    dec_i = spectral(omega_i)
    dec_f = spectral(omega_f)

    # exact paramagnetic ground state of H(0)
    w0, v0 = eig_herm(h_of_t(0.0))
    rho0 = pure_state(v0[:, 0])

    if noise == "none":
        u = propagate_unitary(h_of_t, spec.tau, slices=slices or 2048)
        channel = unitary_channel(u)
        final = channel.apply(rho0)
    else:
        if noise == "dephasing":
            jump_mats = [_site_op(sigma_z, i, n) for i in range(n)]
        else:
            jump_mats = [_site_op(sigma_minus, i, n) for i in range(n)]
        rates = [rate] * n
        channel = _LindbladPropagator(h_of_t, jump_mats, rates, spec.tau,
                                      steps or 1200)
        final = density(channel.apply_matrix(rho0.matrix))

    table = _projective_transition_table(dec_i, dec_f, rho0, channel)
    # the initial state occupies a single Omega_i eigenspace
    weights_i = np.array([float(np.trace(p @ rho0.matrix).real)
                          for p in dec_i.projectors])
    m0 = int(np.argmax(weights_i))
    omega_start = dec_i.values[m0]
    p_n = table.sum(axis=0)
    p_n = np.clip(p_n, 0.0, None)
    p_n = p_n / p_n.sum()
    d_omega = dec_f.values - omega_start

    if shots is not None:
        rng = np.random.default_rng(seed)
        counts = rng.multinomial(shots, p_n)
        p_n = counts / shots

    exp_avg = float(p_n @ np.exp(-d_omega))
    exp_plus_i = dec_i.function(np.exp)
    exp_minus_f = dec_f.function(lambda x: np.exp(-x))
    m_avg = sum(p @ rho0.matrix @ p for p in dec_i.projectors)
    efficacy = float(np.trace(exp_minus_f @ channel.apply_matrix(
        m_avg @ exp_plus_i)).real)

    # ground-state probability of the final Hamiltonian
    w_tau, v_tau = eig_herm(h_of_t(spec.tau))
    blocks = spectral(h_of_t(spec.tau))
    gs_proj = blocks.projectors[0]
    p_gs = float(np.trace(gs_proj @ final.matrix).real)

    kinks = (n - 1 - dec_f.values) / 2.0
    top = int(np.argmax(dec_f.values))
    return DiagnosticReport(
        omega_values=dec_f.values, probabilities=p_n, kinks=kinks,
        exp_average=exp_avg, efficacy=efficacy,
        identity_gap=abs(exp_avg - efficacy),
        efficacy_deviation=abs(exp_avg - 1.0),
        ground_state_probability=p_gs,
        prob_top=float(p_n[top]),
    )


# ---------------------------------------------------------------------------
# Quantum annealing correction: repetition encoding plus penalty stabilizers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogicalIsingSpec:
    """Logical fields/couplings of the problem Hamiltonian to encode."""

    fields: np.ndarray
    couplings: dict              # {(i, j): J_ij} with i < j

    def __post_init__(self):
        h = np.asarray(self.fields, dtype=float)
        h.setflags(write=False)
        object.__setattr__(self, "fields", h)
        for (i, j) in self.couplings:
            if not (0 <= i < j < self.n_logical):
                raise InvalidInputError("coupling indices out of range")

    @property
    def n_logical(self) -> int:
        return self.fields.size


@dataclass(frozen=True)
class EncodedHamiltonians:
    n_physical: int              # data qubits + penalty qubits
    h_x: Operator                # transverse field on every physical qubit
    h_ising_encoded: Operator
    h_penalty: Operator
    nu: float
    mu: float

    def problem_hamiltonian(self) -> Operator:
        return Operator(self.nu * self.h_ising_encoded.matrix
                        + self.mu * self.h_penalty.matrix, hermitian=True)

    def total(self, a: float, b: float) -> Operator:
        return Operator(a * self.h_x.matrix + b * self.problem_hamiltonian().matrix,
                        hermitian=True)


def qac_encode(spec: LogicalIsingSpec, n_per_logical: int, nu: float,
               mu: float, cap_qubits: int = DENSE_CAP_QUBITS) -> EncodedHamiltonians:
    """Repetition-encode sigma_z terms and add ferromagnetic penalty stabilizers.

    Each logical qubit i maps to n data copies (i, l) plus one penalty qubit
    iP; the transverse field stays unencoded.
    """
    if n_per_logical < 1:
        raise InvalidInputError("need at least one physical qubit per logical")
    n_log = spec.n_logical
    total_qubits = n_log * n_per_logical + n_log
    if total_qubits > cap_qubits:
        raise InvalidInputError(
            f"{total_qubits} physical qubits exceed the dense cap {cap_qubits}")

    def data_index(i: int, copy: int) -> int:
        return i * n_per_logical + copy

    def penalty_index(i: int) -> int:
        return n_log * n_per_logical + i

    dim = 2**total_qubits
    z_ops = [np.diag(_site_op(sigma_z, q, total_qubits).diagonal())
             for q in range(total_qubits)]

    encoded_z = []
    for i in range(n_log):
        acc = np.zeros((dim, dim), dtype=complex)
        for el in range(n_per_logical):
            acc += z_ops[data_index(i, el)]
        encoded_z.append(acc)

    h_ising = np.zeros((dim, dim), dtype=complex)
    for i, hi in enumerate(spec.fields):
        h_ising += hi * encoded_z[i]
    for (i, j), jij in spec.couplings.items():
        acc = np.zeros((dim, dim), dtype=complex)
        for el in range(n_per_logical):
            acc += z_ops[data_index(i, el)] @ z_ops[data_index(j, el)]
        h_ising += jij * acc

    h_pen = np.zeros((dim, dim), dtype=complex)
    for i in range(n_log):
        zp = z_ops[penalty_index(i)]
        for el in range(n_per_logical):
            h_pen -= z_ops[data_index(i, el)] @ zp

    h_x = sum(_site_op(sigma_x, q, total_qubits) for q in range(total_qubits))
    return EncodedHamiltonians(
        n_physical=total_qubits,
        h_x=Operator(h_x, hermitian=True),
        h_ising_encoded=Operator(h_ising, hermitian=True),
        h_penalty=Operator(h_pen, hermitian=True),
        nu=nu, mu=mu,
    )
