"""Dense operators, density matrices, and the eigen-tools everything else uses.

All matrices are plain complex numpy arrays wrapped in thin, immutable
dataclasses that validate their defining invariants on construction.
Units are hbar = k_B = 1 throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-9
DEGENERACY_RTOL = 1e-9


class InvalidInputError(ValueError):
    """Raised when an operation's preconditions are violated."""


def _as_matrix(entries) -> np.ndarray:
    mat = np.asarray(entries, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {mat.shape}")
    return mat


def max_abs(a: np.ndarray) -> float:
    """Entrywise max-norm ||A||_max."""
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclass(frozen=True)
class Operator:
    """A dense complex square matrix with an optional Hermitian guarantee."""

    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        mat = _as_matrix(self.matrix)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        if self.hermitian and max_abs(mat - mat.conj().T) > HERMITICITY_TOL:
            raise InvalidInputError(
                "operator flagged hermitian violates ||A - A^dag||_max <= 1e-10"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, hermitian=self.hermitian)

    def __matmul__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix @ other.matrix)

    def __add__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix + other.matrix,
                        hermitian=self.hermitian and other.hermitian)

    def __sub__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix - other.matrix,
                        hermitian=self.hermitian and other.hermitian)

    def __mul__(self, c: complex) -> "Operator":
        herm = self.hermitian and abs(complex(c).imag) == 0.0
        return Operator(self.matrix * c, hermitian=herm)

    __rmul__ = __mul__


def hermitian_op(entries) -> Operator:
    return Operator(entries, hermitian=True)


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim, dtype=complex), hermitian=True)


# Pauli matrices and friends -------------------------------------------------

sigma_x = hermitian_op([[0, 1], [1, 0]])
sigma_y = hermitian_op([[0, -1j], [1j, 0]])
sigma_z = hermitian_op([[1, 0], [0, -1]])
# sigma_z = diag(1, -1): basis state 0 is the upper level
sigma_plus = Operator([[0, 1], [0, 0]])    # (sigma_x + i sigma_y)/2, raises sigma_z
sigma_minus = Operator([[0, 0], [1, 0]])   # (sigma_x - i sigma_y)/2, lowers sigma_z


def ladder_ops(dim: int) -> tuple[Operator, Operator]:
    """Truncated annihilation/creation pair on a dim-level ladder."""
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)
    return Operator(a), Operator(a.conj().T)


def number_op(dim: int) -> Operator:
    return hermitian_op(np.diag(np.arange(dim, dtype=float)))


def position_momentum(dim: int, mass: float = 1.0, omega: float = 1.0) -> tuple[Operator, Operator]:
    """x and p matrices on the harmonic ladder of reference (mass, omega)."""
    a, adag = ladder_ops(dim)
    x = np.sqrt(1.0 / (2.0 * mass * omega)) * (a.matrix + adag.matrix)
    p = 1j * np.sqrt(mass * omega / 2.0) * (adag.matrix - a.matrix)
    return hermitian_op(x), hermitian_op(p)


def kron(*ops: Operator) -> Operator:
    out = ops[0].matrix
    herm = ops[0].hermitian
    for op in ops[1:]:
        out = np.kron(out, op.matrix)
        herm = herm and op.hermitian
    return Operator(out, hermitian=herm)


def embed(op: Operator, site: int, dims: Sequence[int]) -> Operator:
    """Lift a single-factor operator to the tensor product over `dims`."""
    if op.dim != dims[site]:
        raise InvalidInputError("operator dimension does not match target factor")
    factors = [identity(d) for d in dims]
    factors[site] = op
    return kron(*factors)


@dataclass(frozen=True)
class DensityState:
    """Unit-trace, positive-semidefinite Hermitian operator."""

    op: Operator
    eigenvalues: np.ndarray = field(init=False, repr=False)
    eigenvectors: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        mat = self.op.matrix
        if max_abs(mat - mat.conj().T) > HERMITICITY_TOL:
            raise InvalidInputError("density matrix must be hermitian")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidInputError(f"density matrix trace {tr} deviates from 1")
        w, v = np.linalg.eigh(mat)
        if w[0] < -POSITIVITY_TOL:
            raise InvalidInputError(f"density matrix has eigenvalue {w[0]} < -1e-9")
        w = np.ascontiguousarray(w)
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def dim(self) -> int:
        return self.op.dim

    def expectation(self, observable: Operator) -> float:
        val = np.trace(self.matrix @ observable.matrix)
        return float(val.real)


def density(entries) -> DensityState:
    return DensityState(Operator(entries, hermitian=True))


def pure_state(vec) -> DensityState:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    v = v / np.linalg.norm(v)
    return density(np.outer(v, v.conj()))


def maximally_mixed(dim: int) -> DensityState:
    return density(np.eye(dim) / dim)


def partial_trace(rho: DensityState | np.ndarray, dims: Sequence[int],
                  keep: Iterable[int]) -> DensityState:
    """Reduced state over the factors in `keep` (indices into `dims`)."""
    mat = rho.matrix if isinstance(rho, DensityState) else np.asarray(rho, dtype=complex)
    dims = list(dims)
    total = int(np.prod(dims))
    if mat.shape != (total, total):
        raise InvalidInputError(
            f"dimension factorization {dims} does not match matrix of shape {mat.shape}"
        )
    keep = sorted(set(keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise InvalidInputError("keep indices out of range")
    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    letters = "abcdefghijklmnopqrstuvwxyz"
    if 2 * n > len(letters):
        raise InvalidInputError("too many tensor factors")
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for i in traced:
        col[i] = row[i]
    out_row = "".join(row[i] for i in keep)
    out_col = "".join(col[i] for i in keep)
    spec = "".join(row) + "".join(col) + "->" + out_row + out_col
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    reduced = np.einsum(spec, mat.reshape(dims + dims)).reshape(d_keep, d_keep)
    return density(reduced)


# Hermitian eigen-tools -------------------------------------------------------

def eig_herm(op: Operator | np.ndarray):
    mat = op.matrix if isinstance(op, Operator) else np.asarray(op, dtype=complex)
    if max_abs(mat - mat.conj().T) > HERMITICITY_TOL:
        raise InvalidInputError("expected a hermitian matrix")
    return np.linalg.eigh(mat)


def degenerate_blocks(eigenvalues: np.ndarray, rtol: float = DEGENERACY_RTOL) -> list[list[int]]:
    """Group eigenvalue indices whose values agree to `rtol` (relative to the spectral span)."""
    w = np.asarray(eigenvalues, dtype=float)
    scale = max(np.max(np.abs(w)), 1.0)
    blocks: list[list[int]] = []
    for i in range(len(w)):
        if blocks and abs(w[i] - w[blocks[-1][-1]]) <= rtol * scale:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return blocks


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues with their (possibly rank > 1) projectors."""

    values: np.ndarray           # one entry per distinct eigenvalue
    projectors: list[np.ndarray]

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def function(self, f) -> np.ndarray:
        out = np.zeros_like(self.projectors[0])
        for val, proj in zip(self.values, self.projectors):
            out = out + f(val) * proj
        return out


def spectral(op: Operator | np.ndarray, rtol: float = DEGENERACY_RTOL) -> SpectralDecomposition:
    w, v = eig_herm(op)
    blocks = degenerate_blocks(w, rtol)
    values = np.array([np.mean(w[b]) for b in blocks])
    projs = []
    for b in blocks:
        vb = v[:, b]
        projs.append(vb @ vb.conj().T)
    return SpectralDecomposition(values=values, projectors=projs)


def funm_herm(op: Operator | np.ndarray, f) -> np.ndarray:
    """f(A) for hermitian A via eigendecomposition."""
    w, v = eig_herm(op)
    return (v * f(w)) @ v.conj().T


def expm_herm_factor(op: Operator | np.ndarray, factor: complex = 1.0) -> np.ndarray:
    """exp(factor * A) for hermitian A; unitary to machine precision for imaginary factors."""
    w, v = eig_herm(op)
    return (v * np.exp(factor * w)) @ v.conj().T
