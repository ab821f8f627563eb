"""Dense linear algebra for d-level systems and the generalized Pauli zoo.

States are plain numpy arrays: a pure state is a complex vector of length
``d**n`` and a mixed state a ``(d**n, d**n)`` complex matrix.  Site 1 is the
leftmost tensor factor, i.e. the most significant digit of the base-d index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 2**20

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
EIG_TOL = 1e-10


@dataclass(frozen=True)
class QuditSystem:
    """``n`` qudits of local dimension ``d``; sites are numbered ``1..n``."""

    d: int
    n: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"local dimension must be >= 2, got {self.d}")
        if self.n < 1:
            raise ValueError(f"need at least one qudit, got {self.n}")
        if self.d**self.n > MAX_DIM:
            raise ValueError(f"d**n = {self.d}**{self.n} exceeds {MAX_DIM}")

    @property
    def dim(self) -> int:
        return self.d**self.n

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.d,) * self.n

    @property
    def omega(self) -> complex:
        return root_of_unity(self.d)

    def axis(self, site: int) -> int:
        if not 1 <= site <= self.n:
            raise ValueError(f"site {site} out of range 1..{self.n}")
        return site - 1


def root_of_unity(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def _check_d(d: int) -> None:
    if d < 2:
        raise ValueError(f"local dimension must be >= 2, got {d}")


def gen_z(d: int) -> np.ndarray:
    """Clock operator ``Z = sum_k w**k |k><k|``."""
    _check_d(d)
    return np.diag(root_of_unity(d) ** np.arange(d))


def gen_x(d: int) -> np.ndarray:
    """Cyclic shift ``X = sum_k |k-1><k|``, so ``X|0> = |d-1>``."""
    _check_d(d)
    x = np.zeros((d, d), dtype=complex)
    for k in range(d):
        x[(k - 1) % d, k] = 1.0
    return x


def fourier(d: int) -> np.ndarray:
    """Discrete Fourier gate ``F = d**-1/2 sum_jk w**(jk) |j><k|``."""
    _check_d(d)
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return root_of_unity(d) ** (j * k % d) / np.sqrt(d)


def z_alpha(d: int, alphas: Sequence[float]) -> np.ndarray:
    """Diagonal phase gate ``sum_k exp(i alpha_k) |k><k|``."""
    alphas = np.asarray(alphas, dtype=float)
    if alphas.shape != (d,):
        raise ValueError(f"expected {d} angles, got shape {alphas.shape}")
    return np.diag(np.exp(1j * alphas))


def basis_state(d: int, k: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[k % d] = 1.0
    return v


def plus_state(d: int, j: int = 0) -> np.ndarray:
    """Fourier basis vector ``|+_j> = d**-1/2 sum_k w**(jk) |k>``."""
    return root_of_unity(d) ** (j * np.arange(d) % d) / np.sqrt(d)


def ket(*labels: int, d: int) -> np.ndarray:
    """Computational basis product state ``|l1 l2 ...>``."""
    return tensor(*(basis_state(d, k) for k in labels))


def tensor(*arrays: np.ndarray) -> np.ndarray:
    """Kronecker product of vectors or matrices, leftmost argument = site 1."""
    if not arrays:
        raise ValueError("tensor() needs at least one factor")
    return reduce(np.kron, arrays)


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def embed_at_site(op: np.ndarray, system: QuditSystem, site: int) -> np.ndarray:
    """Full-system matrix of a single-site operator acting on ``site``."""
    op = np.asarray(op)
    if op.shape != (system.d, system.d):
        raise ValueError(f"operator shape {op.shape} does not match d={system.d}")
    ax = system.axis(site)
    left = np.eye(system.d**ax)
    right = np.eye(system.d ** (system.n - ax - 1))
    return np.kron(np.kron(left, op), right)


def apply(op: np.ndarray, state: np.ndarray) -> np.ndarray:
    """Apply a full-system operator to a vector (``U psi``) or matrix (``U rho U^+``)."""
    op = np.asarray(op)
    state = np.asarray(state)
    if op.shape[1] != state.shape[0]:
        raise ValueError(f"dimension mismatch: {op.shape} vs {state.shape}")
    if state.ndim == 1:
        return op @ state
    return op @ state @ dagger(op)


def apply_local(
    op: np.ndarray, state: np.ndarray, dims: Sequence[int], site: int
) -> np.ndarray:
    """Apply a single-site operator without forming the full matrix.

    ``dims`` lists the local dimensions, ``site`` is 1-based.
    """
    dims = tuple(dims)
    n = len(dims)
    ax = site - 1
    if not 0 <= ax < n:
        raise ValueError(f"site {site} out of range 1..{n}")
    if state.ndim == 1:
        t = np.tensordot(op, state.reshape(dims), axes=([1], [ax]))
        return np.moveaxis(t, 0, ax).reshape(-1)
    r = state.reshape(dims + dims)
    r = np.moveaxis(np.tensordot(op, r, axes=([1], [ax])), 0, ax)
    r = np.moveaxis(np.tensordot(r, op.conj(), axes=([n + ax], [1])), -1, n + ax)
    return r.reshape(state.shape)


def partial_trace(
    rho: np.ndarray, dims: Sequence[int] | QuditSystem, keep: Iterable[int]
) -> np.ndarray:
    """Reduce ``rho`` onto the 1-based sites in ``keep`` (kept in ascending order).

    Also accepts a pure state vector, which is treated as ``|psi><psi|``.
    """
    if isinstance(dims, QuditSystem):
        dims = dims.dims
    dims = tuple(dims)
    n = len(dims)
    keep = sorted(set(keep))
    if any(not 1 <= s <= n for s in keep):
        raise ValueError(f"sites {keep} out of range 1..{n}")
    keep_ax = [s - 1 for s in keep]
    drop_ax = [a for a in range(n) if a not in keep_ax]
    dk = int(np.prod([dims[a] for a in keep_ax])) if keep_ax else 1
    rho = np.asarray(rho)
    if rho.ndim == 1:
        psi = rho.reshape(dims).transpose(keep_ax + drop_ax).reshape(dk, -1)
        return psi @ dagger(psi)
    r = rho.reshape(dims + dims)
    perm = keep_ax + drop_ax + [n + a for a in keep_ax] + [n + a for a in drop_ax]
    r = r.transpose(perm).reshape(dk, rho.shape[0] // dk, dk, rho.shape[0] // dk)
    return np.einsum("ajbj->ab", r)


def is_unitary(u: np.ndarray, tol: float = NORM_TOL) -> bool:
    u = np.asarray(u)
    return bool(np.abs(dagger(u) @ u - np.eye(u.shape[0])).max() <= tol)


def check_state(psi: np.ndarray, tol: float = NORM_TOL) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError("pure state must be a vector")
    if abs(np.vdot(psi, psi).real - 1.0) > tol:
        raise ValueError(f"state not normalized: |psi|^2 = {np.vdot(psi, psi).real}")
    return psi


def check_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity at the library tolerances."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got {rho.shape}")
    if np.abs(rho - dagger(rho)).max() > HERMITIAN_TOL:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > TRACE_TOL:
        raise ValueError(f"trace {np.trace(rho).real} != 1")
    if np.linalg.eigvalsh(rho).min() < -EIG_TOL:
        raise ValueError("density matrix has negative eigenvalues")
    return rho


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.linalg.eigvalsh(a - b)).sum())
