"""Concurrence of bipartite states: pure-state, two-qubit (Wootters) and quasi-pure."""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .algebra import partial_trace

EIG_CLAMP = 1e-12


def max_concurrence(d: int) -> float:
    """Concurrence of the maximally entangled state of two ``d``-level systems."""
    return float(np.sqrt(2 * (1 - 1 / d)))


def pure_concurrence(psi: np.ndarray, dims: Sequence[int]) -> float:
    """``sqrt(2 (1 - tr rho_A**2))`` for a bipartite pure state with dims ``(dA, dB)``."""
    rho_a = partial_trace(np.asarray(psi, dtype=complex), tuple(dims), [1])
    purity = float(np.trace(rho_a @ rho_a).real)
    return float(np.sqrt(max(2 * (1 - purity), 0.0)))


_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def wootters_concurrence(rho: np.ndarray) -> float:
    """Two-qubit concurrence ``max(0, l1 - l2 - l3 - l4)`` from the spin-flipped spectrum."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-qubit state, got {rho.shape}")
    # lambda_i are the singular values of X^T (Y(x)Y) X for any rho = X X^+
    vals, vecs = np.linalg.eigh((rho + rho.conj().T) / 2)
    x = vecs * np.sqrt(np.clip(vals, 0.0, None))
    lam = np.linalg.svd(x.T @ _YY @ x, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1:].sum()))


class EigSystem(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def eigensystem(rho: np.ndarray) -> EigSystem:
    """Eigenvalues in non-increasing order (tiny ones clamped to zero) and eigenvector columns."""
    vals, vecs = np.linalg.eigh(np.asarray(rho, dtype=complex))
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    vals = np.where(vals < EIG_CLAMP, 0.0, vals)
    return EigSystem(vals, vecs[:, order])


def _a_element(a: np.ndarray, b: np.ndarray, c: np.ndarray, e: np.ndarray) -> complex:
    """``<a b| 4 P_-(x)P_- |c e>`` for states given as ``dA x dB`` coefficient matrices."""
    direct = np.vdot(a, c) * np.vdot(b, e) + np.vdot(a, e) * np.vdot(b, c)
    swap1 = np.trace(c @ a.conj().T @ e @ b.conj().T)
    swap2 = np.trace(e @ a.conj().T @ c @ b.conj().T)
    return direct - swap1 - swap2


class QuasiPureResult(NamedTuple):
    concurrence: float
    eig_ratio: float


def quasi_pure_concurrence(rho: np.ndarray, dims: Sequence[int]) -> QuasiPureResult:
    """Quasi-pure concurrence and the ratio ``mu_2 / mu_1`` of the two leading eigenvalues.

    Builds ``tau_jk = A_{jk,11} / sqrt(A_{11,11})`` from the subnormalized
    eigenvectors ``sqrt(mu_i) Phi_i`` and returns ``max(0, l1 - sum_{i>1} l_i)``
    over the singular values of ``tau``.  It never exceeds the concurrence.
    """
    da, db = dims
    es = eigensystem(rho)
    keep = es.values > 0
    if not keep.any():
        raise ValueError("rank-0 input")
    mus = es.values[keep]
    chis = [np.sqrt(m) * es.vectors[:, i].reshape(da, db) for i, m in zip(np.flatnonzero(keep), mus)]
    ratio = float(mus[1] / mus[0]) if len(mus) > 1 else 0.0
    c1 = chis[0]
    norm = _a_element(c1, c1, c1, c1).real
    if norm <= 0:
        return QuasiPureResult(0.0, ratio)
    r = len(chis)
    tau = np.empty((r, r), dtype=complex)
    for j in range(r):
        for k in range(j, r):
            tau[j, k] = tau[k, j] = _a_element(chis[j], chis[k], c1, c1) / np.sqrt(norm)
    lam = np.linalg.svd(tau, compute_uv=False)
    return QuasiPureResult(float(max(0.0, lam[0] - lam[1:].sum())), ratio)


def normalized_qp(rho: np.ndarray, d: int) -> float:
    """Quasi-pure concurrence of a ``d x d`` state as a fraction of its maximum."""
    return quasi_pure_concurrence(rho, (d, d)).concurrence / max_concurrence(d)
