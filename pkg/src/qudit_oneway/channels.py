"""Amplitude- and phase-damping channels on truncated d-level systems.

Each qudit is treated as a bosonic mode truncated to ``d`` levels and coupled
to its own zero-temperature environment.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Literal, Sequence

import numpy as np

from .algebra import QuditSystem, dagger

COMPLETENESS_TOL = 1e-10
MAX_LINDBLAD_STEP = 1e-4


@dataclass(frozen=True)
class KrausSet:
    d: int
    operators: tuple[np.ndarray, ...]

    def completeness_residual(self) -> float:
        total = sum(dagger(k) @ k for k in self.operators)
        return float(np.abs(total - np.eye(self.d)).max())

    def superoperator(self) -> np.ndarray:
        """``S[a, b, c, e] = sum_mu K[a, c] conj(K[b, e])``, i.e. ``rho_ab <- S_abce rho_ce``."""
        return sum(np.einsum("ac,be->abce", k, k.conj()) for k in self.operators)

    def __len__(self):
        return len(self.operators)


@dataclass(frozen=True)
class ChannelSpec:
    """Homogeneous local noise: ``kind`` at ``rate`` for exposure ``time``."""

    kind: Literal["ad", "pd"]
    rate: float = 1.0
    time: float = 0.0

    def __post_init__(self):
        if self.kind not in ("ad", "pd"):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if self.rate <= 0:
            raise ValueError("rate must be positive")
        if self.time < 0:
            raise ValueError("exposure time must be non-negative")

    @property
    def gamma(self) -> float:
        return float(np.exp(-self.rate * self.time))

    @property
    def tau(self) -> float:
        return self.rate * self.time

    def at(self, time: float) -> "ChannelSpec":
        return ChannelSpec(self.kind, self.rate, time)

    def kraus(self, d: int) -> KrausSet:
        if self.kind == "ad":
            return ad_kraus(d, self.gamma)
        return pd_kraus(d, self.tau)


def ad_kraus(d: int, gamma: float) -> KrausSet:
    """Truncated amplitude damping, one operator per number of lost excitations."""
    if not 0 < gamma <= 1:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    if d < 2:
        raise ValueError("d must be >= 2")
    ops = []
    for mu in range(d):
        a = np.zeros((d, d), dtype=complex)
        for n in range(mu, d):
            a[n - mu, n] = np.sqrt(comb(n, mu) * gamma ** (n - mu) * (1 - gamma) ** mu)
        ops.append(a)
    return KrausSet(d, tuple(ops))


def dephasing_kernel(d: int, tau: float) -> np.ndarray:
    n = np.arange(d)
    return np.exp(-0.5 * tau * (n[:, None] - n[None, :]) ** 2)


def pd_kraus(d: int, tau: float) -> KrausSet:
    """Finite phase-damping family from the spectral decomposition of the dephasing kernel."""
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    if tau == 0:
        return KrausSet(d, (np.eye(d, dtype=complex),))
    vals, vecs = np.linalg.eigh(dephasing_kernel(d, tau))
    ops = tuple(
        np.sqrt(lam) * np.diag(vecs[:, k]).astype(complex)
        for k, lam in enumerate(vals)
        if lam > 1e-300
    )
    return KrausSet(d, ops)


def pd_kraus_raw(d: int, tau: float, mu: int) -> np.ndarray:
    """One member of the unbounded diagonal PD family, truncated to ``d`` levels."""
    n = np.arange(d, dtype=float)
    x = n**2 * tau
    return np.diag(np.exp(-0.5 * x) * np.sqrt(x**mu / factorial(mu))).astype(complex)


def _as_kraus(kraus: KrausSet | ChannelSpec, d: int) -> KrausSet:
    if isinstance(kraus, ChannelSpec):
        return kraus.kraus(d)
    if kraus.d != d:
        raise ValueError(f"Kraus dimension {kraus.d} != system dimension {d}")
    return kraus


def _apply_super(rho: np.ndarray, dims: tuple[int, ...], ax: int, sup: np.ndarray) -> np.ndarray:
    n = len(dims)
    r = rho.reshape(dims + dims)
    r = np.tensordot(sup, r, axes=([2, 3], [ax, n + ax]))
    r = np.moveaxis(r, [0, 1], [ax, n + ax])
    return r.reshape(rho.shape)


def apply_single(
    rho: np.ndarray, site: int, kraus: KrausSet | ChannelSpec, system: QuditSystem | Sequence[int]
) -> np.ndarray:
    """``sum_mu K_mu rho K_mu^+`` on one 1-based ``site``.

    ``rho`` may be any operator (not necessarily Hermitian); the map is linear.
    """
    dims = system.dims if isinstance(system, QuditSystem) else tuple(system)
    ax = site - 1
    if not 0 <= ax < len(dims):
        raise ValueError(f"site {site} out of range 1..{len(dims)}")
    ks = _as_kraus(kraus, dims[ax])
    return _apply_super(rho, dims, ax, ks.superoperator())


def apply_all(
    rho: np.ndarray,
    channel: KrausSet | ChannelSpec,
    system: QuditSystem | Sequence[int],
    order: Sequence[int] | None = None,
) -> np.ndarray:
    """The same local channel on every site; ``order`` only permutes application order."""
    dims = system.dims if isinstance(system, QuditSystem) else tuple(system)
    sites = order if order is not None else range(1, len(dims) + 1)
    sups: dict[int, np.ndarray] = {}
    for site in sites:
        d = dims[site - 1]
        if d not in sups:
            sups[d] = _as_kraus(channel, d).superoperator()
        rho = _apply_super(rho, dims, site - 1, sups[d])
    return rho


def pd_closed_form(rho: np.ndarray, tau: float, system: QuditSystem | Sequence[int]) -> np.ndarray:
    """Elementwise PD law: ``rho[n, m] *= prod_i exp(-tau (n_i - m_i)**2 / 2)``."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    dims = system.dims if isinstance(system, QuditSystem) else tuple(system)
    grids = np.indices(dims).reshape(len(dims), -1)
    diff2 = ((grids[:, :, None] - grids[:, None, :]) ** 2).sum(axis=0)
    return rho * np.exp(-0.5 * tau * diff2)


def annihilation(d: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, d)), k=1).astype(complex)


def lindblad_rk4(rho0: np.ndarray, generator, t: float, step: float) -> np.ndarray:
    """Fixed-step classical Runge-Kutta integration of ``drho/dt = generator(rho)``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return np.array(rho0, dtype=complex)
    steps = int(np.ceil(t / step - 1e-9))
    h = t / steps
    rho = np.array(rho0, dtype=complex)
    for _ in range(steps):
        k1 = generator(rho)
        k2 = generator(rho + 0.5 * h * k1)
        k3 = generator(rho + 0.5 * h * k2)
        k4 = generator(rho + h * k3)
        rho = rho + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
    return rho


def _check_step(rate: float, step: float | None) -> float:
    limit = MAX_LINDBLAD_STEP / rate
    if step is None:
        return limit
    if step > limit * (1 + 1e-12):
        raise ValueError(f"step {step} exceeds stability bound {limit} (1e-4 / rate)")
    return step


def lindblad_oracle_ad(
    rho0: np.ndarray, d: int, gamma_rate: float, t: float, step: float | None = None
) -> np.ndarray:
    """Integrate the zero-temperature AD master equation for one qudit."""
    step = _check_step(gamma_rate, step)
    a = annihilation(d)
    ad = dagger(a)
    nop = ad @ a

    def gen(r):
        return 0.5 * gamma_rate * (2 * a @ r @ ad - nop @ r - r @ nop)

    return lindblad_rk4(rho0, gen, t, step)


def lindblad_oracle_pd(
    rho0: np.ndarray, d: int, gamma_rate: float, t: float, step: float | None = None
) -> np.ndarray:
    """Integrate the PD master equation for one qudit."""
    step = _check_step(gamma_rate, step)
    nop = np.diag(np.arange(d)).astype(complex)
    n2 = nop @ nop

    def gen(r):
        return 0.5 * gamma_rate * (2 * nop @ r @ nop - n2 @ r - r @ n2)

    return lindblad_rk4(rho0, gen, t, step)
