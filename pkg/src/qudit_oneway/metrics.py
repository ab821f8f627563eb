"""State fidelity, Hurwitz-parameterized input states and Monte-Carlo averages."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

Measure = Literal["hurwitz", "gaussian"]


def fidelity(psi: np.ndarray, rho: np.ndarray) -> float:
    """Amplitude fidelity ``sqrt(<psi|rho|psi>)`` (not its square)."""
    psi = np.asarray(psi, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (psi.shape[0], psi.shape[0]):
        raise ValueError(f"dimension mismatch: psi {psi.shape}, rho {rho.shape}")
    val = np.vdot(psi, rho @ psi).real
    return float(np.sqrt(min(max(val, 0.0), 1.0)))


@dataclass(frozen=True)
class HurwitzPoint:
    """Angles ``theta_k in [0, pi/2]`` and ``phi_k in [0, 2 pi)`` for ``k = 1..d-1``."""

    thetas: tuple[float, ...]
    phis: tuple[float, ...]

    def __post_init__(self):
        if len(self.thetas) != len(self.phis) or not self.thetas:
            raise ValueError("need d-1 >= 1 theta/phi pairs")
        if any(not 0 <= t <= np.pi / 2 + 1e-15 for t in self.thetas):
            raise ValueError("theta outside [0, pi/2]")
        if any(not 0 <= p < 2 * np.pi for p in self.phis):
            raise ValueError("phi outside [0, 2 pi)")

    @property
    def d(self) -> int:
        return len(self.thetas) + 1


def hurwitz_coefficients(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Coefficients for angle arrays of shape ``(..., d-1)``; returns ``(..., d)``.

    ``c_0 = cos t1``, ``c_j = sin t1 .. sin tj cos t(j+1) e^{i p_j}`` and the last
    coefficient carries the full sine product.
    """
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    m = thetas.shape[-1]
    d = m + 1
    sines = np.cumprod(np.sin(thetas), axis=-1)
    c = np.empty(thetas.shape[:-1] + (d,), dtype=complex)
    c[..., 0] = np.cos(thetas[..., 0])
    for j in range(1, d - 1):
        c[..., j] = sines[..., j - 1] * np.cos(thetas[..., j]) * np.exp(1j * phis[..., j - 1])
    c[..., d - 1] = sines[..., m - 1] * np.exp(1j * phis[..., m - 1])
    return c


def hurwitz_state(point: HurwitzPoint, d: int | None = None) -> np.ndarray:
    if d is not None and d != point.d:
        raise ValueError(f"point has {point.d - 1} angle pairs, expected {d - 1}")
    return hurwitz_coefficients(np.array(point.thetas), np.array(point.phis))


def sample_hurwitz_angles(d: int, rng: np.random.Generator, size: int):
    """Draw ``(thetas, phis)`` of shape ``(size, d-1)`` from the configuration-space measure.

    Angle ``theta_k`` has density proportional to ``cos t sin**(2k-1) t``, whose
    CDF is ``sin**(2k) t``, so it is sampled by inversion.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    k = np.arange(1, d)
    u = rng.random((size, d - 1))
    thetas = np.arcsin(u ** (1.0 / (2 * k)))
    phis = 2 * np.pi * rng.random((size, d - 1))
    return thetas, phis


def sample_hurwitz_point(d: int, rng: np.random.Generator) -> HurwitzPoint:
    t, p = sample_hurwitz_angles(d, rng, 1)
    return HurwitzPoint(tuple(t[0]), tuple(p[0]))


def sample_states(d: int, samples: int, seed: int | np.random.Generator = 0, measure: Measure = "hurwitz") -> np.ndarray:
    """``(samples, d)`` array of random pure states.

    ``"hurwitz"`` uses the angle measure above (for ``d > 2`` it weights the
    low levels, e.g. ``E|c_0|**2 = 1/2``); ``"gaussian"`` normalizes complex
    Gaussian vectors, which is the unitarily invariant measure.  They agree
    for ``d = 2``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if measure == "hurwitz":
        return hurwitz_coefficients(*sample_hurwitz_angles(d, rng, samples))
    if measure == "gaussian":
        z = rng.standard_normal((samples, d)) + 1j * rng.standard_normal((samples, d))
        return z / np.linalg.norm(z, axis=1, keepdims=True)
    raise ValueError(f"unknown measure {measure!r}")


def sample_state(d: int, rng: np.random.Generator, measure: Measure = "hurwitz") -> np.ndarray:
    return sample_states(d, 1, rng, measure)[0]


def mean_se(values: np.ndarray) -> tuple[float, float]:
    """Sample mean and standard error of the mean."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise ValueError("need at least two samples")
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(values.size))


def average_fidelity(
    protocol: Callable[[np.ndarray], np.ndarray],
    d: int,
    samples: int = 2000,
    seed: int = 0,
    measure: Measure = "hurwitz",
) -> tuple[float, float]:
    """Monte-Carlo mean fidelity over input states and its standard error.

    ``protocol`` maps a ``(samples, d)`` batch of input states to their output
    fidelities.
    """
    if samples < 100:
        raise ValueError("averaging needs at least 100 samples")
    states = sample_states(d, samples, seed, measure)
    return mean_se(protocol(states))


def asymptotic_ad_limit(d: int, parity: Literal["odd", "even"], samples: int = 10**6, seed: int = 0):
    """Long-time AD transfer fidelity, which only depends on the parity of the length.

    The output tends to ``|0><0|``; odd lengths overlap it with ``|0>`` of the
    logical state, even lengths with ``|+>``.
    """
    states = sample_states(d, samples, seed)
    if parity == "odd":
        vals = np.abs(states[:, 0])
    elif parity == "even":
        vals = np.abs(states.sum(axis=1)) / np.sqrt(d)
    else:
        raise ValueError("parity must be 'odd' or 'even'")
    return mean_se(vals)
