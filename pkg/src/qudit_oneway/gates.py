"""Two-qudit gates realized by patterns, and byproduct bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize

from .algebra import dagger, fourier, gen_x, gen_z, root_of_unity, z_alpha

CONDITION_TOL = 1e-10


def _dft_of_phases(d: int, alphas: Sequence[float]) -> np.ndarray:
    """``g_q = sum_j w**(jq) exp(-i alpha_j)`` for ``q = 0..d-1``."""
    alphas = np.asarray(alphas, dtype=float)
    if alphas.shape != (d,):
        raise ValueError(f"expected {d} angles, got shape {alphas.shape}")
    j = np.arange(d)
    w = root_of_unity(d) ** (np.outer(j, j) % d)
    return w @ np.exp(-1j * alphas)


def t13_matrix(d: int, alphas: Sequence[float], outcome: int = 0) -> np.ndarray:
    """``T_13(s) = d**-1/2 sum_{k,l,j} w**(j(k+l-s)) exp(-i alpha_j) |k,l><k,l|``."""
    g = _dft_of_phases(d, alphas)
    k, l = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    q = (k + l - outcome) % d
    return np.diag(g[q].reshape(-1) / np.sqrt(d))


def u13_matrix(d: int, alphas: Sequence[float]) -> np.ndarray:
    """``sum_kl exp(i alpha_{-(k+l)}) |k,l><k,l|``."""
    alphas = np.asarray(alphas, dtype=float)
    k, l = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return np.diag(np.exp(1j * alphas[(-(k + l)) % d]).reshape(-1))


class UnitarityReport(NamedTuple):
    holds: bool
    residuals: np.ndarray
    phase_holds: bool
    phase_residuals: np.ndarray


def unitarity_condition(d: int, alphas: Sequence[float], tol: float = CONDITION_TOL) -> UnitarityReport:
    """Check ``|sum_j w**(jq) e^{-i alpha_j}|**2 = d`` for every ``q = (k+l) mod d``.

    The phase condition compares ``d**-1/2 g_q`` with ``exp(i alpha_{-q})``; when
    it holds (with s=0) the pattern realizes :func:`u13_matrix`.
    """
    alphas = np.asarray(alphas, dtype=float)
    g = _dft_of_phases(d, alphas)
    res = np.abs(np.abs(g) ** 2 - d)
    q = np.arange(d)
    phase_res = np.abs(g / np.sqrt(d) - np.exp(1j * alphas[(-q) % d]))
    return UnitarityReport(bool(res.max() <= tol), res, bool(phase_res.max() <= tol), phase_res)


def quadratic_phase_angles(d: int) -> tuple[float, ...]:
    """Chirp angles whose phase vector has a flat spectrum, valid for any ``d``."""
    j = np.arange(d)
    if d % 2:
        a = -2 * np.pi * j**2 / d
    else:
        a = -np.pi * j**2 / d
    return tuple(np.mod(a, 2 * np.pi))


def default_bbb3_angles(d: int) -> tuple[float, ...]:
    """Angles for which the middle-measured pattern is unitary.

    For d=4, ``(0, 0, 0, pi)`` also keeps the lowest two levels of each qudit
    maximally entangling, which the encoded-qubit experiment relies on.
    """
    if d == 2:
        return (0.0, np.pi / 2)
    if d == 4:
        return (0.0, 0.0, 0.0, np.pi)
    return quadratic_phase_angles(d)


def e12_gate() -> np.ndarray:
    """Qutrit controlled phase ``exp(2 pi i / 3)`` on ``|11>``, identity on every other level."""
    diag = np.ones(9, dtype=complex)
    diag[1 * 3 + 1] = np.exp(2j * np.pi / 3)
    return np.diag(diag)


def restrict(op: np.ndarray, d: int, levels: Sequence[int] = (0, 1)) -> np.ndarray:
    """Two-qudit operator restricted to ``levels (x) levels``."""
    idx = [a * d + b for a in levels for b in levels]
    return op[np.ix_(idx, idx)]


def controlled_z() -> np.ndarray:
    return np.diag([1, 1, 1, -1]).astype(complex)


_MAGIC = np.array(
    [[1, 0, 0, 1j], [0, 1j, 1, 0], [0, 1j, -1, 0], [1, 0, 0, -1j]], dtype=complex
) / np.sqrt(2)


def makhlin_invariants(u: np.ndarray) -> tuple[complex, float]:
    """Local-equivalence invariants ``(G1, G2)`` of a two-qubit unitary."""
    ub = dagger(_MAGIC) @ u @ _MAGIC
    m = ub.T @ ub
    det = np.linalg.det(u)
    tr = np.trace(m)
    g1 = tr**2 / (16 * det)
    g2 = (tr**2 - np.trace(m @ m)) / (4 * det)
    return complex(g1), float(g2.real)


def su2(params: Sequence[float]) -> np.ndarray:
    a, b, c = params
    rz = lambda t: np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])
    ry = np.array([[np.cos(b / 2), -np.sin(b / 2)], [np.sin(b / 2), np.cos(b / 2)]])
    return rz(a) @ ry @ rz(c)


def _locals(p: np.ndarray) -> np.ndarray:
    return np.kron(su2(p[:3]), su2(p[3:6]))


def gate_fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """Phase-insensitive overlap ``|tr(u^+ v)| / dim``."""
    return float(abs(np.trace(dagger(u) @ v)) / u.shape[0])


def local_equivalence_search(target: np.ndarray, u: np.ndarray, starts: int = 20, seed: int = 0):
    """Best ``(K1 (x) K2) u (K3 (x) K4)`` approximating ``target``; returns ``(fidelity, params)``."""
    rng = np.random.default_rng(seed)

    def loss(p):
        return 1 - gate_fidelity(target, _locals(p[:6]) @ u @ _locals(p[6:]))

    best = None
    for _ in range(starts):
        r = minimize(loss, rng.uniform(0, 2 * np.pi, 12), method="BFGS", options={"gtol": 1e-12})
        if best is None or r.fun < best.fun:
            best = r
        if best.fun < 1e-10:
            break
    return 1 - best.fun, best.x


def double_e12(p: Sequence[float]) -> np.ndarray:
    """``E (A (x) B) E`` on the qubit subspace, with ``A, B`` from six Euler angles."""
    e = restrict(e12_gate(), 3)
    return e @ _locals(np.asarray(p)) @ e


def find_double_e12_cz(starts: int = 20, seed: int = 0):
    """Interleaving locals making two ``E_12`` applications locally equivalent to CZ."""
    rng = np.random.default_rng(seed)
    g1_cz, g2_cz = makhlin_invariants(controlled_z())

    def loss(p):
        g1, g2 = makhlin_invariants(double_e12(p))
        return abs(g1 - g1_cz) ** 2 + (g2 - g2_cz) ** 2

    best = None
    for _ in range(starts):
        r = minimize(loss, rng.uniform(0, 2 * np.pi, 6), method="BFGS", options={"gtol": 1e-14})
        if best is None or r.fun < best.fun:
            best = r
        if best.fun < 1e-16:
            break
    return best.x, best.fun


@dataclass(frozen=True)
class OutcomeRecord:
    """Byproduct ``X^x Z^z`` on each logical qudit (1-based), exponents mod ``d``."""

    d: int
    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        if len(self.x) != len(self.z):
            raise ValueError("x and z exponent lists differ in length")
        object.__setattr__(self, "x", tuple(int(v) % self.d for v in self.x))
        object.__setattr__(self, "z", tuple(int(v) % self.d for v in self.z))

    @classmethod
    def empty(cls, d: int, qudits: int) -> "OutcomeRecord":
        return cls(d, (0,) * qudits, (0,) * qudits)

    @classmethod
    def from_outcome(cls, d: int, outcome: int) -> "OutcomeRecord":
        """Single-qudit decoding record ``D(s) = X^s`` after a one-step pattern."""
        return cls(d, (outcome,), (0,))

    def operator(self, qudit: int) -> np.ndarray:
        q = qudit - 1
        return np.linalg.matrix_power(gen_x(self.d), self.x[q]) @ np.linalg.matrix_power(gen_z(self.d), self.z[q])

    def full_operator(self) -> np.ndarray:
        out = np.eye(1)
        for q in range(1, len(self.x) + 1):
            out = np.kron(out, self.operator(q))
        return out


def byproduct_propagate(record: OutcomeRecord, gates: Sequence[tuple]):
    """Move the byproduct from before ``gates`` to after them.

    Gates are ``("F", q)``, ``("Z", q, alphas)`` for ``Z^({alpha})`` and
    ``("S", q1, q2)``, applied in sequence.  Returns ``(record', gates')`` with
    ``G_k..G_1 B = B' G'_k..G'_1`` up to a global phase; ``Z`` gates acquire
    cyclically shifted angle sets where an ``X`` passes through them.
    """
    d = record.d
    x, z = list(record.x), list(record.z)
    adapted = []
    for gate in gates:
        kind = gate[0]
        if kind == "F":
            q = gate[1] - 1
            x[q], z[q] = z[q], -x[q]
            adapted.append(gate)
        elif kind == "Z":
            q = gate[1] - 1
            alphas = np.asarray(gate[2], dtype=float)
            if alphas.shape != (d,):
                raise ValueError(f"Z gate needs {d} angles")
            # Z^{a} X^x = X^x Z^{a'} with a'_j = a_{j-x}
            shifted = np.roll(alphas, x[q] % d)
            adapted.append(("Z", gate[1], tuple(shifted)))
        elif kind == "S":
            a, b = gate[1] - 1, gate[2] - 1
            if a == b:
                raise ValueError("S gate needs two distinct qudits")
            z[a], z[b] = z[a] - x[b], z[b] - x[a]
            adapted.append(gate)
        else:
            raise ValueError(f"unsupported gate {kind!r}")
    return OutcomeRecord(d, tuple(x), tuple(z)), adapted


def gate_matrix(gate: tuple, d: int, qudits: int) -> np.ndarray:
    """Full matrix of one gate in a ``byproduct_propagate`` sequence."""
    from .algebra import QuditSystem, embed_at_site
    from .cluster import entangling_gate

    system = QuditSystem(d, qudits)
    kind = gate[0]
    if kind == "F":
        return embed_at_site(fourier(d), system, gate[1])
    if kind == "Z":
        return embed_at_site(z_alpha(d, gate[2]), system, gate[1])
    if kind == "S":
        return entangling_gate(d, gate[1], gate[2], system)
    raise ValueError(f"unsupported gate {kind!r}")
