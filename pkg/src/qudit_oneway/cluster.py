"""Qudit cluster states, GHZ states and stabilizer checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .algebra import QuditSystem, dagger, gen_x, gen_z, plus_state, apply_local, root_of_unity

STABILIZER_TOL = 1e-10


@dataclass(frozen=True)
class ClusterGraph:
    """Undirected graph on sites ``1..n``."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one site")
        seen = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop at site {a}")
            if not (1 <= a <= self.n and 1 <= b <= self.n):
                raise ValueError(f"edge ({a}, {b}) outside sites 1..{self.n}")
            key = frozenset((a, b))
            if key in seen:
                raise ValueError(f"duplicate edge ({a}, {b})")
            seen.add(key)

    @classmethod
    def linear(cls, n: int) -> "ClusterGraph":
        return cls(n, tuple((k, k + 1) for k in range(1, n)))

    @classmethod
    def parallel_chains(cls, n: int, chains: int = 2) -> "ClusterGraph":
        """``chains`` disjoint linear chains; chain c occupies sites ``c*n+1 .. (c+1)*n``."""
        edges = tuple(
            (c * n + k, c * n + k + 1) for c in range(chains) for k in range(1, n)
        )
        return cls(n * chains, edges)

    @property
    def sites(self) -> list[int]:
        return list(range(1, self.n + 1))

    def neighbors(self, site: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == site:
                out.append(b)
            elif b == site:
                out.append(a)
        return sorted(out)


def _digits(system: QuditSystem) -> np.ndarray:
    """Base-d digits of every basis index, shape ``(d**n, n)``, site 1 first."""
    idx = np.arange(system.dim)
    powers = system.d ** np.arange(system.n - 1, -1, -1)
    return (idx[:, None] // powers[None, :]) % system.d


def entangling_phases(system: QuditSystem, edges: Sequence[tuple[int, int]]) -> np.ndarray:
    """Diagonal of ``prod S^{ab}`` over ``edges`` as a vector of length ``d**n``."""
    dig = _digits(system)
    expo = np.zeros(system.dim, dtype=np.int64)
    for a, b in edges:
        if a == b:
            raise ValueError(f"entangling gate needs two distinct sites, got {a}")
        expo += dig[:, system.axis(a)] * dig[:, system.axis(b)]
    return root_of_unity(system.d) ** (expo % system.d)


def entangling_gate(d: int, site_a: int, site_b: int, system: QuditSystem | None = None) -> np.ndarray:
    """``S^{ab} = sum_kl w**(kl) |k,l><k,l|`` embedded in ``system`` (default: two qudits)."""
    if system is None:
        system = QuditSystem(d, 2)
    if system.d != d:
        raise ValueError(f"system dimension {system.d} != {d}")
    return np.diag(entangling_phases(system, [(site_a, site_b)]))


def build_cluster(
    graph: ClusterGraph,
    d: int,
    inputs: Mapping[int | tuple[int, ...], np.ndarray] | None = None,
) -> np.ndarray:
    """Apply all ``S^{ab}`` of ``graph`` to a product of inputs and ``|+>`` states.

    ``inputs`` maps a site to a single-qudit state, or a tuple of sites to a
    joint state on those sites (in the order given).
    """
    system = QuditSystem(d, graph.n)
    psi = product_with_inputs(system, inputs or {})
    return entangling_phases(system, graph.edges) * psi


def product_with_inputs(
    system: QuditSystem, inputs: Mapping[int | tuple[int, ...], np.ndarray]
) -> np.ndarray:
    d, n = system.d, system.n
    blocks: list[tuple[tuple[int, ...], np.ndarray]] = []
    used: set[int] = set()
    for key, vec in inputs.items():
        sites = (key,) if isinstance(key, int) else tuple(key)
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        if vec.shape[0] != d ** len(sites):
            raise ValueError(f"input on sites {sites} has length {vec.shape[0]}, expected {d ** len(sites)}")
        for s in sites:
            system.axis(s)
            if s in used:
                raise ValueError(f"site {s} given two inputs")
            used.add(s)
        blocks.append((sites, vec / np.linalg.norm(vec)))
    for s in range(1, n + 1):
        if s not in used:
            blocks.append(((s,), plus_state(d)))
    order = [s for sites, _ in blocks for s in sites]
    t = blocks[0][1]
    for _, vec in blocks[1:]:
        t = np.kron(t, vec)
    # current axis i holds site order[i]; move each site to its natural position
    t = t.reshape((d,) * n)
    t = np.moveaxis(t, list(range(n)), [s - 1 for s in order])
    return t.reshape(-1)


def stabilizer(graph: ClusterGraph, d: int, site: int) -> list[tuple[int, np.ndarray]]:
    """Local factors of ``K^(a) = X_a^+ prod_b Z_b`` as ``(site, matrix)`` pairs."""
    factors = [(site, dagger(gen_x(d)))]
    factors += [(b, gen_z(d)) for b in graph.neighbors(site)]
    return factors


def stabilizer_check(state: np.ndarray, graph: ClusterGraph, d: int, tol: float = STABILIZER_TOL):
    """Per-site ``(passed, residual)`` with residual ``||K^(a) phi - phi||``."""
    system = QuditSystem(d, graph.n)
    if state.shape != (system.dim,):
        raise ValueError(f"state has shape {state.shape}, expected ({system.dim},)")
    results = {}
    for a in graph.sites:
        v = state
        for site, op in stabilizer(graph, d, a):
            v = apply_local(op, v, system.dims, site)
        res = float(np.linalg.norm(v - state))
        results[a] = (res <= tol, res)
    return results


def ghz_state(n: int, d: int) -> np.ndarray:
    """``d**-1/2 sum_k |k>^{(x) n}``."""
    if n < 2:
        raise ValueError("GHZ state needs n >= 2")
    system = QuditSystem(d, n)
    psi = np.zeros(system.dim, dtype=complex)
    step = sum(d**p for p in range(n))
    psi[np.arange(d) * step] = 1 / np.sqrt(d)
    return psi
