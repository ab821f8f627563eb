"""Measurement patterns on noisy qudit clusters.

A :class:`Protocol` describes a pattern: the cluster graph, which sites carry
the logical input, which sites are measured (post-selected onto a fixed basis
vector) and which sites hold the output.  The whole cluster is exposed to the
local channel for the full time, then all measurements happen at once.
Because noise is local, each measured site is damped and projected in turn,
which gives the same result as damping everything first but keeps the
working matrices small.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .algebra import QuditSystem, dagger, fourier, gen_x, plus_state, projector, tensor, z_alpha
from .channels import ChannelSpec, KrausSet, apply_single
from .cluster import ClusterGraph, entangling_phases

ZERO_PROBABILITY = 1e-14


class ZeroProbabilityError(ValueError):
    """A post-selected measurement branch has (numerically) zero probability."""


class Branch(NamedTuple):
    probability: float
    rho: np.ndarray


@dataclass(frozen=True)
class MeasurementBasis:
    """``B({alpha}) = {Z^({alpha}) |+_j>}``."""

    d: int
    alphas: tuple[float, ...] = None

    def __post_init__(self):
        if self.alphas is None:
            object.__setattr__(self, "alphas", (0.0,) * self.d)
        if len(self.alphas) != self.d:
            raise ValueError(f"basis needs {self.d} angles, got {len(self.alphas)}")
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))

    def vector(self, outcome: int) -> np.ndarray:
        if not 0 <= outcome < self.d:
            raise ValueError(f"outcome {outcome} outside 0..{self.d - 1}")
        return z_alpha(self.d, self.alphas) @ plus_state(self.d, outcome)

    def matrix(self) -> np.ndarray:
        """Columns are the basis vectors for outcomes ``0..d-1``."""
        return np.stack([self.vector(j) for j in range(self.d)], axis=1)


def project_site(rho: np.ndarray, dims: Sequence[int], site: int, vec: np.ndarray):
    """``<v|_site rho |v>_site`` with the site removed; returns ``(operator, dims)``."""
    dims = tuple(dims)
    n = len(dims)
    ax = site - 1
    r = rho.reshape(dims + dims)
    r = np.tensordot(r, np.conj(vec), axes=([ax], [0]))
    r = np.tensordot(r, vec, axes=([n - 1 + ax], [0]))
    rest = dims[:ax] + dims[ax + 1 :]
    dr = int(np.prod(rest)) if rest else 1
    return r.reshape(dr, dr), rest


def measure_site(rho: np.ndarray, system: QuditSystem, site: int, basis: MeasurementBasis, outcome: int):
    """Project ``site`` onto basis vector ``outcome`` and trace it out.

    Returns ``(probability, post_state)``.  ``post_state`` is ``None`` when the
    probability is below ``ZERO_PROBABILITY``.
    """
    system.axis(site)
    if basis.d != system.d:
        raise ValueError("basis dimension does not match system")
    out, _ = project_site(rho, system.dims, site, basis.vector(outcome))
    prob = float(np.trace(out).real)
    if prob < ZERO_PROBABILITY:
        return prob, None
    return prob, out / prob


def _noise(channel: ChannelSpec | KrausSet | None, d: int):
    if channel is None:
        return None
    if isinstance(channel, ChannelSpec):
        if channel.time == 0:
            return None
        return channel.kraus(d)
    return channel


@dataclass(frozen=True)
class Protocol:
    """A post-selected measurement pattern on a cluster of ``d``-level sites."""

    graph: ClusterGraph
    d: int
    input_sites: tuple[int, ...]
    measured: tuple[tuple[int, np.ndarray], ...]
    output_sites: tuple[int, ...]
    ideal: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        measured_sites = [s for s, _ in self.measured]
        if sorted(measured_sites + list(self.output_sites)) != self.graph.sites:
            raise ValueError("measured and output sites must partition the cluster")

    @property
    def input_dim(self) -> int:
        return self.d ** len(self.input_sites)

    @property
    def output_dim(self) -> int:
        return self.d ** len(self.output_sites)

    def initial_operator(self, input_op: np.ndarray) -> np.ndarray:
        """Cluster operator ``S (X_in (x) |+><+|...) S^+`` for any input operator."""
        d, n = self.d, self.graph.n
        system = QuditSystem(d, n)
        rest = [s for s in self.graph.sites if s not in self.input_sites]
        plus = projector(plus_state(d))
        op = input_op
        for _ in rest:
            op = np.kron(op, plus)
        order = list(self.input_sites) + rest
        src = list(range(n))
        dst = [s - 1 for s in order]
        r = op.reshape((d,) * (2 * n))
        r = np.moveaxis(r, src + [n + i for i in src], dst + [n + j for j in dst])
        op = r.reshape(system.dim, system.dim)
        phases = entangling_phases(system, self.graph.edges)
        return phases[:, None] * op * phases.conj()[None, :]

    def evolve(self, input_op: np.ndarray, channel=None) -> np.ndarray:
        """Unnormalized output operator on ``output_sites`` (linear in ``input_op``)."""
        kraus = _noise(channel, self.d)
        rho = self.initial_operator(input_op)
        labels = list(self.graph.sites)
        dims = (self.d,) * len(labels)
        for site, vec in self.measured:
            pos = labels.index(site) + 1
            if kraus is not None:
                rho = apply_single(rho, pos, kraus, dims)
            rho, dims = project_site(rho, dims, pos, vec)
            labels.remove(site)
        if kraus is not None:
            for pos in range(1, len(labels) + 1):
                rho = apply_single(rho, pos, kraus, dims)
        # remaining labels are ascending; reorder to output_sites order
        if list(self.output_sites) != labels:
            k = len(labels)
            perm = [labels.index(s) for s in self.output_sites]
            r = rho.reshape(dims + dims).transpose(perm + [k + p for p in perm])
            rho = r.reshape(rho.shape)
        return rho

    def run(self, state: np.ndarray, channel=None) -> Branch:
        """Normalized post-selected output for a pure input vector or density matrix."""
        state = np.asarray(state, dtype=complex)
        op = projector(state) if state.ndim == 1 else state
        if op.shape != (self.input_dim, self.input_dim):
            raise ValueError(f"input has shape {op.shape}, expected dimension {self.input_dim}")
        out = self.evolve(op, channel)
        prob = float(np.trace(out).real)
        if prob < ZERO_PROBABILITY:
            raise ZeroProbabilityError(f"post-selected branch has probability {prob:.3e}")
        return Branch(prob, out / prob)

    def process_map(self, channel=None) -> "ProcessMap":
        din = self.input_dim
        dout = self.output_dim
        blocks = np.zeros((din, din, dout, dout), dtype=complex)
        for i in range(din):
            for j in range(i, din):
                unit = np.zeros((din, din), dtype=complex)
                unit[i, j] = 1.0
                blocks[i, j] = self.evolve(unit, channel)
                if j != i:
                    blocks[j, i] = dagger(blocks[i, j])
        return ProcessMap(blocks, self.ideal)


@dataclass(frozen=True)
class ProcessMap:
    """Unnormalized linear map ``|i><j| -> blocks[i, j]`` plus the ideal circuit."""

    blocks: np.ndarray
    ideal: np.ndarray | None = None

    def __call__(self, psi: np.ndarray) -> Branch:
        out = np.einsum("i,j,ijab->ab", psi, psi.conj(), self.blocks)
        prob = float(np.trace(out).real)
        if prob < ZERO_PROBABILITY:
            raise ZeroProbabilityError(f"post-selected branch has probability {prob:.3e}")
        return Branch(prob, out / prob)

    def fidelities(self, states: np.ndarray, targets: np.ndarray | None = None, chunk: int = 8192):
        """Fidelities ``sqrt(<phi|rho|phi>)`` for a batch of input rows.

        ``targets`` defaults to ``ideal @ psi``.  Returns ``(fidelity, probability)``.
        """
        states = np.atleast_2d(states)
        if targets is None:
            if self.ideal is None:
                raise ValueError("no ideal circuit to build targets from")
            targets = states @ self.ideal.T
        din, _, dout, _ = self.blocks.shape
        flat = self.blocks.reshape(din * din, dout * dout)
        fid = np.empty(len(states))
        prob = np.empty(len(states))
        for lo in range(0, len(states), chunk):
            s = states[lo : lo + chunk]
            t = targets[lo : lo + chunk]
            w = (s[:, :, None] * s.conj()[:, None, :]).reshape(len(s), din * din)
            out = (w @ flat).reshape(len(s), dout, dout)
            p = np.einsum("saa->s", out).real
            num = np.einsum("sa,sab,sb->s", t.conj(), out, t).real
            prob[lo : lo + chunk] = p
            with np.errstate(divide="ignore", invalid="ignore"):
                fid[lo : lo + chunk] = np.sqrt(np.clip(num / p, 0.0, 1.0))
        return fid, prob


def transfer_protocol(n: int, d: int) -> Protocol:
    """Linear cluster of length ``n``; input on site 1, sites ``1..n-1`` measured in ``B({0})``, s=0."""
    if n < 1:
        raise ValueError("cluster length must be >= 1")
    vec = MeasurementBasis(d).vector(0)
    ideal = np.linalg.matrix_power(fourier(d), n - 1)
    return Protocol(
        ClusterGraph.linear(n), d, (1,), tuple((s, vec) for s in range(1, n)), (n,), ideal
    )


def pair_transfer_protocol(n: int) -> Protocol:
    """Two parallel qubit chains of length ``n`` carrying one 4-level unit on sites ``(1, n+1)``."""
    if n < 1:
        raise ValueError("cluster length must be >= 1")
    vec = MeasurementBasis(2).vector(0)
    h = fourier(2)
    ideal = np.linalg.matrix_power(np.kron(h, h), n - 1)
    measured = tuple((s, vec) for s in range(1, n)) + tuple((n + s, vec) for s in range(1, n))
    return Protocol(ClusterGraph.parallel_chains(n, 2), 2, (1, n + 1), measured, (n, 2 * n), ideal)


def transfer(n: int, d: int, psi: np.ndarray, channel=None) -> np.ndarray:
    """Propagate ``psi`` along an ``n``-site linear cluster (all outcomes s=0)."""
    return transfer_protocol(n, d).run(psi, channel).rho


def transfer_pair(n: int, psi: np.ndarray, channel=None) -> np.ndarray:
    """Propagate a 4-dimensional state ``psi`` on two parallel qubit chains."""
    return pair_transfer_protocol(n).run(psi, channel).rho


def bbb1_protocol(d: int, alphas: Sequence[float], outcome: int = 0) -> Protocol:
    basis = MeasurementBasis(d, tuple(alphas))
    ideal = fourier(d) @ z_alpha(d, -np.asarray(basis.alphas))
    return Protocol(ClusterGraph.linear(2), d, (1,), ((1, basis.vector(outcome)),), (2,), ideal)


def bbb1(psi: np.ndarray, alphas: Sequence[float], outcome: int = 0, channel=None, decode: bool = True) -> Branch:
    """Two-site pattern; site 1 measured in ``B({alpha})``.

    With ``decode`` the correction ``X^s`` is applied to the output so every
    noiseless branch equals ``F Z^(-{alpha}) psi``.
    """
    psi = np.asarray(psi, dtype=complex)
    d = psi.shape[0]
    branch = bbb1_protocol(d, alphas, outcome).run(psi, channel)
    if decode and outcome:
        fix = np.linalg.matrix_power(gen_x(d), outcome)
        return Branch(branch.probability, fix @ branch.rho @ dagger(fix))
    return branch


def bbb2(q1: np.ndarray, q2: np.ndarray, channel=None) -> np.ndarray:
    """Two logical inputs joined by ``S_12`` with no measurement."""
    q1 = np.asarray(q1, dtype=complex)
    d = q1.shape[0]
    proto = Protocol(ClusterGraph.linear(2), d, (1, 2), (), (1, 2), np.diag(entangling_phases(QuditSystem(d, 2), [(1, 2)])))
    return proto.run(tensor(q1, np.asarray(q2, dtype=complex)), channel).rho


def bbb3_protocol(d: int, alphas: Sequence[float], outcome: int = 0) -> Protocol:
    from .gates import t13_matrix

    basis = MeasurementBasis(d, tuple(alphas))
    return Protocol(
        ClusterGraph.linear(3), d, (1, 3), ((2, basis.vector(outcome)),), (1, 3),
        t13_matrix(d, basis.alphas, outcome),
    )


def bbb3(q1: np.ndarray, q3: np.ndarray, alphas: Sequence[float], outcome: int = 0, channel=None) -> Branch:
    """Three-site pattern with inputs on sites 1 and 3 and the middle site measured."""
    q1 = np.asarray(q1, dtype=complex)
    d = q1.shape[0]
    return bbb3_protocol(d, alphas, outcome).run(tensor(q1, np.asarray(q3, dtype=complex)), channel)
