"""Seeded parameter sweeps that produce CSV tables."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .algebra import projector
from .channels import ChannelSpec, apply_all
from .cluster import ClusterGraph, build_cluster, ghz_state
from .encodings import EncodingSpec, encoded_protocol
from .entanglement import max_concurrence, quasi_pure_concurrence, wootters_concurrence
from .gates import default_bbb3_angles, restrict
from .mbqc import ZERO_PROBABILITY, ZeroProbabilityError, bbb3_protocol, pair_transfer_protocol, transfer_protocol
from .metrics import fidelity, mean_se, sample_states

EXPERIMENTS = (
    "cluster-fidelity",
    "entanglement-decay",
    "transfer-sweep",
    "encoding-sweep",
    "gate-entanglement",
)
AVERAGED = {"transfer-sweep", "encoding-sweep"}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    d: int = 2
    pair: bool = False
    n: int = 2
    channel: str = "ad"
    rate: float = 1.0
    t_min: float = 0.0
    t_max: float = 3.0
    steps: int = 16
    samples: int = 2000
    seed: int = 0
    encoding: str | None = None
    ghz: bool = False
    out: str | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.channel not in ("ad", "pd"):
            raise ValueError("channel must be 'ad' or 'pd'")
        if self.steps < 2:
            raise ValueError("steps must be >= 2")
        if self.t_min < 0 or self.t_max < self.t_min:
            raise ValueError("need 0 <= t_min <= t_max")
        if self.experiment in AVERAGED and self.samples < 100:
            raise ValueError("averaged experiments need samples >= 100")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.d < 2:
            raise ValueError("d must be >= 2")

    def times(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.steps)

    def channel_at(self, t: float) -> ChannelSpec:
        return ChannelSpec(self.channel, self.rate, float(t))


def _cluster_fidelity(cfg: ExperimentConfig):
    if not 2 <= cfg.n <= 5 or cfg.pair:
        raise ValueError("cluster-fidelity needs 2 <= n <= 5 and a single-qudit dimension")
    d, n = cfg.d, cfg.n
    psi = build_cluster(ClusterGraph.linear(n), d)
    ghz = ghz_state(n, d) if cfg.ghz else None
    header = ["t", "fidelity"] + (["ghz_fidelity"] if cfg.ghz else [])
    rows = []
    for t in cfg.times():
        row = [t, _state_fidelity(psi, d, n, cfg.channel_at(t))]
        if ghz is not None:
            row.append(_state_fidelity(ghz, d, n, cfg.channel_at(t)))
        rows.append(row)
    return header, rows


def _state_fidelity(psi: np.ndarray, d: int, n: int, channel: ChannelSpec) -> float:
    rho = projector(psi)
    if channel.time > 0:
        rho = apply_all(rho, channel, (d,) * n)
    return fidelity(psi, rho)


def cluster_state_fidelity(n: int, d: int, channel: ChannelSpec) -> float:
    return _state_fidelity(build_cluster(ClusterGraph.linear(n), d), d, n, channel)


def ghz_state_fidelity(n: int, d: int, channel: ChannelSpec) -> float:
    return _state_fidelity(ghz_state(n, d), d, n, channel)


def two_qudit_entanglement(rho: np.ndarray, d: int) -> tuple[float, float]:
    """``(concurrence, eig_ratio)``: Wootters for qubits, quasi-pure bound otherwise."""
    if d == 2:
        qp = quasi_pure_concurrence(rho, (2, 2))
        return wootters_concurrence(rho), qp.eig_ratio
    qp = quasi_pure_concurrence(rho, (d, d))
    return qp.concurrence, qp.eig_ratio


def cluster_entanglement(d: int, channel: ChannelSpec) -> tuple[float, float]:
    psi = build_cluster(ClusterGraph.linear(2), d)
    rho = projector(psi)
    if channel.time > 0:
        rho = apply_all(rho, channel, (d, d))
    return two_qudit_entanglement(rho, d)


def _entanglement_decay(cfg: ExperimentConfig):
    if cfg.n != 2 or cfg.pair:
        raise ValueError("entanglement-decay uses the two-qudit cluster (n=2)")
    rows = []
    for t in cfg.times():
        c, ratio = cluster_entanglement(cfg.d, cfg.channel_at(t))
        rows.append([t, c, c / max_concurrence(cfg.d), ratio])
    return ["t", "concurrence", "normalized", "eig_ratio"], rows


def _averaged_rows(cfg: ExperimentConfig, proto, states: np.ndarray):
    rows = []
    for t in cfg.times():
        pm = proto.process_map(cfg.channel_at(t))
        fid, prob = pm.fidelities(states)
        ok = prob >= ZERO_PROBABILITY
        dropped = int((~ok).sum())
        if ok.sum() < 2:
            rows.append([t, 0.0, 0.0, "zero-probability"])
            continue
        mean, se = mean_se(fid[ok])
        rows.append([t, mean, se, "ok" if not dropped else f"dropped={dropped}"])
    return ["t", "mean_fidelity", "se", "status"], rows


def transfer_sweep_protocol(n: int, d: int, pair: bool):
    return pair_transfer_protocol(n) if pair else transfer_protocol(n, d)


def _transfer_sweep(cfg: ExperimentConfig):
    proto = transfer_sweep_protocol(cfg.n, cfg.d, cfg.pair)
    dim = 4 if cfg.pair else cfg.d
    states = sample_states(dim, cfg.samples, cfg.seed)
    return _averaged_rows(cfg, proto, states)


def encoded_states(spec: EncodingSpec, samples: int, seed: int) -> np.ndarray:
    """Encoded versions of qubit inputs drawn with ``seed`` (same draws for every encoding)."""
    qubits = sample_states(2, samples, seed)
    return qubits @ spec.isometry().T


def _encoding_sweep(cfg: ExperimentConfig):
    if cfg.encoding is None:
        raise ValueError("encoding-sweep needs --encoding")
    spec = EncodingSpec(cfg.encoding, cfg.d, cfg.pair)
    proto = encoded_protocol(cfg.n, spec)
    return _averaged_rows(cfg, proto, encoded_states(spec, cfg.samples, cfg.seed))


def bbb3_entanglement(d: int, channel: ChannelSpec, encoded: bool = False) -> tuple[float, float, float]:
    """Entanglement produced by the middle-measured pattern on ``|+>|+>`` inputs.

    With ``encoded`` the inputs are qubit ``|+>`` states in the two lowest
    levels and the output is read as a two-qubit state.  Returns
    ``(concurrence, normalized, eig_ratio)``.
    """
    proto = bbb3_protocol(d, default_bbb3_angles(d), 0)
    if encoded:
        q = np.zeros(d, dtype=complex)
        q[:2] = 1 / np.sqrt(2)
    else:
        q = np.full(d, 1 / np.sqrt(d), dtype=complex)
    rho = proto.run(np.kron(q, q), channel).rho
    if encoded:
        sub = restrict(rho, d)
        leak = 1 - np.trace(sub).real
        if leak > 1e-10:
            raise ValueError(f"encoded output leaked {leak:.2e} out of the qubit subspace")
        c = wootters_concurrence(sub)
        return c, c, quasi_pure_concurrence(sub, (2, 2)).eig_ratio
    c, ratio = two_qudit_entanglement(rho, d)
    return c, c / max_concurrence(d), ratio


def _gate_entanglement(cfg: ExperimentConfig):
    if cfg.pair:
        raise ValueError("gate-entanglement runs on single-qudit clusters")
    encoded = cfg.encoding is not None
    if encoded and cfg.encoding != "G":
        raise ValueError("gate-entanglement supports only the G (lowest levels) encoding")
    rows = []
    for t in cfg.times():
        try:
            c, norm, ratio = bbb3_entanglement(cfg.d, cfg.channel_at(t), encoded)
            rows.append([t, c, norm, ratio, "ok"])
        except ZeroProbabilityError:
            rows.append([t, 0.0, 0.0, 0.0, "zero-probability"])
    return ["t", "concurrence", "normalized", "eig_ratio", "status"], rows


_RUNNERS = {
    "cluster-fidelity": _cluster_fidelity,
    "entanglement-decay": _entanglement_decay,
    "transfer-sweep": _transfer_sweep,
    "encoding-sweep": _encoding_sweep,
    "gate-entanglement": _gate_entanglement,
}


def run(cfg: ExperimentConfig):
    """Return ``(header, rows)`` for the configured experiment."""
    return _RUNNERS[cfg.experiment](cfg)


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    v = float(v)
    if not np.isfinite(v):
        raise ValueError("refusing to write a non-finite value")
    return f"{v:.12g}"


def to_csv(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(header))
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()
