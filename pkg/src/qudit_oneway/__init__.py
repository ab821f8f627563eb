"""Noisy one-way quantum computation on qudit cluster states."""

from .algebra import QuditSystem, fourier, gen_x, gen_z, z_alpha
from .channels import ChannelSpec, KrausSet, ad_kraus, apply_all, apply_single, pd_kraus
from .cluster import ClusterGraph, build_cluster, ghz_state, stabilizer_check
from .encodings import EncodingSpec, encode, encoded_transfer
from .entanglement import max_concurrence, pure_concurrence, quasi_pure_concurrence, wootters_concurrence
from .experiments import ExperimentConfig, run, to_csv
from .gates import OutcomeRecord, byproduct_propagate, t13_matrix, u13_matrix, unitarity_condition
from .mbqc import MeasurementBasis, Protocol, ZeroProbabilityError, bbb1, bbb2, bbb3, measure_site, transfer
from .metrics import HurwitzPoint, average_fidelity, fidelity, hurwitz_state, sample_states

__version__ = "0.1.0"

__all__ = [
    "QuditSystem", "fourier", "gen_x", "gen_z", "z_alpha",
    "ChannelSpec", "KrausSet", "ad_kraus", "apply_all", "apply_single", "pd_kraus",
    "ClusterGraph", "build_cluster", "ghz_state", "stabilizer_check",
    "EncodingSpec", "encode", "encoded_transfer",
    "max_concurrence", "pure_concurrence", "quasi_pure_concurrence", "wootters_concurrence",
    "ExperimentConfig", "run", "to_csv",
    "OutcomeRecord", "byproduct_propagate", "t13_matrix", "u13_matrix", "unitarity_condition",
    "MeasurementBasis", "Protocol", "ZeroProbabilityError", "bbb1", "bbb2", "bbb3", "measure_site", "transfer",
    "HurwitzPoint", "average_fidelity", "fidelity", "hurwitz_state", "sample_states",
]
