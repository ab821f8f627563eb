"""Qubit encodings into single qudits or into a pair of qubits (``2x2``)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import dagger, fourier, root_of_unity
from .channels import ChannelSpec
from .mbqc import pair_transfer_protocol, transfer_protocol

NAMES = ("G", "T", "L", "O", "M", "E", "Lambda")
SINGLE = {"G", "T", "L", "E"}
PAIR = {"L", "O", "M", "E"}


@dataclass(frozen=True)
class EncodingSpec:
    """A named encoding of ``a|0> + b|1>`` into dimension ``d`` (or a qubit pair).

    For ``name="Lambda"`` pass an explicit unitary; the logical qubit occupies
    its first two columns.
    """

    name: str
    d: int = 4
    pair: bool = False
    unitary: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.name not in NAMES:
            raise ValueError(f"unknown encoding {self.name!r}")
        if self.pair:
            object.__setattr__(self, "d", 4)
            if self.name not in PAIR | {"Lambda"}:
                raise ValueError(f"encoding {self.name} is not defined for 2x2")
        elif self.name not in SINGLE | {"Lambda"}:
            raise ValueError(f"encoding {self.name} is only defined for 2x2")
        if self.d < 2:
            raise ValueError("dimension must be >= 2")
        if self.name == "Lambda":
            u = np.asarray(self.unitary, dtype=complex) if self.unitary is not None else None
            if u is None or u.shape != (self.d, self.d):
                raise ValueError(f"Lambda encoding needs a {self.d}x{self.d} unitary")
            if np.abs(dagger(u) @ u - np.eye(self.d)).max() > 1e-12:
                raise ValueError("Lambda matrix is not unitary")

    @property
    def label(self) -> str:
        return f"{self.name}_{'2x2' if self.pair else self.d}"

    def isometry(self) -> np.ndarray:
        """``d x 2`` matrix whose columns are the encoded ``|0>`` and ``|1>``."""
        d = self.d
        v = np.zeros((d, 2), dtype=complex)
        if self.name == "Lambda":
            return np.asarray(self.unitary, dtype=complex)[:, :2].copy()
        if self.name == "G":
            v[0, 0] = v[1, 1] = 1
        elif self.name == "T":
            v[d - 2, 0] = v[d - 1, 1] = 1
        elif self.name == "L":
            v[0, 0] = 1
            v[1:, 1] = 1 / np.sqrt(d - 1)
        elif self.name == "O":
            v[0, 0] = v[3, 1] = 1
        elif self.name == "M":
            v[1, 0] = v[2, 1] = 1
        elif self.name == "E":
            v[:, 0] = 1 / np.sqrt(d)
            v[:, 1] = root_of_unity(d) ** np.arange(d) / np.sqrt(d)
        return v

    def lambda_unitary(self) -> np.ndarray:
        """A unitary ``Lambda_d`` whose first two columns are :meth:`isometry`."""
        if self.name == "Lambda":
            return np.asarray(self.unitary, dtype=complex)
        v = self.isometry()
        basis = np.hstack([v, np.eye(self.d, dtype=complex)])
        q, r = np.linalg.qr(basis)
        # undo the QR sign/phase freedom on the first two columns
        q[:, :2] = q[:, :2] * (np.diag(r)[:2] / np.abs(np.diag(r)[:2]))
        return q[:, : self.d]

    def encoded_operator(self, chi: np.ndarray, phases=None) -> np.ndarray:
        """``Lambda (chi (+) R) Lambda^+`` with ``R`` diagonal phases on the complement."""
        d = self.d
        phases = np.zeros(d - 2) if phases is None else np.asarray(phases, dtype=float)
        block = np.zeros((d, d), dtype=complex)
        block[:2, :2] = chi
        block[2:, 2:] = np.diag(np.exp(1j * phases))
        lam = self.lambda_unitary()
        return lam @ block @ dagger(lam)


def encode(spec: EncodingSpec, a: complex, b: complex) -> np.ndarray:
    """Encoded state ``Lambda_d (a|0> + b|1>)``; for 2x2 ordered by binary labels."""
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1) > 1e-12:
        raise ValueError("logical amplitudes must be normalized")
    return spec.isometry() @ np.array([a, b], dtype=complex)


def encoded_protocol(n: int, spec: EncodingSpec):
    return pair_transfer_protocol(n) if spec.pair else transfer_protocol(n, spec.d)


def encoded_transfer(n: int, spec: EncodingSpec, channel: ChannelSpec | None, a: complex, b: complex):
    """Encode, propagate along ``n`` sites (n=1: storage only), and return ``(rho, reference)``.

    ``reference`` is the noise-free propagated encoded state, against which
    the output fidelity is taken.
    """
    psi = encode(spec, a, b)
    proto = encoded_protocol(n, spec)
    rho = proto.run(psi, channel).rho
    return rho, proto.ideal @ psi


def ideal_operator(n: int, spec: EncodingSpec) -> np.ndarray:
    if spec.pair:
        h = fourier(2)
        return np.linalg.matrix_power(np.kron(h, h), n - 1)
    return np.linalg.matrix_power(fourier(spec.d), n - 1)
