import numpy as np
import pytest

from qudit_oneway.algebra import fourier, is_unitary
from qudit_oneway.channels import ChannelSpec
from qudit_oneway.encodings import EncodingSpec, encode, encoded_transfer, ideal_operator
from qudit_oneway.metrics import fidelity


def test_table_states():
    a, b = 0.6, 0.8j
    assert np.allclose(encode(EncodingSpec("G", 3), a, b), [a, b, 0])
    assert np.allclose(encode(EncodingSpec("T", 3), a, b), [0, a, b])
    assert np.allclose(encode(EncodingSpec("T", 4), a, b), [0, 0, a, b])
    assert np.allclose(encode(EncodingSpec("L", 4), a, b), [a, b / np.sqrt(3), b / np.sqrt(3), b / np.sqrt(3)])
    assert np.allclose(encode(EncodingSpec("O", pair=True), a, b), [a, 0, 0, b])
    assert np.allclose(encode(EncodingSpec("M", pair=True), a, b), [0, a, b, 0])
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(encode(EncodingSpec("E", 3), a, b), [(a + w**n * b) / np.sqrt(3) for n in range(3)])
    assert np.allclose(encode(EncodingSpec("E", pair=True), a, b), [(a + 1j**n * b) / 2 for n in range(4)])


def test_encoding_validation():
    with pytest.raises(ValueError):
        EncodingSpec("O", 4)
    with pytest.raises(ValueError):
        EncodingSpec("G", pair=True)
    with pytest.raises(ValueError):
        EncodingSpec("Lambda", 3, unitary=np.ones((3, 3)))
    with pytest.raises(ValueError):
        encode(EncodingSpec("G", 3), 1, 1)


@pytest.mark.parametrize("name,d,pair", [("G", 3, False), ("L", 4, False), ("E", 4, False), ("M", 4, True), ("L", 4, True)])
def test_lambda_unitary_completion(name, d, pair):
    spec = EncodingSpec(name, d, pair)
    lam = spec.lambda_unitary()
    assert is_unitary(lam)
    assert np.allclose(lam[:, :2], spec.isometry())
    chi = fourier(2)
    op = spec.encoded_operator(chi, phases=np.zeros(d - 2))
    v = encode(spec, 0.6, 0.8)
    assert np.allclose(op @ v, spec.isometry() @ (chi @ [0.6, 0.8]))


def test_custom_lambda():
    u = np.linalg.qr(np.random.default_rng(0).standard_normal((3, 3)))[0]
    spec = EncodingSpec("Lambda", 3, unitary=u)
    assert np.allclose(encode(spec, 1, 0), u[:, 0])


@pytest.mark.parametrize("pair", [False, True])
def test_noiseless_encoded_transfer_is_exact(pair):
    spec = EncodingSpec("L", 4, pair)
    rho, ref = encoded_transfer(3, spec, None, 0.6, 0.8)
    assert np.isclose(fidelity(ref, rho), 1)
    assert np.allclose(ideal_operator(3, spec) @ encode(spec, 0.6, 0.8), ref)


def test_storage_under_noise_reduces_fidelity():
    rho, ref = encoded_transfer(1, EncodingSpec("T", 3), ChannelSpec("ad", 1.0, 1.0), 0.6, 0.8)
    assert fidelity(ref, rho) < 1
