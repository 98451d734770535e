import math

import numpy as np
import pytest

from conftest import partial_trace_last, random_pure_state

from corrent.states import (
    DensityMatrix,
    PureState,
    density_from_pure,
    make_generalized_ghz,
    make_ghz,
    make_w3,
    mix_white_noise,
    tensor_product,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def test_make_ghz_amplitudes():
    bell = make_ghz(2)
    assert np.allclose(bell.amplitudes, [INV_SQRT2, 0, 0, INV_SQRT2])

    ghz3 = make_ghz(3)
    expected = np.zeros(8)
    expected[0] = expected[7] = INV_SQRT2
    assert np.allclose(ghz3.amplitudes, expected)

    ghz4 = make_ghz(4)
    assert ghz4.amplitudes[15] == pytest.approx(INV_SQRT2, abs=1e-15)


def test_make_ghz_rejects_single_qubit():
    with pytest.raises(ValueError):
        make_ghz(1)


def test_generalized_ghz():
    assert np.allclose(
        make_generalized_ghz(3, math.pi / 4).amplitudes, make_ghz(3).amplitudes
    )
    zero = make_generalized_ghz(3, 0.0)
    assert zero.amplitudes[0] == pytest.approx(1.0)
    assert np.abs(zero.amplitudes[1:]).max() == 0.0

    g4 = make_generalized_ghz(4, math.pi / 8)
    assert g4.amplitudes[0] == pytest.approx(math.cos(math.pi / 8))
    assert g4.amplitudes[15] == pytest.approx(math.sin(math.pi / 8))

    for bad in (-0.1, math.pi / 4 + 0.1):
        with pytest.raises(ValueError):
            make_generalized_ghz(3, bad)


def test_w3():
    w = make_w3()
    third = 1.0 / math.sqrt(3.0)
    assert np.allclose(w.amplitudes[[1, 2, 4]], third)
    assert np.abs(w.amplitudes[[0, 3, 5, 6, 7]]).max() == 0.0
    assert w.norm_sq() == pytest.approx(1.0, abs=1e-15)
    assert w.amplitudes[0] == 0.0  # no overlap with |000>


def test_density_from_pure():
    zero = PureState(1, np.array([1.0, 0.0], dtype=complex))
    assert np.allclose(density_from_pure(zero).entries, np.diag([1.0, 0.0]))

    bell = density_from_pure(make_ghz(2))
    nz = np.abs(bell.entries) > 1e-15
    assert nz.sum() == 4
    assert np.allclose(bell.entries[nz], 0.5)

    w = density_from_pure(make_w3())
    assert w.purity() == pytest.approx(1.0, abs=1e-12)

    with pytest.raises(ValueError):
        density_from_pure(PureState(1, np.array([1.0, 1.0], dtype=complex)))


def test_constructor_outputs_are_valid_unit_purity_states():
    for psi in (make_ghz(2), make_ghz(4), make_generalized_ghz(3, 0.3), make_w3()):
        rho = density_from_pure(psi)
        rho.validate()
        assert rho.purity() == pytest.approx(1.0, abs=1e-12)


def test_mix_white_noise_endpoints():
    rho = density_from_pure(make_ghz(3))
    assert np.allclose(mix_white_noise(rho, 1.0).entries, rho.entries)
    assert np.allclose(mix_white_noise(rho, 0.0).entries, np.eye(8) / 8.0)
    for bad in (-0.01, 1.01):
        with pytest.raises(ValueError):
            mix_white_noise(rho, bad)


def test_mix_white_noise_scales_full_correlations():
    # Derived check: the mixture's Pauli expectations, computed directly,
    # equal the pure state's scaled by v on every non-identity index.
    from conftest import brute_force_tensor

    rho = density_from_pure(make_ghz(3))
    noisy = mix_white_noise(rho, 0.5)
    t_pure = brute_force_tensor(rho)
    t_noisy = brute_force_tensor(noisy)
    assert t_noisy[0, 0, 0] == pytest.approx(1.0, abs=1e-12)
    mask = np.ones((4, 4, 4), dtype=bool)
    mask[0, 0, 0] = False
    assert np.abs(t_noisy[mask] - 0.5 * t_pure[mask]).max() < 1e-12


def test_mix_white_noise_affine_in_v():
    rng = np.random.default_rng(3)
    rho = density_from_pure(random_pure_state(2, rng))
    a, b = 0.2, 0.9
    mid = mix_white_noise(rho, (a + b) / 2).entries
    avg = (mix_white_noise(rho, a).entries + mix_white_noise(rho, b).entries) / 2
    assert np.abs(mid - avg).max() < 1e-14


def test_tensor_product():
    zero = DensityMatrix(1, np.diag([1.0, 0.0]).astype(complex))
    two = tensor_product([zero, zero])
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    assert np.allclose(two.entries, expected)
    assert two.n_qubits == 2

    rng = np.random.default_rng(7)
    rho = density_from_pure(random_pure_state(2, rng))
    half = DensityMatrix(1, np.eye(2, dtype=complex) / 2)
    joint = tensor_product([rho, half])
    assert joint.n_qubits == 3
    assert np.abs(partial_trace_last(joint.entries, 3) - rho.entries).max() < 1e-14

    bell = density_from_pure(make_ghz(2))
    three = tensor_product([bell, zero])
    three.validate()
    assert three.n_qubits == 3

    with pytest.raises(ValueError):
        tensor_product([])


def test_density_matrix_validate_reports_worst_violation():
    bad_trace = DensityMatrix(1, np.diag([0.5, 0.4]).astype(complex))
    with pytest.raises(ValueError, match="trace"):
        bad_trace.validate()
    not_psd = DensityMatrix(1, np.array([[1.5, 0], [0, -0.5]], dtype=complex))
    with pytest.raises(ValueError, match="eigenvalue"):
        not_psd.validate()
    not_herm = DensityMatrix(1, np.array([[0.5, 0.5], [-0.5, 0.5]], dtype=complex))
    with pytest.raises(ValueError, match="Hermitian"):
        not_herm.validate()
