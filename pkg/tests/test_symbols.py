import math

import numpy as np
import pytest

import oracles as O
from hardyops import symbols as S
from hardyops.errors import InvalidParameter, NotInner


def test_blaschke_coefficient_two_matches_fft_oracle():
    phi = S.blaschke_factor(0.5)
    ref = O.fft_coefficients(O.blaschke(0.5), 0, 5)
    assert phi.coefficient(2)[0, 0] == pytest.approx(0.375, abs=1e-15)
    for n in range(6):
        assert abs(phi.coefficient(n)[0, 0] - ref[n]) < 1e-14


def test_blaschke_band_and_tail():
    phi = S.blaschke_factor(0.5)
    assert (phi.n_min, phi.n_max) == (0, 41)
    assert 0 < phi.tail_bound <= 1e-12
    assert S.blaschke_factor(0).n_max == 1


def test_blaschke_rejects_boundary():
    with pytest.raises(InvalidParameter):
        S.blaschke_factor(1.0)


def test_blaschke_values():
    phi = S.blaschke_factor(0.5)
    assert S.evaluate(phi, 1)[0, 0] == pytest.approx(1.0, abs=1e-11)
    assert S.evaluate(phi, 0)[0, 0] == pytest.approx(-0.5)
    assert abs(S.evaluate(phi, 0.5)[0, 0]) < 1e-12


def test_potapov_factor_value_at_its_zero():
    Q = S.blaschke_potapov_factor(0.5, np.diag([1.0, 0.0]))
    np.testing.assert_allclose(S.evaluate(Q, 0.5), np.diag([1, 0]), atol=1e-12)


def test_potapov_rejects_identity_projection():
    with pytest.raises(InvalidParameter):
        S.blaschke_potapov_factor(0.3, np.eye(2))
    with pytest.raises(InvalidParameter):
        S.blaschke_potapov_factor(0.3, np.array([[1.0, 1.0], [0.0, 0.0]]))


def test_product_value_at_zero_is_minus_quarter():
    # grid evaluation oracle: (-0.5)(0.5)
    P = S.multiply(S.blaschke_factor(0.5), S.blaschke_factor(-0.5))
    assert O.blaschke(0.5)(0) * O.blaschke(-0.5)(0) == pytest.approx(-0.25)
    assert S.evaluate(P, 0)[0, 0] == pytest.approx(-0.25, abs=1e-13)


def test_tilde_of_z_and_involution():
    z = S.monomial(1)
    t = S.tilde(z)
    assert t.as_dict().keys() == {1}
    assert t.coefficient(1)[0, 0] == 1
    A = S.from_coefficients({-1: [[1 + 2j, 3]], 2: [[0.5j, -1]]})
    assert np.array_equal(S.tilde(S.tilde(A)).coeffs, A.coeffs)


def test_star_is_pointwise_adjoint():
    A = S.multiply(S.blaschke_potapov_factor(0.4j, np.diag([0, 1.0])), S.constant([[1, 2j], [0, 1]]))
    vals = S.sample(A, 128)
    np.testing.assert_allclose(S.sample(S.star(A), 128), np.conj(np.swapaxes(vals, 1, 2)),
                               atol=1e-12)


def test_sampling_round_trip_within_tail():
    A = S.multiply(S.blaschke_factor(0.6), S.star(S.blaschke_factor(-0.2 + 0.3j)))
    vals = S.sample(A, 512)
    back = S.coefficients_from_samples(vals, A.n_min, A.n_max)
    assert np.abs(back - A.coeffs).max() <= 10 * A.tail_bound + 1e-12


def test_inner_certificate_for_product():
    th = S.multiply(S.blaschke_factor(0.5), S.blaschke_factor(-0.3))
    cert = S.check_inner(th)
    assert cert.left_inner_residual <= 10 * 1e-12
    assert cert.pure and cert.unitary_part_rank == 0


def test_inner_certificate_detects_unitary_part():
    th = S.diag(S.blaschke_factor(0.5), S.identity(1))
    cert = S.check_inner(th)
    assert cert.is_two_sided()
    assert cert.unitary_part_rank == 1
    assert cert.pure_part_dims == (1, 1)


def test_non_inner_symbol_fails_certificate():
    A = S.from_coefficients([0.5, 0.5])
    assert not S.check_inner(A).is_inner()


def test_hitt_sarason_g_at_zero():
    g, th = S.hitt_sarason_pair(S.blaschke_factor(-0.5))
    assert S.evaluate(g, 0)[0, 0].real == pytest.approx(math.sqrt(3) / 2, abs=1e-12)
    assert abs(S.evaluate(th, 0)[0, 0]) < 1e-12
    assert S.check_inner(th).left_inner_residual <= 10 * (1e-12 + 1e-12) + 1e-10


def test_hitt_sarason_with_vanishing_value():
    phi = S.multiply(S.monomial(1), S.blaschke_factor(0.4))
    g, th = S.hitt_sarason_pair(phi)
    np.testing.assert_allclose(g.coeffs, S.identity(1).coeffs)
    np.testing.assert_allclose(S.sample(th, 64), -S.sample(phi, 64), atol=1e-14)


def test_hitt_sarason_rejects_non_inner():
    with pytest.raises(NotInner):
        S.hitt_sarason_pair(S.from_coefficients([0.5, 0.5]))


def test_block_and_diag_shapes():
    b = S.blaschke_factor(0.2)
    assert S.block([[b], [S.monomial(1)]]).shape == (2, 1)
    assert S.diag(b, S.identity(2)).shape == (3, 3)
