import numpy as np
import pytest

import oracles as O
from hardyops import kernels as K
from hardyops import symbols as S
from hardyops.errors import InvalidParameter, WindowRefused
from hardyops.representations import RepSpec, build_rep


def phi(a):
    return S.blaschke_factor(a)


@pytest.fixture(scope="module")
def model():
    return RepSpec(phi(0.5), 48)


def test_kernel_values_at_origin(model):
    assert K.kernel_M(model, 0, 0)[0, 0] == pytest.approx(0.75)
    assert K.kernel_Mperp(model, 0, 0)[0, 0] == pytest.approx(0.25)


def test_kernel_matches_oracle_formula(model):
    f = O.blaschke(0.5)
    z, w = 0.3 - 0.2j, -0.4 + 0.1j
    ref = (1 - f(z) * np.conj(f(w))) / (1 - z * np.conj(w))
    assert K.kernel_M(model, z, w)[0, 0] == pytest.approx(ref, abs=1e-12)


def test_image_of_reproducing_kernel():
    # M = T_phi K_theta is spanned by phi_{0.3} / (1 - 0.5 z)
    spec = RepSpec(phi(0.5), 40, Phi=phi(0.3))
    M, _ = build_rep(spec)
    v = M.basis[:, 0]
    ref = O.series_product(lambda n: O.blaschke_series(0.3, n), lambda n: 0.5 ** n, 40)
    ref /= np.linalg.norm(ref)
    v = v * (np.vdot(v, ref) / abs(np.vdot(v, ref)))
    np.testing.assert_allclose(v[:3], [-0.25980762, 0.65817931, 0.56551459], atol=1e-8)
    assert np.abs(v - ref).max() < 1e-12


def test_complement_identity(model):
    assert K.complement_residual(model, 0.2 + 0.1j, -0.5j) < 1e-14


def test_gram_matrices_are_psd():
    spec = RepSpec(S.multiply(phi(0.4), phi(-0.6j)), 32, Phi=phi(0.2 + 0.2j))
    pts = [0.1, -0.5j, 0.7, 0.3 + 0.4j]
    for perp in (False, True):
        G = K.gram_matrix(spec, pts, perp)
        np.testing.assert_allclose(G, G.conj().T, atol=1e-14)
        assert np.linalg.eigvalsh(G).min() > -1e-12


@pytest.mark.parametrize("perp", [False, True])
@pytest.mark.parametrize("w", [0.0, 0.5j, -0.8])
def test_kernel_consistency(model, w, perp):
    rep = K.kernel_consistency(model, w, [1.0], 64, perp=perp)
    assert rep.passed, rep
    assert rep.lifted_order >= 64


def test_consistency_when_phi_vanishes_at_w():
    spec = RepSpec(phi(0.5), 64, Phi=phi(0.3))
    assert K.kernel_consistency(spec, 0.3, [1.0]).passed


def test_point_outside_certified_radius(model):
    with pytest.raises(InvalidParameter):
        K.kernel_M(model, 0.97, 0)


def test_szego_vector_refuses_large_tail():
    with pytest.raises(WindowRefused):
        K.szego_vector(0.9, [1.0], 16)
    assert K.geometric_tail(0.5, 10) == pytest.approx(0.5 ** 10 / 0.5)
    n = K.order_for_tail(0.9)
    assert K.geometric_tail(0.9, n) <= K.TAIL_TOL < K.geometric_tail(0.9, n - 1)


def test_wrong_fiber_length(model):
    with pytest.raises(InvalidParameter):
        K.kernel_consistency(model, 0.1, [1.0, 0.0])
