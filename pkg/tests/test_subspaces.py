import numpy as np
import pytest

import oracles as O
from hardyops import operators as P
from hardyops import subspaces as V
from hardyops.errors import DimensionMismatch


def _rand(rng, n, k):
    return rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))


def test_span_is_orthonormal_and_has_rank():
    rng = np.random.default_rng(0)
    A = _rand(rng, 12, 3)
    M = V.span(np.hstack([A, A[:, :1] + A[:, 1:2]]), 12, 1)
    assert M.rank == 3
    np.testing.assert_allclose(M.basis.conj().T @ M.basis, np.eye(3), atol=1e-12)


def test_complement_dimensions():
    M = V.degree_span(8, 2, [0, 3])
    C = V.orth_complement(M)
    assert C.rank == 12
    assert np.abs(M.basis.conj().T @ C.basis).max() < 1e-12


def test_sum_and_intersection_of_coordinate_spaces():
    A = V.degree_span(10, 1, [0, 1, 2, 3])
    B = V.degree_span(10, 1, [2, 3, 4])
    assert V.sum_(A, B).rank == 5
    X = V.intersect(A, B)
    assert X.rank == 2
    assert V.equal(X, V.degree_span(10, 1, [2, 3]))[0]
    assert V.rel_complement(A, B).rank == 2


def test_principal_angles_match_scipy():
    rng = np.random.default_rng(1)
    A, B = _rand(rng, 9, 3), _rand(rng, 9, 2)
    M, L = V.span(A, 9, 1), V.span(B, 9, 1)
    ang = V.principal_angles(M, L)
    assert ang.max() == pytest.approx(O.max_principal_angle(A, B), abs=1e-12)


def test_small_angle_resolution():
    e0 = np.zeros(6); e0[0] = 1
    e1 = np.zeros(6); e1[1] = 1
    M = V.span(e0, 6, 1)
    L = V.span(e0 + 1e-9 * e1, 6, 1)
    assert V.principal_angles(M, L)[0] == pytest.approx(1e-9, rel=1e-6)


def test_contains():
    M = V.degree_span(6, 1, [0, 1])
    ok, res = V.contains(M, V.degree_span(6, 1, [1]))
    assert ok and res == 0
    assert not V.contains(M, V.degree_span(6, 1, [2]))[0]


def test_kernel_of_backshift_is_constants():
    K = V.kernel(P.backshift(7, 2))
    assert V.equal(K, V.degree_span(7, 2, [0]))[0]


def test_restrict_to_degrees():
    M = V.degree_span(8, 1, [0, 1, 5])
    R = V.restrict_to_degrees(M, 2)
    assert V.equal(R, V.degree_span(8, 1, [0, 1]))[0]


def test_vanishing_at_zero():
    rng = np.random.default_rng(2)
    M = V.span(_rand(rng, 10, 3), 10, 1)
    M1 = V.vanishing_at_zero(M)
    assert M1.rank == 2
    assert np.abs(M1.basis[0]).max() < 1e-12


def test_rebase_preserves_subspace():
    rng = np.random.default_rng(3)
    M = V.span(_rand(rng, 10, 4), 10, 1)
    assert V.equal(M, V.rebase(M, rng))[0]


def test_ambient_mismatch():
    with pytest.raises(DimensionMismatch):
        V.sum_(V.whole_space(4, 1), V.whole_space(4, 2))
