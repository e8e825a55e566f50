import numpy as np
import pytest

from hardyops import representations as R
from hardyops import subspaces as V
from hardyops import symbols as S
from hardyops.errors import DimensionMismatch, InvalidParameter, NotInner


def phi(a):
    return S.blaschke_factor(a)


def test_spec_validation():
    with pytest.raises(NotInner):
        R.RepSpec(S.from_coefficients([0.5, 0.5]), 16)
    with pytest.raises(DimensionMismatch):
        R.RepSpec(phi(0.3), 16, Phi=S.identity(2))
    with pytest.raises(InvalidParameter):
        R.RepSpec(S.diag(phi(0.3), S.identity(1)), 16)
    with pytest.raises(InvalidParameter):
        R.RepSpec(phi(0.3), 16, flavor="other")


def test_default_phi_gives_model_space():
    spec = R.RepSpec(phi(0.5), 32)
    M, rep = R.build_rep(spec)
    assert rep.passed
    assert V.equal(M, R.model_space(phi(0.5), 32))[0]


def test_model_space_dimension_counts_zeros():
    th = S.multiply(S.multiply(phi(0.5), phi(-0.3j)), phi(0.1))
    assert R.model_space(th, 40).rank == 3
    assert R.fulle1_rank(th, 40) == 1


def test_range_of_inner_is_complement_of_model_space():
    spec = R.RepSpec(phi(0.4), 24, flavor="range_of_inner")
    M, rep = R.build_rep(spec)
    assert M.rank == 23 and rep.passed


def test_inner_phi_rep_is_partial_isometry():
    spec = R.RepSpec(phi(0.5), 48, Phi=phi(-0.2 + 0.4j))
    M, rep = R.build_rep(spec)
    assert rep.passed and M.rank == 1
    # T_phi applied to the kernel at 0.5
    k = 0.5 ** np.arange(48)
    assert V.contains(M, R.rep_operator(spec).matrix @ k, 1e-8)[0]


def test_non_inner_phi_fails_partial_isometry():
    spec = R.RepSpec(phi(0.5), 48, Phi=S.from_coefficients([0.5, 0.5]))
    _, rep = R.build_rep(spec)
    assert not rep.passed


@pytest.mark.parametrize("a", [0.5, -0.3j])
def test_backshift_and_shift_defects(a):
    spec = R.RepSpec(phi(a), 48, Phi=phi(0.3))
    b = R.defect_backshift(spec)
    s = R.defect_shift(spec)
    assert b.passed and s.passed
    expected = R.inner_phi_defects(spec)
    assert s.defect == expected["shift_M"] == 1
    assert b.defect == expected["backshift_M"] == 1


def test_range_of_inner_defects():
    spec = R.RepSpec(S.block([[S.scale(phi(0.3), 0.6)], [S.scale(phi(-0.5), 0.8)]]), 40, flavor="range_of_inner")
    b = R.defect_backshift(spec)
    assert b.passed and b.defect == 1
    assert R.defect_shift(spec).defect == 0


def test_perp_symbols_shapes():
    Phi1, Theta1 = R.perp_symbols(phi(0.2), phi(0.5))
    assert Phi1.shape == (1, 2) and Theta1.shape == (2, 1)


def test_perp_of_z_times_model_space_of_z():
    # M = span{z}, so the complement is span{1, z^2, ..., z^7}
    spec = R.RepSpec(S.monomial(1), 8, Phi=S.monomial(1))
    rep = R.perp_rep(spec)
    assert rep.passed
    assert V.equal(rep.Mperp, V.degree_span(8, 1, [0, 2, 3, 4, 5, 6, 7]))[0]


def test_perp_rep_generic():
    spec = R.RepSpec(S.multiply(phi(0.4), phi(-0.2j)), 64, Phi=phi(0.3 + 0.3j))
    assert R.perp_rep(spec).passed


def test_nearly_criterion():
    good = R.nearly_criterion(R.RepSpec(phi(0.5), 32, Phi=phi(0.3)))
    assert good.criterion and good.nearly_defect == 0
    bad = R.nearly_criterion(R.RepSpec(phi(0.5), 32, Phi=S.monomial(1)))
    assert not bad.criterion and bad.nearly_defect == 1
    assert good.passed and bad.passed


def test_equivalence_for_finite_and_cofinite():
    fin = R.equivalence_check(lambda n: R.model_space(phi(0.5), n), 32)
    assert fin.passed and fin.backshift_stable
    rng = R.equivalence_check(
        lambda n: R.build_rep(R.RepSpec(phi(0.5), n, flavor="range_of_inner"))[0], 32)
    assert rng.passed


def test_halfspace_probe_monomial():
    spec = R.RepSpec(S.monomial(40), 64, flavor="phi_model")
    g = R.halfspace_probe(spec, (32, 48, 64))
    assert g.dims == (32, 40, 40)
    assert g.classification == "stabilizing"
    assert "heuristic" in g.note


def test_two_sided_model_check():
    rep = R.two_sided_model_check(S.multiply(phi(0.5), phi(0.2j)), 32)
    assert rep.passed() and rep.rank == 2
    with pytest.raises(NotInner):
        R.two_sided_model_check(S.block([[S.scale(phi(0.3), 0.6)], [S.scale(phi(0.1), 0.8)]]), 16)


def _column_theta(first):
    return S.block([[S.scale(first, 0.6)], [S.scale(phi(-0.5), 0.8)]])


def test_nearly_criterion_for_column_inner_range():
    spec = R.RepSpec(_column_theta(phi(0.3)), 40, flavor="range_of_inner")
    rep = R.nearly_criterion(spec)
    assert rep.criterion and rep.nearly_defect == 0 and rep.needed == 1
    # requiring full row rank would wrongly reject this nearly invariant space
    assert not R.nearly_criterion(spec, literal=True).passed


def test_nearly_criterion_fails_when_theta_vanishes_at_zero():
    spec = R.RepSpec(S.block([[S.scale(S.monomial(1), 0.6)], [S.scale(S.monomial(1), 0.8)]]),
                     40, flavor="range_of_inner")
    rep = R.nearly_criterion(spec)
    assert not rep.criterion and rep.nearly_defect == 1 and rep.passed


@pytest.mark.parametrize("N", [40, 80])
def test_column_range_defect_is_stable(N):
    spec = R.RepSpec(_column_theta(phi(0.3)), N, flavor="range_of_inner")
    assert R.boundary_columns(spec).shape == (2 * N, 2)
    b = R.defect_backshift(spec)
    assert b.passed and b.generic_defect == 1
