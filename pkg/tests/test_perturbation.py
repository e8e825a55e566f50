import numpy as np
import pytest

from hardyops import operators as P
from hardyops import perturbation as T
from hardyops import subspaces as V
from hardyops import symbols as S
from hardyops.errors import InvalidParameter, MembershipError, VerificationFailed
from hardyops.representations import RepSpec, build_rep

N = 64


def phi(a):
    return S.blaschke_factor(a)


@pytest.fixture(scope="module")
def spec():
    return RepSpec(S.multiply(phi(0.4), phi(-0.3j)), N, Phi=phi(0.3))


@pytest.fixture(scope="module")
def M(spec):
    return build_rep(spec)[0]


def test_unknown_kind():
    with pytest.raises(InvalidParameter):
        T.PerturbationSpec("t9")


@pytest.mark.parametrize("kind", T.KINDS)
def test_synthesis_passes(kind, spec, M):
    out = T.synthesize(kind, spec, M=M)
    assert out.passed
    assert out.report.worst <= T.INVARIANCE_TOL
    assert out.core_rank <= out.rank_bound


def test_core_rank_bounds(spec, M):
    assert T.synth_t0_shift(spec, M=M).core_rank <= spec.dim_E
    assert T.synth_t1_backshift(spec, M=M).core_rank <= spec.dim_E1
    assert T.synth_t2_reducing(spec, M=M).core_rank <= spec.dim_E + spec.dim_E1


def test_sign_flip_is_detected(spec, M):
    out = T.synth_t0_shift(spec, M=M, sign=-1.0, check=False)
    assert out.report.residual >= 1e-3
    with pytest.raises(VerificationFailed):
        T.synth_t0_shift(spec, M=M, sign=-1.0)


def test_literal_shift_core_fails(spec, M):
    # the core without the inner shift annihilates M and leaves the defect intact
    out = T.synth_t0_shift(spec, M=M, literal=True, check=False)
    assert out.report.residual >= 1e-3


def test_literal_reducing_core_fails(spec, M):
    out = T.synth_t2_reducing(spec, M=M, literal=True, check=False)
    assert out.report.worst >= 1e-3


def test_dropping_backshift_part_of_reducing_core_fails():
    sp1 = RepSpec(phi(0.5), N, Phi=phi(0.3))
    M1 = build_rep(sp1)[0]
    out = T.synth_t2_reducing(sp1, M=M1, signs=(1.0, 0.0), check=False)
    assert out.report.adjoint_residual >= 1e-3


def test_free_terms_are_validated(spec, M):
    x = M.basis[:, 0]
    y = np.random.default_rng(0).normal(size=M.size)
    ok = T.PerturbationSpec("t0_shift", terms_M=[(x, y)])
    assert T.synth_t0_shift(spec, ok, M=M).passed
    Mp = V.orth_complement(M)
    bad = T.PerturbationSpec("t0_shift", terms_M=[(Mp.basis[:, 0], y)])
    with pytest.raises(MembershipError) as err:
        T.synth_t0_shift(spec, bad, M=M)
    assert err.value.which == "terms_M" and err.value.index == 0


def test_perp_free_terms(spec, M):
    Mp = V.orth_complement(M)
    u = np.random.default_rng(1).normal(size=M.size)
    good = T.PerturbationSpec("t0_shift", terms_perp=[(u, Mp.basis[:, 3])])
    assert T.synth_t0_shift(spec, good, M=M).passed


def test_core_matches_generic(spec, M):
    assert T.core_vs_generic(spec, M) < 1e-10


def test_decomposition_is_complete(spec, M):
    out = T.synth_t1_backshift(spec, M=M)
    d = T.decompose_perturbation(out.op, P.backshift(N), M)
    assert d.residual < 1e-10 and d.cross_residual < 1e-10


def test_general_perturbation_for_coordinate_space():
    M = V.degree_span(16, 1, [0, 3])
    out = T.synth_t0_general(P.shift(16), M)
    assert out.passed and out.core_rank == 2


def test_reducing_mode_checks_adjoint():
    M = V.degree_span(12, 1, [0, 1, 2])
    rep = T.verify_invariance(P.shift(12), M, "reducing")
    assert rep.residual == pytest.approx(1.0)
    assert rep.adjoint_residual == 0
    with pytest.raises(InvalidParameter):
        T.verify_invariance(P.shift(12), M, "other")
