import numpy as np
import pytest

from hardyops import invariance as I
from hardyops import operators as P
from hardyops import subspaces as V
from hardyops import symbols as S
from hardyops.errors import DimensionMismatch, InvalidParameter
from hardyops.representations import model_space

N = 64


@pytest.fixture(scope="module")
def kernel_line():
    return model_space(S.blaschke_factor(0.5), N)


def test_model_space_is_one_dimensional(kernel_line):
    assert kernel_line.rank == 1
    v = kernel_line.basis[:, 0]
    ref = 0.5 ** np.arange(N)
    ref /= np.linalg.norm(ref)
    assert abs(abs(np.vdot(ref, v)) - 1) < 1e-12


def test_shift_defect_singular_value(kernel_line):
    rep = I.almost_defect(P.shift(N), kernel_line)
    assert rep.defect == 1
    # closed form sqrt(1 - |a|^2) for the normalized reproducing kernel
    assert rep.singular_values[0] == pytest.approx(np.sqrt(0.75), abs=1e-12)
    assert rep.residual < 1e-12


def test_backshift_invariance(kernel_line):
    assert I.almost_defect(P.backshift(N), kernel_line).defect == 0


def test_nearly_defect_of_coordinate_space():
    # span{1, z^2}: S* z^2 = z is outside, and z^2 is the only vector vanishing at 0
    M = V.degree_span(12, 1, [0, 2])
    assert I.nearly_defect(M).defect == 1
    assert I.nearly_defect(V.degree_span(12, 1, [0, 1, 2])).defect == 0


def test_duality(kernel_line):
    assert I.duality_check(P.shift(N), kernel_line).passed
    M = V.degree_span(16, 2, [1, 3])
    rep = I.duality_check(P.shift(16, 2), M)
    assert rep.passed and rep.forward == 4


def test_enlarged_defect_formula():
    T = P.shift(20)
    M = V.degree_span(20, 1, [0, 4])
    W = I.almost_defect(T, M).defect_space
    rep = I.enlarged_defect(T, M, W)
    assert rep.passed and rep.formula == 2


def test_enlarged_defect_rejects_non_defect_space():
    M = V.degree_span(20, 1, [0])
    with pytest.raises(InvalidParameter):
        I.enlarged_defect(P.shift(20), M, V.degree_span(20, 1, [5]))


def test_absorption_chain_is_nonincreasing():
    chain = I.absorption_chain(P.shift(24), V.degree_span(24, 1, [0, 3, 7]), 4)
    assert len(chain) == 5
    assert I.is_nonincreasing([d for _, d in chain])
    assert chain[0] == (3, 3)


def test_essential_perturbation_restores_invariance(kernel_line):
    T = P.shift(N)
    t0 = I.essential_t0(T, kernel_line)
    assert I.invariance_residual(T + t0, kernel_line) < 1e-12
    assert I.invariance_residual(T, kernel_line) == pytest.approx(np.sqrt(0.75), abs=1e-12)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        I.almost_defect(P.shift(8, 2), V.whole_space(8, 1))
