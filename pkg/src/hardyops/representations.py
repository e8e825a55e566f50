"""Subspaces of the form ``T_Phi K_Theta`` and ``R(T_Theta)`` and their defects.

``K_Theta = H^2 ⊖ Theta H^2`` is computed as the range of the exact
compression of ``I - T_Theta T_Theta^*`` (both factors are triangular, so no
truncation loss occurs).  Square inner ``Theta`` gives a finite-dimensional
model space, so ``M = T_Phi K_Theta`` is finite-dimensional and its
orthogonal complement inside the truncated space is exact.  Comparisons of
infinite-dimensional pieces are made on polynomials of degree ``<= w``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import operators as ops
from . import subspaces as sp
from .errors import DimensionMismatch, InvalidParameter, NotInner
from .invariance import almost_defect, nearly_defect
from .symbols import (DEFAULT_INNER_TOL, LaurentSymbol, block, check_inner, evaluate,
                      identity, multiply, star, zero)
from .subspaces import ANGLE_TOL, RANK_TOL, Subspace

PI_TOL_ABS = 1e-8


@dataclass(frozen=True)
class RepSpec:
    """``M = R(T_Phi (I - T_Theta T_Theta^*))`` or ``M = R(T_Theta)``.

    ``flavor`` is ``"phi_model"`` or ``"range_of_inner"``; the latter ignores
    ``Phi``.  ``Theta`` maps ``E -> E1`` and ``Phi`` maps ``E1 -> F``.
    """

    Theta: LaurentSymbol
    N: int
    Phi: LaurentSymbol | None = None
    flavor: str = "phi_model"
    require_pure: bool = True
    inner_tol: float = DEFAULT_INNER_TOL
    label: str = ""

    def __post_init__(self):
        if self.flavor not in ("phi_model", "range_of_inner"):
            raise InvalidParameter(f"unknown flavor {self.flavor!r}")
        if not self.Theta.analytic:
            raise InvalidParameter("Theta must be analytic")
        cert = check_inner(self.Theta, self.inner_tol)
        if not cert.is_inner(self.inner_tol):
            raise NotInner(f"Theta is not inner (residual {cert.left_inner_residual:.3g})")
        if self.flavor == "phi_model":
            if self.Phi is None:
                object.__setattr__(self, "Phi", identity(self.Theta.rows))
            if not self.Phi.analytic:
                raise InvalidParameter("Phi must be analytic")
            if self.Phi.cols != self.Theta.rows:
                raise DimensionMismatch(
                    f"Phi has {self.Phi.cols} columns but Theta has {self.Theta.rows} rows")
            if self.require_pure and not cert.pure:
                raise InvalidParameter(
                    f"Theta has a unitary part of rank {cert.unitary_part_rank}; "
                    "split it off before building a model-space representation")
        if self.N < 1:
            raise InvalidParameter("order must be positive")

    @property
    def dim_E(self) -> int:
        return self.Theta.cols

    @property
    def dim_E1(self) -> int:
        return self.Theta.rows

    @property
    def dim_F(self) -> int:
        return self.Phi.rows if self.flavor == "phi_model" else self.Theta.rows

    def at(self, N: int) -> "RepSpec":
        return RepSpec(self.Theta, N, self.Phi, self.flavor, self.require_pure,
                       self.inner_tol, self.label)


@dataclass(frozen=True)
class PartialIsometryReport:
    residual: float
    tolerance: float
    err_bound: float = 0.0

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


# ---------------------------------------------------------------------------
# building blocks
# ---------------------------------------------------------------------------

def model_projection(Theta: LaurentSymbol, N: int, allow_wide: bool = False) -> ops.TruncatedOp:
    """Exact compression of ``I - T_Theta T_Theta^*``."""
    T = ops.toeplitz(Theta, N, allow_wide=allow_wide)
    return ops.identity_op(N, Theta.rows) - T @ T.H


def model_space(Theta: LaurentSymbol, N: int, tol: float = RANK_TOL,
                inner_tol: float = DEFAULT_INNER_TOL, allow_wide: bool = False) -> Subspace:
    """``K_Theta`` truncated to degrees ``< N``.

    For square ``Theta`` the result is the projection of the model space onto
    the first ``N`` degrees; for a finite Blaschke-Potapov product its rank
    stabilises once ``N`` exceeds the number of zeros.
    """
    cert = check_inner(Theta, inner_tol)
    if not cert.is_inner(inner_tol):
        raise NotInner(f"Theta is not inner (residual {cert.left_inner_residual:.3g})")
    P = model_projection(Theta, N, allow_wide)
    return sp.from_range(P, tol)


def fulle1_rank(Theta: LaurentSymbol, N: int, tol: float = RANK_TOL) -> int:
    """Rank of ``P_{E1} (I - T_Theta T_Theta^*)``; equals ``dim E1`` for pure ``Theta``."""
    P = model_projection(Theta, N)
    return sp.numerical_rank(P.matrix[:Theta.rows], tol)


def rep_operator(spec: RepSpec) -> ops.TruncatedOp:
    """``K = T_Phi (I - T_Theta T_Theta^*)`` (or ``T_Theta``), exactly compressed."""
    if spec.flavor == "range_of_inner":
        return ops.toeplitz(spec.Theta, spec.N)
    return ops.exact_compression(
        lambda n: ops.toeplitz(spec.Phi, n) @ model_projection(spec.Theta, n), spec.N)


def partial_isometry_check(spec: RepSpec, abs_tol: float = PI_TOL_ABS,
                           err_factor: float = 100.0) -> PartialIsometryReport:
    """Residual of ``K^* K - (I - T_Theta T_Theta^*)`` on the exact window."""
    if spec.flavor == "range_of_inner":
        def build(n):
            T = ops.toeplitz(spec.Theta, n)
            return T.H @ T - ops.identity_op(n, spec.dim_E)
    else:
        def build(n):
            P = model_projection(spec.Theta, n)
            K = ops.toeplitz(spec.Phi, n) @ P
            return K.H @ K - P
    D = ops.exact_compression(build, spec.N)
    res = float(np.linalg.norm(D.matrix, 2))
    return PartialIsometryReport(res, err_factor * D.err_bound + abs_tol, D.err_bound)


def build_rep(spec: RepSpec, tol: float = RANK_TOL) -> tuple[Subspace, PartialIsometryReport]:
    """Return ``M`` and the partial isometry certificate."""
    if spec.flavor == "range_of_inner" and spec.Theta.rows == spec.Theta.cols:
        # co-finite: complement of the exact model space
        M = sp.orth_complement(model_space(spec.Theta, spec.N, tol, spec.inner_tol))
    else:
        M = sp.from_range(rep_operator(spec), tol)
    return M, partial_isometry_check(spec)


# ---------------------------------------------------------------------------
# theorem defect spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TheoremDefect:
    """Defect from the closed-form defect space next to the generic rank computation."""

    defect: int
    generic_defect: int
    space: Subspace
    generic_space: Subspace
    angle: float
    expected: int | None = None

    @property
    def passed(self) -> bool:
        ok = self.defect == self.generic_defect and self.angle <= ANGLE_TOL
        return ok and (self.expected is None or self.expected == self.defect)


def _unitary_rank(S: LaurentSymbol, tol: float = DEFAULT_INNER_TOL) -> int:
    return check_inner(S, tol).unitary_part_rank


def boundary_columns(spec: RepSpec) -> np.ndarray | None:
    """Top-degree coordinates ``z^{N-1} F`` when ``M`` is infinite dimensional.

    Cutting an infinite-dimensional ``M`` to degrees ``< N`` breaks backward
    shift invariance only through the coefficient of degree ``N``, which
    ``S^*`` would move to degree ``N - 1``.  Backward shift defects are
    therefore counted modulo these directions.  ``None`` for finite ``M``.
    """
    if spec.Theta.rows == spec.Theta.cols:
        return None
    N, F = spec.N, spec.dim_F
    Z = np.zeros((N * F, F))
    Z[(N - 1) * F:, :] = np.eye(F)
    return Z


def _compare_spaces(W: Subspace, M: Subspace, G: Subspace, modulo=None) -> float:
    """Angle between ``(I - P_M) W`` and the generic orthogonal defect space ``G``."""
    if W.rank == 0 and G.rank == 0:
        return 0.0
    Wp = W.basis - M.basis @ (M.basis.conj().T @ W.basis)
    if modulo is not None:
        Z = modulo - M.basis @ (M.basis.conj().T @ modulo)
        Q = sp.column_space(Z, W.tol)
        Wp = Wp - Q @ (Q.conj().T @ Wp)
    Wo = Subspace(sp.column_space(Wp, W.tol), W.order, W.dim, W.tol)
    if Wo.rank != G.rank:
        return float("inf")
    ang = sp.principal_angles(Wo, G)
    return float(ang.max()) if ang.size else 0.0


def _theorem_space(spec: RepSpec, M: Subspace, source: ops.TruncatedOp, tol: float) -> Subspace:
    R = sp.from_range(source, tol)
    return sp.rel_complement(R, M)


def defect_backshift(spec: RepSpec, tol: float = RANK_TOL,
                     M: Subspace | None = None) -> TheoremDefect:
    """Defect of ``M`` under ``S^*`` from the closed-form defect space.

    For ``R(T_Theta)`` the space is ``R(S^* T_Theta P_E)`` and the defect is
    ``dim E - rank(unitary part)``.  For ``T_Phi K_Theta`` it is
    ``R(S^* T_Phi P_{E1}) ⊖ [R(S^* T_Phi P_{E1}) ∩ M]``.
    """
    if M is None:
        M, _ = build_rep(spec, tol)
    N = spec.N
    Z = boundary_columns(spec)
    generic = almost_defect(ops.backshift(N, spec.dim_F), M, tol, modulo=Z)
    if spec.flavor == "range_of_inner":
        src = ops.exact_compression(
            lambda n: ops.chain(ops.backshift(n, spec.dim_F), ops.toeplitz(spec.Theta, n),
                                ops.proj_const(n, spec.dim_E)), N)
        W = _theorem_space(spec, M, src, tol)
        expected = spec.dim_E - _unitary_rank(spec.Theta, spec.inner_tol)
    else:
        src = ops.exact_compression(
            lambda n: ops.chain(ops.backshift(n, spec.dim_F), ops.toeplitz(spec.Phi, n),
                                ops.proj_const(n, spec.dim_E1)), N)
        W = _theorem_space(spec, M, src, tol)
        expected = None
    return TheoremDefect(W.rank, generic.defect, W, generic.defect_space,
                         _compare_spaces(W, M, generic.defect_space, Z), expected)


def defect_shift(spec: RepSpec, tol: float = RANK_TOL,
                 M: Subspace | None = None) -> TheoremDefect:
    """Defect of ``M`` under ``S`` from ``R(T_Phi T_Theta P_E) ⊖ [... ∩ M]``; zero for ``R(T_Theta)``."""
    if M is None:
        M, _ = build_rep(spec, tol)
    N = spec.N
    generic = almost_defect(ops.shift(N, spec.dim_F), M, tol)
    if spec.flavor == "range_of_inner":
        W = sp.zero_space(N, spec.dim_F)
        expected = 0
    else:
        src = ops.exact_compression(
            lambda n: ops.chain(ops.toeplitz(spec.Phi, n), ops.toeplitz(spec.Theta, n),
                                ops.proj_const(n, spec.dim_E)), N)
        W = _theorem_space(spec, M, src, tol)
        expected = None
    return TheoremDefect(W.rank, generic.defect, W, generic.defect_space,
                         _compare_spaces(W, M, generic.defect_space), expected)


def inner_phi_defects(spec: RepSpec) -> dict:
    """Closed-form defects when ``Phi`` is inner and ``Theta`` inner and pure.

    ``S`` on ``M`` and ``S^*`` on ``M^perp`` give ``dim E``; ``S^*`` on ``M``
    and ``S`` on ``M^perp`` give ``dim E1 - rank(unitary part of Phi)``.
    """
    u = _unitary_rank(spec.Phi, spec.inner_tol)
    return {"shift_M": spec.dim_E, "backshift_Mperp": spec.dim_E,
            "backshift_M": spec.dim_E1 - u, "shift_Mperp": spec.dim_E1 - u}


# ---------------------------------------------------------------------------
# orthogonal complement
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PerpReport:
    Mperp: Subspace
    Phi1: LaurentSymbol
    Theta1: LaurentSymbol
    direct_angle: float
    double_rep_angle: float
    window: int
    double_rep_dims: tuple = ()

    @property
    def passed(self) -> bool:
        return self.direct_angle <= ANGLE_TOL and self.double_rep_angle <= ANGLE_TOL


def perp_symbols(Phi: LaurentSymbol, Theta: LaurentSymbol) -> tuple[LaurentSymbol, LaurentSymbol]:
    """``Phi1 = [Phi Theta, I_F]`` and ``Theta1 = [0; Phi]``."""
    PT = multiply(Phi, Theta)
    F, E, E1 = Phi.rows, Theta.cols, Theta.rows
    Phi1 = block([[PT, identity(F)]])
    Theta1 = block([[zero(E, E1)], [Phi]])
    return Phi1, Theta1


def windowed_equal(X: Subspace, Y: Subspace, w: int, tol: float = ANGLE_TOL):
    """Compare the polynomials of degree ``<= w`` inside ``X`` and ``Y``."""
    Xw = sp.restrict_to_degrees(X, w)
    Yw = sp.restrict_to_degrees(Y, w)
    ok, ang = sp.equal(Xw, Yw, tol)
    return ok, ang, (Xw.rank, Yw.rank)


def perp_rep(spec: RepSpec, tol: float = RANK_TOL, M: Subspace | None = None) -> PerpReport:
    """``M^perp = R(T_{Phi Theta}) ⊕ K_Phi`` and its model-space representation.

    The direct sum is compared with the complement of ``M`` on the full
    truncated space when ``Phi Theta`` and ``Phi`` are square (both pieces
    are then co-finite and finite), and on polynomials of degree ``<= w``
    otherwise.  The second representation ``R(T_Phi1 (I - T_Theta1 T_Theta1^*))``
    has an infinite-dimensional model space and is always compared on
    polynomials of degree ``<= w``, with inputs limited to degrees
    ``<= N - 1 - band(Phi1)`` so no truncated tails enter.
    """
    if spec.flavor != "phi_model":
        raise InvalidParameter("perp_rep needs a phi_model spec")
    cert = check_inner(spec.Phi, spec.inner_tol)
    if not cert.is_inner(spec.inner_tol):
        raise NotInner("Phi must be inner")
    N, F = spec.N, spec.dim_F
    if M is None:
        M, _ = build_rep(spec, tol)
    Mperp = sp.orth_complement(M)
    PT = multiply(spec.Phi, spec.Theta)
    Phi1, Theta1 = perp_symbols(spec.Phi, spec.Theta)
    c = N - 1 - max(PT.n_max, 0)
    if c < 1:
        raise InvalidParameter(f"order {N} too small for band {PT.n_max}")
    w = c // 2
    # direct sum R(T_{Phi Theta}) + K_Phi
    KPhi = model_space(spec.Phi, N, tol, spec.inner_tol) if spec.Phi.rows == spec.Phi.cols \
        else None
    if PT.rows == PT.cols and KPhi is not None:
        RPT = sp.orth_complement(model_space(PT, N, tol, spec.inner_tol))
        direct = sp.sum_(RPT, KPhi, tol)
        ok, direct_angle = sp.equal(direct, Mperp)
    else:
        TPT = ops.toeplitz(PT, N).matrix[:, :(c + 1) * PT.cols]
        KPhi = model_space(spec.Phi, N, tol, spec.inner_tol)
        direct = sp.sum_(sp.from_range(TPT, tol, N, F), KPhi, tol)
        ok, direct_angle, _ = windowed_equal(direct, Mperp, w)
    # double representation
    K1 = ops.toeplitz(Phi1, N) @ model_projection(Theta1, N)
    K1c = K1.matrix[:, :(c + 1) * K1.dim_in]
    Y = sp.from_range(K1c, tol, N, F)
    ok2, ang2, dims = windowed_equal(Y, Mperp, w)
    return PerpReport(Mperp, Phi1, Theta1, direct_angle if np.isfinite(direct_angle) else np.inf,
                      ang2, w, dims)


# ---------------------------------------------------------------------------
# nearly invariance, equivalence, growth
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NearlyReport:
    criterion: bool
    rank_at_zero: int
    needed: int
    nearly_defect: int

    @property
    def passed(self) -> bool:
        return self.criterion == (self.nearly_defect == 0)


def nearly_criterion(spec: RepSpec, tol: float = RANK_TOL, M: Subspace | None = None,
                     literal: bool = False) -> NearlyReport:
    """Full column rank of ``Phi(0)`` (or of ``Theta(0)``) versus the computed defect.

    For ``R(T_Theta)`` the criterion is ``rank Theta(0) = dim E``: ``h = Theta g``
    with ``h(0) = 0`` forces ``g(0) = 0`` exactly when ``Theta(0)`` is
    injective.  ``literal`` asks for ``rank Theta(0) = dim F`` instead, which
    differs only for non-square ``Theta`` and is kept for comparison.
    """
    if M is None:
        M, _ = build_rep(spec, tol)
    if spec.flavor == "phi_model":
        A = evaluate(spec.Phi, 0)
        needed = spec.dim_E1
    else:
        A = evaluate(spec.Theta, 0)
        needed = spec.dim_F if literal else spec.dim_E
    # rank of the value at 0 is measured against an absolute scale
    s = np.linalg.svd(A, compute_uv=False) if A.size else np.zeros(0)
    r = int((s > tol).sum())
    nd = nearly_defect(M, tol, modulo=boundary_columns(spec)).defect
    return NearlyReport(r == needed, r, needed, nd)


@dataclass(frozen=True)
class EquivalenceReport:
    orders: tuple
    backshift: tuple
    shift: tuple

    @property
    def backshift_stable(self) -> bool:
        return len(set(self.backshift)) == 1

    @property
    def shift_stable(self) -> bool:
        return len(set(self.shift)) == 1

    @property
    def passed(self) -> bool:
        return self.backshift_stable == self.shift_stable


def equivalence_check(build, N: int, tol: float = RANK_TOL, orders=None) -> EquivalenceReport:
    """Defects under ``S^*`` and ``S`` at several orders.

    ``build`` maps an order to a :class:`Subspace`.  Both defects must be
    stable together or unstable together.
    """
    orders = tuple(orders or (N, 2 * N))
    back, fwd = [], []
    for n in orders:
        M = build(n)
        back.append(almost_defect(ops.backshift(n, M.dim), M, tol).defect)
        fwd.append(almost_defect(ops.shift(n, M.dim), M, tol).defect)
    return EquivalenceReport(orders, tuple(back), tuple(fwd))


@dataclass(frozen=True)
class GrowthTable:
    orders: tuple
    dims: tuple
    perp_dims: tuple
    classification: str
    note: str = "heuristic: rank growth across finite orders, not a proof of dimension"


def halfspace_probe(spec: RepSpec, orders, tol: float = RANK_TOL) -> GrowthTable:
    """Dimension of ``M`` and ``M^perp`` across orders.

    ``"stabilizing"`` when the last two dimensions agree and stay below the
    order, otherwise ``"growing"``.
    """
    orders = tuple(sorted(orders))
    if len(orders) < 2:
        raise InvalidParameter("need at least two orders")
    dims, perps = [], []
    for n in orders:
        s = spec.at(n)
        if s.flavor == "phi_model":
            K = ops.toeplitz(s.Phi, n, allow_wide=True) @ model_projection(s.Theta, n, True)
            d = sp.from_range(K, tol).rank
        else:
            d = n * s.dim_F - model_space(s.Theta, n, tol, s.inner_tol, True).rank
        dims.append(d)
        perps.append(n * s.dim_F - d)
    stable = dims[-1] == dims[-2] and dims[-1] < orders[-2] * spec.dim_F
    return GrowthTable(orders, tuple(dims), tuple(perps), "stabilizing" if stable else "growing")


@dataclass(frozen=True)
class TwoSidedReport:
    range_angle: float
    partial_isometry_residual: float
    rank: int

    def passed(self, tol: float = 1e-8) -> bool:
        return self.range_angle <= tol and self.partial_isometry_residual <= tol


def two_sided_model_check(Theta: LaurentSymbol, N: int, tol: float = RANK_TOL,
                          inner_tol: float = DEFAULT_INNER_TOL) -> TwoSidedReport:
    """``R(H_{Theta*}^*) = K_Theta`` and ``H_{Theta*}^* H_{Theta*} = I - T_Theta T_Theta^*``."""
    cert = check_inner(Theta, inner_tol)
    if not cert.is_two_sided(inner_tol):
        raise NotInner("Theta is not two-sided inner")
    Ts = star(Theta)
    H = ops.exact_compression(lambda n: ops.hankel(Ts, n, allow_wide=True), N)
    R = sp.from_range(ops.adjoint(H), tol)
    K = model_space(Theta, N, tol, inner_tol)
    ok, ang = sp.equal(R, K)
    D = ops.exact_compression(
        lambda n: ops.hankel(Ts, n, allow_wide=True).H @ ops.hankel(Ts, n, allow_wide=True)
        - model_projection(Theta, n), N)
    return TwoSidedReport(ang, float(np.linalg.norm(D.matrix, 2)), R.rank)


# names used in scenario files
defect_thm_main = defect_backshift
defect_thm_main2 = defect_shift
