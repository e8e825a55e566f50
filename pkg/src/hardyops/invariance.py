"""Defects of almost invariant and nearly invariant subspaces.

The defect of ``M`` under ``T`` is the smallest dimension of a space ``W``
with ``TM ⊆ M + W``.  For a finite-rank defect it equals
``rank((I - P_M) T P_M)`` and the range of that operator is the unique
minimal defect space orthogonal to ``M``; that is what is computed here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import DimensionMismatch, InvalidParameter, WindowRefused
from .operators import TruncatedOp, adjoint, backshift, identity_op
from .subspaces import (RANK_TOL, Subspace, apply, column_space, contains,
                        orth_complement, projector, sum_, vanishing_at_zero,
                        zero_space)


@dataclass(frozen=True)
class DefectReport:
    """Defect value with its minimal orthogonal defect space."""

    defect: int
    defect_space: Subspace
    residual: float
    window_guard: int
    singular_values: tuple = ()

    def to_dict(self) -> dict:
        return {"defect": self.defect, "residual": self.residual,
                "guard": self.window_guard,
                "singular_values": [float(s) for s in self.singular_values[:8]]}


def _check(T: TruncatedOp, M: Subspace):
    if (T.order, T.dim_in) != M.ambient or T.dim_in != T.dim_out:
        raise DimensionMismatch(
            f"operator order {T.order} dims {T.dim_out}x{T.dim_in} vs subspace {M.ambient}")
    if 2 * T.guard >= T.order:
        raise WindowRefused(
            f"guard {T.guard} is at least half the order {T.order}; ranks are not trustworthy")


def defect_operator(T: TruncatedOp, M: Subspace) -> np.ndarray:
    """Columns ``(I - P_M) T b`` for the basis vectors ``b`` of ``M``."""
    TB = T.matrix @ M.basis
    return TB - M.basis @ (M.basis.conj().T @ TB)


def _report_from(D: np.ndarray, M: Subspace, tol: float, guard: int) -> DefectReport:
    if D.shape[1] == 0:
        return DefectReport(0, zero_space(M.order, M.dim), 0.0, guard)
    U, s, _ = np.linalg.svd(D, full_matrices=False)
    thr = tol * max(s[0] if s.size else 0.0, 1.0)
    r = int((s > thr).sum())
    W = Subspace(U[:, :r], M.order, M.dim, tol)
    R = D - W.basis @ (W.basis.conj().T @ D)
    res = float(np.linalg.norm(R, 2)) if R.size else 0.0
    return DefectReport(r, W, res, guard, tuple(float(x) for x in s))


def _quotient(D: np.ndarray, M: Subspace, modulo, tol: float) -> np.ndarray:
    """Remove from ``D`` the directions ``(I - P_M) Z`` spanned by the columns of ``modulo``."""
    if modulo is None:
        return D
    Z = np.asarray(modulo, dtype=complex)
    Z = Z - M.basis @ (M.basis.conj().T @ Z)
    Q = column_space(Z, tol)
    return D - Q @ (Q.conj().T @ D)


def almost_defect(T: TruncatedOp, M: Subspace, tol: float = RANK_TOL,
                  modulo=None) -> DefectReport:
    """Defect of ``M`` under ``T`` and the minimal orthogonal defect space.

    ``modulo`` holds columns whose directions are discounted, used to drop
    artifacts that truncation creates at the top degree.
    """
    _check(T, M)
    return _report_from(_quotient(defect_operator(T, M), M, modulo, tol), M, tol, T.guard)


def defect_space_pivoted(T: TruncatedOp, M: Subspace, tol: float = RANK_TOL) -> Subspace:
    """Second, independent route to the defect space: pivoted QR of the defect columns."""
    _check(T, M)
    D = defect_operator(T, M)
    if D.shape[1] == 0:
        return zero_space(M.order, M.dim)
    Q, R, _ = sla.qr(D, mode="economic", pivoting=True)
    d = np.abs(np.diag(R))
    thr = tol * max(d[0] if d.size else 0.0, 1.0)
    r = int((d > thr).sum())
    return Subspace(Q[:, :r], M.order, M.dim, tol)


def nearly_defect(M: Subspace, tol: float = RANK_TOL, modulo=None) -> DefectReport:
    """Defect of ``M`` as a nearly backward-shift invariant subspace.

    ``M1`` is the part of ``M`` vanishing at 0; the defect is the rank of
    ``(I - P_M) S^* P_{M1}``.
    """
    M1 = vanishing_at_zero(M)
    Sb = backshift(M.order, M.dim)
    # the image of M1 is compared against M itself
    SB = Sb.matrix @ M1.basis
    D = SB - M.basis @ (M.basis.conj().T @ SB)
    return _report_from(_quotient(D, M, modulo, tol), M, tol, Sb.guard)


@dataclass(frozen=True)
class DualityReport:
    forward: int
    dual: int

    @property
    def passed(self) -> bool:
        return self.forward == self.dual


def duality_check(T: TruncatedOp, M: Subspace, tol: float = RANK_TOL) -> DualityReport:
    """Compare the defect of ``M`` under ``T`` with that of ``M^perp`` under ``T^*``."""
    if T.dim_in != T.dim_out:
        raise DimensionMismatch("duality needs a square operator")
    a = almost_defect(T, M, tol).defect
    b = almost_defect(adjoint(T), orth_complement(M), tol).defect
    return DualityReport(a, b)


@dataclass(frozen=True)
class EnlargementReport:
    formula: int
    recomputed: int
    containment_residual: float

    @property
    def passed(self) -> bool:
        return self.formula == self.recomputed


def enlarged_defect(T: TruncatedOp, M: Subspace, W: Subspace, tol: float = RANK_TOL,
                    contain_tol: float = 1e-8) -> EnlargementReport:
    """``dim TW - dim(TW ∩ (W + M))`` checked against the defect of ``M + W``.

    The intersection dimension is taken as ``dim TW + dim(W + M) - dim(TW + W + M)``,
    which avoids an angle threshold.
    """
    _check(T, M)
    MW = sum_(M, W, tol)
    ok, res = contains(MW, apply(T, M, tol), contain_tol)
    if not ok:
        raise InvalidParameter(f"W is not a defect space for (T, M): residual {res:.3g}")
    TW = apply(T, W, tol)
    total = sum_(MW, TW, tol).rank
    inter = TW.rank + MW.rank - total
    formula = TW.rank - inter
    recomputed = almost_defect(T, MW, tol).defect
    return EnlargementReport(formula, recomputed, res)


def absorption_chain(T: TruncatedOp, M: Subspace, k: int, tol: float = RANK_TOL):
    """Defects along ``M, M + W, M + W + TW, ..., M + W + ... + T^{k-1} W``.

    Returns a list of ``(dim, defect)`` pairs of length ``k + 1``.
    """
    if k < 0:
        raise InvalidParameter("k must be nonnegative")
    rep = almost_defect(T, M, tol)
    out = [(M.rank, rep.defect)]
    cur, block = M, rep.defect_space
    for _ in range(k):
        cur = sum_(cur, block, tol)
        out.append((cur.rank, almost_defect(T, cur, tol).defect))
        block = apply(T, block, tol)
    return out


def is_nonincreasing(values) -> bool:
    return all(b <= a for a, b in zip(values, values[1:]))


def essential_t0(T: TruncatedOp, M: Subspace, W1: TruncatedOp | None = None,
                 W2: TruncatedOp | None = None) -> TruncatedOp:
    """``-(I - P_M) T P_M + P_M W1 + W2 (I - P_M)``."""
    _check(T, M)
    P = projector(M)
    Q = identity_op(M.order, M.dim) - P
    out = -(Q @ T @ P)
    if W1 is not None:
        out = out + P @ W1
    if W2 is not None:
        out = out + W2 @ Q
    return out


def invariance_residual(T: TruncatedOp, M: Subspace) -> float:
    """``||(I - P_M) T P_M||``."""
    if M.rank == 0:
        return 0.0
    D = defect_operator(T, M)
    return float(np.linalg.norm(D, 2))
