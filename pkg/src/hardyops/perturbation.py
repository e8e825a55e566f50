"""Finite-rank perturbations that make a subspace invariant or reducing.

Free rank-one terms ``x ⊗ y`` act as ``h -> <h, y> x``.  The generic form is
``-(I - P_M) T P_M + sum x_i ⊗ y_i + sum u_j ⊗ v_j`` with ``x_i`` in ``M`` and
``v_j`` orthogonal to ``M``.

For ``M = T_Phi K_Theta`` the closed-form cores are built from

* ``W = T_Phi T_Theta P_E`` and ``K = T_Phi (I - T_Theta T_Theta^*)``,
* shift core ``-T_Phi T_Theta P_E T_Theta^* S T_Phi^*``,
* backward shift core ``-S^* T_Phi P_{E1} (I - T_Theta T_Theta^*) T_Phi^*``,
* reducing core: the shift core minus the adjoint of the backward shift core.

The ``literal`` switch rebuilds the cores without the inner ``S`` and with
the backward shift core itself in the reducing sum; those variants are kept
as negative controls.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import operators as ops
from . import subspaces as sp
from .errors import InvalidParameter, MembershipError, VerificationFailed
from .invariance import _check, defect_operator
from .representations import RepSpec, build_rep, model_projection
from .subspaces import Subspace

KINDS = ("t0_general", "t0_shift", "t1_backshift", "t2_reducing")
INVARIANCE_TOL = 1e-8


@dataclass(frozen=True)
class PerturbationSpec:
    """Kind plus free rank-one terms given as coefficient vectors.

    ``terms_M`` holds pairs ``(x, y)``; ``terms_perp`` holds pairs ``(u, v)``.
    """

    kind: str = "t0_general"
    terms_M: tuple = ()
    terms_perp: tuple = ()
    member_tol: float = 1e-8

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameter(f"unknown perturbation kind {self.kind!r}")
        conv = lambda terms: tuple((np.asarray(a, dtype=complex).ravel(),
                                    np.asarray(b, dtype=complex).ravel()) for a, b in terms)
        object.__setattr__(self, "terms_M", conv(self.terms_M))
        object.__setattr__(self, "terms_perp", conv(self.terms_perp))


def _member(M: Subspace, v: np.ndarray, tol: float) -> float:
    nv = np.linalg.norm(v)
    if nv == 0:
        return 0.0
    return float(np.linalg.norm(v - M.basis @ (M.basis.conj().T @ v)) / nv)


def _orthogonal(M: Subspace, v: np.ndarray) -> float:
    nv = np.linalg.norm(v)
    if nv == 0:
        return 0.0
    return float(np.linalg.norm(M.basis.conj().T @ v) / nv)


def validate_terms(pspec: PerturbationSpec, M: Subspace, reducing: bool = False):
    """Reject free terms that violate their membership constraint.

    ``x`` must lie in ``M`` and ``v`` in ``M^perp``; for a reducing
    perturbation ``y`` must also lie in ``M`` and ``u`` in ``M^perp``.
    """
    n = M.size
    tol = pspec.member_tol
    for which, terms in (("terms_M", pspec.terms_M), ("terms_perp", pspec.terms_perp)):
        for i, (a, b) in enumerate(terms):
            if a.size != n or b.size != n:
                raise MembershipError(f"{which}[{i}] has length {a.size}/{b.size}, expected {n}",
                                      which, i)
            if which == "terms_M":
                bad = [("x", _member(M, a, tol))]
                if reducing:
                    bad.append(("y", _member(M, b, tol)))
            else:
                bad = [("v", _orthogonal(M, b))]
                if reducing:
                    bad.append(("u", _orthogonal(M, a)))
            for name, r in bad:
                if r > tol:
                    raise MembershipError(
                        f"{which}[{i}]: {name} violates its constraint (relative residual {r:.3g})",
                        which, i)


def free_terms(pspec: PerturbationSpec, M: Subspace) -> ops.TruncatedOp | None:
    """Sum of the rank-one terms as a finite operator, or ``None`` if empty."""
    pairs = list(pspec.terms_M) + list(pspec.terms_perp)
    if not pairs:
        return None
    A = sum(np.outer(a, b.conj()) for a, b in pairs)
    return ops.finite_op(A, M.order, M.dim, M.dim)


def _with_free(core: ops.TruncatedOp, pspec: PerturbationSpec | None, M: Subspace,
               reducing: bool = False) -> ops.TruncatedOp:
    if pspec is None:
        return core
    validate_terms(pspec, M, reducing)
    F = free_terms(pspec, M)
    return core if F is None else core + F


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InvarianceReport:
    mode: str
    residual: float
    adjoint_residual: float
    tol: float

    @property
    def worst(self) -> float:
        return max(self.residual, self.adjoint_residual)

    @property
    def passed(self) -> bool:
        return self.worst <= self.tol

    def to_dict(self) -> dict:
        return {"mode": self.mode, "residual": self.residual,
                "adjoint_residual": self.adjoint_residual, "tol": self.tol,
                "passed": self.passed}


def verify_invariance(T: ops.TruncatedOp, M: Subspace, mode: str = "invariant",
                      tol: float = INVARIANCE_TOL) -> InvarianceReport:
    """``||(I - P_M) T P_M||`` and, for ``mode="reducing"``, the same for ``T^*``."""
    if mode not in ("invariant", "reducing"):
        raise InvalidParameter(f"unknown mode {mode!r}")
    _check(T, M)
    norm = lambda D: float(np.linalg.norm(D, 2)) if D.size else 0.0
    r = norm(defect_operator(T, M))
    ra = norm(defect_operator(ops.adjoint(T), M)) if mode == "reducing" else 0.0
    return InvarianceReport(mode, r, ra, tol)


@dataclass(frozen=True)
class Synthesis:
    """Synthesized perturbation with its core, core rank and verification."""

    kind: str
    op: ops.TruncatedOp
    core: ops.TruncatedOp
    core_rank: int
    rank_bound: int
    report: InvarianceReport
    M: Subspace = field(repr=False, default=None)

    @property
    def passed(self) -> bool:
        return self.report.passed and self.core_rank <= self.rank_bound


def _finish(kind, base, core, total, M, bound, mode, tol, check) -> Synthesis:
    rep = verify_invariance(base + total, M, mode, tol)
    r = sp.numerical_rank(core.matrix)
    out = Synthesis(kind, total, core, r, bound, rep, M)
    if check and not out.passed:
        raise VerificationFailed(
            f"{kind}: residual {rep.worst:.3g} (tol {tol:g}), core rank {r} vs bound {bound}")
    return out


# ---------------------------------------------------------------------------
# synthesis
# ---------------------------------------------------------------------------

def _generic_block(T: ops.TruncatedOp, M: Subspace) -> np.ndarray:
    """Matrix of ``(I - P_M) T P_M``."""
    D = defect_operator(T, M)
    return D @ M.basis.conj().T


def synth_t0_general(T: ops.TruncatedOp, M: Subspace, pspec: PerturbationSpec | None = None,
                     tol: float = INVARIANCE_TOL, check: bool = True) -> Synthesis:
    """``-(I - P_M) T P_M`` plus free terms; ``T + T0`` leaves ``M`` invariant."""
    _check(T, M)
    # M is given inside the truncated space, so the compression is taken there
    core = ops.finite_op(-_generic_block(T, M), M.order, M.dim, M.dim)
    total = _with_free(core, pspec, M)
    return _finish("t0_general", T, core, total, M, M.rank, "invariant", tol, check)


def _require_model(spec: RepSpec):
    if spec.flavor != "phi_model":
        raise InvalidParameter("closed-form cores need a phi_model representation")


def shift_core(spec: RepSpec, literal: bool = False) -> ops.TruncatedOp:
    """``-T_Phi T_Theta P_E T_Theta^* S T_Phi^*`` (without ``S`` when ``literal``)."""
    _require_model(spec)

    def build(n):
        TP = ops.toeplitz(spec.Phi, n)
        TT = ops.toeplitz(spec.Theta, n)
        mid = [] if literal else [ops.shift(n, spec.dim_E1)]
        return -ops.chain(TP, TT, ops.proj_const(n, spec.dim_E), TT.H, *mid, TP.H)
    return ops.exact_compression(build, spec.N)


def backshift_core(spec: RepSpec) -> ops.TruncatedOp:
    """``-S^* T_Phi P_{E1} (I - T_Theta T_Theta^*) T_Phi^*``."""
    _require_model(spec)

    def build(n):
        TP = ops.toeplitz(spec.Phi, n)
        return -ops.chain(ops.backshift(n, spec.dim_F), TP, ops.proj_const(n, spec.dim_E1),
                          model_projection(spec.Theta, n), TP.H)
    return ops.exact_compression(build, spec.N)


def _rep(spec: RepSpec, M: Subspace | None) -> Subspace:
    if M is None:
        M, pi = build_rep(spec)
        if not pi.passed:
            raise VerificationFailed(f"representation is not a partial isometry ({pi.residual:.3g})")
    return M


def synth_t0_shift(spec: RepSpec, pspec: PerturbationSpec | None = None,
                   M: Subspace | None = None, tol: float = INVARIANCE_TOL,
                   literal: bool = False, sign: float = 1.0, check: bool = True) -> Synthesis:
    """Perturbation of ``S`` leaving ``T_Phi K_Theta`` invariant; core rank ``<= dim E``."""
    M = _rep(spec, M)
    core = ops.scale(shift_core(spec, literal), sign)
    total = _with_free(core, pspec, M)
    S = ops.shift(spec.N, spec.dim_F)
    return _finish("t0_shift", S, core, total, M, spec.dim_E, "invariant", tol, check)


def synth_t1_backshift(spec: RepSpec, pspec: PerturbationSpec | None = None,
                       M: Subspace | None = None, tol: float = INVARIANCE_TOL,
                       sign: float = 1.0, check: bool = True) -> Synthesis:
    """Perturbation of ``S^*`` leaving ``T_Phi K_Theta`` invariant; core rank ``<= dim E1``."""
    M = _rep(spec, M)
    core = ops.scale(backshift_core(spec), sign)
    total = _with_free(core, pspec, M)
    Sb = ops.backshift(spec.N, spec.dim_F)
    return _finish("t1_backshift", Sb, core, total, M, spec.dim_E1, "invariant", tol, check)


def synth_t2_reducing(spec: RepSpec, pspec: PerturbationSpec | None = None,
                      M: Subspace | None = None, tol: float = INVARIANCE_TOL,
                      literal: bool = False, signs=(1.0, 1.0), check: bool = True) -> Synthesis:
    """Perturbation of ``S`` for which ``T_Phi K_Theta`` is reducing.

    The core is the shift core plus the adjoint of the backward shift core,
    so ``(S + T2)^* = S^* + (shift core)^* + (backward shift core)``.  Free
    terms must have both vectors in ``M`` or both in ``M^perp``.
    ``literal`` uses the shift core without ``S`` and the backward shift core
    unadjointed.
    """
    M = _rep(spec, M)
    A = shift_core(spec, literal)
    B = backshift_core(spec)
    B = B if literal else ops.adjoint(B)
    core = ops.scale(A, signs[0]) + ops.scale(B, signs[1])
    total = _with_free(core, pspec, M, reducing=True)
    S = ops.shift(spec.N, spec.dim_F)
    return _finish("t2_reducing", S, core, total, M, spec.dim_E + spec.dim_E1,
                   "reducing", tol, check)


def synthesize(kind: str, spec: RepSpec, pspec: PerturbationSpec | None = None, **kw) -> Synthesis:
    fn = {"t0_shift": synth_t0_shift, "t1_backshift": synth_t1_backshift,
          "t2_reducing": synth_t2_reducing}.get(kind)
    if fn is None:
        if kind == "t0_general":
            M = kw.pop("M", None) or _rep(spec, None)
            return synth_t0_general(ops.shift(spec.N, spec.dim_F), M, pspec, **kw)
        raise InvalidParameter(f"unknown perturbation kind {kind!r}")
    return fn(spec, pspec, **kw)


# ---------------------------------------------------------------------------
# parametrization checks
# ---------------------------------------------------------------------------

def core_vs_generic(spec: RepSpec, M: Subspace | None = None) -> float:
    """``||(I - P_M)(core + (I - P_M) S P_M) P_M||``.

    Zero means the closed-form shift core and the generic core differ only
    by terms of the allowed free forms.
    """
    M = _rep(spec, M)
    S = ops.shift(spec.N, spec.dim_F)
    P = M.proj_matrix()
    Q = np.eye(M.size) - P
    D = Q @ (shift_core(spec).matrix + _generic_block(S, M)) @ P
    return float(np.linalg.norm(D, 2))


@dataclass(frozen=True)
class Decomposition:
    into_M: np.ndarray
    on_perp: np.ndarray
    residual: float
    cross_residual: float


def decompose_perturbation(Q: ops.TruncatedOp, T: ops.TruncatedOp, M: Subspace) -> Decomposition:
    """Split ``Q`` with ``(T + Q) M ⊆ M`` into the generic form.

    ``P_M Q`` maps into ``M`` and ``(I - P_M) Q (I - P_M)`` vanishes on ``M``;
    the remaining block must equal ``-(I - P_M) T P_M``.  ``residual`` is the
    norm of ``Q`` minus the reassembled sum, ``cross_residual`` the mismatch
    of the mixed block.
    """
    _check(T, M)
    P = M.proj_matrix()
    I = np.eye(M.size)
    into = P @ Q.matrix
    perp = (I - P) @ Q.matrix @ (I - P)
    generic = -(I - P) @ T.matrix @ P
    R = Q.matrix - (generic + into + perp)
    cross = (I - P) @ Q.matrix @ P - generic
    return Decomposition(into, perp, float(np.linalg.norm(R, 2)), float(np.linalg.norm(cross, 2)))
