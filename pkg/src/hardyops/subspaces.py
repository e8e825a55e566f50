"""Subspaces of truncated ``H^2_E`` stored by orthonormal bases."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import DimensionMismatch
from .operators import TruncatedOp, finite_op

RANK_TOL = 1e-8
ANGLE_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class Subspace:
    """Orthonormal basis of a subspace of ``C^{N*dim}`` (coefficient-major)."""

    basis: np.ndarray
    order: int
    dim: int
    tol: float = RANK_TOL
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim != 2 or b.shape[0] != self.order * self.dim:
            raise DimensionMismatch(
                f"basis has {b.shape[0] if b.ndim == 2 else '?'} rows, ambient is "
                f"{self.order}x{self.dim}")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient(self) -> tuple[int, int]:
        return self.order, self.dim

    @property
    def size(self) -> int:
        return self.order * self.dim

    def proj_matrix(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def __repr__(self):
        return f"Subspace(rank={self.rank}, order={self.order}, dim={self.dim})"


def _same_ambient(*spaces: Subspace):
    amb = {s.ambient for s in spaces}
    if len(amb) != 1:
        raise DimensionMismatch(f"ambient mismatch: {sorted(amb)}")


def _as_matrix(A) -> tuple[np.ndarray, int | None]:
    if isinstance(A, TruncatedOp):
        return A.matrix, A.order
    return np.asarray(A, dtype=complex), None


def column_space(A: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Left singular vectors with singular value above ``tol * max(s_max, 1)``."""
    if A.size == 0 or A.shape[1] == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    thr = tol * max(s[0] if s.size else 0.0, 1.0)
    return U[:, s > thr]


def numerical_rank(A: np.ndarray, tol: float = RANK_TOL) -> int:
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int((s > tol * max(s[0] if s.size else 0.0, 1.0)).sum())


def from_range(A, tol: float = RANK_TOL, order: int | None = None, dim: int | None = None) -> Subspace:
    """Numerical column space of an operator or matrix."""
    M, N = _as_matrix(A)
    if isinstance(A, TruncatedOp):
        N, dim = A.order, A.dim_out
    elif order is None or dim is None:
        raise DimensionMismatch("order and dim are required for a bare matrix")
    else:
        N = order
    return Subspace(column_space(M, tol), N, dim, tol)


def span(vectors, order: int, dim: int, tol: float = RANK_TOL) -> Subspace:
    """Span of the columns of ``vectors`` (or a list of 1-d vectors)."""
    V = np.asarray(vectors, dtype=complex)
    if V.ndim == 1:
        V = V[:, None]
    elif isinstance(vectors, (list, tuple)):
        V = V.T
    return Subspace(column_space(V, tol), order, dim, tol)


def kernel(A, tol: float = RANK_TOL) -> Subspace:
    """Right singular vectors with singular value ``<= tol * scale``."""
    M, _ = _as_matrix(A)
    if not isinstance(A, TruncatedOp):
        raise DimensionMismatch("kernel needs a TruncatedOp for the ambient")
    n = M.shape[1]
    if M.shape[0] == 0:
        return Subspace(np.eye(n), A.order, A.dim_in, tol)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    thr = tol * max(s[0] if s.size else 0.0, 1.0)
    r = int((s > thr).sum())
    return Subspace(vh[r:].conj().T, A.order, A.dim_in, tol)


def zero_space(order: int, dim: int) -> Subspace:
    return Subspace(np.zeros((order * dim, 0)), order, dim)


def whole_space(order: int, dim: int) -> Subspace:
    return Subspace(np.eye(order * dim), order, dim)


def degree_span(order: int, dim: int, degrees) -> Subspace:
    """Coordinate subspace spanned by ``z^k E`` for ``k`` in ``degrees``."""
    idx = [k * dim + i for k in degrees for i in range(dim)]
    B = np.zeros((order * dim, len(idx)))
    B[idx, np.arange(len(idx))] = 1
    return Subspace(B, order, dim)


def sum_(M: Subspace, L: Subspace, tol: float | None = None) -> Subspace:
    _same_ambient(M, L)
    tol = M.tol if tol is None else tol
    return Subspace(column_space(np.hstack([M.basis, L.basis]), tol), M.order, M.dim, tol)


def orth_complement(M: Subspace) -> Subspace:
    if M.rank == 0:
        return whole_space(M.order, M.dim)
    return Subspace(sla.null_space(M.basis.conj().T, rcond=0.5), M.order, M.dim, M.tol)


def principal_angles(M: Subspace, L: Subspace) -> np.ndarray:
    """Principal angles in increasing order (length ``min(rank M, rank L)``)."""
    _same_ambient(M, L)
    if M.rank == 0 or L.rank == 0:
        return np.zeros(0)
    # small angles come from sines (arccos loses half the digits near 1)
    A, B = (M.basis, L.basis) if M.rank >= L.rank else (L.basis, M.basis)
    k = B.shape[1]
    cos = np.linalg.svd(A.conj().T @ B, compute_uv=False)[:k]
    sin = np.linalg.svd(B - A @ (A.conj().T @ B), compute_uv=False)[::-1][:k]
    ang = np.arccos(np.clip(cos, -1.0, 1.0))
    small = cos ** 2 > 0.5
    ang[small] = np.arcsin(np.clip(sin[small], 0.0, 1.0))
    return np.sort(ang)


def intersect(M: Subspace, L: Subspace, tol_angle: float = ANGLE_TOL,
              return_gap: bool = False):
    """Common directions of ``M`` and ``L``.

    Directions whose squared cosine with ``L`` exceeds ``1 - tol_angle`` are
    kept; these are the eigenvectors of ``P_M P_L P_M`` above that level.  With
    ``return_gap`` the smallest principal angle that was *not* absorbed is
    also returned, so near-parallel pairs can be flagged.
    """
    _same_ambient(M, L)
    if M.rank == 0 or L.rank == 0:
        out = zero_space(M.order, M.dim)
        return (out, np.pi / 2) if return_gap else out
    U, s, _ = np.linalg.svd(M.basis.conj().T @ L.basis, full_matrices=True)
    s_full = np.zeros(M.rank)
    s_full[:s.size] = s
    keep = s_full ** 2 > 1 - tol_angle
    B = M.basis @ U[:, keep]
    out = Subspace(B, M.order, M.dim, M.tol)
    if return_gap:
        rest = s_full[~keep]
        gap = float(np.arccos(min(rest.max(), 1.0))) if rest.size else np.pi / 2
        return out, gap
    return out


def rel_complement(M: Subspace, L: Subspace, tol_angle: float = ANGLE_TOL) -> Subspace:
    """``M ⊖ (M ∩ L)``."""
    X = intersect(M, L, tol_angle)
    if X.rank == 0:
        return M
    C = M.basis - X.basis @ (X.basis.conj().T @ M.basis)
    return Subspace(column_space(C, 0.5), M.order, M.dim, M.tol)


def contains(M: Subspace, L: Subspace | np.ndarray, tol: float = RANK_TOL) -> tuple[bool, float]:
    """Whether ``L`` (subspace or columns) lies in ``M``; returns ``(flag, residual)``."""
    V = L.basis if isinstance(L, Subspace) else np.asarray(L, dtype=complex)
    if isinstance(L, Subspace):
        _same_ambient(M, L)
    if V.ndim == 1:
        V = V[:, None]
    if V.shape[1] == 0:
        return True, 0.0
    R = V - M.basis @ (M.basis.conj().T @ V)
    res = float(np.linalg.norm(R, 2))
    return res <= tol, res


def equal(M: Subspace, L: Subspace, tol: float = ANGLE_TOL) -> tuple[bool, float]:
    """Equal ranks and largest principal angle ``<= tol``."""
    _same_ambient(M, L)
    if M.rank != L.rank:
        return False, float("inf")
    ang = principal_angles(M, L)
    gap = float(ang.max()) if ang.size else 0.0
    return gap <= tol, gap


def projector(M: Subspace) -> TruncatedOp:
    return finite_op(M.proj_matrix(), M.order, M.dim, M.dim)


def complement_projector(M: Subspace) -> TruncatedOp:
    from .operators import identity_op
    return identity_op(M.order, M.dim) - projector(M)


def apply(A: TruncatedOp, M: Subspace, tol: float | None = None) -> Subspace:
    """Image ``A M``."""
    tol = M.tol if tol is None else tol
    return Subspace(column_space(A.matrix @ M.basis, tol), A.order, A.dim_out, tol)


def restrict_to_degrees(M: Subspace, w: int, tol_angle: float = ANGLE_TOL) -> Subspace:
    """Vectors of ``M`` supported in degrees ``<= w``.

    Computed as the null space of ``(I - P_M)`` on those coordinates, so no
    intersection angle threshold is involved when ``M`` is given exactly.
    """
    n = (w + 1) * M.dim
    if n <= 0:
        return zero_space(M.order, M.dim)
    Pc = np.eye(M.size)[:, :n] - M.basis @ M.basis[:n].conj().T
    _, s, vh = np.linalg.svd(Pc, full_matrices=True)
    keep = np.ones(n, dtype=bool)
    keep[:s.size] = s <= np.sqrt(tol_angle)
    C = vh[keep].conj().T
    B = np.zeros((M.size, C.shape[1]), dtype=complex)
    B[:n] = C
    return Subspace(B, M.order, M.dim, M.tol)


def vanishing_at_zero(M: Subspace) -> Subspace:
    """``{h in M : h(0) = 0}``, the null space of the degree-0 block on ``M``."""
    if M.rank == 0:
        return M
    C0 = M.basis[:M.dim]
    _, s, vh = np.linalg.svd(C0, full_matrices=True)
    r = int((s > M.tol).sum())
    coeffs = vh[r:].conj().T
    return Subspace(M.basis @ coeffs, M.order, M.dim, M.tol)


def rebase(M: Subspace, rng: np.random.Generator) -> Subspace:
    """Same subspace with a random unitary change of basis."""
    r = M.rank
    if r == 0:
        return M
    Z = rng.normal(size=(r, r)) + 1j * rng.normal(size=(r, r))
    Q, _ = np.linalg.qr(Z)
    return Subspace(M.basis @ Q, M.order, M.dim, M.tol)
