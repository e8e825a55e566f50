"""Truncated Toeplitz, Hankel and shift matrices with trust-window bookkeeping.

An operator on ``H^2_E`` is represented by its compression to polynomials
of degree ``< N``.  Basis vector ``z^k e_i`` sits at index ``k * dim + i``.

Truncating a product of infinite matrices loses the terms that pass through
degrees ``>= N``.  Each :class:`TruncatedOp` therefore records how far its
computed entries can be trusted:

* ``row_guard`` -- rows of degree ``<= N-1-row_guard`` agree with the true
  operator in every column ``< N``;
* ``col_guard`` -- the same for columns;
* ``up`` / ``down`` -- how many degrees the true operator can raise or lower;
* ``in_cap`` / ``out_cap`` -- largest input degree the true operator reads
  and largest output degree it writes (``None`` when unbounded).

A product ``AB`` keeps exact rows as long as every intermediate degree that
row ``j`` of ``A`` reaches lies in an exact row of ``B``; columns are handled
symmetrically.  ``guard = min(row_guard, col_guard)`` then marks the top
degrees of the square window that may be wrong.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import BandTooWide, DimensionMismatch, InvalidParameter, WindowRefused
from .symbols import LaurentSymbol, monomial, tilde, star, multiply


def _cap_min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _cap_max(a, b):
    if a is None or b is None:
        return None
    return max(a, b)


def _cap_add(a, k):
    return None if a is None else a + k


@dataclass(frozen=True, eq=False)
class TruncatedOp:
    """Compression of an operator ``H^2_E -> H^2_F`` to degrees ``0..N-1``."""

    matrix: np.ndarray
    order: int
    dim_in: int
    dim_out: int
    row_guard: int = 0
    col_guard: int = 0
    up: int = 0
    down: int = 0
    in_cap: int | None = None
    out_cap: int | None = None
    err_bound: float = 0.0
    _norm: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.order * self.dim_out, self.order * self.dim_in):
            raise DimensionMismatch(
                f"matrix shape {m.shape} does not match order {self.order}, "
                f"dims {self.dim_out}x{self.dim_in}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        N = self.order
        object.__setattr__(self, "row_guard", min(int(self.row_guard), N))
        object.__setattr__(self, "col_guard", min(int(self.col_guard), N))
        if self.guard >= N:
            raise WindowRefused(f"guard {self.guard} leaves no trusted window at order {N}")

    @property
    def guard(self) -> int:
        return min(self.row_guard, self.col_guard)

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def window(self) -> int:
        """Highest trusted degree."""
        return self.order - 1 - self.guard

    def norm_bound(self) -> float:
        """Cheap upper bound ``sqrt(||A||_1 ||A||_inf)`` on the spectral norm."""
        if not self._norm:
            a = np.abs(self.matrix)
            n1 = a.sum(axis=0).max(initial=0.0)
            ninf = a.sum(axis=1).max(initial=0.0)
            self._norm.append(float(np.sqrt(n1 * ninf)))
        return self._norm[0]

    def windowed(self, degree: int | None = None) -> np.ndarray:
        """Block of input and output degrees ``<= degree`` (default: the trusted window)."""
        w = self.window if degree is None else degree
        return self.matrix[:(w + 1) * self.dim_out, :(w + 1) * self.dim_in]

    def __matmul__(self, other):
        if isinstance(other, TruncatedOp):
            return compose(self, other)
        return self.matrix @ other

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __neg__(self):
        return scale(self, -1)

    @property
    def H(self):
        return adjoint(self)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _check_order(N):
    if int(N) != N or N < 1:
        raise InvalidParameter(f"order must be a positive integer, got {N}")


def _check_band(Phi: LaurentSymbol, N: int, allow_wide: bool):
    # a tailed symbol has no true band; the stored cut-off is only bookkeeping
    if not allow_wide and Phi.tail_bound == 0 and N <= Phi.band:
        raise BandTooWide(f"order {N} does not exceed symbol band {Phi.band}")


def toeplitz(Phi: LaurentSymbol, N: int, allow_wide: bool = False) -> TruncatedOp:
    """Block matrix with entry ``(j, k) = Phi^(j - k)``.

    A polynomial symbol must fit in the window (``N > band``) unless
    ``allow_wide`` is set.  Symbols that carry a certified tail are accepted
    at any order: the matrix is the exact compression either way, and the
    reach fields record the full stored band.
    """
    _check_order(N)
    _check_band(Phi, N, allow_wide)
    r, c = Phi.shape
    M = np.zeros((N, r, N, c), dtype=complex)
    for n in range(max(Phi.n_min, -(N - 1)), min(Phi.n_max, N - 1) + 1):
        C = Phi.coefficient(n)
        if not C.any():
            continue
        j = np.arange(max(n, 0), min(N, N + n))
        M[j, :, j - n, :] = C
    return TruncatedOp(M.reshape(N * r, N * c), N, c, r,
                       up=max(0, Phi.n_max), down=max(0, -Phi.n_min),
                       err_bound=Phi.tail_bound)


def hankel(Phi: LaurentSymbol, N: int, allow_wide: bool = False) -> TruncatedOp:
    """Block matrix with entry ``(j, k) = Phi^(-j - k - 1)``.

    This folds the flip ``Jf(z) = conj(z) f(conj(z))`` into the indexing, so
    only the coefficients of negative degree contribute.
    """
    _check_order(N)
    _check_band(Phi, N, allow_wide)
    r, c = Phi.shape
    M = np.zeros((N, r, N, c), dtype=complex)
    L = max(0, -Phi.n_min)  # number of negative degrees stored
    for s in range(min(L, 2 * N - 1)):
        C = Phi.coefficient(-s - 1)
        if not C.any():
            continue
        j = np.arange(max(0, s - N + 1), min(s, N - 1) + 1)
        M[j, :, s - j, :] = C
    reach = L - 1
    return TruncatedOp(M.reshape(N * r, N * c), N, c, r,
                       up=max(reach, 0), down=max(reach, 0),
                       in_cap=reach, out_cap=reach, err_bound=Phi.tail_bound)


def identity_op(N: int, dim: int) -> TruncatedOp:
    _check_order(N)
    return TruncatedOp(np.eye(N * dim), N, dim, dim)


def zero_op(N: int, dim_in: int, dim_out: int) -> TruncatedOp:
    return TruncatedOp(np.zeros((N * dim_out, N * dim_in)), N, dim_in, dim_out,
                       in_cap=-1, out_cap=-1)


def shift(N: int, dim: int = 1) -> TruncatedOp:
    """Truncated ``S = T_{zI}``; the coefficient pushed to degree ``N`` is dropped."""
    return toeplitz(monomial(1, dim), N, allow_wide=True)


def backshift(N: int, dim: int = 1) -> TruncatedOp:
    return adjoint(shift(N, dim))


def proj_const(N: int, dim: int = 1) -> TruncatedOp:
    """Projection onto the constants ``P_E``."""
    _check_order(N)
    M = np.zeros((N * dim, N * dim))
    M[:dim, :dim] = np.eye(dim)
    return TruncatedOp(M, N, dim, dim, in_cap=0, out_cap=0)


def proj_degrees(N: int, dim: int, degrees: Sequence[int]) -> TruncatedOp:
    """Orthogonal projection onto the listed degrees."""
    d = np.zeros(N * dim)
    for k in degrees:
        d[k * dim:(k + 1) * dim] = 1
    hi = max(degrees) if len(degrees) else -1
    return TruncatedOp(np.diag(d), N, dim, dim, in_cap=hi, out_cap=hi)


def finite_op(matrix: np.ndarray, N: int, dim_in: int, dim_out: int) -> TruncatedOp:
    """Wrap a matrix whose true operator lives on degrees ``< N`` (e.g. a projector)."""
    return TruncatedOp(matrix, N, dim_in, dim_out, up=N - 1, down=N - 1,
                       in_cap=N - 1, out_cap=N - 1)


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------

def adjoint(A: TruncatedOp) -> TruncatedOp:
    return TruncatedOp(A.matrix.conj().T, A.order, A.dim_out, A.dim_in,
                       row_guard=A.col_guard, col_guard=A.row_guard,
                       up=A.down, down=A.up, in_cap=A.out_cap, out_cap=A.in_cap,
                       err_bound=A.err_bound)


def compose(A: TruncatedOp, B: TruncatedOp) -> TruncatedOp:
    """Matrix product ``A B`` with propagated guards and error bound."""
    if A.order != B.order or A.dim_in != B.dim_out:
        raise DimensionMismatch(
            f"cannot compose order {A.order} ({A.dim_out}x{A.dim_in}) with "
            f"order {B.order} ({B.dim_out}x{B.dim_in})")
    N = A.order
    # rows of A B stay exact while the degrees A reads fall in exact rows of B
    if A.in_cap is not None and A.in_cap <= N - 1 - B.row_guard:
        rg = A.row_guard
    elif B.row_guard == 0 and B.out_cap is not None and B.out_cap <= N - 1:
        rg = A.row_guard
    else:
        rg = max(A.row_guard, B.row_guard + A.down)
    if B.out_cap is not None and B.out_cap <= N - 1 - A.col_guard:
        cg = B.col_guard
    elif A.col_guard == 0 and A.in_cap is not None and A.in_cap <= N - 1:
        cg = B.col_guard
    else:
        cg = max(B.col_guard, A.col_guard + B.up)
    in_cap = _cap_min(B.in_cap, _cap_add(A.in_cap, B.down))
    out_cap = _cap_min(A.out_cap, _cap_add(B.out_cap, A.up))
    up = A.up + B.up
    down = A.down + B.down
    if out_cap is not None:
        up = min(up, max(out_cap, 0))
    if in_cap is not None:
        down = min(down, max(in_cap, 0))
    err = A.norm_bound() * B.err_bound + A.err_bound * B.norm_bound() + A.err_bound * B.err_bound
    return TruncatedOp(A.matrix @ B.matrix, N, B.dim_in, A.dim_out,
                       row_guard=rg, col_guard=cg, up=up, down=down,
                       in_cap=in_cap, out_cap=out_cap, err_bound=err)


def chain(*ops: TruncatedOp) -> TruncatedOp:
    """Compose right to left: ``chain(A, B, C) = A B C``."""
    out = ops[-1]
    for op in reversed(ops[:-1]):
        out = compose(op, out)
    return out


def add(A: TruncatedOp, B: TruncatedOp) -> TruncatedOp:
    if A.shape != B.shape or A.order != B.order:
        raise DimensionMismatch("cannot add operators of different shape")
    return TruncatedOp(A.matrix + B.matrix, A.order, A.dim_in, A.dim_out,
                       row_guard=max(A.row_guard, B.row_guard),
                       col_guard=max(A.col_guard, B.col_guard),
                       up=max(A.up, B.up), down=max(A.down, B.down),
                       in_cap=_cap_max(A.in_cap, B.in_cap),
                       out_cap=_cap_max(A.out_cap, B.out_cap),
                       err_bound=A.err_bound + B.err_bound)


def scale(A: TruncatedOp, s: complex) -> TruncatedOp:
    return replace(A, matrix=A.matrix * s, err_bound=abs(s) * A.err_bound, _norm=[])


def lin_comb(terms: Sequence[tuple[complex, TruncatedOp]]) -> TruncatedOp:
    out = scale(terms[0][1], terms[0][0])
    for c, op in terms[1:]:
        out = add(out, scale(op, c))
    return out


# ---------------------------------------------------------------------------
# identity catalogue
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityReport:
    name: str
    order: int
    residual: float
    err_bound: float
    threshold: float
    guard: int
    window: int

    @property
    def passed(self) -> bool:
        return self.residual <= self.threshold


def _sides_thc(Om, Psi, N):
    lhs = toeplitz(multiply(Om, Psi), N) - compose(toeplitz(Om, N), toeplitz(Psi, N))
    rhs = compose(adjoint(hankel(star(Om), N)), hankel(Psi, N))
    return lhs, rhs


def _sides_ts(Phi, N):
    r, c = Phi.shape
    T = toeplitz(Phi, N)
    lhs = compose(backshift(N, r), T)
    rhs = compose(T, backshift(N, c)) + chain(backshift(N, r), T, proj_const(N, c))
    return lhs, rhs


def _sides_hs(Phi, N):
    r, c = Phi.shape
    H = hankel(Phi, N)
    HS = compose(H, backshift(N, c))
    lhs = compose(shift(N, r), H)
    rhs = HS - compose(proj_const(N, r), HS) + chain(shift(N, r), H, proj_const(N, c))
    return lhs, rhs


def _sides_one(Phi, Psi, N):
    # S* T_Phi H_Psi - T_Phi H_Psi S = S* T_Phi P H_Psi
    r, m = Phi.shape
    TH = compose(toeplitz(Phi, N), hankel(Psi, N))
    c = Psi.cols
    lhs = compose(backshift(N, r), TH) - compose(TH, shift(N, c))
    rhs = chain(backshift(N, r), toeplitz(Phi, N), proj_const(N, m), hankel(Psi, N))
    return lhs, rhs


def _sides_two(Phi, Psi, N):
    # S H_Phi T_Psi - H_Phi T_Psi S* = H_Phi S* T_Psi P - P H_Phi S* T_Psi + S H_Phi P T_Psi
    r, m = Phi.shape
    c = Psi.cols
    H, T = hankel(Phi, N), toeplitz(Psi, N)
    HT = compose(H, T)
    HST = chain(H, backshift(N, m), T)
    lhs = compose(shift(N, r), HT) - compose(HT, backshift(N, c))
    rhs = compose(HST, proj_const(N, c)) - compose(proj_const(N, r), HST) \
        + chain(shift(N, r), H, proj_const(N, m), T)
    return lhs, rhs


def _sides_hankel_adjoint(Phi, N):
    return adjoint(hankel(Phi, N)), hankel(tilde(Phi), N)


IDENTITIES = {
    "thc": (2, _sides_thc, "T_{Om Psi} - T_Om T_Psi = H_{Om*}^* H_Psi"),
    "ts": (1, _sides_ts, "S* T_Phi = T_Phi S* + S* T_Phi P"),
    "hs": (1, _sides_hs, "S H_Phi = H_Phi S* - P H_Phi S* + S H_Phi P"),
    "lemma_basic_one": (2, _sides_one, "S* T_Phi H_Psi - T_Phi H_Psi S = S* T_Phi P H_Psi"),
    "lemma_basic_two": (2, _sides_two,
                        "S H_Phi T_Psi - H_Phi T_Psi S* = H_Phi S* T_Psi P - P H_Phi S* T_Psi "
                        "+ S H_Phi P T_Psi"),
    "hankel_adjoint": (1, _sides_hankel_adjoint, "H_Phi^* = H_{tilde Phi}"),
}


def identity_sides(name: str, symbols: Sequence[LaurentSymbol], N: int):
    if name not in IDENTITIES:
        raise InvalidParameter(f"unknown identity {name!r}; known: {sorted(IDENTITIES)}")
    arity, fn, _ = IDENTITIES[name]
    if len(symbols) != arity:
        raise InvalidParameter(f"identity {name!r} takes {arity} symbol(s), got {len(symbols)}")
    if arity == 2 and symbols[0].cols != symbols[1].rows:
        raise DimensionMismatch(f"symbol shapes {symbols[0].shape} and {symbols[1].shape} do not chain")
    return fn(*symbols, N)


def windowed_residual(lhs: TruncatedOp, rhs: TruncatedOp) -> tuple[float, int]:
    """Spectral norm of ``lhs - rhs`` on the common trusted window."""
    if lhs.shape != rhs.shape:
        raise DimensionMismatch("sides have different shapes")
    G = max(lhs.guard, rhs.guard)
    w = lhs.order - 1 - G
    if w < 0:
        raise WindowRefused("no trusted window left")
    D = lhs.windowed(w) - rhs.windowed(w)
    return (float(np.linalg.norm(D, 2)) if D.size else 0.0), G


def verify_identity(name: str, symbols: Sequence[LaurentSymbol], N: int,
                    abs_tol: float = 1e-10, err_factor: float = 100.0,
                    lift: bool = False) -> IdentityReport:
    """Build both sides of a catalogued identity and compare them on the trusted window.

    With ``lift`` each side is built at a raised order and cut back to its
    exact order-``N`` compression (see :func:`exact_compression`), so the
    whole ``N x N`` block is compared even when the guards exceed ``N``.
    Passes when ``residual <= err_factor * err + abs_tol``.
    """
    if lift:
        lhs = exact_compression(lambda n: identity_sides(name, symbols, n)[0], N)
        rhs = exact_compression(lambda n: identity_sides(name, symbols, n)[1], N)
    else:
        lhs, rhs = identity_sides(name, symbols, N)
    res, G = windowed_residual(lhs, rhs)
    err = lhs.err_bound + rhs.err_bound
    return IdentityReport(name, N, res, err, err_factor * err + abs_tol, G, N - 1 - G)


# ---------------------------------------------------------------------------
# exact windows by lifting the order
# ---------------------------------------------------------------------------

def truncate(A: TruncatedOp, N: int) -> TruncatedOp:
    """Leading order-``N`` block of ``A``; guards shrink by ``A.order - N``."""
    if N > A.order:
        raise InvalidParameter(f"cannot truncate order {A.order} to {N}")
    cut = A.order - N
    return TruncatedOp(A.matrix[:N * A.dim_out, :N * A.dim_in], N, A.dim_in, A.dim_out,
                       row_guard=max(0, A.row_guard - cut), col_guard=max(0, A.col_guard - cut),
                       up=A.up, down=A.down, in_cap=A.in_cap, out_cap=A.out_cap,
                       err_bound=A.err_bound)


def exact_compression(build, N: int, max_rounds: int = 6) -> TruncatedOp:
    """Evaluate ``build(order)`` high enough that its order-``N`` block is fully trusted.

    ``build`` maps an order to a :class:`TruncatedOp`.  The order is raised by
    the reported guard until the leading ``N`` degrees carry no guard.
    """
    pad = 0
    for _ in range(max_rounds):
        try:
            A = build(N + pad)
        except WindowRefused:
            pad = max(2 * pad, N)
            continue
        if A.guard <= pad:
            return truncate(A, N)
        pad = A.guard
    raise WindowRefused(f"guard did not settle after {max_rounds} rounds (last {pad})")
