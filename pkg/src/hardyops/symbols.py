"""Matrix-valued Laurent symbols on the unit circle.

A symbol is stored as a dense band of Fourier coefficient matrices
``coeffs[n - n_min]`` together with a certified bound on the sup norm of
whatever was discarded when the band was cut.  Every operator matrix in the
package is assembled from these coefficients; sampling on a circle grid is
only used as an oracle and for sup-norm estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidParameter, NotInner

DEFAULT_EPS = 1e-12
DEFAULT_INNER_TOL = 1e-8
SUP_GRID = 256


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LaurentSymbol:
    """Banded family of Fourier coefficients of a ``rows x cols`` symbol.

    Parameters
    ----------
    coeffs : ndarray, shape (L, rows, cols)
        ``coeffs[k]`` is the coefficient of ``z**(n_min + k)``.
    n_min : int
        Lowest stored degree.
    tail_bound : float
        Certified bound on the sup norm of the discarded Fourier tail.
    """

    coeffs: np.ndarray
    n_min: int = 0
    tail_bound: float = 0.0
    _sup: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 3 or c.shape[0] == 0:
            raise InvalidParameter("coeffs must have shape (L, rows, cols) with L >= 1")
        if self.tail_bound < 0:
            raise InvalidParameter("tail_bound must be nonnegative")
        c, n_min = _strip_zeros(c, int(self.n_min))
        object.__setattr__(self, "coeffs", _freeze(c))
        object.__setattr__(self, "n_min", n_min)
        object.__setattr__(self, "tail_bound", float(self.tail_bound))

    @property
    def rows(self) -> int:
        return self.coeffs.shape[1]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[2]

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[1], self.coeffs.shape[2]

    @property
    def n_max(self) -> int:
        return self.n_min + self.coeffs.shape[0] - 1

    @property
    def analytic(self) -> bool:
        return self.n_min >= 0

    @property
    def band(self) -> int:
        """Largest absolute stored degree."""
        return max(abs(self.n_min), abs(self.n_max))

    def coefficient(self, n: int) -> np.ndarray:
        k = n - self.n_min
        if 0 <= k < self.coeffs.shape[0]:
            return self.coeffs[k]
        return np.zeros(self.shape, dtype=complex)

    def as_dict(self) -> dict[int, np.ndarray]:
        return {self.n_min + k: c for k, c in enumerate(self.coeffs)}

    def evaluate(self, z: complex) -> np.ndarray:
        return evaluate(self, z)

    def __call__(self, z: complex) -> np.ndarray:
        return evaluate(self, z)

    def sup_norm(self) -> float:
        """Sup of the spectral norm over a 256-point circle grid (cached)."""
        if not self._sup:
            vals = sample(self, SUP_GRID)
            self._sup.append(float(np.linalg.norm(vals, ord=2, axis=(1, 2)).max()))
        return self._sup[0]

    def __matmul__(self, other: "LaurentSymbol") -> "LaurentSymbol":
        return multiply(self, other)

    def __repr__(self):
        return (f"LaurentSymbol({self.rows}x{self.cols}, degrees "
                f"{self.n_min}..{self.n_max}, tail={self.tail_bound:.3g})")


def _strip_zeros(c: np.ndarray, n_min: int) -> tuple[np.ndarray, int]:
    nz = np.flatnonzero(np.any(c != 0, axis=(1, 2)))
    if nz.size == 0:
        return c[:1] * 0, 0
    return c[nz[0]:nz[-1] + 1], n_min + int(nz[0])


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def from_coefficients(coeffs: Mapping[int, object] | Sequence[object], n_min: int = 0,
                      tail_bound: float = 0.0) -> LaurentSymbol:
    """Build a symbol from ``{degree: matrix}`` or a list starting at ``n_min``.

    Scalars are promoted to 1x1 matrices.
    """
    if isinstance(coeffs, Mapping):
        if not coeffs:
            raise InvalidParameter("empty coefficient map")
        items = {int(k): np.atleast_2d(np.asarray(v, dtype=complex)) for k, v in coeffs.items()}
        lo, hi = min(items), max(items)
        shapes = {v.shape for v in items.values()}
        if len(shapes) != 1:
            raise DimensionMismatch(f"inconsistent coefficient shapes {shapes}")
        (shape,) = shapes
        arr = np.zeros((hi - lo + 1,) + shape, dtype=complex)
        for k, v in items.items():
            arr[k - lo] = v
        return LaurentSymbol(arr, lo, tail_bound)
    mats = [np.atleast_2d(np.asarray(v, dtype=complex)) for v in coeffs]
    if not mats:
        raise InvalidParameter("empty coefficient list")
    if len({m.shape for m in mats}) != 1:
        raise DimensionMismatch("inconsistent coefficient shapes")
    return LaurentSymbol(np.stack(mats), n_min, tail_bound)


def constant(C) -> LaurentSymbol:
    return from_coefficients({0: C})


def identity(d: int) -> LaurentSymbol:
    return constant(np.eye(d))


def monomial(n: int, d: int = 1) -> LaurentSymbol:
    """``z**n * I_d``."""
    return from_coefficients({n: np.eye(d)})


def zero(rows: int, cols: int) -> LaurentSymbol:
    return constant(np.zeros((rows, cols)))


def _blaschke_length(a: complex, eps: float) -> int:
    r = abs(a)
    if r == 0:
        return 1
    # minimal n with (1-r^2) r^n / (1-r) <= eps
    n = math.ceil(math.log(eps * (1 - r) / (1 - r * r)) / math.log(r))
    n = max(n, 1)
    while (1 - r * r) * r ** (n - 1) / (1 - r) <= eps and n > 1:
        n -= 1
    while (1 - r * r) * r ** n / (1 - r) > eps:
        n += 1
    return n


def blaschke_factor(a: complex, eps_sym: float = DEFAULT_EPS) -> LaurentSymbol:
    """The disk automorphism ``(z - a) / (1 - conj(a) z)`` cut at a certified tail."""
    a = complex(a)
    if not abs(a) < 1:
        raise InvalidParameter(f"|a| must be < 1, got {abs(a)}")
    if eps_sym <= 0:
        raise InvalidParameter("eps_sym must be positive")
    n_max = _blaschke_length(a, eps_sym)
    r = abs(a)
    c = np.empty(n_max + 1, dtype=complex)
    c[0] = -a
    k = np.arange(1, n_max + 1)
    c[1:] = (1 - r * r) * np.conj(a) ** (k - 1)
    tail = 0.0 if r == 0 else (1 - r * r) * r ** n_max / (1 - r)
    return LaurentSymbol(c[:, None, None], 0, tail)


def _check_projection(P: np.ndarray, tol: float = 1e-12):
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise InvalidParameter("projection must be square")
    scale = max(1.0, np.abs(P).max())
    if np.abs(P @ P - P).max() > tol * scale or np.abs(P - P.conj().T).max() > tol * scale:
        raise InvalidParameter("proj_F is not an orthogonal projection")


def blaschke_potapov_factor(a: complex, proj_F, eps_sym: float = DEFAULT_EPS) -> LaurentSymbol:
    """``phi_a(z) (I - P_F) + P_F`` for an orthogonal projection ``P_F != I``."""
    P = np.atleast_2d(np.asarray(proj_F, dtype=complex))
    _check_projection(P)
    d = P.shape[0]
    if np.allclose(P, np.eye(d), atol=1e-12):
        raise InvalidParameter("proj_F = I gives a constant factor; F must differ from E")
    phi = blaschke_factor(a, eps_sym)
    Q = np.eye(d) - P
    c = phi.coeffs[:, 0, 0][:, None, None] * Q[None]
    c[0] += P
    return LaurentSymbol(c, 0, phi.tail_bound)


def diag(*blocks: LaurentSymbol) -> LaurentSymbol:
    """Block-diagonal symbol."""
    lo = min(b.n_min for b in blocks)
    hi = max(b.n_max for b in blocks)
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    c = np.zeros((hi - lo + 1, rows, cols), dtype=complex)
    i = j = 0
    for b in blocks:
        c[b.n_min - lo:b.n_max - lo + 1, i:i + b.rows, j:j + b.cols] = b.coeffs
        i += b.rows
        j += b.cols
    return LaurentSymbol(c, lo, max(b.tail_bound for b in blocks))


def block(grid: Sequence[Sequence[LaurentSymbol]]) -> LaurentSymbol:
    """Assemble a block matrix of symbols, e.g. ``[[A, B]]`` or ``[[A], [B]]``."""
    lo = min(b.n_min for row in grid for b in row)
    hi = max(b.n_max for row in grid for b in row)
    row_h = [row[0].rows for row in grid]
    col_w = [b.cols for b in grid[0]]
    for r, row in zip(row_h, grid):
        if len(row) != len(col_w) or any(b.rows != r for b in row) or \
                any(b.cols != w for b, w in zip(row, col_w)):
            raise DimensionMismatch("block sizes do not line up")
    c = np.zeros((hi - lo + 1, sum(row_h), sum(col_w)), dtype=complex)
    tail = 0.0
    i = 0
    for r, row in zip(row_h, grid):
        j = 0
        for b in row:
            c[b.n_min - lo:b.n_max - lo + 1, i:i + r, j:j + b.cols] = b.coeffs
            tail += b.tail_bound
            j += b.cols
        i += r
    return LaurentSymbol(c, lo, tail)


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------

def trim(A: LaurentSymbol, budget: float) -> LaurentSymbol:
    """Drop end coefficients whose summed spectral norms stay within ``budget``.

    The dropped mass is added to ``tail_bound`` so the bound stays certified.
    """
    if budget <= 0 or A.coeffs.shape[0] == 1:
        return A
    norms = np.linalg.norm(A.coeffs, ord=2, axis=(1, 2))
    lo, hi = 0, len(norms) - 1
    spent = 0.0
    while lo < hi:
        cand = norms[lo] if norms[lo] <= norms[hi] else norms[hi]
        if spent + cand > budget:
            break
        spent += cand
        if norms[lo] <= norms[hi]:
            lo += 1
        else:
            hi -= 1
    if lo == 0 and hi == len(norms) - 1:
        return A
    return LaurentSymbol(A.coeffs[lo:hi + 1], A.n_min + lo, A.tail_bound + spent)


def multiply(A: LaurentSymbol, B: LaurentSymbol, trim_budget: float | None = None) -> LaurentSymbol:
    """Coefficient convolution ``(AB)^(n) = sum_k A^(k) B^(n-k)``.

    When either factor carries a tail, end coefficients of the product are
    trimmed within a budget equal to the larger incoming tail (override with
    ``trim_budget``); exact polynomials multiply exactly.
    """
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    la, lb = A.coeffs.shape[0], B.coeffs.shape[0]
    out = np.zeros((la + lb - 1, A.rows, B.cols), dtype=complex)
    if la <= lb:
        for i in range(la):
            out[i:i + lb] += np.matmul(A.coeffs[i], B.coeffs)
    else:
        for i in range(lb):
            out[i:i + la] += np.matmul(A.coeffs, B.coeffs[i])
    tail = 0.0
    if A.tail_bound or B.tail_bound:
        tail = A.sup_norm() * B.tail_bound + A.tail_bound * B.sup_norm() \
            + A.tail_bound * B.tail_bound
    C = LaurentSymbol(out, A.n_min + B.n_min, tail)
    if trim_budget is None:
        trim_budget = max(A.tail_bound, B.tail_bound)
    return trim(C, trim_budget)


def product(symbols: Iterable[LaurentSymbol], trim_budget: float | None = None) -> LaurentSymbol:
    it = iter(symbols)
    out = next(it)
    for s in it:
        out = multiply(out, s, trim_budget)
    return out


def add(A: LaurentSymbol, B: LaurentSymbol) -> LaurentSymbol:
    if A.shape != B.shape:
        raise DimensionMismatch(f"cannot add {A.shape} and {B.shape}")
    lo, hi = min(A.n_min, B.n_min), max(A.n_max, B.n_max)
    c = np.zeros((hi - lo + 1,) + A.shape, dtype=complex)
    c[A.n_min - lo:A.n_max - lo + 1] += A.coeffs
    c[B.n_min - lo:B.n_max - lo + 1] += B.coeffs
    return LaurentSymbol(c, lo, A.tail_bound + B.tail_bound)


def scale(A: LaurentSymbol, s: complex) -> LaurentSymbol:
    return LaurentSymbol(A.coeffs * s, A.n_min, abs(s) * A.tail_bound)


def left_mul(C, A: LaurentSymbol) -> LaurentSymbol:
    """Constant matrix times symbol."""
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    return LaurentSymbol(np.matmul(C, A.coeffs), A.n_min, np.linalg.norm(C, 2) * A.tail_bound)


def tilde(A: LaurentSymbol) -> LaurentSymbol:
    """``A(conj z)^*``: conjugate-transpose each coefficient, keep the band."""
    return LaurentSymbol(np.conj(np.swapaxes(A.coeffs, 1, 2)), A.n_min, A.tail_bound)


def star(A: LaurentSymbol) -> LaurentSymbol:
    """Pointwise adjoint ``A(z)^*`` on the circle: coefficient n is ``A^(-n)^*``."""
    c = np.conj(np.swapaxes(A.coeffs, 1, 2))[::-1]
    return LaurentSymbol(c, -A.n_max, A.tail_bound)


# ---------------------------------------------------------------------------
# evaluation and sampling
# ---------------------------------------------------------------------------

def evaluate(A: LaurentSymbol, z: complex) -> np.ndarray:
    """``sum_n A^(n) z^n`` over the stored band."""
    z = complex(z)
    if z == 0:
        if A.n_min > 0:
            return np.zeros(A.shape, dtype=complex)
        if A.n_min < 0:
            raise InvalidParameter("symbol has negative degrees; cannot evaluate at 0")
        return np.array(A.coeffs[0])
    n = np.arange(A.n_min, A.n_max + 1)
    powers = np.exp(n * np.log(z)) if abs(z) != 1 else z ** n
    return np.tensordot(powers, A.coeffs, axes=(0, 0))


def sample(A: LaurentSymbol, grid: int) -> np.ndarray:
    """Values at ``exp(2 pi i j / grid)``, shape (grid, rows, cols)."""
    folded = np.zeros((grid,) + A.shape, dtype=complex)
    idx = np.arange(A.n_min, A.n_max + 1) % grid
    np.add.at(folded, idx, A.coeffs)
    return np.fft.ifft(folded, axis=0) * grid


def coefficients_from_samples(values: np.ndarray, n_min: int, n_max: int) -> np.ndarray:
    """Inverse of :func:`sample` for degrees ``n_min..n_max`` (grid must exceed the band)."""
    grid = values.shape[0]
    if n_max - n_min + 1 > grid:
        raise InvalidParameter("grid too coarse for requested band")
    c = np.fft.fft(values, axis=0) / grid
    return c[np.arange(n_min, n_max + 1) % grid]


# ---------------------------------------------------------------------------
# inner functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InnerCertificate:
    left_inner_residual: float
    two_sided_residual: float | None
    unitary_part_rank: int
    pure_part_dims: tuple[int, int]
    unitary_direction_basis: np.ndarray
    singular_values_at_zero: np.ndarray
    near_threshold: tuple[float, ...] = ()

    def is_inner(self, tol: float = DEFAULT_INNER_TOL) -> bool:
        return self.left_inner_residual <= tol

    def is_two_sided(self, tol: float = DEFAULT_INNER_TOL) -> bool:
        return self.two_sided_residual is not None and self.two_sided_residual <= tol

    @property
    def pure(self) -> bool:
        return self.unitary_part_rank == 0


def _identity_defect(P: LaurentSymbol) -> float:
    d = P.rows
    worst = 0.0
    for n, c in P.as_dict().items():
        dev = c - np.eye(d) if n == 0 else c
        worst = max(worst, float(np.linalg.norm(dev, 2)))
    if P.n_min > 0 or P.n_max < 0:
        worst = max(worst, 1.0)
    return worst


def check_inner(Th: LaurentSymbol, tol: float = DEFAULT_INNER_TOL) -> InnerCertificate:
    """Certify ``Th(z)^* Th(z) = I`` coefficientwise and split off the unitary part.

    The unitary part is read from ``Th(0)``: right singular vectors whose
    singular value exceeds ``1 - tol`` span the directions on which ``Th`` is
    a constant isometry.  Singular values within a factor 100 of the threshold
    on either side are reported in ``near_threshold``.
    """
    if not Th.analytic:
        raise InvalidParameter("check_inner needs an analytic symbol")
    left = _identity_defect(multiply(star(Th), Th, trim_budget=0.0))
    two = None
    if Th.rows == Th.cols:
        two = _identity_defect(multiply(Th, star(Th), trim_budget=0.0))
    _, s, vh = np.linalg.svd(evaluate(Th, 0))
    keep = s > 1 - tol
    near = tuple(float(x) for x in s if 1 - 100 * tol < x <= 1 - tol / 100 and abs(x - (1 - tol)) > 0)
    r = int(keep.sum())
    return InnerCertificate(
        left_inner_residual=left,
        two_sided_residual=two,
        unitary_part_rank=r,
        pure_part_dims=(Th.cols - r, Th.rows - r),
        unitary_direction_basis=vh[:len(s)][keep].conj().T,
        singular_values_at_zero=s,
        near_threshold=near,
    )


def hitt_sarason_pair(phi: LaurentSymbol, eps_sym: float = DEFAULT_EPS,
                      inner_tol: float = DEFAULT_INNER_TOL) -> tuple[LaurentSymbol, LaurentSymbol]:
    """Return ``(g, theta)`` with ``T_g K_theta = K_phi`` for scalar inner ``phi``.

    ``g = (1 - |phi(0)|^2)^(-1/2) (1 - conj(phi(0)) phi)`` and
    ``theta = (phi(0) - phi) / (1 - conj(phi(0)) phi)``, the reciprocal being
    summed as a geometric series in ``conj(phi(0)) phi`` until the remainder
    ``|phi(0)|^(K+1) / (1 - |phi(0)|)`` drops below ``eps_sym``.
    """
    if phi.shape != (1, 1) or not phi.analytic:
        raise InvalidParameter("phi must be a scalar analytic symbol")
    cert = check_inner(phi, inner_tol)
    if not cert.is_inner(inner_tol):
        raise NotInner(f"phi is not inner (residual {cert.left_inner_residual:.3g})")
    p0 = complex(evaluate(phi, 0)[0, 0])
    r = abs(p0)
    if r >= 1 - 1e-10:
        raise InvalidParameter("|phi(0)| is 1: phi is a unimodular constant")
    c = np.conj(p0)
    one = identity(1)
    g = scale(add(one, scale(phi, -c)), 1 / math.sqrt(1 - r * r))
    # Neumann series for 1 / (1 - c phi)
    inv = one
    if r > 0:
        K = 0
        while r ** (K + 1) / (1 - r) > eps_sym:
            K += 1
        term = one
        cphi = scale(phi, c)
        for _ in range(K):
            term = multiply(term, cphi, trim_budget=eps_sym / (K + 1))
            inv = add(inv, term)
        inv = LaurentSymbol(inv.coeffs, inv.n_min, inv.tail_bound + r ** (K + 1) / (1 - r))
    theta = multiply(add(scale(one, p0), scale(phi, -1)), inv, trim_budget=eps_sym)
    # theta(0) vanishes identically; remove the rounding residue at degree 0
    c0 = theta.coefficient(0)
    if abs(c0[0, 0]) < 1e-9:
        coeffs = np.array(theta.coeffs)
        if theta.n_min <= 0 <= theta.n_max:
            coeffs[-theta.n_min] = 0
        theta = LaurentSymbol(coeffs, theta.n_min, theta.tail_bound + abs(c0[0, 0]))
    return g, theta
