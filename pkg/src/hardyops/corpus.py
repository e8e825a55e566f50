"""Seeded random symbol and subspace corpora.

Every generator takes a ``numpy.random.Generator`` or an integer seed, so a
seed fixes the whole corpus.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from . import operators as ops
from .representations import RepSpec
from .symbols import (LaurentSymbol, add, blaschke_factor, blaschke_potapov_factor, block,
                      check_inner, constant, diag, from_coefficients, identity, left_mul,
                      monomial, multiply, product, scale, star)

IDENTITY_RADIUS = 0.7
REP_RADIUS = 0.6


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_point(rng, radius: float) -> complex:
    """Uniform on the disk of the given radius."""
    r = radius * np.sqrt(rng.uniform())
    return complex(r * np.exp(2j * np.pi * rng.uniform()))


def random_projection(rng, d: int, rank: int | None = None) -> np.ndarray:
    """Orthogonal projection of rank ``< d`` onto a random subspace."""
    if rank is None:
        rank = int(rng.integers(0, d))
    U = unitary_group.rvs(d, random_state=rng) if d > 1 else np.eye(1)
    V = U[:, :rank]
    return V @ V.conj().T


def random_unitary(rng, d: int) -> np.ndarray:
    return unitary_group.rvs(d, random_state=rng) if d > 1 else np.array([[np.exp(2j * np.pi * rng.uniform())]])


def random_bp_product(rng, d: int, n_factors: int, radius: float,
                      unitary: bool = True) -> LaurentSymbol:
    """Product of ``n_factors`` Blaschke-Potapov factors, optionally times a unitary."""
    rng = _rng(rng)
    facs = [blaschke_potapov_factor(random_point(rng, radius), random_projection(rng, d))
            for _ in range(n_factors)]
    out = product(facs)
    if unitary:
        out = left_mul(random_unitary(rng, d), out)
    return out


def random_pure_bp(rng, d: int, n_factors: int, radius: float, max_tries: int = 50) -> LaurentSymbol:
    """Blaschke-Potapov product with no unitary constant part.

    A direction fixed by every factor survives as a unitary part, so
    products are redrawn until ``Theta(0)`` is a strict contraction.
    """
    rng = _rng(rng)
    for _ in range(max_tries):
        th = random_bp_product(rng, d, n_factors, radius)
        if check_inner(th).pure:
            return th
    raise RuntimeError("could not draw a pure product; raise n_factors")


def random_mixed(rng, d: int, radius: float = IDENTITY_RADIUS) -> LaurentSymbol:
    """``B1 * star(B2)`` plus a constant: a symbol with both analytic and co-analytic parts."""
    rng = _rng(rng)
    B1 = random_bp_product(rng, d, int(rng.integers(1, 3)), radius)
    B2 = random_bp_product(rng, d, int(rng.integers(1, 3)), radius)
    C = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / (2 * d)
    return add(multiply(B1, star(B2)), constant(C))


@dataclass(frozen=True)
class IdentityCase:
    name: str
    symbols: tuple
    label: str


def identity_corpus(seed, count: int = 50, dims=(1, 2, 3),
                    radius: float = IDENTITY_RADIUS) -> list[IdentityCase]:
    """``count`` tuples per identity, dimensions cycling through ``dims``."""
    rng = _rng(seed)
    out = []
    for i in range(count):
        d = dims[i % len(dims)]
        for name, (arity, _, _) in ops.IDENTITIES.items():
            syms = tuple(random_mixed(rng, d, radius) for _ in range(arity))
            out.append(IdentityCase(name, syms, f"{name}#{i}(d={d})"))
    return out


@dataclass(frozen=True)
class RepCase:
    label: str
    Phi: LaurentSymbol | None
    Theta: LaurentSymbol
    flavor: str = "phi_model"

    def spec(self, N: int) -> RepSpec:
        return RepSpec(self.Theta, N, self.Phi, self.flavor, label=self.label)


def rep_corpus(seed, count: int = 28, radius: float = REP_RADIUS) -> list[RepCase]:
    """Model-space and range-of-inner representations with known defects.

    Cycles through plain model spaces (``Phi = I``), scalar pairs, 2x2 pure ``Theta`` with inner ``Phi`` (some
    with a unitary constant direction), a column inner ``Phi`` and
    range-of-inner subspaces for square and column ``Theta``.
    """
    rng = _rng(seed)
    out = []
    kinds = ("model", "scalar", "square2", "unitary_dir", "column", "range", "range2", "range_col")
    for i in range(count):
        k = kinds[i % len(kinds)]
        if k == "model":
            d = 1 + (i // len(kinds)) % 2
            Th = random_pure_bp(rng, d, 2, radius)
            out.append(RepCase(f"model{d}#{i}", None, Th))
        elif k == "scalar":
            Th = random_bp_product(rng, 1, int(rng.integers(1, 3)), radius)
            Ph = random_bp_product(rng, 1, int(rng.integers(1, 3)), radius)
            out.append(RepCase(f"scalar#{i}", Ph, Th))
        elif k == "square2":
            Th = random_pure_bp(rng, 2, 2, radius)
            Ph = random_bp_product(rng, 2, 2, radius)
            out.append(RepCase(f"square2#{i}", Ph, Th))
        elif k == "unitary_dir":
            # Phi = diag(b, 1) has a one-dimensional unitary part
            Th = random_pure_bp(rng, 2, 2, radius)
            b = random_bp_product(rng, 1, 1, radius)
            Ph = left_mul(random_unitary(rng, 2), diag(b, identity(1)))
            out.append(RepCase(f"unitary_dir#{i}", Ph, Th))
        elif k == "column":
            Th = random_bp_product(rng, 1, int(rng.integers(1, 3)), radius)
            a = random_point(rng, radius)
            col = block([[blaschke_factor(a)], [monomial(1)]])
            out.append(RepCase(f"column#{i}", scale(col, 2 ** -0.5), Th))
        elif k == "range":
            Th = random_bp_product(rng, 1, int(rng.integers(1, 3)), radius)
            out.append(RepCase(f"range#{i}", None, Th, "range_of_inner"))
        elif k == "range_col":
            # non-square inner column: infinite-dimensional complement
            t = rng.uniform(0.2, 1.3)
            Th = block([[scale(random_bp_product(rng, 1, 1, radius), np.cos(t))],
                        [scale(random_bp_product(rng, 1, int(rng.integers(1, 3)), radius), np.sin(t))]])
            out.append(RepCase(f"range_col#{i}", None, Th, "range_of_inner"))
        else:
            # 2x2 product with a constant unitary direction: dim E - rank U = 1
            b = random_bp_product(rng, 1, 1, radius)
            Th = left_mul(random_unitary(rng, 2), diag(b, identity(1)))
            out.append(RepCase(f"range2#{i}", None, Th, "range_of_inner"))
    return out


def hitt_sarason_corpus(seed, count: int = 12) -> list[LaurentSymbol]:
    """Scalar inner functions: single factors with ``|a| <= 0.8`` and two-factor products with ``|a| <= 0.5``."""
    rng = _rng(seed)
    # the edge of the range is always covered
    out = [blaschke_factor(0.8), blaschke_factor(-0.8j)]
    for i in range(count - 2):
        if i % 2 == 0:
            r = rng.uniform(0, 0.8)
            out.append(blaschke_factor(r * np.exp(2j * np.pi * rng.uniform())))
        else:
            out.append(multiply(blaschke_factor(random_point(rng, 0.5)),
                                blaschke_factor(random_point(rng, 0.5))))
    return out


# ---------------------------------------------------------------------------
# sums of products of Toeplitz and Hankel operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProductTerm:
    """``coef * F_1 ... F_k`` with factors ``("T" | "H", symbol)``."""

    coef: complex
    factors: tuple

    def build(self, N: int) -> ops.TruncatedOp:
        mats = [ops.toeplitz(s, N, allow_wide=True) if kind == "T"
                else ops.hankel(s, N, allow_wide=True) for kind, s in self.factors]
        return ops.scale(ops.chain(*mats), self.coef)


@dataclass(frozen=True)
class OperatorSum:
    label: str
    terms: tuple

    def build(self, N: int) -> ops.TruncatedOp:
        return ops.exact_compression(lambda n: _sum_terms(self.terms, n), N)


def _sum_terms(terms, n):
    out = terms[0].build(n)
    for t in terms[1:]:
        out = out + t.build(n)
    return out


def _analytic_poly(rng, deg: int) -> LaurentSymbol:
    c = (rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)) / np.sqrt(deg + 1)
    return from_coefficients(list(c))


def _coanalytic_poly(rng, deg: int) -> LaurentSymbol:
    c = (rng.normal(size=deg) + 1j * rng.normal(size=deg)) / np.sqrt(deg)
    return from_coefficients(list(c[::-1]), n_min=-deg)


def operator_sum_corpus(seed, count: int = 20, radius: float = 0.5) -> list[OperatorSum]:
    """Sums of one or two products with 2-3 factors, each product holding a Hankel factor.

    Toeplitz factors use analytic polynomials, co-analytic polynomials or
    Blaschke products; Hankel factors use co-analytic polynomials or the
    conjugate of a Blaschke product, so every product has finite rank.
    """
    rng = _rng(seed)
    out = []
    for i in range(count):
        terms = []
        for _ in range(int(rng.integers(1, 3))):
            k = int(rng.integers(2, 4))
            hpos = int(rng.integers(0, k))
            facs = []
            for j in range(k):
                if j == hpos or rng.uniform() < 0.25:
                    s = _coanalytic_poly(rng, int(rng.integers(1, 5))) if rng.uniform() < 0.5 \
                        else star(blaschke_factor(random_point(rng, radius)))
                    facs.append(("H", s))
                else:
                    r = rng.uniform()
                    if r < 0.4:
                        s = _analytic_poly(rng, int(rng.integers(0, 4)))
                    elif r < 0.7:
                        s = _coanalytic_poly(rng, int(rng.integers(1, 4)))
                    else:
                        s = blaschke_factor(random_point(rng, radius))
                    facs.append(("T", s))
            coef = complex(rng.normal() + 1j * rng.normal())
            terms.append(ProductTerm(coef, tuple(facs)))
        out.append(OperatorSum(f"sum#{i}", tuple(terms)))
    return out
