"""Reproducing kernels of ``M = T_Phi K_Theta`` and ``M^perp``.

Kernel values come from symbol evaluation; the cross-check expands the
kernel in Taylor coefficients and compares with the orthogonal projection of
a Szegő vector onto the computed subspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import subspaces as sp
from .errors import InvalidParameter, WindowRefused
from .representations import RepSpec, build_rep
from .symbols import LaurentSymbol, evaluate

DISK_RADIUS = 0.95
TAIL_TOL = 1e-8


def geometric_tail(w: complex, N: int) -> float:
    """``|w|^N / (1 - |w|)``, the mass of the Szegő series beyond degree ``N - 1``."""
    r = abs(w)
    return r ** N / (1 - r)


def order_for_tail(w: complex, tail_tol: float = TAIL_TOL) -> int:
    r = abs(w)
    if r == 0:
        return 1
    return max(1, math.ceil(math.log(tail_tol * (1 - r)) / math.log(r)))


def _check_point(z: complex, name: str = "w"):
    if abs(z) > DISK_RADIUS:
        raise InvalidParameter(f"|{name}| = {abs(z):.3g} exceeds the certified radius {DISK_RADIUS}")


def szego_vector(w: complex, c, N: int, tail_tol: float = TAIL_TOL) -> np.ndarray:
    """Coefficients ``conj(w)^k c`` for ``k < N`` (coefficient-major)."""
    _check_point(w)
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if geometric_tail(w, N) > tail_tol:
        raise WindowRefused(
            f"Szegő tail {geometric_tail(w, N):.3g} at |w|={abs(w):.3g}, N={N} exceeds {tail_tol:g}")
    g = np.conj(w) ** np.arange(N)
    return np.kron(g, c)


def _ker_parts(spec: RepSpec, z, w):
    Th_z, Th_w = evaluate(spec.Theta, z), evaluate(spec.Theta, w)
    if spec.flavor == "range_of_inner":
        return Th_z @ Th_w.conj().T
    Ph_z, Ph_w = evaluate(spec.Phi, z), evaluate(spec.Phi, w)
    mid = np.eye(spec.dim_E1) - Th_z @ Th_w.conj().T
    return Ph_z @ mid @ Ph_w.conj().T


def kernel_M(spec: RepSpec, z: complex, w: complex) -> np.ndarray:
    """``Phi(z)(I - Theta(z)Theta(w)^*)Phi(w)^* / (1 - z conj(w))``.

    For a range-of-inner spec this is ``Theta(z)Theta(w)^* / (1 - z conj(w))``.
    """
    _check_point(z, "z")
    _check_point(w)
    return _ker_parts(spec, z, w) / (1 - z * np.conj(w))


def kernel_Mperp(spec: RepSpec, z: complex, w: complex) -> np.ndarray:
    """Szegő kernel minus :func:`kernel_M`."""
    _check_point(z, "z")
    _check_point(w)
    return (np.eye(spec.dim_F) - _ker_parts(spec, z, w)) / (1 - z * np.conj(w))


def szego_kernel(dim: int, z: complex, w: complex) -> np.ndarray:
    return np.eye(dim) / (1 - z * np.conj(w))


def complement_residual(spec: RepSpec, z: complex, w: complex) -> float:
    """``||K_M + K_{M^perp} - Szegő||``."""
    D = kernel_M(spec, z, w) + kernel_Mperp(spec, z, w) - szego_kernel(spec.dim_F, z, w)
    return float(np.linalg.norm(D, 2))


def gram_matrix(spec: RepSpec, points, perp: bool = False) -> np.ndarray:
    """Block Gram matrix ``[K(z_i, z_j)]``; positive semidefinite for a kernel."""
    f = kernel_Mperp if perp else kernel_M
    return np.block([[f(spec, a, b) for b in points] for a in points])


def _conv_apply(Phi: LaurentSymbol, x: np.ndarray, dim_in: int, N: int) -> np.ndarray:
    """First ``N`` coefficients of ``Phi * x`` for analytic ``Phi``, by direct convolution."""
    X = x.reshape(-1, dim_in)
    out = np.zeros((N, Phi.rows), dtype=complex)
    for k in range(min(Phi.n_max + 1, N)):
        C = Phi.coefficient(k)
        out[k:] += X[:N - k] @ C.T
    return out.ravel()


def kernel_expansion(spec: RepSpec, w: complex, c, N: int, perp: bool = False) -> np.ndarray:
    """Taylor coefficients (degrees ``< N``) of ``K(., w) c``.

    ``Phi k_w Phi(w)^* c - Phi Theta k_w Theta(w)^* Phi(w)^* c``, with the
    geometric series truncated at ``N`` terms; every retained coefficient is
    exact because the symbols are analytic.
    """
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    g = np.conj(w) ** np.arange(N)
    Th_w = evaluate(spec.Theta, w)
    if spec.flavor == "range_of_inner":
        v = _conv_apply(spec.Theta, np.kron(g, Th_w.conj().T @ c), spec.dim_E, N)
    else:
        a = evaluate(spec.Phi, w).conj().T @ c
        first = _conv_apply(spec.Phi, np.kron(g, a), spec.dim_E1, N)
        inner = _conv_apply(spec.Theta, np.kron(g, Th_w.conj().T @ a), spec.dim_E, N)
        v = first - _conv_apply(spec.Phi, inner, spec.dim_E1, N)
    if perp:
        v = np.kron(g, c) - v
    return v


@dataclass(frozen=True)
class KernelConsistency:
    residual: float
    tail: float
    order: int
    lifted_order: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


def kernel_consistency(spec: RepSpec, w: complex, c, N: int | None = None, tol: float = 1e-6,
                       perp: bool = False, M: sp.Subspace | None = None) -> KernelConsistency:
    """Residual between the kernel expansion and ``P_M`` applied to a Szegő vector.

    The residual is relative to the norm of the Szegő vector.

    The projection is computed at an order high enough for the Szegő tail to
    drop below ``1e-8`` and both sides are compared on degrees ``< N``.
    """
    _check_point(w)
    N = spec.N if N is None else N
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.size != spec.dim_F:
        raise InvalidParameter(f"c has length {c.size}, expected {spec.dim_F}")
    big = max(N, order_for_tail(w))
    if M is None or M.order != big:
        M, _ = build_rep(spec.at(big))
    if perp:
        M = sp.orth_complement(M)
    k = szego_vector(w, c, big)
    proj = (M.basis @ (M.basis.conj().T @ k))[:N * spec.dim_F]
    exp = kernel_expansion(spec, w, c, N, perp)
    # relative to the Szegő vector: the kernel column itself may vanish (Phi(w) = 0)
    scale = np.linalg.norm(k[:N * spec.dim_F])
    res = float(np.linalg.norm(proj - exp) / scale)
    return KernelConsistency(res, geometric_tail(w, N), N, big, tol)
