"""Independent reference computations used to freeze expected values.

Nothing here imports the package: symbols are plain Python callables or
coefficient dicts, and matrices are assembled entry by entry.
"""

import numpy as np
import scipy.linalg as sla

GRID = 256


def blaschke(a):
    return lambda z: (z - a) / (1 - np.conj(a) * z)


def fft_coefficients(f, n_min, n_max, grid=GRID):
    """Fourier coefficients of a scalar function sampled on the circle."""
    z = np.exp(2j * np.pi * np.arange(grid) / grid)
    c = np.fft.fft(f(z)) / grid
    return {n: c[n % grid] for n in range(n_min, n_max + 1)}


def blaschke_series(a, n):
    """Closed-form Taylor coefficient ``n`` of the disk automorphism."""
    if n == 0:
        return -a
    return (1 - abs(a) ** 2) * np.conj(a) ** (n - 1)


def toeplitz_matrix(coef, N):
    """``[coef(j - k)]`` for a scalar coefficient function."""
    col = [coef(j) for j in range(N)]
    row = [coef(-k) for k in range(N)]
    return sla.toeplitz(col, row)


def hankel_matrix(coef, N):
    """``[coef(-j - k - 1)]``."""
    return np.array([[coef(-j - k - 1) for k in range(N)] for j in range(N)], dtype=complex)


def series_product(f_coef, g_coef, N):
    """First ``N`` Taylor coefficients of ``f g`` for analytic ``f``, ``g``."""
    return np.array([sum(f_coef(k) * g_coef(n - k) for k in range(n + 1)) for n in range(N)])


def geometric(w, N):
    return np.conj(w) ** np.arange(N)


def col_rank(A, tol=1e-8):
    s = np.linalg.svd(A, compute_uv=False)
    return int((s > tol * max(s[0], 1.0)).sum())


def max_principal_angle(A, B):
    """Largest principal angle between the column spans of ``A`` and ``B``."""
    return float(np.max(sla.subspace_angles(A, B)))
