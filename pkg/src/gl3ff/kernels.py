"""Rational kernel functions, set products, and the domain-wall partition function.

The four kernels are the standard rational building blocks

    g(x, y) = c / (x - y)
    f(x, y) = (x - y + c) / (x - y)
    h(x, y) = f/g = (x - y + c) / c
    t(x, y) = g/h = c**2 / ((x - y) * (x - y + c))

together with the shorthand convention that a kernel applied to parameter
sets means the product over all pairs (empty sets give 1).
"""

from __future__ import annotations

import warnings
from itertools import combinations_with_replacement

import numpy as np
import scipy.linalg

from .errors import PoleError

__all__ = [
    "EPS_SEP",
    "g",
    "f",
    "h",
    "t",
    "inv_f",
    "kernel_quadruple",
    "kernel_product",
    "g_prod",
    "f_prod",
    "h_prod",
    "t_prod",
    "inv_f_prod",
    "vandermonde",
    "dwpf",
    "det_lu",
    "check_pairwise_distinct",
]

# Pole guard: refuse evaluation when a denominator is below EPS_SEP relative
# to the magnitude of its operands (silent cancellation is worse than an error).
EPS_SEP = 1e-10


def _near_zero(d, x, y):
    scale = max(1.0, abs(x), abs(y))
    return abs(d) <= EPS_SEP * scale


def g(x, y, c):
    """g-kernel c/(x-y).

    >>> g(2, 1, 1)
    (1+0j)
    """
    d = x - y
    if _near_zero(d, x, y):
        raise PoleError("g", x, y)
    return complex(c) / d


def f(x, y, c):
    """f-kernel (x-y+c)/(x-y)."""
    d = x - y
    if _near_zero(d, x, y):
        raise PoleError("f", x, y)
    return (d + c) / d


def h(x, y, c):
    """h-kernel (x-y+c)/c; equal to f/g, pole-free in x-y."""
    return (x - y + c) / c


def t(x, y, c):
    """t-kernel c^2/((x-y)(x-y+c)); poles at x=y and x-y=-c."""
    d = x - y
    if _near_zero(d, x, y):
        raise PoleError("t", x, y)
    dc = d + c
    if _near_zero(dc, x, y):
        raise PoleError("t", x, y, detail="x - y = -c")
    return c * c / (d * dc)


def inv_f(x, y, c):
    """1/f continued through x=y, where it vanishes: (x-y)/(x-y+c)."""
    d = x - y
    dc = d + c
    if _near_zero(dc, x, y):
        raise PoleError("inv_f", x, y, detail="x - y = -c")
    return d / dc


def kernel_quadruple(x, y, c):
    """Evaluate (g, f, h, t) at a single point pair.

    >>> kernel_quadruple(2, 1, 1)
    ((1+0j), (2+0j), (2+0j), (0.5+0j))
    """
    return g(x, y, c), f(x, y, c), h(x, y, c), t(x, y, c)


def _as_tuple(x):
    if isinstance(x, (list, tuple)):
        return tuple(x)
    if isinstance(x, np.ndarray):
        return tuple(x.tolist())
    return (x,)


def kernel_product(kernel, xs, ys, c):
    """Product of ``kernel(x, y, c)`` over all pairs; empty sets give 1.

    Scalars are treated as one-element sets, matching the shorthand that a
    kernel applied to sets means the product over the sets.
    """
    out = complex(1.0)
    for x in _as_tuple(xs):
        for y in _as_tuple(ys):
            out *= kernel(x, y, c)
    return out


def g_prod(xs, ys, c):
    return kernel_product(g, xs, ys, c)


def f_prod(xs, ys, c):
    return kernel_product(f, xs, ys, c)


def h_prod(xs, ys, c):
    return kernel_product(h, xs, ys, c)


def t_prod(xs, ys, c):
    return kernel_product(t, xs, ys, c)


def inv_f_prod(xs, ys, c):
    """Product of 1/f over all pairs, exactly zero on coinciding pairs."""
    return kernel_product(inv_f, xs, ys, c)


def check_pairwise_distinct(values, eps=EPS_SEP, label="parameter set"):
    """Raise :class:`PoleError` if two entries coincide within ``eps`` (relative)."""
    vals = _as_tuple(values)
    for (i, x), (j, y) in combinations_with_replacement(enumerate(vals), 2):
        if i == j:
            continue
        if _near_zero(x - y, x, y):
            raise PoleError(label, x, y, detail=f"entries {i} and {j} coincide")
    return vals


def vandermonde(values, c):
    """Ordered double g-products (upper, lower) over a single set.

    Returns ``(prod_{j<k} g(s_j, s_k), prod_{j>k} g(s_j, s_k))``.  Both flip
    sign under a transposition of the input order; their product is the full
    off-diagonal g-product and is order-free.
    """
    vals = _as_tuple(values)
    upper = complex(1.0)
    lower = complex(1.0)
    for j in range(len(vals)):
        for k in range(j + 1, len(vals)):
            upper *= g(vals[j], vals[k], c)
            lower *= g(vals[k], vals[j], c)
    return upper, lower


def det_lu(mat):
    """Determinant of a dense complex matrix via LU with partial pivoting.

    A singular matrix is not an error; the determinant is simply 0.
    """
    a = np.asarray(mat, dtype=complex)
    if a.size == 0:
        return complex(1.0)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"determinant of non-square matrix {a.shape}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    sign = 1 if np.count_nonzero(piv != np.arange(len(piv))) % 2 == 0 else -1
    return sign * complex(np.prod(np.diag(lu)))


def dwpf(xs, ys, c):
    """Domain-wall partition function K_n as an n x n determinant.

    ``K_n(xs | ys) = upper(xs) * lower(ys) * h(xs, ys) * det t(x_j, y_k)``.
    Vanishes when any single argument is sent to infinity.
    """
    xv = _as_tuple(xs)
    yv = _as_tuple(ys)
    if len(xv) != len(yv):
        raise ValueError(f"K_n needs equal cardinalities, got {len(xv)} and {len(yv)}")
    n = len(xv)
    if n == 0:
        return complex(1.0)
    upper, _ = vandermonde(xv, c)
    _, lower = vandermonde(yv, c)
    mat = np.empty((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            mat[j, k] = t(xv[j], yv[k], c)
    return upper * lower * h_prod(xv, yv, c) * det_lu(mat)
