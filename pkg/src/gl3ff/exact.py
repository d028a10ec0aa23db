"""Exact rational-complex arithmetic for golden-value generation.

Numbers are pairs of :class:`fractions.Fraction` (real and imaginary parts),
so every kernel identity that holds as a rational identity can be checked
with zero floating noise.  Intended for small cardinalities only (n <= 3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = ["QC", "qc", "g_exact", "f_exact", "h_exact", "t_exact", "det_exact", "dwpf_exact"]


@dataclass(frozen=True)
class QC:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __add__(self, other):
        o = qc(other)
        return QC(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QC(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-qc(other))

    def __rsub__(self, other):
        return qc(other) + (-self)

    def __mul__(self, other):
        o = qc(other)
        return QC(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = qc(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return QC((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return qc(other) / self

    def __abs__(self):
        return math.sqrt(float(self.re * self.re + self.im * self.im))

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def to_complex(self):
        return complex(float(self.re), float(self.im))


def qc(x, im=None):
    """Coerce ints, Fractions, or (re, im) pairs to :class:`QC`."""
    if im is not None:
        return QC(Fraction(x), Fraction(im))
    if isinstance(x, QC):
        return x
    if isinstance(x, (int, Fraction)):
        return QC(Fraction(x), Fraction(0))
    raise TypeError(f"cannot coerce {type(x).__name__} to QC exactly")


def g_exact(x, y, c):
    return c / (x - y)


def f_exact(x, y, c):
    d = x - y
    return (d + c) / d


def h_exact(x, y, c):
    return (x - y + c) / c


def t_exact(x, y, c):
    d = x - y
    return c * c / (d * (d + c))


def det_exact(rows):
    """Exact determinant by fraction-free-enough Gaussian elimination."""
    n = len(rows)
    if n == 0:
        return qc(1)
    a = [list(r) for r in rows]
    det = qc(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if not a[i][k].is_zero()), None)
        if pivot is None:
            return qc(0)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            det = det * qc(-1)
        det = det * a[k][k]
        for i in range(k + 1, n):
            ratio = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] = a[i][j] - ratio * a[k][j]
    return det


def dwpf_exact(xs, ys, c):
    """Exact rational evaluation of the domain-wall partition function."""
    if len(xs) != len(ys):
        raise ValueError("equal cardinalities required")
    n = len(xs)
    if n == 0:
        return qc(1)
    upper = qc(1)
    lower = qc(1)
    for j in range(n):
        for k in range(j + 1, n):
            upper = upper * g_exact(xs[j], xs[k], c)
            lower = lower * g_exact(ys[k], ys[j], c)
    hprod = qc(1)
    for x in xs:
        for y in ys:
            hprod = hprod * h_exact(x, y, c)
    mat = [[t_exact(x, y, c) for y in ys] for x in xs]
    return upper * lower * hprod * det_exact(mat)
