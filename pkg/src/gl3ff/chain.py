"""Concrete inhomogeneous SU(3)-invariant chain used as the brute-force oracle.

The quantum space is (C^3)^(tensor L).  The monodromy matrix is the ordered
product of rational R-matrices over the sites, optionally preceded by a
diagonal twist in the auxiliary space; its 3x3 operator-valued blocks give
dense matrices for every entry, for the transfer matrix, and for the zero
modes (the leading 1/w coefficients of the expansion around w = infinity).
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from .errors import PoleError, SizeError, TwistError
from .kernels import EPS_SEP, f, g

__all__ = [
    "MAX_SITES",
    "ChainSpec",
    "Monodromy",
    "ZeroModes",
    "VacuumData",
    "r_matrix",
    "permutation_matrix",
    "monodromy",
    "transfer_matrix",
    "vacuum_state",
    "dual_vacuum_state",
    "vacuum_ratios",
    "rtt_residual",
    "rtt_residual_from_blocks",
    "zero_modes",
]

MAX_SITES = 6

_UNTWISTED = (1.0 + 0j, 1.0 + 0j, 1.0 + 0j)


@dataclass(frozen=True)
class ChainSpec:
    """Concrete model instance: site count, inhomogeneities, coupling, twist.

    Parameters
    ----------
    length : int
        Number of sites, 1 <= length <= MAX_SITES (dense 3^L matrices).
    inhomogeneities : tuple of complex
        Per-site shift parameters, one per site.
    c : complex
        Coupling constant of the rational kernels; must be nonzero.
    twist : tuple of three complex
        Diagonal twist. The monodromy is normalized by the middle entry so
        the second vacuum eigenvalue is exactly 1.  Zero-mode features
        require the trivial twist (1, 1, 1).
    """

    length: int
    inhomogeneities: tuple
    c: complex
    twist: tuple = _UNTWISTED

    def __post_init__(self):
        if not 1 <= self.length <= MAX_SITES:
            raise SizeError(f"length {self.length} outside [1, {MAX_SITES}]")
        xi = tuple(complex(x) for x in self.inhomogeneities)
        if len(xi) != self.length:
            raise ValueError(f"expected {self.length} inhomogeneities, got {len(xi)}")
        if self.c == 0:
            raise ValueError("coupling c must be nonzero")
        kappa = tuple(complex(k) for k in self.twist)
        if len(kappa) != 3 or any(k == 0 for k in kappa):
            raise ValueError("twist must be three nonzero numbers")
        object.__setattr__(self, "inhomogeneities", xi)
        object.__setattr__(self, "c", complex(self.c))
        object.__setattr__(self, "twist", kappa)

    @property
    def dim(self):
        return 3**self.length

    @property
    def is_twisted(self):
        return self.twist != _UNTWISTED


def permutation_matrix(n=3):
    """Permutation operator on C^n (x) C^n."""
    p = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            p[i * n + j, j * n + i] = 1.0
    return p


def r_matrix(u, v, c):
    """9x9 rational R-matrix I + g(u, v) P on two 3-dimensional spaces."""
    return np.eye(9, dtype=complex) + g(u, v, c) * permutation_matrix(3)


def _site_swap_permutation(length, site):
    """Index permutation swapping the auxiliary space with quantum site ``site``.

    Basis index n = a * 3^L + s, with site k carrying weight 3^(L-k).
    """
    dim = 3**length
    weight = 3 ** (length - site)
    n = np.arange(3 * dim)
    a, s = divmod(n, dim)
    digit = (s // weight) % 3
    s_new = s + (a - digit) * weight
    return digit * dim + s_new


class Monodromy:
    """Dense monodromy matrix at a fixed spectral point, stored as 3x3 blocks."""

    def __init__(self, spec, w, blocks):
        self.spec = spec
        self.w = complex(w)
        self.blocks = blocks  # (3, 3, dim, dim)

    def block(self, i, j):
        """Entry T_ij(w) as a dense (dim, dim) matrix; indices are 1-based."""
        return self.blocks[i - 1, j - 1]

    def trace(self):
        """Transfer matrix: trace over the auxiliary space."""
        return self.blocks[0, 0] + self.blocks[1, 1] + self.blocks[2, 2]


class _ByteBudgetCache:
    """Write-once LRU cache keyed by (spec, w), bounded by total byte size."""

    def __init__(self, budget_bytes=256 * 2**20):
        self.budget = budget_bytes
        self._data = OrderedDict()
        self._bytes = 0
        self._lock = threading.Lock()

    def put(self, key, value, nbytes):
        with self._lock:
            if key in self._data:
                return
            while self._bytes + nbytes > self.budget and self._data:
                _, (_, old_bytes) = self._data.popitem(last=False)
                self._bytes -= old_bytes
            self._data[key] = (value, nbytes)
            self._bytes += nbytes

    def lookup(self, key):
        with self._lock:
            hit = self._data.get(key)
            if hit is not None:
                self._data.move_to_end(key)
            return hit[0] if hit is not None else None


_CACHE = _ByteBudgetCache()


def _build_blocks(spec, w):
    L, dim, c = spec.length, spec.dim, spec.c
    for k, xi in enumerate(spec.inhomogeneities, start=1):
        if abs(w - xi) <= EPS_SEP * max(1.0, abs(w), abs(xi)):
            raise PoleError("monodromy", w, xi, detail=f"w hits inhomogeneity {k}")
    full = np.eye(3 * dim, dtype=complex)
    for site in range(1, L + 1):
        gk = g(w, spec.inhomogeneities[site - 1], c)
        perm = _site_swap_permutation(L, site)
        # Left-multiply by I + g_k P_k: P_k acts as a row permutation.
        full += gk * full[perm, :]
    kappa = np.array(spec.twist, dtype=complex) / spec.twist[1]
    blocks = full.reshape(3, dim, 3, dim).transpose(0, 2, 1, 3).copy()
    blocks *= kappa[:, None, None, None]
    return blocks


def monodromy(spec, w):
    """Monodromy matrix T(w) with vacuum-normalized twist; cached per (spec, w).

    The vacuum (all sites in the first state) is annihilated by the
    below-diagonal entries and is an eigenvector of the diagonal ones.
    """
    key = (spec, complex(w))
    hit = _CACHE.lookup(key)
    if hit is None:
        blocks = _build_blocks(spec, w)
        hit = Monodromy(spec, w, blocks)
        _CACHE.put(key, hit, blocks.nbytes)
    return hit


def transfer_matrix(spec, w):
    """Dense transfer matrix (auxiliary trace of the monodromy) at w."""
    return monodromy(spec, w).trace()


def vacuum_state(spec):
    """All-sites-in-first-state reference ket."""
    vec = np.zeros(spec.dim, dtype=complex)
    vec[0] = 1.0
    return vec


def dual_vacuum_state(spec):
    """Dual reference state as a row vector (bilinear pairing, no conjugation)."""
    return vacuum_state(spec)


@dataclass(frozen=True)
class VacuumData:
    """Vacuum eigenvalue data: the ratio functions and their expansion heads."""

    spec: ChainSpec

    def lambda1(self, w):
        k1, k2, _ = self.spec.twist
        return (k1 / k2) * f_prod_sites(self.spec, w)

    def lambda2(self, w):
        return 1.0 + 0j

    def lambda3(self, w):
        _, k2, k3 = self.spec.twist
        return complex(k3 / k2)

    def r1(self, w):
        return self.lambda1(w)

    def r3(self, w):
        return self.lambda3(w)

    def r1_dlog(self, w):
        """Logarithmic derivative of r1; used by the Newton solver."""
        c = self.spec.c
        return sum(1.0 / (w - xi + c) - 1.0 / (w - xi) for xi in self.spec.inhomogeneities)

    def r3_dlog(self, w):
        return 0.0 + 0j

    def r3_prime(self, w):
        """Derivative of r3; identically zero for this chain family."""
        return 0.0 + 0j

    @property
    def r1_zero(self):
        """Leading expansion coefficient of r1 around infinity (None if twisted)."""
        return None if self.spec.is_twisted else float(self.spec.length)

    @property
    def r3_zero(self):
        return None if self.spec.is_twisted else 0.0


def f_prod_sites(spec, w):
    out = 1.0 + 0j
    for xi in spec.inhomogeneities:
        out *= f(w, xi, spec.c)
    return out


def vacuum_ratios(spec):
    """Vacuum eigenvalue ratios r1, r3 and expansion data for ``spec``."""
    return VacuumData(spec)


def rtt_residual_from_blocks(blocks_u, blocks_v, g_uv):
    """Max Frobenius residual of both component forms of the exchange relation."""
    dim = blocks_u.shape[-1]
    tu = blocks_u.reshape(9, dim, dim)
    tv = blocks_v.reshape(9, dim, dim)
    tu_tv = np.einsum("aij,bjk->abik", tu, tv)
    tv_tu = np.einsum("aij,bjk->abik", tv, tu)

    def idx(i, j):
        return 3 * i + j

    worst = 0.0
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for l in range(3):
                    lhs = tu_tv[idx(i, j), idx(k, l)] - tv_tu[idx(k, l), idx(i, j)]
                    rhs1 = g_uv * (tv_tu[idx(k, j), idx(i, l)] - tu_tv[idx(k, j), idx(i, l)])
                    rhs2 = g_uv * (tu_tv[idx(i, l), idx(k, j)] - tv_tu[idx(i, l), idx(k, j)])
                    worst = max(
                        worst,
                        float(np.linalg.norm(lhs - rhs1)),
                        float(np.linalg.norm(lhs - rhs2)),
                    )
    return worst


def rtt_residual(spec, u, v):
    """Exchange-relation residual of the built monodromy at points (u, v)."""
    if abs(u - v) <= EPS_SEP * max(1.0, abs(u), abs(v)):
        raise PoleError("rtt_residual", u, v)
    bu = monodromy(spec, u).blocks
    bv = monodromy(spec, v).blocks
    return rtt_residual_from_blocks(bu, bv, g(u, v, spec.c))


@dataclass(frozen=True)
class ZeroModes:
    """Zero modes T_ij[0] of the monodromy expansion, as dense matrices."""

    spec: ChainSpec
    modes: np.ndarray = field(repr=False)  # (3, 3, dim, dim)

    def mode(self, i, j):
        """Zero mode of entry (i, j); indices are 1-based."""
        return self.modes[i - 1, j - 1]

    @property
    def r1_zero(self):
        return float(self.spec.length)

    @property
    def r3_zero(self):
        return 0.0


def zero_modes(spec):
    """Extract all T_ij[0] exactly via denominator clearing and interpolation.

    T(w) times prod_k (w - xi_k) is a matrix polynomial of degree L; its
    coefficients are recovered from L+1 samples on a circle (an inverse DFT),
    and the zero mode is read off from the u^(L-1) coefficient.
    """
    if spec.is_twisted:
        raise TwistError("zero modes require the trivial twist (expansion head must be identity)")
    L, dim, c = spec.length, spec.dim, spec.c
    xi = np.array(spec.inhomogeneities)
    rho = 2.0 * (1.0 + float(np.max(np.abs(xi))) + abs(c))
    npts = L + 1
    omega = np.exp(2j * np.pi / npts)
    # Coefficient of u^(L-1) via inverse DFT on the circle of radius rho,
    # accumulated sample by sample (the samples are large at 6 sites).
    d = L - 1
    coeff = np.zeros((3, 3, dim, dim), dtype=complex)
    for m in range(npts):
        um = rho * omega**m
        denom = np.prod(um - xi)
        coeff += (omega ** (-d * m) * denom) * _build_blocks(spec, um)
    coeff /= npts * rho**d
    e1 = complex(np.sum(xi))
    eye = np.eye(dim)
    modes = np.empty((3, 3, dim, dim), dtype=complex)
    for i in range(3):
        for j in range(3):
            modes[i, j] = (coeff[i, j] + (e1 if i == j else 0.0) * eye) / c
    return ZeroModes(spec, modes)
