"""Nested Bethe equations: residuals, damped-Newton solving, and eigenvalues.

The equations are handled in logarithmic form.  Each equation's defect is the
principal logarithm of the ratio (model function over product side), wrapped
back to the strip Im in (-pi, pi]; at a solution the ratio is exactly 1, so
the wrapped defect vanishes with no branch bookkeeping.
"""

from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass, field

import numpy as np

from .chain import vacuum_ratios
from .errors import (
    BranchAmbiguityError,
    ConvergenceError,
    DegenerateJacobianError,
    PoleError,
)
from .kernels import EPS_SEP, f, f_prod, t

__all__ = [
    "BetheRoots",
    "SolveConfig",
    "NewtonTrace",
    "bethe_residual_vector",
    "bethe_residual",
    "newton_refine",
    "solve_bethe",
    "tau",
    "tau_sets",
]

log = logging.getLogger(__name__)

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class BetheRoots:
    """Two root sets with their residual metadata.

    ``u`` has cardinality a (first-level parameters), ``v`` cardinality b
    (second-level).  ``on_shell`` certifies residual <= the solver tolerance.
    """

    u: tuple
    v: tuple
    residual: float = 0.0
    on_shell: bool = True

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(complex(x) for x in self.u))
        object.__setattr__(self, "v", tuple(complex(x) for x in self.v))

    @property
    def a(self):
        return len(self.u)

    @property
    def b(self):
        return len(self.v)

    def sorted_key(self):
        """Canonical (re, im)-sorted tuple used for deduplication."""
        return (
            tuple(sorted(self.u, key=lambda z: (z.real, z.imag))),
            tuple(sorted(self.v, key=lambda z: (z.real, z.imag))),
        )


VACUUM = BetheRoots(u=(), v=(), residual=0.0, on_shell=True)


@dataclass
class SolveConfig:
    """Newton-solve configuration.

    seed_strategy is one of "random-cloud", "perturbed-known", "user-supplied".
    All randomness comes from the generator passed to :func:`solve_bethe`.
    """

    tol: float = 1e-12
    max_iter: int = 200
    damping: float = 1.0
    n_seeds: int = 80
    seed_strategy: str = "random-cloud"
    known_roots: list = field(default_factory=list)
    perturbation: float = 0.05
    dedup_tol: float = 1e-8
    root_cap: float = 1e8  # larger roots are runaway-to-infinity configurations
    divergence_factor: float = 200.0  # abort a seed once iterates leave this many spreads

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must lie in (0, 1]")
        if self.seed_strategy not in ("random-cloud", "perturbed-known", "user-supplied"):
            raise ValueError(f"unknown seed strategy {self.seed_strategy!r}")


@dataclass
class NewtonTrace:
    """Residual history of one Newton run (for convergence-rate diagnostics)."""

    residuals: list = field(default_factory=list)

    def quad_ratios(self):
        """Ratios r_{k+1} / r_k^2; bounded near a simple root."""
        r = self.residuals
        return [r[k + 1] / r[k] ** 2 for k in range(len(r) - 1) if r[k] > 0]


def _wrap_log(z):
    """Wrap the imaginary part of a log-defect into (-pi, pi]."""
    return complex(z.real, z.imag - _TWO_PI * np.round(z.imag / _TWO_PI))


def _checked_log(value, what):
    if abs(value) <= EPS_SEP:
        raise BranchAmbiguityError(f"|{what}| = {abs(value):.3e} is too close to 0 for a log")
    return cmath.log(value)


def _log_defects(spec, u, v):
    """Complex wrapped log-form defects, u-equations first."""
    ratios = vacuum_ratios(spec)
    c = spec.c
    out = []
    for i, ui in enumerate(u):
        acc = _checked_log(ratios.r1(ui), "r1(u_i)")
        for j, uj in enumerate(u):
            if j == i:
                continue
            acc -= _checked_log(f(ui, uj, c), "f(u_i, u_j)")
            acc += _checked_log(f(uj, ui, c), "f(u_j, u_i)")
        for vk in v:
            acc -= _checked_log(f(vk, ui, c), "f(v_k, u_i)")
        out.append(_wrap_log(acc))
    for j, vj in enumerate(v):
        acc = _checked_log(ratios.r3(vj), "r3(v_j)")
        for k, vk in enumerate(v):
            if k == j:
                continue
            acc -= _checked_log(f(vk, vj, c), "f(v_k, v_j)")
            acc += _checked_log(f(vj, vk, c), "f(v_j, v_k)")
        for ui in u:
            acc -= _checked_log(f(vj, ui, c), "f(v_j, u_i)")
        out.append(_wrap_log(acc))
    return np.array(out, dtype=complex)


def bethe_residual_vector(spec, roots):
    """Per-equation residual magnitudes (a + b reals); empty for the vacuum."""
    defects = _log_defects(spec, roots.u, roots.v)
    return np.abs(defects)


def bethe_residual(spec, roots):
    """Max per-equation residual; 0.0 for the vacuum."""
    vec = bethe_residual_vector(spec, roots)
    return float(np.max(vec)) if vec.size else 0.0


def _jacobian(spec, u, v):
    """Analytic complex Jacobian of the log-form defects."""
    ratios = vacuum_ratios(spec)
    c = spec.c
    a, b = len(u), len(v)
    n = a + b
    jac = np.zeros((n, n), dtype=complex)
    for i, ui in enumerate(u):
        diag = ratios.r1_dlog(ui)
        for j, uj in enumerate(u):
            if j == i:
                continue
            tij = t(ui, uj, c) / c
            tji = t(uj, ui, c) / c
            diag += tij + tji
            jac[i, j] = -tij - tji
        for k, vk in enumerate(v):
            tk = t(vk, ui, c) / c
            diag -= tk
            jac[i, a + k] = tk
        jac[i, i] = diag
    for j, vj in enumerate(v):
        row = a + j
        diag = ratios.r3_dlog(vj)
        for k, vk in enumerate(v):
            if k == j:
                continue
            tkj = t(vk, vj, c) / c
            tjk = t(vj, vk, c) / c
            diag -= tkj + tjk
            jac[row, a + k] = tkj + tjk
        for i, ui in enumerate(u):
            ti = t(vj, ui, c) / c
            diag += ti
            jac[row, i] = -ti
        jac[row, row] = diag
    return jac


def _spread(spec):
    xi = np.array(spec.inhomogeneities)
    center = complex(np.mean(xi))
    return center, float(np.max(np.abs(xi - center))) + abs(spec.c)


def newton_refine(spec, u0, v0, cfg=None):
    """Damped Newton iteration from one seed; returns (roots, trace).

    Raises :class:`ConvergenceError` if the tolerance is not met, the iterate
    runs away to infinity (the log-form residual decays there, so runaways
    must be aborted rather than accepted), and
    :class:`DegenerateJacobianError` on a numerically singular Jacobian.
    """
    cfg = cfg or SolveConfig()
    a = len(u0)
    x = np.array(list(u0) + list(v0), dtype=complex)
    trace = NewtonTrace()
    best = np.inf
    center, spread = _spread(spec)
    escape = cfg.divergence_factor * spread
    for _ in range(cfg.max_iter):
        if x.size and float(np.max(np.abs(x - center))) > escape:
            raise ConvergenceError(best, "iterate ran away toward infinity")
        try:
            defects = _log_defects(spec, x[:a], x[a:])
        except (PoleError, BranchAmbiguityError):
            raise ConvergenceError(best, "iterate hit a pole region")
        res = float(np.max(np.abs(defects))) if defects.size else 0.0
        trace.residuals.append(res)
        best = min(best, res)
        if res <= cfg.tol:
            # Certify isolation: a degenerate Jacobian signals a continuum
            # (e.g. an identically satisfied equation), not a Bethe state.
            cond = np.linalg.cond(_jacobian(spec, x[:a], x[a:]))
            if not np.isfinite(cond) or cond > 1e12:
                raise DegenerateJacobianError(cond)
            roots = BetheRoots(tuple(x[:a]), tuple(x[a:]), residual=res, on_shell=True)
            _log_quad_rate(trace)
            return roots, trace
        jac = _jacobian(spec, x[:a], x[a:])
        cond = np.linalg.cond(jac)
        if not np.isfinite(cond) or cond > 1e14:
            raise DegenerateJacobianError(cond)
        step = np.linalg.solve(jac, -defects)
        # Backtracking on the defect norm.
        alpha = cfg.damping
        for _ in range(30):
            try:
                new = _log_defects(spec, (x + alpha * step)[:a], (x + alpha * step)[a:])
                new_res = float(np.max(np.abs(new)))
            except (PoleError, BranchAmbiguityError):
                new_res = np.inf
            if new_res < res:
                break
            alpha *= 0.5
        else:
            raise ConvergenceError(best, "line search stalled")
        x = x + alpha * step
    raise ConvergenceError(best)


def _log_quad_rate(trace):
    ratios = trace.quad_ratios()
    if ratios:
        log.debug("newton quadratic-rate ratios r_{k+1}/r_k^2: %s", ratios[-3:])


def _seeds(spec, a, b, cfg, rng):
    center, spread = _spread(spec)
    if cfg.seed_strategy == "user-supplied":
        yield from cfg.known_roots
        return
    if cfg.seed_strategy == "perturbed-known":
        for u0, v0 in cfg.known_roots:
            for _ in range(max(1, cfg.n_seeds // max(1, len(cfg.known_roots)))):
                du = cfg.perturbation * spread * (rng.standard_normal(a) + 1j * rng.standard_normal(a))
                dv = cfg.perturbation * spread * (rng.standard_normal(b) + 1j * rng.standard_normal(b))
                yield (np.array(u0, dtype=complex) + du, np.array(v0, dtype=complex) + dv)
        return
    # Log-spaced cloud radii: genuine roots sit within a few spreads of the
    # inhomogeneity cluster, while the runaway basin lies far outside it.
    radii = np.geomspace(0.08, 1.6, 6)
    for k in range(cfg.n_seeds):
        scale = spread * radii[k % len(radii)]
        u0 = center + scale * (rng.standard_normal(a) + 1j * rng.standard_normal(a))
        v0 = center + scale * (rng.standard_normal(b) + 1j * rng.standard_normal(b))
        yield (u0, v0)


def _internally_separated(values, eps=EPS_SEP):
    vals = list(values)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if abs(vals[i] - vals[j]) <= eps * max(1.0, abs(vals[i]), abs(vals[j])):
                return False
    return True


def solve_bethe(spec, a, b, cfg=None, rng=None):
    """Solve the Bethe equations for cardinalities (a, b) from multiple seeds.

    Returns deduplicated :class:`BetheRoots`, each certified by its residual.
    Soundness only: no completeness claim is made about the returned list.
    Solutions with internally colliding sets, runaway magnitudes, or roots on
    top of an inhomogeneity pole are discarded.
    """
    cfg = cfg or SolveConfig()
    rng = rng if rng is not None else np.random.default_rng(0)
    if a == 0 and b == 0:
        return [VACUUM]
    found = []
    keys = []
    failures = 0
    for u0, v0 in _seeds(spec, a, b, cfg, rng):
        try:
            roots, _ = newton_refine(spec, u0, v0, cfg)
        except (ConvergenceError, DegenerateJacobianError):
            failures += 1
            continue
        if not _internally_separated(roots.u) or not _internally_separated(roots.v):
            continue
        if any(abs(z) > cfg.root_cap for z in roots.u + roots.v):
            continue
        if any(
            abs(z - xi) <= 1e-8 * max(1.0, abs(z))
            for z in roots.u + roots.v
            for xi in spec.inhomogeneities
        ):
            continue
        key = roots.sorted_key()
        if any(_same_key(key, other, cfg.dedup_tol) for other in keys):
            continue
        keys.append(key)
        found.append(roots)
    log.debug("solve_bethe(%d, %d): %d solutions, %d failed seeds", a, b, len(found), failures)
    return sorted(found, key=lambda r: tuple((z.real, z.imag) for z in r.sorted_key()[0] + r.sorted_key()[1]))


def _same_key(k1, k2, tol):
    (u1, v1), (u2, v2) = k1, k2
    if len(u1) != len(u2) or len(v1) != len(v2):
        return False
    du = max((abs(x - y) for x, y in zip(u1, u2)), default=0.0)
    dv = max((abs(x - y) for x, y in zip(v1, v2)), default=0.0)
    return du <= tol and dv <= tol


def tau_sets(z, u, v, r1_z, r3_z, c):
    """Transfer-matrix eigenvalue candidate from raw sets and ratio values."""
    return r1_z * f_prod(u, z, c) + f_prod(z, u, c) * f_prod(v, z, c) + r3_z * f_prod(z, v, c)


def tau(spec, z, roots):
    """Transfer-matrix eigenvalue at z for the given root sets.

    For on-shell roots this matches an eigenvalue of the dense transfer
    matrix; sending any single root to infinity reduces it to the eigenvalue
    of the remaining set.
    """
    ratios = vacuum_ratios(spec)
    return tau_sets(z, roots.u, roots.v, ratios.r1(z), ratios.r3(z), spec.c)
