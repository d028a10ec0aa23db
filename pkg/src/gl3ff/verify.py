"""Acceptance manifest: every verification criterion as an executable runner.

Each criterion returns a :class:`CriterionResult` with per-check rows, so the
CLI can emit one pass/fail line per criterion plus a defect table.  All
randomness flows from one seed through counter-based generator streams, so
results are identical across runs and worker counts.
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import formfactors as _ff_mod
from . import identities as _id_mod
from .bethe import VACUUM, SolveConfig, bethe_residual, solve_bethe
from .chain import ChainSpec, monodromy, rtt_residual, vacuum_ratios, zero_modes
from .errors import SpecTransformError
from .exact import qc
from .formfactors import (
    FormFactorRequest,
    corner_entry_coinciding,
    corner_entry_raw,
    corner_limit_rows,
    det_form_factor,
    direct_form_factor,
    map_phi,
    map_phi_request,
    map_psi,
    infinite_root_reduction_defect,
    relation_report,
    universal_form_factor,
)
from .identities import (
    large_root_reduction_sweep,
    exact_omega_defects,
    exact_row_reduction_defect,
    omega_reports,
    residue_rhs_third,
    row_reduction_report,
)
from .vectors import (
    bethe_vector,
    dual_on_shell_residual,
    dual_vector,
    on_shell_residual,
)

__all__ = [
    "CriterionResult",
    "InstancePool",
    "rng_for",
    "random_chain",
    "MANIFESTS",
    "CRITERION_NAMES",
    "run_criterion",
    "run_manifest",
]


def rng_for(seed, stream):
    """Counter-based generator stream; schedule-independent by construction."""
    return np.random.Generator(np.random.Philox(key=np.uint64([seed, stream])))


@dataclass
class CriterionResult:
    cid: int
    name: str
    passed: bool
    max_defect: float
    tolerance: float
    runtime: float
    detail: str = ""
    rows: list = field(default_factory=list)  # (check, defect, tolerance, ok)


class _Checks:
    """Accumulates (check, defect, tolerance) rows for one criterion."""

    def __init__(self):
        self.rows = []

    def add(self, name, defect, tol):
        self.rows.append((name, float(defect), float(tol), bool(defect <= tol)))

    def require(self, name, condition):
        self.rows.append((name, 0.0 if condition else 1.0, 0.5, bool(condition)))

    def result(self, cid, name, runtime, detail=""):
        passed = all(ok for _, _, _, ok in self.rows)
        worst = max(self.rows, key=lambda r: r[1] / r[2] if r[2] else 0.0, default=("", 0.0, 1.0, True))
        return CriterionResult(
            cid=cid,
            name=name,
            passed=passed,
            max_defect=worst[1],
            tolerance=worst[2],
            runtime=runtime,
            detail=detail,
            rows=self.rows,
        )


def random_chain(rng, length, twisted=False, c=1.0):
    """Generic chain draw: separated inhomogeneities, optional nontrivial twist."""
    for _ in range(200):
        xi = 0.45 * (rng.standard_normal(length) + 1j * rng.standard_normal(length))
        ok = all(
            abs(xi[i] - xi[j]) > 0.15 for i in range(length) for j in range(i + 1, length)
        )
        if ok:
            break
    twist = (1.0, 1.0, 1.0)
    if twisted:
        while True:
            k1 = 1.0 + 0.35 * rng.standard_normal() + 0.25j * rng.standard_normal()
            k3 = 1.0 + 0.35 * rng.standard_normal() + 0.25j * rng.standard_normal()
            if 0.5 < abs(k1) < 2.0 and 0.5 < abs(k3) < 2.0 and abs(k3 - 1.0) > 0.2:
                twist = (k1, 1.0, k3)
                break
    return ChainSpec(length, tuple(xi), c, twist=twist)


class InstancePool:
    """Lazily solved, cached (chain, cardinality) instances shared by criteria."""

    def __init__(self, seed):
        self.seed = seed
        self._chains = {}
        self._solutions = {}
        self._lock = threading.Lock()

    def chain(self, length, twisted=False, draw=0, homogeneous=False):
        key = (length, twisted, draw, homogeneous)
        with self._lock:
            if key not in self._chains:
                if homogeneous:
                    self._chains[key] = ChainSpec(length, (0.0,) * length, 1.0)
                else:
                    stream = 7_000 + 97 * length + 11 * draw + (1 if twisted else 0)
                    self._chains[key] = random_chain(rng_for(self.seed, stream), length, twisted)
            return self._chains[key]

    def solutions(self, spec, a, b, n_seeds=None):
        key = (spec, a, b)
        with self._lock:
            hit = self._solutions.get(key)
        if hit is not None:
            return hit
        n = n_seeds if n_seeds is not None else 50 + 30 * (a + b)
        stream = 50_000 + 131 * spec.length + 17 * a + 5 * b + (1000 if spec.is_twisted else 0)
        sols = solve_bethe(spec, a, b, SolveConfig(n_seeds=n), rng_for(self.seed, stream))
        with self._lock:
            self._solutions[key] = sols
        return sols

    def probe_point(self, stream):
        rng = rng_for(self.seed, 90_000 + stream)
        return complex(0.9 * rng.standard_normal() + 1j * (0.8 + 0.6 * abs(rng.standard_normal())))


def _disjoint(rc, rb, tol=1e-7):
    pairs = [(rc.u, rb.u), (rc.v, rb.v)]
    return all(abs(x - y) > tol for xs, ys in pairs for x in xs for y in ys)


def _pick_pair(sols_c, sols_b, distinct=False):
    """First (C, B) solution pair with disjoint sets (and distinct states if asked)."""
    for rc in sols_c:
        for rb in sols_b:
            if distinct and rc.sorted_key() == rb.sorted_key():
                continue
            if _disjoint(rc, rb):
                return rc, rb
    return None


# --------------------------------------------------------------------------
# criteria


def criterion_1(pool):
    """Exchange-relation residual of the monodromy build."""
    t0 = time.time()
    checks = _Checks()
    rng = rng_for(pool.seed, 1)
    for length in (1, 2, 3, 4):
        for twisted in (False, True):
            spec = pool.chain(length, twisted)
            worst = 0.0
            for _ in range(13):
                u = complex(rng.standard_normal() + 1j * (1.0 + 0.5 * abs(rng.standard_normal())))
                v = complex(rng.standard_normal() - 1j * (1.0 + 0.5 * abs(rng.standard_normal())))
                worst = max(worst, rtt_residual(spec, u, v))
            checks.add(f"rtt L={length} twisted={twisted}", worst, 1e-12)
    return checks.result(1, "exchange-relation residual", time.time() - t0)


def criterion_2(pool):
    """Zero-mode commutators with entries, and the closed algebra of the modes."""
    t0 = time.time()
    checks = _Checks()
    rng = rng_for(pool.seed, 2)
    for length in (1, 2, 3, 4):
        spec = pool.chain(length, False)
        zm = zero_modes(spec)
        dim = spec.dim
        z9 = zm.modes.reshape(9, dim, dim)
        worst_mixed = 0.0
        for _ in range(2):
            u = complex(rng.standard_normal() + 1.1j)
            blocks = monodromy(spec, u).blocks
            t9 = blocks.reshape(9, dim, dim)
            zt = np.einsum("aij,bjk->abik", z9, t9)
            tz = np.einsum("aij,bjk->abik", t9, z9)
            for i in range(3):
                for j in range(3):
                    for k in range(3):
                        for l in range(3):
                            lhs = zt[3 * i + j, 3 * k + l] - tz[3 * k + l, 3 * i + j]
                            rhs = np.zeros((dim, dim), dtype=complex)
                            if i == l:
                                rhs += blocks[k, j]
                            if k == j:
                                rhs -= blocks[i, l]
                            worst_mixed = max(worst_mixed, float(np.linalg.norm(lhs - rhs)))
        checks.add(f"mode-entry commutators L={length}", worst_mixed, 1e-12)
        zz = np.einsum("aij,bjk->abik", z9, z9)
        worst_alg = 0.0
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    for l in range(3):
                        lhs = zz[3 * i + j, 3 * k + l] - zz[3 * k + l, 3 * i + j]
                        rhs = np.zeros((dim, dim), dtype=complex)
                        if i == l:
                            rhs += zm.modes[k, j]
                        if k == j:
                            rhs -= zm.modes[i, l]
                        worst_alg = max(worst_alg, float(np.linalg.norm(lhs - rhs)))
        checks.add(f"mode algebra closure L={length}", worst_alg, 1e-12)
    return checks.result(2, "zero-mode algebra", time.time() - t0)


_C3_CELLS = ((1, 0), (0, 1), (1, 1), (2, 1))


def criterion_3(pool):
    """Every solver output certified by residual and by eigenvector defect."""
    t0 = time.time()
    checks = _Checks()
    n_solutions = 0
    for length in (2, 3, 4):
        for twisted in (False, True):
            spec = pool.chain(length, twisted)
            for a, b in _C3_CELLS:
                if a > length:
                    continue
                for roots in pool.solutions(spec, a, b):
                    n_solutions += 1
                    checks.add(f"residual L={length} tw={twisted} ({a},{b})", bethe_residual(spec, roots), 1e-12)
                    if np.linalg.norm(bethe_vector(spec, roots.u, roots.v)) == 0.0:
                        continue
                    checks.add(
                        f"eigvec L={length} tw={twisted} ({a},{b})",
                        max(on_shell_residual(spec, roots), dual_on_shell_residual(spec, roots)),
                        1e-8,
                    )
    homog = pool.chain(2, homogeneous=True)
    sols = pool.solutions(homog, 1, 0)
    found = any(abs(r.u[0] + homog.c / 2) < 1e-9 for r in sols)
    checks.require("closed-form root -c/2 found (L=2 homogeneous)", found)
    checks.require("certified at least 12 solutions", n_solutions >= 12)
    return checks.result(3, "on-shell certification", time.time() - t0, detail=f"{n_solutions} solutions")


_C4_STATES = {2: [(1, 0)], 3: [(1, 0), (2, 1)], 4: [(1, 0), (2, 0), (2, 1)]}


def criterion_4(pool):
    """On-shell kets killed by lowering modes, bras by raising modes."""
    t0 = time.time()
    checks = _Checks()
    for length, cells in _C4_STATES.items():
        spec = pool.chain(length, False)
        zm = zero_modes(spec)
        for a, b in cells:
            for roots in pool.solutions(spec, a, b)[:2]:
                ket = bethe_vector(spec, roots.u, roots.v)
                bra = dual_vector(spec, roots.u, roots.v)
                kn, bn = np.linalg.norm(ket), np.linalg.norm(bra)
                for i, j in ((2, 1), (3, 2), (3, 1)):
                    checks.add(
                        f"T{i}{j}[0] ket L={length} ({a},{b})",
                        float(np.linalg.norm(zm.mode(i, j) @ ket) / kn),
                        1e-8,
                    )
                for i, j in ((1, 2), (2, 3), (1, 3)):
                    checks.add(
                        f"bra T{i}{j}[0] L={length} ({a},{b})",
                        float(np.linalg.norm(bra @ zm.mode(i, j)) / bn),
                        1e-8,
                    )
    return checks.result(4, "singular-vector property", time.time() - t0)


_C5_CELLS = [(2, 1, 1), (3, 1, 1), (3, 2, 1), (4, 1, 1), (4, 2, 1)]
_C6_CELLS = [
    (2, 0, 0, True),
    (2, 1, 0, True),
    (2, 1, 1, True),
    (3, 0, 0, True),
    (3, 1, 0, True),
    (3, 1, 1, True),
    (3, 2, 0, True),
    (3, 1, 0, False),
    (4, 0, 0, True),
    (4, 1, 0, True),
    (4, 1, 1, True),
    (4, 2, 1, True),
    (4, 3, 0, True),
    (4, 1, 0, False),
]


def _state_scale(spec, req):
    bra = dual_vector(spec, req.roots_c.u, req.roots_c.v)
    ket = bethe_vector(spec, req.roots_b.u, req.roots_b.v)
    return float(np.linalg.norm(bra) * np.linalg.norm(ket))


def _det_oracle_check(checks, spec, req, label):
    """Relative det-vs-oracle check; zero-valued elements get an absolute one.

    Returns True when the instance was a nontrivial (nonzero) comparison.
    Symmetry-forbidden elements are genuinely zero on both paths; they are
    still asserted, absolutely, against the state scale.
    """
    oracle = direct_form_factor(req, spec)
    rep = det_form_factor(req, spec)
    scale = _state_scale(spec, req)
    if abs(oracle) <= 1e-10 * scale:
        checks.add(f"{label} [selection-rule zero]", abs(rep.value - oracle) / scale, 1e-10)
        return False
    checks.add(label, abs(rep.value - oracle) / abs(oracle), 1e-8)
    return True


def criterion_5(pool):
    """(1,2) determinant equals the oracle across randomized instances."""
    t0 = time.time()
    checks = _Checks()
    count = 0
    stream = 0
    for length, a, b in _C5_CELLS:
        for draw in (0, 1):
            spec = pool.chain(length, True, draw=draw)
            sols_b = pool.solutions(spec, a, b)
            sols_c = pool.solutions(spec, a + 1, b)
            for pick in range(2):
                pair = _pick_pair(sols_c[pick:], sols_b)
                if pair is None:
                    continue
                stream += 1
                z = pool.probe_point(stream)
                req = FormFactorRequest(1, 2, z, roots_c=pair[0], roots_b=pair[1])
                if _det_oracle_check(checks, spec, req, f"ff12 L={length} ({a},{b}) draw={draw} pick={pick}"):
                    count += 1
    checks.require("at least 20 nontrivial instances", count >= 20)
    return checks.result(5, "(1,2) determinant vs oracle", time.time() - t0, detail=f"{count} instances")


def criterion_6(pool):
    """(1,3) determinant equals the oracle across randomized instances."""
    t0 = time.time()
    checks = _Checks()
    count = 0
    stream = 100
    for length, a, b, twisted in _C6_CELLS:
        # total-cardinality-3 cells solve seven unknowns; one draw is enough
        for draw in (0,) if a + b >= 3 else (0, 1):
            spec = pool.chain(length, twisted, draw=draw)
            sols_b = [VACUUM] if (a, b) == (0, 0) else pool.solutions(spec, a, b)
            sols_c = pool.solutions(spec, a + 1, b + 1)
            pair = _pick_pair(sols_c, sols_b)
            if pair is None:
                continue
            stream += 1
            z = pool.probe_point(stream)
            req = FormFactorRequest(1, 3, z, roots_c=pair[0], roots_b=pair[1])
            if _det_oracle_check(checks, spec, req, f"ff13 L={length} ({a},{b}) tw={twisted} draw={draw}"):
                count += 1
    checks.require("at least 20 nontrivial instances", count >= 20)
    return checks.result(6, "(1,3) determinant vs oracle", time.time() - t0, detail=f"{count} instances")


def _slope_ok(checks, name, slope):
    dev = abs((slope if slope is not None else 0.0) + 1.0)
    checks.add(name, dev, 0.2)


def criterion_7(pool):
    """Inter-form-factor zero-mode relations: exact path and 1/w approach."""
    t0 = time.time()
    checks = _Checks()
    spec3 = pool.chain(3, False)
    z = pool.probe_point(200)
    b10 = pool.solutions(spec3, 1, 0)
    c21 = pool.solutions(spec3, 2, 1)
    rep = relation_report(spec3, "13-from-12", c21[0], b10[0], z)
    checks.add("13-from-12 exact", rep.defect, 1e-10)
    _slope_ok(checks, "13-from-12 slope", rep.slope)

    spec4 = pool.chain(4, False)
    b10_4 = pool.solutions(spec4, 1, 0)
    c20_4 = pool.solutions(spec4, 2, 0)
    pair = _pick_pair(c20_4, b10_4)
    for rel in ("12-from-11", "12-from-22"):
        rep = relation_report(spec4, rel, pair[0], pair[1], pool.probe_point(201))
        checks.add(f"{rel} exact", rep.defect, 1e-10)
        _slope_ok(checks, f"{rel} slope", rep.slope)

    pair = _pick_pair(b10, b10, distinct=True)
    rep = relation_report(spec3, "11-minus-22", pair[0], pair[1], pool.probe_point(202))
    checks.add("11-minus-22 exact", rep.defect, 1e-10)
    _slope_ok(checks, "11-minus-22 slope", rep.slope)
    return checks.result(7, "zero-mode form-factor relations", time.time() - t0)


_C8_FAMILIES = {
    (1, 1): ("distinct", 1, 1),
    (1, 2): ("solve", 2, 1),
    (1, 3): ("solve", 2, 2),
    (3, 2): ("solve", 1, 0),
    (3, 3): ("distinct", 1, 1),
}
_C8_FAMILIES_B21 = {
    (2, 1): ("solve", 1, 1),
    # (2,2) between zero-middle-occupancy states is structurally zero on this
    # chain (the entry acts as the identity there), so pair it with (2,1) states.
    (2, 2): ("distinct", 2, 1),
    (2, 3): ("solve", 2, 2),
    (3, 1): ("solve", 1, 0),
}


def _c8_requests(pool, spec):
    """On-shell request per entry family with a nonzero matrix element."""
    out = {}
    z0 = pool.probe_point(299)
    for table, (ab, bb) in ((_C8_FAMILIES, (1, 1)), (_C8_FAMILIES_B21, (2, 1))):
        sols_b = pool.solutions(spec, ab, bb)
        for (i, j), (mode, ac, bc) in table.items():
            sols_c = pool.solutions(spec, ac, bc)
            for rc in sols_c:
                for rb in sols_b:
                    if mode == "distinct" and rc.sorted_key() == rb.sorted_key():
                        continue
                    if not _disjoint(rc, rb):
                        continue
                    req = FormFactorRequest(i, j, z0, roots_c=rc, roots_b=rb)
                    if abs(direct_form_factor(req, spec)) > 1e-8 * _state_scale(spec, req):
                        out[(i, j)] = (rc, rb)
                        break
                if (i, j) in out:
                    break
    return out


def criterion_8(pool):
    """Universal (z-independent) factor for all nine entries, by oracle."""
    t0 = time.time()
    checks = _Checks()
    spec = pool.chain(3, True)
    zs = [pool.probe_point(300 + k) for k in range(5)]
    reqs = _c8_requests(pool, spec)
    checks.require("all nine families realized", len(reqs) == 9)
    for (i, j), (rc, rb) in sorted(reqs.items()):
        req = FormFactorRequest(i, j, zs[0], roots_c=rc, roots_b=rb)
        uni = universal_form_factor(req, spec, zs, path="oracle")
        checks.add(f"universal spread ({i},{j})", uni.max_rel_spread, 1e-8)
        if (i, j) in ((1, 2), (1, 3)):
            uni_det = universal_form_factor(req, spec, zs, path="det")
            checks.add(
                f"universal oracle-vs-det ({i},{j})",
                abs(uni.value - uni_det.value) / max(abs(uni.value), 1e-30),
                1e-8,
            )
    return checks.result(8, "z-factorization", time.time() - t0)


def _random_rational(rng):
    """Random degree-1-over-degree-1 test function with complex coefficients."""
    coef = rng.standard_normal(4) + 1j * rng.standard_normal(4)

    def func(x):
        return (coef[0] * x + coef[1]) / (coef[2] * x + coef[3] + 3.0)

    return func


def criterion_9(pool, n_configs=1000):
    """Summation identities at scale, exactly in rational mode, and on-shell."""
    t0 = time.time()
    checks = _Checks()
    rng = rng_for(pool.seed, 9)
    worst = {"omega-u-left": 0.0, "omega-u-right": 0.0, "omega-v-left": 0.0, "omega-v-right": 0.0}
    worst_row = 0.0
    worst_res = 0.0
    for _ in range(n_configs):
        a = int(rng.integers(0, 4))
        b = int(rng.integers(0, 4))

        def draw(n):
            return [complex(x) for x in rng.standard_normal(n) + 1j * rng.standard_normal(n)]

        uC, uB, vC, vB = draw(a + 1), draw(a), draw(b + 1), draw(b)
        z = complex(rng.standard_normal() + 1j * rng.standard_normal())
        c = 1.0
        for rep in omega_reports(uC, uB, vB, vC, z, c):
            worst[rep.identity] = max(worst[rep.identity], rep.rel_defect)
        worst_res = max(
            worst_res,
            abs(residue_rhs_third(vC, vB, z, c) - omega_reports(uC, uB, vB, vC, z, c)[2].rhs),
        )
        r1, r3 = _random_rational(rng), _random_rational(rng)
        rep = row_reduction_report(uC, vC, uB, vB, z, c, r1, r3)
        worst_row = max(worst_row, rep.rel_defect)
    for name, defect in worst.items():
        checks.add(f"{name} over {n_configs} configs", defect, 1e-11)
    checks.add("row-sum over configs", worst_row, 1e-11)
    checks.add("residue oracle agreement", worst_res, 1e-11)

    exact_rng = rng_for(pool.seed, 91)
    worst_exact_ok = True
    for _ in range(10):
        a = int(exact_rng.integers(0, 3))
        b = int(exact_rng.integers(0, 3))

        def draw_q(n):
            return [
                qc(
                    Fraction(int(exact_rng.integers(-9, 10)), int(exact_rng.integers(1, 8))),
                    Fraction(int(exact_rng.integers(-9, 10)), int(exact_rng.integers(1, 8))),
                )
                for _ in range(n)
            ]

        uC, uB, vC, vB = draw_q(a + 1), draw_q(a), draw_q(b + 1), draw_q(b)
        zq = draw_q(1)[0]
        cq = qc(1)
        try:
            defects = exact_omega_defects(uC, uB, vB, vC, zq, cq)
        except ZeroDivisionError:
            continue
        worst_exact_ok = worst_exact_ok and all(d.is_zero() for _, d in defects)
        r1q = {zq: draw_q(1)[0]}
        r3q = {zq: draw_q(1)[0]}
        worst_exact_ok = worst_exact_ok and exact_row_reduction_defect(
            uC, vC, uB, vB, zq, cq, r1q, r3q
        ).is_zero()
    checks.require("rational-mode identities exactly zero", worst_exact_ok)

    spec = pool.chain(3, True)
    b10 = pool.solutions(spec, 1, 0)
    c21 = pool.solutions(spec, 2, 1)
    pair = _pick_pair(c21, b10)
    checks.require("on-shell pair with disjoint sets found", pair is not None)
    if pair is not None:
        ratios = vacuum_ratios(spec)
        rc, rb = pair
        worst_vanish = 0.0
        for x in list(rb.u) + list(rc.v):
            rep = row_reduction_report(rc.u, rc.v, rb.u, rb.v, x, spec.c, ratios.r1, ratios.r3)
            worst_vanish = max(worst_vanish, rep.rel_defect)
        checks.add("on-shell vanishing of the reduced row", worst_vanish, 1e-10)
    return checks.result(9, "summation identities", time.time() - t0)


def criterion_10(pool):
    """Large-root reduction: prefactor, corner entry, full determinant, and
    the coinciding-root entry machinery."""
    t0 = time.time()
    checks = _Checks()

    spec_t = pool.chain(3, True)
    b21 = pool.solutions(spec_t, 2, 1)
    c31 = pool.solutions(spec_t, 3, 1)
    pair = _pick_pair(c31, b21)
    rep = large_root_reduction_sweep(spec_t, pair[0], pair[1], pool.probe_point(400))
    # The criterion gates the 1/w slope; endpoint bounds allow for the
    # instance-dependent constant in front of 1/w (roots here are O(5)).
    checks.add("corner entry at largest magnitude (+1 gap)", rep.corner_rows[-1][-1], 1e-2)
    _slope_ok(checks, "corner slope", rep.slopes["corner"])
    checks.add("full reduction at largest magnitude", rep.full_rows[-1][-1], 1e-2)
    _slope_ok(checks, "full-reduction slope", rep.slopes["full"])
    _slope_ok(checks, "prefactor slope", rep.slopes["prefactor"])
    checks.add("corner two-form gap (twisted)", rep.corner_form_gap, 1e-11)

    # The substituted-vs-direct corner transcription identity holds for
    # arbitrary sets; check it with the trivial-twist ratio convention on
    # generic data so it never depends on solver luck.
    grng = rng_for(pool.seed, 404)
    gap_untw = 0.0
    for mag in (1e2, 1e3, 1e4):
        uC = list(grng.standard_normal(3) + 1j * grng.standard_normal(3))
        uB = list(grng.standard_normal(2) + 1j * grng.standard_normal(2))
        vC_rest = list(grng.standard_normal(1) + 1j * grng.standard_normal(1))
        vB = list(grng.standard_normal(1) + 1j * grng.standard_normal(1))
        v_big = complex(mag * np.exp(0.37j))
        sub = _id_mod.corner_entry_substituted(v_big, uC, vC_rest, uB, vB, 1.0)
        r3_val = _id_mod._r3_bethe_value(v_big, uC, vC_rest, 1.0)
        direct = (v_big / 1.0) * _ff_mod.phi_row(v_big, uB, vB, list(vC_rest) + [v_big], 1.0, r3_val)
        gap_untw = max(gap_untw, abs(sub - direct) / max(abs(sub), 1e-30))
    checks.add("corner two-form gap (untwisted convention)", gap_untw, 1e-11)

    # Untwisted sweep instances exist only when the hw solutions happen to
    # have disjoint root sets; the slope gates above are already covered by
    # the twisted sweep, so this is additional coverage when realizable.
    pair5 = None
    spec5 = None
    for draw in range(3):
        spec5 = pool.chain(5, False, draw=draw)
        b21_5 = pool.solutions(spec5, 2, 1, n_seeds=150)
        c31_5 = pool.solutions(spec5, 3, 1, n_seeds=180)
        pair5 = _pick_pair(c31_5, b21_5)
        if pair5 is not None:
            break
    if pair5 is not None:
        rep5 = large_root_reduction_sweep(spec5, pair5[0], pair5[1], pool.probe_point(401))
        checks.add("corner two-form gap (untwisted instance)", rep5.corner_form_gap, 1e-11)
        _slope_ok(checks, "untwisted full-reduction slope", rep5.slopes["full"])
    else:
        checks.require("untwisted sweep instance (skipped: no disjoint hw pair under this seed)", True)

    spec = pool.chain(3, False)
    ratios = vacuum_ratios(spec)
    s21 = pool.solutions(spec, 2, 1)
    uB, w = s21[0].u, s21[0].v[0]
    delta = 1e-6
    avg = 0.5 * sum(
        corner_entry_raw(w + s * delta, w, uB, (), (w + s * delta,), spec.c, ratios.r3(w + s * delta))
        for s in (+1.0, -1.0)
    )
    fin = corner_entry_coinciding(w, uB, (), (w,), spec.c, ratios.r3(w), ratios.r3_prime(w))
    checks.add("coinciding entry vs removable-singularity oracle", abs(avg - fin) / abs(fin), 1e-9)

    b10 = pool.solutions(spec, 1, 0)
    rows, target, slope = corner_limit_rows(spec, b10[0].u, (), (), w_mags=(1e3, 1e4))
    checks.add("corner limit value at 1e4", rows[-1][-1], 1e-3)
    _slope_ok(checks, "corner limit slope", slope)

    # Zero-mode insertions need the trivial twist; (2,0) states need 4 sites.
    spec4 = pool.chain(4, False)
    c20 = pool.solutions(spec4, 2, 0)
    b10_4 = pool.solutions(spec4, 1, 0)
    defect, _, _ = infinite_root_reduction_defect(spec4, c20[0], b10_4[0], pool.probe_point(402))
    checks.add("infinite-root reduction (exact zero-mode path)", defect, 1e-9)
    return checks.result(10, "large-root and coinciding-root limits", time.time() - t0)


def criterion_11(pool):
    """Transpose-map consistency for all nine entries; index-reversal logged."""
    t0 = time.time()
    checks = _Checks()
    spec = pool.chain(3, True)
    reqs = _c8_requests(pool, spec)
    checks.require("all nine families realized", len(reqs) == 9)
    z = pool.probe_point(500)
    for (i, j), (rc, rb) in sorted(reqs.items()):
        req = FormFactorRequest(i, j, z, roots_c=rc, roots_b=rb)
        lhs = direct_form_factor(req, spec)
        rhs = direct_form_factor(map_psi(req), spec)
        checks.add(f"transpose map ({i},{j})", abs(lhs - rhs) / max(abs(lhs), 1e-30), 1e-10)
        checks.require(f"transpose involution ({i},{j})", map_psi(map_psi(req)) == req)
    req12 = FormFactorRequest(1, 2, z, roots_c=reqs[(1, 2)][0], roots_b=reqs[(1, 2)][1])
    phi_req = map_phi_request(req12)
    checks.require("index-reversal image of (1,2) is (2,3)", (phi_req.i, phi_req.j) == (2, 3))
    checks.require("index-reversal involution", map_phi_request(phi_req) == req12)
    skipped = False
    try:
        map_phi(req12, spec)
    except SpecTransformError:
        skipped = True
    checks.require("index-reversal chain transform reported unrealizable", skipped)
    return checks.result(
        11,
        "entry-map consistency",
        time.time() - t0,
        detail="index-reversal oracle check skipped: no realizing chain in this family",
    )


def criterion_12(pool, others_runtime=None):
    """Whole-manifest budget and byte-level determinism under a fixed seed."""
    t0 = time.time()
    checks = _Checks()
    fresh = InstancePool(pool.seed)
    r1 = criterion_9(fresh, n_configs=60)
    r2 = criterion_9(InstancePool(pool.seed), n_configs=60)
    checks.require("identical rows under identical seed", r1.rows == r2.rows)
    if others_runtime is not None:
        checks.add("manifest runtime (s) within budget", others_runtime, 600.0)
    return checks.result(12, "determinism and runtime budget", time.time() - t0)


_CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}

CRITERION_NAMES = {
    1: "exchange-relation residual",
    2: "zero-mode algebra",
    3: "on-shell certification",
    4: "singular-vector property",
    5: "(1,2) determinant vs oracle",
    6: "(1,3) determinant vs oracle",
    7: "zero-mode form-factor relations",
    8: "z-factorization",
    9: "summation identities",
    10: "large-root and coinciding-root limits",
    11: "entry-map consistency",
    12: "determinism and runtime budget",
}

MANIFESTS = {
    "default": tuple(range(1, 13)),
    "quick": (1, 2, 9),
    "identities": (9,),
    "determinants": (5, 6),
    "zero-modes": (2, 4, 7),
    "limits": (10,),
}


def run_criterion(cid, pool, corrupt=False):
    """Run one criterion, optionally with the formula-corruption hook armed."""
    if cid == 12:
        return criterion_12(pool)
    func = _CRITERIA[cid]
    if not corrupt:
        return func(pool)
    _ff_mod._ENTRY_CORRUPTION = 1e-3
    _id_mod._OMEGA_CORRUPTION = 1e-3
    try:
        return func(pool)
    finally:
        _ff_mod._ENTRY_CORRUPTION = 0.0
        _id_mod._OMEGA_CORRUPTION = 0.0


def run_manifest(name="default", seed=0, workers=1, corrupt=None):
    """Run a named manifest; returns criterion results sorted by number.

    ``corrupt`` names one criterion to run with a deliberately perturbed
    formula entry, as a sensitivity control; corruption forces sequential
    execution so the hook cannot leak into other criteria.
    """
    if name not in MANIFESTS:
        raise ValueError(f"unknown manifest {name!r}; have {sorted(MANIFESTS)}")
    cids = MANIFESTS[name]
    pool = InstancePool(seed)
    results = {}
    plain = [c for c in cids if c != 12]
    if corrupt is not None or workers <= 1:
        for cid in plain:
            results[cid] = run_criterion(cid, pool, corrupt=(corrupt == cid))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pot:
            futures = {cid: pot.submit(run_criterion, cid, pool) for cid in plain}
            for cid, fut in futures.items():
                results[cid] = fut.result()
    if 12 in cids:
        others = sum(r.runtime for r in results.values())
        results[12] = criterion_12(pool, others_runtime=others)
    return [results[cid] for cid in sorted(results)]
