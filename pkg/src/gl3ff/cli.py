"""Command-line front end: solve, ff, verify, and sweep subcommands.

Exit codes: 0 success, 1 partial verification failure, 2 input parse error,
3 no convergence, 4 cardinality violation, 5 coinciding roots without the
limit flag.  Result tables are schema-versioned CSV; figures are rendered
next to them unless --no-plot is given.  The default output directory can be
overridden with the GL3FF_OUT environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .bethe import SolveConfig, solve_bethe
from .errors import CardinalityError, CoincidingRootsError, Gl3ffError
from .formfactors import (
    FormFactorRequest,
    coinciding_root_report,
    corner_limit_rows,
    det_form_factor,
    direct_form_factor,
    relation_report,
)
from .identities import large_root_reduction_sweep
from .reporting import render_sweep_figure, render_verify_figure, write_csv
from .serialize import load_chain_spec, load_request, save_solutions, to_pair
from .vectors import bethe_vector, dual_on_shell_residual, on_shell_residual
from .verify import MANIFESTS, InstancePool, rng_for, run_manifest

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_PARSE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_CARDINALITY = 4
EXIT_COINCIDING = 5


def _out_dir(args):
    out = args.out or os.environ.get("GL3FF_OUT", ".")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load_spec(path):
    try:
        return load_chain_spec(path)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot parse chain spec {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def cmd_solve(args):
    spec = _load_spec(args.spec)
    out = _out_dir(args)
    cfg = SolveConfig(tol=args.tol, n_seeds=args.n_seeds)
    sols = solve_bethe(spec, args.a, args.b, cfg, rng_for(args.seed, 1))
    rows = []
    for k, roots in enumerate(sols):
        vec_ok = np.linalg.norm(bethe_vector(spec, roots.u, roots.v)) > 0
        eig = (
            max(on_shell_residual(spec, roots), dual_on_shell_residual(spec, roots))
            if vec_ok
            else float("nan")
        )
        rows.append(
            (k, args.a, args.b)
            + tuple(x for root in roots.u + roots.v for x in to_pair(root))
            + (roots.residual, eig)
        )
    root_cols = [f"{s}{i}_{p}" for s, n in (("u", args.a), ("v", args.b)) for i in range(n) for p in ("re", "im")]
    write_csv(
        out / "solutions.csv",
        ["index", "a", "b", *root_cols, "residual", "eigenvector_residual"],
        rows,
        meta={"command": "solve", "seed": args.seed},
    )
    save_solutions(sols, args.a, args.b, out / "solutions.json")
    print(f"{len(sols)} solution(s) written to {out}/solutions.json")
    if not sols and (args.a, args.b) != (0, 0):
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _coincidence_pattern(rc, rb, tol=1e-9):
    """Classify shared roots: None, "designated" (one shared second-level root
    equal to the last B-side element), or "other"."""
    shared_u = [x for x in rc.u for y in rb.u if abs(x - y) <= tol]
    shared_v = [x for x in rc.v for y in rb.v if abs(x - y) <= tol]
    if not shared_u and not shared_v:
        return None
    if not shared_u and len(shared_v) == 1 and rb.v and abs(shared_v[0] - rb.v[-1]) <= tol:
        return "designated"
    return "other"


def cmd_ff(args):
    spec = _load_spec(args.spec)
    out = _out_dir(args)
    try:
        i, j, z, rc, rb, path_mode = load_request(args.request)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot parse request {args.request}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        req = FormFactorRequest(i, j, z, roots_c=rc, roots_b=rb)
    except CardinalityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CARDINALITY

    pattern = _coincidence_pattern(rc, rb)
    result = {"i": i, "j": j, "z": to_pair(z), "path": path_mode}
    det_rep = None
    if pattern == "designated" and args.allow_coinciding and (i, j) == (1, 2):
        w = rb.v[-1]
        vc_rest = tuple(x for x in rc.v if abs(x - w) > 1e-9)
        det_rep = coinciding_root_report(spec, rc.u, vc_rest, rb.u, rb.v[:-1], w, z)
        result["coinciding"] = True
    elif pattern is not None:
        hint = (
            "rerun with --allow-coinciding for the designated second-level pattern "
            "of a (1,2) request"
            if pattern == "designated"
            else "only a single coincidence with the designated element has a limit form"
        )
        print(f"error: root sets share an element; {hint}", file=sys.stderr)
        return EXIT_COINCIDING
    oracle = direct_form_factor(req, spec) if path_mode in ("oracle", "both") else None
    if det_rep is None and path_mode in ("det", "both"):
        det_rep = det_form_factor(req, spec)
    if oracle is not None:
        result["oracle"] = to_pair(oracle)
    defect = None
    if det_rep is not None:
        result["det"] = {
            "value": to_pair(det_rep.value),
            "prefactor": to_pair(det_rep.prefactor),
            "determinant": to_pair(det_rep.det),
            "tau_diff": to_pair(det_rep.tau_diff) if det_rep.tau_diff is not None else None,
        }
        if oracle is not None:
            defect = abs(det_rep.value - oracle) / max(abs(oracle), 1e-30)
            result["rel_defect"] = defect
    (out / "ff_result.json").write_text(json.dumps(result, indent=2) + "\n")
    print(f"result written to {out}/ff_result.json")
    if defect is not None:
        print(f"relative defect {defect:.3e} (tolerance {args.tol:.1e})")
        return EXIT_OK if defect <= args.tol else EXIT_PARTIAL
    return EXIT_OK


def cmd_verify(args):
    out = _out_dir(args)
    results = run_manifest(args.manifest, seed=args.seed, workers=args.workers, corrupt=args.inject_corruption)
    rows = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"[{status}] criterion {res.cid}: {res.name} "
              f"(worst defect {res.max_defect:.3e} vs tol {res.tolerance:.1e}, {res.runtime:.1f}s)"
              + (f" -- {res.detail}" if res.detail else ""))
        for check, defect, tol, ok in res.rows:
            rows.append((res.cid, res.name, check, defect, tol, "pass" if ok else "fail"))
    write_csv(
        out / "verify_report.csv",
        ["criterion", "name", "check", "defect", "tolerance", "status"],
        rows,
        meta={"command": "verify", "manifest": args.manifest, "seed": args.seed},
    )
    if 9 in {r.cid for r in results}:
        ident = {
            "identities": [
                {"check": check, "max_defect": defect, "tolerance": tol, "passed": ok}
                for res in results
                if res.cid == 9
                for check, defect, tol, ok in res.rows
            ],
            "failures": sum(1 for res in results if res.cid == 9 for row in res.rows if not row[3]),
        }
        (out / "identity_report.json").write_text(json.dumps(ident, indent=2) + "\n")
    if not args.no_plot:
        render_verify_figure(out / "verify_defects.png", results)
    failed = [r.cid for r in results if not r.passed]
    if failed:
        print(f"FAILED criteria: {failed}", file=sys.stderr)
        return EXIT_PARTIAL
    print(f"all {len(results)} criteria passed; report in {out}/verify_report.csv")
    return EXIT_OK


def cmd_sweep(args):
    spec = _load_spec(args.spec)
    out = _out_dir(args)
    pool = InstancePool(args.seed)
    mags = tuple(float(m) for m in args.magnitudes.split(","))

    def solved(a, b, n=120):
        sols = pool.solutions(spec, a, b, n_seeds=n)
        if not sols:
            print(f"error: no ({a},{b}) solutions found for this chain", file=sys.stderr)
            raise SystemExit(EXIT_NO_CONVERGENCE)
        return sols

    if args.kind == "relation":
        b_sols = solved(args.a, args.b)
        shifts = {
            "13-from-12": (1, 1),
            "12-from-11": (1, 0),
            "12-from-22": (1, 0),
            "11-minus-22": (0, 0),
        }
        da, db = shifts[args.relation]
        c_sols = solved(args.a + da, args.b + db)
        rc = c_sols[0]
        rb = b_sols[1] if args.relation == "11-minus-22" and len(b_sols) > 1 else b_sols[0]
        rep = relation_report(spec, args.relation, rc, rb, pool.probe_point(1), w_mags=mags)
        rows = [(w, lhs, rhs, d) for w, lhs, rhs, d in rep.w_rows]
        title = f"relation {args.relation}: finite-w approach (slope {rep.slope:.2f})"
        print(f"exact-path defect {rep.defect:.3e}; finite-w slope {rep.slope:.3f}")
    elif args.kind == "reduction":
        rb = solved(args.a, args.b)[0]
        rc = solved(args.a + 1, args.b)[0]
        rep = large_root_reduction_sweep(spec, rc, rb, pool.probe_point(2), magnitudes=mags)
        rows = [(m, val, tgt, d) for m, val, tgt, d in rep.full_rows]
        title = f"large-root reduction (slope {rep.slopes['full']:.2f})"
        print(f"slopes: {rep.slopes}; corner two-form gap {rep.corner_form_gap:.3e}")
    elif args.kind == "corner":
        rb = solved(args.a, args.b)[0]
        rows_raw, target, slope = corner_limit_rows(spec, rb.u, rb.v, (), w_mags=mags)
        rows = rows_raw
        title = f"corner-entry limit vs {target:.3f} (slope {slope:.2f})"
        print(f"corner-entry limit slope {slope:.3f}, target {target}")
    else:
        raise ValueError(args.kind)

    write_csv(
        out / "sweep.csv",
        ["w", "lhs", "rhs", "defect"],
        rows,
        meta={"command": "sweep", "kind": args.kind, "seed": args.seed},
    )
    if not args.no_plot:
        render_sweep_figure(out / "sweep.png", rows, title)
    print(f"sweep table written to {out}/sweep.csv")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="gl3ff", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output directory (default: $GL3FF_OUT or .)")
        p.add_argument("--seed", type=int, default=0, help="master seed for all randomness")
        p.add_argument("--tol", type=float, default=1e-8, help="acceptance tolerance")
        p.add_argument("--workers", type=int, default=1, help="worker threads for independent tasks")

    p_solve = sub.add_parser("solve", help="solve the Bethe equations for one chain")
    p_solve.add_argument("--spec", required=True, help="chain spec JSON file")
    p_solve.add_argument("--a", type=int, required=True)
    p_solve.add_argument("--b", type=int, required=True)
    p_solve.add_argument("--n-seeds", type=int, default=120)
    common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_ff = sub.add_parser("ff", help="evaluate one form factor (oracle and/or determinant)")
    p_ff.add_argument("--spec", required=True)
    p_ff.add_argument("--request", required=True, help="request JSON file")
    p_ff.add_argument("--allow-coinciding", action="store_true",
                      help="evaluate the designated coinciding-root limit form")
    common(p_ff)
    p_ff.set_defaults(func=cmd_ff)

    p_ver = sub.add_parser("verify", help="run a verification manifest")
    p_ver.add_argument("--manifest", default="default", choices=sorted(MANIFESTS))
    p_ver.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p_ver.add_argument("--inject-corruption", type=int, default=None, metavar="CID",
                       help="sensitivity control: perturb one formula entry for a criterion")
    common(p_ver)
    p_ver.set_defaults(func=cmd_verify)

    p_sw = sub.add_parser("sweep", help="finite-magnitude limit sweeps with CSV + figure output")
    p_sw.add_argument("--spec", required=True)
    p_sw.add_argument("--kind", choices=("relation", "reduction", "corner"), default="relation")
    p_sw.add_argument("--relation", default="13-from-12",
                      choices=("13-from-12", "12-from-11", "12-from-22", "11-minus-22"))
    p_sw.add_argument("--a", type=int, default=1)
    p_sw.add_argument("--b", type=int, default=0)
    p_sw.add_argument("--magnitudes", default="1e2,1e3,1e4")
    p_sw.add_argument("--no-plot", action="store_true")
    common(p_sw)
    p_sw.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CoincidingRootsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COINCIDING
    except CardinalityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CARDINALITY
    except Gl3ffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARTIAL


if __name__ == "__main__":
    raise SystemExit(main())
