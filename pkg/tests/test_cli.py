import json

import numpy as np
import pytest

from gl3ff.bethe import VACUUM, BetheRoots
from gl3ff.chain import ChainSpec
from gl3ff.cli import main
from gl3ff.serialize import load_solutions, save_chain_spec, save_request


@pytest.fixture()
def spec_file(tmp_path):
    path = tmp_path / "chain.json"
    save_chain_spec(ChainSpec(2, (0.0, 0.0), 1.0), path)
    return path


@pytest.fixture()
def twisted3_file(tmp_path):
    path = tmp_path / "chain3t.json"
    save_chain_spec(
        ChainSpec(3, (0.2 + 0.1j, -0.3 - 0.2j, 0.4 + 0.3j), 1.0, twist=(1.3 + 0.2j, 1.0, 1.4 - 0.3j)),
        path,
    )
    return path


def test_solve_finds_closed_form(spec_file, tmp_path):
    out = tmp_path / "out"
    code = main(["solve", "--spec", str(spec_file), "--a", "1", "--b", "0", "--out", str(out)])
    assert code == 0
    sols = load_solutions(out / "solutions.json")
    assert any(abs(s.u[0] + 0.5) < 1e-9 for s in sols)
    table = (out / "solutions.csv").read_text().splitlines()
    assert table[0].startswith("# schema=gl3ff-csv/1")
    assert table[1].split(",")[:3] == ["index", "a", "b"]


def test_solve_vacuum_row(spec_file, tmp_path):
    out = tmp_path / "out"
    code = main(["solve", "--spec", str(spec_file), "--a", "0", "--b", "0", "--out", str(out)])
    assert code == 0
    assert len(load_solutions(out / "solutions.json")) == 1


def test_solve_malformed_spec(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"L": 2, "xi": [[0, 0], [1, 0]]}))  # missing field c
    with pytest.raises(SystemExit) as err:
        main(["solve", "--spec", str(bad), "--a", "0", "--b", "0", "--out", str(tmp_path)])
    assert err.value.code == 2


def test_ff_both_paths(twisted3_file, tmp_path, chain3_twisted, solutions):
    sols_c = solutions(chain3_twisted, 1, 1)
    req_path = tmp_path / "req.json"
    save_request(req_path, 1, 3, 0.9 + 0.6j, sols_c[0], VACUUM, path_mode="both")
    out = tmp_path / "out"
    code = main(["ff", "--spec", str(twisted3_file), "--request", str(req_path), "--out", str(out)])
    assert code == 0
    result = json.loads((out / "ff_result.json").read_text())
    assert result["rel_defect"] <= 1e-8
    assert "oracle" in result and "det" in result


def test_ff_31_served_via_transpose(twisted3_file, tmp_path, chain3_twisted, solutions):
    sols_c = solutions(chain3_twisted, 1, 1)
    req_path = tmp_path / "req.json"
    # (3,1) with C-side vacuum-like cardinalities: B (1,1), C (0,0)
    save_request(req_path, 3, 1, 0.9 + 0.6j, VACUUM, sols_c[0], path_mode="both")
    out = tmp_path / "out"
    code = main(["ff", "--spec", str(twisted3_file), "--request", str(req_path), "--out", str(out)])
    assert code == 0
    result = json.loads((out / "ff_result.json").read_text())
    assert result["rel_defect"] <= 1e-8


def test_ff_cardinality_violation(twisted3_file, tmp_path, chain3_twisted, solutions):
    sols_c = solutions(chain3_twisted, 1, 1)
    req_path = tmp_path / "req.json"
    save_request(req_path, 1, 2, 0.9 + 0.6j, sols_c[0], VACUUM)
    out = tmp_path / "out"
    code = main(["ff", "--spec", str(twisted3_file), "--request", str(req_path), "--out", str(out)])
    assert code == 4


def test_ff_coinciding_roots_exit_code(twisted3_file, tmp_path, chain3_twisted, solutions):
    s21 = solutions(chain3_twisted, 2, 1)[0]
    shared_c = BetheRoots((0.9 + 0.8j, -1.2 + 0.5j, 0.3 - 0.7j), (s21.v[0],))
    rb = BetheRoots(s21.u, (s21.v[0],))
    req_path = tmp_path / "req.json"
    save_request(req_path, 1, 2, 0.9 + 0.6j, shared_c, rb, path_mode="det")
    out = tmp_path / "out"
    code = main(["ff", "--spec", str(twisted3_file), "--request", str(req_path), "--out", str(out)])
    assert code == 5
    code = main(
        [
            "ff",
            "--spec",
            str(twisted3_file),
            "--request",
            str(req_path),
            "--out",
            str(out),
            "--allow-coinciding",
        ]
    )
    assert code == 0
    result = json.loads((out / "ff_result.json").read_text())
    assert result.get("coinciding") is True


def test_ff_13_shared_root_always_exit_5(twisted3_file, tmp_path, chain3_twisted, solutions):
    # the limit form exists only for (1,2); a shared root in a (1,3) request
    # is rejected with or without the flag
    s11 = solutions(chain3_twisted, 1, 1)[0]
    rc = BetheRoots((0.9 + 0.8j, -1.2 + 0.5j), (0.4 - 0.6j, s11.v[0]))
    req_path = tmp_path / "req.json"
    save_request(req_path, 1, 3, 0.9 + 0.6j, rc, s11, path_mode="det")
    out = tmp_path / "out"
    for extra in ([], ["--allow-coinciding"]):
        code = main(
            ["ff", "--spec", str(twisted3_file), "--request", str(req_path), "--out", str(out)]
            + extra
        )
        assert code == 5


def test_solve_no_convergence_exit(twisted3_file, tmp_path):
    # twisted chains admit no (0,1) states: best-effort empty output, exit 3
    out = tmp_path / "out"
    code = main(["solve", "--spec", str(twisted3_file), "--a", "0", "--b", "1",
                 "--n-seeds", "6", "--out", str(out)])
    assert code == 3
    assert (out / "solutions.json").exists()


def test_output_dir_env_var(spec_file, tmp_path, monkeypatch):
    target = tmp_path / "envout"
    monkeypatch.setenv("GL3FF_OUT", str(target))
    code = main(["solve", "--spec", str(spec_file), "--a", "0", "--b", "0"])
    assert code == 0
    assert (target / "solutions.json").exists()


def test_manifest_determinism_across_worker_counts():
    from gl3ff.verify import run_manifest

    seq = run_manifest("quick", seed=11, workers=1)
    par = run_manifest("quick", seed=11, workers=3)
    assert [r.rows for r in seq] == [r.rows for r in par]


def test_verify_identities_manifest(tmp_path):
    out = tmp_path / "out"
    code = main(["verify", "--manifest", "identities", "--out", str(out), "--seed", "3"])
    assert code == 0
    table = (out / "verify_report.csv").read_text().splitlines()
    crits = {line.split(",")[0] for line in table[2:]}
    assert crits == {"9"}
    report = json.loads((out / "identity_report.json").read_text())
    assert report["failures"] == 0
    assert (out / "verify_defects.png").exists()


def test_verify_determinism(tmp_path):
    texts = []
    for run in ("a", "b"):
        out = tmp_path / run
        code = main(["verify", "--manifest", "identities", "--out", str(out), "--seed", "5", "--no-plot"])
        assert code == 0
        texts.append((out / "verify_report.csv").read_bytes())
    assert texts[0] == texts[1]


def test_verify_corruption_injection(tmp_path):
    out = tmp_path / "out"
    code = main(
        [
            "verify",
            "--manifest",
            "identities",
            "--out",
            str(out),
            "--seed",
            "3",
            "--inject-corruption",
            "9",
            "--no-plot",
        ]
    )
    assert code == 1
    table = (out / "verify_report.csv").read_text()
    assert ",fail" in table


def test_sweep_relation(spec_file, tmp_path):
    out = tmp_path / "out"
    code = main(
        [
            "sweep",
            "--spec",
            str(spec_file),
            "--kind",
            "corner",
            "--a",
            "1",
            "--b",
            "0",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[1] == "w,lhs,rhs,defect"
    assert len(lines) >= 4
    assert (out / "sweep.png").exists()
