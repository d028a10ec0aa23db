"""Acceptance suite: every verification criterion at its stated tolerance.

The full manifest runs once per session (criteria share solved instances);
each criterion then gets its own test that prints one pass/fail line and
asserts every contained check.
"""

import pytest

from gl3ff.verify import CRITERION_NAMES, run_manifest

ACCEPTANCE_SEED = 2024


@pytest.fixture(scope="module")
def manifest_results():
    results = run_manifest("default", seed=ACCEPTANCE_SEED)
    return {res.cid: res for res in results}


@pytest.mark.parametrize("cid", sorted(CRITERION_NAMES))
def test_criterion(cid, manifest_results):
    res = manifest_results[cid]
    status = "PASS" if res.passed else "FAIL"
    print(
        f"\n[{status}] criterion {res.cid}: {res.name} "
        f"(worst defect {res.max_defect:.3e} vs tolerance {res.tolerance:.1e}, "
        f"{res.runtime:.1f}s{', ' + res.detail if res.detail else ''})"
    )
    failed = [row for row in res.rows if not row[3]]
    assert res.passed, f"criterion {cid} failed checks: {failed[:10]}"


def test_runtime_budget(manifest_results):
    total = sum(res.runtime for res in manifest_results.values())
    print(f"\nmanifest total runtime: {total:.1f}s (budget 600s)")
    assert total <= 600.0
