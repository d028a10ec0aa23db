import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl3ff.bethe import BetheRoots
from gl3ff.chain import ChainSpec
from gl3ff.serialize import (
    from_pair,
    load_chain_spec,
    load_request,
    load_solutions,
    request_to_dict,
    roots_from_dict,
    roots_to_dict,
    save_chain_spec,
    save_request,
    save_solutions,
    to_pair,
)


def test_pair_round_trip():
    assert to_pair(1.5 - 2.5j) == [1.5, -2.5]
    assert from_pair([1.5, -2.5]) == 1.5 - 2.5j
    with pytest.raises(ValueError, match="zz"):
        from_pair([1.0], field="zz")
    with pytest.raises(ValueError):
        from_pair(["x", "y"])


def test_chain_spec_round_trip(tmp_path):
    spec = ChainSpec(2, (0.1 + 0.2j, -0.3j), 1.0, twist=(1.2, 1.0, 0.8 - 0.1j))
    path = tmp_path / "spec.json"
    save_chain_spec(spec, path)
    assert load_chain_spec(path) == spec


def test_chain_spec_parse_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"L": 2, "xi": [[0, 0], [1, 0]]}))
    with pytest.raises(ValueError, match="'c'"):
        load_chain_spec(path)
    path.write_text(json.dumps({"L": "two", "xi": [], "c": [1, 0]}))
    with pytest.raises(ValueError, match="'L'"):
        load_chain_spec(path)


def test_roots_round_trip(tmp_path):
    roots = BetheRoots((0.5 + 0.1j,), (1.5 - 0.3j,), residual=1e-13, on_shell=True)
    rebuilt = roots_from_dict(roots_to_dict(roots))
    assert rebuilt == roots
    path = tmp_path / "sol.json"
    save_solutions([roots], 1, 1, path)
    assert load_solutions(path) == [roots]


def test_request_round_trip(tmp_path):
    rc = BetheRoots((0.5 + 0.1j,), ())
    rb = BetheRoots((), ())
    path = tmp_path / "req.json"
    save_request(path, 1, 2, 0.3 + 0.4j, rc, rb, path_mode="both")
    i, j, z, rc2, rb2, mode = load_request(path)
    assert (i, j, z, mode) == (1, 2, 0.3 + 0.4j, "both")
    assert rc2 == rc and rb2 == rb


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(finite, finite), max_size=4), st.lists(st.tuples(finite, finite), max_size=4))
def test_roots_round_trip_property(us, vs):
    roots = BetheRoots(
        tuple(complex(*p) for p in us), tuple(complex(*p) for p in vs), residual=0.0
    )
    assert roots_from_dict(roots_to_dict(roots)) == roots


def test_request_rejects_bad_path():
    data = request_to_dict(1, 2, 0.0, BetheRoots((0.1,), ()), BetheRoots((), ()))
    data["path"] = "sideways"
    from gl3ff.serialize import request_from_dict

    with pytest.raises(ValueError, match="'path'"):
        request_from_dict(data)
