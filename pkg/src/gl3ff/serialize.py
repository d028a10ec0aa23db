"""File formats: chain specs, root lists, and form-factor requests.

All files are JSON; complex scalars serialize as two-element [re, im] arrays
throughout.  Parse failures raise ValueError naming the offending field.
"""

from __future__ import annotations

import json
from pathlib import Path

from .bethe import BetheRoots
from .chain import ChainSpec

__all__ = [
    "to_pair",
    "from_pair",
    "save_chain_spec",
    "load_chain_spec",
    "roots_to_dict",
    "roots_from_dict",
    "save_solutions",
    "load_solutions",
    "request_to_dict",
    "request_from_dict",
    "save_request",
    "load_request",
]


def to_pair(z):
    z = complex(z)
    return [z.real, z.imag]


def from_pair(p, field="value"):
    if not isinstance(p, (list, tuple)) or len(p) != 2:
        raise ValueError(f"field {field!r}: expected a [re, im] pair, got {p!r}")
    try:
        return complex(float(p[0]), float(p[1]))
    except (TypeError, ValueError):
        raise ValueError(f"field {field!r}: non-numeric entries in {p!r}") from None


def _need(data, key, kind=None):
    if key not in data:
        raise ValueError(f"missing field {key!r}")
    val = data[key]
    if kind is not None and not isinstance(val, kind):
        raise ValueError(f"field {key!r}: expected {kind.__name__}, got {type(val).__name__}")
    return val


def save_chain_spec(spec, path):
    data = {
        "L": spec.length,
        "xi": [to_pair(x) for x in spec.inhomogeneities],
        "c": to_pair(spec.c),
        "kappa": [to_pair(k) for k in spec.twist],
    }
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


def load_chain_spec(path):
    data = json.loads(Path(path).read_text())
    length = _need(data, "L", int)
    xi = [from_pair(p, f"xi[{k}]") for k, p in enumerate(_need(data, "xi", list))]
    c = from_pair(_need(data, "c"), "c")
    kappa_raw = data.get("kappa", [[1, 0], [1, 0], [1, 0]])
    if not isinstance(kappa_raw, list) or len(kappa_raw) != 3:
        raise ValueError("field 'kappa': expected three [re, im] pairs")
    kappa = tuple(from_pair(p, f"kappa[{k}]") for k, p in enumerate(kappa_raw))
    return ChainSpec(length, tuple(xi), c, twist=kappa)


def roots_to_dict(roots):
    return {
        "u": [to_pair(x) for x in roots.u],
        "v": [to_pair(x) for x in roots.v],
        "residual": roots.residual,
        "on_shell": roots.on_shell,
    }


def roots_from_dict(data, field="roots"):
    u = [from_pair(p, f"{field}.u[{k}]") for k, p in enumerate(_need(data, "u", list))]
    v = [from_pair(p, f"{field}.v[{k}]") for k, p in enumerate(_need(data, "v", list))]
    return BetheRoots(
        tuple(u),
        tuple(v),
        residual=float(data.get("residual", 0.0)),
        on_shell=bool(data.get("on_shell", True)),
    )


def save_solutions(solutions, a, b, path):
    data = {"a": a, "b": b, "solutions": [roots_to_dict(r) for r in solutions]}
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


def load_solutions(path):
    data = json.loads(Path(path).read_text())
    return [roots_from_dict(d, f"solutions[{k}]") for k, d in enumerate(_need(data, "solutions", list))]


def request_to_dict(i, j, z, roots_c, roots_b, path_mode="both"):
    return {
        "i": i,
        "j": j,
        "z": to_pair(z),
        "roots_c": roots_to_dict(roots_c),
        "roots_b": roots_to_dict(roots_b),
        "path": path_mode,
    }


def request_from_dict(data):
    i = _need(data, "i", int)
    j = _need(data, "j", int)
    z = from_pair(_need(data, "z"), "z")
    rc = roots_from_dict(_need(data, "roots_c", dict), "roots_c")
    rb = roots_from_dict(_need(data, "roots_b", dict), "roots_b")
    path_mode = data.get("path", "both")
    if path_mode not in ("oracle", "det", "both"):
        raise ValueError(f"field 'path': expected oracle|det|both, got {path_mode!r}")
    return i, j, z, rc, rb, path_mode


def save_request(path, *args, **kwargs):
    Path(path).write_text(json.dumps(request_to_dict(*args, **kwargs), indent=2) + "\n")


def load_request(path):
    return request_from_dict(json.loads(Path(path).read_text()))
