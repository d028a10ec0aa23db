"""Delimited result tables and the figures rendered alongside them.

Tables are CSV with one schema-versioned comment header line and fixed column
order; floats are written with repr-faithful precision so identical runs are
byte-identical.  Figures are rendered to files next to the tables (Agg
backend, never interactive).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

CSV_SCHEMA = "gl3ff-csv/1"

__all__ = ["CSV_SCHEMA", "fmt", "write_csv", "render_sweep_figure", "render_verify_figure"]


def fmt(x):
    """Deterministic cell formatting for CSV output."""
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, complex):
        return f"{format(x.real, '.17g')}{'+' if x.imag >= 0 else '-'}{format(abs(x.imag), '.17g')}j"
    return str(x)


def write_csv(path, columns, rows, meta=None):
    """Write rows under a schema-versioned header comment; returns the path."""
    parts = [f"# schema={CSV_SCHEMA}"]
    for key in sorted(meta or {}):
        parts.append(f"{key}={meta[key]}")
    lines = [" ".join(parts), ",".join(columns)]
    for row in rows:
        lines.append(",".join(fmt(x) for x in row))
    path = Path(path)
    path.write_text("\n".join(lines) + "\n")
    return path


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def render_sweep_figure(path, rows, title, xlabel="sweep magnitude", ylabel="relative defect"):
    """Log-log defect-vs-magnitude plot with a 1/w guide line."""
    plt = _pyplot()
    mags = np.array([r[0] for r in rows], dtype=float)
    defects = np.array([max(r[-1], 1e-300) for r in rows], dtype=float)
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.loglog(mags, defects, "o-", label="measured")
    guide = defects[0] * mags[0] / mags
    ax.loglog(mags, guide, "--", color="gray", label="1/w reference")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(frameon=False)
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)
    return Path(path)


def render_verify_figure(path, results):
    """Bar chart of per-criterion worst defects against their tolerances."""
    plt = _pyplot()
    labels = [f"C{r.cid}" for r in results]
    defects = [max(r.max_defect, 1e-300) for r in results]
    tols = [r.tolerance for r in results]
    colors = ["tab:green" if r.passed else "tab:red" for r in results]
    fig, ax = plt.subplots(figsize=(7.0, 3.6))
    x = np.arange(len(labels))
    ax.bar(x, defects, color=colors)
    ax.scatter(x, tols, marker="_", s=380, color="black", label="tolerance")
    ax.set_yscale("log")
    ax.set_xticks(x, labels)
    ax.set_ylabel("worst defect")
    ax.set_title("verification criteria: worst defect vs tolerance")
    ax.legend(frameon=False)
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)
    return Path(path)
