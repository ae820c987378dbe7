"""Figure generation from concordance-lab CLI CSV outputs.

Three figure kinds, one per CSV schema:

- ``entropy_sweep``        <- ``# schema: vieta-sweep v1``
- ``crofton_convergence``  <- ``# schema: crofton-convergence v1``
- ``certificate_scatter``  <- ``# schema: torus-certify v1``

These scripts consume only the CSV files; they never import the library
that produced them.  Rendering is deterministic: fixed style, no
timestamps, identical input gives a pixel-identical canvas.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import math
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

KINDS = {
    "entropy_sweep": (
        "vieta-sweep v1",
        ["t", "n", "L_n", "h_estimate", "alpha_upper", "flags"],
    ),
    "crofton_convergence": (
        "crofton-convergence v1",
        ["samples", "estimate", "stderr"],
    ),
    "certificate_scatter": (
        "torus-certify v1",
        ["alpha", "beta", "gamma", "k1", "k2", "k3", "mvolR_lower", "volC", "ratio", "holds"],
    ),
}

#: complex entropy of the composed involutions, the sweep's natural ceiling
H_COMPLEX = math.log(9 + 4 * math.sqrt(5))

_STYLE = {
    "figure.figsize": (6.4, 4.8),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "svg.hashsalt": "concordance-plots",
    "axes.grid": True,
    "grid.alpha": 0.3,
}


class SchemaError(ValueError):
    """Input CSV does not match the documented schema for the plot kind."""


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    kind: str
    output_image: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown plot kind {self.kind!r}; known: {sorted(KINDS)}")


def read_rows(path: str, kind: str) -> list[dict]:
    """Parse a schema-tagged CSV, checking version line and columns."""
    schema, columns = KINDS[kind]
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().strip()
        if first != f"# schema: {schema}":
            raise SchemaError(
                f"schema line mismatch: expected '# schema: {schema}', found {first!r}"
            )
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("missing header row") from None
        if header != columns:
            missing = [c for c in columns if c not in header]
            extra = [c for c in header if c not in columns]
            raise SchemaError(
                f"column mismatch: missing {missing}, unexpected {extra}"
            )
        rows = [dict(zip(columns, row)) for row in reader if row]
    if not rows:
        raise SchemaError("no data rows")
    return rows


def _render_entropy_sweep(rows, ax):
    per_t = {}
    for row in rows:
        per_t[float(row["t"])] = float(row["alpha_upper"])
    ts = sorted(per_t)
    alphas = [per_t[t] for t in ts]
    ax.plot(ts, alphas, "o-", color="tab:blue", label="alpha upper bound")
    ax.axhline(
        1.0,
        linestyle="--",
        color="tab:red",
        label=f"complex-entropy ceiling (h = log(9+4√5) ≈ {H_COMPLEX:.4f})",
    )
    ax.set_xlabel("t")
    ax.set_ylabel("alpha upper bound")
    ax.set_title("Concordance upper bound along the deformation family")
    ax.legend(loc="best")
    return {"points": len(ts), "ts": ts, "alphas": alphas}


def _render_crofton_convergence(rows, ax):
    samples = [int(row["samples"]) for row in rows]
    estimates = [float(row["estimate"]) for row in rows]
    stderrs = [float(row["stderr"]) for row in rows]
    ax.plot(samples, estimates, "-o", color="tab:blue", label="length estimate")
    lo = [e - s for e, s in zip(estimates, stderrs)]
    hi = [e + s for e, s in zip(estimates, stderrs)]
    ax.fill_between(samples, lo, hi, alpha=0.25, color="tab:blue", label="± stderr")
    ax.set_xlabel("samples")
    ax.set_ylabel("length estimate")
    ax.set_title("Crofton Monte Carlo convergence")
    ax.legend(loc="best")
    return {"points": len(samples)}


def _render_certificate_scatter(rows, ax):
    xs, ys, holds = [], [], []
    for row in rows:
        mvol = float(row["mvolR_lower"])
        ratio = float(row["ratio"])
        if ratio <= 0 or not math.isfinite(ratio):
            raise SchemaError(f"non-positive ratio in row {row!r}")
        xs.append(mvol / ratio)  # C * volC^(1/2)
        ys.append(mvol)
        holds.append(row["holds"].strip().lower() == "true")
    ok_x = [x for x, h in zip(xs, holds) if h]
    ok_y = [y for y, h in zip(ys, holds) if h]
    bad_x = [x for x, h in zip(xs, holds) if not h]
    bad_y = [y for y, h in zip(ys, holds) if not h]
    ax.scatter(ok_x, ok_y, s=12, color="tab:green", label="holds", zorder=3)
    if bad_x:
        ax.scatter(bad_x, bad_y, s=16, color="tab:red", marker="x", label="violated", zorder=3)
    top = max(xs + ys) * 1.05
    ax.plot([0, top], [0, top], "--", color="black", linewidth=1, label="diagonal")
    ax.set_xlabel("C · volC^(1/2)")
    ax.set_ylabel("mvolR lower bound")
    ax.set_title("Concordance certificates")
    ax.legend(loc="best")
    return {
        "points": len(xs),
        "xs": xs,
        "ys": ys,
        "holds": holds,
    }


_RENDERERS = {
    "entropy_sweep": _render_entropy_sweep,
    "crofton_convergence": _render_crofton_convergence,
    "certificate_scatter": _render_certificate_scatter,
}


def render(spec: PlotSpec) -> dict:
    """Render one figure; returns a summary including a canvas hash."""
    rows = read_rows(spec.input_csv, spec.kind)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        try:
            summary = _RENDERERS[spec.kind](rows, ax)
            fig.canvas.draw()
            digest = hashlib.sha256(bytes(fig.canvas.buffer_rgba())).hexdigest()
            fig.savefig(spec.output_image, metadata=_strip_metadata(spec.output_image))
        finally:
            plt.close(fig)
    summary["rgba_sha256"] = digest
    summary["output"] = spec.output_image
    return summary


def _strip_metadata(path: str):
    if path.endswith(".png"):
        return {"Software": None}
    if path.endswith(".svg"):
        return {"Date": None}
    return None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots/render",
        description="Render a figure from a concordance-lab CSV output.",
    )
    parser.add_argument("--kind", required=True, choices=sorted(KINDS))
    parser.add_argument("--in", dest="input_csv", required=True)
    parser.add_argument("--out", dest="output_image", required=True)
    args = parser.parse_args(argv)
    try:
        render(PlotSpec(args.input_csv, args.kind, args.output_image))
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
