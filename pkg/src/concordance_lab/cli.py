"""Command-line front end.

Commands emit machine-readable JSON or headered CSV (UTF-8, LF) and are
byte-deterministic for identical flags and seed.  Exit codes: 0 success,
1 a certificate failed or a sweep was truncated, 2 usage error.

CSV schemas are versioned in a leading comment line so downstream plot
scripts can detect mismatches.  CONCORDANCE_LAB_THREADS caps the worker
count used by the embarrassingly parallel sweeps; results do not depend
on it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import crofton, fdomain, lattice, ns_models, torus, vieta

USAGE_ERROR = 2
CERTIFICATE_ERROR = 1


@dataclass
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    seed: int = 0
    output_path: str | None = None
    format: str = "json"


def _worker_count() -> int:
    raw = os.environ.get("CONCORDANCE_LAB_THREADS", "1")
    try:
        return max(1, min(64, int(raw)))
    except ValueError:
        return 1


def _emit(text: str, output_path: str | None) -> None:
    if output_path:
        with open(output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_doc(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _csv_doc(schema: str, header: list[str], rows: list[list]) -> str:
    lines = [f"# schema: {schema}", ",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _comma_ints(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _comma_floats(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number, got {text!r}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_entropy(args) -> int:
    model = ns_models.model_by_name(args.model)
    entropy = ns_models.composed_entropy(model, args.word)
    doc = {
        "model": model.name,
        "word": args.word,
        "log_lambda": entropy.value,
        "lambda": entropy.radius,
    }
    _emit(_json_doc(doc), args.out)
    return 0


def cmd_lehmer_bound(args) -> int:
    alpha = args.alpha
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    lam = lattice.lehmer_number()
    doc = {
        "alpha": alpha,
        "lehmer": lam,
        "lehmer_log": math.log(lam),
        "bound": math.log(lam) * alpha,
        "bound_linear_form": lam * alpha,
        "note": "bound = log(lehmer) * alpha; the linear form lehmer * alpha "
        "is reported alongside for comparison, not adopted",
    }
    _emit(_json_doc(doc), args.out)
    return 0


def cmd_model_dump(args) -> int:
    model = ns_models.model_by_name(args.model)
    _emit(_json_doc(model.to_json_dict()), args.out)
    return 0


def _certify_row(item):
    cls, y = item
    cert = torus.certify_concordance(cls, y)
    rhs = cert.C * math.sqrt(cert.volC)
    ratio = cert.mvolR_lower / rhs if rhs > 0 else math.inf
    return [
        *cert.theta.coords,
        *cert.k,
        cert.mvolR_lower,
        cert.volC,
        ratio,
        cert.holds,
    ]


def cmd_torus_certify(args) -> int:
    y = args.y
    if y <= 0:
        raise ValueError("y must be positive")
    classes = list(torus.ample_classes(args.max_coord))
    items = [(cls, y) for cls in classes]
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_certify_row, items, chunksize=256))
    else:
        rows = [_certify_row(item) for item in items]
    text = _csv_doc(
        "torus-certify v1",
        ["alpha", "beta", "gamma", "k1", "k2", "k3", "mvolR_lower", "volC", "ratio", "holds"],
        rows,
    )
    _emit(text, args.out)
    return 0 if all(row[-1] for row in rows) else CERTIFICATE_ERROR


def cmd_fdomain_decompose(args) -> int:
    model = ns_models.model_by_name(args.model)
    if model.dim != 2:
        raise ValueError("decomposition requires a rank-2 model")
    f = ns_models.composed_word_map(model, args.word)
    cb = fdomain.ConeBasis(gram=model.gram, f=f, theta1=tuple(args.theta1))
    n, k1, k2, j = fdomain.decompose(cb, tuple(args.theta))
    _emit(_json_doc({"n": n, "k1": k1, "k2": k2, "j": j}), args.out)
    return 0


def _sweep_record(params):
    t, n_max, eps, budget, m, x3 = params
    return vieta.entropy_estimate(t, n_max=n_max, eps=eps, budget=budget, m=m, x3=x3)


def cmd_vieta_sweep(args) -> int:
    jobs = [
        (t, args.n_max, args.eps, args.budget, args.m, args.seed_x3)
        for t in args.t_list
    ]
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_sweep_record, jobs))
    else:
        records = [_sweep_record(job) for job in jobs]
    rows = []
    truncated = False
    for rec in records:
        truncated = truncated or rec.truncated
        flags = "truncated" if rec.truncated else ""
        for n, length in rec.lengths:
            rows.append([rec.t, n, length, rec.h_estimate, rec.alpha_upper, flags])
    text = _csv_doc(
        "vieta-sweep v1",
        ["t", "n", "L_n", "h_estimate", "alpha_upper", "flags"],
        rows,
    )
    _emit(text, args.out)
    return CERTIFICATE_ERROR if truncated else 0


def cmd_vieta_orbit(args) -> int:
    x1, x2, x3 = args.point
    point = vieta.SurfacePoint(x1, x2, x3, args.t)
    if abs(vieta.residual(point)) > 1e-9:
        raise ValueError("point is not on the surface for this t")
    rows = [[0, point.x1, point.x2, point.x3, vieta.residual(point)]]
    current = point
    for n in range(1, args.n + 1):
        current = vieta.f_map(current)
        rows.append([n, current.x1, current.x2, current.x3, vieta.residual(current)])
    text = _csv_doc(
        "vieta-orbit v1",
        ["n", "x1", "x2", "x3", "residual"],
        rows,
    )
    _emit(text, args.out)
    return 0


def _load_curve(args) -> crofton.ProjCurve:
    if args.curve == "line":
        return crofton.projective_line(args.d, args.curve_points)
    if args.curve == "conic":
        if args.d != 2:
            raise ValueError("the conic curve lives in P^2; use --d 2")
        return crofton.conic_circle(args.curve_points)
    rows = []
    with open(args.curve, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rows.append([float(x) for x in line.split(",")])
    return crofton.ProjCurve(rows, closed=args.closed)


def cmd_crofton(args) -> int:
    curve = _load_curve(args)
    result = crofton.crofton_length(curve, args.samples, args.seed)
    doc = {
        "curve": args.curve,
        "d": curve.dim_ambient - 1,
        "samples": result.samples,
        "seed": result.seed,
        "estimate": result.estimate,
        "stderr": result.stderr,
        "fs_length": crofton.fs_length(curve),
    }
    _emit(_json_doc(doc), args.out)
    if args.convergence_csv:
        rows = []
        seen = 0
        total = 0
        total_sq = 0
        for counts in crofton.iter_batch_counts(curve, args.samples, args.seed):
            seen += len(counts)
            total += int(counts.sum())
            total_sq += int((counts.astype(object) ** 2).sum())
            mean = total / seen
            var = (total_sq - seen * mean * mean) / (seen - 1) if seen > 1 else 0.0
            rows.append(
                [seen, math.pi * mean, math.pi * math.sqrt(max(var, 0.0) / seen)]
            )
        text = _csv_doc("crofton-convergence v1", ["samples", "estimate", "stderr"], rows)
        _emit(text, args.convergence_csv)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="concordance-lab",
        description="Entropy, concordance certificates and Crofton estimates "
        "for real algebraic surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "entropy",
        help="log spectral radius of a composition of covering involutions "
        "on a built-in Neron-Severi model",
    )
    p.add_argument("--model", required=True, choices=ns_models.model_names())
    p.add_argument("--word", required=True, type=_comma_ints,
                   help="comma-separated 1-based involution indices, rightmost acts first")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_entropy, fmt="json")

    p = sub.add_parser(
        "lehmer-bound",
        help="entropy lower bound from the Lehmer number for a given "
        "concordance value",
    )
    p.add_argument("--alpha", required=True, type=float)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_lehmer_bound, fmt="json")

    p = sub.add_parser("model", help="inspect built-in surface models")
    msub = p.add_subparsers(dest="subcommand", required=True)
    d = msub.add_parser("dump", help="dump a model as JSON {name, gram, involutions}")
    d.add_argument("--model", required=True, choices=ns_models.model_names())
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_model_dump, fmt="json")

    p = sub.add_parser("torus", help="abelian-surface concordance tooling")
    tsub = p.add_subparsers(dest="subcommand", required=True)
    c = tsub.add_parser(
        "certify",
        help="sweep ample classes and certify mvolR_lower >= y^(-1/2) volC^(1/2)",
    )
    c.add_argument("--y", required=True, type=_fraction, help="Im(tau) of the elliptic curve")
    c.add_argument("--max-coord", required=True, type=int)
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_torus_certify, fmt="csv")

    p = sub.add_parser("fdomain", help="rank-2 fundamental domain tooling")
    fsub = p.add_subparsers(dest="subcommand", required=True)
    d = fsub.add_parser(
        "decompose",
        help="decompose an ample class as f^n(k1 theta1 + k2 theta2 [+ p_j])",
    )
    d.add_argument("--model", default="wehler", choices=ns_models.model_names())
    d.add_argument("--theta", required=True, type=_comma_ints, help="class to decompose, e.g. 5,-2")
    d.add_argument("--word", default=[1, 2], type=_comma_ints,
                   help="involution word defining f (default 1,2)")
    d.add_argument("--theta1", default=[1, 0], type=_comma_ints,
                   help="primitive ample seed class (default 1,0)")
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_fdomain_decompose, fmt="json")

    p = sub.add_parser("vieta", help="real dynamics on the (2,2,2) deformation family")
    vsub = p.add_subparsers(dest="subcommand", required=True)
    s = vsub.add_parser(
        "sweep",
        help="arc-growth entropy estimates and concordance upper bounds over t",
    )
    s.add_argument("--t-list", required=True, type=_comma_floats)
    s.add_argument("--n-max", default=10, type=int)
    s.add_argument("--eps", default=0.02, type=float)
    s.add_argument("--budget", default=10**6, type=int)
    s.add_argument("--m", default=64, type=int, help="seed arc sample count")
    s.add_argument("--seed-x3", default=0.0, type=float, help="x3 slice of the seed arc")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_vieta_sweep, fmt="csv")
    o = vsub.add_parser("orbit", help="orbit of an on-surface point under the composed map")
    o.add_argument("--point", required=True, type=_comma_floats)
    o.add_argument("--t", required=True, type=float)
    o.add_argument("--n", required=True, type=int)
    o.add_argument("--out", default=None)
    o.set_defaults(func=cmd_vieta_orbit, fmt="csv")

    p = sub.add_parser(
        "crofton",
        help="Monte Carlo Cauchy-Crofton length estimate for a projective curve",
    )
    p.add_argument("--curve", required=True,
                   help="'line', 'conic', or a CSV file of homogeneous coordinates")
    p.add_argument("--d", default=2, type=int, help="ambient projective dimension")
    p.add_argument("--samples", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--curve-points", default=1024, type=int)
    p.add_argument("--closed", action="store_true",
                   help="treat a file curve as closed in projective space")
    p.add_argument("--convergence-csv", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_crofton, fmt="json")

    return parser


def run_config_from_args(args) -> RunConfig:
    params = {
        k: v
        for k, v in vars(args).items()
        if k not in {"func", "fmt", "command", "subcommand", "out"} and v is not None
    }
    return RunConfig(
        command=" ".join(
            part for part in (args.command, getattr(args, "subcommand", None)) if part
        ),
        parameters=params,
        seed=getattr(args, "seed", 0),
        output_path=args.out,
        format=args.fmt,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    run_config_from_args(args)  # validates the known-key contract
    try:
        return args.func(args)
    except (ValueError, OSError, vieta.AffineWindowError, torus.ReductionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
