"""Command-line surface.

Subcommands: `eta` (coefficients of tail dependence), `contour` (unit
level-set meshes), `simulate` (seeded sample clouds), `table` (eta values
across dimensions), `verify` (the self-check suite).  Stdout is always
machine parseable, JSON or CSV; exit codes are 0 (ok), 2 (input error),
3 (numeric failure), 4 (verification failure).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import checks
from .errors import ConvergenceError, VinetailError
from .eta import (
    CLOSED,
    NUMERIC,
    EtaResult,
    eta_cvine,
    eta_dvine,
    eta_dvine_ilog_closed,
    eta_mixed_trivariate,
    eta_numeric,
)
from .gauges import (
    Gauge,
    asymmetric_logistic_gauge,
    bev_gauge_from_measure,
    boundary_point,
    gauge_cvine,
    gauge_dvine,
    gauge_trivariate,
    gaussian_gauge,
    independence_gauge,
    inverted_ev_gauge,
    simplex_directions,
)
from .measures import Logistic
from .simulate import sample_vine, scale_cloud
from .vines import DVINE, TRIVARIATE, VineSpec

OK, INPUT_ERROR, NUMERIC_FAILURE, VERIFY_FAILURE = 0, 2, 3, 4


def _emit_error(message: str) -> int:
    print(json.dumps({"error": message}))
    return INPUT_ERROR


def _parse_builtin(text: str):
    """independence | gaussian:RHO | ilog:ALPHA | logistic:ALPHA | alog:ALPHA"""
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    if name == "independence":
        return independence_gauge(), 0.5
    value = float(arg) if arg else None
    if value is None:
        raise VinetailError(f"builtin {name!r} needs a parameter, e.g. {name}:0.5")
    if name == "gaussian":
        return gaussian_gauge(value), (1.0 + value) / 2.0
    if name == "ilog":
        return inverted_ev_gauge(Logistic(value)), 2.0 ** (-value)
    if name == "logistic":
        return bev_gauge_from_measure(Logistic(value)), 1.0
    if name == "alog":
        return asymmetric_logistic_gauge(value), 1.0
    raise VinetailError(f"unknown builtin gauge {text!r}")


def _load_spec(path: str) -> VineSpec:
    with open(path) as fh:
        return VineSpec.from_json(fh.read())


def _gauge_for_spec(spec: VineSpec) -> Gauge:
    if spec.d == 3 and spec.structure in (TRIVARIATE, DVINE):
        return gauge_trivariate(spec)
    if spec.structure == DVINE:
        return gauge_dvine(spec)
    return gauge_cvine(spec)


def _parse_set(text: str, d: int):
    text = text.strip()
    if "," in text:
        labels = [int(p) for p in text.split(",")]
    else:
        labels = [int(ch) for ch in text]
    bad = [c for c in labels if c < 1 or c > d]
    if bad:
        raise VinetailError(f"--set indices {bad} outside 1..{d}")
    return tuple(sorted(set(labels)))


def _result_json(res: EtaResult) -> str:
    return json.dumps(
        {
            "eta": res.eta,
            "argmin": [float(v) for v in np.atleast_1d(res.argmin)],
            "method": res.method,
        }
    )


def cmd_eta(args) -> int:
    if args.builtin:
        gauge, closed = _parse_builtin(args.builtin)
        if args.method in ("auto", "closed"):
            res = EtaResult(eta=closed, argmin=np.ones(gauge.dim), method=CLOSED)
        else:
            res = eta_numeric(gauge)
        print(_result_json(res))
        return OK
    spec = _load_spec(args.spec)
    C = _parse_set(args.set, spec.d) if args.set else tuple(range(1, spec.d + 1))
    if args.method == "numeric":
        res = eta_numeric(_gauge_for_spec(spec), C)
    elif spec.d == 3 and spec.structure in (TRIVARIATE, DVINE):
        res = eta_mixed_trivariate(spec, C)
    elif len(C) == spec.d and spec.all_iev():
        fn = eta_dvine if spec.structure == DVINE else eta_cvine
        res = EtaResult(eta=fn(spec), argmin=np.ones(spec.d), method=CLOSED)
    else:
        res = eta_numeric(_gauge_for_spec(spec), C)
    if args.method == "closed" and res.method == NUMERIC:
        raise ConvergenceError("no closed form available for this spec/set combination")
    print(_result_json(res))
    return OK


def cmd_contour(args) -> int:
    if args.builtin:
        gauge, _ = _parse_builtin(args.builtin)
    else:
        gauge = _gauge_for_spec(_load_spec(args.spec))
    dims = gauge.dim if args.dims is None else int(args.dims)
    if dims != gauge.dim:
        return _emit_error(f"--dims {dims} does not match the gauge dimension {gauge.dim}")
    rows = []
    for w in simplex_directions(args.resolution, dims):
        if not np.any(w > 0):
            continue
        b = boundary_point(gauge, w)
        rows.append(list(w) + list(b) + [float(gauge(b))])
    header = (
        [f"w{i}" for i in range(1, dims + 1)]
        + [f"b{i}" for i in range(1, dims + 1)]
        + ["g_check"]
    )
    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(f"{v:.17g}" for v in row) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return OK


def cmd_simulate(args) -> int:
    spec = _load_spec(args.spec)
    cloud = sample_vine(spec, args.n, args.seed)
    if args.scale:
        cloud = scale_cloud(cloud)
    if args.format == "binary":
        cloud.to_binary(args.out)
    else:
        cloud.to_csv(args.out)
    print(json.dumps({"out": args.out, "n": cloud.n, "d": cloud.d, "scale": cloud.scale,
                      "seed": cloud.seed, "spec_hash": cloud.spec_hash}))
    return OK


def cmd_table(args) -> int:
    if args.figure != "fig6":
        return _emit_error(f"unknown table {args.figure!r}; available: fig6")
    alphas = [float(a) for a in args.alphas.split(",")]
    dims = list(range(2, args.dmax + 1))
    print("d," + ",".join(f"alpha={a:g}" for a in alphas))
    for d in dims:
        cells = [f"{eta_dvine_ilog_closed(a, d):.17g}" for a in alphas]
        print(f"{d}," + ",".join(cells))
    return OK


def cmd_verify(args) -> int:
    results = checks.run_suite(args.suite)
    print("check,status,elapsed_s,detail")
    failed = 0
    for r in results:
        status = "pass" if r.passed else "fail"
        failed += not r.passed
        detail = r.detail.replace(",", ";")
        print(f"{r.name},{status},{r.elapsed:.3f},{detail}")
    return VERIFY_FAILURE if failed else OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vinetail",
        description="Tail dependence of vine copulas: eta coefficients, gauge geometry, simulation.",
    )
    parser.add_argument("--threads", type=int, default=int(os.environ.get("VINETAIL_THREADS", "1")),
                        help="worker cap for internal parallelism; results never depend on it")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eta", help="compute a coefficient of tail dependence")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="vine spec JSON file")
    src.add_argument("--builtin", help="independence | gaussian:R | ilog:A | logistic:A | alog:A")
    p.add_argument("--set", help="variable subset, e.g. 123 or 1,3 (default: all)")
    p.add_argument("--method", choices=["auto", "closed", "numeric"], default="auto")
    p.set_defaults(fn=cmd_eta)

    p = sub.add_parser("contour", help="emit unit-level-set boundary points as CSV")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="vine spec JSON file")
    src.add_argument("--builtin", help="builtin gauge, as for eta")
    p.add_argument("--dims", type=int, default=None)
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(fn=cmd_contour)

    p = sub.add_parser("simulate", help="sample a vine copula cloud")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--scale", action="store_true", help="divide by ln(n)")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "binary"], default="csv")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("table", help="eta across dimensions (the D-/C-vine table)")
    p.add_argument("--figure", default="fig6")
    p.add_argument("--alphas", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    p.add_argument("--dmax", type=int, default=10)
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser("verify", help="run the self-verification suite")
    p.add_argument("--suite", choices=list(checks.SUITES), default="quick")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code not in (0, None) else OK
    try:
        return args.fn(args)
    except (ConvergenceError,) as exc:
        print(json.dumps({"error": str(exc), "diagnostics": getattr(exc, "diagnostics", {})}))
        return NUMERIC_FAILURE
    except (VinetailError, OSError, ValueError) as exc:
        return _emit_error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
