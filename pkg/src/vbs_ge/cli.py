"""Command-line front end: ``vbs-ge {compute,sweep,simulate,fit,oracle,check}``.

Every output starts with the full run configuration.  CSV carries it as
``# key: value`` comment lines before the header row; JSON under ``"config"``.
Infinite entanglement values are written as the string ``"inf"``.

Exit status: 0 when every requested computation completed (including
degenerate results such as vanishing overlaps), 1 on a domain error, 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from importlib.metadata import PackageNotFoundError, version

from .checks import run_all
from .contraction import log2_lambda_sq, norm_obc, norm_pbc
from .core import Chain, sector_ansatz
from .dense import DENSE_CAP, DenseCapExceeded, dense_lambda_sq, dense_optimize, dense_state
from .ge import extrapolated_eps, ge, sweep
from .sampler import SampleMode, sample, summarize
from .scaling import DomainError, fit, published_comparison

GE_COLUMNS = ["s", "L", "bc", "sector", "log2_lambda_sq", "eps", "exact_zero"]


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def fmt(x):
    """Scalar rendering shared by CSV and JSON: shortest round-trip repr, ``"inf"`` for infinities."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
    return x


def _csv_cell(x) -> str:
    x = fmt(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    return "" if x is None else str(x)


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return fmt(obj)


def _parse_chain(args) -> tuple[Chain, str]:
    """Map ``--bc`` (and ``--edge``) to a chain and an averaging mode."""
    bc = args.bc
    mode = "asymptotic" if bc == "obc-asymptotic" else "exact"
    if bc == "pbc":
        if args.edge:
            raise ValueError("--edge only applies to open chains")
        return Chain(args.spin, args.length, "pbc"), mode
    if args.edge:
        if bc == "obc-asymptotic":
            raise ValueError("--edge selects one state; the asymptotic average needs all edges")
        return Chain(args.spin, args.length, "obc", tuple(args.edge)), mode
    return Chain(args.spin, args.length, "obc-avg"), mode


def _sectors(arg: str) -> list[str]:
    return ["even", "odd"] if arg == "both" else [arg]


def _ge_rows(result, sectors, bc_label):
    rows = []
    for sector in sectors:
        lam, eps = result.sector(sector)
        rows.append(
            {
                "s": result.chain.s,
                "L": result.chain.L,
                "bc": bc_label,
                "sector": sector,
                "log2_lambda_sq": lam.log2value,
                "eps": eps,
                "exact_zero": lam.exact_zero,
            }
        )
    return rows


def cmd_compute(args):
    chain, mode = _parse_chain(args)
    result = ge(chain, mode)
    rows = _ge_rows(result, _sectors(args.sector), args.bc if not args.edge else chain.label())
    return {"rows": rows, "eps": result.eps, "odd_length": result.odd_length}, GE_COLUMNS


def cmd_sweep(args):
    spins = args.spins or [args.spin]
    lengths = args.lengths or [args.length]
    mode = "asymptotic" if args.bc == "obc-asymptotic" else "exact"
    bc = "pbc" if args.bc == "pbc" else "obc-avg"
    rows, errors = [], []
    for row in sweep(spins, lengths, bc, mode):
        if row.error:
            errors.append({"s": row.s, "L": row.L, "error": row.error})
            for sector in _sectors(args.sector):
                rows.append({"s": row.s, "L": row.L, "bc": args.bc, "sector": sector,
                             "log2_lambda_sq": None, "eps": None, "exact_zero": None})
        else:
            rows.extend(_ge_rows(row.result, _sectors(args.sector), args.bc))
    return {"rows": rows, "errors": errors}, GE_COLUMNS


def cmd_simulate(args):
    chain, mode = _parse_chain(args)
    sector = None if args.sector == "both" else args.sector
    records = sample(chain, args.mode, args.samples, args.seed, sector=sector, obc_mode=mode)
    bound = ge(chain, mode).eps
    summ = summarize(records, bound)
    rows = [
        {"index": r.index, "s": chain.s, "L": chain.L, "bc": args.bc, "mode": r.mode.value,
         "seed": r.seed, "value": r.value, "overlap_zero": r.overlap_zero}
        for r in records
    ]
    summary = {
        "analytic_eps": bound,
        "min": summ.minimum,
        "mean": summ.mean,
        "fraction_within_0.05": summ.fraction_within,
        "n_finite": summ.n_finite,
        "n_zero_overlap": summ.n_zero_overlap,
        "below_analytic": sum(1 for r in records if r.value < bound - 1e-9),
    }
    return {"rows": rows, "summary": summary}, list(rows[0].keys())


def _report_dict(rep):
    if rep is None:
        return None
    p = rep.params
    return {"alpha": p.alpha, "beta": p.beta, "gamma": p.gamma, "delta": p.delta, "log_base": p.log_base,
            "rms_residual": rep.rms_residual, "iterations": rep.iterations, "converged": rep.converged}


def cmd_fit(args):
    spins = args.spins or [1, 2, 3, 4, 5, 6, 7, 8]
    lengths = args.lengths or list(range(100, 401, 20))
    bc = "pbc" if args.bc == "pbc" else "obc-avg"
    mode = "asymptotic" if args.bc == "obc-asymptotic" else "exact"
    rows, comparison = [], []
    for parity, rem in (("even", 0), ("odd", 1)):
        pts = [(s, extrapolated_eps(s, lengths, "even", bc, mode).eps_infinity) for s in spins if s % 2 == rem]
        if not pts:
            continue
        rep = fit(pts, max_iter=args.max_iter, tol=args.tol, log_base=args.log_base)
        rows.append({"parity": parity, "points": len(pts), **_report_dict(rep)})
        for row in published_comparison(pts):
            comparison.append({"parity": parity, "log_base": row["log_base"],
                               "published_rms": row["published_rms"],
                               "refit": _report_dict(row["refit"])})
    if not rows:
        raise ValueError("no spins to fit")
    columns = ["parity", "points", "alpha", "beta", "gamma", "delta", "log_base",
               "rms_residual", "iterations", "converged"]
    return {"rows": rows, "published_comparison": comparison}, columns


def cmd_oracle(args):
    chain, mode = _parse_chain(args)
    rows = []
    if chain.bc != "obc-avg":
        state = dense_state(chain, args.dense_cap)
        tm_norm = norm_pbc(chain) if chain.bc == "pbc" else norm_obc(chain)
        rows.append({"quantity": "log2_norm", "transfer": tm_norm.log2value,
                     "dense": math.log2(state.norm_sq)})
    for sector in _sectors(args.sector):
        a = sector_ansatz(chain.s, sector)
        lam = log2_lambda_sq(chain, a, mode="exact")
        dn = dense_lambda_sq(chain, a, cap=args.dense_cap)
        rows.append({"quantity": f"log2_lambda_sq_{sector}", "transfer": lam.log2value,
                     "dense": math.log2(dn) if dn > 0 else -math.inf})
    extra = {}
    if chain.bc != "obc-avg":
        best, _ = dense_optimize(chain, args.restarts, args.seed, cap=args.dense_cap)
        analytic = ge(chain).eps
        rows.append({"quantity": "log2_best_product_overlap", "transfer": -chain.L * analytic,
                     "dense": math.log2(best)})
        extra = {"optimum": best, "optimum_eps": -math.log2(best) / chain.L, "analytic_eps": analytic}
    for row in rows:
        t, d = row["transfer"], row["dense"]
        row["abs_diff"] = 0.0 if t == d else abs(t - d)
    return {"rows": rows, **extra}, ["quantity", "transfer", "dense", "abs_diff"]


def cmd_check(args):
    rows = [{"name": r.name, "passed": r.passed, "seconds": r.seconds, "detail": r.detail} for r in run_all()]
    return {"rows": rows, "all_passed": all(r["passed"] for r in rows)}, ["name", "passed", "seconds", "detail"]


COMMANDS = {
    "compute": cmd_compute,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "oracle": cmd_oracle,
    "check": cmd_check,
}


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}")


def _edge(text: str) -> list[int]:
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("--edge takes p,q")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spin", type=int, default=1)
    common.add_argument("--length", type=int, default=10)
    common.add_argument("--bc", choices=["pbc", "obc", "obc-exact", "obc-asymptotic"], default="pbc",
                        help="obc and obc-exact average over all edges with exact norms")
    common.add_argument("--edge", type=_edge, default=None, help="p,q: a single open-chain state (1-based)")
    common.add_argument("--sector", choices=["even", "odd", "both"], default="both")
    common.add_argument("--mode", choices=[m.value for m in SampleMode], default="unconstrained")
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["csv", "json"], default="json")
    common.add_argument("--output", default=None, help="file path; standard output by default")
    common.add_argument("--log-base", type=float, default=2.0)
    common.add_argument("--max-iter", type=int, default=500)
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--lengths", type=_int_list, default=None)
    common.add_argument("--spins", type=_int_list, default=None)
    common.add_argument("--restarts", type=int, default=20)
    common.add_argument("--dense-cap", type=int, default=DENSE_CAP)

    parser = argparse.ArgumentParser(prog="vbs-ge", description="Geometric entanglement of VBS chains.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items()}
    cfg["version"] = _version()
    return cfg


def render(payload: dict, columns: list[str], config: dict, fmt_name: str) -> str:
    if fmt_name == "json":
        doc = {"config": config, **payload}
        return json.dumps(_clean(doc), indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    for key, val in config.items():
        buf.write(f"# {key}: {_csv_cell(val) if not isinstance(val, list) else ','.join(map(str, val))}\n")
    for key, val in payload.items():
        if key != "rows" and not isinstance(val, (list, dict)):
            buf.write(f"# {key}: {_csv_cell(val)}\n")
        elif key != "rows" and isinstance(val, dict):
            for k2, v2 in val.items():
                buf.write(f"# {key}.{k2}: {_csv_cell(v2)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in payload["rows"]:
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config(args)
    try:
        payload, columns = COMMANDS[args.command](args)
    except (ValueError, DomainError, DenseCapExceeded, ZeroDivisionError) as exc:
        record = {"config": _clean(config), "error": {"type": type(exc).__name__, "message": str(exc)}}
        _emit(json.dumps(record, indent=2) + "\n", args.output)
        return 1
    _emit(render(payload, columns, config, args.format), args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
