"""Command-line interface.

    coclgd synth --preset pl --n-loans 5000 --seed 1 --out data/pl
    coclgd lgd compute --portfolio data/pl --delta 0.05
    coclgd coc solve --portfolio data/pl --coc-rate 0.07
    coclgd report --portfolio PL=data/pl --portfolio ML=data/ml --out out
    coclgd rates baseline --config run.json
    coclgd riskfree --curve curve.csv --start 2005-10-01 --end 2011-09-30 --tenor 4.67

Exit codes: 0 success, 2 usage or configuration error, 3 data error,
4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import datetime as dt
import io
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .cashflow import DiscountRate, loss_array, loss_summary
from .config import RunConfig, load_config
from .errors import DataError, NumericalError
from .portfolio_io import ingest, write_portfolio
from .report import FORMATS, RunReport, emit, render_table, report_csv_text
from .scenarios import baseline_rates, run_scenarios, timestamp
from .synth import PRESETS, generate_synthetic
from .yieldcurve import ReferencePeriod, YieldCurve, mean_risk_free

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 0, 2, 3, 4

log = logging.getLogger("coclgd")


def _common() -> argparse.ArgumentParser:
    # SUPPRESS so a flag given before the subcommand is not reset by the subparser default
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="JSON run configuration")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="generator seed")
    p.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="output directory")
    p.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS, help="output format")
    return p


def _portfolio_arg(p, multiple=False):
    p.add_argument("--portfolio", required=True, action="append" if multiple else "store",
                   metavar="[NAME=]DIR", help="directory holding loans.csv and flows.csv")


def _load_portfolio(arg: str):
    name, _, path = arg.rpartition("=")
    directory = Path(path)
    return ingest(directory / "loans.csv", directory / "flows.csv", name=name or directory.name)


def _config(args) -> RunConfig:
    overrides = {}
    for key in ("coc_rate", "risk_free", "tolerance", "ec_mode", "ec_basis", "quadrature"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "coc_grid", None) is not None:
        overrides["coc_grid"] = args.coc_grid
    return load_config(getattr(args, "config", None), **overrides)


def _write_text(args, filename: str, text: str):
    out = getattr(args, "out", None)
    if out is None:
        sys.stdout.write(text)
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / filename).write_text(text)
    log.info("wrote %s", out / filename)


def _table(header, rows) -> str:
    widths = [max(len(str(r[i])) for r in (header, *rows)) for i in range(len(header))]
    return "".join("  ".join(str(v).rjust(w) for v, w in zip(r, widths)).rstrip() + "\n"
                   for r in (header, *rows))


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit_rows(args, stem: str, header, rows):
    fmt = getattr(args, "format", "csv")
    if fmt == "table":
        _write_text(args, f"{stem}.txt", _table(header, rows))
    else:
        _write_text(args, f"{stem}.csv", _csv_text(header, rows))


def cmd_synth(args) -> int:
    kw = {}
    if args.censored is not None:
        kw["censored_probability"] = args.censored
    if args.name:
        kw["name"] = args.name
    spec = PRESETS[args.preset](args.n_loans, getattr(args, "seed", 0), **kw)
    portfolio = generate_synthetic(spec)
    out = getattr(args, "out", None) or Path(spec.name.lower())
    loans, flows = write_portfolio(portfolio, out)
    log.info("wrote %s and %s (%d loans)", loans, flows, len(portfolio))
    return EXIT_OK


def cmd_lgd(args) -> int:
    portfolio = _load_portfolio(args.portfolio)
    cfg = _config(args)
    rate = DiscountRate(cfg.risk_free, args.delta)
    losses = loss_array(portfolio, rate)
    rows = [(s.loan_id, s.default_month, repr(float(x))) for s, x in zip(portfolio.resolved, losses)]
    _emit_rows(args, "losses", ("loan_id", "evaluation_month", "loss"), rows)
    mean, std = loss_summary(losses)
    log.info("%d resolved loans (%d censored excluded): mean %.6f, std %.6f",
             len(losses), portfolio.censored_count, mean, std)
    return EXIT_OK


def cmd_coc(args) -> int:
    portfolio = _load_portfolio(args.portfolio)
    cfg = _config(args)
    cfg = replace(cfg, coc_grid=(cfg.coc_rate,), periods=())
    report = run_scenarios([portfolio], cfg)
    report.metadata.update(seed=getattr(args, "seed", None))
    row = report.rows[0]
    _finish(args, report)
    if not row.ok:
        log.error("%s: %s", row.status, row.message)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_report(args) -> int:
    cfg = _config(args)
    portfolios = [_load_portfolio(p) for p in args.portfolio]
    report = run_scenarios(portfolios, cfg, max_workers=args.workers)
    report.metadata.update(seed=getattr(args, "seed", None))
    _finish(args, report)
    return EXIT_OK


def _finish(args, report: RunReport):
    fmt = getattr(args, "format", "csv")
    out = getattr(args, "out", None)
    if out is None:
        if fmt == "table":
            sys.stdout.write(render_table(report))
        else:
            sys.stdout.write(report_csv_text(report))
        return
    report.metadata["timestamp"] = timestamp()
    for path in emit(report, out, (fmt,)):
        log.info("wrote %s", path)


def cmd_baseline(args) -> int:
    cfg = _config(args)
    if not cfg.baseline:
        raise ValueError("configuration has no 'baseline' section")
    rows = baseline_rates(cfg.baseline, cfg.risk_free)
    _emit_rows(args, "baselines", ("method", "rate", "flag"), [(r.method, repr(r.rate), r.flag) for r in rows])
    return EXIT_NUMERICAL if any(r.flag.startswith(("Degenerate", "Empty")) for r in rows) else EXIT_OK


def cmd_riskfree(args) -> int:
    curve = YieldCurve.from_csv(args.curve)
    period = ReferencePeriod(dt.date.fromisoformat(args.start), dt.date.fromisoformat(args.end), args.tenor)
    rate = mean_risk_free(curve, period)
    _emit_rows(args, "riskfree", ("start", "end", "tenor_months", "risk_free"),
               [(args.start, args.end, args.tenor, repr(rate))])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="coclgd", parents=[common],
                                     description="Cost-of-capital discount rates for workout LGD.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic defaulted portfolio")
    p.add_argument("--preset", choices=sorted(PRESETS), default="pl")
    p.add_argument("--n-loans", type=int, default=5000)
    p.add_argument("--censored", type=float, default=None, help="probability a loan is censored")
    p.add_argument("--name", default=None)
    p.set_defaults(func=cmd_synth)

    lgd = sub.add_parser("lgd", help="workout losses").add_subparsers(dest="action", required=True)
    p = lgd.add_parser("compute", parents=[common], help="losses at default at r_f + delta")
    _portfolio_arg(p)
    p.add_argument("--risk-free", type=float, default=None)
    p.add_argument("--delta", type=float, default=0.0)
    p.set_defaults(func=cmd_lgd)

    rates = sub.add_parser("rates", help="benchmark discount rates").add_subparsers(dest="action", required=True)
    p = rates.add_parser("baseline", parents=[common], help="contract, RODD, ROE, ME and WACC rates")
    p.add_argument("--risk-free", type=float, default=None)
    p.set_defaults(func=cmd_baseline)

    coc = sub.add_parser("coc", help="cost-of-capital premium").add_subparsers(dest="action", required=True)
    p = coc.add_parser("solve", parents=[common], help="solve for delta at one cost-of-capital rate")
    _portfolio_arg(p)
    p.add_argument("--coc-rate", type=float, default=None)
    p.add_argument("--risk-free", type=float, default=None)
    p.add_argument("--tolerance", type=float, default=None)
    p.set_defaults(func=cmd_coc)

    p = sub.add_parser("report", parents=[common], help="scenario matrix over c and periods")
    _portfolio_arg(p, multiple=True)
    p.add_argument("--coc-grid", type=float, nargs="*", default=None)
    p.add_argument("--risk-free", type=float, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("riskfree", parents=[common], help="mean risk-free rate from a yield curve")
    p.add_argument("--curve", type=Path, required=True)
    p.add_argument("--start", required=True)
    p.add_argument("--end", required=True)
    p.add_argument("--tenor", type=float, required=True, help="target tenor in months")
    p.set_defaults(func=cmd_riskfree)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except NumericalError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    except (DataError, OSError) as exc:
        log.error("data error: %s", exc)
        return EXIT_DATA
    except (ValueError, TypeError) as exc:
        log.error("usage error: %s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
