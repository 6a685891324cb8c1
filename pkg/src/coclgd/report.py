"""Scenario report rows and their CSV / text renderings."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

FORMATS = ("csv", "table")


@dataclass(frozen=True)
class ScenarioRow:
    portfolio: str
    period: str
    coc_rate: float
    risk_free: float
    r_d: float = math.nan
    delta: float = math.nan
    ec_to_mcp: float = math.nan
    mean_loss: float = math.nan
    std_loss: float = math.nan
    iterations: int = 0
    n_resolved: int = 0
    n_censored: int = 0
    status: str = "ok"
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class BaselineRow:
    method: str
    rate: float
    flag: str = ""


@dataclass
class RunReport:
    rows: list[ScenarioRow] = field(default_factory=list)
    baselines: list[BaselineRow] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)


ROW_COLUMNS = tuple(f.name for f in fields(ScenarioRow))
_INT_COLUMNS = {"iterations", "n_resolved", "n_censored"}
_STR_COLUMNS = {"portfolio", "period", "status", "message"}
LONG_METRICS = ("coc_rate", "risk_free", "r_d", "delta", "ec_to_mcp", "mean_loss", "std_loss")


def _cell(value):
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


def report_csv_text(report: RunReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ROW_COLUMNS)
    for row in report.rows:
        w.writerow([_cell(getattr(row, c)) for c in ROW_COLUMNS])
    return buf.getvalue()


def write_report_csv(report: RunReport, path) -> Path:
    path = Path(path)
    path.write_text(report_csv_text(report))
    return path


def read_report_csv(path) -> list[ScenarioRow]:
    path = Path(path)
    out = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != ROW_COLUMNS:
            raise ValueError(f"{path}: not a scenario report")
        for rec in reader:
            kw = {}
            for c in ROW_COLUMNS:
                text = rec[c]
                if c in _STR_COLUMNS:
                    kw[c] = text
                elif c in _INT_COLUMNS:
                    kw[c] = int(text)
                else:
                    kw[c] = float(text) if text else math.nan
            out.append(ScenarioRow(**kw))
    return out


def write_long_csv(report: RunReport, path) -> Path:
    """One ``scenario, metric, value`` record per number, for external charting."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("scenario", "metric", "value"))
        for row in report.rows:
            scenario = f"{row.portfolio}/{row.period}/c={row.coc_rate:g}"
            for metric in LONG_METRICS:
                w.writerow((scenario, metric, _cell(getattr(row, metric))))
    return path


def write_baselines_csv(report: RunReport, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("method", "rate", "flag"))
        for b in report.baselines:
            w.writerow((b.method, _cell(b.rate), b.flag))
    return path


def pct(x: float) -> str:
    return "" if math.isnan(x) else f"{100 * x:.2f}%"


def _num(x: float, digits: int = 3) -> str:
    return "" if math.isnan(x) else f"{x:.{digits}f}"


def render_table(report: RunReport) -> str:
    header = ("portfolio", "period", "c", "r_f", "r_d", "delta", "EC/MCP", "L_bar", "sigma", "status")
    body = []
    for r in report.rows:
        body.append((r.portfolio, r.period, pct(r.coc_rate), pct(r.risk_free), pct(r.r_d), pct(r.delta),
                     _num(r.ec_to_mcp), _num(r.mean_loss), _num(r.std_loss),
                     r.status if r.ok else f"{r.status}: {r.message}"))
    lines = _align([header, *body])
    if report.baselines:
        lines.append("")
        lines.extend(_align([("method", "rate", "flag"),
                             *((b.method, pct(b.rate), b.flag) for b in report.baselines)]))
    return "\n".join(lines) + "\n"


def _align(table):
    widths = [max(len(str(row[i])) for row in table) for i in range(len(table[0]))]
    out = []
    for row in table:
        cells = [str(v).ljust(w) if i < 2 else str(v).rjust(w) for i, (v, w) in enumerate(zip(row, widths))]
        out.append("  ".join(cells).rstrip())
    return out


def emit(report: RunReport, out_dir, formats=("csv",)) -> list[Path]:
    """Write the report in each requested format; returns the files written."""
    bad = [f for f in formats if f not in FORMATS]
    if bad:
        raise ValueError(f"unknown report format(s) {bad}; choose from {FORMATS}")
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        if "csv" in formats:
            written.append(write_report_csv(report, out_dir / "report.csv"))
            written.append(write_long_csv(report, out_dir / "report_long.csv"))
            if report.baselines:
                written.append(write_baselines_csv(report, out_dir / "baselines.csv"))
        if "table" in formats:
            path = out_dir / "report.txt"
            path.write_text(render_table(report))
            written.append(path)
        if report.metadata:
            path = out_dir / "report_meta.json"
            path.write_text(json.dumps(report.metadata, indent=2, sort_keys=True) + "\n")
            written.append(path)
    except OSError as exc:
        raise OSError(f"writing report to {out_dir}: {exc}") from exc
    return written


def row_dict(row: ScenarioRow) -> dict:
    return asdict(row)
