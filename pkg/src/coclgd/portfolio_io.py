"""CSV storage for defaulted portfolios.

A portfolio is a pair of files::

    loans.csv   loan_id,default_month,resolution_month,balance_at_default,outcome
    flows.csv   loan_id,month,net_cash_flow

Both may start with a ``# coclgd-portfolio v1`` tag line. Floats are written
with ``repr`` so a write/read cycle is lossless.
"""
from __future__ import annotations

import csv
from pathlib import Path

from .cashflow import CashFlowSeries, DefaultedPortfolio, Outcome
from .errors import BalanceNotPositive, IntegrityError, SchemaError

SCHEMA_VERSION = 1
SCHEMA_TAG = f"# coclgd-portfolio v{SCHEMA_VERSION}"
LOAN_COLUMNS = ("loan_id", "default_month", "resolution_month", "balance_at_default", "outcome")
FLOW_COLUMNS = ("loan_id", "month", "net_cash_flow")


def _rows(path: Path, columns):
    """Yield ``(line_number, row)`` after checking the tag and header."""
    with path.open(newline="") as fh:
        lines = fh.read().splitlines()
    start = 0
    while start < len(lines) and lines[start].startswith("#"):
        tag = lines[start].strip()
        if tag.startswith("# coclgd-portfolio") and tag != SCHEMA_TAG:
            raise SchemaError(f"{path}:{start + 1}: unsupported schema tag {tag!r}")
        start += 1
    reader = csv.reader(lines[start:])
    header = next(reader, None)
    if header is None:
        raise SchemaError(f"{path}: missing header")
    header = tuple(h.strip() for h in header)
    if header != columns:
        missing = [c for c in columns if c not in header]
        extra = [c for c in header if c not in columns]
        raise SchemaError(
            f"{path}:{start + 1}: expected columns {columns}; missing {missing}, extra {extra}"
        )
    for offset, row in enumerate(reader):
        lineno = start + 2 + offset
        if not row:
            continue
        if len(row) != len(columns):
            raise SchemaError(f"{path}:{lineno}: expected {len(columns)} fields, got {len(row)}")
        yield lineno, dict(zip(columns, (v.strip() for v in row)))


def _month(path, lineno, field, text):
    try:
        value = int(text)
    except ValueError:
        raise SchemaError(f"{path}:{lineno}: field {field!r}: not an integer month: {text!r}") from None
    if value < 0:
        raise SchemaError(f"{path}:{lineno}: field {field!r}: month must be non-negative, got {value}")
    return value


def _float(path, lineno, field, text):
    try:
        return float(text)
    except ValueError:
        raise SchemaError(f"{path}:{lineno}: field {field!r}: not a number: {text!r}") from None


def ingest(loans_path, flows_path, name: str | None = None) -> DefaultedPortfolio:
    loans_path, flows_path = Path(loans_path), Path(flows_path)
    headers = {}
    for lineno, row in _rows(loans_path, LOAN_COLUMNS):
        loan_id = row["loan_id"]
        if not loan_id:
            raise SchemaError(f"{loans_path}:{lineno}: field 'loan_id' is empty")
        if loan_id in headers:
            raise IntegrityError(f"{loans_path}:{lineno}: field 'loan_id': duplicate {loan_id!r}")
        balance = _float(loans_path, lineno, "balance_at_default", row["balance_at_default"])
        if not balance > 0:
            raise BalanceNotPositive(
                f"{loans_path}:{lineno}: field 'balance_at_default' must be > 0 "
                f"(the realised loss divides by it), got {balance}"
            )
        try:
            outcome = Outcome(row["outcome"])
        except ValueError:
            raise SchemaError(
                f"{loans_path}:{lineno}: field 'outcome': {row['outcome']!r} not in "
                f"{[o.value for o in Outcome]}"
            ) from None
        td = _month(loans_path, lineno, "default_month", row["default_month"])
        tr = _month(loans_path, lineno, "resolution_month", row["resolution_month"])
        if tr < td:
            raise IntegrityError(
                f"{loans_path}:{lineno}: field 'resolution_month' {tr} precedes default month {td}"
            )
        headers[loan_id] = (td, tr, balance, outcome)

    flows: dict[str, list[tuple[int, float]]] = {k: [] for k in headers}
    for lineno, row in _rows(flows_path, FLOW_COLUMNS):
        loan_id = row["loan_id"]
        if loan_id not in headers:
            raise IntegrityError(f"{flows_path}:{lineno}: field 'loan_id': unknown loan {loan_id!r}")
        month = _month(flows_path, lineno, "month", row["month"])
        td, tr = headers[loan_id][:2]
        if not td <= month <= tr:
            raise IntegrityError(
                f"{flows_path}:{lineno}: field 'month': {month} outside workout [{td}, {tr}] of {loan_id!r}"
            )
        flows[loan_id].append((month, _float(flows_path, lineno, "net_cash_flow", row["net_cash_flow"])))

    loans = [
        CashFlowSeries(loan_id, td, tr, balance, tuple(flows[loan_id]), outcome)
        for loan_id, (td, tr, balance, outcome) in headers.items()
    ]
    return DefaultedPortfolio(loans, name=name or loans_path.stem)


def write_portfolio(portfolio: DefaultedPortfolio, directory, prefix: str = "") -> tuple[Path, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    loans_path = directory / f"{prefix}loans.csv"
    flows_path = directory / f"{prefix}flows.csv"
    with loans_path.open("w", newline="") as fh:
        fh.write(SCHEMA_TAG + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LOAN_COLUMNS)
        for s in portfolio.loans:
            w.writerow([s.loan_id, s.default_month, s.resolution_month, repr(s.balance), s.outcome.value])
    with flows_path.open("w", newline="") as fh:
        fh.write(SCHEMA_TAG + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FLOW_COLUMNS)
        for s in portfolio.loans:
            for month, amount in s.flows:
                w.writerow([s.loan_id, month, repr(amount)])
    return loans_path, flows_path
