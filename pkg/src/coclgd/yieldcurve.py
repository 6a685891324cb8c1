"""Risk-free rate from a dated bond yield curve.

Each day's rate is read off the curve at the target tenor by linear
interpolation between the two bracketing tenors (flat beyond the ends), and the
daily rates are averaged arithmetically over a reference period.
"""
from __future__ import annotations

import bisect
import csv
import datetime as dt
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NoCurveData, SchemaError

LOOKBACK_DAYS = 7
CURVE_COLUMNS = ("date", "tenor_months", "yield")


@dataclass(frozen=True)
class ReferencePeriod:
    start: dt.date
    end: dt.date
    target_tenor: float

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"reference period start {self.start} is after end {self.end}")


class YieldCurve:
    """Tenor/yield observations keyed by date."""

    def __init__(self, observations):
        by_date: dict[dt.date, list[tuple[float, float]]] = {}
        for date, tenor, rate in observations:
            if not np.isfinite(rate):
                raise ValueError(f"{date}: non-finite yield {rate}")
            by_date.setdefault(date, []).append((float(tenor), float(rate)))
        self._dates = sorted(by_date)
        self._curves = {}
        for date in self._dates:
            pts = sorted(by_date[date])
            tenors = np.array([p[0] for p in pts])
            if len(tenors) < 2:
                raise ValueError(f"{date}: need at least two tenors, got {len(tenors)}")
            if np.any(np.diff(tenors) <= 0):
                raise ValueError(f"{date}: duplicate tenor")
            self._curves[date] = (tenors, np.array([p[1] for p in pts]))

    @property
    def dates(self) -> list[dt.date]:
        return list(self._dates)

    def on(self, date: dt.date) -> tuple[np.ndarray, np.ndarray]:
        """Curve for ``date``, falling back to the latest prior date within the lookback window."""
        if date in self._curves:
            return self._curves[date]
        idx = bisect.bisect_left(self._dates, date) - 1
        if idx >= 0:
            prior = self._dates[idx]
            if (date - prior).days <= LOOKBACK_DAYS:
                return self._curves[prior]
        raise NoCurveData(f"no curve observation within {LOOKBACK_DAYS} days before {date}")

    @classmethod
    def from_csv(cls, path) -> "YieldCurve":
        path = Path(path)
        obs = []
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            if tuple(reader.fieldnames or ()) != CURVE_COLUMNS:
                raise SchemaError(f"{path}: expected columns {CURVE_COLUMNS}, got {reader.fieldnames}")
            for lineno, row in enumerate(reader, start=2):
                try:
                    obs.append((
                        dt.date.fromisoformat(row["date"]),
                        int(row["tenor_months"]),
                        float(row["yield"]),
                    ))
                except ValueError as exc:
                    raise SchemaError(f"{path}:{lineno}: {exc}") from exc
        return cls(obs)


def interpolate_rate(curve: YieldCurve, date: dt.date, target_tenor: float) -> float:
    tenors, rates = curve.on(date)
    # np.interp clamps to the end values outside the tenor range
    return float(np.interp(target_tenor, tenors, rates))


def mean_risk_free(curve: YieldCurve, period: ReferencePeriod) -> float:
    days = [d for d in curve.dates if period.start <= d <= period.end]
    if not days:
        raise NoCurveData(f"no curve dates between {period.start} and {period.end}")
    return float(np.mean([interpolate_rate(curve, d, period.target_tenor) for d in days]))
