"""Classical discount-rate methods used as benchmarks.

Contract rate, return on defaulted debt (RODD), CAPM return on equity (ROE),
its defaulted-debt-beta variant (ME) and the capital-ratio weighted WACC blend.
All rates are annual fractions.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DegenerateDenominator,
    DegenerateSeries,
    DegenerateSeriesWarning,
    EmptySample,
    NegativeRateWarning,
    SchemaError,
    UnknownGrade,
)

# Basel asset correlation for retail residential mortgages
RETAIL_MORTGAGE_CORRELATION = 0.15


@dataclass(frozen=True)
class ContractRateSpec:
    base_rate: float
    margin: float
    grade_factors: Mapping[str, float] = field(default_factory=dict)


def contract_rate(spec: ContractRateSpec, grade: str) -> float:
    try:
        factor = spec.grade_factors[grade]
    except KeyError:
        raise UnknownGrade(f"grade {grade!r} not in {sorted(spec.grade_factors)}") from None
    return spec.base_rate + spec.margin + factor


@dataclass(frozen=True)
class BondPricePair:
    price_at_default: float
    price_at_resolution: float
    span_months: int

    def __post_init__(self):
        if not (self.price_at_default > 0 and self.price_at_resolution > 0):
            raise ValueError("bond prices must be strictly positive")
        if self.span_months < 1:
            raise ValueError("resolution span must be at least one month")

    @property
    def monthly_return(self) -> float:
        return (self.price_at_resolution / self.price_at_default) ** (1.0 / self.span_months) - 1.0

    @property
    def annual_return(self) -> float:
        return (1.0 + self.monthly_return) ** 12 - 1.0


def rodd_rate(pairs: Sequence[BondPricePair]) -> float:
    """Sample mean of annualised realised returns on defaulted bonds.

    A negative mean is returned unchanged, with a :class:`NegativeRateWarning`.
    """
    if not pairs:
        raise EmptySample("RODD needs at least one bond price pair")
    rate = float(np.mean([p.annual_return for p in pairs]))
    if rate < 0:
        warnings.warn(f"RODD rate is negative ({rate:.4%})", NegativeRateWarning, stacklevel=2)
    return rate


@dataclass(frozen=True)
class CapmInputs:
    """Either aligned return series, or the correlation and volatilities directly."""

    market_returns: Sequence[float] | None = None
    instrument_returns: Sequence[float] | None = None
    correlation: float | None = None
    sigma_instrument: float | None = None
    sigma_market: float | None = None


def capm_beta(inputs: CapmInputs) -> float:
    """Market beta as correlation times the volatility ratio (n - 1 statistics).

    A constant instrument series has undefined correlation; beta is then taken
    as zero and a :class:`DegenerateSeriesWarning` is issued.
    """
    if inputs.market_returns is not None:
        rm = np.asarray(inputs.market_returns, dtype=float)
        re = np.asarray(inputs.instrument_returns, dtype=float)
        if rm.shape != re.shape or rm.ndim != 1:
            raise DegenerateSeries("return series must be one-dimensional and aligned")
        if rm.size < 2:
            raise DegenerateSeries("need at least two return observations")
        s_m = rm.std(ddof=1)
        s_e = re.std(ddof=1)
        if s_m == 0:
            raise DegenerateSeries("market return series has zero variance")
        if s_e == 0:
            warnings.warn("instrument returns are constant; beta set to 0",
                          DegenerateSeriesWarning, stacklevel=2)
            return 0.0
        kappa = float(np.corrcoef(rm, re)[0, 1])
        return kappa * s_e / s_m
    if None in (inputs.correlation, inputs.sigma_instrument, inputs.sigma_market):
        raise DegenerateSeries("CAPM inputs need either both series or correlation and both sigmas")
    if not inputs.sigma_market > 0:
        raise DegenerateSeries("market volatility must be positive")
    return inputs.correlation * inputs.sigma_instrument / inputs.sigma_market


def roe_rate(risk_free: float, beta: float, expected_market_return: float) -> float:
    return risk_free + beta * (expected_market_return - risk_free)


def me_beta(kappa: float, sigma_i: float, sigma_market: float) -> float:
    """Defaulted-debt beta: square root of the asset correlation times the volatility ratio."""
    if not 0 <= kappa <= 1:
        raise ValueError(f"asset correlation must lie in [0, 1], got {kappa}")
    if not sigma_market > 0:
        raise DegenerateSeries("market volatility must be positive")
    return math.sqrt(kappa) * sigma_i / sigma_market


@dataclass(frozen=True)
class WaccInputs:
    expected_downturn_lgd: float
    expected_lgd: float
    expected_equity_return: float
    expected_debt_cost: float


def capital_ratio(w: WaccInputs) -> float:
    denom = 1.0 - w.expected_lgd
    if denom == 0:
        raise DegenerateDenominator("expected LGD of 1 leaves no remaining loan value")
    return (w.expected_downturn_lgd - w.expected_lgd) / denom


def wacc_rate(w: WaccInputs) -> float:
    e = capital_ratio(w)
    return e * w.expected_equity_return + (1.0 - e) * w.expected_debt_cost


def read_bond_pairs(path) -> list[BondPricePair]:
    """CSV with columns ``price_at_default, price_at_resolution, span_months``."""
    cols = ("price_at_default", "price_at_resolution", "span_months")
    path = Path(path)
    out = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != cols:
            raise SchemaError(f"{path}: expected columns {cols}, got {reader.fieldnames}")
        for lineno, row in enumerate(reader, start=2):
            try:
                out.append(BondPricePair(float(row[cols[0]]), float(row[cols[1]]), int(row[cols[2]])))
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from exc
    return out


def read_return_series(path) -> CapmInputs:
    """CSV with columns ``date, market_return, instrument_return``."""
    cols = ("date", "market_return", "instrument_return")
    path = Path(path)
    rm, re = [], []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != cols:
            raise SchemaError(f"{path}: expected columns {cols}, got {reader.fieldnames}")
        for lineno, row in enumerate(reader, start=2):
            try:
                rm.append(float(row["market_return"]))
                re.append(float(row["instrument_return"]))
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from exc
    return CapmInputs(market_returns=rm, instrument_returns=re)
