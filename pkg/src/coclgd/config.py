"""Run configuration, read from a flat JSON object.

Keys (all optional)::

    coc_rate            annual cost-of-capital rate for single solves (0.07)
    coc_grid            list of cost-of-capital rates for reports ([0.06, 0.07, 0.08])
    risk_free           annual risk-free rate (0.0)
    tolerance           outer fixed-point tolerance on delta (1e-4)
    max_iterations      outer iteration cap (100)
    initial_delta       starting premium (0.05)
    delta_upper_bound   upper end of the premium bracket (5.0)
    pd                  default probability in the capital model (1.0)
    asset_correlation   single-factor correlation (0.15)
    confidence          capital confidence level (0.999)
    ec_mode             "monthly" | "annual" ("monthly")
    ec_basis            "exposure" | "recoveries" ("exposure")
    quadrature          "tanh-sinh" | "gauss5" ("tanh-sinh")
    writeoffs_only      fit the loss distribution to write-offs only (false)
    periods             list of {"name", "risk_free", "first_default_month", "last_default_month"}
    baseline            inputs for benchmark rates, see coclgd.scenarios.baseline_rates
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .capital import EC_BASES, EC_MODES, TascheParams
from .quadrature import RULES
from .solver import SolverConfig


@dataclass(frozen=True)
class PeriodSpec:
    name: str
    risk_free: float
    first_default_month: int | None = None
    last_default_month: int | None = None


@dataclass(frozen=True)
class RunConfig:
    coc_rate: float = 0.07
    coc_grid: tuple = (0.06, 0.07, 0.08)
    risk_free: float = 0.0
    tolerance: float = 1e-4
    max_iterations: int = 100
    initial_delta: float = 0.05
    delta_upper_bound: float = 5.0
    pd: float = 1.0
    asset_correlation: float = 0.15
    confidence: float = 0.999
    ec_mode: str = "monthly"
    ec_basis: str = "exposure"
    quadrature: str = "tanh-sinh"
    writeoffs_only: bool = False
    periods: tuple = ()
    baseline: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.ec_mode not in EC_MODES:
            raise ValueError(f"ec_mode must be one of {EC_MODES}")
        if self.ec_basis not in EC_BASES:
            raise ValueError(f"ec_basis must be one of {EC_BASES}")
        if self.quadrature not in RULES:
            raise ValueError(f"quadrature must be one of {sorted(RULES)}")
        object.__setattr__(self, "coc_grid", tuple(float(c) for c in self.coc_grid))
        object.__setattr__(self, "periods", tuple(
            p if isinstance(p, PeriodSpec) else PeriodSpec(**p) for p in self.periods
        ))

    def solver_config(self, coc_rate: float | None = None, risk_free: float | None = None) -> SolverConfig:
        return SolverConfig(
            coc_rate=self.coc_rate if coc_rate is None else coc_rate,
            risk_free=self.risk_free if risk_free is None else risk_free,
            tolerance=self.tolerance,
            max_iterations=self.max_iterations,
            initial_delta=self.initial_delta,
            delta_upper_bound=self.delta_upper_bound,
        )

    def tasche_params(self) -> TascheParams:
        return TascheParams(self.pd, self.asset_correlation, self.confidence)

    def period_specs(self) -> tuple[PeriodSpec, ...]:
        return self.periods or (PeriodSpec("full", self.risk_free),)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["coc_grid"] = list(self.coc_grid)
        d["periods"] = [asdict(p) for p in self.periods]
        return d

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def load_config(path=None, **overrides) -> RunConfig:
    data = {}
    if path is not None:
        data = json.loads(Path(path).read_text())
        if not isinstance(data, dict):
            raise ValueError(f"{path}: config must be a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"unknown config keys: {unknown}")
    return RunConfig(**data)
