"""Scenario matrix: one premium solve per (portfolio, period, cost-of-capital rate)."""
from __future__ import annotations

import datetime as dt
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

from .baselines import (
    BondPricePair,
    CapmInputs,
    ContractRateSpec,
    WaccInputs,
    capm_beta,
    contract_rate,
    me_beta,
    read_bond_pairs,
    read_return_series,
    rodd_rate,
    roe_rate,
    wacc_rate,
)
from .capital import TascheEcProvider
from .cashflow import DefaultedPortfolio
from .config import PeriodSpec, RunConfig
from .errors import CocLgdError
from .report import BaselineRow, RunReport, ScenarioRow
from .solver import implied_lgd_at_solution, solve_delta


def _solve_one(portfolio: DefaultedPortfolio, period: PeriodSpec, coc: float, cfg: RunConfig) -> ScenarioRow:
    sub = portfolio.select(period.first_default_month, period.last_default_month)
    base = ScenarioRow(portfolio.name, period.name, coc, period.risk_free,
                       n_resolved=len(sub.resolved), n_censored=sub.censored_count)
    provider = TascheEcProvider(sub, cfg.tasche_params(), period.risk_free, cfg.ec_mode,
                                cfg.writeoffs_only, cfg.quadrature, cfg.ec_basis)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            sol = solve_delta(sub, cfg.solver_config(coc, period.risk_free), provider)
            mean, std = implied_lgd_at_solution(sub, sol, cfg.writeoffs_only)
    except (CocLgdError, ValueError) as exc:
        return replace(base, status=type(exc).__name__, message=str(exc))
    return replace(base, r_d=sol.r_d, delta=sol.delta, ec_to_mcp=sol.ec_to_mcp, mean_loss=mean,
                   std_loss=std, iterations=len(sol.iterations))


def run_scenarios(portfolios, config: RunConfig, max_workers: int = 1) -> RunReport:
    """Solve every (portfolio, period, c) combination.

    Failures are recorded in their row; the rest of the matrix still runs.
    Rows come back sorted by portfolio, period and ``c`` regardless of the
    order in which worker threads finish.
    """
    if isinstance(portfolios, DefaultedPortfolio):
        portfolios = [portfolios]
    jobs = [(p, period, c) for p in portfolios for period in config.period_specs() for c in config.coc_grid]
    if max_workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers) as pool:
            rows = list(pool.map(lambda j: _solve_one(*j, config), jobs))
    else:
        rows = [_solve_one(*j, config) for j in jobs]
    rows.sort(key=lambda r: (r.portfolio, r.period, r.coc_rate))
    report = RunReport(rows=rows, metadata={
        "config_digest": config.digest(),
        "portfolios": [p.name for p in portfolios],
        "censored": {p.name: p.censored_count for p in portfolios},
        "compounding": "monthly-effective",
    })
    if config.baseline:
        report.baselines = baseline_rates(config.baseline, config.risk_free)
    return report


def _capm(spec: dict) -> float:
    if "beta" in spec:
        return float(spec["beta"])
    if "returns_csv" in spec:
        return capm_beta(read_return_series(spec["returns_csv"]))
    return capm_beta(CapmInputs(
        market_returns=spec.get("market_returns"), instrument_returns=spec.get("instrument_returns"),
        correlation=spec.get("correlation"), sigma_instrument=spec.get("sigma_instrument"),
        sigma_market=spec.get("sigma_market"),
    ))


def _rodd(spec: dict) -> float:
    if "pairs_csv" in spec:
        pairs = read_bond_pairs(spec["pairs_csv"])
    else:
        pairs = [BondPricePair(float(a), float(b), int(n)) for a, b, n in spec.get("pairs", [])]
    return rodd_rate(pairs)


def _roe(spec: dict, risk_free: float) -> float:
    return roe_rate(spec.get("risk_free", risk_free), _capm(spec), spec["expected_market_return"])


def _me(spec: dict, risk_free: float) -> float:
    beta = me_beta(spec.get("kappa", 0.15), spec["sigma_instrument"], spec["sigma_market"])
    return roe_rate(spec.get("risk_free", risk_free), beta, spec["expected_market_return"])


def _contract(spec: dict) -> float:
    rs = ContractRateSpec(spec["base_rate"], spec["margin"], spec.get("grade_factors", {}))
    return contract_rate(rs, spec["grade"])


def _wacc(spec: dict, risk_free: float, done: dict) -> float:
    equity = spec.get("expected_equity_return", done.get("roe"))
    if equity is None or (isinstance(equity, float) and math.isnan(equity)):
        raise ValueError("wacc needs expected_equity_return or a roe baseline")
    return wacc_rate(WaccInputs(spec["expected_downturn_lgd"], spec["expected_lgd"], equity,
                                spec.get("expected_debt_cost", risk_free)))


BASELINE_METHODS = ("contract", "rodd", "roe", "me", "wacc")


def baseline_rates(spec: dict, risk_free: float) -> list[BaselineRow]:
    """Benchmark discount rates for the methods present in ``spec``.

    ``spec`` maps method name to its inputs, for example::

        {"contract": {"base_rate": .., "margin": .., "grade_factors": {"A": ..}, "grade": "A"},
         "rodd": {"pairs": [[p_default, p_resolution, months], ...]} or {"pairs_csv": path},
         "roe": {"expected_market_return": .., "beta": ..} (or series / correlation and sigmas),
         "me": {"kappa": .., "sigma_instrument": .., "sigma_market": .., "expected_market_return": ..},
         "wacc": {"expected_downturn_lgd": .., "expected_lgd": .., "expected_debt_cost": ..}}

    WACC takes its equity return from the ROE row unless given explicitly.
    Failures and warnings are reported in the row flag.
    """
    unknown = sorted(set(spec) - set(BASELINE_METHODS))
    if unknown:
        raise ValueError(f"unknown baseline methods {unknown}; expected {BASELINE_METHODS}")
    rows, done = [], {}
    for method in BASELINE_METHODS:
        if method not in spec:
            continue
        inputs = spec[method]
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                if method == "contract":
                    rate = _contract(inputs)
                elif method == "rodd":
                    rate = _rodd(inputs)
                elif method == "roe":
                    rate = _roe(inputs, risk_free)
                elif method == "me":
                    rate = _me(inputs, risk_free)
                else:
                    rate = _wacc(inputs, risk_free, done)
                flag = "; ".join(str(w.message) for w in caught)
            except (CocLgdError, ValueError, KeyError, TypeError, OSError) as exc:
                rate, flag = math.nan, f"{type(exc).__name__}: {exc}"
        done[method] = rate
        rows.append(BaselineRow(method, float(rate), flag))
    return rows


def timestamp() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")
