"""Cost-of-capital risk premium.

The market-consistent price of a defaulted portfolio is its best-estimate value
``Y(0)`` (recoveries discounted at the risk-free rate) less a risk margin, the
discounted cost of holding economic capital over the run-off. The premium
``delta`` is the spread over the risk-free rate at which the recoveries are
worth exactly that price. Capital itself depends on ``delta`` through the loss
distribution, so the premium is found by fixed-point iteration: hold capital
at the current ``delta``, solve for the price-matching spread, repeat.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .capital import EcVector
from .cashflow import DefaultedPortfolio, DiscountRate, discount_factors, loss_array, loss_summary
from .errors import McpNonPositive, NoRootInBracket, NotConverged

log = logging.getLogger(__name__)

INNER_XTOL = 1e-13


@dataclass(frozen=True)
class SolverConfig:
    coc_rate: float = 0.07
    risk_free: float = 0.0
    tolerance: float = 1e-4
    max_iterations: int = 100
    initial_delta: float = 0.05
    delta_upper_bound: float = 5.0
    verify: bool = True

    def __post_init__(self):
        if not 0 <= self.coc_rate <= 1:
            raise ValueError(f"coc_rate must lie in [0, 1], got {self.coc_rate}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not 0 <= self.initial_delta <= self.delta_upper_bound:
            raise ValueError("need 0 <= initial_delta <= delta_upper_bound")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class Iteration:
    delta_in: float
    risk_margin: float
    delta_out: float
    residual: float
    verification: bool = False


@dataclass
class CocSolution:
    delta: float
    risk_free: float
    risk_margin: float
    bepv: float
    ec: EcVector
    iterations: list[Iteration] = field(default_factory=list)
    converged: bool = True

    @property
    def discount_rate(self) -> DiscountRate:
        return DiscountRate(self.risk_free, self.delta)

    @property
    def r_d(self) -> float:
        return self.risk_free + self.delta

    @property
    def mcp(self) -> float:
        return self.bepv - self.risk_margin

    @property
    def ec_to_mcp(self) -> float:
        """Capital at the start of the run-off relative to the market-consistent price."""
        return self.ec.initial / self.mcp


def risk_margin(ec: EcVector, coc_rate: float, risk_free: float) -> float:
    """Discounted cost of holding ``ec`` at annual cost-of-capital rate ``coc_rate``.

    Period ``t`` costs ``coc_rate * period_years * C_t``, paid at its end.
    """
    n = len(ec.amounts)
    if n == 0 or coc_rate == 0:
        return 0.0
    t_years = np.arange(1, n + 1) * ec.period_years
    v = np.power(1.0 + risk_free, -t_years)
    return float(coc_rate * ec.period_years * np.dot(ec.amounts, v))


def discounted_recoveries(flows, delta: float, risk_free: float) -> float:
    """Present value of ``flows[t]`` (``t`` months after default) at annual rate ``risk_free + delta``."""
    flows = np.asarray(flows, dtype=float)
    return float(np.dot(flows, discount_factors(risk_free + delta, np.arange(len(flows)))))


def _price_matching_delta(flows, target, risk_free, upper, bepv):
    """Spread ``delta >= 0`` with ``Y(delta) == target``; ``Y`` is decreasing in ``delta``."""
    if target <= 0:
        raise McpNonPositive(f"market-consistent price {target:.6g} is not positive")
    if target >= bepv:
        return 0.0
    if discounted_recoveries(flows, upper, risk_free) > target:
        raise NoRootInBracket(
            f"price {target:.6g} not reached for delta <= {upper} "
            f"(Y(upper) = {discounted_recoveries(flows, upper, risk_free):.6g})"
        )
    return brentq(lambda d: discounted_recoveries(flows, d, risk_free) - target,
                  0.0, upper, xtol=INNER_XTOL, rtol=4 * np.finfo(float).eps, maxiter=500)


def solve_delta(flows, config: SolverConfig, ec_provider: Callable[[float], EcVector]) -> CocSolution:
    """Fixed-point search for the cost-of-capital premium.

    ``flows`` are portfolio recoveries by months since default (a
    :class:`DefaultedPortfolio` is accepted too). Each outer step computes
    capital at the current premium, its risk margin, and then the premium at
    which discounted recoveries equal ``Y(0)`` less that margin. Iteration stops
    once successive premiums differ by at most ``config.tolerance``; with
    ``config.verify`` one further step is taken and its result returned.
    """
    if isinstance(flows, DefaultedPortfolio):
        flows = flows.recovery_flows
    flows = np.asarray(flows, dtype=float)
    rf = config.risk_free
    bepv = discounted_recoveries(flows, 0.0, rf)
    if not bepv > 0:
        raise McpNonPositive(f"best-estimate value {bepv:.6g} is not positive")

    def step(delta_in, verification=False):
        ec = ec_provider(delta_in)
        rm = risk_margin(ec, config.coc_rate, rf)
        delta_out = _price_matching_delta(flows, bepv - rm, rf, config.delta_upper_bound, bepv)
        it = Iteration(delta_in, rm, delta_out, abs(delta_in - delta_out), verification)
        log.debug("delta %.10f -> %.10f (R=%.6g)", delta_in, delta_out, rm)
        return it, ec

    trace: list[Iteration] = []
    delta = config.initial_delta
    for _ in range(config.max_iterations):
        it, ec = step(delta)
        trace.append(it)
        delta = it.delta_out
        if it.residual <= config.tolerance:
            break
    else:
        raise NotConverged(
            f"no convergence within {config.max_iterations} iterations "
            f"(last change {trace[-1].residual:.3g})", trace,
        )
    if config.verify:
        it, ec = step(delta, verification=True)
        trace.append(it)
        delta = it.delta_out
    # capital and margin consistent with the returned premium
    ec = ec_provider(delta)
    rm = risk_margin(ec, config.coc_rate, rf)
    return CocSolution(delta, rf, rm, bepv, ec, trace, True)


def objective(flows, delta: float, config: SolverConfig, ec_provider) -> float:
    """Squared gap between market-consistent price and discounted recoveries, capital at ``delta``."""
    flows = np.asarray(flows, dtype=float)
    rf = config.risk_free
    bepv = discounted_recoveries(flows, 0.0, rf)
    rm = risk_margin(ec_provider(delta), config.coc_rate, rf)
    return (bepv - rm - discounted_recoveries(flows, delta, rf)) ** 2


def fixed_point_gap(solution: CocSolution, flows) -> float:
    """``|Y(delta) - (Y(0) - R)| / Y(0)`` at the solution."""
    y = discounted_recoveries(flows, solution.delta, solution.risk_free)
    return abs(y - solution.mcp) / solution.bepv


def implied_lgd_at_solution(portfolio: DefaultedPortfolio, solution: CocSolution,
                            writeoffs_only: bool = False) -> tuple[float, float]:
    """Mean and sample standard deviation of workout losses at the solved rate."""
    return loss_summary(loss_array(portfolio, solution.discount_rate, writeoffs_only))
