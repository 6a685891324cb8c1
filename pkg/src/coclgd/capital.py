"""Economic capital from the single-factor PD/LGD model of Tasche.

Total loss is ``1{W >= Phi^-1(1-p)} * F_D^-1((Phi(W) - 1 + p) / p)`` with
``W = sqrt(k) V + sqrt(1-k) Z`` and ``F_D`` a beta loss-severity distribution.
The unexpected-loss rate is the loss expected with the systematic factor at
its ``alpha`` quantile, less the unconditional expected loss ``p * E[F_D]``.

After substituting ``u = Phi(sqrt(k) q + sqrt(1-k) z)`` and mapping the
severity quantile level onto ``t`` in [-1, 1], the conditional expectation is

    p / (2 sqrt(1-k)) * integral_{-1}^{1} H(t) dt,
    H(t) = phi(z(t)) / phi(x(t)) * F_D^-1((t + 1) / 2),

with ``x(t) = Phi^-1(p (t + 1)/2 + 1 - p)`` and ``z(t) = (x - sqrt(k) q) / sqrt(1-k)``.
The integrand has algebraic singularities at both ends, so the default rule is
tanh-sinh with step halving; the classical five-point Gauss-Legendre rule is
available as ``rule="gauss5"`` and is much less accurate.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import norm

from .betadist import BetaLossFit, beta_inverse_cdf, fit_beta
from .cashflow import MONTHS_PER_YEAR, DefaultedPortfolio, DiscountRate, loss_array, monthly_rate
from .errors import EmptyRecoveries, FlooredLossWarning, NumericalDomain
from .quadrature import QuadratureRule, get_rule, tanh_sinh

DEFAULT_CONFIDENCE = 0.999
EC_MODES = ("monthly", "annual")


@dataclass(frozen=True)
class TascheParams:
    pd: float = 1.0
    asset_correlation: float = 0.15
    confidence: float = DEFAULT_CONFIDENCE
    loss_fit: BetaLossFit | None = None

    def __post_init__(self):
        if not 0 < self.pd <= 1:
            raise ValueError(f"pd must lie in (0, 1], got {self.pd}")
        if not 0 <= self.asset_correlation < 1:
            raise ValueError(f"asset correlation must lie in [0, 1), got {self.asset_correlation}")
        if not 0 < self.confidence < 1:
            raise ValueError(f"confidence must lie in (0, 1), got {self.confidence}")


# step halving for the default tanh-sinh rule: stop once successive sums agree
_TS_STEPS = (1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128)
_TS_RTOL = 1e-12


def _resolve_rule(rule) -> QuadratureRule | None:
    """A fixed rule, or None for step-halving tanh-sinh."""
    if rule is None or rule == "tanh-sinh":
        return None
    if isinstance(rule, str):
        return get_rule(rule)
    return rule


def conditional_loss(params: TascheParams, rule: QuadratureRule | str | None = None) -> float:
    """Expected loss fraction given the systematic factor at its ``confidence`` quantile.

    The default tanh-sinh rule halves its step until two successive sums agree
    to 1e-12 relative. One step is enough for most fits; near-two-point beta
    fits (both shapes well below 1) have a steep interior quantile and need
    finer steps. A ``QuadratureRule`` instance is applied as given.
    """
    if params.loss_fit is None:
        raise ValueError("TascheParams.loss_fit is required")
    fixed = _resolve_rule(rule)
    if fixed is not None:
        return _conditional_loss_sum(params, fixed)
    prev = _conditional_loss_sum(params, tanh_sinh(_TS_STEPS[0]))
    for step in _TS_STEPS[1:]:
        cur = _conditional_loss_sum(params, tanh_sinh(step))
        if abs(cur - prev) <= _TS_RTOL * abs(cur):
            return cur
        prev = cur
    return prev


def _conditional_loss_sum(params: TascheParams, rule: QuadratureRule) -> float:
    p, k = params.pd, params.asset_correlation
    q = norm.ppf(params.confidence)
    sk, s1k = math.sqrt(k), math.sqrt(1.0 - k)

    u = (1.0 - p) + p * rule.one_plus / 2.0
    u_c = p * rule.one_minus / 2.0
    if np.any(u <= 0) or np.any(u_c <= 0):
        raise NumericalDomain("normal quantile argument left (0, 1)")
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = np.where(u < 0.5, norm.ppf(u), norm.isf(u_c))
        z = (x - sk * q) / s1k
        ratio = np.exp(-0.5 * (z - x) * (z + x))
    if not np.all(np.isfinite(ratio)):
        raise NumericalDomain("non-finite density ratio in quadrature")
    severity = beta_inverse_cdf(params.loss_fit, rule.one_plus / 2.0, q_complement=rule.one_minus / 2.0)
    return float(p / (2.0 * s1k) * np.dot(rule.weights, ratio * severity))


def _raw_unexpected_loss(params, rule):
    return conditional_loss(params, rule) - params.pd * params.loss_fit.mean


def unexpected_loss_rate(params: TascheParams, rule: QuadratureRule | str | None = None) -> float:
    """Conditional minus unconditional expected loss, floored at zero."""
    ul = _raw_unexpected_loss(params, rule)
    if ul < 0:
        warnings.warn(f"negative unexpected loss {ul:.3g} floored at 0", FlooredLossWarning, stacklevel=2)
        return 0.0
    return ul


@dataclass(frozen=True)
class EcVector:
    """Capital held over each run-off period ``t = 1..n`` (currency units).

    ``period_years`` is the length of one period; ``basis`` is the exposure the
    unexpected-loss rate was applied to.
    """

    amounts: np.ndarray
    ul_rate: float
    basis: np.ndarray
    period_years: float = 1.0 / MONTHS_PER_YEAR
    floored: bool = False
    loss_fit: BetaLossFit | None = None

    def __len__(self):
        return len(self.amounts)

    @property
    def initial(self) -> float:
        return float(self.amounts[0]) if len(self.amounts) else 0.0


def remaining_recovery_basis(flows, risk_free: float) -> np.ndarray:
    """Risk-free present value, at the start of month ``t``, of recoveries due in months ``t..T``.

    ``flows[s]`` is the recovery ``s`` months after default; the result has
    one entry per month ``t = 1..T``.
    """
    flows = np.asarray(flows, dtype=float)
    n = len(flows) - 1
    v = 1.0 / (1.0 + monthly_rate(risk_free))
    basis = np.zeros(max(n, 0))
    acc = 0.0
    for t in range(n, 0, -1):
        acc = (flows[t] + acc) * v
        basis[t - 1] = acc
    return basis


def exposure_basis(portfolio: DefaultedPortfolio) -> np.ndarray:
    """Balance at default of loans still in workout at the start of month ``t = 1..T``."""
    n = portfolio.max_workout
    workouts = np.array([s.workout_months for s in portfolio.resolved], dtype=int)
    basis = np.zeros(n)
    for t in range(1, n + 1):
        basis[t - 1] = portfolio.balances[workouts >= t].sum()
    return basis


EC_BASES = ("exposure", "recoveries")


def capital_basis(portfolio: DefaultedPortfolio, risk_free: float, basis: str = "exposure") -> np.ndarray:
    if basis == "exposure":
        return exposure_basis(portfolio)
    if basis == "recoveries":
        return remaining_recovery_basis(portfolio.recovery_flows, risk_free)
    raise ValueError(f"ec_basis must be one of {EC_BASES}, got {basis!r}")


def capital_schedule(basis, ul_rate: float, mode: str = "monthly") -> np.ndarray:
    """Monthly capital amounts ``ul_rate * basis``.

    In ``annual`` mode the basis is taken at months 1, 13, 25, ... and held
    for the twelve months that follow.
    """
    if mode not in EC_MODES:
        raise ValueError(f"ec_mode must be one of {EC_MODES}, got {mode!r}")
    basis = np.asarray(basis, dtype=float)
    if mode == "annual":
        starts = (np.arange(len(basis)) // MONTHS_PER_YEAR) * MONTHS_PER_YEAR
        basis = basis[starts]
    return ul_rate * basis


def ec_vector(portfolio: DefaultedPortfolio, delta: float, params: TascheParams, risk_free: float,
              mode: str = "monthly", writeoffs_only: bool = False,
              rule: QuadratureRule | str | None = None, basis: str = "exposure") -> EcVector:
    """Capital vector for a trial premium ``delta``.

    Losses are recomputed at ``risk_free + delta``, a beta distribution is
    moment-matched to them, and the resulting unexpected-loss rate is applied
    to the capital basis: by default the defaulted balance still in workout,
    or, with ``basis="recoveries"``, the risk-free value of recoveries still
    to come.
    """
    flows = portfolio.recovery_flows
    if not np.any(flows != 0):
        raise EmptyRecoveries("portfolio has no recovery cash flows")
    losses = loss_array(portfolio, DiscountRate(risk_free, delta), writeoffs_only=writeoffs_only)
    if losses.size < 2:
        raise EmptyRecoveries("need at least two resolved loans to fit a loss distribution")
    fit = fit_beta(float(losses.mean()), float(losses.var(ddof=1)))
    p = replace(params, loss_fit=fit)
    raw = _raw_unexpected_loss(p, rule)
    ul = max(raw, 0.0)
    if raw < 0:
        warnings.warn(f"negative unexpected loss {raw:.3g} floored at 0", FlooredLossWarning, stacklevel=2)
    base = capital_basis(portfolio, risk_free, basis)
    return EcVector(capital_schedule(base, ul, mode), ul, base, floored=raw < 0, loss_fit=fit)


@dataclass
class TascheEcProvider:
    """Callable ``delta -> EcVector`` for the premium solver."""

    portfolio: DefaultedPortfolio
    params: TascheParams
    risk_free: float
    mode: str = "monthly"
    writeoffs_only: bool = False
    rule: QuadratureRule | str | None = None
    basis: str = "exposure"

    def __call__(self, delta: float) -> EcVector:
        return ec_vector(self.portfolio, delta, self.params, self.risk_free,
                         self.mode, self.writeoffs_only, self.rule, self.basis)
