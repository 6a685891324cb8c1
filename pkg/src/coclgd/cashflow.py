"""Loan-level workout cash flows and realised LGD.

Time is measured in whole months. Annual rates are applied to the monthly grid
by effective compounding, so a flow ``m`` months after the evaluation date is
discounted by ``(1 + r)**(-m / 12)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import BalanceNotPositive, EvaluationTimeOutOfRange, IntegrityError

MONTHS_PER_YEAR = 12


class Outcome(str, enum.Enum):
    WRITTEN_OFF = "written_off"
    CURED = "cured"
    CENSORED = "censored"


@dataclass(frozen=True)
class DiscountRate:
    """Annual discount rate split into risk-free part and risk premium."""

    risk_free: float
    premium: float = 0.0

    def __post_init__(self):
        if not self.premium >= 0:
            raise ValueError(f"risk premium must be >= 0, got {self.premium}")
        if not self.composite > -1:
            raise ValueError(f"discount rate must exceed -100%, got {self.composite}")

    @property
    def composite(self) -> float:
        return self.risk_free + self.premium

    @property
    def monthly(self) -> float:
        return (1.0 + self.composite) ** (1.0 / MONTHS_PER_YEAR) - 1.0


def monthly_rate(annual: float) -> float:
    return (1.0 + annual) ** (1.0 / MONTHS_PER_YEAR) - 1.0


def discount_factors(annual: float, months) -> np.ndarray:
    """Vectorised ``(1 + annual)**(-months/12)``."""
    months = np.asarray(months, dtype=float)
    return np.power(1.0 + annual, -months / MONTHS_PER_YEAR)


def discount_factor(rate: DiscountRate, m: int) -> float:
    if m < 0:
        raise ValueError("number of periods must be non-negative")
    if m == 0:
        return 1.0
    return float((1.0 + rate.composite) ** (-m / MONTHS_PER_YEAR))


@dataclass(frozen=True)
class CashFlowSeries:
    """Net post-default cash flows of one loan.

    ``flows`` is a sequence of ``(month, amount)`` pairs; same-month entries
    are summed and the result is stored sorted by month. ``balances`` optionally
    carries month-end balances after default, needed only to evaluate the loss
    at a date later than the default month.
    """

    loan_id: str
    default_month: int
    resolution_month: int
    balance: float
    flows: tuple = ()
    outcome: Outcome = Outcome.WRITTEN_OFF
    balances: Mapping[int, float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.default_month < 0:
            raise IntegrityError(f"loan {self.loan_id}: default month must be >= 0")
        if self.resolution_month < self.default_month:
            raise IntegrityError(
                f"loan {self.loan_id}: resolution month {self.resolution_month} "
                f"precedes default month {self.default_month}"
            )
        if not self.balance > 0:
            raise BalanceNotPositive(
                f"loan {self.loan_id}: balance at default must be > 0 (got {self.balance})"
            )
        merged: dict[int, float] = {}
        for month, amount in self.flows:
            month = int(month)
            if not self.default_month <= month <= self.resolution_month:
                raise IntegrityError(
                    f"loan {self.loan_id}: flow month {month} outside "
                    f"[{self.default_month}, {self.resolution_month}]"
                )
            merged[month] = merged.get(month, 0.0) + float(amount)
        object.__setattr__(self, "flows", tuple(sorted(merged.items())))
        object.__setattr__(self, "outcome", Outcome(self.outcome))

    @property
    def workout_months(self) -> int:
        return self.resolution_month - self.default_month

    @property
    def resolved(self) -> bool:
        return self.outcome is not Outcome.CENSORED

    def shifted(self, k: int) -> "CashFlowSeries":
        return CashFlowSeries(
            self.loan_id,
            self.default_month + k,
            self.resolution_month + k,
            self.balance,
            tuple((m + k, x) for m, x in self.flows),
            self.outcome,
            None if self.balances is None else {m + k: b for m, b in self.balances.items()},
        )

    def scaled(self, lam: float) -> "CashFlowSeries":
        return CashFlowSeries(
            self.loan_id,
            self.default_month,
            self.resolution_month,
            self.balance * lam,
            tuple((m, x * lam) for m, x in self.flows),
            self.outcome,
            None if self.balances is None else {m: b * lam for m, b in self.balances.items()},
        )


@dataclass(frozen=True)
class RealisedLoss:
    loan_id: str
    evaluation_month: int
    loss: float


def realised_loss(series: CashFlowSeries, rate: DiscountRate, u: int | None = None) -> RealisedLoss:
    """Workout loss of one loan evaluated at month ``u`` (default month if omitted).

    Flows from ``u`` to resolution are discounted back to ``u`` and divided by
    the balance outstanding at ``u``. Over-recoveries give negative losses and
    are kept as is.
    """
    if u is None:
        u = series.default_month
    if not series.default_month <= u <= series.resolution_month:
        raise EvaluationTimeOutOfRange(
            f"loan {series.loan_id}: evaluation month {u} outside "
            f"[{series.default_month}, {series.resolution_month}]"
        )
    if u == series.default_month:
        balance = series.balance
    else:
        if series.balances is None or u not in series.balances:
            raise EvaluationTimeOutOfRange(
                f"loan {series.loan_id}: no balance recorded at month {u}"
            )
        balance = series.balances[u]
    if not balance > 0:
        raise BalanceNotPositive(f"loan {series.loan_id}: balance at month {u} is {balance}")

    pv = 0.0
    for month, amount in series.flows:
        if month >= u:
            pv += amount * discount_factor(rate, month - u)
    return RealisedLoss(series.loan_id, u, 1.0 - pv / balance)


class DefaultedPortfolio:
    """A set of defaulted loans, ordered by ``loan_id``.

    Censored loans are kept (so they can be counted and written back out) but
    are excluded from every loss and rate calculation.
    """

    def __init__(self, loans: Iterable[CashFlowSeries], name: str = "portfolio"):
        loans = sorted(loans, key=lambda s: s.loan_id)
        seen = set()
        for s in loans:
            if s.loan_id in seen:
                raise IntegrityError(f"duplicate loan_id {s.loan_id!r}")
            seen.add(s.loan_id)
        self.loans: tuple[CashFlowSeries, ...] = tuple(loans)
        self.name = name

    def __len__(self):
        return len(self.loans)

    def __repr__(self):
        return f"DefaultedPortfolio({self.name!r}, n={len(self.loans)}, censored={self.censored_count})"

    @cached_property
    def resolved(self) -> tuple[CashFlowSeries, ...]:
        return tuple(s for s in self.loans if s.resolved)

    @property
    def censored_count(self) -> int:
        return len(self.loans) - len(self.resolved)

    @cached_property
    def max_workout(self) -> int:
        """Longest time in default across resolved loans (the run-off horizon)."""
        return max((s.workout_months for s in self.resolved), default=0)

    @cached_property
    def mean_workout(self) -> float:
        if not self.resolved:
            return 0.0
        return float(np.mean([s.workout_months for s in self.resolved]))

    @cached_property
    def flow_matrix(self) -> np.ndarray:
        """Resolved-loan flows by months since default, shape ``(n, max_workout + 1)``."""
        mat = np.zeros((len(self.resolved), self.max_workout + 1))
        for i, s in enumerate(self.resolved):
            for month, amount in s.flows:
                mat[i, month - s.default_month] += amount
        mat.flags.writeable = False
        return mat

    @cached_property
    def balances(self) -> np.ndarray:
        b = np.array([s.balance for s in self.resolved], dtype=float)
        b.flags.writeable = False
        return b

    @cached_property
    def written_off_mask(self) -> np.ndarray:
        return np.array([s.outcome is Outcome.WRITTEN_OFF for s in self.resolved], dtype=bool)

    @cached_property
    def recovery_flows(self) -> np.ndarray:
        """Aggregate portfolio flows ``X_t`` for ``t = 0 .. max_workout`` months after default."""
        flows = self.flow_matrix.sum(axis=0)
        flows.flags.writeable = False
        return flows

    def select(self, first_default_month: int | None = None, last_default_month: int | None = None,
               name: str | None = None) -> "DefaultedPortfolio":
        """Sub-portfolio of loans whose default month lies in the inclusive window."""
        lo = -np.inf if first_default_month is None else first_default_month
        hi = np.inf if last_default_month is None else last_default_month
        return DefaultedPortfolio(
            (s for s in self.loans if lo <= s.default_month <= hi), name or self.name
        )


def loss_array(portfolio: DefaultedPortfolio, rate: DiscountRate, writeoffs_only: bool = False) -> np.ndarray:
    """Losses at default of all resolved loans, vectorised, in ``loan_id`` order."""
    mat = portfolio.flow_matrix
    v = discount_factors(rate.composite, np.arange(mat.shape[1]))
    losses = 1.0 - (mat @ v) / portfolio.balances
    if writeoffs_only:
        losses = losses[portfolio.written_off_mask]
    return losses


def portfolio_losses(portfolio: DefaultedPortfolio, rate: DiscountRate) -> list[RealisedLoss]:
    out = []
    for s in portfolio.resolved:
        try:
            out.append(realised_loss(s, rate))
        except (BalanceNotPositive, EvaluationTimeOutOfRange) as exc:
            raise type(exc)(f"loan {s.loan_id}: {exc}") from exc
    return out


def loss_summary(losses: Sequence[float]) -> tuple[float, float]:
    """Sample mean and standard deviation (n - 1 denominator)."""
    arr = np.asarray(losses, dtype=float)
    if arr.size == 0:
        return float("nan"), float("nan")
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return float(arr.mean()), std
