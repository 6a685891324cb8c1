"""Seeded synthetic defaulted-loan portfolios.

Loss rates follow a three-part mixture: a point mass at 0 (cures), a point
mass at 1 (write-offs with nothing recovered) and a beta-distributed interior.
Workout periods follow a geometric law truncated at the maximum workout.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .cashflow import CashFlowSeries, DefaultedPortfolio, Outcome
from .errors import SpecInfeasible

SCHEDULES = ("front", "uniform", "back")

# default months span Oct-2005..Sep-2011; the downturn analogue covers months 26..49
DEFAULT_SPAN_MONTHS = 72
DOWNTURN_WINDOW = (26, 49)


@dataclass(frozen=True)
class SynthSpec:
    n_loans: int
    cure_probability: float
    full_loss_probability: float
    interior_a: float
    interior_b: float
    mean_workout: float
    max_workout: int
    schedule: str = "front"
    seed: int = 0
    censored_probability: float = 0.0
    mean_balance: float = 10_000.0
    default_span: int = DEFAULT_SPAN_MONTHS
    name: str = "synthetic"

    def validate(self):
        probs = (self.cure_probability, self.full_loss_probability, self.censored_probability)
        if any(not 0 <= p <= 1 for p in probs):
            raise SpecInfeasible("probabilities must lie in [0, 1]")
        if self.cure_probability + self.full_loss_probability > 1:
            raise SpecInfeasible("cure + full-loss probability exceeds 1")
        if self.n_loans < 0:
            raise SpecInfeasible("n_loans must be >= 0")
        if not (self.interior_a > 0 and self.interior_b > 0):
            raise SpecInfeasible("interior beta parameters must be positive")
        if not 1 <= self.mean_workout <= self.max_workout:
            raise SpecInfeasible("need 1 <= mean_workout <= max_workout")
        if self.schedule not in SCHEDULES:
            raise SpecInfeasible(f"schedule must be one of {SCHEDULES}")
        if self.default_span < 1:
            raise SpecInfeasible("default_span must be >= 1")

    def target_moments(self) -> tuple[float, float]:
        """Mean and standard deviation of the undiscounted loss mixture."""
        p0, p1 = self.cure_probability, self.full_loss_probability
        pi = 1.0 - p0 - p1
        a, b = self.interior_a, self.interior_b
        m = a / (a + b)
        v = a * b / ((a + b) ** 2 * (a + b + 1))
        mean = p1 + pi * m
        second = p1 + pi * (v + m * m)
        return mean, float(np.sqrt(second - mean * mean))

    @classmethod
    def from_moments(cls, mean: float, std: float, cure_probability: float,
                     full_loss_probability: float, **kw) -> "SynthSpec":
        """Solve the interior beta so the loss mixture has the given mean and std."""
        p0, p1 = cure_probability, full_loss_probability
        pi = 1.0 - p0 - p1
        if pi <= 0:
            raise SpecInfeasible("no probability mass left for interior losses")
        m = (mean - p1) / pi
        second = (std * std + mean * mean - p1) / pi
        v = second - m * m
        if not (0 < m < 1 and 0 < v < m * (1 - m)):
            raise SpecInfeasible(
                f"moments ({mean}, {std}) unreachable with cure={p0}, full loss={p1}"
            )
        k = m * (1 - m) / v - 1
        return cls(cure_probability=p0, full_loss_probability=p1,
                   interior_a=m * k, interior_b=(1 - m) * k, **kw)


def pl_like(n_loans: int = 5000, seed: int = 0, **kw) -> SynthSpec:
    """Unsecured personal loans: high mean loss, short workouts, few cures."""
    opts = dict(n_loans=n_loans, mean_workout=4.67, max_workout=87, seed=seed,
                schedule="front", name="PL")
    opts.update(kw)
    return SynthSpec.from_moments(0.749, 0.290, 0.05, 0.40, **opts)


def ml_like(n_loans: int = 5000, seed: int = 0, **kw) -> SynthSpec:
    """Secured mortgages: low mean loss, long workouts, many cures."""
    opts = dict(n_loans=n_loans, mean_workout=25.64, max_workout=113, seed=seed,
                schedule="back", name="ML")
    opts.update(kw)
    return SynthSpec.from_moments(0.256, 0.366, 0.55, 0.10, **opts)


PRESETS = {"pl": pl_like, "ml": ml_like}


def _geometric_pmf(mean: float, max_workout: int) -> np.ndarray:
    """Probabilities of workouts ``1..max_workout`` from a truncated geometric law with the given mean."""
    k = np.arange(1, max_workout + 1)
    if mean == max_workout:
        pmf = np.zeros(max_workout)
        pmf[-1] = 1.0
        return pmf
    if mean == 1:
        pmf = np.zeros(max_workout)
        pmf[0] = 1.0
        return pmf

    def pmf_for(log_r):
        lw = (k - 1) * log_r
        w = np.exp(lw - lw.max())
        return w / w.sum()

    mid = (max_workout + 1) / 2
    if np.isclose(mean, mid):
        return pmf_for(0.0)
    # solve for the log of the geometric ratio; +-690 spans the double range
    bracket = (0.0, 690.0) if mean > mid else (-690.0, 0.0)
    log_r = brentq(lambda x: pmf_for(x) @ k - mean, *bracket, xtol=1e-13)
    return pmf_for(log_r)


def _schedule_weights(shape: str, n: int) -> np.ndarray:
    k = np.arange(1, n + 1, dtype=float)
    if shape == "front":
        w = n + 1 - k
    elif shape == "back":
        w = k
    else:
        w = np.ones(n)
    return w / w.sum()


def _split(total: float, weights: np.ndarray) -> list[float]:
    """Split a cent amount by weight; the last entry absorbs rounding."""
    cents = int(round(total * 100))
    parts = np.floor(weights * cents).astype(np.int64)
    parts[-1] += cents - parts.sum()
    return [p / 100 for p in parts]


def generate_synthetic(spec: SynthSpec) -> DefaultedPortfolio:
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    n = spec.n_loans
    pmf = _geometric_pmf(spec.mean_workout, spec.max_workout)

    default_month = rng.integers(0, spec.default_span, size=n)
    workout = rng.choice(np.arange(1, spec.max_workout + 1), size=n, p=pmf)
    balance = np.round(spec.mean_balance * rng.lognormal(-0.125, 0.5, size=n), 2)
    balance = np.maximum(balance, 0.01)
    kind = rng.uniform(size=n)
    interior = rng.beta(spec.interior_a, spec.interior_b, size=n)
    censor = rng.uniform(size=n) < spec.censored_probability
    cure_month = np.floor(rng.uniform(size=n) * workout).astype(int) + 1

    p0, p1 = spec.cure_probability, spec.full_loss_probability
    width = len(str(max(n - 1, 0)))
    loans = []
    for i in range(n):
        td = int(default_month[i])
        w = int(workout[i])
        b = float(balance[i])
        if kind[i] < p0:
            loss = 0.0
            flows = [(td + int(cure_month[i]), b)]
            outcome = Outcome.CURED
        else:
            loss = 1.0 if kind[i] < p0 + p1 else float(interior[i])
            recovered = (1.0 - loss) * b
            flows = []
            if recovered >= 0.005:
                parts = _split(recovered, _schedule_weights(spec.schedule, w))
                flows = [(td + j + 1, x) for j, x in enumerate(parts) if x != 0]
            outcome = Outcome.WRITTEN_OFF
        if censor[i]:
            outcome = Outcome.CENSORED
        loans.append(CashFlowSeries(f"L{i:0{width}d}", td, td + w, b, tuple(flows), outcome))
    return DefaultedPortfolio(loans, name=spec.name)
