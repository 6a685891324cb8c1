"""Beta loss-severity distribution: moment matching and inverse CDF."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DegenerateMean, InfeasibleMoments

INVERSE_TOL = 1e-10
_MAX_ITER = 400
_REL_STEP = 1e-14


@dataclass(frozen=True)
class BetaLossFit:
    a: float
    b: float
    mean: float
    variance: float

    @property
    def fitted_mean(self) -> float:
        return self.a / (self.a + self.b)

    @property
    def fitted_variance(self) -> float:
        s = self.a + self.b
        return self.a * self.b / (s * s * (s + 1.0))


def fit_beta(mean: float, variance: float) -> BetaLossFit:
    """Method-of-moments beta fit."""
    if not 0 < mean < 1:
        raise DegenerateMean(f"mean must lie in (0, 1), got {mean}")
    bound = mean * (1.0 - mean)
    if not 0 < variance < bound:
        raise InfeasibleMoments(
            f"variance {variance} must lie in (0, mean*(1-mean) = {bound})"
        )
    k = bound / variance - 1.0
    return BetaLossFit(mean * k, (1.0 - mean) * k, mean, variance)


def beta_cdf(fit: BetaLossFit, x):
    return special.betainc(fit.a, fit.b, np.clip(x, 0.0, 1.0))


def beta_inverse_cdf(fit: BetaLossFit, q, tol: float = INVERSE_TOL, q_complement=None):
    """Quantile of the fitted beta for probability ``q`` (scalar or array).

    Probabilities above one half are solved on the mirrored distribution
    ``Beta(b, a)`` at ``1 - q``; pass ``q_complement`` when ``1 - q`` is known
    more accurately than the subtraction would give.

    Each solve is a safeguarded Newton iteration on the regularised incomplete
    beta: iterates keep a sign-change bracket and any Newton step leaving it is
    replaced by bisection. Converges to ``tol`` absolute in ``x``.
    """
    q_arr = np.asarray(q, dtype=float)
    if np.any((q_arr < 0) | (q_arr > 1)) or np.any(np.isnan(q_arr)):
        raise ValueError("probabilities must lie in [0, 1]")
    qf = np.atleast_1d(q_arr).ravel()
    if q_complement is None:
        qc = 1.0 - qf
    else:
        qc = np.atleast_1d(np.asarray(q_complement, dtype=float)).ravel()
    a, b = fit.a, fit.b
    log_norm = special.betaln(a, b)

    x = np.where(qf <= 0, 0.0, np.where(qc <= 0, 1.0, np.nan))
    low = np.flatnonzero(np.isnan(x) & (qf <= 0.5))
    high = np.flatnonzero(np.isnan(x) & (qf > 0.5))
    if low.size:
        x[low] = _solve(qf[low], a, b, log_norm, tol)
    if high.size:
        x[high] = 1.0 - _solve(qc[high], b, a, log_norm, tol)
    if q_arr.ndim == 0:
        return float(x[0])
    return x.reshape(q_arr.shape)


def _solve(q, a, b, log_norm, tol):
    lo = np.zeros_like(q)
    hi = np.ones_like(q)
    # leading-order lower tail I_x(a, b) ~ x^a / (a B(a, b)); Newton takes over from there
    with np.errstate(divide="ignore"):
        tail = np.exp((np.log(q) + math.log(a) + log_norm) / a)
    x = np.minimum(tail, a / (a + b))
    # an underflowed tail estimate is the correctly rounded quantile
    active = x > 0
    for _ in range(_MAX_ITER):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        xi = x[idx]
        resid = special.betainc(a, b, xi) - q[idx]
        below = resid < 0
        lo[idx] = np.where(below, xi, lo[idx])
        hi[idx] = np.where(below, hi[idx], xi)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            log_pdf = (a - 1.0) * np.log(xi) + (b - 1.0) * np.log1p(-xi) - log_norm
            step = resid / np.exp(log_pdf)
        newton = xi - step
        ok = np.isfinite(newton) & (newton > lo[idx]) & (newton < hi[idx])
        # geometric bisection while the bracket spans orders of magnitude
        wide = lo[idx] > 0
        wide[wide] = hi[idx][wide] > 4.0 * lo[idx][wide]
        mid = np.where(wide, np.sqrt(lo[idx] * hi[idx]), 0.5 * (lo[idx] + hi[idx]))
        nxt = np.where(ok, newton, mid)
        done = (resid == 0) | (ok & (np.abs(step) <= _REL_STEP * newton)) | (hi[idx] - lo[idx] <= tol * 1e-4 * hi[idx])
        x[idx] = np.where(resid == 0, xi, nxt)
        active[idx[done]] = False
    return x
