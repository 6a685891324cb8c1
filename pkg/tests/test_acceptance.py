"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]`` / ``[FAIL]`` line (also collected into
the pytest terminal summary). Run directly with ``python3 tests/test_acceptance.py``
for the lines alone.
"""
from __future__ import annotations

import itertools
import math
import subprocess
import sys
import time
import warnings

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import beta_moments, conditional_loss_quad, grid_search_delta
from coclgd.baselines import roe_rate
from coclgd.betadist import fit_beta
from coclgd.capital import TascheEcProvider, TascheParams, conditional_loss, unexpected_loss_rate
from coclgd.cashflow import CashFlowSeries, DiscountRate, Outcome, realised_loss
from coclgd.config import PeriodSpec, RunConfig
from coclgd.errors import DegenerateMean, InfeasibleMoments
from coclgd.report import emit, read_report_csv
from coclgd.scenarios import run_scenarios
from coclgd.solver import SolverConfig, fixed_point_gap, objective, solve_delta
from coclgd.synth import SynthSpec, generate_synthetic, ml_like, pl_like

COC_GRID = (0.06, 0.07, 0.08)
RF_FULL = 0.0637
RF_DOWNTURN = RF_FULL + 0.025


def record(criterion: str, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


# shared fixtures -----------------------------------------------------------

def _small_portfolios():
    out = []
    for seed in range(20):
        if seed % 2 == 0:
            spec = SynthSpec.from_moments(0.749, 0.290, 0.05, 0.40, n_loans=400, mean_workout=4.67,
                                          max_workout=24, schedule="front", seed=seed, name=f"pl{seed}")
        else:
            spec = SynthSpec.from_moments(0.256, 0.366, 0.55, 0.10, n_loans=400, mean_workout=12.0,
                                          max_workout=24, schedule="back", seed=seed, name=f"ml{seed}")
        out.append(generate_synthetic(spec))
    return out


@pytest.fixture(scope="module")
def small_portfolios():
    return _small_portfolios()


@pytest.fixture(scope="module")
def twins():
    return generate_synthetic(pl_like(20_000, seed=1)), generate_synthetic(ml_like(20_000, seed=1))


def _solve(portfolio, coc, rf, **kw):
    cfg = SolverConfig(coc_rate=coc, risk_free=rf, **kw)
    return solve_delta(portfolio, cfg, TascheEcProvider(portfolio, TascheParams(), rf))


# criteria ------------------------------------------------------------------

def test_c1_quadrature_oracle():
    grid = list(itertools.product((0.01, 0.1, 0.5, 1.0), (0.0, 0.05, 0.15, 0.3), (0.99, 0.999),
                                  ((0.749, 0.290 ** 2), (0.256, 0.366 ** 2))))
    start = time.perf_counter()
    worst = 0.0
    for pd, kappa, alpha, (mean, var) in grid:
        fit = fit_beta(mean, var)
        ref = conditional_loss_quad(pd, kappa, alpha, fit.a, fit.b)
        got = conditional_loss(TascheParams(pd, kappa, alpha, fit))
        worst = max(worst, abs(got - ref) / abs(ref))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 10 and len(grid) >= 60
    assert record("C1 quadrature oracle", ok,
                  f"{len(grid)} points, worst rel err {worst:.2e} (<= 1e-6), {elapsed:.1f}s (< 10s)")


def test_c2_moment_round_trip():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        mean = rng.uniform(0.001, 0.999)
        var = rng.uniform(1e-6, 0.999) * mean * (1 - mean)
        fit = fit_beta(mean, var)
        m, v = beta_moments(fit.a, fit.b)
        worst = max(worst, abs(m - mean), abs(v - var) / var)
    rejected = 0
    bad = [(0.3, 0.21), (0.3, 0.5), (0.3, 0.0), (0.3, -1e-3), (0.0, 0.01), (1.0, 0.01), (1.2, 0.01)]
    for mean, var in bad:
        try:
            fit_beta(mean, var)
        except (InfeasibleMoments, DegenerateMean):
            rejected += 1
    ok = worst <= 1e-12 and rejected == len(bad)
    assert record("C2 moment-matching round trip", ok,
                  f"1000 pairs, worst err {worst:.1e} (<= 1e-12); infeasible rejected {rejected}/{len(bad)}")


def test_c3_solver_matches_grid_search(small_portfolios):
    rf = 0.05
    cfg = SolverConfig(coc_rate=0.07, risk_free=rf, tolerance=1e-4)
    start = time.perf_counter()
    sols = [solve_delta(p, cfg, TascheEcProvider(p, TascheParams(), rf)) for p in small_portfolios]
    elapsed = time.perf_counter() - start
    worst, max_iter = 0.0, 0
    for p, sol in zip(small_portfolios, sols):
        provider = TascheEcProvider(p, TascheParams(), rf)
        ref = grid_search_delta(lambda d: objective(p.recovery_flows, d, cfg, provider))
        worst = max(worst, abs(ref - sol.delta))
        max_iter = max(max_iter, sum(not it.verification for it in sol.iterations))
    ok = worst <= 2e-6 and max_iter <= 20 and elapsed < 5 and all(p.max_workout <= 24 for p in small_portfolios)
    assert record("C3 solver vs grid search", ok,
                  f"20 portfolios, worst |d - d_grid| {worst:.1e} (<= 2e-6), "
                  f"max {max_iter} outer iterations (<= 20), solve time {elapsed:.2f}s (< 5s)")


def test_c4_fixed_point_identity(small_portfolios, twins):
    worst = 0.0
    for p in (*small_portfolios, *twins):
        for rf in (0.0, RF_FULL):
            sol = _solve(p, 0.07, rf)
            worst = max(worst, fixed_point_gap(sol, p.recovery_flows))
    assert record("C4 fixed-point identity", worst <= 1e-6,
                  f"{2 * (len(small_portfolios) + 2)} solves, worst relative gap {worst:.1e} (<= 1e-6)")


def test_c5_reductions(small_portfolios):
    deltas = [_solve(p, 0.0, rf).delta for p in small_portfolios[:6] for rf in (0.0, RF_FULL)]
    c_ok = all(d == 0.0 for d in deltas)
    worst_ul = worst_raw = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for pd, (m, v) in itertools.product((0.01, 0.3, 1.0), ((0.749, 0.29 ** 2), (0.256, 0.366 ** 2), (0.5, 0.02))):
            params = TascheParams(pd, 0.0, 0.999, fit_beta(m, v))
            worst_ul = max(worst_ul, abs(unexpected_loss_rate(params)))
            worst_raw = max(worst_raw, abs(conditional_loss(params) - pd * m))
    roe_ok = all(roe_rate(rf, 0.0, em) == rf for rf in (0.0, 0.0637, 0.1) for em in (0.05, 0.12, -0.02))
    ok = c_ok and worst_ul <= 1e-8 and worst_raw <= 1e-8 and roe_ok
    assert record("C5 reductions", ok,
                  f"c=0 -> delta=0 exactly: {c_ok}; kappa=0 -> |UL| max {worst_ul:.1e}, "
                  f"unfloored {worst_raw:.1e} (<= 1e-8); "
                  f"beta=0 -> ROE=r_f exactly: {roe_ok}")


@pytest.fixture(scope="module")
def twin_deltas(twins):
    pl, ml = twins
    return {
        "pl": [_solve(pl, c, RF_FULL).delta for c in COC_GRID],
        "ml": [_solve(ml, c, RF_FULL).delta for c in COC_GRID],
    }


def _slope(deltas):
    return (deltas[-1] - deltas[0]) / (COC_GRID[-1] - COC_GRID[0])


def test_c6a_delta_monotone_in_coc(twin_deltas):
    d_pl, d_ml = twin_deltas["pl"], twin_deltas["ml"]
    ok = bool(np.all(np.diff(d_pl) >= 0) and np.all(np.diff(d_ml) >= 0))
    assert record("C6a delta non-decreasing in c", ok,
                  f"PL {[f'{d:.4%}' for d in d_pl]}, ML {[f'{d:.4%}' for d in d_ml]}")


def test_c6b_pl_more_sensitive_to_coc(twin_deltas):
    s_pl, s_ml = _slope(twin_deltas["pl"]), _slope(twin_deltas["ml"])
    assert record("C6b PL slope > ML slope", s_pl > s_ml, f"d delta/dc PL {s_pl:.3f} vs ML {s_ml:.3f}")


def test_c6c_higher_risk_free_lowers_pl_delta(twins, twin_deltas):
    d_full = twin_deltas["pl"][COC_GRID.index(0.07)]
    d_down = _solve(twins[0], 0.07, RF_DOWNTURN).delta
    assert record("C6c higher r_f lowers PL delta", d_down < d_full,
                  f"r_f {RF_FULL:.2%}: delta {d_full:.4%}; r_f {RF_DOWNTURN:.2%}: delta {d_down:.4%}")


def test_c7_report_identity(small_portfolios, tmp_path):
    cfg = RunConfig(coc_grid=COC_GRID, periods=(
        PeriodSpec("full", RF_FULL), PeriodSpec("downturn", RF_DOWNTURN, 26, 49),
    ))
    report = run_scenarios(small_portfolios[:4], cfg)
    emit(report, tmp_path, ("csv", "table"))
    rows = read_report_csv(tmp_path / "report.csv")
    worst = max(abs(r.delta - (r.r_d - r.risk_free)) for r in rows)
    ok = len(rows) == 4 * 2 * 3 and all(r.ok for r in rows) and worst <= 1e-10
    assert record("C7 report identity", ok,
                  f"{len(rows)} emitted rows, max |delta - (r_d - r_f)| {worst:.1e} (<= 1e-10)")


def _random_loan(rng, i):
    td = int(rng.integers(0, 120))
    w = int(rng.integers(0, 60))
    balance = float(rng.uniform(100, 1e6))
    months = sorted(set(int(m) for m in rng.integers(td, td + w + 1, size=rng.integers(0, 12))))
    flows = tuple((m, float(rng.uniform(0, balance / 4))) for m in months)
    return CashFlowSeries(f"R{i}", td, td + w, balance, flows, Outcome.WRITTEN_OFF)


def test_c8_workout_lgd_invariants():
    rng = np.random.default_rng(8)
    loans = [_random_loan(rng, i) for i in range(500)]
    mono = scale = shift = closed = True
    worst = 0.0
    for s in loans:
        rf = float(rng.uniform(-0.01, 0.1))
        d1, d2 = sorted(rng.uniform(0, 0.5, size=2))
        l1 = realised_loss(s, DiscountRate(rf, d1)).loss
        l2 = realised_loss(s, DiscountRate(rf, d2)).loss
        mono &= l1 <= l2 + 1e-15
        lam = float(rng.uniform(0.01, 100))
        ls = realised_loss(s.scaled(lam), DiscountRate(rf, d1)).loss
        k = int(rng.integers(1, 200))
        lk = realised_loss(s.shifted(k), DiscountRate(rf, d1)).loss
        scale &= abs(ls - l1) <= 1e-12
        shift &= lk == l1
        l0 = realised_loss(s, DiscountRate(0.0, 0.0)).loss
        ref = 1.0 - sum(x for _, x in s.flows) / s.balance
        closed &= abs(l0 - ref) <= 1e-12
        worst = max(worst, abs(ls - l1), abs(l0 - ref))
    ok = mono and scale and shift and closed
    assert record("C8 workout-LGD invariants", ok,
                  f"500 loans: monotone {mono}, scale-invariant {scale}, shift-invariant {shift}, "
                  f"zero-rate closed form {closed} (worst {worst:.1e})")


def _cli(*args, cwd):
    return subprocess.run([sys.executable, "-m", "coclgd", *args], cwd=cwd, capture_output=True, text=True)


def test_c9_end_to_end_determinism(tmp_path):
    outputs = []
    for run in ("a", "b"):
        root = tmp_path / run
        root.mkdir()
        steps = [
            ("synth", "--preset", "pl", "--n-loans", "2000", "--seed", "7", "--out", "pl"),
            ("synth", "--preset", "ml", "--n-loans", "2000", "--seed", "7", "--out", "ml"),
            ("coc", "solve", "--portfolio", "PL=pl", "--risk-free", "0.0637", "--seed", "7", "--out", "solve"),
            ("report", "--portfolio", "PL=pl", "--portfolio", "ML=ml", "--risk-free", "0.0637",
             "--seed", "7", "--out", "report"),
        ]
        for step in steps:
            res = _cli(*step, cwd=root)
            assert res.returncode == 0, res.stderr
        outputs.append([(root / f).read_bytes() for f in
                        ("pl/loans.csv", "pl/flows.csv", "solve/report.csv", "report/report.csv",
                         "report/report_long.csv")])
    same = outputs[0] == outputs[1]
    assert record("C9 end-to-end determinism", same,
                  "synth -> coc solve -> report twice with seed 7: report CSVs byte-identical" if same
                  else "report CSVs differ between runs")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
