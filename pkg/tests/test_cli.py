import json

import pytest

from coclgd.cli import main
from coclgd.report import read_report_csv


@pytest.fixture
def data(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["synth", "--preset", "pl", "--n-loans", "400", "--seed", "3", "--out", "pl"]) == 0
    assert main(["synth", "--preset", "ml", "--n-loans", "400", "--seed", "3", "--out", "ml", "--censored", "0.1"]) == 0
    return tmp_path


def test_synth_and_lgd(data, capsys):
    assert (data / "pl" / "loans.csv").exists()
    assert main(["lgd", "compute", "--portfolio", "pl", "--delta", "0.05"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "loan_id,evaluation_month,loss" and len(out) == 401


def test_coc_solve_table(data, capsys):
    assert main(["--format", "table", "coc", "solve", "--portfolio", "PL=pl", "--coc-rate", "0.07"]) == 0
    out = capsys.readouterr().out
    assert "PL" in out and "%" in out


def test_report_files(data):
    assert main(["report", "--portfolio", "PL=pl", "--portfolio", "ML=ml", "--risk-free", "0.0637",
                 "--coc-grid", "0.06", "0.08", "--out", "out", "--seed", "3"]) == 0
    rows = read_report_csv(data / "out" / "report.csv")
    assert len(rows) == 4 and all(r.ok for r in rows)
    assert next(r for r in rows if r.portfolio == "ML").n_censored > 0
    meta = json.loads((data / "out" / "report_meta.json").read_text())
    assert meta["seed"] == 3 and len(meta["config_digest"]) == 16


def test_empty_grid_exit_zero(data, tmp_path):
    cfg = tmp_path / "empty.json"
    cfg.write_text('{"coc_grid": []}')
    assert main(["report", "--portfolio", "pl", "--config", str(cfg), "--out", "empty"]) == 0
    assert (data / "empty" / "report.csv").read_text().count("\n") == 1


def test_riskfree(tmp_path, capsys):
    curve = tmp_path / "curve.csv"
    curve.write_text("date,tenor_months,yield\n2008-01-02,3,0.06\n2008-01-02,6,0.08\n"
                     "2008-01-03,3,0.06\n2008-01-03,6,0.08\n")
    assert main(["riskfree", "--curve", str(curve), "--start", "2008-01-01", "--end", "2008-01-31",
                 "--tenor", "4.5"]) == 0
    assert "0.07" in capsys.readouterr().out
    assert main(["riskfree", "--curve", str(curve), "--start", "2009-01-01", "--end", "2009-01-31",
                 "--tenor", "4.5"]) == 3


def test_rates_baseline(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"risk_free": 0.06, "baseline": {
        "roe": {"beta": 1.0, "expected_market_return": 0.11},
        "wacc": {"expected_downturn_lgd": 0.5, "expected_lgd": 0.25},
    }}))
    assert main(["rates", "baseline", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("method,rate,flag") and "wacc" in out


@pytest.mark.parametrize("argv, code", [
    (["report", "--portfolio", "pl", "--format", "xlsx"], 2),
    (["frobnicate"], 2),
    (["coc", "solve", "--portfolio", "missing"], 3),
    (["rates", "baseline"], 2),
])
def test_exit_codes(data, argv, code):
    assert main(argv) == code


def test_bad_config_is_usage_error(data, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"unknown_key": 1}')
    assert main(["coc", "solve", "--portfolio", "pl", "--config", str(cfg)]) == 2


def test_numerical_failure_exit_code(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    d = tmp_path / "instant"
    d.mkdir()
    (d / "loans.csv").write_text("loan_id,default_month,resolution_month,balance_at_default,outcome\n"
                                 "a,0,2,100,written_off\nb,0,2,100,written_off\n")
    (d / "flows.csv").write_text("loan_id,month,net_cash_flow\na,0,60\nb,0,20\n")
    assert main(["coc", "solve", "--portfolio", "instant"]) == 4
