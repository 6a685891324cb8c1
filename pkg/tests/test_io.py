import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coclgd.cashflow import Outcome
from coclgd.errors import BalanceNotPositive, IntegrityError, SchemaError
from coclgd.portfolio_io import SCHEMA_TAG, ingest, write_portfolio
from coclgd.synth import generate_synthetic, ml_like

LOANS = "loan_id,default_month,resolution_month,balance_at_default,outcome\n"
FLOWS = "loan_id,month,net_cash_flow\n"


def _write(tmp_path, loans, flows):
    lp, fp = tmp_path / "loans.csv", tmp_path / "flows.csv"
    lp.write_text(loans)
    fp.write_text(flows)
    return lp, fp


def test_two_loan_fixture(tmp_path):
    lp, fp = _write(tmp_path, SCHEMA_TAG + "\n" + LOANS + "A,0,3,100,written_off\nB,2,4,50.5,cured\n",
                    FLOWS + "A,1,20\nA,1,5\nB,4,50.5\n")
    p = ingest(lp, fp)
    assert len(p) == 2
    assert p.loans[0].flows == ((1, 25.0),)
    assert p.loans[1].outcome is Outcome.CURED


def test_orphan_flow_names_line(tmp_path):
    lp, fp = _write(tmp_path, LOANS + "A,0,3,100,written_off\n", FLOWS + "A,1,20\nZ,2,5\n")
    with pytest.raises(IntegrityError, match=r"flows.csv:3: field 'loan_id'"):
        ingest(lp, fp)


def test_zero_balance(tmp_path):
    lp, fp = _write(tmp_path, LOANS + "A,0,3,0,written_off\n", FLOWS)
    with pytest.raises(BalanceNotPositive, match=r"loans.csv:2: field 'balance_at_default'") as info:
        ingest(lp, fp)
    assert isinstance(info.value, ValueError)


@pytest.mark.parametrize("loans, flows, err, pattern", [
    ("loan_id,default_month,balance_at_default,outcome\n", FLOWS, SchemaError, "missing"),
    (LOANS.strip() + ",extra\n", FLOWS, SchemaError, "extra"),
    (LOANS + "A,x,3,100,written_off\n", FLOWS, SchemaError, "default_month"),
    (LOANS + "A,0,3,100,lost\n", FLOWS, SchemaError, "outcome"),
    (LOANS + "A,0,3,100,written_off\nA,1,3,100,cured\n", FLOWS, IntegrityError, "duplicate"),
    (LOANS + "A,4,3,100,written_off\n", FLOWS, IntegrityError, "resolution_month"),
    (LOANS + "A,0,3,100,written_off\n", FLOWS + "A,7,1\n", IntegrityError, "outside workout"),
    (LOANS + "A,0,3,100,written_off\n", FLOWS + "A,1,abc\n", SchemaError, "net_cash_flow"),
    ("# coclgd-portfolio v9\n" + LOANS, FLOWS, SchemaError, "unsupported"),
])
def test_error_paths(tmp_path, loans, flows, err, pattern):
    lp, fp = _write(tmp_path, loans, flows)
    with pytest.raises(err, match=pattern):
        ingest(lp, fp)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.0, 0.5))
def test_round_trip_lossless(tmp_path_factory, seed, censored):
    p = generate_synthetic(ml_like(60, seed=seed, censored_probability=censored))
    d = tmp_path_factory.mktemp("rt")
    q = ingest(*write_portfolio(p, d), name=p.name)
    assert q.loans == p.loans
    assert q.censored_count == p.censored_count
