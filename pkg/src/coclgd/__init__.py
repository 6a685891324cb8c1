"""Cost-of-capital risk premium for workout LGD discount rates."""
from .capital import EcVector, TascheEcProvider, TascheParams, conditional_loss, ec_vector, unexpected_loss_rate
from .cashflow import (
    CashFlowSeries,
    DefaultedPortfolio,
    DiscountRate,
    Outcome,
    RealisedLoss,
    discount_factor,
    portfolio_losses,
    realised_loss,
)
from .betadist import BetaLossFit, beta_inverse_cdf, fit_beta
from .config import PeriodSpec, RunConfig, load_config
from .portfolio_io import ingest, write_portfolio
from .report import RunReport, ScenarioRow, emit, read_report_csv
from .scenarios import baseline_rates, run_scenarios
from .solver import CocSolution, SolverConfig, solve_delta
from .synth import SynthSpec, generate_synthetic, ml_like, pl_like

__version__ = "0.1.0"
