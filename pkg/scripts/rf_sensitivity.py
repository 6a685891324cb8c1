"""Premium response to the risk-free rate on a fixed synthetic portfolio.

Sweeps r_f for each capital basis and a few (pd, kappa) settings and prints
delta at c = 7%. Useful for checking the sign of d delta / d r_f.
"""
import argparse
import warnings

import numpy as np

from coclgd.capital import TascheEcProvider, TascheParams
from coclgd.solver import SolverConfig, solve_delta
from coclgd.synth import generate_synthetic, ml_like, pl_like

warnings.simplefilter("ignore")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--preset", choices=("pl", "ml"), default="pl")
    ap.add_argument("--n-loans", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    spec = (pl_like if args.preset == "pl" else ml_like)(args.n_loans, args.seed)
    p = generate_synthetic(spec)
    rates = np.array([0.0, 0.0387, 0.0637, 0.0887, 0.1137])
    print("basis       pd    kappa  " + "  ".join(f"rf={r:.2%}".rjust(11) for r in rates))
    for basis in ("exposure", "recoveries"):
        for pd, kappa in ((1.0, 0.15), (0.1, 0.15), (1.0, 0.3)):
            deltas = []
            for rf in rates:
                prov = TascheEcProvider(p, TascheParams(pd, kappa), rf, basis=basis)
                deltas.append(solve_delta(p, SolverConfig(coc_rate=0.07, risk_free=rf), prov).delta)
            print(f"{basis:<10}{pd:>5.2f}{kappa:>8.2f}  " + "  ".join(f"{d:>11.4%}" for d in deltas))


if __name__ == "__main__":
    main()
