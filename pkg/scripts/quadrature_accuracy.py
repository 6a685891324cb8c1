"""Relative error of quadrature rules for the conditional-loss integral.

The reference is adaptive integration in the factor variable with scipy's
inverse incomplete beta; the candidates integrate the transformed form.
"""
import itertools
import math
import time
import warnings

import numpy as np
from scipy import integrate, special
from scipy.stats import norm

from coclgd.betadist import fit_beta
from coclgd.capital import TascheParams, conditional_loss
from coclgd.quadrature import GAUSS_LEGENDRE_5, gauss_legendre, tanh_sinh

warnings.simplefilter("ignore")


def reference(pd, kappa, alpha, a, b):
    q = norm.ppf(alpha)
    sk, s1k = math.sqrt(kappa), math.sqrt(1 - kappa)
    lo = (norm.isf(pd) - sk * q) / s1k if pd < 1 else -12.0

    def f(z):
        level = min(max((pd - norm.sf(sk * q + s1k * z)) / pd, 0.0), 1.0)
        return norm.pdf(z) * special.betaincinv(a, b, level)

    pts = sorted({lo, lo + 0.01, lo + 0.1, lo + 1, max(lo + 2, 0.0), 12.0})
    return sum(integrate.quad(f, x0, x1, epsabs=1e-13 * pd, epsrel=1e-11, limit=200)[0]
               for x0, x1 in zip(pts[:-1], pts[1:]))


def main():
    grid = list(itertools.product((0.01, 0.1, 0.5, 1.0), (0.05, 0.15, 0.3), (0.99, 0.999),
                                  ((0.749, 0.290 ** 2), (0.256, 0.366 ** 2), (0.5, 0.05))))
    refs = []
    for pd, kappa, alpha, (m, v) in grid:
        fit = fit_beta(m, v)
        refs.append((TascheParams(pd, kappa, alpha, fit), reference(pd, kappa, alpha, fit.a, fit.b)))
    rules = [GAUSS_LEGENDRE_5, gauss_legendre(20), gauss_legendre(80),
             tanh_sinh(1 / 8), tanh_sinh(1 / 12), tanh_sinh(1 / 16)]
    print(f"{len(grid)} grid points")
    print(f"{'rule':<22}{'nodes':>6}{'worst rel err':>16}{'ms/eval':>10}")
    for rule in rules:
        t0 = time.perf_counter()
        errs = [abs(conditional_loss(p, rule) - r) / r for p, r in refs]
        ms = 1e3 * (time.perf_counter() - t0) / len(refs)
        print(f"{rule.name:<22}{len(rule.nodes):>6}{max(errs):>16.2e}{ms:>10.2f}")


if __name__ == "__main__":
    main()
