# Frozen values for tests/support/oracles.hpp (kTailIndexTable).
# kappa* solves E[(a eps + b)^kappa] = 1 for eps ~ Exp(1), via scipy quad + brentq.
import numpy as np
from scipy import integrate, optimize, special


def moment(a, b, k):
    f = lambda x: (a * x + b) ** k * np.exp(-x)
    return integrate.quad(f, 0, np.inf, epsabs=0, epsrel=1e-12, limit=200)[0]


def kappa(a, b):
    return optimize.brentq(lambda k: moment(a, b, k) - 1, 1 + 1e-6, 50, xtol=1e-14)


PARAMS = [(0.1, 0.8), (0.3, 0.5), (0.4, 0.5), (0.45, 0.5), (0.5, 0.45), (0.6, 0.3),
          (0.7, 0.2), (0.5, 0.4), (0.55, 0.35), (0.35, 0.6), (0.8, 0.1), (0.6, 0.35),
          (0.4, 0.55)]

if __name__ == "__main__":
    for a, b in PARAMS:
        k = kappa(a, b)
        closed = a ** k * np.exp(b / a) * special.gammaincc(k + 1, b / a) * special.gamma(k + 1)
        print(f"{{{a}, {b}, {k!r}}},  // closed-form check {closed:.15f}")
