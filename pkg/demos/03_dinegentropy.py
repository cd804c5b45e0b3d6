"""Dinegentropy (symmetric Kullback-Leibler divergence, in bits) as a tie breaker.

Run with ``python3 demos/03_dinegentropy.py``.
"""

import math

from rocdin import (
    Beta,
    DirectCdfRoc,
    PowerRoot,
    Uniform01,
    compare,
    crossings,
    dinegentropy,
    kl_divergence,
    metrics_report,
)

U = Uniform01()

# The two equal-area curves from the AUC demo.
a, b = DirectCdfRoc(Beta(2, 6)), DirectCdfRoc(Beta(1, 3))
print("crossing brackets:", crossings(a, b))
for name, curve in (("Beta(2,6)", a), ("Beta(1,3)", b)):
    r = metrics_report(curve)
    print(f"{name}: AUC {r.auc:.6f}  KL {r.kl_forward:.6f} + {r.kl_reverse:.6f} = J {r.dinegentropy:.6f} bits")

verdict = compare(a, b)
print(f"winner: {verdict.winner.value} ({verdict.rationale.value})")

# The divergence is not symmetric; dinegentropy adds both directions.
print(f"\nKL(Beta(1,3) || U) = {kl_divergence(Beta(1, 3), U).value:.6f}")
print(f"KL(U || Beta(1,3)) = {kl_divergence(U, Beta(1, 3)).value:.6f}")

# PowerRoot(n) has CDF x^(1/n); its dinegentropy against the uniform law is (n-1)^2 / (n ln 2).
print("\n   n   computed J       closed form")
for n in (1, 2, 10, 100, 1000):
    j = dinegentropy(PowerRoot(n), U).value
    print(f"{n:4d}  {j:14.6f}  {(n - 1) ** 2 / (n * math.log(2)):14.6f}")
