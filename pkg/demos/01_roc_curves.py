"""ROC curves three ways: from two score laws, from a CDF on [0, 1], and from data.

Run with ``python3 demos/01_roc_curves.py``.
"""

import numpy as np

from rocdin import (
    Beta,
    DirectCdfRoc,
    Exponential,
    ParametricRoc,
    ScoreDataset,
    check_dominance,
    empirical_roc,
    threshold_grid,
    threshold_point,
)

# Normal patients score Exp(1), diseased patients Exp(0.5): larger scores flag disease.
curve = ParametricRoc(Exponential(1.0), Exponential(0.5))
print("threshold  sensitivity  specificity")
for t in threshold_grid(curve, 4)[::2]:
    tp = threshold_point(curve, t)
    print(f"{t:9.4f}  {tp.sensitivity:11.4f}  {tp.specificity:11.4f}")

# The curve itself: sensitivity as a function of the false positive proportion.
u = np.linspace(0, 1, 6)
print("\nfpp        ", np.round(u, 3))
print("sensitivity", np.round(curve(u), 4))

# Dominance of the diseased law guarantees the curve stays above the diagonal.
print("\nexponential pair dominance holds:", check_dominance(curve).holds)
print("Beta(2,6) vs Beta(1,3) dominance holds:", check_dominance(ParametricRoc(Beta(2, 6), Beta(1, 3))).holds)

# A curve given directly as a CDF on [0, 1].
direct = DirectCdfRoc(Beta(1, 3))
print("\nBeta(1,3) curve at fpp 0.5:", direct(0.5))

# And an empirical polyline from labelled scores.
data = ScoreDataset.from_classes([1.0, 3.0], [2.0, 4.0])
print("empirical vertices:", empirical_roc(data).points.tolist())

# The same curves can be sampled from the shell:
#   rocdin roc-emit direct:beta:1,3 --points 5
