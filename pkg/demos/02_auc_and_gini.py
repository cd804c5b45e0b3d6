"""Area under the curve and the Gini index, with a look at what they miss.

Run with ``python3 demos/02_auc_and_gini.py``.
"""

from scipy.stats import norm

from rocdin import Beta, DirectCdfRoc, Normal, ParametricRoc, a_star, auc, diagonal, gini

# Binormal model: AUC has the closed form Phi((mu1 - mu0) / sqrt(s0^2 + s1^2)).
binormal = ParametricRoc(Normal(0, 1), Normal(1.5, 2))
area = auc(binormal).value
print(f"binormal AUC {area:.10f}  closed form {norm.cdf(1.5 / 5 ** 0.5):.10f}")
print(f"A* = {a_star(area):.6f}, Gini = {gini(area):.6f}")

# A test that ignores the patient scores lies on the diagonal.
print("random test AUC:", auc(diagonal()).value)

# Two curves that cross can share the same area.
for name, law in (("Beta(1,3)", Beta(1, 3)), ("Beta(2,6)", Beta(2, 6))):
    print(f"{name} AUC = {auc(DirectCdfRoc(law)).value:.12f}")
print("Equal areas, yet the curves differ: see demos/03_dinegentropy.py")
