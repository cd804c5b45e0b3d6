import json
import math
import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate as sp_integrate
from scipy import stats

from rocdin import (
    Beta,
    DirectCdfRoc,
    DomainError,
    EmpiricalRoc,
    Exponential,
    MetricsReport,
    Normal,
    ParametricRoc,
    PowerRoot,
    Rationale,
    Uniform01,
    Unsupported,
    Winner,
    a_star,
    auc,
    compare,
    diagonal,
    dinegentropy,
    dinegentropy_of_roc,
    gini,
    kl_divergence,
    metrics_report,
    report_from_json,
    report_to_json,
    density_difference_integral,
)
from rocdin.metrics import bits_to_nats, nats_to_bits

LN2 = math.log(2)
U = Uniform01()


def closed_power_root(n):
    return (n - 1) ** 2 / (n * LN2)


class TestAuc:
    def test_diagonal(self):
        assert auc(diagonal()).value == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("g", [Beta(1, 3), Beta(2, 6)], ids=repr)
    def test_beta_direct(self, g):
        assert auc(DirectCdfRoc(g)).value == pytest.approx(0.75, abs=1e-12)

    def test_degenerate_zero(self):
        curve = EmpiricalRoc([[0, 0], [1, 0], [1, 1]])
        assert auc(curve).value == 0.0

    def test_binormal_closed_form(self):
        # AUC = Phi((mu1 - mu0) / sqrt(s0^2 + s1^2))
        curve = ParametricRoc(Normal(0, 1), Normal(1.3, 0.6))
        exact = stats.norm.cdf(1.3 / math.hypot(1, 0.6))
        assert auc(curve).value == pytest.approx(exact, abs=1e-10)

    def test_exponential_closed_form(self):
        # P(X1 > X0) with rates 1 and 0.5 is 1 / (1 + 0.5)
        assert auc(ParametricRoc(Exponential(1.0), Exponential(0.5))).value == pytest.approx(2 / 3, abs=1e-10)


class TestGini:
    @pytest.mark.parametrize("a, g", [(0.5, 0.0), (0.75, 0.5), (1.0, 1.0), (0.0, -1.0)])
    def test_values(self, a, g):
        assert gini(a) == g
        assert gini(a) == 2 * a_star(a)

    @pytest.mark.parametrize("a", [-0.01, 1.01, float("nan")])
    def test_domain(self, a):
        with pytest.raises(DomainError):
            gini(a)

    def test_unit_helpers(self):
        assert bits_to_nats(nats_to_bits(1.7)) == pytest.approx(1.7)
        assert nats_to_bits(LN2) == pytest.approx(1.0)


class TestKl:
    def test_beta13_vs_uniform(self):
        assert kl_divergence(Beta(1, 3), U).value == pytest.approx(0.623166, rel=1e-5)

    def test_uniform_vs_beta13(self):
        assert kl_divergence(U, Beta(1, 3)).value == pytest.approx(1.30043, rel=1e-5)

    def test_closed_forms(self):
        # KL(Beta(1,3) || U) = log2 3 - 2/(3 ln 2), KL(U || Beta(1,3)) = 2/ln 2 - log2 3
        assert kl_divergence(Beta(1, 3), U).value == pytest.approx(math.log2(3) - 2 / (3 * LN2), rel=1e-12)
        assert kl_divergence(U, Beta(1, 3)).value == pytest.approx(2 / LN2 - math.log2(3), rel=1e-12)

    @pytest.mark.parametrize("p", [Beta(2, 6), PowerRoot(10), U, Normal(1, 2), Exponential(3)], ids=repr)
    def test_self(self, p):
        assert kl_divergence(p, p).value == 0.0

    def test_normals(self):
        p, q = Normal(0.2, 1.5), Normal(-1.0, 0.8)
        exact = math.log(0.8 / 1.5) + (1.5 ** 2 + 1.2 ** 2) / (2 * 0.8 ** 2) - 0.5
        assert kl_divergence(p, q).value == pytest.approx(exact / LN2, rel=1e-10)

    def test_exponentials(self):
        p, q = Exponential(2.0), Exponential(0.5)
        exact = math.log(2.0 / 0.5) + 0.5 / 2.0 - 1
        assert kl_divergence(p, q).value == pytest.approx(exact / LN2, rel=1e-10)

    def test_against_scipy_quad(self):
        p, q = Beta(2, 6), Beta(3, 4)
        f = lambda x: p.pdf(x) * math.log2(p.pdf(x) / q.pdf(x))
        ref, _ = sp_integrate.quad(f, 0, 1, epsabs=1e-13, epsrel=1e-13, limit=200)
        assert kl_divergence(p, q).value == pytest.approx(ref, rel=1e-9)

    @pytest.mark.parametrize(
        "p, q", [(Beta(1, 3), U), (U, Beta(2, 6)), (Normal(0, 1), Normal(1, 2)), (Beta(2, 3), Beta(5, 1.5))], ids=repr
    )
    def test_x_domain_agrees(self, p, q):
        a = kl_divergence(p, q)
        b = kl_divergence(p, q, domain="x")
        assert abs(a.value - b.value) <= 1e-7 * max(1.0, a.value)

    def test_support_mismatch_is_infinite(self):
        assert math.isinf(kl_divergence(Normal(0, 1), U).value)
        assert math.isinf(kl_divergence(Normal(0, 1), Exponential(1)).value)

    def test_vanishing_reference(self):
        # PowerRoot(1) is uniform, so KL(U || Beta) finite; Beta(2,6) vanishes nowhere inside
        assert math.isfinite(kl_divergence(U, Beta(2, 6)).value)

    def test_unknown_domain(self):
        with pytest.raises(DomainError):
            kl_divergence(Beta(2, 6), U, domain="z")


class TestDinegentropy:
    def test_beta13(self):
        assert dinegentropy(Beta(1, 3), U).value == pytest.approx(1.923596, rel=1e-5)

    def test_beta26(self):
        assert dinegentropy(Beta(2, 6), U).value == pytest.approx(4.12548, rel=2e-5)

    @pytest.mark.parametrize("n, target", [(1, 0.0), (10, 11.685), (100, 141.398), (1000, 1439.814)])
    def test_power_root(self, n, target):
        value = dinegentropy(PowerRoot(n), U).value
        assert value == pytest.approx(target, rel=5e-4, abs=1e-9)
        assert value == pytest.approx(closed_power_root(n), rel=1e-9, abs=1e-12)

    def test_closed_form_reproduces_targets(self):
        targets = {10: 11.685, 100: 141.398, 1000: 1439.814}
        for n, t in targets.items():
            assert closed_power_root(n) == pytest.approx(t, rel=1e-4)

    def test_self(self):
        assert dinegentropy(Beta(2, 6), Beta(2, 6)).value == 0.0

    def test_normals_closed_form(self):
        # equal variances: J = (mu0 - mu1)^2 / sigma^2 nats
        res = dinegentropy(Normal(0, 2), Normal(1.5, 2))
        assert res.value == pytest.approx(1.5 ** 2 / 4 / LN2, rel=1e-10)

    def test_exponentials_closed_form(self):
        r0, r1 = 1.0, 0.25
        res = dinegentropy(Exponential(r0), Exponential(r1))
        assert res.value == pytest.approx((r0 / r1 + r1 / r0 - 2) / LN2, rel=1e-9)

    def test_paths_agree(self):
        res = dinegentropy(Beta(2, 6), U)
        assert abs(res.value - res.direct.value) <= 10 * (res.error_estimate + res.direct.error_estimate)
        assert res.value == pytest.approx(res.kl_forward.value + res.kl_reverse.value, abs=1e-12)

    def test_single_integral_against_scipy(self):
        f0, f1 = Beta(2, 6), Beta(3, 3)
        g = lambda t: (f0.pdf(t) - f1.pdf(t)) * math.log2(f0.pdf(t) / f1.pdf(t))
        ref, _ = sp_integrate.quad(g, 0, 1, epsabs=1e-13, epsrel=1e-13, limit=200)
        assert density_difference_integral(f0, f1).value == pytest.approx(ref, rel=1e-9)

    def test_support_mismatch(self):
        assert math.isinf(dinegentropy(Normal(0, 1), Beta(2, 2)).value)

    def test_monotone_in_n(self):
        values = [dinegentropy(PowerRoot(n), U).value for n in (1, 2, 5, 10, 100, 1000)]
        assert np.all(np.diff(values) > 0)


class TestDinegentropyOfRoc:
    def test_direct(self):
        assert dinegentropy_of_roc(DirectCdfRoc(Beta(1, 3))).value == pytest.approx(1.923596, rel=1e-5)

    def test_diagonal(self):
        assert dinegentropy_of_roc(diagonal()).value == 0.0

    def test_uniform_f0_reduces_to_f1(self):
        res = dinegentropy_of_roc(ParametricRoc(U, Beta(2, 6)))
        assert res.value == pytest.approx(4.12548, rel=2e-5)

    def test_parametric_normals(self):
        res = dinegentropy_of_roc(ParametricRoc(Normal(0, 1), Normal(1, 1)))
        assert res.value == pytest.approx(1 / LN2, rel=1e-10)

    def test_empirical_needs_densities(self):
        with pytest.raises(Unsupported):
            dinegentropy_of_roc(EmpiricalRoc([[0, 0], [0.5, 0.8], [1, 1]]))


class TestReport:
    def test_fields(self):
        r = metrics_report(DirectCdfRoc(Beta(1, 3)))
        assert r.auc == pytest.approx(0.75)
        assert r.gini == 2 * r.auc - 1
        assert r.a_star == r.auc - 0.5
        assert r.dinegentropy == pytest.approx(r.kl_forward + r.kl_reverse, abs=1e-9)
        assert r.kl_forward == pytest.approx(0.623166, rel=1e-5)
        assert r.converged and not r.approximate

    def test_json_keys(self):
        d = json.loads(report_to_json(metrics_report(DirectCdfRoc(Beta(2, 6)))))
        for key in ("auc", "a_star", "gini", "kl_forward_bits", "kl_reverse_bits", "dinegentropy_bits", "errors"):
            assert key in d

    def test_json_round_trip(self):
        r = metrics_report(DirectCdfRoc(Beta(2, 6)))
        text = report_to_json(r)
        back = report_from_json(text)
        assert report_to_json(back) == text
        assert back.auc == pytest.approx(r.auc, rel=1e-12)
        assert back.dinegentropy == pytest.approx(r.dinegentropy, rel=1e-12)

    def test_infinity_serialized_as_string(self):
        r = MetricsReport(0.6, 0.1, 0.2, math.inf, 1.0, math.inf, {"auc": 0.0})
        d = json.loads(report_to_json(r))
        assert d["kl_forward_bits"] == "inf" and d["dinegentropy_bits"] == "inf"
        assert math.isinf(report_from_json(report_to_json(r)).dinegentropy)

    def test_empirical_without_densities(self):
        r = metrics_report(EmpiricalRoc([[0, 0], [0.5, 0.8], [1, 1]]))
        assert r.auc == pytest.approx(0.65)
        assert r.dinegentropy is None


class TestCompare:
    def test_crossing_equal_auc(self):
        v = compare(DirectCdfRoc(Beta(2, 6)), DirectCdfRoc(Beta(1, 3)))
        assert v.winner is Winner.A
        assert v.rationale is Rationale.BY_DINEGENTROPY
        assert v.auc_tie and v.crossing_count == 1

    def test_order_swapped(self):
        v = compare(DirectCdfRoc(Beta(1, 3)), DirectCdfRoc(Beta(2, 6)))
        assert v.winner is Winner.B

    def test_identical(self):
        a = DirectCdfRoc(Beta(2, 6))
        v = compare(a, a)
        assert v.winner is Winner.TIE and v.rationale is Rationale.IDENTICAL

    def test_by_auc(self):
        v = compare(DirectCdfRoc(Beta(1, 3)), diagonal())
        assert v.winner is Winner.A and v.rationale is Rationale.BY_AUC
        assert v.crossing_count == 0 and not v.auc_tie

    def test_rationale_invariant(self):
        pairs = [
            (DirectCdfRoc(Beta(1, 3)), diagonal()),
            (DirectCdfRoc(Beta(2, 6)), DirectCdfRoc(Beta(1, 3))),
            (ParametricRoc(Normal(0, 1), Normal(1, 1)), ParametricRoc(Normal(0, 1), Normal(1, 3))),
        ]
        for a, b in pairs:
            v = compare(a, b)
            if v.rationale is Rationale.BY_DINEGENTROPY:
                assert v.auc_tie or v.crossing_count > 0

    def test_infinite_dinegentropy_wins(self):
        # the binormal with unequal variances crosses the diagonal-like curve; the
        # direct Beta(2,6) curve has finite dinegentropy while disjoint supports do not
        a = ParametricRoc(Beta(2, 2), Normal(0.5, 0.1))
        b = DirectCdfRoc(Beta(2, 6))
        v = compare(a, b, auc_tie_tol=1.0)
        assert math.isinf(v.report_a.dinegentropy)
        assert v.winner is Winner.A and v.rationale is Rationale.BY_DINEGENTROPY

    def test_verdict_json(self):
        d = json.loads(report_to_json(compare(DirectCdfRoc(Beta(2, 6)), DirectCdfRoc(Beta(1, 3)))))
        assert d["winner"] == "A" and d["rationale"] == "ByDinegentropy"
        assert len(d["crossings"]) == 1 and set(d) >= {"a", "b", "auc_tie", "crossing_count"}


class TestProperties:
    def test_kl_non_negative_random_pairs(self):
        rng = np.random.default_rng(20240611)
        for _ in range(100):
            a, b, c, d = rng.uniform(0.3, 8.0, size=4)
            value = kl_divergence(Beta(a, b), Beta(c, d)).value
            assert value >= -1e-9

    def test_symmetry_and_decomposition(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            p, q = Beta(*rng.uniform(0.5, 6, 2)), Beta(*rng.uniform(0.5, 6, 2))
            j_pq, j_qp = dinegentropy(p, q), dinegentropy(q, p)
            assert abs(j_pq.value - j_qp.value) <= max(j_pq.error_estimate + j_qp.error_estimate, 1e-12)
            assert abs(j_pq.value - (j_pq.kl_forward.value + j_pq.kl_reverse.value)) <= 1e-9

    def test_integrand_sign(self):
        pairs = [(Beta(2, 6), U), (Beta(1, 3), Beta(2, 6)), (Normal(0, 1), Normal(2, 0.5))]
        for f0, f1 in pairs:
            t = f0.quantile(np.linspace(0.001, 0.999, 999))
            d0, d1 = f0.pdf(t), f1.pdf(t)
            ok = (d0 > 0) & (d1 > 0)
            w = (d0[ok] - d1[ok]) * np.log2(d0[ok] / d1[ok])
            assert np.all(w >= 0)

    def test_nonconvergence_warns(self):
        from rocdin import NonConvergenceWarning, QuadratureConfig

        cfg = QuadratureConfig(rel_tol=1e-16, abs_tol=1e-300, max_depth=10)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            res = kl_divergence(Beta(0.3, 3), Beta(4, 0.4), cfg)
        if not res.converged:
            assert any(issubclass(w.category, NonConvergenceWarning) for w in caught)
