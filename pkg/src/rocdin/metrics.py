"""AUC, Gini coefficient, Kullback-Leibler distances and dinegentropy.

Information quantities are in bits. Integrals over a law ``p`` are taken in
its probability domain, ``E_p[h(X)] = int_0^1 h(Q_p(u)) du``, which turns
density singularities and infinite supports into at worst logarithmic
endpoint behaviour for the quadrature engine.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .distributions import ContinuousDistribution, Uniform01
from .errors import DisagreementError, DomainError, NonConvergenceWarning, Unsupported
from .quadrature import DEFAULT_CONFIG, IntegralResult, QuadratureConfig, integrate
from .roc import DirectCdfRoc, EmpiricalRoc, ParametricRoc, RocCurve, crossings

LN2 = math.log(2.0)
_LOWER_PROBE = np.array([1e-12, 1e-8, 1e-4])
_UPPER_PROBE = 1.0 - _LOWER_PROBE


def nats_to_bits(x):
    return x / LN2


def bits_to_nats(x):
    return x * LN2


@dataclass(frozen=True)
class Estimate:
    """A computed quantity with its quadrature error estimate."""

    value: float
    error_estimate: float = 0.0
    converged: bool = True

    def __float__(self):
        return float(self.value)

    @property
    def is_finite(self):
        return math.isfinite(self.value)


@dataclass(frozen=True)
class DinegentropyResult(Estimate):
    """Dinegentropy with its two K-L parts and the single-integral cross-check."""

    kl_forward: Estimate = field(default_factory=lambda: Estimate(0.0))
    kl_reverse: Estimate = field(default_factory=lambda: Estimate(0.0))
    direct: Optional[Estimate] = None


INF = Estimate(math.inf, 0.0, True)


def _warn_if_unconverged(res: IntegralResult, what: str):
    if not res.converged:
        warnings.warn(
            f"{what}: quadrature did not reach tolerance (error estimate {res.error_estimate:.3g})",
            NonConvergenceWarning,
            stacklevel=3,
        )


def _to_bits(res: IntegralResult) -> Estimate:
    return Estimate(res.value / LN2, res.error_estimate / LN2, res.converged)


# ---------------------------------------------------------------- AUC / Gini


def auc(curve: RocCurve, cfg: QuadratureConfig = DEFAULT_CONFIG) -> Estimate:
    """Area under the ROC curve."""
    if isinstance(curve, EmpiricalRoc):
        x, y = curve.fpp, curve.sensitivity
        return Estimate(float(math.fsum(np.diff(x) * (y[1:] + y[:-1]) / 2.0)), 0.0, True)
    res = integrate(curve._value, 0.0, 1.0, cfg)
    _warn_if_unconverged(res, "auc")
    value = res.value
    if value < 0 and -value <= res.error_estimate:
        value = 0.0
    elif value > 1 and value - 1 <= res.error_estimate:
        value = 1.0
    return Estimate(value, res.error_estimate, res.converged)


def a_star(auc_value: float) -> float:
    """Area between the curve and the diagonal."""
    return float(auc_value) - 0.5


def gini(auc_value: float) -> float:
    """Gini coefficient 2 * AUC - 1 (equivalently twice ``a_star``)."""
    auc_value = float(auc_value)
    if not 0.0 <= auc_value <= 1.0:
        raise DomainError(f"AUC must lie in [0, 1], got {auc_value}")
    return 2.0 * auc_value - 1.0


# ------------------------------------------------------------ KL divergence


def _support_contained(p: ContinuousDistribution, q: ContinuousDistribution) -> bool:
    return q.support[0] <= p.support[0] and p.support[1] <= q.support[1]


def _q_vanishes_on_p(p, q, grid=1024) -> bool:
    u = (np.arange(grid) + 0.5) / grid
    with np.errstate(all="ignore"):
        lq = q.logpdf_at_point(p.quantile_point(u))
    return bool(np.any(np.isneginf(lq)))


def kl_divergence(
    p: ContinuousDistribution,
    q: ContinuousDistribution,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    *,
    domain: str = "probability",
) -> Estimate:
    """KL(p || q) = int p log2(p / q), in bits.

    ``domain="probability"`` (default) integrates log(p/q) at Q_p(u) over
    u in (0, 1); ``domain="x"`` integrates p log(p/q) over the support of p,
    truncating infinite ends by tail mass. Returns an infinite estimate when
    q vanishes where p has mass.
    """
    if p == q:
        return Estimate(0.0, 0.0, True)
    if not _support_contained(p, q) or _q_vanishes_on_p(p, q):
        return INF
    if domain == "probability":

        def integrand(u):
            return _log_ratio(p, q, u)

        res = integrate(integrand, 0.0, 1.0, cfg)
    elif domain == "x":

        def integrand(x):
            lp = p.logpdf(x)
            with np.errstate(all="ignore"):
                out = np.exp(lp) * (lp - q.logpdf(x))
            return np.where(np.isneginf(lp), 0.0, out)

        lo, hi = p.support
        res = integrate(integrand, lo, hi, cfg, tail_mass=lambda a, b: float(p.cdf(a) + p.sf(b) + q.cdf(a) + q.sf(b)))
    else:
        raise DomainError(f"unknown integration domain {domain!r}")
    _warn_if_unconverged(res, f"kl_divergence({p!r} || {q!r})")
    out = _to_bits(res)
    if out.value < 0 and -out.value <= out.error_estimate:
        out = Estimate(0.0, out.error_estimate, out.converged)
    return out


# -------------------------------------------------------------- dinegentropy


def _log_ratio(p, q, u):
    """log p - log q at x = Q_p(u), in nats."""
    pt = p.quantile_point(u)
    with np.errstate(all="ignore"):
        return p.logpdf_at_point(pt) - q.logpdf_at_point(pt)


def _tail_score(ref, other, probe):
    """Largest log(other / ref) near one end of ref's probability domain."""
    with np.errstate(all="ignore"):
        lr = -_log_ratio(ref, other, probe)
    lr = lr[np.isfinite(lr)]
    return float(lr.max()) if lr.size else math.inf


def _weighted_log_ratio_integral(ref, other, cfg, lo=0.0, hi=1.0) -> IntegralResult:
    """int (ref - other) log(ref / other) in nats, substituting x = Q_ref(u).

    With r = other / ref at Q_ref(u) the integrand is (r - 1) log r; ``lo``
    and ``hi`` bound u.
    """

    def integrand(u):
        with np.errstate(all="ignore"):
            log_r = -_log_ratio(ref, other, u)
            out = np.expm1(log_r) * log_r
        # r -> 0: the integrand tends to -log r, i.e. to +inf only logarithmically
        return np.where(np.isneginf(log_r), np.inf, out)

    return integrate(integrand, lo, hi, cfg)


def _pick_reference(f0, f1, probe):
    return f1 if _tail_score(f1, f0, probe) < _tail_score(f0, f1, probe) else f0


def _balanced_split(low_ref, high_ref):
    """Threshold t with F_low(t) = 1 - F_high(t), as (F_low(t), F_high(t)).

    Both pieces of the split integral then keep a sizeable share of their
    domain; None when the balance point sits too far in a tail.
    """
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if mid < float(high_ref.sf(low_ref.quantile(mid))):
            lo = mid
        else:
            hi = mid
    u_low = 0.5 * (lo + hi)
    u_high = float(high_ref.cdf(low_ref.quantile(u_low)))
    if not (1e-6 < u_low < 1 - 1e-6 and 1e-6 < u_high < 1 - 1e-6):
        return None
    return u_low, u_high


def density_difference_integral(f0, f1, cfg: QuadratureConfig = DEFAULT_CONFIG) -> Estimate:
    """The single integral int (f0 - f1) log2(f0 / f1) dt.

    The integrand is symmetric in the two laws, so near each end of the
    support the probability domain of the law with the heavier density there
    is used; the likelihood ratio then stays bounded at both ends.
    """
    low_ref = _pick_reference(f0, f1, _LOWER_PROBE)
    high_ref = _pick_reference(f0, f1, _UPPER_PROBE)
    low_other = f1 if low_ref is f0 else f0
    high_other = f1 if high_ref is f0 else f0
    split = _balanced_split(low_ref, high_ref) if low_ref is not high_ref else None
    if split is None:
        res = _weighted_log_ratio_integral(low_ref, low_other, cfg)
    else:
        u_low, u_high = split
        a = _weighted_log_ratio_integral(low_ref, low_other, cfg, 0.0, u_low)
        b = _weighted_log_ratio_integral(high_ref, high_other, cfg, u_high, 1.0)
        value = a.value + b.value
        error = a.error_estimate + b.error_estimate
        res = IntegralResult(
            value, error, a.evaluations + b.evaluations, a.converged and b.converged and error <= cfg.tolerance(value)
        )
    _warn_if_unconverged(res, "dinegentropy (single integral)")
    return _to_bits(res)


def _check_agreement(a: Estimate, b: Estimate, what: str):
    tol = 10.0 * (a.error_estimate + b.error_estimate)
    if abs(a.value - b.value) > tol:
        raise DisagreementError(
            f"{what}: {a.value!r} vs {b.value!r} differ by {abs(a.value - b.value):.3g} (> {tol:.3g})"
        )


def dinegentropy(
    f0: ContinuousDistribution, f1: ContinuousDistribution, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> DinegentropyResult:
    """J(f0, f1) = KL(f0 || f1) + KL(f1 || f0), in bits.

    Also evaluated as the single integral of (f0 - f1) log2(f0 / f1); the two
    routes must agree within ten times their combined error estimates.
    """
    if f0 == f1:
        zero = Estimate(0.0, 0.0, True)
        return DinegentropyResult(0.0, 0.0, True, zero, zero, zero)
    kf = kl_divergence(f0, f1, cfg)
    kr = kl_divergence(f1, f0, cfg)
    if not (kf.is_finite and kr.is_finite):
        return DinegentropyResult(math.inf, 0.0, True, kf, kr, None)
    total = Estimate(kf.value + kr.value, kf.error_estimate + kr.error_estimate, kf.converged and kr.converged)
    direct = density_difference_integral(f0, f1, cfg)
    _check_agreement(total, direct, "dinegentropy")
    return DinegentropyResult(total.value, total.error_estimate, total.converged, kf, kr, direct)


def dinegentropy_of_roc(curve: RocCurve, cfg: QuadratureConfig = DEFAULT_CONFIG) -> DinegentropyResult:
    """Dinegentropy of an ROC curve against the diagonal.

    ``kl_forward`` is KL(ROC density || uniform) and ``kl_reverse`` is
    KL(uniform || ROC density).
    """
    if isinstance(curve, DirectCdfRoc):
        return dinegentropy(curve.g, Uniform01(), cfg)
    if isinstance(curve, ParametricRoc):
        res = dinegentropy(curve.f1, curve.f0, cfg)
        if res.is_finite and curve.f0 != curve.f1:
            # the induced density of F1 F0^{-1} on [0, 1], against the uniform
            via_roc = _weighted_log_ratio_integral(curve.f0, curve.f1, cfg)
            if via_roc.converged:
                _check_agreement(res, _to_bits(via_roc), "dinegentropy via ROC density")
        return res
    if isinstance(curve, EmpiricalRoc):
        if curve.densities is None:
            raise Unsupported("empirical curves have no densities; attach density estimates first")
        f0, f1 = curve.densities
        return dinegentropy(f1, f0, cfg)
    raise Unsupported(f"unknown curve type {type(curve).__name__}")


# ------------------------------------------------------------------ reports


@dataclass(frozen=True)
class MetricsReport:
    auc: float
    a_star: float
    gini: float
    kl_forward: Optional[float]
    kl_reverse: Optional[float]
    dinegentropy: Optional[float]
    error_estimates: dict
    approximate: bool = False
    converged: bool = True

    def to_dict(self):
        return {
            "auc": _num(self.auc),
            "a_star": _num(self.a_star),
            "gini": _num(self.gini),
            "kl_forward_bits": _num(self.kl_forward),
            "kl_reverse_bits": _num(self.kl_reverse),
            "dinegentropy_bits": _num(self.dinegentropy),
            "errors": {k: _num(v) for k, v in self.error_estimates.items()},
            "approximate": self.approximate,
            "converged": self.converged,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            auc=_parse_num(d["auc"]),
            a_star=_parse_num(d["a_star"]),
            gini=_parse_num(d["gini"]),
            kl_forward=_parse_num(d["kl_forward_bits"]),
            kl_reverse=_parse_num(d["kl_reverse_bits"]),
            dinegentropy=_parse_num(d["dinegentropy_bits"]),
            error_estimates={k: _parse_num(v) for k, v in d["errors"].items()},
            approximate=bool(d.get("approximate", False)),
            converged=bool(d.get("converged", True)),
        )


def metrics_report(curve: RocCurve, cfg: QuadratureConfig = DEFAULT_CONFIG) -> MetricsReport:
    area = auc(curve, cfg)
    errors = {"auc": area.error_estimate}
    converged = area.converged
    approximate = False
    try:
        j = dinegentropy_of_roc(curve, cfg)
    except Unsupported:
        j = None
    if j is None:
        kf = kr = jv = None
    else:
        kf, kr, jv = j.kl_forward.value, j.kl_reverse.value, j.value
        errors.update(
            kl_forward=j.kl_forward.error_estimate,
            kl_reverse=j.kl_reverse.error_estimate,
            dinegentropy=j.error_estimate,
        )
        converged = converged and j.converged
        approximate = isinstance(curve, EmpiricalRoc)
    return MetricsReport(
        auc=area.value,
        a_star=a_star(area.value),
        gini=gini(area.value),
        kl_forward=kf,
        kl_reverse=kr,
        dinegentropy=jv,
        error_estimates=errors,
        approximate=approximate,
        converged=converged,
    )


class Winner(str, Enum):
    A = "A"
    B = "B"
    TIE = "Tie"


class Rationale(str, Enum):
    BY_AUC = "ByAUC"
    BY_DINEGENTROPY = "ByDinegentropy"
    IDENTICAL = "Identical"


@dataclass(frozen=True)
class ComparisonVerdict:
    report_a: MetricsReport
    report_b: MetricsReport
    crossing_count: int
    crossings: list
    auc_tie: bool
    winner: Winner
    rationale: Rationale

    def to_dict(self):
        return {
            "winner": self.winner.value,
            "rationale": self.rationale.value,
            "auc_tie": self.auc_tie,
            "crossing_count": self.crossing_count,
            "crossings": [[_num(lo), _num(hi)] for lo, hi in self.crossings],
            "a": self.report_a.to_dict(),
            "b": self.report_b.to_dict(),
        }


def compare(
    a: RocCurve,
    b: RocCurve,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    auc_tie_tol: float = 1e-6,
    *,
    grid_size: int = 4096,
    dinegentropy_tie_tol: float = 1e-6,
) -> ComparisonVerdict:
    """Rank two tests.

    Without crossings and with distinct AUCs the larger AUC wins. Otherwise
    the larger dinegentropy wins; a tie requires both AUC and dinegentropy to
    agree within tolerance.
    """
    ra, rb = metrics_report(a, cfg), metrics_report(b, cfg)
    brackets = crossings(a, b, grid_size)
    auc_tie = abs(ra.auc - rb.auc) <= auc_tie_tol

    def by_auc():
        return Winner.A if ra.auc > rb.auc else Winner.B

    if not brackets and not auc_tie:
        winner, why = by_auc(), Rationale.BY_AUC
    else:
        ja, jb = ra.dinegentropy, rb.dinegentropy
        if ja is None or jb is None:
            raise Unsupported("curves cross or tie on AUC, and a dinegentropy is unavailable")
        if math.isinf(ja) and math.isinf(jb):
            j_tie = True
        elif math.isinf(ja) or math.isinf(jb):
            j_tie = False
        else:
            j_tie = abs(ja - jb) <= max(
                dinegentropy_tie_tol * max(abs(ja), abs(jb), 1.0),
                10 * (ra.error_estimates["dinegentropy"] + rb.error_estimates["dinegentropy"]),
            )
        if not j_tie:
            winner, why = (Winner.A if ja > jb else Winner.B), Rationale.BY_DINEGENTROPY
        elif auc_tie:
            winner, why = Winner.TIE, Rationale.IDENTICAL
        else:
            winner, why = by_auc(), Rationale.BY_AUC
    return ComparisonVerdict(ra, rb, len(brackets), brackets, auc_tie, winner, why)


# ------------------------------------------------------------ serialization


def _num(x):
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.12g}")


def _parse_num(x):
    if x is None:
        return None
    if isinstance(x, str):
        return float(x)
    return float(x)


def report_to_json(report, **kwargs) -> str:
    """Serialize a report or verdict; infinities are written as ``"inf"``."""
    return json.dumps(report.to_dict(), **kwargs)


def report_from_json(text: str) -> MetricsReport:
    return MetricsReport.from_dict(json.loads(text))
