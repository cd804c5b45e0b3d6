"""ROC curves: threshold-parametric, direct-CDF and empirical.

A curve maps false positive probability ``u`` to sensitivity. For a pair of
class laws (F0 for normals, F1 for diseased) the curve is
``u -> 1 - F1(F0^{-1}(1 - u))``; a CDF on [0, 1] may also be read directly
as a curve, and labeled data give an empirical polyline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .distributions import ContinuousDistribution, _as_output
from .errors import DomainError, UsageError, ZeroDenominator


class ThresholdPoint(NamedTuple):
    t: float
    sensitivity: float
    specificity: float
    fpp: float


class DominanceCheck(NamedTuple):
    holds: bool
    violations: np.ndarray


class RocCurve:
    """Base class. Subclasses implement ``_value`` on arrays of fpp values."""

    def roc_value(self, u):
        u_arr = np.asarray(u, dtype=float)
        if np.any(np.isnan(u_arr)) or np.any((u_arr < 0) | (u_arr > 1)):
            raise DomainError(f"fpp must lie in [0, 1], got {u!r}")
        return _as_output(self._value(u_arr), u)

    def __call__(self, u):
        return self.roc_value(u)


@dataclass(frozen=True)
class ParametricRoc(RocCurve):
    """Curve generated by the score laws of the normal (f0) and diseased (f1) class."""

    f0: ContinuousDistribution
    f1: ContinuousDistribution

    def _value(self, u):
        out = np.empty(u.shape)
        out[u == 0] = 0.0 if self.f1.support[1] <= self.f0.support[1] else float(self.f1.sf(self.f0.support[1]))
        out[u == 1] = 1.0
        inner = (u > 0) & (u < 1)
        if inner.any():
            out[inner] = self.f1.sf(self.f0.quantile(1.0 - u[inner]))
        return out

    def roc_density(self, s):
        """Density of the reflected curve F1(F0^{-1}(s)): the likelihood ratio at F0^{-1}(s)."""
        s_arr = np.asarray(s, dtype=float)
        with np.errstate(all="ignore"):
            pt = self.f0.quantile_point(s_arr)
            log_ratio = self.f1.logpdf_at_point(pt) - self.f0.logpdf_at_point(pt)
            out = np.exp(log_ratio)
        return _as_output(out, s)


@dataclass(frozen=True)
class DirectCdfRoc(RocCurve):
    """A distribution function on [0, 1] read directly as an ROC curve."""

    g: ContinuousDistribution

    def __post_init__(self):
        if tuple(self.g.support) != (0.0, 1.0):
            raise DomainError(f"direct-CDF curves need support [0, 1], got {self.g.support}")

    def _value(self, u):
        return self.g.cdf(u)


@dataclass(frozen=True, eq=False)
class EmpiricalRoc(RocCurve):
    """Polyline through ``points`` (fpp, sensitivity), from (0, 0) to (1, 1).

    ``densities`` optionally carries (f0, f1) estimates so that density-based
    metrics can be computed; they are approximate by construction.
    """

    points: np.ndarray
    densities: Optional[tuple] = field(default=None)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise DomainError("empirical curve needs an (m, 2) array of vertices")
        if not (np.allclose(pts[0], 0.0) and np.allclose(pts[-1], 1.0)):
            raise DomainError("empirical curve must start at (0, 0) and end at (1, 1)")
        if np.any(np.diff(pts, axis=0) < 0):
            raise DomainError("empirical curve vertices must be non-decreasing in both coordinates")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def fpp(self):
        return self.points[:, 0]

    @property
    def sensitivity(self):
        return self.points[:, 1]

    def _value(self, u):
        x, y = self.fpp, self.sensitivity
        j = np.searchsorted(x, u, side="right")
        j = np.clip(j, 1, x.size)
        out = np.empty(u.shape)
        end = j == x.size
        out[end] = y[-1]
        k = ~end
        jj = j[k]
        x0, x1, y0, y1 = x[jj - 1], x[jj], y[jj - 1], y[jj]
        out[k] = y0 + (u[k] - x0) * (y1 - y0) / (x1 - x0)
        return out

    def __eq__(self, other):
        return isinstance(other, EmpiricalRoc) and np.array_equal(self.points, other.points)

    __hash__ = None


def diagonal() -> ParametricRoc:
    """The random-test curve u -> u."""
    from .distributions import Uniform01

    return ParametricRoc(Uniform01(), Uniform01())


def roc_value(curve: RocCurve, u):
    return curve.roc_value(u)


def _require_parametric(curve, op):
    if not isinstance(curve, ParametricRoc):
        raise UsageError(f"{op} needs a parametric curve, got {type(curve).__name__}")


def threshold_point(curve: ParametricRoc, t: float) -> ThresholdPoint:
    """Sensitivity, specificity and false positive probability at threshold ``t``."""
    _require_parametric(curve, "threshold_point")
    t = float(t)
    if not np.isfinite(t):
        raise DomainError("threshold must be finite")
    specificity = float(curve.f0.cdf(t))
    return ThresholdPoint(t, float(curve.f1.sf(t)), specificity, 1.0 - specificity)


def reflected_roc_value(curve: ParametricRoc, s):
    """F1(F0^{-1}(s)): one minus sensitivity as a function of specificity."""
    _require_parametric(curve, "reflected_roc_value")
    s_arr = np.asarray(s, dtype=float)
    if np.any((s_arr < 0) | (s_arr > 1)):
        raise DomainError(f"specificity must lie in [0, 1], got {s!r}")
    return _as_output(curve.f1.cdf(curve.f0.quantile(s_arr)), s)


def likelihood_ratio(curve: ParametricRoc, t: float) -> float:
    """f1(t) / f0(t); 1 where both densities vanish."""
    _require_parametric(curve, "likelihood_ratio")
    d0 = float(curve.f0.pdf(t))
    d1 = float(curve.f1.pdf(t))
    if d0 == 0.0:
        if d1 == 0.0:
            return 1.0
        raise ZeroDenominator(t)
    return d1 / d0


def threshold_grid(curve: ParametricRoc, grid_size: int = 999) -> np.ndarray:
    """Sorted union of F0 and F1 quantiles at k / (grid_size + 1), k = 1..grid_size."""
    _require_parametric(curve, "threshold_grid")
    p = np.arange(1, grid_size + 1) / (grid_size + 1)
    return np.unique(np.concatenate([curve.f0.quantile(p), curve.f1.quantile(p)]))


def check_dominance(curve: ParametricRoc, grid_size: int = 999) -> DominanceCheck:
    """Test 1 - F1(t) >= 1 - F0(t) on a quantile-spaced threshold grid.

    Violating thresholds mark where the curve dips below the diagonal.
    """
    _require_parametric(curve, "check_dominance")
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    t = threshold_grid(curve, grid_size)
    bad = curve.f1.sf(t) < curve.f0.sf(t) - 1e-12
    return DominanceCheck(bool(not bad.any()), t[bad])


def crossings(a: RocCurve, b: RocCurve, grid_size: int = 4096, zero_tol: float = 1e-12):
    """Brackets ``(u_lo, u_hi)`` of width <= 1e-9 around each sign change of a(u) - b(u).

    Points where the curves merely touch (no sign change) are not reported.
    """
    if grid_size < 16:
        raise DomainError("grid_size must be at least 16")
    u = np.arange(1, grid_size) / grid_size
    d = a.roc_value(u) - b.roc_value(u)
    sign = np.where(np.abs(d) <= zero_tol, 0, np.sign(d)).astype(int)
    nz = np.flatnonzero(sign)
    brackets = []
    for i, j in zip(nz[:-1], nz[1:]):
        if sign[i] == sign[j]:
            continue
        lo, hi, s_lo = u[i], u[j], sign[i]
        while hi - lo > 1e-9:
            mid = 0.5 * (lo + hi)
            dm = float(a.roc_value(mid) - b.roc_value(mid))
            if abs(dm) <= zero_tol:
                lo = hi = mid
                break
            if np.sign(dm) == s_lo:
                lo = mid
            else:
                hi = mid
        brackets.append((float(lo), float(hi)))
    return brackets
