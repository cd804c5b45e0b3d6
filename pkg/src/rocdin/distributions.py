"""Parametric univariate laws with density, CDF and quantile.

All methods accept scalars or arrays and return a float for scalar input.
Objects are immutable; every evaluation is a pure function of its input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import betaln, log_ndtr, ndtr, ndtri, xlog1py, xlogy

from ._special import betainc_pair, solve_quantile
from .errors import DomainError, ParseError


class QuantilePoint(NamedTuple):
    """A quantile x together with log(x) and log(1 - x), each computed accurately.

    On [0, 1] the point may sit so close to an end that x rounds to 0 or 1;
    the logs keep the information a density needs there.
    """

    x: np.ndarray
    log_x: np.ndarray
    log_1mx: np.ndarray


def _scaled_log(c, log_val):
    # c * log_val with the convention 0 * (-inf) = 0
    return np.zeros_like(log_val) if c == 0 else c * log_val


def _as_output(values, like):
    if np.ndim(like) == 0:
        return float(values)
    return values


class ContinuousDistribution:
    """Base class; subclasses supply the vectorized ``_pdf`` family of methods.

    ``support`` is the closed interval ``(lo, hi)``; either end may be infinite.
    """

    support: tuple[float, float] = (-math.inf, math.inf)
    approximate = False

    def pdf(self, x):
        x_arr = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.exp(self._logpdf(x_arr))
        return _as_output(out, x)

    def logpdf(self, x):
        x_arr = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = self._logpdf(x_arr)
        return _as_output(out, x)

    def cdf(self, x):
        x_arr = np.asarray(x, dtype=float)
        return _as_output(self._cdf(x_arr), x)

    def sf(self, x):
        """Survival function 1 - F(x), evaluated without cancellation."""
        x_arr = np.asarray(x, dtype=float)
        return _as_output(self._sf(x_arr), x)

    def quantile(self, p):
        p_arr = np.asarray(p, dtype=float)
        if np.any(np.isnan(p_arr)) or np.any((p_arr < 0) | (p_arr > 1)):
            raise DomainError(f"quantile requires 0 <= p <= 1, got {p!r}")
        lo, hi = self.support
        out = np.empty(p_arr.shape)
        out[p_arr == 0] = lo
        out[p_arr == 1] = hi
        inner = (p_arr > 0) & (p_arr < 1)
        if inner.any():
            out[inner] = self._quantile(p_arr[inner])
        return _as_output(out, p)

    def quantile_point(self, u) -> QuantilePoint:
        """Quantiles of ``u`` in (0, 1) as a :class:`QuantilePoint`."""
        u_arr = np.asarray(u, dtype=float)
        x = np.asarray(self.quantile(u_arr), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return QuantilePoint(x, np.log(x), np.log1p(-x))

    def logpdf_at_point(self, pt: QuantilePoint):
        """log f at a point produced by any law's ``quantile_point``."""
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self._logpdf(pt.x)

    def logpdf_at_quantile(self, u):
        """log f(Q(u)) for u in (0, 1), finite even where Q(u) rounds to an end."""
        out = self.logpdf_at_point(self.quantile_point(u))
        return _as_output(out, u)

    def _sf(self, x):
        return 1.0 - self._cdf(x)

    def _quantile(self, p):
        lo, hi = self.support
        return solve_quantile(p, self._cdf, self._sf, lambda x: np.exp(self._logpdf(x)), lo, hi)

    def _in_support(self, x):
        lo, hi = self.support
        return (x >= lo) & (x <= hi)


@dataclass(frozen=True, repr=False)
class Beta(ContinuousDistribution):
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0 and math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError(f"Beta requires alpha > 0 and beta > 0, got ({self.alpha}, {self.beta})")
        object.__setattr__(self, "support", (0.0, 1.0))
        object.__setattr__(self, "_log_norm", float(betaln(self.alpha, self.beta)))

    def __repr__(self):
        return f"Beta({self.alpha:g}, {self.beta:g})"

    def _logpdf(self, x):
        inside = self._in_support(x)
        xc = np.clip(x, 0.0, 1.0)
        val = xlogy(self.alpha - 1.0, xc) + xlog1py(self.beta - 1.0, -xc) - self._log_norm
        return np.where(inside, val, -np.inf)

    def _cdf(self, x):
        return betainc_pair(self.alpha, self.beta, np.clip(x, 0.0, 1.0))[0]

    def _sf(self, x):
        return betainc_pair(self.alpha, self.beta, np.clip(x, 0.0, 1.0))[1]

    def _lower_tail_log(self, p):
        # log x from the leading term of the CDF near 0: x^a / (a B(a, b))
        with np.errstate(divide="ignore"):
            return (np.log(p) + math.log(self.alpha) + self._log_norm) / self.alpha

    def _quantile(self, p):
        a, b = self.alpha, self.beta
        if a == 1.0:
            return -np.expm1(np.log1p(-p) / b)
        if b == 1.0:
            return np.exp(np.log(p) / a)
        # tail approximations of the CDF give the starting point
        lower_guess = np.exp(self._lower_tail_log(p))
        upper_guess = -np.expm1((np.log1p(-p) + math.log(b) + self._log_norm) / b)
        mean = a / (a + b)
        x0 = np.where(p < self._cdf(np.asarray(mean)), np.minimum(lower_guess, mean), np.maximum(upper_guess, mean))
        x0 = np.clip(x0, 1e-300, 1.0 - 1e-16)
        x = solve_quantile(p, self._cdf, self._sf, lambda x: np.exp(self._logpdf(x)), 0.0, 1.0, x0=x0)
        # below the smallest normal double the leading tail term is exact to rounding
        return np.where(lower_guess < 1e-300, lower_guess, x)

    def _point_lower(self, p):
        x = self._quantile(p)
        with np.errstate(divide="ignore"):
            log_x = np.where(x < 1e-300, self._lower_tail_log(p), np.log(x))
        return x, log_x

    def quantile_point(self, u) -> QuantilePoint:
        # the upper half comes from the mirrored law so that 1 - x keeps its digits
        u = np.asarray(u, dtype=float)
        x = np.empty(u.shape)
        log_x = np.empty(u.shape)
        log_1mx = np.empty(u.shape)
        low = u <= 0.5
        if low.any():
            xl, lxl = self._point_lower(u[low])
            x[low], log_x[low], log_1mx[low] = xl, lxl, np.log1p(-xl)
        high = ~low
        if high.any():
            xc, lxc = Beta(self.beta, self.alpha)._point_lower(1.0 - u[high])
            x[high], log_x[high], log_1mx[high] = 1.0 - xc, np.log1p(-xc), lxc
        return QuantilePoint(x, log_x, log_1mx)

    def logpdf_at_point(self, pt: QuantilePoint):
        val = _scaled_log(self.alpha - 1.0, pt.log_x) + _scaled_log(self.beta - 1.0, pt.log_1mx) - self._log_norm
        return np.where(self._in_support(pt.x), val, -np.inf)


@dataclass(frozen=True, repr=False)
class PowerRoot(ContinuousDistribution):
    """CDF x**(1/n) on [0, 1]; n = 1 is the uniform law."""

    n: float

    def __post_init__(self):
        if not (self.n >= 1 and math.isfinite(self.n)):
            raise DomainError(f"PowerRoot requires n >= 1, got {self.n}")
        object.__setattr__(self, "support", (0.0, 1.0))

    def __repr__(self):
        return f"PowerRoot({self.n:g})"

    def _logpdf(self, x):
        inside = self._in_support(x)
        val = -math.log(self.n) + xlogy(1.0 / self.n - 1.0, np.clip(x, 0.0, 1.0))
        return np.where(inside, val, -np.inf)

    def _cdf(self, x):
        return np.clip(x, 0.0, 1.0) ** (1.0 / self.n)

    def _sf(self, x):
        xc = np.clip(x, 0.0, 1.0)
        with np.errstate(divide="ignore"):
            return np.where(xc > 0, -np.expm1(np.log(xc) / self.n), 1.0)

    def _quantile(self, p):
        return p**self.n

    def quantile_point(self, u) -> QuantilePoint:
        # x = u^n underflows for large n; log x = n log u does not
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore"):
            log_x = self.n * np.log(u)
            return QuantilePoint(np.exp(log_x), log_x, np.log(-np.expm1(log_x)))

    def logpdf_at_point(self, pt: QuantilePoint):
        val = -math.log(self.n) + _scaled_log(1.0 / self.n - 1.0, pt.log_x)
        return np.where(self._in_support(pt.x), val, -np.inf)


@dataclass(frozen=True, repr=False)
class Uniform01(ContinuousDistribution):
    def __post_init__(self):
        object.__setattr__(self, "support", (0.0, 1.0))

    def __repr__(self):
        return "Uniform01()"

    def _logpdf(self, x):
        return np.where(self._in_support(x), 0.0, -np.inf)

    def _cdf(self, x):
        return np.clip(x, 0.0, 1.0)

    def _sf(self, x):
        return 1.0 - np.clip(x, 0.0, 1.0)

    def _quantile(self, p):
        return p.copy()

    def logpdf_at_point(self, pt: QuantilePoint):
        return np.where(self._in_support(pt.x), 0.0, -np.inf)


@dataclass(frozen=True, repr=False)
class Normal(ContinuousDistribution):
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma) and math.isfinite(self.mu)):
            raise DomainError(f"Normal requires finite mu and sigma > 0, got ({self.mu}, {self.sigma})")
        object.__setattr__(self, "support", (-math.inf, math.inf))

    def __repr__(self):
        return f"Normal({self.mu:g}, {self.sigma:g})"

    def _logpdf(self, x):
        z = (x - self.mu) / self.sigma
        return -0.5 * z * z - math.log(self.sigma) - 0.5 * math.log(2 * math.pi)

    def _cdf(self, x):
        return ndtr((x - self.mu) / self.sigma)

    def _sf(self, x):
        return ndtr((self.mu - x) / self.sigma)

    def _quantile(self, p):
        return self.mu + self.sigma * ndtri(p)

    def logpdf_at_quantile(self, u):
        u_arr = np.asarray(u, dtype=float)
        z = ndtri(u_arr)
        out = -0.5 * z * z - math.log(self.sigma) - 0.5 * math.log(2 * math.pi)
        return _as_output(out, u)

    def log_cdf(self, x):
        return log_ndtr((np.asarray(x, dtype=float) - self.mu) / self.sigma)


@dataclass(frozen=True, repr=False)
class Exponential(ContinuousDistribution):
    rate: float = 1.0

    def __post_init__(self):
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise DomainError(f"Exponential requires rate > 0, got {self.rate}")
        object.__setattr__(self, "support", (0.0, math.inf))

    def __repr__(self):
        return f"Exponential({self.rate:g})"

    def _logpdf(self, x):
        return np.where(x >= 0, math.log(self.rate) - self.rate * x, -np.inf)

    def _cdf(self, x):
        return -np.expm1(-self.rate * np.maximum(x, 0.0))

    def _sf(self, x):
        return np.exp(-self.rate * np.maximum(x, 0.0))

    def _quantile(self, p):
        return -np.log1p(-p) / self.rate

    def logpdf_at_quantile(self, u):
        u_arr = np.asarray(u, dtype=float)
        out = math.log(self.rate) + np.log1p(-u_arr)
        return _as_output(out, u)


_FAMILIES = {
    "beta": (Beta, 2),
    "power": (PowerRoot, 1),
    "uniform": (Uniform01, 0),
    "normal": (Normal, 2),
    "exp": (Exponential, 1),
}


def parse_distribution(text: str) -> ContinuousDistribution:
    """Build a distribution from a spec string such as ``beta:1,3`` or ``uniform``."""
    name, _, args = text.strip().partition(":")
    name = name.strip().lower()
    if name not in _FAMILIES:
        raise ParseError(f"unknown distribution family {name!r} in {text!r}")
    cls, arity = _FAMILIES[name]
    params = [a.strip() for a in args.split(",")] if args.strip() else []
    if len(params) != arity:
        raise ParseError(f"{name} takes {arity} parameter(s), got {len(params)} in {text!r}")
    try:
        values = [float(v) for v in params]
    except ValueError:
        raise ParseError(f"non-numeric parameter in {text!r}") from None
    try:
        return cls(*values)
    except DomainError as exc:
        raise ParseError(str(exc)) from None
