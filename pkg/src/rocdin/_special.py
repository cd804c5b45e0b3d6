"""Special functions: regularized incomplete beta and a bracketed root solver."""

import numpy as np
from scipy.special import betaln, xlog1py, xlogy

_EPS = np.finfo(float).eps
_TINY = 1e-300
_MAX_CF_ITER = 2000


def _beta_cf(a, b, x):
    """Continued fraction for I_x(a, b) (modified Lentz), vectorized over x."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _TINY, _TINY, d)
    d = 1.0 / d
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for m in range(1, _MAX_CF_ITER + 1):
        if not active.any():
            break
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        h = np.where(active, h * d * c, h)
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delta = d * c
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) > _EPS
    return h


def betainc_pair(a, b, x):
    """Return ``(I_x(a, b), 1 - I_x(a, b))``, each accurate where it is small.

    The continued fraction is evaluated for whichever of ``(a, b, x)`` and
    ``(b, a, 1 - x)`` converges fastest; the other tail is its complement.
    """
    x = np.asarray(x, dtype=float)
    cdf = np.zeros(x.shape)
    sf = np.ones(x.shape)
    hi = x >= 1.0
    cdf[hi] = 1.0
    sf[hi] = 0.0
    inner = (x > 0.0) & ~hi
    if inner.any():
        xi = x[inner]
        log_front = xlogy(a, xi) + xlog1py(b, -xi) - betaln(a, b)
        front = np.exp(log_front)
        direct = xi < (a + 1.0) / (a + b + 2.0)
        lower = np.empty_like(xi)
        upper = np.empty_like(xi)
        if direct.any():
            lower[direct] = front[direct] * _beta_cf(a, b, xi[direct]) / a
            upper[direct] = 1.0 - lower[direct]
        flip = ~direct
        if flip.any():
            upper[flip] = front[flip] * _beta_cf(b, a, 1.0 - xi[flip]) / b
            lower[flip] = 1.0 - upper[flip]
        cdf[inner] = np.clip(lower, 0.0, 1.0)
        sf[inner] = np.clip(upper, 0.0, 1.0)
    return cdf, sf


def betainc(a, b, x):
    """Regularized incomplete beta function I_x(a, b)."""
    return betainc_pair(a, b, x)[0]


def solve_quantile(p, cdf, sf, pdf, lo, hi, x0=None, max_iter=400):
    """Invert a continuous CDF on ``[lo, hi]`` for each entry of ``p``.

    Newton steps on the residual, kept inside a shrinking bracket; a step that
    leaves the bracket is replaced by bisection (geometric when the bracket
    spans several decades on the positive axis). ``p`` must lie strictly in
    (0, 1); the upper half is solved against the survival function so that
    probabilities near one keep their precision.
    """
    p = np.asarray(p, dtype=float)
    q = 1.0 - p
    upper = p > 0.5
    a = np.full(p.shape, lo, dtype=float)
    b = np.full(p.shape, hi, dtype=float)
    x = np.clip(np.where(np.isnan(x0), 0.5 * (a + b), x0), a, b) if x0 is not None else 0.5 * (a + b)

    def residual(x, mask):
        # log-space residual, increasing in x; returns it with its slope
        up = upper[mask]
        r = np.empty_like(x)
        tail = np.empty_like(x)
        if up.any():
            tail[up] = sf(x[up])
            r[up] = np.log(q[mask][up]) - np.log(tail[up])
        if (~up).any():
            tail[~up] = cdf(x[~up])
            r[~up] = np.log(tail[~up]) - np.log(p[mask][~up])
        return r, tail

    active = np.ones(p.shape, dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        xa = x[active]
        with np.errstate(divide="ignore", invalid="ignore"):
            r, tail = residual(xa, active)
        # bracket update: residual is increasing in x
        aa = np.where(r < 0, xa, a[active])
        bb = np.where(r > 0, xa, b[active])
        dens = pdf(xa)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            step = np.where(dens > 0, r * tail / dens, np.nan)
        cand = xa - step
        bad = ~np.isfinite(cand) | (cand <= aa) | (cand >= bb)
        geo = (aa > 0) & (bb > 4.0 * aa)
        with np.errstate(invalid="ignore"):
            mid = np.where(geo, np.sqrt(aa * bb), 0.5 * (aa + bb))
        mid = np.where((aa == 0) & (bb > 1e-3) & np.isfinite(bb), np.minimum(mid, bb / 16.0), mid)
        new = np.where(bad, mid, cand)
        done = (
            (np.abs(r) <= 4 * _EPS)
            | (np.abs(new - xa) <= 2 * _EPS * np.abs(xa) + 1e-300)
            | (bb - aa <= 2 * _EPS * np.maximum(np.abs(aa), np.abs(bb)))
        )
        # a converged iterate is kept even when its last step touched the bracket
        settled = np.where(np.isfinite(cand) & (cand >= aa) & (cand <= bb), cand, xa)
        new = np.where(r == 0, xa, np.where(done & bad, settled, new))
        x[active] = new
        a[active] = aa
        b[active] = bb
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    return x
