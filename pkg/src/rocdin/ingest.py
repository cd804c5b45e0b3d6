"""Labeled score data: parsing, empirical ROC curves, empirical AUC, KDE densities."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr, logsumexp, ndtr

from ._special import solve_quantile
from .distributions import ContinuousDistribution, _as_output
from .errors import EmptyClass, MalformedRow, ParseError, TooFewPoints, UnknownLabel
from .roc import EmpiricalRoc

NORMAL, DISEASED = "N", "D"


@dataclass(frozen=True, eq=False)
class ScoreDataset:
    """Scores with their class labels; ``diseased[i]`` is True for label D."""

    scores: np.ndarray
    diseased: np.ndarray
    line_numbers: np.ndarray = None

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=float)
        diseased = np.asarray(self.diseased, dtype=bool)
        if scores.shape != diseased.shape or scores.ndim != 1:
            raise ValueError("scores and labels must be 1-D arrays of equal length")
        if not np.all(np.isfinite(scores)):
            raise ValueError("scores must be finite")
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "diseased", diseased)
        if self.line_numbers is None:
            object.__setattr__(self, "line_numbers", np.arange(2, scores.size + 2))

    @classmethod
    def from_classes(cls, normal, diseased):
        normal = np.asarray(normal, dtype=float).ravel()
        diseased = np.asarray(diseased, dtype=float).ravel()
        return cls(np.concatenate([normal, diseased]), np.r_[np.zeros(normal.size, bool), np.ones(diseased.size, bool)])

    @property
    def normal_scores(self):
        return self.scores[~self.diseased]

    @property
    def diseased_scores(self):
        return self.scores[self.diseased]

    @property
    def n0(self):
        return int(np.count_nonzero(~self.diseased))

    @property
    def n1(self):
        return int(np.count_nonzero(self.diseased))

    def flipped(self):
        """Same scores with N and D exchanged."""
        return ScoreDataset(self.scores, ~self.diseased, self.line_numbers)

    def require_both_classes(self):
        if self.n0 == 0 or self.n1 == 0:
            raise EmptyClass(f"need at least one N and one D score (got n0={self.n0}, n1={self.n1})")


def parse_scores(source) -> ScoreDataset:
    """Parse a ``score,label`` CSV given as bytes, a file object or a path.

    Strings are taken as paths; wrap CSV text in ``io.StringIO``. Labels are
    N or D, case-insensitive. Line numbers count the header as 1.
    """
    if isinstance(source, (bytes, bytearray)):
        text = bytes(source).decode("utf-8")
    elif hasattr(source, "read"):
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    if text.startswith("\ufeff"):
        text = text[1:]
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["score", "label"]:
        raise ParseError("line 1: expected header 'score,label'")
    scores, labels, lines = [], [], []
    for row in reader:
        line_no = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise MalformedRow(line_no, f"expected 2 fields, got {len(row)}")
        try:
            score = float(row[0])
        except ValueError:
            raise MalformedRow(line_no, f"unparseable score {row[0]!r}") from None
        if not math.isfinite(score):
            raise MalformedRow(line_no, f"non-finite score {row[0]!r}")
        label = row[1].strip().upper()
        if label not in (NORMAL, DISEASED):
            raise UnknownLabel(line_no, row[1].strip())
        scores.append(score)
        labels.append(label == DISEASED)
        lines.append(line_no)
    ds = ScoreDataset(np.array(scores, dtype=float), np.array(labels, dtype=bool), np.array(lines, dtype=int))
    ds.require_both_classes()
    return ds


def empirical_roc(ds: ScoreDataset, kde: bool = False) -> EmpiricalRoc:
    """Sweep thresholds down through the distinct scores.

    At threshold t a score is called D when it exceeds t. Tied scores move
    both coordinates in one step. With ``kde=True`` the curve carries Gaussian
    KDE densities for both classes.
    """
    ds.require_both_classes()
    neg = np.sort(ds.normal_scores)
    pos = np.sort(ds.diseased_scores)
    thresholds = np.unique(ds.scores)[::-1]
    fpp = (neg.size - np.searchsorted(neg, thresholds, side="right")) / neg.size
    tpr = (pos.size - np.searchsorted(pos, thresholds, side="right")) / pos.size
    pts = np.column_stack([np.r_[0.0, fpp, 1.0], np.r_[0.0, tpr, 1.0]])
    keep = np.r_[True, np.any(np.diff(pts, axis=0) != 0, axis=1)]
    densities = (kde_density(ds, NORMAL), kde_density(ds, DISEASED)) if kde else None
    return EmpiricalRoc(pts[keep], densities)


def empirical_auc(ds: ScoreDataset) -> float:
    """Trapezoidal area under the empirical ROC curve."""
    curve = empirical_roc(ds)
    x, y = curve.fpp, curve.sensitivity
    return float(math.fsum(np.diff(x) * (y[1:] + y[:-1]) / 2.0))


def rank_auc(ds: ScoreDataset) -> float:
    """Pair-counting AUC: P(D score > N score) + 0.5 P(tie)."""
    ds.require_both_classes()
    neg = np.sort(ds.normal_scores)
    pos = ds.diseased_scores
    below = np.searchsorted(neg, pos, side="left")
    ties = np.searchsorted(neg, pos, side="right") - below
    return float((below.sum() + 0.5 * ties.sum()) / (neg.size * pos.size))


class GaussianKde(ContinuousDistribution):
    """Gaussian kernel density estimate with a fixed bandwidth.

    Samples larger than ``bin_threshold`` are linearly binned onto centres
    spaced ``bandwidth / 16`` apart; the binned estimate differs from the
    exact one by O((spacing / bandwidth)^2) and keeps every evaluation
    proportional to the number of centres rather than the sample size.
    """

    approximate = True

    def __init__(self, data, bandwidth, bin_threshold=2000):
        data = np.sort(np.asarray(data, dtype=float))
        self.bandwidth = float(bandwidth)
        self.size = data.size
        self.support = (-math.inf, math.inf)
        self.lo, self.hi = float(data[0]), float(data[-1])
        if data.size > bin_threshold:
            self.centers, self.weights = _linear_bin(data, self.bandwidth / 16.0)
        else:
            self.centers, self.weights = data, np.full(data.size, 1.0 / data.size)
        self._log_w = np.log(self.weights)
        self._cdf_at_centers = None

    def __repr__(self):
        return f"GaussianKde(m={self.size}, h={self.bandwidth:.4g})"

    def _blocks(self, x, fn, chunk=4_000_000):
        flat = x.ravel()
        step = max(1, chunk // self.centers.size)
        out = np.empty(flat.shape)
        for i in range(0, flat.size, step):
            z = (flat[i : i + step, None] - self.centers[None, :]) / self.bandwidth
            out[i : i + step] = fn(z)
        return out.reshape(x.shape)

    def _logpdf(self, x):
        norm = math.log(self.bandwidth * math.sqrt(2 * math.pi))
        return self._blocks(x, lambda z: logsumexp(-0.5 * z * z + self._log_w, axis=1)) - norm

    def _cdf(self, x):
        return self._blocks(x, lambda z: ndtr(z) @ self.weights)

    def _sf(self, x):
        return self._blocks(x, lambda z: ndtr(-z) @ self.weights)

    def _quantile(self, p):
        h = self.bandwidth
        lo, hi = self.lo - 40 * h, self.hi + 40 * h
        if self._cdf_at_centers is None:
            self._cdf_at_centers = self._cdf(self.centers)
        x0 = np.interp(p, self._cdf_at_centers, self.centers)
        return solve_quantile(p, self._cdf, self._sf, lambda x: np.exp(self._logpdf(x)), lo, hi, x0=x0)

    def log_cdf(self, x):
        x_arr = np.asarray(x, dtype=float)
        out = self._blocks(x_arr, lambda z: logsumexp(log_ndtr(z) + self._log_w, axis=1))
        return _as_output(out, x)


def _linear_bin(data, spacing):
    """Split each point's unit mass between its two neighbouring grid centres."""
    start = data[0]
    n = int(math.ceil((data[-1] - start) / spacing)) + 2
    pos = (data - start) / spacing
    left = np.floor(pos).astype(int)
    frac = pos - left
    w = np.bincount(left, weights=1.0 - frac, minlength=n) + np.bincount(left + 1, weights=frac, minlength=n)
    centers = start + spacing * np.arange(n)
    keep = w > 0
    return centers[keep], w[keep] / data.size


def silverman_bandwidth(values) -> float:
    """0.9 * min(sd, IQR / 1.34) * m^(-1/5); sd alone when the IQR is zero."""
    values = np.asarray(values, dtype=float)
    sd = float(np.std(values, ddof=1))
    q75, q25 = np.percentile(values, [75, 25])
    iqr = float(q75 - q25)
    spread = min(sd, iqr / 1.34) if iqr > 0 else sd
    if not spread > 0:
        raise TooFewPoints("scores have zero spread; bandwidth would be zero")
    return 0.9 * spread * values.size ** (-0.2)


def kde_density(ds: ScoreDataset, cls: str) -> GaussianKde:
    """Gaussian KDE of one class (``"N"`` or ``"D"``), Silverman bandwidth."""
    cls = cls.upper()
    if cls not in (NORMAL, DISEASED):
        raise ValueError(f"class must be 'N' or 'D', got {cls!r}")
    values = ds.diseased_scores if cls == DISEASED else ds.normal_scores
    if values.size < 5:
        raise TooFewPoints(f"class {cls} has {values.size} points; at least 5 are needed")
    return GaussianKde(values, silverman_bandwidth(values))
