"""Non-parametric summaries of prediction and coefficient samples.

Quantiles use linear interpolation between order statistics at rank
``h = (n - 1) * p`` (the "type 7" convention).  Band limits are the
classic box-plot fences::

    iqr  = q3 - q1
    low  = q1 - 1.5 * iqr
    high = q3 + 1.5 * iqr

For Gaussian data these fences sit at about +/-2.70 standard deviations
(99.3% coverage), slightly narrower than the 3-sigma / 99.7% rule of
thumb they are often equated with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ._gauss import normal_pdf
from .base import as_float_vector
from .dataset import Grid
from .linear import LinearRegression

if TYPE_CHECKING:
    from .montecarlo import PredictionMatrix


def quantile(values, p: float) -> float:
    """Interpolated quantile of a nonempty sample, p in [0, 1]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    v = np.sort(as_float_vector(values))
    h = (len(v) - 1) * p
    lo = int(h)
    if lo >= len(v) - 1:
        return float(v[-1])
    frac = h - lo
    return float(v[lo] + frac * (v[lo + 1] - v[lo]))


def mean_sd(values) -> tuple[float, float]:
    """Sample mean and standard deviation (n-1 denominator; sd 0 for n=1)."""
    v = as_float_vector(values)
    sd = float(np.std(v, ddof=1)) if len(v) > 1 else 0.0
    return float(np.mean(v)), sd


@dataclass(frozen=True)
class QuartileBand:
    """Quartiles of one sample plus the 1.5*IQR fences."""

    q1: float
    median: float
    q3: float
    iqr: float
    low: float
    high: float


def quartile_band(values) -> QuartileBand:
    """Quartiles and fences of a sample."""
    q1 = quantile(values, 0.25)
    median = quantile(values, 0.5)
    q3 = quantile(values, 0.75)
    iqr = q3 - q1
    return QuartileBand(q1=q1, median=median, q3=q3, iqr=iqr,
                        low=q1 - 1.5 * iqr, high=q3 + 1.5 * iqr)


def _column_quantile(sorted_cols: np.ndarray, p: float) -> np.ndarray:
    # Same interpolation rule as quantile(), applied down each column of
    # an already column-sorted matrix.
    n = sorted_cols.shape[0]
    h = (n - 1) * p
    lo = int(h)
    if lo >= n - 1:
        return sorted_cols[-1].copy()
    frac = h - lo
    return sorted_cols[lo] + frac * (sorted_cols[lo + 1] - sorted_cols[lo])


@dataclass(frozen=True)
class BandCurve:
    """Per-grid-point quartile band of a prediction matrix."""

    grid: Grid
    q1: np.ndarray
    median: np.ndarray
    q3: np.ndarray
    iqr: np.ndarray
    low: np.ndarray
    high: np.ndarray
    mean: np.ndarray
    sd: np.ndarray

    def __post_init__(self):
        g = len(self.grid.points)
        for name in ("q1", "median", "q3", "iqr", "low", "high", "mean", "sd"):
            if len(getattr(self, name)) != g:
                raise ValueError(f"{name} length does not match grid ({g})")

    def band_at(self, i: int) -> QuartileBand:
        return QuartileBand(q1=float(self.q1[i]), median=float(self.median[i]),
                            q3=float(self.q3[i]), iqr=float(self.iqr[i]),
                            low=float(self.low[i]), high=float(self.high[i]))

    def to_csv(self, dest) -> None:
        """CSV with header ``x,mean,sd,q1,median,q3,iqr,low,high``."""
        close = False
        if not hasattr(dest, "write"):
            dest = open(dest, "w", newline="")
            close = True
        try:
            dest.write("x,mean,sd,q1,median,q3,iqr,low,high\n")
            for i, x in enumerate(self.grid.points):
                cells = (x, self.mean[i], self.sd[i], self.q1[i], self.median[i],
                         self.q3[i], self.iqr[i], self.low[i], self.high[i])
                dest.write(",".join(repr(float(c)) for c in cells) + "\n")
        finally:
            if close:
                dest.close()


def band_curve(matrix: "PredictionMatrix") -> BandCurve:
    """Column-wise quartile band of a prediction matrix (needs >= 2 rows)."""
    rows = matrix.rows
    if rows.shape[0] < 2:
        raise ValueError(f"need at least 2 replications, got {rows.shape[0]}")
    sorted_cols = np.sort(rows, axis=0)
    q1 = _column_quantile(sorted_cols, 0.25)
    median = _column_quantile(sorted_cols, 0.5)
    q3 = _column_quantile(sorted_cols, 0.75)
    iqr = q3 - q1
    return BandCurve(grid=matrix.grid, q1=q1, median=median, q3=q3, iqr=iqr,
                     low=q1 - 1.5 * iqr, high=q3 + 1.5 * iqr,
                     mean=np.mean(rows, axis=0), sd=np.std(rows, axis=0, ddof=1))


def band_slope(curve: BandCurve) -> float:
    """Least squares slope of the median curve over its grid.

    A model that systematically flattens its predictions toward the
    sample mean shows up here as a slope below the generating one.
    """
    return LinearRegression().fit(curve.grid.points, curve.median).slope_


@dataclass(frozen=True)
class Histogram:
    """Equal-width count histogram; bins right-open except the last."""

    bin_edges: np.ndarray
    counts: np.ndarray
    n: int

    def __post_init__(self):
        if np.any(np.diff(self.bin_edges) <= 0):
            raise ValueError("bin_edges must be strictly increasing")
        if len(self.bin_edges) != len(self.counts) + 1:
            raise ValueError("need len(bin_edges) == len(counts) + 1")
        if int(np.sum(self.counts)) != self.n:
            raise ValueError("counts must sum to n")

    @property
    def bin_width(self) -> float:
        return float((self.bin_edges[-1] - self.bin_edges[0]) / len(self.counts))


def histogram(values, bins: int | None = None) -> Histogram:
    """Histogram over [min, max] with ceil(sqrt(n)) bins by default.

    A constant sample gets a single unit-width bin centered on it.
    """
    v = as_float_vector(values)
    n = len(v)
    if bins is None:
        bins = math.ceil(math.sqrt(n))
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    vmin, vmax = float(v.min()), float(v.max())
    if vmin == vmax:
        return Histogram(bin_edges=np.array([vmin - 0.5, vmax + 0.5]),
                         counts=np.array([n]), n=n)
    edges = np.linspace(vmin, vmax, bins + 1)
    counts, _ = np.histogram(v, bins=edges)
    return Histogram(bin_edges=edges, counts=counts, n=n)


def gaussian_overlay(mean: float, sd: float, hist: Histogram,
                     points_per_bin: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Expected-count Gaussian curve to superimpose on a count histogram.

    Returns (x, y) with ``y = n * bin_width * pdf((x - mean) / sd) / sd``
    sampled at ``points_per_bin`` points per bin across the histogram span.
    """
    if sd <= 0:
        raise ValueError(f"sd must be positive, got {sd}")
    if points_per_bin < 1:
        raise ValueError(f"points_per_bin must be >= 1, got {points_per_bin}")
    k = len(hist.counts)
    xs = np.linspace(hist.bin_edges[0], hist.bin_edges[-1], k * points_per_bin + 1)
    ys = hist.n * hist.bin_width * normal_pdf((xs - mean) / sd) / sd
    return xs, ys


@dataclass(frozen=True)
class BoxplotSummary:
    """Box-and-whisker statistics of one sample."""

    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: np.ndarray


def boxplot_summary(values) -> BoxplotSummary:
    """Quartiles, whiskers at the most extreme points inside the fences,
    and the sorted points strictly outside them."""
    v = np.sort(as_float_vector(values))
    band = quartile_band(v)
    inside = v[(v >= band.low) & (v <= band.high)]
    # Fences always contain some data point, but fall back to the box
    # edges rather than crash on a pathological sample.
    whisker_low = float(inside[0]) if len(inside) else band.q1
    whisker_high = float(inside[-1]) if len(inside) else band.q3
    outliers = v[(v < band.low) | (v > band.high)]
    return BoxplotSummary(q1=band.q1, median=band.median, q3=band.q3,
                          whisker_low=whisker_low, whisker_high=whisker_high,
                          outliers=outliers)


def distribution_report(values, bins: int | None = None,
                        points_per_bin: int = 16) -> dict:
    """Histogram + boxplot + Gaussian overlay as one JSON-ready document.

    The overlay uses the sample's own mean and standard deviation; it is
    ``None`` for constant samples (sd = 0).
    """
    v = as_float_vector(values)
    hist = histogram(v, bins=bins)
    box = boxplot_summary(v)
    mean, sd = mean_sd(v)
    overlay = None
    if sd > 0:
        ox, oy = gaussian_overlay(mean, sd, hist, points_per_bin=points_per_bin)
        overlay = {"x": ox.tolist(), "y": oy.tolist()}
    return {
        "n": int(len(v)),
        "mean": mean,
        "sd": sd,
        "bin_edges": hist.bin_edges.tolist(),
        "counts": hist.counts.tolist(),
        "overlay": overlay,
        "box": {
            "q1": box.q1,
            "median": box.median,
            "q3": box.q3,
            "whisker_low": box.whisker_low,
            "whisker_high": box.whisker_high,
            "outliers": box.outliers.tolist(),
        },
    }
