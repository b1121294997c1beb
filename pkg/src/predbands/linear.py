"""Closed-form univariate least squares with coefficient standard errors."""

from __future__ import annotations

import numpy as np

from ._gauss import normal_quantile
from .base import ParamsMixin, as_float_vector, check_xy


class SingularFitError(ValueError):
    """Raised when the design is degenerate (all x values identical)."""


class LinearRegression(ParamsMixin):
    """Ordinary least squares fit of ``y = intercept + slope * x``.

    Beyond the coefficients, the fit records the classical inference
    quantities of the homoskedastic linear model: coefficient standard
    errors, the residual standard error ``s`` (with the n-2 denominator),
    and the design statistics ``x_mean`` and ``sxx`` needed for
    analytical prediction bands.

    Attributes (after ``fit``)
    --------------------------
    intercept_, slope_ : float
        Least squares coefficient estimates.
    intercept_se_, slope_se_ : float
        Standard errors: ``slope_se = s / sqrt(sxx)`` and
        ``intercept_se = s * sqrt(1/n + x_mean**2 / sxx)``.
    residual_se_ : float
        ``s = sqrt(sum(r**2) / (n - 2))``; reported as 0 when n == 2.
    n_ : int
    x_mean_ : float
    sxx_ : float
        ``sum((x - x_mean)**2)``.
    """

    def __init__(self):
        pass

    def fit(self, x, y) -> "LinearRegression":
        xs, ys = check_xy(x, y)
        n = len(xs)
        if n < 2:
            raise ValueError(f"need at least 2 observations to fit a line, got {n}")
        if np.ptp(xs) == 0.0:
            raise SingularFitError("all x values are identical; slope is undetermined")
        x_mean = float(np.mean(xs))
        y_mean = float(np.mean(ys))
        dx = xs - x_mean
        sxx = float(np.dot(dx, dx))
        if sxx == 0.0:
            raise SingularFitError("x has zero variance; slope is undetermined")
        slope = float(np.dot(dx, ys - y_mean) / sxx)
        intercept = y_mean - slope * x_mean
        residuals = ys - intercept - slope * xs
        s = float(np.sqrt(np.dot(residuals, residuals) / (n - 2))) if n > 2 else 0.0

        self.intercept_ = intercept
        self.slope_ = slope
        self.residual_se_ = s
        self.slope_se_ = s / np.sqrt(sxx)
        self.intercept_se_ = s * np.sqrt(1.0 / n + x_mean ** 2 / sxx)
        self.n_ = n
        self.x_mean_ = x_mean
        self.sxx_ = sxx
        return self

    def _check_fitted(self):
        if not hasattr(self, "slope_"):
            raise ValueError("this LinearRegression instance is not fitted yet")

    def predict(self, x) -> np.ndarray:
        self._check_fitted()
        xs = as_float_vector(x, "x")
        return self.intercept_ + self.slope_ * xs

    def prediction_band(self, x, level: float = 0.95,
                        kind: str = "mean") -> tuple[np.ndarray, np.ndarray]:
        """Analytical confidence band around the fitted line.

        ``kind="mean"`` bounds the mean response, with half-width
        ``z * s * sqrt(1/n + (x - x_mean)**2 / sxx)``; ``kind="observation"``
        bounds a new observation, adding 1 under the square root.  ``z``
        is the two-sided standard normal critical value for ``level``.
        """
        self._check_fitted()
        if self.n_ <= 2:
            raise ValueError("prediction bands need n > 2 (no residual variance estimate)")
        if not 0.0 < level < 1.0:
            raise ValueError(f"level must be in (0, 1), got {level}")
        if kind not in ("mean", "observation"):
            raise ValueError(f"kind must be 'mean' or 'observation', got {kind!r}")
        xs = as_float_vector(x, "x")
        z = normal_quantile(0.5 + level / 2.0)
        extra = 1.0 if kind == "observation" else 0.0
        half = z * self.residual_se_ * np.sqrt(
            extra + 1.0 / self.n_ + (xs - self.x_mean_) ** 2 / self.sxx_)
        center = self.intercept_ + self.slope_ * xs
        return center - half, center + half

    def summary(self) -> str:
        """One-line fit report: coefficients with standard errors in parentheses."""
        self._check_fitted()
        return (f"y = {self.intercept_:.6g} ({self.intercept_se_:.3g}) "
                f"+ {self.slope_:.6g} ({self.slope_se_:.3g})·x")
