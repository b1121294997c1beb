"""Model quality metrics."""

from __future__ import annotations

import numpy as np

from .base import as_float_vector


def mse(y_true, y_pred) -> float:
    """Mean squared error between two equal-length vectors."""
    yt = as_float_vector(y_true, "y_true")
    yp = as_float_vector(y_pred, "y_pred")
    if len(yt) != len(yp):
        raise ValueError(f"length mismatch: {len(yt)} != {len(yp)}")
    diff = yt - yp
    return float(np.mean(diff * diff))
