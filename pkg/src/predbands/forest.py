"""Regression tree and bagged forest for univariate inputs, from scratch.

Trees are grown by greedy binary splitting under the squared-error
criterion: at every node all candidate thresholds (midpoints between
consecutive distinct sorted x values) are evaluated and the split with
the smallest total child SSE wins; equal-SSE ties go to the lowest
threshold so builds are deterministic.  Routing sends ``x <= threshold``
left.  Because x is one-dimensional, a fitted tree is just a piecewise
constant function, stored as its sorted cut points plus leaf means.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import ParamsMixin, as_float_vector, check_xy
from .rng import Rng, derive_seed


@dataclass(frozen=True)
class ForestParams:
    """Forest hyperparameters (seed excluded; it is scheduled separately)."""

    n_trees: int = 100
    max_depth: int | None = None
    min_samples_leaf: int = 5
    min_samples_split: int = 10
    bootstrap: bool = True

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError(f"n_trees must be >= 1, got {self.n_trees}")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError(f"max_depth must be >= 0 or None, got {self.max_depth}")
        if self.min_samples_leaf < 1 or self.min_samples_split < 1:
            raise ValueError("min_samples_leaf and min_samples_split must be positive")


class DecisionTreeRegressor(ParamsMixin):
    """CART-style regression tree on a single feature.

    Attributes (after ``fit``)
    --------------------------
    thresholds_ : ndarray
        Sorted cut points; point x is routed to leaf
        ``searchsorted(thresholds_, x, side="left")``.
    leaf_values_ : ndarray
        Mean training target of each leaf, left to right
        (``len(leaf_values_) == len(thresholds_) + 1``).
    """

    def __init__(self, max_depth: int | None = None, min_samples_leaf: int = 1,
                 min_samples_split: int = 2):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.min_samples_split = min_samples_split

    def fit(self, x, y) -> "DecisionTreeRegressor":
        xs, ys = check_xy(x, y)
        if len(xs) < self.min_samples_leaf:
            raise ValueError(
                f"need at least min_samples_leaf={self.min_samples_leaf} rows, got {len(xs)}")
        order = np.argsort(xs, kind="stable")
        xs, ys = xs[order], ys[order]
        thresholds: list[float] = []
        values: list[float] = []
        self._grow(xs, ys, 0, thresholds, values)
        self.thresholds_ = np.array(thresholds)
        self.leaf_values_ = np.array(values)
        self.n_leaves_ = len(values)
        return self

    def _grow(self, xs, ys, depth, thresholds, values):
        # xs is sorted ascending; emits cut points in-order so the
        # flattened arrays come out sorted.
        n = len(xs)
        if (n < self.min_samples_split
                or (self.max_depth is not None and depth >= self.max_depth)
                or xs[0] == xs[-1]
                or ys.min() == ys.max()):
            values.append(float(np.mean(ys)))
            return
        split = self._best_split(xs, ys)
        if split is None:
            values.append(float(np.mean(ys)))
            return
        pos, threshold = split
        self._grow(xs[:pos], ys[:pos], depth + 1, thresholds, values)
        thresholds.append(threshold)
        self._grow(xs[pos:], ys[pos:], depth + 1, thresholds, values)

    def _best_split(self, xs, ys):
        """Lowest-threshold minimizer of total child SSE, or None."""
        n = len(xs)
        cy = np.cumsum(ys)
        cy2 = np.cumsum(ys * ys)
        n_left = np.arange(1, n)
        n_right = n - n_left
        sse_left = cy2[:-1] - cy[:-1] ** 2 / n_left
        sse_right = (cy2[-1] - cy2[:-1]) - (cy[-1] - cy[:-1]) ** 2 / n_right
        total = sse_left + sse_right
        valid = ((xs[1:] != xs[:-1])
                 & (n_left >= self.min_samples_leaf)
                 & (n_right >= self.min_samples_leaf))
        if not valid.any():
            return None
        total = np.where(valid, total, np.inf)
        best = int(np.argmin(total))  # argmin takes the first, i.e. lowest threshold
        pos = best + 1
        return pos, float((xs[best] + xs[pos]) / 2.0)

    def _check_fitted(self):
        if not hasattr(self, "leaf_values_"):
            raise ValueError("this DecisionTreeRegressor instance is not fitted yet")

    def predict(self, x) -> np.ndarray:
        self._check_fitted()
        xs = as_float_vector(x, "x")
        return self.leaf_values_[np.searchsorted(self.thresholds_, xs, side="left")]


class RandomForestRegressor(ParamsMixin):
    """Bagging ensemble of regression trees; prediction is the tree mean.

    With one feature there is nothing to subsample per split, so the
    ensemble randomness comes entirely from bootstrap resampling.  Tree t
    draws its bootstrap sample from the stream ``derive_seed(seed, t)``,
    which makes fits reproducible and order-independent.
    """

    def __init__(self, n_trees: int = 100, max_depth: int | None = None,
                 min_samples_leaf: int = 5, min_samples_split: int = 10,
                 bootstrap: bool = True, seed: int = 0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.min_samples_split = min_samples_split
        self.bootstrap = bootstrap
        self.seed = seed

    @classmethod
    def from_params(cls, params: ForestParams, seed: int) -> "RandomForestRegressor":
        return cls(n_trees=params.n_trees, max_depth=params.max_depth,
                   min_samples_leaf=params.min_samples_leaf,
                   min_samples_split=params.min_samples_split,
                   bootstrap=params.bootstrap, seed=seed)

    def fit(self, x, y) -> "RandomForestRegressor":
        ForestParams(self.n_trees, self.max_depth, self.min_samples_leaf,
                     self.min_samples_split, self.bootstrap)  # validate
        xs, ys = check_xy(x, y)
        n = len(xs)
        trees = []
        for t in range(self.n_trees):
            if self.bootstrap:
                idx = Rng(derive_seed(self.seed, t)).integers(n, size=n)
                xb, yb = xs[idx], ys[idx]
            else:
                xb, yb = xs, ys
            tree = DecisionTreeRegressor(
                max_depth=self.max_depth,
                min_samples_leaf=self.min_samples_leaf,
                min_samples_split=self.min_samples_split,
            ).fit(xb, yb)
            trees.append(tree)
        self.trees_ = trees
        return self

    def _check_fitted(self):
        if not hasattr(self, "trees_"):
            raise ValueError("this RandomForestRegressor instance is not fitted yet")

    def predict(self, x) -> np.ndarray:
        self._check_fitted()
        xs = as_float_vector(x, "x")
        acc = np.zeros(len(xs))
        for tree in self.trees_:
            acc += tree.predict(xs)
        return acc / len(self.trees_)
