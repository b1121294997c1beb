"""Replicated generate / fit / predict studies over a fixed grid.

Each replication r draws a fresh training set, fits the chosen model,
and predicts over the shared grid; the rows are stacked into an R x G
prediction matrix.  All randomness is scheduled from the master seed
(``config.gen.seed``) so results are independent of execution order:

* data seed  = derive_seed(master, r)
* model seed = derive_seed(master, R + r)
* split seed = derive_seed(master, 2 * R + r)   (only with a test split)

Replications are embarrassingly parallel; ``n_jobs > 1`` fans them out
to worker processes and merges rows by index, which keeps the output
byte-identical to a sequential run.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from typing import NamedTuple

import numpy as np

from .dataset import Dataset, GenConfig, Grid, generate_dataset, make_grid, split_train_test
from .forest import ForestParams, RandomForestRegressor
from .linear import LinearRegression
from .metrics import mse
from .rng import derive_seed

MODELS = ("linear", "forest")


@dataclass(frozen=True)
class StudyConfig:
    """Full description of one study; gen.seed acts as the master seed."""

    gen: GenConfig = field(default_factory=GenConfig)
    grid: Grid = field(default_factory=lambda: make_grid(150.0, 200.0, 101))
    replications: int = 1000
    model: str = "linear"
    forest: ForestParams = field(default_factory=ForestParams)
    test_fraction: float | None = None

    def __post_init__(self):
        if self.replications < 2:
            raise ValueError(f"replications must be >= 2, got {self.replications}")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.test_fraction is not None and not 0.0 < self.test_fraction < 1.0:
            raise ValueError(f"test_fraction must be in (0, 1), got {self.test_fraction}")
        span = self.gen.x_high - self.gen.x_low
        if (self.grid.low < self.gen.x_low - 1e-9 * span
                or self.grid.high > self.gen.x_high + 1e-9 * span):
            raise ValueError(
                f"grid [{self.grid.low}, {self.grid.high}] extends beyond the "
                f"training range [{self.gen.x_low}, {self.gen.x_high}]")


@dataclass(frozen=True)
class PredictionMatrix:
    """R x G predictions: one row per replication, one column per grid point."""

    grid: Grid
    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != len(self.grid.points):
            raise ValueError(
                f"rows must be 2-D with {len(self.grid.points)} columns, got {rows.shape}")
        if not np.all(np.isfinite(rows)):
            raise ValueError("prediction matrix contains NaN or Inf")
        rows = rows.copy()
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)

    @property
    def n_replications(self) -> int:
        return self.rows.shape[0]

    def column_at(self, x: float) -> np.ndarray:
        """Predictions at grid point x (must lie on the grid)."""
        hits = np.nonzero(np.isclose(self.grid.points, x, rtol=1e-9, atol=0.0))[0]
        if len(hits) == 0:
            raise ValueError(
                f"x={x} is not on the grid [{self.grid.low}, {self.grid.high}] "
                f"({len(self.grid.points)} points)")
        return self.rows[:, hits[0]]

    def to_csv(self, dest) -> None:
        """CSV whose header row holds the grid values."""
        close = False
        if not hasattr(dest, "write"):
            dest = open(dest, "w", newline="")
            close = True
        try:
            dest.write(",".join(repr(float(x)) for x in self.grid.points) + "\n")
            for row in self.rows:
                dest.write(",".join(repr(float(v)) for v in row) + "\n")
        finally:
            if close:
                dest.close()

    @classmethod
    def from_csv(cls, source) -> "PredictionMatrix":
        close = False
        if not hasattr(source, "read"):
            source = open(source, "r", newline="")
            close = True
        try:
            lines = [ln for ln in source.read().splitlines() if ln.strip()]
        finally:
            if close:
                source.close()
        if not lines:
            raise ValueError("line 1: expected a header of grid values")
        try:
            grid = Grid(np.array([float(c) for c in lines[0].split(",")]))
        except ValueError as exc:
            raise ValueError(f"line 1: {exc}") from None
        rows = []
        for lineno, line in enumerate(lines[1:], start=2):
            cells = line.split(",")
            if len(cells) != len(grid.points):
                raise ValueError(
                    f"line {lineno}: expected {len(grid.points)} fields, got {len(cells)}")
            try:
                rows.append([float(c) for c in cells])
            except ValueError:
                raise ValueError(f"line {lineno}: could not parse numbers") from None
        return cls(grid=grid, rows=np.array(rows))


@dataclass(frozen=True)
class CoefficientSamples:
    """Per-replication linear coefficients (empty for forest studies)."""

    slopes: np.ndarray
    intercepts: np.ndarray
    test_mse: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "slopes", np.asarray(self.slopes, dtype=float))
        object.__setattr__(self, "intercepts", np.asarray(self.intercepts, dtype=float))
        if len(self.slopes) != len(self.intercepts):
            raise ValueError("slopes and intercepts must have equal length")
        if self.test_mse is not None:
            object.__setattr__(self, "test_mse", np.asarray(self.test_mse, dtype=float))

    def to_csv(self, dest, n_rows: int | None = None) -> None:
        """CSV with header ``slope,intercept[,test_mse]``.

        Forest studies have no coefficients; their rows carry nan in the
        slope and intercept columns so the row count still equals R
        (pass ``n_rows``).
        """
        n = len(self.slopes) if n_rows is None else n_rows
        close = False
        if not hasattr(dest, "write"):
            dest = open(dest, "w", newline="")
            close = True
        try:
            header = "slope,intercept"
            if self.test_mse is not None:
                header += ",test_mse"
            dest.write(header + "\n")
            for r in range(n):
                if r < len(self.slopes):
                    cells = [repr(float(self.slopes[r])), repr(float(self.intercepts[r]))]
                else:
                    cells = ["nan", "nan"]
                if self.test_mse is not None:
                    cells.append(repr(float(self.test_mse[r])))
                dest.write(",".join(cells) + "\n")
        finally:
            if close:
                dest.close()


class ReplicationError(RuntimeError):
    """A replication failed to fit; carries the replication index."""

    def __init__(self, replication: int, message: str):
        super().__init__(f"replication {replication}: {message}")
        self.replication = replication
        self._message = message

    def __reduce__(self):
        return (type(self), (self.replication, self._message))


class StudyResult(NamedTuple):
    matrix: PredictionMatrix
    coefficients: CoefficientSamples


def _replicate(config: StudyConfig, r: int):
    """Row r of the study: (predictions, slope, intercept, holdout mse)."""
    master = config.gen.seed
    big_r = config.replications
    try:
        data = generate_dataset(replace(config.gen, seed=derive_seed(master, r)))
        train: Dataset = data
        test: Dataset | None = None
        if config.test_fraction is not None:
            train, test = split_train_test(
                data, config.test_fraction, seed=derive_seed(master, 2 * big_r + r))
        if config.model == "linear":
            model = LinearRegression().fit(train.xs, train.ys)
            slope, intercept = model.slope_, model.intercept_
        else:
            model = RandomForestRegressor.from_params(
                config.forest, seed=derive_seed(master, big_r + r)).fit(train.xs, train.ys)
            slope = intercept = None
        row = model.predict(config.grid.points)
        holdout = mse(test.ys, model.predict(test.xs)) if test is not None else None
        return row, slope, intercept, holdout
    except ReplicationError:
        raise
    except Exception as exc:
        raise ReplicationError(r, str(exc)) from exc


def run_study(config: StudyConfig, n_jobs: int = 1) -> StudyResult:
    """Run all replications and assemble the matrix and coefficient samples.

    The output is a pure function of ``config``; ``n_jobs`` only changes
    how the work is scheduled.  Any replication failure aborts the whole
    study (a silently dropped row would bias the bands).
    """
    if n_jobs < 1:
        raise ValueError(f"n_jobs must be >= 1, got {n_jobs}")
    big_r = config.replications
    if n_jobs == 1:
        results = [_replicate(config, r) for r in range(big_r)]
    else:
        chunk = max(1, big_r // (n_jobs * 8))
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(partial(_replicate, config), range(big_r),
                                    chunksize=chunk))
    rows = np.array([res[0] for res in results])
    matrix = PredictionMatrix(grid=config.grid, rows=rows)
    holdout = None
    if config.test_fraction is not None:
        holdout = np.array([res[3] for res in results])
    if config.model == "linear":
        coeffs = CoefficientSamples(
            slopes=np.array([res[1] for res in results]),
            intercepts=np.array([res[2] for res in results]),
            test_mse=holdout)
    else:
        coeffs = CoefficientSamples(slopes=np.empty(0), intercepts=np.empty(0),
                                    test_mse=holdout)
    return StudyResult(matrix=matrix, coefficients=coeffs)


def single_sample_curve(config: StudyConfig, replication: int) -> np.ndarray:
    """Grid predictions of one replication, identical to its study row."""
    if not 0 <= replication < config.replications:
        raise IndexError(
            f"replication must be in [0, {config.replications}), got {replication}")
    return _replicate(config, replication)[0]
