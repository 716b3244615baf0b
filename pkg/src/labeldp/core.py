"""Shared domain types: privacy budgets, smoothness/margin constants, datasets,
and the cube partition of the unit hypercube.

Every histogram-style estimator in this package works on a regular grid of
axis-aligned cubes tiling [0, 1]^d.  The partition here rounds a requested side
length down to an exact divisor of 1 so the cubes tile the cube exactly, and
maps points to cells deterministically (half-open cells, upper boundary folded
into the last cell).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "INFINITE",
    "PrivacyBudget",
    "AssumptionParams",
    "LabeledSample",
    "Dataset",
    "CubePartition",
    "make_partition",
    "cube_index",
    "cube_indices",
    "cell_center",
]

#: Sentinel epsilon meaning "privacy disabled" (noise-free oracle mode).
INFINITE = math.inf


@dataclass(frozen=True)
class PrivacyBudget:
    """A pure-DP privacy budget.

    ``epsilon`` must be strictly positive; ``math.inf`` is the distinguished
    value meaning privacy is disabled and estimators run noise-free.
    """

    epsilon: float

    def __post_init__(self):
        eps = float(self.epsilon)
        if not (eps > 0.0):
            raise ValueError(f"epsilon must be positive or INFINITE, got {self.epsilon}")
        object.__setattr__(self, "epsilon", eps)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.epsilon)


def resolve_epsilon(budget) -> float:
    """Accept a PrivacyBudget or a bare float and return epsilon as a float.

    Bare floats may be 0 (degenerate, pure-noise mechanisms) or ``math.inf``;
    negative values are rejected.  Estimator entry points should construct a
    ``PrivacyBudget`` (which forbids 0); mechanisms use this looser form.
    """
    if isinstance(budget, PrivacyBudget):
        return budget.epsilon
    eps = float(budget)
    if eps < 0.0 or math.isnan(eps):
        raise ValueError(f"epsilon must be >= 0, got {budget}")
    return eps


@dataclass(frozen=True)
class AssumptionParams:
    """Constants certified by a data distribution and consumed by schedules.

    Attributes:
        beta: smoothness exponent of the conditional mean/class probabilities,
            in (0, 1].
        holder_const: constant L with |eta(x) - eta(x')| <= L ||x - x'||^beta.
        gamma: margin exponent >= 0 (classification): the probability that the
            top-two class probabilities are within t is O(t^gamma).
        margin_const: multiplicative constant of the margin bound.
        density_floor: lower bound on the feature density over [0,1]^d.
        theta: corner volume fraction in (0, 1] (ball-intersection bound).
        corner_radius: radius below which the corner volume bound applies.
        label_bound: almost-sure bound T on |Y| (bounded-noise regression).
        moment_order: moment order p >= 2 (heavy-tailed regression).
        moment_bound: bound M_p on E[|Y|^p | x] (heavy-tailed regression).
    """

    beta: float
    holder_const: float
    gamma: float = 0.0
    margin_const: float = 1.0
    density_floor: float = 1.0
    theta: float = 1.0
    corner_radius: float = 1.0
    label_bound: float | None = None
    moment_order: float | None = None
    moment_bound: float | None = None

    def __post_init__(self):
        if not (0.0 < self.beta <= 1.0):
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if self.holder_const <= 0.0:
            raise ValueError("holder_const must be positive")
        if self.gamma < 0.0:
            raise ValueError("gamma must be nonnegative")
        if self.margin_const <= 0.0:
            raise ValueError("margin_const must be positive")
        if self.density_floor <= 0.0:
            raise ValueError("density_floor must be positive")
        if not (0.0 < self.theta <= 1.0):
            raise ValueError(f"theta must lie in (0, 1], got {self.theta}")
        if self.corner_radius <= 0.0:
            raise ValueError("corner_radius must be positive")
        if self.label_bound is not None and self.label_bound <= 0.0:
            raise ValueError("label_bound must be positive when given")
        if self.moment_order is not None and self.moment_order < 2.0:
            raise ValueError("moment_order must be >= 2 when given")
        if self.moment_bound is not None and self.moment_bound <= 0.0:
            raise ValueError("moment_bound must be positive when given")


@dataclass(frozen=True)
class LabeledSample:
    """One (feature, label) pair with features in [0,1]^d."""

    x: np.ndarray
    y: float | int

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 1:
            raise ValueError("x must be a 1-d coordinate vector")
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise ValueError("all coordinates must lie in [0, 1]")
        object.__setattr__(self, "x", x)


CLASSIFICATION = "classification"
REGRESSION = "regression"


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of samples sharing dimension and task kind.

    Features are stored as an (N, d) array with entries in [0, 1]; labels as a
    length-N array.  Classification labels are integers in {1..K}.
    """

    features: np.ndarray
    labels: np.ndarray
    task: str = REGRESSION
    num_classes: int | None = None

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        if X.ndim != 2 or X.shape[1] < 1:
            raise ValueError("features must be an (N, d) array with d >= 1")
        if np.any(X < 0.0) or np.any(X > 1.0):
            raise ValueError("all feature coordinates must lie in [0, 1]")
        if self.task == CLASSIFICATION:
            if self.num_classes is None or self.num_classes < 2:
                raise ValueError("classification datasets need num_classes >= 2")
            y = np.asarray(self.labels)
            if not np.issubdtype(y.dtype, np.integer):
                yi = np.asarray(self.labels, dtype=int)
                if np.any(yi != np.asarray(self.labels)):
                    raise ValueError("classification labels must be integers")
                y = yi
            if y.size and (y.min() < 1 or y.max() > self.num_classes):
                raise ValueError("class labels must lie in {1..K}")
        elif self.task == REGRESSION:
            if self.num_classes is not None:
                raise ValueError("regression datasets must not set num_classes")
            y = np.asarray(self.labels, dtype=float)
            if not np.all(np.isfinite(y)):
                raise ValueError("regression labels must be finite")
        else:
            raise ValueError(f"unknown task kind {self.task!r}")
        if y.shape != (X.shape[0],):
            raise ValueError("labels must align with features")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def __len__(self) -> int:
        return self.features.shape[0]

    def __getitem__(self, i: int) -> LabeledSample:
        y = self.labels[i]
        return LabeledSample(self.features[i], int(y) if self.task == CLASSIFICATION else float(y))

    def with_labels(self, labels) -> "Dataset":
        """Same features and task, different labels."""
        return Dataset(self.features, labels, task=self.task, num_classes=self.num_classes)


@dataclass(frozen=True)
class CubePartition:
    """A regular grid of side-``width`` cubes tiling [0, 1]^d.

    ``cells_per_axis`` is ceil(1/h) for the requested side length h, so the
    effective width 1/cells_per_axis divides 1 exactly and the cells cover the
    cube with no partial boundary cells.
    """

    dim: int
    cells_per_axis: int
    requested_side: float = field(default=1.0, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if self.cells_per_axis < 1:
            raise ValueError("cells_per_axis must be >= 1")

    @property
    def width(self) -> float:
        """Exact per-axis cell width."""
        return 1.0 / self.cells_per_axis

    @property
    def num_cells(self) -> int:
        return self.cells_per_axis**self.dim


def make_partition(d: int, h: float) -> CubePartition:
    """Build the covering grid of side-h cubes over [0, 1]^d.

    The side length is rounded down to 1/ceil(1/h) so that cells tile the cube
    exactly.

    Args:
        d: dimension, >= 1.
        h: requested side length in (0, 1].

    Returns:
        The partition with ceil(1/h) cells per axis.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if not (0.0 < h <= 1.0):
        raise ValueError(f"side length must lie in (0, 1], got {h}")
    cells = math.ceil(1.0 / h - 1e-12)  # tolerate h = 1/m computed in floating point
    return CubePartition(dim=int(d), cells_per_axis=int(cells), requested_side=float(h))


def cube_indices(partition: CubePartition, X) -> np.ndarray:
    """Vectorized cell lookup for an (N, d) array of points in [0, 1]^d.

    Per-axis index is min(floor(x_i * cells_per_axis), cells_per_axis - 1):
    cells are half-open and the upper boundary folds into the last cell.  Axes
    combine in row-major order (first axis most significant).
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != partition.dim:
        raise ValueError(f"points have dimension {X.shape[1]}, partition has {partition.dim}")
    if np.any(X < 0.0) or np.any(X > 1.0):
        raise ValueError("all coordinates must lie in [0, 1]")
    m = partition.cells_per_axis
    axis_idx = np.minimum(np.floor(X * m).astype(np.int64), m - 1)
    flat = np.zeros(X.shape[0], dtype=np.int64)
    for j in range(partition.dim):
        flat = flat * m + axis_idx[:, j]
    return flat


def cube_index(partition: CubePartition, x) -> int:
    """Cell index of a single point (see ``cube_indices``)."""
    return int(cube_indices(partition, np.asarray(x, dtype=float).reshape(1, -1))[0])


def cell_center(partition: CubePartition, index: int) -> np.ndarray:
    """Center coordinates of the cell with the given row-major index."""
    if not (0 <= index < partition.num_cells):
        raise ValueError(f"cell index {index} out of range")
    m = partition.cells_per_axis
    coords = np.empty(partition.dim)
    rem = int(index)
    for j in range(partition.dim - 1, -1, -1):
        coords[j] = rem % m
        rem //= m
    return (coords + 0.5) * partition.width
