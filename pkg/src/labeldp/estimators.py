"""Histogram and nearest-neighbor estimators over privatized labels.

Three deployment models appear throughout:

* local: labels are privatized on-device (bit vectors or noisy reals) before
  fitting; the fitter never sees a true label.
* central label DP: the fitter sees true labels but its output distribution
  must be insensitive to any single label substitution (exponential-mechanism
  class selection, Laplace-noised cube means).
* full DP: adjacency also allows the feature to move between cubes, which
  costs a larger selection temperature and a floored denominator.

Schedules translate (N, eps, smoothness, dimension) into the bandwidth h,
neighbor count k, or clip radius T that balances the bias, sampling-noise,
and privacy-noise terms.  They are asymptotic orders, so each carries a
constant multiplier ``c_mult`` (default 1); fitted rate exponents are
invariant to it.

Every fitter is pure given (data, rng) and returns an immutable model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CLASSIFICATION,
    REGRESSION,
    CubePartition,
    Dataset,
    cube_indices,
    make_partition,
    resolve_epsilon,
)
from .mechanisms import laplace_noise

__all__ = [
    "CubeClassifier",
    "CubeRegressor",
    "KnnRegressor",
    "h_local_cls",
    "h_central_cls",
    "k_local_reg",
    "clip_radius_local",
    "clip_radius_central",
    "h_central_reg",
    "fit_local_cube_classifier",
    "fit_central_exp_classifier",
    "exp_classifier_model_distribution",
    "fit_knn_regressor",
    "fit_central_cube_regressor",
    "occupancy_floor",
    "predict_cube",
]


# ---------------------------------------------------------------------------
# schedules


def _check_schedule_args(N: int, eps: float, beta: float, d: int, c_mult: float):
    if N < 1:
        raise ValueError("N must be >= 1")
    if not (eps > 0.0):
        raise ValueError("epsilon must be positive")
    if not (0.0 < beta <= 1.0):
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if c_mult <= 0.0:
        raise ValueError("c_mult must be positive")


def h_local_cls(N: int, eps, num_classes: int, beta: float, d: int, c_mult: float = 1.0) -> float:
    """Cube side length for the local-model classifier.

    c_mult * (N * min(eps^2, 1) / ln K)^(-1/(2*beta+d)), clamped to (0, 1].
    The effective sample size N*eps^2 saturates at eps = 1: more budget than
    that no longer sharpens the per-bit signal.
    """
    eps = resolve_epsilon(eps)
    _check_schedule_args(N, eps, beta, d, c_mult)
    if num_classes < 2:
        raise ValueError("num_classes must be >= 2")
    effective = N * min(eps * eps, 1.0) / math.log(num_classes)
    return min(1.0, c_mult * effective ** (-1.0 / (2.0 * beta + d)))


def h_central_cls(N: int, eps, num_classes: int, beta: float, d: int, c_mult: float = 1.0) -> float:
    """Cube side length for the central exponential-mechanism classifier.

    Sum of the privacy term (ln K/(eps*N))^(1/(beta+d)) and the non-private
    term (ln K/N)^(1/(2*beta+d)), scaled by c_mult and clamped to (0, 1].
    """
    eps = resolve_epsilon(eps)
    _check_schedule_args(N, eps, beta, d, c_mult)
    if num_classes < 2:
        raise ValueError("num_classes must be >= 2")
    logk = math.log(num_classes)
    private = (logk / (eps * N)) ** (1.0 / (beta + d)) if math.isfinite(eps) else 0.0
    sampling = (logk / N) ** (1.0 / (2.0 * beta + d))
    return min(1.0, c_mult * (private + sampling))


def k_local_reg(
    N: int,
    eps,
    beta: float,
    d: int,
    heavy: float | None = None,
    c_mult: float = 1.0,
) -> int:
    """Neighbor count for the local-model kNN regressor.

    Bounded labels: N^(2*beta/(d+2*beta)) * min(eps,1)^(-2d/(d+2*beta)).
    Heavy tails (moment order p): the larger of (N*eps^2)^(2p*beta/(2p*beta+
    d(p-1))) and the non-private N^(2*beta/(2*beta+d)); here eps enters
    unsaturated, as the clip radius schedule absorbs large budgets.  An
    infinite budget keeps only the non-private term.  Rounded to the nearest
    integer and clamped to [1, N].
    """
    eps = resolve_epsilon(eps)
    _check_schedule_args(N, eps, beta, d, c_mult)
    if heavy is None:
        k = N ** (2.0 * beta / (d + 2.0 * beta)) * min(eps, 1.0) ** (
            -2.0 * d / (d + 2.0 * beta)
        )
    else:
        p = float(heavy)
        if p <= 1.0:
            raise ValueError("moment order must exceed 1")
        k = N ** (2.0 * beta / (2.0 * beta + d))
        if math.isfinite(eps):
            # noise-free fitting has no privacy term to balance
            private = (N * eps * eps) ** (
                2.0 * p * beta / (2.0 * p * beta + d * (p - 1.0))
            )
            k = max(private, k)
    return int(min(N, max(1, round(c_mult * k))))


def clip_radius_local(k: int, eps, p: float, c_mult: float = 1.0) -> float:
    """Clip radius for the local heavy-tail mechanism: (k*eps^2)^(1/(2p))."""
    eps = resolve_epsilon(eps)
    if k < 1:
        raise ValueError("k must be >= 1")
    if not (eps > 0.0):
        raise ValueError("epsilon must be positive")
    if p <= 1.0:
        raise ValueError("moment order must exceed 1")
    if c_mult <= 0.0:
        raise ValueError("c_mult must be positive")
    return c_mult * (k * eps * eps) ** (1.0 / (2.0 * p))


def clip_radius_central(eps, N: int, h: float, d: int, p: float, c_mult: float = 1.0) -> float:
    """Clip radius for the central heavy-tail estimator: (eps*N*h^d)^(1/p)."""
    eps = resolve_epsilon(eps)
    if N < 1:
        raise ValueError("N must be >= 1")
    if not (eps > 0.0):
        raise ValueError("epsilon must be positive")
    if not (0.0 < h <= 1.0):
        raise ValueError("h must lie in (0, 1]")
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if p <= 1.0:
        raise ValueError("moment order must exceed 1")
    if c_mult <= 0.0:
        raise ValueError("c_mult must be positive")
    return c_mult * (eps * N * h**d) ** (1.0 / p)


def h_central_reg(
    N: int,
    eps,
    beta: float,
    d: int,
    heavy: float | None = None,
    c_mult: float = 1.0,
) -> float:
    """Cube side length for the central cube regressor.

    Bounded labels: N^(-1/(2*beta+d)) + (eps*N)^(-1/(d+beta)).  Heavy tails
    of moment order p: the privacy term becomes (eps*N)^(-1/(p*beta+d(p-1))),
    whose exponent at p = 2 coincides with the sampling exponent 2*beta+d.
    Scaled by c_mult, clamped to (0, 1].
    """
    eps = resolve_epsilon(eps)
    _check_schedule_args(N, eps, beta, d, c_mult)
    sampling = N ** (-1.0 / (2.0 * beta + d))
    if heavy is None:
        private = (eps * N) ** (-1.0 / (d + beta)) if math.isfinite(eps) else 0.0
    else:
        p = float(heavy)
        if p <= 1.0:
            raise ValueError("moment order must exceed 1")
        private = (
            (eps * N) ** (-1.0 / (p * beta + d * (p - 1.0))) if math.isfinite(eps) else 0.0
        )
    return min(1.0, c_mult * (sampling + private))


# ---------------------------------------------------------------------------
# fitted models


@dataclass(frozen=True)
class CubeClassifier:
    """Piecewise-constant classifier: one class per partition cell."""

    partition: CubePartition
    class_of: np.ndarray
    num_classes: int

    def __post_init__(self):
        c = np.asarray(self.class_of, dtype=np.int64)
        if c.shape != (self.partition.num_cells,):
            raise ValueError("class_of must assign one class per cell")
        if c.size and (c.min() < 1 or c.max() > self.num_classes):
            raise ValueError("cell classes must lie in 1..K")
        object.__setattr__(self, "class_of", c)

    def predict(self, X) -> np.ndarray:
        """Class labels of the cells containing the query points."""
        return self.class_of[cube_indices(self.partition, X)]


@dataclass(frozen=True)
class CubeRegressor:
    """Piecewise-constant regressor: one real value per partition cell."""

    partition: CubePartition
    value_of: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.value_of, dtype=float)
        if v.shape != (self.partition.num_cells,):
            raise ValueError("value_of must assign one value per cell")
        if not np.all(np.isfinite(v)):
            raise ValueError("cell values must be finite")
        object.__setattr__(self, "value_of", v)

    def predict(self, X) -> np.ndarray:
        return self.value_of[cube_indices(self.partition, X)]


@dataclass(frozen=True)
class KnnRegressor:
    """Mean of privatized labels over the k exact nearest training points.

    Distance ties are broken by the smaller training index, so predictions
    are reproducible and equal to the sorted linear-scan reference.
    """

    k: int
    points: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.points, dtype=float)
        zz = np.asarray(self.z, dtype=float)
        if P.ndim != 2 or P.shape[0] < 1:
            raise ValueError("points must be a nonempty (N, d) array")
        if zz.shape != (P.shape[0],):
            raise ValueError("z must align with points")
        if not (1 <= self.k <= P.shape[0]):
            raise ValueError(f"k must lie in [1, {P.shape[0]}], got {self.k}")
        object.__setattr__(self, "points", P)
        object.__setattr__(self, "z", zz)

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.points.shape[1]:
            raise ValueError("query dimension does not match training points")
        n = self.points.shape[0]
        k = self.k
        out = np.empty(X.shape[0])
        # bound the (block, n) distance matrix to ~2^23 elements
        block = max(1, (1 << 23) // n)
        for start in range(0, X.shape[0], block):
            Q = X[start : start + block]
            d2 = ((Q[:, None, :] - self.points[None, :, :]) ** 2).sum(axis=2)
            if k == n:
                out[start : start + block] = self.z.mean()
                continue
            # k-th smallest distance; fill ties in ascending index order
            tau = np.partition(d2, k - 1, axis=1)[:, k - 1]
            strict = d2 < tau[:, None]
            need = k - strict.sum(axis=1)
            equal = d2 == tau[:, None]
            chosen = strict | (equal & (np.cumsum(equal, axis=1) <= need[:, None]))
            out[start : start + block] = (chosen * self.z[None, :]).sum(axis=1) / k
        return out


def predict_cube(model, x):
    """Fitted value of the cell containing x (scalar convenience wrapper)."""
    val = model.predict(np.asarray(x, dtype=float).reshape(1, -1))[0]
    return int(val) if isinstance(model, CubeClassifier) else float(val)


# ---------------------------------------------------------------------------
# fitting


def fit_local_cube_classifier(features, bits, num_classes: int, h: float) -> CubeClassifier:
    """Majority vote of privatized bit vectors within each cube.

    Sums the K-bit reports per cube and assigns each cube the class with the
    largest bit total; ties break to the smallest class index, and empty
    cubes (all-zero totals) therefore get class 1.

    Args:
        features: (N, d) public features in [0,1]^d.
        bits: (N, K) privatized bit matrix, one report per sample.
        num_classes: K >= 2.
        h: cube side length in (0, 1].
    """
    X = np.asarray(features, dtype=float)
    B = np.asarray(bits)
    if X.ndim != 2:
        raise ValueError("features must be an (N, d) array")
    if B.shape != (X.shape[0], num_classes):
        raise ValueError("bits must be an (N, K) array aligned with features")
    partition = make_partition(X.shape[1], h)
    idx = cube_indices(partition, X)
    totals = np.zeros((partition.num_cells, num_classes))
    np.add.at(totals, idx, B.astype(float))
    class_of = 1 + np.argmax(totals, axis=1)
    return CubeClassifier(partition=partition, class_of=class_of, num_classes=num_classes)


def _cube_class_counts(dataset: Dataset, partition: CubePartition) -> np.ndarray:
    idx = cube_indices(partition, dataset.features)
    counts = np.zeros((partition.num_cells, dataset.num_classes))
    np.add.at(counts, (idx, np.asarray(dataset.labels, dtype=np.int64) - 1), 1.0)
    return counts


def _exp_class_probs(counts: np.ndarray, eps: float, full_dp: bool) -> np.ndarray:
    """Per-cube selection probabilities proportional to e^(eps*count/s).

    s = 2 when only a label can change (one count moves by 1 in each of two
    classes), s = 4 when the feature can also move cubes.  Counts are shifted
    by their per-cube max before exponentiation so large eps*count cannot
    overflow.
    """
    s = 4.0 if full_dp else 2.0
    logits = (eps / s) * counts
    logits = logits - logits.max(axis=1, keepdims=True)
    w = np.exp(logits)
    return w / w.sum(axis=1, keepdims=True)


def fit_central_exp_classifier(
    dataset: Dataset,
    h: float,
    budget,
    rng: np.random.Generator | None = None,
    full_dp: bool = False,
) -> CubeClassifier:
    """Per-cube class selection through the exponential mechanism.

    Each cube draws its class with probability proportional to
    e^(eps * count/s), where count is the number of its samples with that
    label and s = 2 (label adjacency) or 4 (full adjacency).  An infinite
    budget degenerates to the plurality class with smallest-index ties.

    Args:
        dataset: classification dataset.
        h: cube side length in (0, 1].
        budget: PrivacyBudget or positive epsilon (math.inf for noise-free).
        rng: required for finite budgets.
        full_dp: use the full-adjacency temperature s = 4.
    """
    if dataset.task != CLASSIFICATION:
        raise ValueError("need a classification dataset")
    partition = make_partition(dataset.dim, h)
    counts = _cube_class_counts(dataset, partition)
    eps = resolve_epsilon(budget)
    if math.isinf(eps):
        class_of = 1 + np.argmax(counts, axis=1)
    else:
        if eps <= 0.0:
            raise ValueError("epsilon must be positive")
        if rng is None:
            raise ValueError("finite budgets need an rng")
        probs = _exp_class_probs(counts, eps, full_dp)
        u = rng.random((partition.num_cells, 1))
        class_of = 1 + (u > np.cumsum(probs, axis=1)).sum(axis=1)
    return CubeClassifier(
        partition=partition, class_of=class_of, num_classes=dataset.num_classes
    )


def exp_classifier_model_distribution(
    dataset: Dataset, h: float, budget, full_dp: bool = False
) -> np.ndarray:
    """Exact output law of ``fit_central_exp_classifier`` over all models.

    Cubes select classes independently, so the law over the K^G joint class
    assignments is the outer product of the per-cube selection probabilities.
    Atom index is the base-K expansion with cube 0 as the most significant
    digit.  Feeds the exhaustive central auditor.

    Raises:
        ValueError: when K^G exceeds 2^16 atoms.
    """
    if dataset.task != CLASSIFICATION:
        raise ValueError("need a classification dataset")
    partition = make_partition(dataset.dim, h)
    K = dataset.num_classes
    if K**partition.num_cells > 2**16:
        raise ValueError("model space too large to enumerate (over 2^16 atoms)")
    counts = _cube_class_counts(dataset, partition)
    eps = resolve_epsilon(budget)
    if math.isinf(eps):
        probs = np.zeros_like(counts)
        probs[np.arange(counts.shape[0]), np.argmax(counts, axis=1)] = 1.0
    else:
        if eps <= 0.0:
            raise ValueError("epsilon must be positive")
        probs = _exp_class_probs(counts, eps, full_dp)
    law = np.array([1.0])
    for row in probs:
        law = (law[:, None] * row[None, :]).ravel()
    return law


def fit_knn_regressor(features, z, k: int) -> KnnRegressor:
    """Bundle privatized labels with their public features for kNN prediction.

    Args:
        features: (N, d) training features.
        z: (N,) privatized labels aligned with features.
        k: neighbor count in [1, N].
    """
    X = np.asarray(features, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError("features must be a nonempty (N, d) array")
    return KnnRegressor(k=int(k), points=X, z=np.asarray(z, dtype=float))


def occupancy_floor(
    n_samples: int, density_floor: float, theta: float, partition: CubePartition
) -> float:
    """Lower bound n0 on the expected per-cube sample count.

    Under a density floor c and corner constant theta, every cube of width w
    holds at least c*theta*w^d probability mass, so n0 = N*c*theta*w^d / 2 is
    below the expected count with room for concentration.  The full-adjacency
    regressor divides by max(n_l, n0) and scales its noise by 1/n0.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if density_floor <= 0.0 or not (0.0 < theta <= 1.0):
        raise ValueError("density_floor must be positive and theta in (0, 1]")
    return 0.5 * n_samples * density_floor * theta * partition.width**partition.dim


def fit_central_cube_regressor(
    dataset: Dataset,
    h: float,
    budget,
    label_bound: float,
    rng: np.random.Generator | None = None,
    clipped: bool = False,
    full_dp: bool = False,
    density_floor: float = 1.0,
    theta: float = 1.0,
) -> CubeRegressor:
    """Noised per-cube label means.

    Label adjacency (full_dp=False): cube value = mean + Laplace(2T/(n_l*eps))
    over its n_l samples; empty cubes emit exactly 0 with no noise, which is
    safe because occupancy depends only on public features.

    Full adjacency (full_dp=True): a sample may also change cubes, so every
    cube divides its label sum by max(n_l, n0) with the occupancy floor
    n0 = N * density_floor * theta * w^d / 2, and every cube (empty ones
    included) adds Laplace(6T/(n0*eps)): the output must not reveal which
    cubes are occupied.

    Args:
        dataset: regression dataset.
        h: cube side length in (0, 1].
        budget: PrivacyBudget or positive epsilon (math.inf for noise-free).
        label_bound: T; labels are clipped to [-T, T] when ``clipped``,
            otherwise they must already satisfy |y| <= T.
        rng: required for finite budgets.
        clipped: clip labels before averaging.
        full_dp: use the full-adjacency estimator.
        density_floor: certified lower bound on the feature density.
        theta: certified corner-volume constant.
    """
    if dataset.task != REGRESSION:
        raise ValueError("need a regression dataset")
    if label_bound <= 0.0:
        raise ValueError("label_bound must be positive")
    partition = make_partition(dataset.dim, h)
    idx = cube_indices(partition, dataset.features)
    y = np.asarray(dataset.labels, dtype=float)
    if clipped:
        y = np.clip(y, -label_bound, label_bound)
    elif y.size and np.max(np.abs(y)) > label_bound:
        raise ValueError("unclipped labels exceed label_bound; the noise scale would be wrong")
    counts = np.zeros(partition.num_cells)
    sums = np.zeros(partition.num_cells)
    np.add.at(counts, idx, 1.0)
    np.add.at(sums, idx, y)
    eps = resolve_epsilon(budget)
    noise_free = math.isinf(eps)
    if not noise_free:
        if eps <= 0.0:
            raise ValueError("epsilon must be positive")
        if rng is None:
            raise ValueError("finite budgets need an rng")

    if full_dp:
        floor = occupancy_floor(len(dataset), density_floor, theta, partition)
        values = sums / np.maximum(counts, floor)
        if not noise_free:
            values = values + laplace_noise(
                6.0 * label_bound / (floor * eps), partition.num_cells, rng
            )
        return CubeRegressor(partition=partition, value_of=values)

    values = np.zeros(partition.num_cells)
    occupied = counts > 0
    values[occupied] = sums[occupied] / counts[occupied]
    if not noise_free and np.any(occupied):
        scales = 2.0 * label_bound / (counts[occupied] * eps)
        values[occupied] += scales * laplace_noise(1.0, int(occupied.sum()), rng)
    return CubeRegressor(partition=partition, value_of=values)
