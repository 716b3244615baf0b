"""Synthetic joint distributions with exactly evaluable conditional means.

All families put X uniform on [0,1]^d (density floor 1, corner constant 1) and
differ only in the conditional law of Y.  Because the true conditional mean or
class probabilities are evaluable in closed form, excess risk can be measured
against the truth with no test-set noise.

Certified constants for the smooth trigonometric family
-------------------------------------------------------
The base waveform is s(x) = sin(2*pi*sum_i x_i), with range [-1, 1].

Smoothness.  |sum_i x_i - sum_i x'_i| <= sqrt(d) * ||x - x'||, and sin is
1-Lipschitz after the 2*pi chain factor, so |s(x) - s(x')| <=
2*pi*sqrt(d) * r where r = ||x - x'||.  For r <= 1 and any smoothness
exponent beta in (0, 1], r <= r^beta, so amplitude-a curves satisfy
|a*s(x) - a*s(x')| <= 2*pi*a*sqrt(d) * r^beta.  For r > 1 the range bound
|a*s - a*s'| <= 2a < 2*pi*a*sqrt(d) <= 2*pi*a*sqrt(d) * r^beta closes the
gap.  Hence L = 2*pi*a*sqrt(d) is a valid Hoelder constant for every beta.

Margin, two classes.  With eta_2 = 1/2 + a*s the top-two gap is 2a|s(x)|.
sum_i X_i mod 1 is exactly uniform on [0,1] when X is uniform on the cube, so
the gap is distributed as 2a|sin(2*pi*U)|.  P(|sin(2*pi*U)| < c) =
(2/pi)*arcsin(c) <= c for c in [0,1], giving
P(0 < gap < t) <= t/(2a): margin exponent 1 with constant 1/(2a).

Margin, more classes.  Class probabilities are a softmax over shifted copies
tau*sin(2*pi*(t + (j-1)/K)).  Two shifted sine curves cross transversally
(they can only be tangent where both peak, impossible for distinct shifts in
[0,1)), so the top-two gap vanishes linearly at finitely many points per
period and the margin exponent is again 1.  The constant is certified
numerically at construction by sweeping the (exactly uniform) phase on a
dense grid; the softmax map is 1/2-Lipschitz in the logit sup-norm, which
combined with the waveform bound gives L = pi*tau*sqrt(d) (the r > 1 range
gap closes because pi*tau*sqrt(d) > 1 for the temperatures used).

The bump family is the piecewise-polynomial construction used for worst-case
lower bounds: phi(u) = prod_i max(0, 1 - 2|u_i|)^beta is supported on the
centered unit cube, has phi(0) = 1, and t -> max(0,t)^beta Hoelder-beta with
constant 1 per axis gives |phi(u) - phi(u')| <= d * 2^beta * ||u - u'||^beta;
rescaling by cube width w and amplitude w^beta makes each bump Hoelder-beta
with constant d * 2^beta, and crossing a cube boundary at worst doubles it:
L = d * 2^(beta+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import (
    CLASSIFICATION,
    REGRESSION,
    AssumptionParams,
    CubePartition,
    Dataset,
    cell_center,
    make_partition,
)

__all__ = [
    "Distribution",
    "BumpConfig",
    "BoundedNoise",
    "HeavyTailNoise",
    "smooth_classification",
    "bump_classification",
    "smooth_regression",
    "sample_dataset",
    "bayes_risk",
    "grid_resolution",
    "midpoint_grid",
]

TASK_CLASSIFICATION = "classification"
TASK_REG_BOUNDED = "regression-bounded"
TASK_REG_HEAVY = "regression-heavy"


@dataclass(frozen=True)
class BoundedNoise:
    """Additive uniform label noise keeping |Y| inside a hard bound."""

    label_bound: float

    def __post_init__(self):
        if self.label_bound <= 0.0:
            raise ValueError("label_bound must be positive")


@dataclass(frozen=True)
class HeavyTailNoise:
    """Conditional p-th moment bound without an almost-sure label bound."""

    moment_order: float
    moment_bound: float

    def __post_init__(self):
        if self.moment_order <= 1.0:
            raise ValueError("moment_order must exceed 1")
        if self.moment_bound <= 0.0:
            raise ValueError("moment_bound must be positive")


@dataclass(frozen=True, eq=False)
class Distribution:
    """A joint law of (X, Y) with X uniform on [0,1]^d and evaluable truth.

    Attributes:
        dim: feature dimension.
        task: "classification", "regression-bounded", or "regression-heavy".
        params: the smoothness/margin/moment constants this law certifies.
        num_classes: K for classification, None otherwise.
        detail: realized law constants (amplitude, noise width, tail scale...)
            useful for oracles and demos.
    """

    dim: int
    task: str
    params: AssumptionParams
    num_classes: int | None = None
    detail: dict = field(default_factory=dict)
    _prob_fn: Callable | None = None
    _mean_fn: Callable | None = None
    _var_fn: Callable | None = None
    _sampler: Callable | None = None

    def _points(self, X) -> np.ndarray:
        P = np.asarray(X, dtype=float)
        if P.ndim == 1:
            P = P[None, :]
        if P.ndim != 2 or P.shape[1] != self.dim:
            raise ValueError(f"points must have shape (N, {self.dim})")
        return P

    def class_probs(self, X) -> np.ndarray:
        """(N, K) conditional class probabilities; classification only."""
        if self.task != TASK_CLASSIFICATION:
            raise ValueError("class_probs is only defined for classification")
        return self._prob_fn(self._points(X))

    def mean(self, X) -> np.ndarray:
        """(N,) conditional mean of Y given x; regression only."""
        if self.task == TASK_CLASSIFICATION:
            raise ValueError("mean is only defined for regression")
        return self._mean_fn(self._points(X))

    def conditional_variance(self, X) -> np.ndarray:
        """(N,) conditional variance of Y given x; regression only."""
        if self.task == TASK_CLASSIFICATION:
            raise ValueError("conditional_variance is only defined for regression")
        return self._var_fn(self._points(X))

    def sample_labels(self, X, rng: np.random.Generator) -> np.ndarray:
        """Draw one label per row of X from the conditional law."""
        return self._sampler(self._points(X), rng)

    @property
    def is_classification(self) -> bool:
        return self.task == TASK_CLASSIFICATION


def _waveform(X: np.ndarray, shift: float = 0.0) -> np.ndarray:
    return np.sin(2.0 * math.pi * (X.sum(axis=1) + shift))


def _sample_classes(probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Inverse-CDF class draw: (N, K) probabilities to labels in {1..K}."""
    cum = np.cumsum(probs, axis=1)
    u = rng.random(probs.shape[0])
    return 1 + (u[:, None] > cum).sum(axis=1).astype(np.int64)


def _margin_constant_numeric(prob_of_phase: Callable, grid: int = 1 << 15) -> float:
    """Numeric margin-constant certificate for a 1-periodic phase family.

    Sweeps the phase t over a dense uniform grid (the phase of the smooth
    family is exactly uniform under uniform X), computes the top-two
    probability gap at each point, and bounds sup_u P(gap < u)/u by the
    empirical CDF ratio with a 25% safety factor for discretization.
    """
    t = (np.arange(grid) + 0.5) / grid
    probs = prob_of_phase(t)
    top2 = np.partition(probs, probs.shape[1] - 2, axis=1)[:, -2:]
    gap = np.sort(top2[:, 1] - top2[:, 0])
    gap = gap[gap > 0.0]
    ranks = np.arange(1, gap.size + 1) / grid
    return 1.25 * float(np.max(ranks / gap))


def smooth_classification(d: int, num_classes: int, beta: float, seed: int) -> Distribution:
    """A smooth classification law built on the shifted-sine family.

    For two classes: P(Y=2 | x) = 1/2 + a*sin(2*pi*sum_i x_i) with a
    seed-selected amplitude in (0, 1/2).  For more classes: a softmax over
    shifted copies of the waveform with a seed-selected temperature.  The
    certified Hoelder and margin constants are derived in the module
    docstring; they hold for every beta in (0, 1] because the waveform is
    Lipschitz and the domain has diameter sqrt(d).

    Args:
        d: feature dimension >= 1.
        num_classes: K >= 2.
        beta: smoothness exponent the returned params certify, in (0, 1].
        seed: selects the amplitude/temperature deterministically.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if num_classes < 2:
        raise ValueError("num_classes must be >= 2")
    if not (0.0 < beta <= 1.0):
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    rng = np.random.default_rng(seed)

    if num_classes == 2:
        amplitude = 0.15 + 0.2 * rng.random()

        def prob_fn(X, a=amplitude):
            p2 = 0.5 + a * _waveform(X)
            return np.stack([1.0 - p2, p2], axis=1)

        holder = 2.0 * math.pi * amplitude * math.sqrt(d)
        margin = 1.0 / (2.0 * amplitude)
        detail = {"amplitude": amplitude}
    else:
        temperature = 0.5 + 0.5 * rng.random()
        shifts = np.arange(num_classes) / num_classes

        def prob_fn(X, tau=temperature, shifts=shifts):
            logits = np.stack([tau * _waveform(X, sh) for sh in shifts], axis=1)
            logits -= logits.max(axis=1, keepdims=True)
            w = np.exp(logits)
            return w / w.sum(axis=1, keepdims=True)

        def prob_of_phase(t, tau=temperature, shifts=shifts):
            logits = tau * np.sin(2.0 * math.pi * (t[:, None] + shifts[None, :]))
            logits -= logits.max(axis=1, keepdims=True)
            w = np.exp(logits)
            return w / w.sum(axis=1, keepdims=True)

        holder = math.pi * temperature * math.sqrt(d)
        margin = _margin_constant_numeric(prob_of_phase)
        detail = {"temperature": temperature}

    params = AssumptionParams(
        beta=beta,
        holder_const=holder,
        gamma=1.0,
        margin_const=margin,
    )

    def sampler(X, rng):
        return _sample_classes(prob_fn(X), rng)

    return Distribution(
        dim=d,
        task=TASK_CLASSIFICATION,
        params=params,
        num_classes=num_classes,
        detail=detail,
        _prob_fn=prob_fn,
        _sampler=sampler,
    )


@dataclass(frozen=True)
class BumpConfig:
    """Placement of signed bumps on the cells of a scale-h partition.

    ``signs`` gives one sign per active cell; the active cells are the first
    len(signs) cells of the partition in row-major order.
    """

    h: float
    signs: tuple
    beta: float

    def __post_init__(self):
        if not (0.0 < self.h < 1.0):
            raise ValueError("bump scale must lie in (0, 1)")
        if not (0.0 < self.beta <= 1.0):
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        signs = tuple(int(v) for v in self.signs)
        if len(signs) < 1 or any(v not in (-1, 1) for v in signs):
            raise ValueError("signs must be a nonempty sequence over {-1, +1}")
        object.__setattr__(self, "signs", signs)

    @property
    def num_active(self) -> int:
        return len(self.signs)


def _bump_profile(U: np.ndarray, beta: float) -> np.ndarray:
    """phi(u) = prod_i max(0, 1 - 2|u_i|)^beta on the centered unit cube."""
    return np.prod(np.maximum(0.0, 1.0 - 2.0 * np.abs(U)) ** beta, axis=1)


def bump_classification(config: BumpConfig, d: int) -> Distribution:
    """Two-class law whose regression function is a sum of signed bumps.

    eta(x) = sum_k v_k * phi((x - c_k)/w) * w^beta over the active cells,
    with P(Y=2 | x) = (1 + eta(x))/2.  The requested scale h is realized as
    the partition's exact cell width w = 1/ceil(1/h) so bump supports stay
    disjoint.  This is the worst-case family: the learner must effectively
    recover every sign v_k.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    partition = make_partition(d, config.h)
    if config.num_active > partition.num_cells:
        raise ValueError(
            f"{config.num_active} active cells exceed the partition's {partition.num_cells}"
        )
    width = partition.width
    amplitude = width**config.beta
    if amplitude >= 1.0:
        raise ValueError("bump amplitude w^beta must stay below 1")
    centers = np.stack([cell_center(partition, k) for k in range(config.num_active)])
    signs = np.asarray(config.signs, dtype=float)
    beta = config.beta

    def eta_fn(X):
        # bump supports are disjoint, so the sum has at most one active term
        out = np.zeros(X.shape[0])
        for c, v in zip(centers, signs):
            out += v * _bump_profile((X - c) / width, beta) * amplitude
        return out

    def prob_fn(X):
        p2 = 0.5 * (1.0 + eta_fn(X))
        return np.stack([1.0 - p2, p2], axis=1)

    def sampler(X, rng):
        return _sample_classes(prob_fn(X), rng)

    params = AssumptionParams(
        beta=beta,
        holder_const=d * 2.0 ** (beta + 1.0),
        gamma=0.0,
        margin_const=1.0,
    )
    return Distribution(
        dim=d,
        task=TASK_CLASSIFICATION,
        params=params,
        num_classes=2,
        detail={"width": width, "amplitude": amplitude},
        _prob_fn=prob_fn,
        _sampler=sampler,
    )


def smooth_regression(d: int, beta: float, noise, seed: int) -> Distribution:
    """A smooth regression law with either bounded or heavy-tailed labels.

    The conditional mean is a*sin(2*pi*sum_i x_i) with a seed-selected
    amplitude.  Bounded noise adds an independent uniform on [-b, b] with
    a + b kept inside the declared label bound.  Heavy-tailed noise draws Y
    from a three-point law on {+t0, 0, -t0} whose probabilities are tilted by
    the conditional mean, so E[Y | x] equals the mean exactly and
    E[|Y|^p | x] equals the declared moment bound exactly; t0 is the largest
    scale keeping all three probabilities valid, which maximizes the tail
    stress on clipping-based estimators.

    Args:
        d: feature dimension >= 1.
        beta: smoothness exponent in (0, 1].
        noise: a BoundedNoise or HeavyTailNoise spec.
        seed: selects the amplitude deterministically.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if not (0.0 < beta <= 1.0):
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    rng = np.random.default_rng(seed)

    if isinstance(noise, BoundedNoise):
        bound = noise.label_bound
        amplitude = (0.25 + 0.1 * rng.random()) * bound
        halfwidth = 0.5 * bound
        if amplitude + halfwidth > bound:
            raise ValueError("amplitude plus noise width exceeds the label bound")

        def mean_fn(X, a=amplitude):
            return a * _waveform(X)

        def var_fn(X, b=halfwidth):
            return np.full(X.shape[0], b * b / 3.0)

        def sampler(X, rng, a=amplitude, b=halfwidth):
            return a * _waveform(X) + rng.uniform(-b, b, size=X.shape[0])

        params = AssumptionParams(
            beta=beta,
            holder_const=2.0 * math.pi * amplitude * math.sqrt(d),
            label_bound=bound,
        )
        return Distribution(
            dim=d,
            task=TASK_REG_BOUNDED,
            params=params,
            detail={"amplitude": amplitude, "noise_halfwidth": halfwidth},
            _mean_fn=mean_fn,
            _var_fn=var_fn,
            _sampler=sampler,
        )

    if isinstance(noise, HeavyTailNoise):
        p, moment = noise.moment_order, noise.moment_bound
        amplitude = 0.15 + 0.2 * rng.random()
        if amplitude > moment ** (1.0 / p):
            raise ValueError("amplitude exceeds the moment bound's allowed mean range")
        # largest scale with valid probabilities: needs max|eta| <= moment/t0^(p-1)
        t0 = (moment / amplitude) ** (1.0 / (p - 1.0))
        mass = moment / t0**p
        if mass > 1.0:
            raise ValueError("three-point mass exceeds 1; lower the amplitude")

        def mean_fn(X, a=amplitude):
            return a * _waveform(X)

        def var_fn(X, a=amplitude):
            eta = a * _waveform(X)
            return moment * t0 ** (2.0 - p) - eta**2

        def sampler(X, rng, a=amplitude):
            eta = a * _waveform(X)
            p_plus = 0.5 * (mass + eta / t0)
            p_nonneg = p_plus + (1.0 - mass)
            u = rng.random(X.shape[0])
            return np.where(u < p_plus, t0, np.where(u < p_nonneg, 0.0, -t0))

        params = AssumptionParams(
            beta=beta,
            holder_const=2.0 * math.pi * amplitude * math.sqrt(d),
            moment_order=p,
            moment_bound=moment,
        )
        return Distribution(
            dim=d,
            task=TASK_REG_HEAVY,
            params=params,
            detail={"amplitude": amplitude, "tail_scale": t0, "tail_mass": mass},
            _mean_fn=mean_fn,
            _var_fn=var_fn,
            _sampler=sampler,
        )

    raise TypeError("noise must be a BoundedNoise or HeavyTailNoise spec")


def sample_dataset(dist: Distribution, N: int, seed: int) -> Dataset:
    """Draw N i.i.d. samples: X uniform on the cube, Y from the conditional law.

    Deterministic given (dist, N, seed).
    """
    if N < 1:
        raise ValueError(f"sample count must be >= 1, got {N}")
    rng = np.random.default_rng(seed)
    X = rng.random((N, dist.dim))
    y = dist.sample_labels(X, rng)
    if dist.is_classification:
        return Dataset(X, y, task=CLASSIFICATION, num_classes=dist.num_classes)
    return Dataset(X, y, task=REGRESSION)


def grid_resolution(d: int) -> int:
    """Midpoint-grid points per axis used for exact-ish integration."""
    if d == 1:
        return 256
    if d == 2:
        return 128
    if d == 3:
        return 64
    raise ValueError("grid integration supports d <= 3")


def midpoint_grid(d: int, points_per_axis: int) -> np.ndarray:
    """(m^d, d) midpoint-rule nodes of the uniform grid on [0,1]^d."""
    axis = (np.arange(points_per_axis) + 0.5) / points_per_axis
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def bayes_risk(dist: Distribution, mc_points: int = 100_000, mc_seed: int = 7) -> float:
    """Best achievable risk of the distribution's own task.

    Classification: P(c*(X) != Y) = integral of (1 - max_j eta_j); regression:
    E[Var(Y | X)].  Uses the midpoint grid for d <= 3 and seeded Monte Carlo
    above that.
    """
    if dist.dim <= 3:
        X = midpoint_grid(dist.dim, grid_resolution(dist.dim))
    else:
        X = np.random.default_rng(mc_seed).random((mc_points, dist.dim))
    if dist.is_classification:
        vals = 1.0 - dist.class_probs(X).max(axis=1)
    else:
        vals = dist.conditional_variance(X)
    return float(vals.mean())
