"""Label privatizers for the local model and exhaustive privacy auditors.

The privatizers randomize a single label (features are public throughout).
Each takes an explicit ``numpy.random.Generator`` so calls are pure given the
stream; parallel workers get disjoint streams via ``derive_rng``.

The auditors certify the privacy level by enumeration instead of proof: the
local auditor maximizes the log-ratio of output probabilities over all label
pairs and output atoms, and the central auditor maximizes it over all label
substitutions of a small dataset.  Both are exact, so a mechanism that leaks
more than the declared budget is caught, not bounded.
"""

from __future__ import annotations

import itertools
import math
import struct

import numpy as np

from .core import CLASSIFICATION, Dataset, resolve_epsilon

__all__ = [
    "derive_seed",
    "derive_rng",
    "laplace_noise",
    "privatize_kbit",
    "privatize_kbit_batch",
    "privatize_rr",
    "privatize_rr_batch",
    "privatize_laplace",
    "privatize_laplace_batch",
    "privatize_clip_laplace",
    "privatize_clip_laplace_batch",
    "kbit_output_distribution",
    "rr_output_distribution",
    "audit_ldp_discrete",
    "audit_cdp_exhaustive",
]

_MASK64 = (1 << 64) - 1


def _mix64(z: int) -> int:
    """One splitmix64 output step (Steele et al. finalizer)."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _as_key(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part) & _MASK64
    if isinstance(part, (float, np.floating)):
        # hash the exact bit pattern so e.g. 0.5 and 0.5000001 split apart
        return struct.unpack("<Q", struct.pack("<d", float(part)))[0]
    raise TypeError(f"seed parts must be ints or floats, got {type(part).__name__}")


def derive_seed(master_seed: int, *parts) -> int:
    """Derive a child seed from a master seed and a tuple of stream labels.

    The split rule: starting from the mixed master seed, each part is XORed in
    and re-mixed through splitmix64.  Distinct part tuples give independent
    streams; the same tuple always gives the same stream, regardless of how
    many workers run or in which order.

    Args:
        master_seed: the experiment-level seed.
        parts: integers or floats identifying the stream (floats are keyed by
            their exact IEEE-754 bit pattern).

    Returns:
        A 64-bit seed for ``numpy.random.PCG64``.
    """
    state = _mix64(int(master_seed) & _MASK64)
    for part in parts:
        state = _mix64(state ^ _as_key(part))
    return state


def derive_rng(master_seed: int, *parts) -> np.random.Generator:
    """Generator seeded by ``derive_seed(master_seed, *parts)``."""
    return np.random.Generator(np.random.PCG64(derive_seed(master_seed, *parts)))


def laplace_noise(scale: float, size, rng: np.random.Generator) -> np.ndarray:
    """Laplace(0, scale) draws by inverting the CDF of a uniform sample.

    z = -scale * sign(u - 1/2) * ln(1 - 2|u - 1/2|), which is deterministic
    given the stream and reproducible across platforms.  The log argument is
    clamped away from 0 so no draw is infinite.

    Args:
        scale: nonnegative scale parameter; 0 gives exact zeros.
        size: output shape (None for a scalar array of shape ()).
        rng: source stream.
    """
    if scale < 0.0 or not math.isfinite(scale):
        raise ValueError(f"scale must be finite and nonnegative, got {scale}")
    u = rng.random(size) - 0.5
    if scale == 0.0:
        return np.zeros_like(u)
    inner = np.maximum(1.0 - 2.0 * np.abs(u), np.finfo(float).tiny)
    return -scale * np.sign(u) * np.log(inner)


def _check_class(y: int, num_classes: int) -> int:
    if num_classes < 2:
        raise ValueError("num_classes must be >= 2")
    yi = int(y)
    if yi != y or not (1 <= yi <= num_classes):
        raise ValueError(f"class label must lie in 1..{num_classes}, got {y}")
    return yi


def _kbit_bit_probs(num_classes: int, eps: float) -> tuple[float, float]:
    """(P(bit=1 | own class), P(bit=1 | other class)) for the bit-vector report."""
    e = math.exp(eps / 2.0)
    return e / (e + 1.0), 1.0 / (e + 1.0)


def privatize_kbit(y: int, num_classes: int, budget, rng: np.random.Generator) -> np.ndarray:
    """Release a K-bit report of a class label with per-bit randomization.

    Bit j is set with probability e^{eps/2}/(e^{eps/2}+1) when j equals the
    true class and 1/(e^{eps/2}+1) otherwise, independently across bits.
    Changing the label moves exactly two bit distributions, each by a factor
    e^{eps/2}, so the report satisfies the eps local budget.  An infinite
    budget returns the exact one-hot encoding.

    Args:
        y: true class in {1..num_classes}.
        num_classes: number of classes K >= 2.
        budget: PrivacyBudget or bare epsilon >= 0 (0 gives uniform bits).
        rng: source stream.

    Returns:
        int8 array of K bits.
    """
    yi = _check_class(y, num_classes)
    eps = resolve_epsilon(budget)
    if math.isinf(eps):
        bits = np.zeros(num_classes, dtype=np.int8)
        bits[yi - 1] = 1
        return bits
    p_own, p_other = _kbit_bit_probs(num_classes, eps)
    probs = np.full(num_classes, p_other)
    probs[yi - 1] = p_own
    return (rng.random(num_classes) < probs).astype(np.int8)


def privatize_kbit_batch(labels, num_classes: int, budget, rng: np.random.Generator) -> np.ndarray:
    """Vectorized ``privatize_kbit``: (N,) labels to an (N, K) bit matrix."""
    y = np.asarray(labels, dtype=np.int64)
    if y.ndim != 1:
        raise ValueError("labels must be a 1-d sequence")
    if num_classes < 2:
        raise ValueError("num_classes must be >= 2")
    if y.size and (y.min() < 1 or y.max() > num_classes):
        raise ValueError(f"class labels must lie in 1..{num_classes}")
    onehot = np.zeros((y.size, num_classes), dtype=np.int8)
    onehot[np.arange(y.size), y - 1] = 1
    eps = resolve_epsilon(budget)
    if math.isinf(eps):
        return onehot
    p_own, p_other = _kbit_bit_probs(num_classes, eps)
    probs = np.where(onehot == 1, p_own, p_other)
    return (rng.random((y.size, num_classes)) < probs).astype(np.int8)


def privatize_rr(y: int, num_classes: int, budget, rng: np.random.Generator) -> int:
    """Randomized response over K classes.

    Reports the true class with probability e^eps/(e^eps + K - 1) and each
    other class with probability 1/(e^eps + K - 1).  Infinite budget is the
    identity; zero budget is uniform over all K classes.
    """
    yi = _check_class(y, num_classes)
    eps = resolve_epsilon(budget)
    if math.isinf(eps):
        return yi
    p_true = math.exp(eps) / (math.exp(eps) + num_classes - 1)
    if rng.random() < p_true:
        return yi
    j = int(rng.integers(1, num_classes))  # uniform over K-1 slots
    return j if j < yi else j + 1


def privatize_rr_batch(labels, num_classes: int, budget, rng: np.random.Generator) -> np.ndarray:
    """Vectorized ``privatize_rr``: (N,) labels to (N,) randomized labels."""
    y = np.asarray(labels, dtype=np.int64)
    if y.ndim != 1:
        raise ValueError("labels must be a 1-d sequence")
    if num_classes < 2:
        raise ValueError("num_classes must be >= 2")
    if y.size and (y.min() < 1 or y.max() > num_classes):
        raise ValueError(f"class labels must lie in 1..{num_classes}")
    eps = resolve_epsilon(budget)
    if math.isinf(eps):
        return y.copy()
    p_true = math.exp(eps) / (math.exp(eps) + num_classes - 1)
    keep = rng.random(y.size) < p_true
    alt = rng.integers(1, num_classes, size=y.size)
    alt = np.where(alt >= y, alt + 1, alt)  # skip the slot of the true class
    return np.where(keep, y, alt)


def privatize_laplace(y: float, label_bound: float, budget, rng: np.random.Generator) -> float:
    """Add Laplace noise of scale 2T/eps to a label known to lie in [-T, T].

    The bound T caps the sensitivity of a label substitution at 2T, so scale
    2T/eps meets the eps local budget.  Infinite budget returns y unchanged.

    Args:
        y: label value with |y| <= label_bound.
        label_bound: the almost-sure bound T > 0.
        budget: PrivacyBudget or bare positive epsilon.
        rng: source stream.
    """
    if label_bound <= 0.0:
        raise ValueError("label_bound must be positive")
    yf = float(y)
    if abs(yf) > label_bound:
        raise ValueError(f"|y| = {abs(yf)} exceeds the declared bound {label_bound}")
    eps = resolve_epsilon(budget)
    if math.isinf(eps):
        return yf
    if eps == 0.0:
        raise ValueError("zero budget gives an unbounded noise scale")
    return yf + float(laplace_noise(2.0 * label_bound / eps, None, rng))


def privatize_laplace_batch(labels, label_bound: float, budget, rng: np.random.Generator) -> np.ndarray:
    """Vectorized ``privatize_laplace``."""
    if label_bound <= 0.0:
        raise ValueError("label_bound must be positive")
    y = np.asarray(labels, dtype=float)
    if y.size and np.max(np.abs(y)) > label_bound:
        raise ValueError(f"labels exceed the declared bound {label_bound}")
    eps = resolve_epsilon(budget)
    if math.isinf(eps):
        return y.copy()
    if eps == 0.0:
        raise ValueError("zero budget gives an unbounded noise scale")
    return y + laplace_noise(2.0 * label_bound / eps, y.shape, rng)


def privatize_clip_laplace(y: float, clip_radius: float, budget, rng: np.random.Generator) -> float:
    """Clip a label to [-T, T], then add Laplace noise of scale 2T/eps.

    Unlike ``privatize_laplace`` there is no precondition on y; clipping
    enforces the sensitivity bound, at the cost of bias for |y| > T.
    """
    if clip_radius <= 0.0:
        raise ValueError("clip_radius must be positive")
    z = min(max(float(y), -clip_radius), clip_radius)
    eps = resolve_epsilon(budget)
    if math.isinf(eps):
        return z
    if eps == 0.0:
        raise ValueError("zero budget gives an unbounded noise scale")
    return z + float(laplace_noise(2.0 * clip_radius / eps, None, rng))


def privatize_clip_laplace_batch(labels, clip_radius: float, budget, rng: np.random.Generator) -> np.ndarray:
    """Vectorized ``privatize_clip_laplace``."""
    if clip_radius <= 0.0:
        raise ValueError("clip_radius must be positive")
    z = np.clip(np.asarray(labels, dtype=float), -clip_radius, clip_radius)
    eps = resolve_epsilon(budget)
    if math.isinf(eps):
        return z
    if eps == 0.0:
        raise ValueError("zero budget gives an unbounded noise scale")
    return z + laplace_noise(2.0 * clip_radius / eps, z.shape, rng)


def kbit_output_distribution(num_classes: int, budget) -> np.ndarray:
    """Exact output law of the K-bit report, one row per input label.

    Atom b in {0..2^K - 1} encodes the bit pattern with the bit of class j+1
    stored at binary digit j (least significant digit is class 1).  Row y-1
    is the product of the K independent bit probabilities.

    Returns:
        (K, 2^K) array of probabilities; rows sum to 1.
    """
    if num_classes < 2:
        raise ValueError("num_classes must be >= 2")
    if 2**num_classes > 2**20:
        raise ValueError("output space too large to enumerate (over 2^20 atoms)")
    eps = resolve_epsilon(budget)
    num_atoms = 2**num_classes
    patterns = (np.arange(num_atoms)[:, None] >> np.arange(num_classes)[None, :]) & 1
    out = np.zeros((num_classes, num_atoms))
    if math.isinf(eps):
        for y in range(1, num_classes + 1):
            out[y - 1, 1 << (y - 1)] = 1.0
        return out
    p_own, p_other = _kbit_bit_probs(num_classes, eps)
    for y in range(1, num_classes + 1):
        p = np.full(num_classes, p_other)
        p[y - 1] = p_own
        out[y - 1] = np.prod(np.where(patterns == 1, p, 1.0 - p), axis=1)
    return out


def rr_output_distribution(num_classes: int, budget) -> np.ndarray:
    """Exact output law of randomized response: (K, K) row-stochastic matrix."""
    if num_classes < 2:
        raise ValueError("num_classes must be >= 2")
    eps = resolve_epsilon(budget)
    if math.isinf(eps):
        return np.eye(num_classes)
    p_true = math.exp(eps) / (math.exp(eps) + num_classes - 1)
    p_off = 1.0 / (math.exp(eps) + num_classes - 1)
    out = np.full((num_classes, num_classes), p_off)
    np.fill_diagonal(out, p_true)
    return out


def _max_log_ratio(p: np.ndarray, q: np.ndarray) -> float:
    """Largest |ln(p_i/q_i)| over atoms; +inf if an atom is one-sided zero.

    Atoms with p_i = q_i = 0 carry no information and are skipped, matching
    the supremum over reachable outputs.
    """
    p_pos = p > 0.0
    q_pos = q > 0.0
    if np.any(p_pos ^ q_pos):
        return math.inf
    both = p_pos & q_pos
    if not np.any(both):
        return 0.0
    ratios = np.log(p[both]) - np.log(q[both])
    return float(np.max(np.abs(ratios)))


def audit_ldp_discrete(distributions) -> float:
    """Exact worst-case privacy loss of an enumerable label mechanism.

    Args:
        distributions: (K, M) array; row y-1 is the mechanism's output
            distribution over M atoms when the input label is y.  Build with
            ``kbit_output_distribution`` / ``rr_output_distribution`` or any
            other closed-form enumeration.

    Returns:
        max over label pairs (y, y') and atoms of ln P(atom|y)/P(atom|y').
        +inf when some atom is reachable under one label but not another.

    Raises:
        ValueError: fewer than two labels, rows that are not distributions,
            or an output space too large to enumerate (over 2^20 atoms).
    """
    P = np.asarray(distributions, dtype=float)
    if P.ndim != 2 or P.shape[0] < 2:
        raise ValueError("need a (K, M) matrix with K >= 2 label rows")
    if P.shape[1] > 2**20:
        raise ValueError("output space too large to enumerate (over 2^20 atoms)")
    if np.any(P < 0.0) or np.any(np.abs(P.sum(axis=1) - 1.0) > 1e-9):
        raise ValueError("each row must be a probability distribution")
    worst = 0.0
    for a in range(P.shape[0]):
        for b in range(a + 1, P.shape[0]):
            worst = max(worst, _max_log_ratio(P[a], P[b]))
            if math.isinf(worst):
                return worst
    return worst


def audit_cdp_exhaustive(trainer, dataset: Dataset, flips: int) -> float:
    """Worst-case log-ratio of a trainer's output law under label substitutions.

    Enumerates every dataset whose labels differ from ``dataset`` in at most
    ``flips`` positions (features fixed), evaluates the trainer's exact output
    distribution for each, and returns the largest log-ratio against the base
    dataset's distribution.  For an eps-central-DP trainer the result is at
    most flips * eps by group privacy.

    Args:
        trainer: map from a classification Dataset to a 1-d probability vector
            over a fixed finite model space (same length for every input).
        dataset: base classification dataset, at most 12 samples.
        flips: maximum number of label substitutions g >= 0.

    Returns:
        The maximum log-ratio; 0.0 when flips = 0.

    Raises:
        ValueError: non-classification data, oversized dataset or model space.
    """
    if dataset.task != CLASSIFICATION:
        raise ValueError("central audit needs a classification dataset")
    if len(dataset) > 12:
        raise ValueError("exhaustive audit supports at most 12 samples")
    if flips < 0:
        raise ValueError("flips must be nonnegative")
    base = np.asarray(dataset.labels, dtype=np.int64)
    num_classes = dataset.num_classes
    p0 = np.asarray(trainer(dataset), dtype=float).ravel()
    if p0.size > 2**16:
        raise ValueError("model space too large to enumerate (over 2^16 atoms)")
    if np.any(p0 < 0.0) or abs(p0.sum() - 1.0) > 1e-9:
        raise ValueError("trainer must return a probability vector")
    worst = 0.0
    for r in range(1, flips + 1):
        for pos in itertools.combinations(range(len(dataset)), r):
            choices = [
                [c for c in range(1, num_classes + 1) if c != base[i]] for i in pos
            ]
            for repl in itertools.product(*choices):
                labels = base.copy()
                labels[list(pos)] = repl
                q = np.asarray(trainer(dataset.with_labels(labels)), dtype=float).ravel()
                if q.shape != p0.shape:
                    raise ValueError("trainer output length changed across datasets")
                worst = max(worst, _max_log_ratio(p0, q))
                if math.isinf(worst):
                    return worst
    return worst
