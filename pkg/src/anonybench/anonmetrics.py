"""Protection metrics over attribution confidence vectors.

The k-uncertainty score asks how tightly the true author's confidence is
packed among its k nearest confidences: score 1 means the k nearest
confidences are identical and the author hides among them, score near 0
means the author stands out. k-anonymity is the exact-equality special
case and is undecidable to enforce constructively, so it is only checked,
never synthesized.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError


def _as_confidences(c) -> np.ndarray:
    arr = np.asarray(c, dtype=np.float64)
    if arr.ndim != 1:
        raise ParameterError(f"confidence vector must be 1-D, got shape {arr.shape}")
    if arr.size < 1:
        raise ParameterError("confidence vector is empty")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("confidence vector contains non-finite values")
    return arr


def _check_t_k(n: int, t: int, k: int) -> None:
    if not 0 <= t < n:
        raise ParameterError(f"author index {t} out of range for {n} confidences")
    if not 1 <= k <= n:
        raise ParameterError(f"k must be in [1, {n}], got {k}")


def nearest(c, t: int, k: int) -> np.ndarray:
    """Indices of the k confidences nearest to c[t], the true author first.

    Remaining indices are ordered by (|c[i] - c[t]|, i); the index part makes
    the selection deterministic when distances tie. Ties that straddle c[t]
    have no canonical resolution, and this fixed order is the artifact's rule.
    """
    arr = _as_confidences(c)
    _check_t_k(arr.size, t, k)
    dist = np.abs(arr - arr[t])
    order = sorted(range(arr.size), key=lambda i: (dist[i], i))
    rest = [i for i in order if i != t]
    return np.asarray([t] + rest[: k - 1], dtype=np.intp)


def neighborhood_spread(c, t: int, k: int) -> float:
    """max - min over the k nearest confidences around the true author."""
    arr = _as_confidences(c)
    idx = nearest(arr, t, k)
    vals = arr[idx]
    return float(vals.max() - vals.min())


def uncertainty_score(c, t: int, k: int) -> float:
    """1 minus the spread of the k nearest confidences around c[t].

    Lies in (0, 1] for vectors with entries in (0, 1); equals 1 exactly when
    the k nearest confidences are all equal to c[t].
    """
    return 1.0 - neighborhood_spread(c, t, k)


def is_k_anonymous(c, t: int, k: int) -> bool:
    """Exact-equality anonymity: at least k-1 other confidences equal c[t]
    and the argmax of the vector is not unique. Uses exact float equality
    on purpose; this predicate is meaningful only for idealized vectors."""
    arr = _as_confidences(c)
    _check_t_k(arr.size, t, k)
    equal_others = int(np.sum(arr == arr[t])) - 1
    if equal_others < k - 1:
        return False
    top = arr.max()
    return int(np.sum(arr == top)) >= 2


def is_k_uncertain(c, t: int, k: int, eps: float) -> bool:
    """Relaxed anonymity: the k nearest confidences around c[t] lie within
    eps of each other. With eps = 0 this coincides with requiring the k
    nearest confidences to be exactly equal."""
    if eps < 0:
        raise ParameterError(f"eps must be non-negative, got {eps}")
    return neighborhood_spread(c, t, k) <= eps


def epsilon_threshold(n: int) -> float:
    """Practical eps heuristic 1/n: spreads below one uniform share of
    confidence mass are considered indistinguishable."""
    if n < 2:
        raise ParameterError(f"need at least 2 authors, got {n}")
    return 1.0 / n


def score_threshold(n: int) -> float:
    """Score-space companion of epsilon_threshold: scores above 1 - 1/n
    count as practically k-uncertain."""
    return 1.0 - epsilon_threshold(n)
