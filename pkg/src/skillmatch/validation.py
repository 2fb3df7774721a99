"""Input validation helpers shared by the estimators."""

from __future__ import annotations

import numbers
from typing import Iterable

import numpy as np


def check_texts(X) -> list[str]:
    """Accept one string or an iterable of strings; always return a list."""
    if isinstance(X, str):
        return [X]
    if X is None:
        raise ValueError("expected text input, got None")
    texts = list(X)
    for i, t in enumerate(texts):
        if not isinstance(t, str):
            raise TypeError(f"element {i} is {type(t).__name__}, expected str")
    return texts


def check_unit_interval(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or not 0.0 <= float(value) <= 1.0:
        raise ValueError(f"{name} must be a number in [0, 1], got {value!r}")
    return float(value)


def check_weight_vector(weights: Iterable[float], n_axes: int | None = None) -> np.ndarray:
    """Non-negative finite weights with a positive sum."""
    w = np.asarray(list(weights), dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a non-empty 1-d sequence")
    if n_axes is not None and w.size != n_axes:
        raise ValueError(f"expected {n_axes} weights, got {w.size}")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ValueError("weights must be finite and non-negative")
    if w.sum() <= 0:
        raise ValueError("at least one weight must be positive")
    return w


def check_score_matrix(S, n_axes: int | None = None) -> np.ndarray:
    """2-d array of axis scores in [0, 1]."""
    S = np.asarray(S, dtype=np.float64)
    if S.ndim == 1:
        S = S.reshape(1, -1)
    if S.ndim != 2:
        raise ValueError("scores must be 2-d (candidates x axes)")
    if n_axes is not None and S.shape[1] != n_axes:
        raise ValueError(f"expected {n_axes} axes, got {S.shape[1]}")
    if not np.all(np.isfinite(S)) or np.any(S < 0) or np.any(S > 1):
        raise ValueError("axis scores must lie in [0, 1]")
    return S
