"""Shared loss primitives: probability cross-entropy and smooth L1.

These are pure evaluations (no gradients); an external trainer is expected
to differentiate them.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import DataError, GraspFieldWarning

PROB_FLOOR = 1e-12


def smooth_l1(x, beta: float = 1.0):
    """Elementwise smooth L1: 0.5 x^2 / beta for |x| < beta, else |x| - beta/2.

    Continuous and once-differentiable at the |x| = beta transition.
    """
    if beta <= 0.0:
        raise DataError("beta must be positive")
    a = np.abs(np.asarray(x, dtype=np.float64))
    return np.where(a < beta, 0.5 * a * a / beta, a - 0.5 * beta)


def cross_entropy(probs: np.ndarray, true_classes) -> float:
    """Sum over rows of -log p[true class].

    ``probs`` is (N, C) with rows summing to 1 within 1e-6. Zero
    probabilities on the true class are clamped to 1e-12 with a warning.
    """
    probs = np.asarray(probs, dtype=np.float64)
    true_classes = np.asarray(true_classes, dtype=np.intp)
    if probs.ndim != 2:
        raise DataError("probs must be a 2D (N, C) array")
    if len(probs) != len(true_classes):
        raise DataError("probs and true_classes counts differ")
    if (probs < -1e-9).any():
        raise DataError("probabilities must be non-negative")
    if len(probs) and np.abs(probs.sum(axis=1) - 1.0).max() > 1e-6:
        raise DataError("probability rows must sum to 1 within 1e-6")
    if (true_classes < 0).any() or (true_classes >= probs.shape[1]).any():
        raise DataError("true class index out of range")
    p = probs[np.arange(len(probs)), true_classes]
    if (p < PROB_FLOOR).any():
        warnings.warn(
            "zero (or near-zero) probability on a true class; clamped to 1e-12",
            GraspFieldWarning,
            stacklevel=2,
        )
        p = np.maximum(p, PROB_FLOOR)
    # 0.0 - x instead of -x so a perfect score reports +0.0, not -0.0
    return float(0.0 - np.log(p).sum())
