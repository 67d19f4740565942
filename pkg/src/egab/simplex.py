"""Normalizations, projections onto the unit l1 simplex, and gradient splits."""

from __future__ import annotations

import numpy as np

from .errors import ComputationError, DegenerateInputError, DomainError

__all__ = [
    "scale_normalize",
    "min_dist_projection",
    "simplex_projection",
    "parallel_gradient",
    "invariant_gradient",
    "is_portfolio",
]


def is_portfolio(w, tol: float = 1e-10) -> bool:
    """True if w is nonnegative and sums to 1 within tol."""
    w = np.asarray(w, dtype=float)
    return bool(np.all(w >= 0.0) and abs(float(w.sum()) - 1.0) <= tol)


def scale_normalize(w) -> np.ndarray:
    """Divide a nonnegative vector by its l1 norm."""
    w = np.asarray(w, dtype=float)
    total = float(w.sum())
    if not total > 0.0:
        raise DegenerateInputError("cannot normalize a vector with no positive mass")
    return w / total


def min_dist_projection(w) -> np.ndarray:
    """Euclidean projection onto {v : v >= 0, sum(v) = 1}.

    Iterative hyperplane-shift-and-clip: distribute the l1 deficit uniformly
    over the active support, zero out negatives, shrink the support, repeat.
    The active set shrinks every round, so at most n passes are needed; the
    hard cap turns nontermination into a detectable bug.
    """
    v = np.asarray(w, dtype=float).copy()
    if not np.all(np.isfinite(v)):
        raise DomainError("projection input must be finite")
    n = v.size
    active = np.ones(n, dtype=bool)
    for _ in range(n + 1):
        k = int(active.sum())
        v[active] += (1.0 - float(v[active].sum())) / k
        neg = v < 0.0
        if not neg.any():
            return v
        v[neg] = 0.0
        active &= ~neg
    raise ComputationError("simplex projection failed to terminate", best=v)


def simplex_projection(w) -> np.ndarray:
    """Scale when ||w||_1 <= 1, minimum-distance projection otherwise."""
    w = np.asarray(w, dtype=float)
    if float(np.abs(w).sum()) <= 1.0:
        return scale_normalize(w)
    return min_dist_projection(w)


def parallel_gradient(g) -> np.ndarray:
    """Component of g parallel to the simplex: g minus its mean."""
    g = np.asarray(g, dtype=float)
    return g - g.mean()


def invariant_gradient(g, w) -> np.ndarray:
    """Gradient of the scale-invariant loss: g minus (w.g) on every coordinate.

    The result is orthogonal to w by Euler's homogeneous function theorem.
    """
    g = np.asarray(g, dtype=float)
    w = np.asarray(w, dtype=float)
    return g - float(w @ g)
