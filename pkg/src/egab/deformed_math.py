"""Deformed logarithm/exponential links and the Alpha-Beta divergence.

The two-parameter divergence interpolates between KL, dual KL,
Itakura-Saito, Hellinger, Euclidean and Log-Euclidean dissimilarities.
Branch dispatch uses exact zero tests on alpha, beta and alpha+beta;
callers that want the limiting behaviour must pass exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ComputationError, DomainError

__all__ = [
    "ABParams",
    "deformed_log",
    "deformed_exp",
    "ab_divergence",
    "ab_divergence_scalar",
]


@dataclass(frozen=True)
class ABParams:
    """Hyperparameter triple (alpha, beta, eta) of the generalized EG family.

    The derived exponent ``gamma = 1 - (alpha + beta)`` weights the current
    iterate inside the per-coordinate learning rates.
    """

    alpha: float
    beta: float
    eta: float

    def __post_init__(self):
        if not self.eta > 0:
            raise DomainError(f"eta must be positive, got {self.eta}")

    @property
    def gamma(self) -> float:
        return 1.0 - (self.alpha + self.beta)


def deformed_log(x, beta: float):
    """Box-Cox power transform: (x^beta - 1)/beta, ln(x) at beta = 0.

    Accepts scalars or arrays; x must be strictly positive.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0) or not np.all(np.isfinite(x)):
        raise DomainError("deformed_log requires strictly positive finite input")
    if beta == 0.0:
        out = np.log(x)
    else:
        # expm1 form of (x^beta - 1) / beta; exact constant cancellation
        # keeps the transform accurate for small beta
        out = np.expm1(beta * np.log(x)) / beta
    return float(out) if out.ndim == 0 else out


def deformed_exp(x, beta: float):
    """Inverse of :func:`deformed_log`: [1 + beta*x]_+^(1/beta), exp(x) at beta = 0.

    Total on the reals; the bracket is clipped at zero before the power.
    For beta < 0 a clipped bracket maps to +inf (the pole of the link),
    which downstream update code rejects as non-finite.
    """
    x = np.asarray(x, dtype=float)
    if beta == 0.0:
        out = np.exp(x)
    else:
        with np.errstate(divide="ignore"):
            # exp(log1p(beta x) / beta) on the positive bracket; a clipped
            # bracket gives log1p(-1) = -inf, hence 0 for beta > 0 and the
            # pole +inf for beta < 0, matching the power formula
            out = np.exp(np.log1p(np.maximum(beta * x, -1.0)) / beta)
    return float(out) if out.ndim == 0 else out


def _ab_elementwise(p: np.ndarray, q: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    # All branches are written in expm1 form over the log coordinates so
    # that the O(1) constants cancel analytically; the naive power formulas
    # lose all precision near the singular parameter lines where the
    # leading terms are O(alpha * beta) perturbations of 1.
    lp, lq = np.log(p), np.log(q)
    if alpha == 0.0 and beta == 0.0:
        # Log-Euclidean metric
        return 0.5 * (lp - lq) ** 2
    if beta == 0.0:
        # generalized Kullback-Leibler
        return (
            alpha * (lp - lq) * np.exp(alpha * lp)
            - np.expm1(alpha * lp)
            + np.expm1(alpha * lq)
        ) / alpha**2
    if alpha == 0.0:
        # dual generalized Kullback-Leibler
        return (
            beta * (lq - lp) * np.exp(beta * lq)
            - np.expm1(beta * lq)
            + np.expm1(beta * lp)
        ) / beta**2
    if alpha + beta == 0.0:
        # generalized Itakura-Saito
        z = alpha * (lp - lq)
        return (np.expm1(z) - z) / alpha**2
    s = alpha + beta
    return -(
        np.expm1(alpha * lp + beta * lq)
        - (alpha / s) * np.expm1(s * lp)
        - (beta / s) * np.expm1(s * lq)
    ) / (alpha * beta)


def ab_divergence(p, q, alpha: float, beta: float) -> float:
    """Alpha-Beta divergence between two positive vectors.

    Dispatches on (alpha, beta) to the four l'Hopital branches of the
    generic formula. Nonnegative, zero iff p == q.
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    q = np.atleast_1d(np.asarray(q, dtype=float))
    if p.shape != q.shape:
        raise DomainError(f"shape mismatch: {p.shape} vs {q.shape}")
    if np.any(p <= 0.0) or np.any(q <= 0.0):
        raise DomainError("ab_divergence requires strictly positive entries")
    # every elementwise term vanishes identically at p_i == q_i; short-circuit
    # those entries so equality yields an exact zero
    unequal = p != q
    if not np.any(unequal):
        return 0.0
    total = float(np.sum(_ab_elementwise(p[unequal], q[unequal], alpha, beta)))
    if not np.isfinite(total):
        raise ComputationError(
            f"ab_divergence overflowed for alpha={alpha}, beta={beta}"
        )
    return total


def ab_divergence_scalar(w_new: float, w_old: float, alpha: float, beta: float) -> float:
    """Scalar Alpha-Beta divergence (the single term summed by ab_divergence)."""
    return ab_divergence([w_new], [w_old], alpha, beta)
