"""The generalized exponentiated-gradient update rules.

Three variants share the multiplicative core
``w * exp_{1-beta}(-eta * w^gamma * grad)``:

* unnormalized (``egab_u_step``),
* followed by l1 scaling (``egab_n_step`` / ``egab_n_step_fused``),
* followed by simplex projection (``egab_p_step``).

Callers supply the gradient already transformed (invariant or parallel);
the steps themselves know nothing about losses.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .deformed_math import ABParams, deformed_exp, deformed_log
from .errors import ComputationError, DegenerateUpdateError
from .simplex import simplex_projection

__all__ = [
    "WEIGHT_FLOOR",
    "UpdateKind",
    "learning_rates",
    "egab_u_step",
    "egab_n_step",
    "egab_n_step_fused",
    "egab_p_step",
]

# Lower clamp applied to weights before any w^gamma evaluation and after
# every update; far below any economically meaningful allocation.
WEIGHT_FLOOR = 1e-8


class UpdateKind(Enum):
    UNNORMALIZED = "unnormalized"
    SCALE_NORMALIZED = "scale-normalized"
    PROJECTED = "projected"


def learning_rates(w, params: ABParams) -> np.ndarray:
    """Per-coordinate rates eta * w^gamma (w clamped at the positivity floor)."""
    w = np.maximum(np.asarray(w, dtype=float), WEIGHT_FLOOR)
    rates = params.eta * np.power(w, params.gamma)
    if not np.all(np.isfinite(rates)):
        raise ComputationError(
            f"non-finite learning rates for gamma={params.gamma}"
        )
    return rates


def egab_u_step(w, grad, params: ABParams) -> np.ndarray:
    """Unnormalized update: w * exp_{1-beta}(-rates * grad), floored below."""
    w = np.maximum(np.asarray(w, dtype=float), WEIGHT_FLOOR)
    grad = np.asarray(grad, dtype=float)
    rates = learning_rates(w, params)
    stepped = w * deformed_exp(-rates * grad, params.beta)
    if not np.all(np.isfinite(stepped)):
        raise ComputationError("non-finite intermediate in egab_u_step")
    return np.maximum(stepped, WEIGHT_FLOOR)


def egab_n_step(w, grad_invariant, params: ABParams) -> np.ndarray:
    """Two-step scale-normalized update: unnormalized step, then l1 scaling."""
    w_star = egab_u_step(w, grad_invariant, params)
    if np.all(w_star <= WEIGHT_FLOOR):
        raise DegenerateUpdateError("deformed_exp clipped every coordinate")
    return w_star / float(w_star.sum())


def egab_n_step_fused(w, grad_invariant, params: ABParams) -> np.ndarray:
    """Single-expression form of :func:`egab_n_step`.

    Folds the l1 normalization into the exponent via
    ``exp_{1-beta}(-rates*grad / s^beta + log_{1-beta}(1/s))`` with
    ``s = w . exp_{1-beta}(-rates*grad)``. The positivity floor is applied in
    the unnormalized scale so the result matches the two-step form.
    """
    w = np.maximum(np.asarray(w, dtype=float), WEIGHT_FLOOR)
    grad = np.asarray(grad_invariant, dtype=float)
    rates = learning_rates(w, params)
    arg = -rates * grad
    scale = float(w @ deformed_exp(arg, params.beta))
    if not scale > 0.0:
        raise DegenerateUpdateError("deformed_exp clipped every coordinate")
    if params.beta == 0.0:
        fused_arg = arg + np.log(1.0 / scale)
    else:
        fused_arg = arg / scale**params.beta + deformed_log(1.0 / scale, params.beta)
    out = w * deformed_exp(fused_arg, params.beta)
    if not np.all(np.isfinite(out)):
        raise ComputationError("non-finite intermediate in egab_n_step_fused")
    w_star = np.maximum(out * scale, WEIGHT_FLOOR)
    return w_star / float(w_star.sum())


def egab_p_step(w, grad_parallel, params: ABParams) -> np.ndarray:
    """Projected update: unnormalized step, then simplex projection."""
    w_star = egab_u_step(w, grad_parallel, params)
    if np.all(w_star <= WEIGHT_FLOOR):
        raise DegenerateUpdateError("deformed_exp clipped every coordinate")
    return simplex_projection(w_star)
