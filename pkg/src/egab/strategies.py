"""Portfolio-selection domain: predictions, cost-aware loss, strategy steps.

Strategy families:

* ``ubah``    uniform buy and hold (zero trade);
* ``eg``      classical exponentiated gradient on the cost-free log return;
* ``pamr`` / ``olmar`` / ``rmr``  closed-form mean-reversion updates;
* ``eg+``     classical EG geometry on the cost-aware loss with learned
  configuration (equivalent to the generalized update at (alpha, beta) = (1, 0));
* ``egab-n`` / ``egab-p``  generalized updates with scaling / projection.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from .deformed_math import ABParams
from .errors import ComputationError, DomainError
from .simplex import (
    invariant_gradient,
    parallel_gradient,
    scale_normalize,
    simplex_projection,
)
from .updates import egab_n_step, egab_p_step

__all__ = [
    "FAMILIES",
    "PREPROCESS_MODES",
    "CostModel",
    "StrategyConfig",
    "PortfolioState",
    "default_config",
    "initial_state",
    "predict_relatives",
    "l1_median",
    "train_loss",
    "train_subgradient",
    "strategy_step",
    "close_period",
    "turnover",
]

FAMILIES = ("ubah", "eg", "pamr", "olmar", "rmr", "eg+", "egab-n", "egab-p")
PREPROCESS_MODES = ("last-relative", "moving-mean", "l1-median")

# Families whose configuration is learned on the validation span.
LEARNED_FAMILIES = ("eg+", "egab-n", "egab-p")

# Guard against a zero denominator when the predicted relatives are uniform.
_MEAN_REVERSION_EPS = 1e-12


@dataclass(frozen=True)
class CostModel:
    """Proportional transaction cost: fraction charged per unit turnover."""

    rate: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.rate < 1.0:
            raise DomainError(f"cost rate must lie in [0, 1), got {self.rate}")


@dataclass(frozen=True)
class StrategyConfig:
    """Full specification of one strategy run."""

    family: str
    params: ABParams | None = None
    direction: int = 1              # +1 follow-the-winner, -1 follow-the-loser
    epsilon: float = 0.5            # mean-reversion threshold
    preprocess: str = "last-relative"
    window: int = 4                 # n: window holds the n+1 prices p_t .. p_{t-n}
    cost: CostModel = CostModel(0.0)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown strategy family {self.family!r}")
        if self.direction not in (1, -1):
            raise DomainError("direction must be +1 or -1")
        if self.preprocess not in PREPROCESS_MODES:
            raise DomainError(f"unknown preprocessing mode {self.preprocess!r}")
        if self.window < 1:
            raise DomainError("window must be a positive integer")

    def with_cost(self, cost: CostModel) -> "StrategyConfig":
        return replace(self, cost=cost)


def default_config(family: str, cost: CostModel = CostModel(0.0), window: int = 4) -> StrategyConfig:
    """Literature defaults for the fixed-configuration baselines."""
    if family == "eg":
        return StrategyConfig(family, params=ABParams(1.0, 0.0, 0.05), cost=cost, window=window)
    if family == "pamr":
        return StrategyConfig(family, epsilon=0.5, preprocess="last-relative", cost=cost, window=window)
    if family == "olmar":
        return StrategyConfig(family, epsilon=5.0, preprocess="moving-mean", cost=cost, window=window)
    if family == "rmr":
        return StrategyConfig(family, epsilon=5.0, preprocess="l1-median", cost=cost, window=window)
    if family == "ubah":
        return StrategyConfig(family, cost=cost, window=window)
    raise DomainError(f"{family!r} has no default configuration; tune it")


@dataclass
class PortfolioState:
    """Evolving state of one backtest run.

    ``current`` is the recommendation active during the period, ``adjusted``
    the end-of-period drifted portfolio, ``prices`` a ring of the recent
    price rows needed by preprocessing (newest last).
    """

    current: np.ndarray
    adjusted: np.ndarray
    prices: deque = field(default_factory=deque)
    last_relative: np.ndarray | None = None


def initial_state(n_assets: int, window: int) -> PortfolioState:
    """Uniform portfolio with a unit initial price row."""
    u = np.full(n_assets, 1.0 / n_assets)
    prices = deque(maxlen=window + 1)
    prices.append(np.ones(n_assets))
    return PortfolioState(current=u, adjusted=u.copy(), prices=prices)


def close_period(state: PortfolioState, x_t) -> PortfolioState:
    """Account for the market move x_t: drift the portfolio, advance history."""
    x_t = np.asarray(x_t, dtype=float)
    held = state.current * x_t
    state.adjusted = held / float(held.sum())
    state.prices.append(state.prices[-1] * x_t)
    state.last_relative = x_t
    return state


def turnover(w_next, adjusted) -> float:
    """Traded fraction of wealth: half the l1 distance between portfolios."""
    return 0.5 * float(np.abs(np.asarray(w_next) - np.asarray(adjusted)).sum())


def l1_median(points, tol: float = 1e-9, max_iter: int = 5000) -> np.ndarray:
    """Geometric median (minimizer of summed Euclidean distances).

    Weiszfeld fixed-point iteration from the coordinate-wise mean; iterates
    landing on a data point are nudged along the residual direction. For two
    points or fewer the mean is returned.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] == 0:
        raise DomainError("l1_median needs at least one point")
    if pts.shape[0] <= 2:
        return pts.mean(axis=0)
    y = pts.mean(axis=0)
    for _ in range(max_iter):
        dist = np.linalg.norm(pts - y, axis=1)
        on_point = dist < 1e-12
        if np.any(on_point):
            # Anchored iterate: the data point is optimal when the pull of
            # the remaining points has norm at most 1; otherwise step off it.
            away = pts[~on_point] - y
            norms = np.linalg.norm(away, axis=1)
            pull = (away / norms[:, None]).sum(axis=0) if norms.size else np.zeros_like(y)
            pull_norm = np.linalg.norm(pull)
            if pull_norm <= 1.0:
                return y
            y = y + 1e-9 * pull / pull_norm
            dist = np.linalg.norm(pts - y, axis=1)
        weights = 1.0 / dist
        y_next = (pts * weights[:, None]).sum(axis=0) / weights.sum()
        if np.linalg.norm(y_next - y) < tol:
            return y_next
        y = y_next
    raise ComputationError("Weiszfeld iteration did not converge", best=y)


def predict_relatives(state: PortfolioState, mode: str, window: int) -> np.ndarray:
    """Predicted price relatives for the next period.

    last-relative passes x_t through; moving-mean and l1-median estimate the
    next price from the window p_t .. p_{t-n} and divide by p_t. Early in a
    run whatever shorter history exists is used.
    """
    if state.last_relative is None or not state.prices:
        raise DomainError("no market history yet; cannot form a prediction")
    if mode == "last-relative":
        return state.last_relative.copy()
    rows = list(state.prices)[-(window + 1):]
    p_t = rows[-1]
    if mode == "moving-mean":
        estimate = np.mean(rows, axis=0)
    elif mode == "l1-median":
        estimate = l1_median(rows)
    else:
        raise DomainError(f"unknown preprocessing mode {mode!r}")
    return estimate / p_t


def train_loss(w, x_hat, state: PortfolioState, s: int, cost: CostModel) -> float:
    """Cost-aware training loss: -s*log(w.x_hat) - log(1 - c_r * turnover).

    An infeasible cost term (only reachable outside the simplex with
    c_r < 1) yields +inf, usable for ordering during line evaluations.
    """
    w = np.asarray(w, dtype=float)
    x_hat = np.asarray(x_hat, dtype=float)
    ret = float(w @ x_hat)
    cost_arg = 1.0 - cost.rate * turnover(w, state.adjusted)
    if cost_arg <= 0.0:
        return math.inf
    return -s * math.log(ret) - math.log(cost_arg)


def train_subgradient(w, x_hat, state: PortfolioState, s: int, cost: CostModel) -> np.ndarray:
    """Subgradient of :func:`train_loss` at w (sign(0) taken as 0)."""
    w = np.asarray(w, dtype=float)
    x_hat = np.asarray(x_hat, dtype=float)
    grad = -s * x_hat / float(w @ x_hat)
    if cost.rate > 0.0:
        diff = w - state.adjusted
        denom = 2.0 / cost.rate - float(np.abs(diff).sum())
        grad = grad + np.sign(diff) / denom
    return grad


def _mean_reversion_step(config: StrategyConfig, w: np.ndarray, x_hat: np.ndarray) -> np.ndarray:
    s = -1.0 if config.family == "pamr" else 1.0
    ret = float(w @ x_hat)
    centered = x_hat - x_hat.mean()
    rate = s * max(s * (config.epsilon - ret), 0.0) / (
        float(centered @ centered) + _MEAN_REVERSION_EPS
    )
    return simplex_projection(w + rate * centered)


def strategy_step(config: StrategyConfig, state: PortfolioState, x_hat) -> np.ndarray:
    """Next portfolio recommendation w_{t+1} for the configured family."""
    x_hat = np.asarray(x_hat, dtype=float)
    w = state.current
    family = config.family
    if family == "ubah":
        return state.adjusted.copy()
    if family == "eg":
        grad = -config.direction * x_hat / float(w @ x_hat)
        return scale_normalize(w * np.exp(-config.params.eta * grad))
    if family in ("pamr", "olmar", "rmr"):
        return _mean_reversion_step(config, w, x_hat)
    grad = train_subgradient(w, x_hat, state, config.direction, config.cost)
    if family in ("eg+", "egab-n"):
        return egab_n_step(w, invariant_gradient(grad, w), config.params)
    if family == "egab-p":
        return egab_p_step(w, parallel_gradient(grad), config.params)
    raise DomainError(f"unknown strategy family {family!r}")
