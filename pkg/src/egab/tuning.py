"""Walk-forward hyperparameter learning.

Each dataset is split into an initial validation span and a test span.
Learned families are grid-searched on the validation span; the selected
configuration is then evaluated out of sample with fresh state (the
portfolio restarts uniform and the preprocessing history restarts empty at
the split boundary, the conservative no-leakage choice).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .deformed_math import ABParams
from .backtest import BacktestResult, run_backtest
from .errors import ComputationError, DegenerateUpdateError, DomainError
from .market import MarketData
from .strategies import (
    LEARNED_FAMILIES,
    PREPROCESS_MODES,
    CostModel,
    StrategyConfig,
    default_config,
)

__all__ = ["TuningGrid", "SplitSpec", "enumerate_configs", "grid_search", "evaluate_oos"]


def _default_lambdas() -> tuple[float, ...]:
    return tuple(2.0**k for k in range(-10, 2))


@dataclass(frozen=True)
class TuningGrid:
    """Candidate hyperparameters; lambda = 1/eta is enumerated ascending."""

    lambdas: tuple = field(default_factory=_default_lambdas)
    directions: tuple = (1, -1)
    ab_pairs: tuple = ((1.0, 1.0), (1.0, 0.5), (5.0, -5.0))
    preprocess_modes: tuple = PREPROCESS_MODES
    window: int = 4

    def __post_init__(self):
        if any(lam <= 0 for lam in self.lambdas):
            raise DomainError("all lambda values must be positive")


@dataclass(frozen=True)
class SplitSpec:
    """Validation/test split: the first floor(fraction * T) periods validate."""

    validation_fraction: float = 0.125

    def split_index(self, n_periods: int) -> int:
        if not 0.0 < self.validation_fraction < 1.0:
            raise DomainError("validation_fraction must lie in (0, 1)")
        t_split = math.floor(self.validation_fraction * n_periods)
        if not 1 <= t_split < n_periods:
            raise DomainError(
                f"split index {t_split} infeasible for {n_periods} periods"
            )
        return t_split


def enumerate_configs(family: str, grid: TuningGrid, cost: CostModel) -> list[StrategyConfig]:
    """Grid points applicable to a family, in deterministic tie-break order.

    Order: lambda ascending, then direction +1 before -1, then (alpha, beta)
    pairs as listed, then preprocessing modes as listed. Fixed-configuration
    baselines yield their single literature default.
    """
    if family not in LEARNED_FAMILIES:
        return [default_config(family, cost, grid.window)]
    ab_pairs = ((1.0, 0.0),) if family == "eg+" else tuple(grid.ab_pairs)
    configs = []
    for lam in sorted(grid.lambdas):
        for direction in grid.directions:
            for alpha, beta in ab_pairs:
                for mode in grid.preprocess_modes:
                    configs.append(
                        StrategyConfig(
                            family=family,
                            params=ABParams(alpha, beta, 1.0 / lam),
                            direction=direction,
                            preprocess=mode,
                            window=grid.window,
                            cost=cost,
                        )
                    )
    return configs


def grid_search(
    data: MarketData,
    family: str,
    grid: TuningGrid,
    split: SplitSpec,
    cost: CostModel,
) -> tuple[StrategyConfig, list[tuple[StrategyConfig, float]]]:
    """Select the config with maximal net-of-cost validation wealth.

    Returns the winner plus the full scoreboard of (config, validation CW)
    in enumeration order. Ties keep the earliest grid point. Configurations
    whose updates blow up numerically (deformed-exp pole at aggressive
    learning rates) score -inf and are never selected.
    """
    configs = enumerate_configs(family, grid, cost)
    if not configs:
        raise DomainError("empty tuning grid")
    t_split = split.split_index(data.n_periods)
    scoreboard = []
    best = None
    best_cw = -math.inf
    for config in configs:
        try:
            cw = run_backtest(data, config, (0, t_split)).final_cw
        except (ComputationError, DegenerateUpdateError):
            cw = -math.inf
        scoreboard.append((config, cw))
        if cw > best_cw:
            best, best_cw = config, cw
    if best is None or not math.isfinite(best_cw):
        raise DomainError("no grid configuration produced a finite validation run")
    return best, scoreboard


def evaluate_oos(data: MarketData, config: StrategyConfig, split: SplitSpec) -> BacktestResult:
    """Run a configuration on the test span with fresh state."""
    t_split = split.split_index(data.n_periods)
    return run_backtest(data, config, (t_split, data.n_periods))
