"""Generalized exponentiated-gradient updates for online portfolio selection."""

from .deformed_math import ABParams, ab_divergence, deformed_exp, deformed_log
from .market import MarketData, generate_synthetic, load_dataset
from .backtest import BacktestResult, run_backtest
from .strategies import CostModel, StrategyConfig, default_config
from .tuning import SplitSpec, TuningGrid, evaluate_oos, grid_search
from .updates import egab_n_step, egab_p_step, egab_u_step

__all__ = [
    "ABParams",
    "ab_divergence",
    "deformed_exp",
    "deformed_log",
    "MarketData",
    "load_dataset",
    "generate_synthetic",
    "BacktestResult",
    "run_backtest",
    "CostModel",
    "StrategyConfig",
    "default_config",
    "SplitSpec",
    "TuningGrid",
    "grid_search",
    "evaluate_oos",
    "egab_u_step",
    "egab_n_step",
    "egab_p_step",
]
