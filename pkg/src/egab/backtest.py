"""Cost-aware wealth simulation and financial metrics.

Conventions (the sources name the metrics without formulas):
252 trading periods per year; APY = CW^(252/T) - 1; Sharpe is the
annualized mean of daily log returns over their annualized standard
deviation at zero risk-free rate. Undefined metrics propagate as NaN,
never as 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .market import MarketData
from .strategies import (
    StrategyConfig,
    close_period,
    initial_state,
    predict_relatives,
    strategy_step,
    turnover,
)

__all__ = [
    "PERIODS_PER_YEAR",
    "MetricsReport",
    "BacktestResult",
    "run_backtest",
    "apy",
    "max_drawdown",
    "sharpe",
    "calmar",
    "extrapolate_cw",
    "geometric_mean",
]

PERIODS_PER_YEAR = 252


@dataclass(frozen=True)
class MetricsReport:
    apy: float
    sharpe: float
    calmar: float
    mdd: float
    final_cw: float


@dataclass
class BacktestResult:
    """Wealth, return and turnover trajectories of one strategy run."""

    wealth: np.ndarray            # T+1 values, wealth[0] = 1
    per_period_returns: np.ndarray
    turnovers: np.ndarray
    final_cw: float
    metrics: MetricsReport

    @property
    def mean_turnover(self) -> float:
        return float(self.turnovers.mean())


def apy(final_cw: float, n_periods: int) -> float:
    """Annualized percentage yield of a cumulative wealth factor."""
    if n_periods < 1:
        raise DomainError("n_periods must be >= 1")
    return final_cw ** (PERIODS_PER_YEAR / n_periods) - 1.0

def max_drawdown(wealth) -> float:
    """Largest relative drop from a running peak, in [0, 1]."""
    wealth = np.asarray(wealth, dtype=float)
    if wealth.size == 0:
        raise DomainError("max_drawdown needs a nonempty trajectory")
    peaks = np.maximum.accumulate(wealth)
    return float(np.max((peaks - wealth) / peaks))


def sharpe(per_period_returns) -> float:
    """Annualized Sharpe ratio of daily log returns; NaN when degenerate."""
    r = np.asarray(per_period_returns, dtype=float)
    if r.size < 2:
        return math.nan
    log_r = np.log(r)
    std = float(log_r.std(ddof=1))
    if std == 0.0:
        return math.nan
    return math.sqrt(PERIODS_PER_YEAR) * float(log_r.mean()) / std


def calmar(apy_value: float, mdd: float) -> float:
    """Ratio of annualized yield to maximum drawdown; NaN without drawdown."""
    if mdd <= 1e-12:
        return math.nan
    return apy_value / mdd


def extrapolate_cw(cw_test: float, total_periods: int, test_periods: int) -> float:
    """Project test-span wealth to the full horizon: cw^(T / T_test)."""
    if test_periods < 1 or total_periods < test_periods:
        raise DomainError("need 1 <= test_periods <= total_periods")
    return cw_test ** (total_periods / test_periods)


def geometric_mean(values) -> float:
    """exp(mean(ln values)), computed in the log domain."""
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0.0):
        raise DomainError("geometric mean requires positive values")
    return float(np.exp(np.mean(np.log(values))))


def _metrics(wealth: np.ndarray, returns: np.ndarray) -> MetricsReport:
    final_cw = float(wealth[-1])
    yield_ = apy(final_cw, returns.size)
    mdd = max_drawdown(wealth)
    return MetricsReport(
        apy=yield_,
        sharpe=sharpe(returns),
        calmar=calmar(yield_, mdd),
        mdd=mdd,
        final_cw=final_cw,
    )


def run_backtest(
    data: MarketData,
    config: StrategyConfig,
    period_range: tuple[int, int] | None = None,
) -> BacktestResult:
    """Drive a strategy through the market period by period.

    ``period_range`` is a half-open [t_start, t_end) over the rows of
    ``data.relatives``; preprocessing history restarts at the range start.
    The portfolio begins uniform; period t's net return charges the cost of
    moving to the next recommendation: r_t = (w_t . x_t)(1 - c_r * T_t).
    """
    if period_range is not None:
        t_start, t_end = period_range
        data = data.slice_periods(t_start, t_end)
    relatives = data.relatives
    n_periods = relatives.shape[0]
    state = initial_state(data.n_assets, config.window)
    cost_rate = config.cost.rate

    wealth = np.empty(n_periods + 1)
    wealth[0] = 1.0
    returns = np.empty(n_periods)
    turnovers = np.empty(n_periods)
    for t in range(n_periods):
        x_t = relatives[t]
        gross = float(state.current @ x_t)
        close_period(state, x_t)
        x_hat = predict_relatives(state, config.preprocess, config.window)
        w_next = strategy_step(config, state, x_hat)
        traded = turnover(w_next, state.adjusted)
        r_t = gross * (1.0 - cost_rate * traded)
        wealth[t + 1] = wealth[t] * r_t
        returns[t] = r_t
        turnovers[t] = traded
        state.current = w_next

    return BacktestResult(
        wealth=wealth,
        per_period_returns=returns,
        turnovers=turnovers,
        final_cw=float(wealth[-1]),
        metrics=_metrics(wealth, returns),
    )
