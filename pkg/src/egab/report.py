"""Report documents: assembly, rounding and JSON/CSV serialization.

Numeric values are rounded to 6 significant digits before serialization so
identical invocations produce byte-identical reports. Undefined metrics are
emitted as JSON null (CSV ``undef``), never as 0.
"""

from __future__ import annotations

import io
import csv
import json
import math
from importlib import metadata

from .backtest import BacktestResult, extrapolate_cw, geometric_mean
from .strategies import StrategyConfig

__all__ = [
    "tool_version",
    "config_to_dict",
    "strategy_block",
    "build_run_report",
    "build_compare_report",
    "to_json",
    "from_json",
    "run_report_csv",
    "compare_report_csv",
]


def tool_version() -> str:
    try:
        return metadata.version("egab")
    except metadata.PackageNotFoundError:
        return "unknown"


def _round6(value):
    """Round floats to 6 significant digits, recursively; NaN becomes None."""
    if isinstance(value, float):
        if math.isnan(value):
            return None
        if math.isinf(value):
            return value
        return float(f"{value:.6g}")
    if isinstance(value, dict):
        return {k: _round6(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round6(v) for v in value]
    return value


def config_to_dict(config: StrategyConfig) -> dict:
    out = {
        "family": config.family,
        "direction": config.direction,
        "epsilon": config.epsilon,
        "preprocess": config.preprocess,
        "window": config.window,
        "cost_rate": config.cost.rate,
    }
    if config.params is not None:
        out.update(
            alpha=config.params.alpha,
            beta=config.params.beta,
            eta=config.params.eta,
        )
    return out


def strategy_block(
    name: str,
    config: StrategyConfig,
    result: BacktestResult,
    total_periods: int,
    include_series: bool = False,
) -> dict:
    """Per-strategy report block with metrics and optional raw series."""
    test_periods = result.per_period_returns.size
    block = {
        "strategy": name,
        "config": config_to_dict(config),
        "periods": test_periods,
        "final_cw": result.final_cw,
        "extrapolated_cw": extrapolate_cw(result.final_cw, total_periods, test_periods),
        "apy": result.metrics.apy,
        "sharpe": result.metrics.sharpe,
        "calmar": result.metrics.calmar,
        "mdd": result.metrics.mdd,
        "mean_turnover": result.mean_turnover,
    }
    if include_series:
        block["wealth"] = result.wealth.tolist()
        block["per_period_returns"] = result.per_period_returns.tolist()
        block["turnovers"] = result.turnovers.tolist()
    return block


def build_run_report(meta: dict, blocks: list[dict]) -> dict:
    return {"meta": {"tool": "egab", "version": tool_version(), **meta},
            "strategies": blocks}


def build_compare_report(
    meta: dict,
    cells: list[dict],
    strategies: list[str],
    cost_rates: list[float],
    datasets: list[str],
) -> dict:
    """Cross-product table of test-span CW plus geometric-mean rows."""
    geo_rows = []
    for rate in cost_rates:
        row = {"cost_rate": rate, "geometric_mean": {}}
        for strat in strategies:
            values = [
                c["final_cw"]
                for c in cells
                if c["strategy"] == strat and c["cost_rate"] == rate
            ]
            row["geometric_mean"][strat] = geometric_mean(values) if values else None
        geo_rows.append(row)
    return {
        "meta": {"tool": "egab", "version": tool_version(), **meta},
        "datasets": datasets,
        "strategies": strategies,
        "cost_rates": cost_rates,
        "cells": cells,
        "geometric_means": geo_rows,
    }


def to_json(report: dict) -> str:
    return json.dumps(_round6(report), indent=2) + "\n"


def from_json(text: str) -> dict:
    return json.loads(text)


def _fmt(value) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "undef"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def run_report_csv(report: dict) -> str:
    """One row per strategy, metrics as columns."""
    fields = [
        "strategy", "periods", "final_cw", "extrapolated_cw",
        "apy", "sharpe", "calmar", "mdd", "mean_turnover",
    ]
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(fields)
    for block in report["strategies"]:
        writer.writerow([_fmt(_round6(block[f])) for f in fields])
    return buf.getvalue()


def compare_report_csv(report: dict) -> str:
    """Spreadsheet layout: one block per cost rate, datasets as rows."""
    strategies = report["strategies"]
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["cost_rate", "dataset"] + strategies)
    lookup = {
        (c["cost_rate"], c["dataset"], c["strategy"]): c["final_cw"]
        for c in report["cells"]
    }
    for rate in report["cost_rates"]:
        for dataset in report["datasets"]:
            row = [_fmt(_round6(rate)), dataset]
            row += [_fmt(_round6(lookup.get((rate, dataset, s)))) for s in strategies]
            writer.writerow(row)
        geo = next(g for g in report["geometric_means"] if g["cost_rate"] == rate)
        row = [_fmt(_round6(rate)), "geometric_mean"]
        row += [_fmt(_round6(geo["geometric_mean"][s])) for s in strategies]
        writer.writerow(row)
    return buf.getvalue()
