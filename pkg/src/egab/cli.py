"""Command-line drivers: run, compare, grid, plot-data, gen-synthetic.

Exit status: 0 success, 2 usage errors (flag problems), 3 data errors
(unreadable or invalid dataset files).
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .backtest import geometric_mean, run_backtest
from .deformed_math import ABParams
from .errors import DataError, DomainError
from .market import generate_synthetic, load_dataset, write_dataset
from .plots import write_geomean_outputs, write_turnover_outputs, write_wealth_outputs
from .report import (
    build_compare_report,
    build_run_report,
    compare_report_csv,
    run_report_csv,
    strategy_block,
    to_json,
)
from .strategies import (
    FAMILIES,
    LEARNED_FAMILIES,
    PREPROCESS_MODES,
    CostModel,
    StrategyConfig,
    default_config,
)
from .tuning import SplitSpec, TuningGrid, evaluate_oos, grid_search

DATA_ERROR_EXIT = 3

_ALIASES = {"egplus": "eg+", "eg-plus": "eg+", "egabn": "egab-n", "egabp": "egab-p"}


def _family(name: str) -> str:
    name = name.strip().lower()
    name = _ALIASES.get(name, name)
    if name not in FAMILIES:
        raise click.UsageError(
            f"unknown strategy {name!r}; choose from {', '.join(FAMILIES)}"
        )
    return name


def _load(path, prices: bool):
    try:
        return load_dataset(path, prices=prices)
    except (DataError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(DATA_ERROR_EXIT)


def _emit(text: str, output):
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


def _explicit_config(family, alpha, beta, eta, epsilon, window, preprocess, direction, cost):
    """Build a fully specified StrategyConfig from flags."""
    if family in LEARNED_FAMILIES:
        if eta is None:
            raise click.UsageError(f"--eta is required to override {family} tuning")
        if family == "eg+":
            alpha, beta = 1.0, 0.0
        else:
            alpha = 1.0 if alpha is None else alpha
            beta = 1.0 if beta is None else beta
        params = ABParams(alpha, beta, eta)
        return StrategyConfig(
            family=family, params=params, direction=direction,
            preprocess=preprocess or "last-relative", window=window, cost=cost,
        )
    config = default_config(family, cost, window)
    if family == "eg" and eta is not None:
        config = StrategyConfig(
            family="eg", params=ABParams(1.0, 0.0, eta), direction=direction,
            preprocess=config.preprocess, window=window, cost=cost,
        )
    if epsilon is not None and family in ("pamr", "olmar", "rmr"):
        config = StrategyConfig(
            family=family, epsilon=epsilon, preprocess=preprocess or config.preprocess,
            window=window, cost=cost,
        )
    elif preprocess is not None and family in ("pamr", "olmar", "rmr"):
        config = StrategyConfig(
            family=family, epsilon=config.epsilon, preprocess=preprocess,
            window=window, cost=cost,
        )
    return config


def _resolve_test_result(data, family, cost, split, grid):
    """Tune learned families on the validation span, then evaluate out of sample."""
    if family in LEARNED_FAMILIES:
        config, _ = grid_search(data, family, grid, split, cost)
    else:
        config = default_config(family, cost, grid.window)
    return config, evaluate_oos(data, config, split)


@click.group()
def main():
    """Generalized exponentiated-gradient portfolio selection toolkit."""


@main.command()
@click.option("--dataset", required=True, type=click.Path(), help="Price-relatives CSV.")
@click.option("--strategy", required=True, help="Strategy family.")
@click.option("--alpha", type=float, default=None)
@click.option("--beta", type=float, default=None)
@click.option("--eta", type=float, default=None)
@click.option("--epsilon", type=float, default=None)
@click.option("--window", type=int, default=4)
@click.option("--preprocess", type=click.Choice(PREPROCESS_MODES), default=None)
@click.option("--direction", type=click.Choice(["1", "-1"]), default="1")
@click.option("--cost-rate", type=float, default=0.0)
@click.option("--split", type=float, default=0.125, help="Validation fraction for tuning.")
@click.option("--output", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--prices", is_flag=True, help="Input holds raw prices, not relatives.")
@click.option("--series", is_flag=True, help="Include per-period series in the report.")
def run(dataset, strategy, alpha, beta, eta, epsilon, window, preprocess,
        direction, cost_rate, split, output, fmt, prices, series):
    """Backtest a single strategy on one dataset.

    Learned families (eg+, egab-n, egab-p) are tuned on the validation span
    and evaluated on the test span unless explicit hyperparameters are
    given, in which case the whole dataset is backtested.
    """
    family = _family(strategy)
    data = _load(dataset, prices)
    try:
        cost = CostModel(cost_rate)
    except DomainError as exc:
        raise click.UsageError(str(exc))
    has_overrides = any(v is not None for v in (alpha, beta, eta))
    try:
        if family in LEARNED_FAMILIES and not has_overrides:
            split_spec = SplitSpec(split)
            config, _ = grid_search(data, family, TuningGrid(window=window), split_spec, cost)
            result = evaluate_oos(data, config, split_spec)
            meta_split = split
        else:
            config = _explicit_config(
                family, alpha, beta, eta, epsilon, window, preprocess,
                int(direction), cost,
            )
            result = run_backtest(data, config)
            meta_split = None
    except DomainError as exc:
        raise click.UsageError(str(exc))
    meta = {"dataset": str(dataset), "cost_rate": cost_rate,
            "split": meta_split, "seed": None}
    report = build_run_report(
        meta, [strategy_block(family, config, result, data.n_periods, series)]
    )
    _emit(to_json(report) if fmt == "json" else run_report_csv(report), output)


def _csv_list(text, cast):
    try:
        return [cast(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.UsageError(f"cannot parse list {text!r}")


@main.command()
@click.option("--datasets", required=True, multiple=True, type=click.Path())
@click.option("--strategies", required=True, help="Comma-separated families.")
@click.option("--cost-rates", default="0", help="Comma-separated commission rates.")
@click.option("--split", type=float, default=0.125)
@click.option("--window", type=int, default=4)
@click.option("--output", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--prices", is_flag=True)
def compare(datasets, strategies, cost_rates, split, window, output, fmt, prices):
    """Cross-product table: test-span CW per dataset x strategy x cost rate."""
    families = [_family(s) for s in strategies.split(",") if s.strip()]
    rates = _csv_list(cost_rates, float)
    if not families or not rates:
        raise click.UsageError("need at least one strategy and one cost rate")
    split_spec = SplitSpec(split)
    grid = TuningGrid(window=window)
    names, cells = [], []
    for path in datasets:
        data = _load(path, prices)
        name = Path(path).stem
        names.append(name)
        for rate in rates:
            cost = CostModel(rate)
            for family in families:
                try:
                    _, result = _resolve_test_result(data, family, cost, split_spec, grid)
                except DomainError as exc:
                    raise click.UsageError(str(exc))
                cells.append({
                    "dataset": name, "strategy": family, "cost_rate": rate,
                    "final_cw": result.final_cw,
                    "mean_turnover": result.mean_turnover,
                })
    meta = {"split": split, "seed": None}
    report = build_compare_report(meta, cells, families, rates, names)
    _emit(to_json(report) if fmt == "json" else compare_report_csv(report), output)


@main.command()
@click.option("--dataset", required=True, type=click.Path())
@click.option("--strategy", required=True)
@click.option("--cost-rate", type=float, default=0.0)
@click.option("--split", type=float, default=0.125)
@click.option("--window", type=int, default=4)
@click.option("--output", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--prices", is_flag=True)
def grid(dataset, strategy, cost_rate, split, window, output, fmt, prices):
    """Show the full validation scoreboard of a tuned family."""
    family = _family(strategy)
    data = _load(dataset, prices)
    try:
        best, scoreboard = grid_search(
            data, family, TuningGrid(window=window), SplitSpec(split), CostModel(cost_rate)
        )
    except DomainError as exc:
        raise click.UsageError(str(exc))
    rows = []
    for config, cw in scoreboard:
        row = {"validation_cw": cw, "selected": config == best}
        if config.params is not None:
            row.update(alpha=config.params.alpha, beta=config.params.beta,
                       eta=config.params.eta)
        row.update(direction=config.direction, preprocess=config.preprocess)
        rows.append(row)
    report = {"meta": {"dataset": str(dataset), "strategy": family,
                       "cost_rate": cost_rate, "split": split},
              "scoreboard": rows}
    if fmt == "json":
        _emit(to_json(report), output)
    else:
        import csv as _csv
        import io
        buf = io.StringIO()
        fields = ["alpha", "beta", "eta", "direction", "preprocess",
                  "validation_cw", "selected"]
        writer = _csv.DictWriter(buf, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in fields})
        _emit(buf.getvalue(), output)


@main.command("plot-data")
@click.option("--dataset", "datasets", required=True, multiple=True, type=click.Path())
@click.option("--strategies", required=True)
@click.option("--cost-rates", default="0")
@click.option("--split", type=float, default=0.125)
@click.option("--window", type=int, default=4)
@click.option("--output-dir", required=True, type=click.Path())
@click.option("--prices", is_flag=True)
def plot_data(datasets, strategies, cost_rates, split, window, output_dir, prices):
    """Emit series files and figures: wealth curves, geometric mean vs cost
    rate, and per-strategy turnover distributions."""
    families = [_family(s) for s in strategies.split(",") if s.strip()]
    rates = _csv_list(cost_rates, float)
    out_dir = Path(output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    split_spec = SplitSpec(split)
    grid_spec = TuningGrid(window=window)
    markets = [(_load(p, prices), Path(p).stem) for p in datasets]

    results = {}  # (dataset, family, rate) -> BacktestResult
    for data, name in markets:
        for rate in rates:
            for family in families:
                _, result = _resolve_test_result(
                    data, family, CostModel(rate), split_spec, grid_spec
                )
                results[(name, family, rate)] = result

    first = markets[0][1]
    wealth = {f: results[(first, f, rates[0])].wealth for f in families}
    written = write_wealth_outputs(out_dir, wealth, f"{first} (c_r={rates[0]:g})")

    geomeans = {
        f: [geometric_mean([results[(n, f, r)].final_cw for _, n in markets])
            for r in rates]
        for f in families
    }
    written += write_geomean_outputs(out_dir, rates, geomeans)

    turnovers = {
        (f, r): results[(first, f, r)].turnovers for f in families for r in rates
    }
    written += write_turnover_outputs(out_dir, turnovers)
    for path in written:
        click.echo(str(path))


@main.command("gen-synthetic")
@click.option("--assets", type=int, default=10)
@click.option("--periods", type=int, default=500)
@click.option("--seed", type=int, default=0)
@click.option("--drift", type=float, default=0.0002)
@click.option("--volatility", type=float, default=0.015)
@click.option("--output", required=True, type=click.Path())
def gen_synthetic(assets, periods, seed, drift, volatility, output):
    """Write a seeded lognormal synthetic market as a relatives CSV."""
    try:
        data = generate_synthetic(assets, periods, seed, drift, volatility)
    except DataError as exc:
        raise click.UsageError(str(exc))
    write_dataset(data, output)
    click.echo(output)


if __name__ == "__main__":
    main()
