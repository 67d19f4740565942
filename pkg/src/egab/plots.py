"""Series files and matplotlib figures behind the report tables.

Series files are whitespace-separated two-column text (x, y); the turnover
summary is a five-number table per strategy. Each series also gets a PNG
rendered next to it.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "write_series",
    "write_wealth_outputs",
    "write_geomean_outputs",
    "write_turnover_outputs",
]


def write_series(path, xs, ys) -> None:
    with open(path, "w") as fh:
        for x, y in zip(xs, ys):
            fh.write(f"{x:.10g} {y:.10g}\n")


def _slug(name: str) -> str:
    return name.replace("+", "plus").replace("-", "_")


def write_wealth_outputs(out_dir, wealth_by_strategy: dict, title: str) -> list[Path]:
    """Per-strategy wealth-vs-time series files plus one combined figure."""
    out_dir = Path(out_dir)
    written = []
    fig, ax = plt.subplots(figsize=(8, 5))
    for name, wealth in wealth_by_strategy.items():
        wealth = np.asarray(wealth, dtype=float)
        path = out_dir / f"wealth_{_slug(name)}.txt"
        write_series(path, np.arange(wealth.size), wealth)
        written.append(path)
        ax.plot(np.arange(wealth.size), wealth, label=name)
    ax.set_xlabel("trading period")
    ax.set_ylabel("cumulative wealth")
    ax.set_yscale("log")
    ax.set_title(title)
    ax.legend()
    fig_path = out_dir / "wealth.png"
    fig.savefig(fig_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(fig_path)
    return written


def write_geomean_outputs(out_dir, cost_rates, geomeans_by_strategy: dict) -> list[Path]:
    """Geometric-mean CW versus commission rate, per strategy."""
    out_dir = Path(out_dir)
    written = []
    fig, ax = plt.subplots(figsize=(8, 5))
    for name, values in geomeans_by_strategy.items():
        path = out_dir / f"geomean_vs_cost_{_slug(name)}.txt"
        write_series(path, cost_rates, values)
        written.append(path)
        ax.plot(cost_rates, values, marker="o", label=name)
    ax.set_xlabel("commission rate")
    ax.set_ylabel("geometric mean of cumulative wealth")
    ax.set_yscale("log")
    ax.legend()
    fig_path = out_dir / "geomean_vs_cost.png"
    fig.savefig(fig_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(fig_path)
    return written


def _five_number(values: np.ndarray) -> tuple[float, float, float, float, float]:
    return (
        float(np.min(values)),
        float(np.percentile(values, 25)),
        float(np.median(values)),
        float(np.percentile(values, 75)),
        float(np.max(values)),
    )


def write_turnover_outputs(out_dir, turnovers_by_key: dict) -> list[Path]:
    """Turnover five-number summaries keyed by (strategy, cost_rate).

    Writes one text table plus a grouped boxplot-style figure.
    """
    out_dir = Path(out_dir)
    path = out_dir / "turnover_summary.txt"
    with open(path, "w") as fh:
        fh.write("# strategy cost_rate min q1 median q3 max\n")
        for (name, rate), values in turnovers_by_key.items():
            summary = _five_number(np.asarray(values, dtype=float))
            fh.write(f"{name} {rate:.10g} " + " ".join(f"{v:.10g}" for v in summary) + "\n")

    fig, ax = plt.subplots(figsize=(9, 5))
    labels, data = [], []
    for (name, rate), values in turnovers_by_key.items():
        labels.append(f"{name}\n{rate:g}")
        data.append(np.asarray(values, dtype=float))
    ax.boxplot(data, tick_labels=labels, showfliers=False)
    ax.set_ylabel("per-period turnover")
    fig_path = out_dir / "turnover.png"
    fig.savefig(fig_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return [path, fig_path]
