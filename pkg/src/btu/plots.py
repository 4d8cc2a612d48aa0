"""Figures for verification and search reports (written to files)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams.update({"figure.dpi": 100, "axes.spines.top": False, "axes.spines.right": False})


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_puncture(series: dict, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(series["k"], series["bound"], "k--", label="bound")
    ax.plot(series["k"], series["max_l"], "o-", label="largest observed")
    ax.axhline(4, color="grey", lw=0.8)
    ax.set_xlabel("k")
    ax.set_ylabel("girth after one flip")
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_f_vs_scan(series: dict, path: Path) -> Path:
    labels = series["labels"]
    x = range(len(labels))
    fig, ax = plt.subplots(figsize=(max(5, 0.35 * len(labels)), 3.5))
    ax.bar([i - 0.2 for i in x], [float(v) for v in series["formula"]], width=0.4, label="formula")
    ax.bar([i + 0.2 for i in x], series["scan"], width=0.4, label="scan")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=90, fontsize=7)
    ax.set_yscale("log")
    ax.set_ylabel("permutations")
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_girth_agreement(series: dict, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.scatter(series["slow"], series["fast"], alpha=0.5)
    lo, hi = min(series["slow"]) - 1, max(series["slow"]) + 1
    ax.plot([lo, hi], [lo, hi], "k:", lw=0.8)
    ax.set_xlabel("walk enumeration")
    ax.set_ylabel("BFS")
    return _save(fig, path)


def plot_census(rows, path: Path) -> Path:
    labels = [r.beta_tuple for r in rows]
    values = [r.best_girth or 0 for r in rows]
    fig, ax = plt.subplots(figsize=(max(5, 0.4 * len(labels)), 3.5))
    ax.bar(range(len(labels)), values)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=90, fontsize=7)
    ax.set_ylabel("best girth")
    return _save(fig, path)


SUITE_PLOTS = {
    "bounds": [("puncture", plot_puncture)],
    "counting": [("f_vs_scan", plot_f_vs_scan)],
    "girth": [("random_girths", plot_girth_agreement)],
}


def render_suite(report, out_dir: Path) -> list[Path]:
    paths = []
    for key, fn in SUITE_PLOTS.get(report.suite, []):
        if key in report.series:
            paths.append(fn(report.series[key], Path(out_dir) / f"{report.suite}_{key}.png"))
    return paths
