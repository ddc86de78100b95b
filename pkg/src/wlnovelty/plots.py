"""Figures for bench reports, rendered to PNG files."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .bench import RunRecord, config_id, coverage_table, parse_config_id  # noqa: E402

NOVELTY_COLORS = {"none": "0.45", "at": "tab:orange", "wl": "tab:blue", "atwl": "tab:green"}


def _style(ax) -> None:
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    ax.tick_params(labelsize=8)


def plot_coverage(records: Sequence[RunRecord], configs: Sequence[str], path: Path) -> Path:
    table = coverage_table(records, configs)
    domains = [d for d in table if d != "total"]
    width = 0.8 / max(len(configs), 1)
    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(domains) + 2), 3.5))
    for i, cid in enumerate(configs):
        h, n = parse_config_id(cid)
        xs = [j + (i - (len(configs) - 1) / 2) * width for j in range(len(domains))]
        ax.bar(xs, [table[d][cid] for d in domains], width=width, label=cid,
               color=NOVELTY_COLORS[n], alpha=0.35 + 0.65 * (("gc", "add", "ff").index(h) + 1) / 3,
               edgecolor="black", linewidth=0.3)
    ax.set_xticks(range(len(domains)))
    ax.set_xticklabels(domains, fontsize=8)
    ax.set_ylabel("solved problems", fontsize=9)
    ax.yaxis.set_major_locator(MaxNLocator(integer=True))
    ax.legend(fontsize=6, ncol=min(4, len(configs)), frameon=False)
    _style(ax)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_expansions(records: Sequence[RunRecord], heuristic: str, path: Path) -> Path | None:
    """Base-heuristic expansions against each novelty variant, log-log."""
    by_key = {(r.domain, r.problem, r.config): r for r in records}
    base = config_id(heuristic, "none")
    points: dict[str, list[tuple[int, int]]] = {}
    for (d, p, cid), r in by_key.items():
        if cid == base or not cid.startswith(heuristic + "-") or not r.solved:
            continue
        b = by_key.get((d, p, base))
        if b is not None and b.solved:
            points.setdefault(cid, []).append((max(b.expansions, 1), max(r.expansions, 1)))
    if not points:
        return None
    fig, ax = plt.subplots(figsize=(4, 4))
    hi = max(max(x, y) for pts in points.values() for x, y in pts)
    top = 10 ** math.ceil(math.log10(max(hi, 10)))
    ax.plot([1, top], [1, top], color="0.6", linewidth=0.8, linestyle="--")
    for cid, pts in sorted(points.items()):
        _, n = parse_config_id(cid)
        ax.scatter([x for x, _ in pts], [y for _, y in pts], s=14, label=cid,
                   color=NOVELTY_COLORS[n], alpha=0.8)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlim(1, top)
    ax.set_ylim(1, top)
    ax.set_xlabel(f"expansions, {base}", fontsize=9)
    ax.set_ylabel("expansions, with novelty", fontsize=9)
    ax.legend(fontsize=7, frameon=False)
    _style(ax)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_figures(records: Sequence[RunRecord], configs: Sequence[str], out_dir: str | Path) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"coverage_figure": plot_coverage(records, configs, out / "coverage.png")}
    for h in dict.fromkeys(parse_config_id(c)[0] for c in configs):
        p = plot_expansions(records, h, out / f"expansions_{h}.png")
        if p is not None:
            paths[f"expansions_{h}_figure"] = p
    return paths
