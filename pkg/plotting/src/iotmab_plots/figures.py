"""Figure rendering from iotmab CSV rows.

Rendering is deterministic: fixed figure geometry, fixed styling, Agg
backend, no timestamps, so identical CSV input reproduces identical PNG
bytes. Curves average over seeds; every other number is taken from the CSV
as written.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvio import read_summary, read_timeseries

# One style per benchmark policy; parametrized variants such as "ucb1(0.25)"
# fall back to their base policy's style.
DEFAULT_STYLES: dict[str, dict] = {
    "random": {"color": "0.45", "linestyle": "--", "label": "Random"},
    "oracle_greedy": {"color": "tab:green", "linestyle": "-.", "label": "Oracle greedy"},
    "oracle_optimal": {"color": "black", "linestyle": "-", "label": "Oracle optimal"},
    "ucb1": {"color": "tab:blue", "linestyle": "-", "label": "UCB1"},
    "thompson": {"color": "tab:red", "linestyle": "-", "label": "Thompson sampling"},
}


@dataclass(frozen=True)
class PlotSpec:
    """What to render: input CSVs, output image, panel fractions, styling."""

    csv_paths: tuple[str, ...]
    out_path: str
    fractions: tuple[float, ...] | None = None
    styles: dict[str, dict] = field(default_factory=lambda: DEFAULT_STYLES)
    tx_prob: float | None = None
    dpi: int = 150


def _style_for(policy: str, styles: dict[str, dict]) -> dict:
    base = policy.split("(")[0]
    if policy in styles:
        style = dict(styles[policy])
    elif base in styles:
        style = dict(styles[base])
        style["label"] = policy
    else:
        raise ValueError(f"no curve style for policy {policy!r}; known: {sorted(styles)}")
    return style


def plot_timeseries(spec: PlotSpec) -> Path:
    """Render one panel per smart fraction: cumulative success rate vs slots,
    one curve per policy (averaged over seeds). Returns the image path."""
    rows = read_timeseries(list(spec.csv_paths))
    present = sorted({r["fraction"] for r in rows})
    fractions = list(spec.fractions) if spec.fractions is not None else present
    missing = [f for f in fractions if f not in present]
    if missing:
        raise ValueError(f"fractions {missing} not present in CSV (has {present})")
    policies = list(dict.fromkeys(r["policy"] for r in rows))
    styles = {p: _style_for(p, spec.styles) for p in policies}

    n = len(fractions)
    ncols = 2 if n > 1 else 1
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(5.2 * ncols, 3.6 * nrows), squeeze=False, sharey=False
    )
    for k, fraction in enumerate(fractions):
        ax = axes[k // ncols][k % ncols]
        for policy in policies:
            pts: dict[int, list[float]] = {}
            for r in rows:
                if r["policy"] == policy and r["fraction"] == fraction:
                    pts.setdefault(r["slot"], []).append(r["cum_rate"])
            if not pts:
                continue
            slots = np.array(sorted(pts))
            rates = np.array([np.mean(pts[s]) for s in slots])
            ax.plot(slots, rates, linewidth=1.3, **styles[policy])
        ax.set_title(f"{fraction:.0%} smart devices")
        ax.set_xlabel("slots")
        ax.set_ylabel("cumulative success rate")
        ax.set_ylim(0.0, 1.0)
        ax.grid(True, alpha=0.3)
        if spec.tx_prob:
            top = ax.secondary_xaxis(
                "top", functions=(lambda s: s * spec.tx_prob, lambda t: t / spec.tx_prob)
            )
            top.set_xlabel("mean transmissions per device")
        if k == 0:
            ax.legend(loc="lower right", fontsize=8)
    for k in range(n, nrows * ncols):
        axes[k // ncols][k % ncols].axis("off")
    fig.tight_layout()
    out = Path(spec.out_path)
    fig.savefig(out, dpi=spec.dpi, format="png")
    plt.close(fig)
    return out


def plot_gains(summary_path: str | Path, out_path: str | Path, *,
               styles: dict[str, dict] | None = None, dpi: int = 150) -> Path:
    """Render relative gain over the random baseline (percent) versus smart
    fraction, one curve per non-random policy. Returns the image path."""
    rows = read_summary(summary_path)
    if not any(r["policy"] == "random" for r in rows):
        raise ValueError(f"{summary_path}: no random baseline row, gains are undefined")
    styles = styles if styles is not None else DEFAULT_STYLES
    policies = [p for p in dict.fromkeys(r["policy"] for r in rows) if p != "random"]
    if not policies:
        raise ValueError(f"{summary_path}: only the random baseline present, nothing to plot")
    resolved = {p: _style_for(p, styles) for p in policies}

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for policy in policies:
        pts = sorted(
            (r["fraction"], 100.0 * r["gain_vs_random"])
            for r in rows
            if r["policy"] == policy
        )
        ax.plot([x for x, _ in pts], [y for _, y in pts], marker="o",
                markersize=3.5, linewidth=1.3, **resolved[policy])
    ax.set_xlabel("fraction of smart devices")
    ax.set_ylabel("gain over random channel selection (%)")
    ax.axhline(0.0, color="0.7", linewidth=0.8)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    out = Path(out_path)
    fig.savefig(out, dpi=dpi, format="png")
    plt.close(fig)
    return out
