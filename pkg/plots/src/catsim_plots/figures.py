"""Figure rendering: metric curve panels and snapshot heatmap grids."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

CURVE_PANELS = ("f", "fa", "q0_norm", "w_cell_norm")
PANEL_TITLES = {
    "f": "fidelity f",
    "fa": "faithfulness f_a",
    "q0_norm": "zero harmonic, normalized",
    "w_cell_norm": "designated cell weight, normalized",
}
# perceptually ordered, dark blue at the minimum through to red at the top
SNAPSHOT_CMAP = "turbo"


def plot_curves(runs, out_path):
    """One panel per recorded metric, one curve per run.

    runs: (label, metrics dict) pairs in display order, as produced by
    `io.run_label` and `io.read_metrics`. NaN entries (the ``undefined``
    rows) break the curve rather than plotting.
    """
    if not runs:
        raise ValueError("no runs to plot")
    fig, axes = plt.subplots(2, 2, figsize=(9.5, 7.0), sharex=True)
    for ax, column in zip(axes.ravel(), CURVE_PANELS):
        for label, metrics in runs:
            ax.plot(metrics["t"], metrics[column], linewidth=1.2, label=label)
        ax.set_title(PANEL_TITLES[column], fontsize=10)
        ax.set_ylim(bottom=0.0)
        ax.grid(True, alpha=0.3)
    for ax in axes[1]:
        ax.set_xlabel("iteration t")
    axes[0][0].legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_snapshots(columns, out_path):
    """Heatmap grid: one column per run, one row per snapshot time.

    columns: (label, {t: grid}) pairs; grids are square cell-probability
    tables indexed [i_g, j_g]. Every heatmap is anchored to its own
    maximum, so the hottest cell of each snapshot shows red and an all-zero
    grid shows the uniform minimum color.
    """
    if not columns:
        raise ValueError("no runs to plot")
    times = sorted({t for _, snapshots in columns for t in snapshots})
    if not times:
        raise ValueError("no snapshots to plot")
    shapes = {grid.shape for _, snapshots in columns for grid in snapshots.values()}
    if len(shapes) != 1 or any(s[0] != s[1] for s in shapes):
        raise ValueError(f"snapshot dimension mismatch: {sorted(shapes)}")

    nrows, ncols = len(times), len(columns)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(3.1 * ncols, 2.9 * nrows), squeeze=False
    )
    for col, (label, snapshots) in enumerate(columns):
        axes[0][col].set_title(label, fontsize=10)
        for row, t in enumerate(times):
            ax = axes[row][col]
            ax.set_xticks([])
            ax.set_yticks([])
            if col == 0:
                ax.set_ylabel(f"t = {t}")
            if t not in snapshots:
                ax.set_axis_off()
                continue
            grid = snapshots[t]
            peak = float(grid.max())
            # grid[i, j]: i runs along x, j along y, so display the transpose
            # with the origin at the lower left
            ax.imshow(
                np.asarray(grid).T,
                origin="lower",
                cmap=SNAPSHOT_CMAP,
                vmin=0.0,
                vmax=peak if peak > 0.0 else 1.0,
                interpolation="nearest",
            )
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
