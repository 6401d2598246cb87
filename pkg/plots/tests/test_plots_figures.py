import math

import numpy as np
import pytest

from catsim_plots import plot_curves, plot_snapshots

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def fake_metrics(t_max, rng):
    t = np.arange(t_max + 1, dtype=float)
    fa = np.clip(1.0 - 0.002 * t + 0.001 * rng.normal(size=t.size), 0.0, 1.0)
    f = fa * np.exp(-0.1 * t)
    return {"t": t, "f": f, "fa": fa, "q0_norm": np.exp(-0.05 * t),
            "w_cell_norm": np.where(t % 7 == 3, math.nan, 1.0)}


def test_plot_curves_writes_png(tmp_path):
    rng = np.random.default_rng(5)
    runs = [("eps_phi=0.05", fake_metrics(50, rng)), ("eps_phi=pi", fake_metrics(50, rng))]
    plot_curves(runs, tmp_path / "curves.png")
    assert (tmp_path / "curves.png").read_bytes().startswith(PNG_MAGIC)


def test_plot_curves_is_deterministic(tmp_path):
    runs = [("only", fake_metrics(20, np.random.default_rng(9)))]
    plot_curves(runs, tmp_path / "a.png")
    plot_curves(runs, tmp_path / "b.png")
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()


def test_plot_curves_rejects_empty():
    with pytest.raises(ValueError, match="no runs"):
        plot_curves([], "never.png")


def test_plot_snapshots_writes_grid(tmp_path):
    rng = np.random.default_rng(11)
    def grid():
        g = rng.random((8, 8))
        return g / g.sum()
    columns = [
        ("run a", {0: grid(), 50: grid(), 100: grid()}),
        ("run b", {0: grid(), 50: grid(), 100: grid()}),
    ]
    out = tmp_path / "snaps.png"
    plot_snapshots(columns, out)
    assert out.read_bytes().startswith(PNG_MAGIC)


def test_plot_snapshots_all_zero_grid_is_fine(tmp_path):
    out = tmp_path / "zero.png"
    plot_snapshots([("flat", {0: np.zeros((4, 4))})], out)
    assert out.stat().st_size > 0


def test_plot_snapshots_missing_time_leaves_a_gap(tmp_path):
    columns = [("a", {0: np.eye(4), 100: np.eye(4)}), ("b", {0: np.eye(4)})]
    plot_snapshots(columns, tmp_path / "gap.png")
    assert (tmp_path / "gap.png").exists()


def test_plot_snapshots_dimension_mismatch():
    columns = [("a", {0: np.eye(4)}), ("b", {0: np.eye(8)})]
    with pytest.raises(ValueError, match="dimension mismatch"):
        plot_snapshots(columns, "never.png")
    with pytest.raises(ValueError, match="dimension mismatch"):
        plot_snapshots([("a", {0: np.zeros((4, 8))})], "never.png")


def test_plot_snapshots_rejects_empty():
    with pytest.raises(ValueError, match="no snapshots"):
        plot_snapshots([("a", {})], "never.png")
