"""Acceptance for the plotting pipeline: recipe batches in, figures out.

Everything here goes through the installed console scripts, so these tests
need both packages on the path and take a couple of minutes (each batch
contains one dense-backend run).
"""

import subprocess

import numpy as np
import pytest

from catsim_plots import read_grid_csv, read_metrics

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def run_ok(*argv):
    proc = subprocess.run(argv, capture_output=True, text=True)
    assert proc.returncode == 0, f"{argv}: {proc.stderr}"
    return proc


@pytest.fixture(scope="module")
def fig1_left(tmp_path_factory):
    out = tmp_path_factory.mktemp("batches") / "fig1-left"
    run_ok("catsim", "recipe", "fig1-left", "--out", str(out))
    return out


@pytest.fixture(scope="module")
def fig2(tmp_path_factory):
    out = tmp_path_factory.mktemp("batches") / "fig2"
    run_ok("catsim", "recipe", "fig2", "--out", str(out))
    return out


def test_criterion_10_curves_pipeline(fig1_left, tmp_path):
    fig = tmp_path / "fig1-left.png"
    run_ok("plot", "curves", "--in", str(fig1_left), "--out", str(fig))
    assert fig.read_bytes().startswith(PNG_MAGIC)
    # the maximal-phase-noise faithfulness curve is the constant line at 1
    metrics = read_metrics(fig1_left / "phi_pi" / "metrics.csv")
    assert metrics["fa"].min() >= 1.0 - 1e-9
    # while its fidelity curve collapses, so the panels actually differ
    assert metrics["f"][-1] < 0.1


def test_criterion_10_snapshots_pipeline(fig2, tmp_path):
    fig = tmp_path / "fig2.png"
    run_ok("plot", "snapshots", "--in", str(fig2), "--out", str(fig))
    assert fig.read_bytes().startswith(PNG_MAGIC)
    # time reversal: the phase-only column repeats its t = 0 portrait at
    # t = 100, the amplitude-noise column does not
    clean0 = read_grid_csv(fig2 / "phase_only" / "snapshot_t0.csv")
    clean100 = read_grid_csv(fig2 / "phase_only" / "snapshot_t100.csv")
    assert np.abs(clean100 - clean0).max() <= 1e-9
    noisy0 = read_grid_csv(fig2 / "phase_amp_0.30" / "snapshot_t0.csv")
    noisy100 = read_grid_csv(fig2 / "phase_amp_0.30" / "snapshot_t100.csv")
    assert np.abs(noisy100 - noisy0).sum() > 0.1
