"""Readers for the simulator file formats, checked against literal files."""

import math

import numpy as np
import pytest

from catsim_plots import (
    SchemaError,
    find_runs,
    read_config,
    read_grid_csv,
    read_metrics,
    read_pgm,
    run_label,
    snapshot_times,
)

METRICS_TEXT = """\
t,f,fa,q0_norm,w_cell_norm
0,1.0,1.0,1.0,1.0
1,0.25,0.999999999,0.5,undefined
2,0.04,1.0,0.25,1.0000000001
"""


def test_read_metrics(tmp_path):
    path = tmp_path / "metrics.csv"
    path.write_text(METRICS_TEXT)
    cols = read_metrics(path)
    np.testing.assert_array_equal(cols["t"], [0.0, 1.0, 2.0])
    np.testing.assert_array_equal(cols["f"], [1.0, 0.25, 0.04])
    assert math.isnan(cols["w_cell_norm"][1])
    assert cols["w_cell_norm"][2] == 1.0000000001


@pytest.mark.parametrize("text,fragment", [
    ("", "empty metrics file"),
    ("t,f,fa,q0_norm\n0,1,1,1\n", "missing column 'w_cell_norm'"),
    ("f,t,fa,q0_norm,w_cell_norm\n0,1,1,1,1\n", "expected header"),
    ("t,f,fa,q0_norm,w_cell_norm,extra\n", "expected header"),
    ("t,f,fa,q0_norm,w_cell_norm\n0,1,1,1\n", "expected 5 fields, got 4"),
    ("t,f,fa,q0_norm,w_cell_norm\n0,one,1,1,1\n", "not a number: 'one'"),
    ("t,f,fa,q0_norm,w_cell_norm\n", "no data rows"),
])
def test_read_metrics_schema_errors(tmp_path, text, fragment):
    path = tmp_path / "metrics.csv"
    path.write_text(text)
    with pytest.raises(SchemaError, match="metrics.csv:"):
        try:
            read_metrics(path)
        except SchemaError as exc:
            assert fragment in str(exc)
            raise


def test_read_config(tmp_path):
    path = tmp_path / "config.txt"
    path.write_text("n_q = 7\neps_phi = pi   # maximal\n\n# comment only\nseed = 12345\n")
    assert read_config(path) == {"n_q": "7", "eps_phi": "pi", "seed": "12345"}


def test_read_config_rejects_duplicates_and_junk(tmp_path):
    path = tmp_path / "config.txt"
    path.write_text("a = 1\na = 2\n")
    with pytest.raises(SchemaError, match="config.txt:2: duplicate key 'a'"):
        read_config(path)
    path.write_text("just words\n")
    with pytest.raises(SchemaError, match="expected 'key = value'"):
        read_config(path)


@pytest.mark.parametrize("config,label", [
    ({}, "noiseless"),
    ({"eps_phi": "0.0", "eps_amp": "0"}, "noiseless"),
    ({"eps_phi": "0.05"}, "eps_phi=0.05"),
    ({"eps_phi": "pi", "eps_amp": "0.01"}, "eps_phi=pi, eps=0.01"),
    ({"per_amplitude_phase": "true"}, "scrambled"),
    ({"eps_phi": "pi", "invert_at": "50"}, "eps_phi=pi, inverted at t=50"),
])
def test_run_label(config, label):
    assert run_label(config) == label


def test_read_grid_csv(tmp_path):
    path = tmp_path / "snapshot_t0.csv"
    path.write_text("0.5,0.25\n0.0,0.25\n")
    np.testing.assert_array_equal(read_grid_csv(path), [[0.5, 0.25], [0.0, 0.25]])


def test_read_grid_csv_rejects_ragged_and_junk(tmp_path):
    path = tmp_path / "g.csv"
    path.write_text("1.0,2.0\n3.0\n")
    with pytest.raises(SchemaError, match="g.csv:2: ragged row"):
        read_grid_csv(path)
    path.write_text("1.0,x\n")
    with pytest.raises(SchemaError, match="not a number row"):
        read_grid_csv(path)
    path.write_text("")
    with pytest.raises(SchemaError, match="empty grid"):
        read_grid_csv(path)


def test_read_pgm_golden(tmp_path):
    # the simulator writes image rows top to bottom, 70-column token lines
    path = tmp_path / "snap.pgm"
    path.write_text("P2\n2 2\n255\n128 255 0 64\n")
    img, maxval = read_pgm(path)
    assert maxval == 255
    np.testing.assert_array_equal(img, [[128, 255], [0, 64]])


@pytest.mark.parametrize("text,fragment", [
    ("P5\n2 2\n255\n1 2 3 4\n", "P2 magic"),
    ("P2\n2 2\n", "truncated header"),
    ("P2\n2 2\n255\n1 2 3\n", "expected 4 pixels, got 3"),
    ("P2\n2 1\n255\n1 two\n", "non-integer"),
    ("P2\n2 1\n100\n1 101\n", "outside [0, 100]"),
])
def test_read_pgm_schema_errors(tmp_path, text, fragment):
    path = tmp_path / "snap.pgm"
    path.write_text(text)
    with pytest.raises(SchemaError) as err:
        read_pgm(path)
    assert fragment in str(err.value)


def test_find_runs_and_snapshot_times(tmp_path):
    for name in ("b_run", "a_run"):
        d = tmp_path / name
        d.mkdir()
        (d / "metrics.csv").write_text("t,f,fa,q0_norm,w_cell_norm\n0,1,1,1,1\n")
    (tmp_path / "not_a_run").mkdir()
    runs = find_runs(tmp_path)
    assert [r.name for r in runs] == ["a_run", "b_run"]
    # a single-run tree is the directory itself
    assert find_runs(tmp_path / "a_run") == [tmp_path / "a_run"]

    (tmp_path / "a_run" / "snapshot_t100.csv").write_text("1.0\n")
    (tmp_path / "a_run" / "snapshot_t0.csv").write_text("1.0\n")
    assert snapshot_times(tmp_path / "a_run") == [0, 100]
    assert snapshot_times(tmp_path / "b_run") == []


def test_find_runs_empty_tree(tmp_path):
    with pytest.raises(SchemaError, match="no metrics.csv"):
        find_runs(tmp_path)
