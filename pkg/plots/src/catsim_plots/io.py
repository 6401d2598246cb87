"""Readers for the simulator's on-disk outputs.

This package talks to the simulator only through files, so everything here
parses the documented formats directly: the metrics CSV, the flat
``key = value`` config text, the snapshot CSV grids, and the plain (P2)
PGM renderings. Nothing imports catsim.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

METRIC_COLUMNS = ("t", "f", "fa", "q0_norm", "w_cell_norm")
_SNAPSHOT_PREFIX = "snapshot_t"


class SchemaError(ValueError):
    """An input file does not match its documented schema."""


def _float_field(path, lineno, token):
    if token == "undefined":
        return math.nan
    try:
        return float(token)
    except ValueError:
        raise SchemaError(f"{path}:{lineno}: not a number: {token!r}") from None


def read_metrics(path) -> dict[str, np.ndarray]:
    """Metrics CSV -> dict of column name to float array.

    ``undefined`` entries (steps where the normalizing reference value
    vanished) come back as NaN, which renders as a gap in the curve.
    """
    path = Path(path)
    lines = path.read_text(encoding="ascii").splitlines()
    if not lines:
        raise SchemaError(f"{path}:1: empty metrics file")
    header = tuple(lines[0].split(","))
    for name in METRIC_COLUMNS:
        if name not in header:
            raise SchemaError(f"{path}:1: missing column {name!r}")
    if header != METRIC_COLUMNS:
        raise SchemaError(f"{path}:1: expected header {','.join(METRIC_COLUMNS)!r}")
    columns: dict[str, list[float]] = {name: [] for name in METRIC_COLUMNS}
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(METRIC_COLUMNS):
            raise SchemaError(
                f"{path}:{lineno}: expected {len(METRIC_COLUMNS)} fields, got {len(parts)}"
            )
        for name, token in zip(METRIC_COLUMNS, parts):
            columns[name].append(_float_field(path, lineno, token))
    if not columns["t"]:
        raise SchemaError(f"{path}:2: no data rows")
    return {name: np.asarray(values) for name, values in columns.items()}


def read_config(path) -> dict[str, str]:
    """Flat ``key = value`` text -> dict of strings; ``#`` starts a comment."""
    out: dict[str, str] = {}
    path = Path(path)
    for lineno, raw in enumerate(path.read_text(encoding="ascii").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemaError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise SchemaError(f"{path}:{lineno}: empty key")
        if key in out:
            raise SchemaError(f"{path}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def read_grid_csv(path) -> np.ndarray:
    """Snapshot CSV (comma-separated floats, one row per first index) -> 2-d array."""
    path = Path(path)
    rows = []
    for lineno, line in enumerate(path.read_text(encoding="ascii").splitlines(), start=1):
        try:
            rows.append([float(token) for token in line.split(",")])
        except ValueError:
            raise SchemaError(f"{path}:{lineno}: not a number row") from None
        if len(rows[-1]) != len(rows[0]):
            raise SchemaError(
                f"{path}:{lineno}: ragged row, expected {len(rows[0])} values"
            )
    if not rows:
        raise SchemaError(f"{path}:1: empty grid")
    return np.asarray(rows)


def read_pgm(path) -> tuple[np.ndarray, int]:
    """Plain (P2) PGM -> (image array, maxval); image row 0 is the top row."""
    path = Path(path)
    tokens: list[str] = []
    for raw in path.read_text(encoding="ascii").splitlines():
        tokens.extend(raw.split("#", 1)[0].split())
    if not tokens or tokens[0] != "P2":
        raise SchemaError(f"{path}:1: not a plain PGM (expected the P2 magic)")
    if len(tokens) < 4:
        raise SchemaError(f"{path}: truncated header")
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
        values = [int(t) for t in tokens[4:]]
    except ValueError:
        raise SchemaError(f"{path}: non-integer header or pixel data") from None
    if len(values) != width * height:
        raise SchemaError(f"{path}: expected {width * height} pixels, got {len(values)}")
    img = np.asarray(values, dtype=np.int64).reshape(height, width)
    if values and (img.min() < 0 or img.max() > maxval):
        raise SchemaError(f"{path}: pixel values outside [0, {maxval}]")
    return img, maxval


def run_label(config: dict[str, str]) -> str:
    """Short legend text built from the noise-relevant config entries."""
    parts = []
    phi = config.get("eps_phi", "0")
    amp = config.get("eps_amp", "0")
    if phi not in ("0", "0.0"):
        parts.append(f"eps_phi={phi}")
    if amp not in ("0", "0.0"):
        parts.append(f"eps={amp}")
    if config.get("per_amplitude_phase", "false") == "true":
        parts.append("scrambled")
    if config.get("invert_at", "none") != "none":
        parts.append(f"inverted at t={config['invert_at']}")
    return ", ".join(parts) if parts else "noiseless"


def find_runs(directory) -> list[Path]:
    """Run directories under `directory`, sorted by name.

    A run directory is one holding a metrics.csv; `directory` itself counts
    when it holds one directly (a single-run tree).
    """
    directory = Path(directory)
    if (directory / "metrics.csv").is_file():
        return [directory]
    runs = sorted(p for p in directory.iterdir() if (p / "metrics.csv").is_file())
    if not runs:
        raise SchemaError(f"{directory}: no metrics.csv here or one level down")
    return runs


def snapshot_times(run_dir) -> list[int]:
    """Sorted snapshot times for which a run directory has CSV grids."""
    times = []
    for path in Path(run_dir).glob(_SNAPSHOT_PREFIX + "*.csv"):
        suffix = path.stem[len(_SNAPSHOT_PREFIX):]
        try:
            times.append(int(suffix))
        except ValueError:
            raise SchemaError(f"{path}: cannot read a snapshot time from the name") from None
    return sorted(times)
