"""Plain-text file formats: point lists and PGM snapshots."""

from __future__ import annotations

import numpy as np


def save_points(path, points) -> None:
    """Write lattice points one per line as ``i j``."""
    with open(path, "w", encoding="ascii") as fh:
        for i, j in points:
            fh.write(f"{i} {j}\n")


def load_points(path) -> list[tuple[int, int]]:
    """Read an ``i j`` point list; blank lines and ``#`` comments are skipped."""
    points = []
    with open(path, encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'i j', got {raw.strip()!r}")
            try:
                i, j = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(
                    f"{path}:{lineno}: expected integers, got {raw.strip()!r}"
                ) from None
            points.append((i, j))
    return points


def _wrap_tokens(tokens, width: int = 70) -> list[str]:
    """Pack tokens into lines of at most `width` characters (PGM line limit)."""
    lines: list[str] = []
    cur = ""
    for tok in tokens:
        if not cur:
            cur = tok
        elif len(cur) + 1 + len(tok) <= width:
            cur += " " + tok
        else:
            lines.append(cur)
            cur = tok
    if cur:
        lines.append(cur)
    return lines


def write_pgm(path, grid) -> None:
    """Render a probability grid as a plain-text (P2) PGM image.

    grid[i, j] is the weight at horizontal position i and vertical position
    j; image rows run top to bottom, so row 0 of the file is the j = max
    edge.  The largest entry maps to gray level 255.
    """
    g = np.asarray(grid, dtype=float)
    if g.ndim != 2:
        raise ValueError(f"grid must be 2-d, got shape {g.shape}")
    peak = float(g.max())
    if peak <= 0.0:
        img = np.zeros(g.shape, dtype=np.int64)
    else:
        img = np.rint(g / peak * 255).astype(np.int64)
    rows = np.flip(img.T, axis=0)
    tokens = [str(v) for v in rows.ravel()]
    with open(path, "w", encoding="ascii") as fh:
        fh.write("P2\n")
        fh.write(f"{g.shape[0]} {g.shape[1]}\n")
        fh.write("255\n")
        for line in _wrap_tokens(tokens):
            fh.write(line + "\n")
