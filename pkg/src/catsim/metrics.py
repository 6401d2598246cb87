"""Run diagnostics: fidelity, faithfulness, coarse-grained cells.

Fidelity is the usual overlap |<ref|noisy>|^2.  Faithfulness drops the
phases first, (sum_k |ref_k| |noisy_k|)^2, so it only decays when
probability weight actually moves between basis states; pure phase noise
leaves it at 1 exactly.  Faithfulness >= fidelity always (triangle
inequality on the inner product).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _check_layouts(a, b):
    if a.layout != b.layout:
        raise ValueError("layout mismatch between states")


def _aligned(a, b):
    """Amplitudes of `a` and `b` on a common support, as two equal-length arrays."""
    a_sparse = a.backend == "sparse"
    b_sparse = b.backend == "sparse"
    if a_sparse and b_sparse:
        common, ia, ib = np.intersect1d(
            a.indices, b.indices, assume_unique=True, return_indices=True
        )
        return a.amps[ia], b.amps[ib]
    if a_sparse:
        return a.amps, b.amps[a.indices]
    if b_sparse:
        return a.amps[b.indices], b.amps
    return a.amps, b.amps


def fidelity(ref, noisy) -> float:
    """|<ref|noisy>|^2."""
    _check_layouts(ref, noisy)
    ra, na = _aligned(ref, noisy)
    return float(np.abs(np.sum(np.conj(ra) * na)) ** 2)


def faithfulness(ref, noisy) -> float:
    """(sum_k |ref_k| |noisy_k|)^2; insensitive to phases, bounds fidelity above."""
    _check_layouts(ref, noisy)
    ra, na = _aligned(ref, noisy)
    return float(np.sum(np.abs(ra) * np.abs(na)) ** 2)


@dataclass(frozen=True)
class CellGrid:
    """Probabilities aggregated onto a 2^n_g x 2^n_g grid of lattice cells."""

    n_g: int
    probs: np.ndarray

    def __post_init__(self):
        m = 1 << self.n_g
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (m, m):
            raise ValueError(f"cell grid must be {m} x {m}, got {p.shape}")
        if (p < -1e-10).any():
            raise ValueError("cell probabilities must be nonnegative")
        total = float(p.sum())
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"cell probabilities must sum to 1, got {total!r}")
        object.__setattr__(self, "probs", p)

    def cell(self, ig: int, jg: int) -> float:
        return float(self.probs[ig, jg])

    def l1_distance(self, other: "CellGrid") -> float:
        if self.n_g != other.n_g:
            raise ValueError("cell grids have different resolutions")
        return float(np.abs(self.probs - other.probs).sum())


def coarse_grain(state, n_g: int) -> CellGrid:
    """Sum the N x N lattice probabilities into 2^n_g x 2^n_g equal cells."""
    n_q = state.layout.n_q
    if not 1 <= n_g <= n_q:
        raise ValueError(f"n_g out of range: need 1 <= n_g <= {n_q}, got {n_g}")
    p = state.lattice_probabilities()
    m = 1 << n_g
    r = 1 << (n_q - n_g)
    cells = p.reshape(m, r, m, r).sum(axis=(1, 3))
    return CellGrid(n_g=n_g, probs=cells)


def sample_cells(state, n_g: int, shots: int, rng) -> CellGrid:
    """Estimate the cell grid from `shots` simulated measurements of the state."""
    n_q = state.layout.n_q
    if not 1 <= n_g <= n_q:
        raise ValueError(f"n_g out of range: need 1 <= n_g <= {n_q}, got {n_g}")
    N = state.layout.N
    p = state.lattice_probabilities().ravel()
    p = p / p.sum()
    draws = rng.choice(p.size, size=shots, p=p)
    shift = n_q - n_g
    ig = (draws // N) >> shift
    jg = (draws % N) >> shift
    m = 1 << n_g
    counts = np.bincount(ig * m + jg, minlength=m * m).reshape(m, m)
    return CellGrid(n_g=n_g, probs=counts / shots)


@dataclass(frozen=True)
class MetricsRecord:
    """One row of the per-iteration metrics table."""

    t: int
    f: float
    fa: float
    q0_norm: float
    w_cell_norm: float

    def __post_init__(self):
        if not -1e-10 <= self.f <= self.fa + 1e-10:
            raise ValueError(f"fidelity {self.f!r} outside [0, faithfulness]")
        if self.fa > 1.0 + 1e-10:
            raise ValueError(f"faithfulness {self.fa!r} exceeds 1")
