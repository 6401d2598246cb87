"""Classical reference dynamics for the discretized cat map.

Everything in here works directly on integer lattice points and real
probability tables, with no quantum machinery, so it can serve as an
independent check on the circuit simulation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _check_point(i: int, j: int, N: int):
    if not (0 <= i < N and 0 <= j < N):
        raise ValueError(f"lattice point out of range for N={N}: ({i}, {j})")


def cat_step(i: int, j: int, N: int) -> tuple[int, int]:
    """One application of the map: (i, j) -> ((2i + j) mod N, (i + j) mod N)."""
    _check_point(i, j, N)
    return (2 * i + j) % N, (i + j) % N


def cat_step_inverse(I: int, J: int, N: int) -> tuple[int, int]:
    """Inverse map: (I, J) -> ((I - J) mod N, (2J - I) mod N)."""
    _check_point(I, J, N)
    return (I - J) % N, (2 * J - I) % N


def cat_period(N: int, max_steps: int = 10_000) -> int:
    """Smallest T > 0 with M^T = identity mod N, M = [[2, 1], [1, 1]]."""
    m = np.array([[2, 1], [1, 1]], dtype=np.int64)
    acc = m % N
    ident = np.eye(2, dtype=np.int64)
    for t in range(1, max_steps + 1):
        if np.array_equal(acc, ident):
            return t
        acc = (acc @ m) % N
    raise RuntimeError(f"no period found within {max_steps} steps for N={N}")


@dataclass(frozen=True)
class LatticeDistribution:
    """A probability table over the N x N lattice."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError(f"lattice table must be square, got shape {p.shape}")
        N = p.shape[0]
        if N & (N - 1) != 0 or N < 2:
            raise ValueError(f"lattice size must be a power of 2, got {N}")
        if (p < 0).any():
            raise ValueError("lattice probabilities must be nonnegative")
        total = float(p.sum())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"lattice probabilities must sum to 1, got {total!r}")
        object.__setattr__(self, "probs", p)

    @property
    def N(self) -> int:
        return self.probs.shape[0]

    @classmethod
    def from_points(cls, points, N: int) -> "LatticeDistribution":
        """Uniform distribution over a set of lattice points."""
        pts = sorted(set(points))
        if not pts:
            raise ValueError("empty initial distribution")
        p = np.zeros((N, N), dtype=float)
        for i, j in pts:
            _check_point(i, j, N)
            p[i, j] = 1.0
        return cls(probs=p / len(pts))


def iterate_distribution(dist: LatticeDistribution, t: int) -> LatticeDistribution:
    """Transport the whole table through t forward map steps (t < 0 inverts)."""
    N = dist.N
    ii, jj = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    if t >= 0:
        di, dj = (2 * ii + jj) % N, (ii + jj) % N
        steps = t
    else:
        di, dj = (ii - jj) % N, (2 * jj - ii) % N
        steps = -t
    p = dist.probs
    for _ in range(steps):
        out = np.zeros_like(p)
        np.add.at(out, (di, dj), p)
        p = out
    return LatticeDistribution(probs=p)


def coarse_cells(dist: LatticeDistribution, n_g: int) -> np.ndarray:
    """Aggregate a lattice table onto the 2^n_g x 2^n_g cell grid."""
    N = dist.N
    m = 1 << n_g
    if m > N:
        raise ValueError(f"cell grid 2^{n_g} exceeds lattice size {N}")
    r = N // m
    return dist.probs.reshape(m, r, m, r).sum(axis=(1, 3))


def monte_carlo_cells(
    points,
    N: int,
    n_traj: int,
    t: int,
    n_g: int,
    rng=None,
    exhaustive: bool = False,
) -> np.ndarray:
    """Cell-grid estimate from classical trajectories of the exact map.

    With ``exhaustive=True`` every listed point contributes one trajectory
    (deterministic); otherwise `n_traj` starting points are drawn uniformly
    with replacement from `points` using `rng`.
    """
    pts = sorted(set(points))
    if not pts:
        raise ValueError("empty initial set")
    arr = np.array(pts, dtype=np.int64)
    if exhaustive:
        ii, jj = arr[:, 0].copy(), arr[:, 1].copy()
    else:
        if rng is None:
            rng = np.random.default_rng()
        picks = rng.integers(0, len(pts), size=n_traj)
        ii, jj = arr[picks, 0], arr[picks, 1]
    for _ in range(t):
        ii, jj = (2 * ii + jj) % N, (ii + jj) % N
    m = 1 << n_g
    shift = (N.bit_length() - 1) - n_g
    counts = np.zeros((m, m), dtype=float)
    np.add.at(counts, (ii >> shift, jj >> shift), 1.0)
    return counts / ii.size
