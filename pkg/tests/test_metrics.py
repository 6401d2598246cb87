"""Fidelity, faithfulness, coarse graining, sampling."""

import math

import numpy as np
import pytest

from catsim import (
    CellGrid,
    DenseState,
    MetricsRecord,
    RegisterLayout,
    SparseState,
    coarse_grain,
    faithfulness,
    fidelity,
    init_state,
    sample_cells,
)


def random_state(lay, rng, backend="dense", support=None):
    if backend == "dense":
        v = rng.normal(size=lay.dim) + 1j * rng.normal(size=lay.dim)
        return DenseState(lay, v / np.linalg.norm(v))
    n = support if support is not None else int(rng.integers(1, lay.dim))
    idx = rng.choice(lay.dim, size=n, replace=False).astype(np.int64)
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return SparseState(lay, idx, v / np.linalg.norm(v))


def test_fidelity_identical_and_orthogonal():
    lay = RegisterLayout(2)
    a = init_state(lay, [(0, 0), (1, 1)])
    assert fidelity(a, a.copy()) == pytest.approx(1.0, abs=1e-14)
    b = init_state(lay, [(2, 2)])
    c = init_state(lay, [(3, 3)])
    assert fidelity(b, c) == 0.0
    assert faithfulness(b, c) == 0.0


def test_faithfulness_of_state_with_itself():
    lay = RegisterLayout(2)
    a = init_state(lay, [(0, 1), (2, 3), (3, 0)])
    assert faithfulness(a, a.copy()) == pytest.approx(1.0, abs=1e-14)


def test_faithfulness_ignores_phase_scramble():
    lay = RegisterLayout(3)
    rng = np.random.default_rng(17)
    for backend in ("sparse", "dense"):
        s = init_state(lay, [(1, 1), (2, 5), (6, 0), (7, 7)], backend=backend)
        scrambled = s.copy()
        scrambled.apply_per_amplitude_phase(rng)
        assert faithfulness(s, scrambled) == pytest.approx(1.0, abs=1e-13)
        assert fidelity(s, scrambled) <= faithfulness(s, scrambled) + 1e-12


def test_layout_mismatch_rejected():
    a = init_state(RegisterLayout(2), [(0, 0)])
    b = init_state(RegisterLayout(3), [(0, 0)])
    with pytest.raises(ValueError, match="layout mismatch"):
        fidelity(a, b)
    with pytest.raises(ValueError, match="layout mismatch"):
        faithfulness(a, b)


@pytest.mark.parametrize(
    "pair,seed", [("sparse-sparse", 31), ("sparse-dense", 32), ("dense-dense", 33)]
)
def test_fidelity_bounded_by_faithfulness_random_pairs(pair, seed):
    """f <= fa on random state pairs, all backend combinations."""
    lay = RegisterLayout(3)
    rng = np.random.default_rng(seed)
    kinds = pair.split("-")
    for _ in range(340):
        a = random_state(lay, rng, backend=kinds[0])
        b = random_state(lay, rng, backend=kinds[1])
        f = fidelity(a, b)
        fa = faithfulness(a, b)
        assert -1e-10 <= f <= fa + 1e-10
        assert fa <= 1.0 + 1e-10


def test_fidelity_mixed_backend_consistency():
    lay = RegisterLayout(3)
    rng = np.random.default_rng(23)
    for _ in range(20):
        a = random_state(lay, rng, backend="sparse")
        b = random_state(lay, rng, backend="sparse")
        ad, bd = a.to_dense(), b.to_dense()
        assert fidelity(a, b) == pytest.approx(fidelity(ad, bd), abs=1e-12)
        assert faithfulness(a, b) == pytest.approx(faithfulness(ad, bd), abs=1e-12)
        assert fidelity(a, bd) == pytest.approx(fidelity(ad, b), abs=1e-12)


# --- coarse graining ---

def test_coarse_grain_uniform():
    lay = RegisterLayout(3)
    s = init_state(lay, [(i, j) for i in range(8) for j in range(8)])
    for n_g in (1, 2, 3):
        grid = coarse_grain(s, n_g)
        np.testing.assert_allclose(grid.probs, 1.0 / 4 ** n_g, atol=1e-12)


def test_coarse_grain_full_resolution_is_identity():
    lay = RegisterLayout(2)
    s = init_state(lay, [(0, 3), (2, 1)])
    grid = coarse_grain(s, 2)
    np.testing.assert_allclose(grid.probs, s.lattice_probabilities(), atol=1e-14)


def test_coarse_grain_top_bits():
    lay = RegisterLayout(3)
    s = init_state(lay, [(5, 2)])  # top bits at n_g=1: i=1, j=0
    grid = coarse_grain(s, 1)
    assert grid.cell(1, 0) == pytest.approx(1.0, abs=1e-14)


def test_coarse_grain_range_check():
    s = init_state(RegisterLayout(2), [(0, 0)])
    with pytest.raises(ValueError, match="n_g out of range"):
        coarse_grain(s, 0)
    with pytest.raises(ValueError, match="n_g out of range"):
        coarse_grain(s, 3)


def test_cell_grid_validation():
    good = np.full((4, 4), 1 / 16)
    CellGrid(n_g=2, probs=good)
    with pytest.raises(ValueError, match="must be 4 x 4"):
        CellGrid(n_g=2, probs=np.ones((2, 2)) / 4)
    with pytest.raises(ValueError, match="sum to 1"):
        CellGrid(n_g=2, probs=good * 2)
    bad = good.copy()
    bad[0, 0] = -0.01
    bad[0, 1] += 0.02 + 1 / 16
    with pytest.raises(ValueError, match="nonnegative"):
        CellGrid(n_g=2, probs=bad)


def test_cell_grid_l1_distance():
    a = CellGrid(n_g=1, probs=np.array([[0.5, 0.5], [0.0, 0.0]]))
    b = CellGrid(n_g=1, probs=np.array([[0.0, 0.5], [0.5, 0.0]]))
    assert a.l1_distance(b) == pytest.approx(1.0, abs=1e-14)
    assert a.l1_distance(a) == 0.0


# --- sampled measurement ---

def test_sample_cells_single_basis_state():
    lay = RegisterLayout(3)
    s = init_state(lay, [(5, 6)])
    grid = sample_cells(s, 2, shots=500, rng=np.random.default_rng(0))
    assert grid.cell(2, 3) == 1.0  # top 2 bits of 5 and 6
    assert grid.probs.sum() == pytest.approx(1.0, abs=1e-14)


def test_sample_cells_uniform_binomial_band():
    lay = RegisterLayout(3)
    s = init_state(lay, [(i, j) for i in range(8) for j in range(8)])
    shots = 40_000
    grid = sample_cells(s, 1, shots=shots, rng=np.random.default_rng(7))
    sigma = math.sqrt(0.25 * 0.75 / shots)
    np.testing.assert_allclose(grid.probs, 0.25, atol=3 * sigma)


def test_sample_cells_converges_to_coarse_grain():
    """Binomial concentration: per-cell error within 3 sigma for >= 99/100 seeds."""
    lay = RegisterLayout(3)
    s = init_state(lay, [(0, 0), (0, 1), (3, 7), (6, 2), (7, 7), (5, 5)])
    exact = coarse_grain(s, 2).probs
    shots = 2000
    bound = 3 * np.sqrt(np.maximum(exact * (1 - exact), 1e-12) / shots)
    hits = 0
    for seed in range(100):
        est = sample_cells(s, 2, shots=shots, rng=np.random.default_rng(seed)).probs
        if np.all(np.abs(est - exact) <= bound + 1e-12):
            hits += 1
    assert hits >= 99


def test_metrics_record_ordering_enforced():
    MetricsRecord(t=0, f=0.5, fa=0.7, q0_norm=1.0, w_cell_norm=1.0)
    with pytest.raises(ValueError, match="outside"):
        MetricsRecord(t=0, f=0.8, fa=0.7, q0_norm=1.0, w_cell_norm=1.0)
    with pytest.raises(ValueError, match="exceeds 1"):
        MetricsRecord(t=0, f=0.5, fa=1.5, q0_norm=1.0, w_cell_norm=1.0)
    # an undefined cell ratio is representable
    r = MetricsRecord(t=3, f=0.1, fa=0.2, q0_norm=0.5, w_cell_norm=math.nan)
    assert math.isnan(r.w_cell_norm)
