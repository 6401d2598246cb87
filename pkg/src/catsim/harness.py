"""Experiment runner: configs, initial states, lockstep noisy/reference runs.

A run holds two states: the noisy one, whose gates pass through the noise
models, and a noiseless reference evolved by the ideal gates in lockstep.
Metrics comparing the two are recorded after every full map iteration.
Realizations of the same experiment differ only in their RNG stream
(seed, realization_index) and execute in parallel.
"""

from __future__ import annotations

import concurrent.futures
import math
import os
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .circuits import build_cat_iteration, invert_circuit, zero_harmonic
from .io import load_points, write_pgm
from .metrics import CellGrid, MetricsRecord, coarse_grain, faithfulness, fidelity
from .noise import NoiseConfig, noisy_gate
from .registers import RegisterLayout
from .state import NumericalError, init_state

DEFAULT_SEED = 12345

RECIPE_NAMES = ("fig1-left", "fig1-right", "fig2")

METRICS_HEADER = "t,f,fa,q0_norm,w_cell_norm"


class ConfigError(ValueError):
    """A config file or config field is invalid."""


@dataclass
class ExperimentConfig:
    """Everything one experiment needs; maps 1:1 onto the config-file keys."""

    n_q: int
    n_g: int
    t_max: int
    eps_phi: float = 0.0
    eps_amp: float = 0.0
    per_amplitude_phase: bool = False
    seed: int = DEFAULT_SEED
    invert_at: int | None = None
    realizations: int = 1
    initial: str = "smile"
    snapshot_times: tuple[int, ...] = ()
    designated_cell: tuple[int, int] | None = None
    force_dense: bool = False
    output_dir: str | None = None

    def validate(self) -> None:
        if self.n_q < 2:
            raise ConfigError(f"n_q must be at least 2, got {self.n_q}")
        if not 1 <= self.n_g <= self.n_q:
            raise ConfigError(f"n_g must lie in [1, n_q={self.n_q}], got {self.n_g}")
        if self.t_max < 0:
            raise ConfigError(f"t_max must be nonnegative, got {self.t_max}")
        for name in ("eps_phi", "eps_amp"):
            value = getattr(self, name)
            if not 0.0 <= value <= math.pi:
                raise ConfigError(f"{name} must lie in [0, pi], got {value}")
        if self.invert_at is not None and not 0 <= self.invert_at <= self.t_max:
            raise ConfigError(
                f"invert_at must lie in [0, t_max={self.t_max}], got {self.invert_at}"
            )
        if self.realizations < 1:
            raise ConfigError(f"realizations must be at least 1, got {self.realizations}")
        for t in self.snapshot_times:
            if not 0 <= t <= self.t_max:
                raise ConfigError(
                    f"snapshot time must lie in [0, t_max={self.t_max}], got {t}"
                )
        if self.designated_cell is not None:
            m = 1 << self.n_g
            ig, jg = self.designated_cell
            if not (0 <= ig < m and 0 <= jg < m):
                raise ConfigError(
                    f"designated_cell must lie in [0, {m})^2, got ({ig}, {jg})"
                )
        if self.initial == "smile" and self.n_q < 4:
            raise ConfigError("lattice too small for smile (need n_q >= 4)")


def build_initial_smile(n_q: int) -> list[tuple[int, int]]:
    """Deterministic smile-shaped point set on the N x N lattice.

    Mouth: the lower half-disc of radius N/4 around the lattice center,
    fattened by one lattice unit.  Eyes: two 3-column blocks of height N/16
    centered at (N/2 +- N/8, 5N/8).  The shape itself is a convention; every
    quantitative check downstream is independent of it.
    """
    if n_q < 4:
        raise ValueError("lattice too small for smile (need n_q >= 4)")
    N = 1 << n_q
    c = N // 2
    reach = (N // 4 + 1) ** 2
    points = set()
    for i in range(N):
        for j in range(c + 1):
            if (i - c) ** 2 + (j - c) ** 2 <= reach:
                points.add((i, j))
    j0 = 5 * N // 8 - N // 32
    for cx in (c - N // 8, c + N // 8):
        for i in (cx - 1, cx, cx + 1):
            for j in range(j0, j0 + N // 16):
                points.add((i, j))
    return sorted(points)


def initial_support(config: ExperimentConfig) -> list[tuple[int, int]]:
    """Resolve the config's `initial` field to a concrete point list."""
    if config.initial == "smile":
        return build_initial_smile(config.n_q)
    try:
        points = load_points(config.initial)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    N = 1 << config.n_q
    for i, j in points:
        if not (0 <= i < N and 0 <= j < N):
            raise ConfigError(
                f"{config.initial}: point ({i}, {j}) outside the {N} x {N} lattice"
            )
    if not points:
        raise ConfigError(f"{config.initial}: empty initial distribution")
    return points


# --- config file grammar: one "key = value" per line, # comments ---

def _parse_int(val: str) -> int:
    try:
        return int(val)
    except ValueError:
        raise ValueError(f"expected an integer, got {val!r}") from None


def _parse_angle(val: str) -> float:
    if val.lower() == "pi":
        return math.pi
    try:
        return float(val)
    except ValueError:
        raise ValueError(f"expected a number or 'pi', got {val!r}") from None


def _parse_bool(val: str) -> bool:
    low = val.lower()
    if low in ("true", "false"):
        return low == "true"
    raise ValueError(f"expected 'true' or 'false', got {val!r}")


def _parse_opt_int(val: str) -> int | None:
    if val.lower() == "none":
        return None
    return _parse_int(val)


def _parse_times(val: str) -> tuple[int, ...]:
    if val.lower() == "none" or not val:
        return ()
    return tuple(_parse_int(part.strip()) for part in val.split(","))


def _parse_opt_str(val: str) -> str | None:
    return None if val.lower() == "none" else val


def _parse_cell(val: str) -> tuple[int, int] | None:
    if val.lower() == "none":
        return None
    parts = [p for p in val.replace(",", " ").split() if p]
    if len(parts) != 2:
        raise ValueError(f"expected 'i_g, j_g' or 'none', got {val!r}")
    return (_parse_int(parts[0]), _parse_int(parts[1]))


_PARSERS = {
    "n_q": _parse_int,
    "n_g": _parse_int,
    "t_max": _parse_int,
    "eps_phi": _parse_angle,
    "eps_amp": _parse_angle,
    "per_amplitude_phase": _parse_bool,
    "seed": _parse_int,
    "invert_at": _parse_opt_int,
    "realizations": _parse_int,
    "initial": str,
    "snapshot_times": _parse_times,
    "designated_cell": _parse_cell,
    "force_dense": _parse_bool,
    "output_dir": _parse_opt_str,
}

_REQUIRED_KEYS = ("n_q", "n_g", "t_max")


def parse_config_text(text: str, origin: str = "<config>") -> ExperimentConfig:
    """Parse the flat key = value grammar; errors carry origin:lineno."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _PARSERS:
            raise ConfigError(f"{origin}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{origin}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _PARSERS[key](val)
        except ValueError as exc:
            raise ConfigError(f"{origin}:{lineno}: {key}: {exc}") from None
    missing = [k for k in _REQUIRED_KEYS if k not in values]
    if missing:
        raise ConfigError(f"{origin}: missing required key(s): {', '.join(missing)}")
    config = ExperimentConfig(**values)
    config.validate()
    return config


def parse_config_file(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read(), origin=str(path))


def format_config(config: ExperimentConfig) -> str:
    """Canonical config-file text; parse_config_text inverts it exactly."""
    def fmt(value):
        if value is None:
            return "none"
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return "pi" if value == math.pi else repr(value)
        if isinstance(value, tuple):
            return ", ".join(str(v) for v in value) if value else "none"
        return str(value)

    lines = [f"{f.name} = {fmt(getattr(config, f.name))}" for f in fields(config)]
    return "\n".join(lines) + "\n"


# --- running ---

@dataclass
class RealizationResult:
    realization: int
    backend: str
    n_d: int
    designated_cell: tuple[int, int]
    records: list[MetricsRecord]
    snapshots: dict[int, CellGrid]


def _argmax_cell(grid: CellGrid) -> tuple[int, int]:
    ig, jg = np.unravel_index(int(np.argmax(grid.probs)), grid.probs.shape)
    return (int(ig), int(jg))


def run_realization(
    config: ExperimentConfig, realization: int = 0, iteration_hook=None
) -> RealizationResult:
    """One noisy trajectory with its noiseless reference, metrics per iteration.

    `iteration_hook(t, noisy, reference)`, when given, is called after the
    metrics of step t are recorded (and at t = 0); it must not mutate the
    states.
    """
    layout = RegisterLayout(config.n_q)
    support = initial_support(config)
    noise_config = NoiseConfig(
        eps_phi=config.eps_phi,
        eps_amp=config.eps_amp,
        per_amplitude_phase=config.per_amplitude_phase,
        seed=config.seed,
        realization_index=realization,
    )
    backend = "sparse" if noise_config.monomial_only and not config.force_dense else "dense"
    noisy = init_state(layout, support, backend=backend)
    reference = init_state(layout, support, backend="sparse")
    n_d = len(support)
    rng = noise_config.stream()

    forward = build_cat_iteration(layout)
    backward = invert_circuit(forward)

    if config.designated_cell is not None:
        cell = config.designated_cell
    else:
        cell = _argmax_cell(coarse_grain(reference, config.n_g))

    def record(t: int) -> MetricsRecord:
        q0 = zero_harmonic(noisy, workspace_tol=None)
        ref_w = coarse_grain(reference, config.n_g).cell(*cell)
        noisy_w = coarse_grain(noisy, config.n_g).cell(*cell)
        return MetricsRecord(
            t=t,
            f=fidelity(reference, noisy),
            fa=faithfulness(reference, noisy),
            q0_norm=abs(q0) * layout.N / math.sqrt(n_d),
            w_cell_norm=noisy_w / ref_w if ref_w >= 1e-30 else math.nan,
        )

    wanted = set(config.snapshot_times)
    records = [record(0)]
    snapshots: dict[int, CellGrid] = {}
    if 0 in wanted:
        snapshots[0] = coarse_grain(noisy, config.n_g)
    if iteration_hook is not None:
        iteration_hook(0, noisy, reference)

    for t in range(1, config.t_max + 1):
        circuit = forward if config.invert_at is None or t <= config.invert_at else backward
        for gate in circuit:
            noisy.apply_gate(noisy_gate(gate, noise_config, rng))
            if config.per_amplitude_phase:
                noisy.apply_per_amplitude_phase(rng)
            reference.apply_gate(gate)
        drift = abs(noisy.norm_sq() - 1.0)
        if drift > 1e-7:
            raise NumericalError(f"norm drift {drift:.3e} after iteration {t}")
        records.append(record(t))
        if t in wanted:
            snapshots[t] = coarse_grain(noisy, config.n_g)
        if iteration_hook is not None:
            iteration_hook(t, noisy, reference)

    return RealizationResult(
        realization=realization,
        backend=backend,
        n_d=n_d,
        designated_cell=cell,
        records=records,
        snapshots=snapshots,
    )


def _run_indexed(args) -> RealizationResult:
    config, k = args
    return run_realization(config, realization=k)


def _run_all(config: ExperimentConfig) -> list[RealizationResult]:
    if config.realizations == 1:
        return [run_realization(config, realization=0)]
    workers = min(config.realizations, os.cpu_count() or 1)
    jobs = [(config, k) for k in range(config.realizations)]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_indexed, jobs))


def _fmt_value(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "undefined"
    return repr(float(x))


def _write_metrics_csv(path, rows) -> None:
    """rows: iterable of (t, f, fa, q0_norm, w_cell_norm)."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(METRICS_HEADER + "\n")
        for t, f, fa, q0, w in rows:
            fh.write(f"{int(t)},{_fmt_value(f)},{_fmt_value(fa)},"
                     f"{_fmt_value(q0)},{_fmt_value(w)}\n")


def _record_rows(records) -> list[tuple]:
    return [(r.t, r.f, r.fa, r.q0_norm, r.w_cell_norm) for r in records]


def _mean_rows(results: list[RealizationResult]) -> list[tuple]:
    """Mean over realizations, column by column; NaN propagates (undefined)."""
    stack = np.array([[row[1:] for row in _record_rows(res.records)] for res in results])
    mean = stack.mean(axis=0)
    return [(res_t, *row) for res_t, row in zip((r.t for r in results[0].records), mean)]


def _write_grid_csv(path, grid: np.ndarray) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for row in grid:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def run_experiment(config: ExperimentConfig) -> Path:
    """Run all realizations and write the output file set; returns the out dir.

    Files: config.txt (resolved config), metrics_r<k>.csv per realization,
    metrics.csv (mean over realizations), and for each requested snapshot
    time t a snapshot_t<t>.csv (exact cell values, row = i_g, column = j_g)
    plus snapshot_t<t>.pgm (P2 grayscale, max cell mapped to 255).  Snapshots
    come from realization 0.
    """
    config.validate()
    if not config.output_dir:
        raise ConfigError("output_dir is required to run an experiment")
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(format_config(config), encoding="ascii")

    results = _run_all(config)
    for res in results:
        _write_metrics_csv(out / f"metrics_r{res.realization}.csv", _record_rows(res.records))
    _write_metrics_csv(out / "metrics.csv", _mean_rows(results))
    for t, grid in sorted(results[0].snapshots.items()):
        _write_grid_csv(out / f"snapshot_t{t}.csv", grid.probs)
        write_pgm(out / f"snapshot_t{t}.pgm", grid.probs)
    return out


def recipe(
    name: str, out_dir, seed: int = DEFAULT_SEED, realizations: int = 1
) -> list[ExperimentConfig]:
    """The config batch reproducing one of the three stock experiments.

    All batches use n_q=7, n_g=5, t_max=100 and the smile initial state;
    they differ in noise strengths, time inversion, and snapshots.
    """
    if name == "fig1-left":
        runs = [
            ("phi_0.05", {"eps_phi": 0.05}),
            ("phi_0.10", {"eps_phi": 0.1}),
            ("phi_0.30", {"eps_phi": 0.3}),
            ("phi_pi", {"eps_phi": math.pi}),
            ("phi_pi_amp_0.01", {"eps_phi": math.pi, "eps_amp": 0.01}),
        ]
    elif name == "fig1-right":
        runs = [
            ("phi_0.07", {"eps_phi": 0.07}),
            ("phi_0.20", {"eps_phi": 0.2}),
            ("phi_pi_cell", {"eps_phi": math.pi}),
        ]
    elif name == "fig2":
        snaps = {"invert_at": 50, "snapshot_times": (0, 50, 100)}
        runs = [
            ("phase_only", {"eps_phi": math.pi, **snaps}),
            ("phase_amp_0.30", {"eps_phi": math.pi, "eps_amp": 0.3, **snaps}),
        ]
    else:
        raise ConfigError(f"unknown recipe {name!r}; choose from: {', '.join(RECIPE_NAMES)}")
    configs = []
    for label, overrides in runs:
        config = ExperimentConfig(
            n_q=7,
            n_g=5,
            t_max=100,
            seed=seed,
            realizations=realizations,
            output_dir=str(Path(out_dir) / label),
            **overrides,
        )
        config.validate()
        configs.append(config)
    return configs


def run_verify(n_q: int, steps: int = 10, print_fn=print) -> bool:
    """Self-test of the circuit construction against exact integer arithmetic.

    Checks the modular adder truth table, `steps` iterations of lattice
    transport against the classical map, workspace cleanliness, and exact
    time reversal; reports the gate-count formula and its delta versus the
    nominal 16 n_q - 22 budget.  Returns True when everything passed.
    """
    from . import oracle
    from .state import SparseState

    if n_q < 2:
        raise ConfigError(f"n_q must be at least 2, got {n_q}")
    if steps < 1:
        raise ConfigError(f"steps must be at least 1, got {steps}")
    layout = RegisterLayout(n_q)
    N = layout.N
    ok = True

    def check(label: str, passed: bool, detail: str = ""):
        nonlocal ok
        ok = ok and passed
        suffix = f" ({detail})" if detail else ""
        print_fn(f"{'PASS' if passed else 'FAIL'} {label}{suffix}")

    def basis(i: int, j: int) -> SparseState:
        return SparseState(
            layout,
            np.array([layout.encode(i, j, 0)], dtype=np.int64),
            np.array([1.0 + 0.0j]),
        )

    from .circuits import build_modular_adder

    adder = build_modular_adder(layout, layout.x_qubits, layout.y_qubits, layout.work_qubits)
    if N * N <= 1024:
        pairs = [(a, b) for a in range(N) for b in range(N)]
        pair_note = f"all {len(pairs)} pairs"
    else:
        pick = np.random.default_rng(0)
        pairs = [(int(a), int(b)) for a, b in pick.integers(0, N, size=(256, 2))]
        pair_note = "256 sampled pairs"
    bad = 0
    for a, b in pairs:
        s = basis(a, b)
        for gate in adder:
            s.apply_gate(gate)
        expect = layout.encode(a, (a + b) % N, 0)
        if s.support_size() != 1 or int(s.indices[0]) != expect or abs(abs(s.amps[0]) - 1) > 1e-12:
            bad += 1
    check(f"modular adder matches (a + b) mod {N}", bad == 0, pair_note)

    support = [(i, (3 * i + 1) % N) for i in range(N)]
    state = init_state(layout, support, backend="sparse")
    dist = oracle.LatticeDistribution.from_points(support, N)
    circuit = build_cat_iteration(layout)
    worst = 0.0
    worst_leak = 0.0
    for _ in range(steps):
        for gate in circuit:
            state.apply_gate(gate)
        dist = oracle.iterate_distribution(dist, 1)
        worst = max(worst, float(np.abs(state.lattice_probabilities() - dist.probs).max()))
        worst_leak = max(worst_leak, state.work_error_probability())
    check(
        f"{steps} iterations match the classical map",
        worst <= 1e-12,
        f"max |p_quantum - p_classical| = {worst:.2e}",
    )
    check("workspace restored each iteration", worst_leak <= 1e-20, f"leak = {worst_leak:.2e}")

    inverse = invert_circuit(circuit)
    for _ in range(steps):
        for gate in inverse:
            state.apply_gate(gate)
    start = init_state(layout, support, backend="sparse")
    round_trip = fidelity(start, state)
    check("time reversal restores the state", abs(round_trip - 1.0) <= 1e-12,
          f"|<start|round trip>|^2 = {round_trip!r}")

    from .circuits import iteration_gate_total, nominal_gate_budget

    counts = circuit.gate_count()
    formula = iteration_gate_total(n_q)
    nominal = nominal_gate_budget(n_q)
    check("gate count matches 16 n_q - 18", counts.total == formula,
          f"{counts.toffoli} Toffoli + {counts.cnot} CNOT = {counts.total}")
    print_fn(
        f"gate budget: {counts.total} per iteration vs nominal {nominal} "
        f"(16 n_q - 22): delta {counts.total - nominal:+d} "
        "(the nominal count treats each CNOT-Toffoli-CNOT end block as one "
        "negated-control Toffoli)"
    )
    return ok
