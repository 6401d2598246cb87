"""Qubit-register simulation of the discretized Arnold cat map.

The map is realized as a reversible circuit of Toffoli and CNOT gates (two
modular additions per iteration), run either noiselessly or through
configurable phase/amplitude gate-noise models, with fidelity,
faithfulness, harmonic, and coarse-grained cell readout.
"""

from .circuits import (
    Circuit,
    GateCounts,
    build_cat_iteration,
    build_modular_adder,
    invert_circuit,
    iteration_gate_total,
    nominal_gate_budget,
    zero_harmonic,
)
from .gates import EXCHANGE, GateInstance, cnot, toffoli, x_gate
from .harness import (
    DEFAULT_SEED,
    ConfigError,
    ExperimentConfig,
    RealizationResult,
    build_initial_smile,
    initial_support,
    parse_config_file,
    parse_config_text,
    format_config,
    recipe,
    run_experiment,
    run_realization,
    run_verify,
)
from .metrics import (
    CellGrid,
    MetricsRecord,
    coarse_grain,
    faithfulness,
    fidelity,
    sample_cells,
)
from .noise import (
    NoiseConfig,
    amplitude_perturb,
    noisy_gate,
    phase_perturb,
    rng_stream,
)
from .registers import RegisterLayout
from .state import DenseState, NumericalError, SparseState, init_state

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "GateCounts",
    "build_cat_iteration",
    "build_modular_adder",
    "invert_circuit",
    "iteration_gate_total",
    "nominal_gate_budget",
    "zero_harmonic",
    "EXCHANGE",
    "GateInstance",
    "cnot",
    "toffoli",
    "x_gate",
    "DEFAULT_SEED",
    "ConfigError",
    "ExperimentConfig",
    "RealizationResult",
    "build_initial_smile",
    "initial_support",
    "parse_config_file",
    "parse_config_text",
    "format_config",
    "recipe",
    "run_experiment",
    "run_realization",
    "run_verify",
    "CellGrid",
    "MetricsRecord",
    "coarse_grain",
    "faithfulness",
    "fidelity",
    "sample_cells",
    "NoiseConfig",
    "amplitude_perturb",
    "noisy_gate",
    "phase_perturb",
    "rng_stream",
    "RegisterLayout",
    "DenseState",
    "NumericalError",
    "SparseState",
    "init_state",
    "__version__",
]
