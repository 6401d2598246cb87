"""Gate-level noise models.

Both models perturb the ideal 2x2 exchange block X = [[0, 1], [1, 0]] that
every CNOT/Toffoli applies to its target.

Phase noise multiplies X on the left by diag(e^{i theta_1}, e^{i theta_2})
with theta_k ~ U[-eps_phi, eps_phi], giving

    [[0,           e^{i theta_1}],
     [e^{i theta_2}, 0          ]].

The result is still monomial, so phase-only runs stay on the sparse backend.

Amplitude noise perturbs the eigenvalues of X instead: the +1 eigenvalue
becomes e^{i eta_1} and the -1 eigenvalue becomes -e^{i eta_2}, with
eta_k ~ U(-eps_amp, eps_amp).  In the computational basis that is

    (1/2) * [[p - q, p + q],
             [p + q, p - q]],   p = e^{i eta_1}, q = e^{i eta_2},

which is generally not monomial and forces the dense backend.

Two fresh draws are consumed per noisy gate per model, in the order the
gates appear in the circuit, so a run is reproducible from (seed,
realization_index) alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gates import EXCHANGE, GateInstance


def rng_stream(seed: int, realization_index: int = 0) -> np.random.Generator:
    """Independent generator for one noise realization of one experiment."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(realization_index,)))


@dataclass(frozen=True)
class NoiseConfig:
    """Noise strengths plus the seed material identifying one realization."""

    eps_phi: float = 0.0
    eps_amp: float = 0.0
    per_amplitude_phase: bool = False
    seed: int = 0
    realization_index: int = 0

    def __post_init__(self):
        if not 0.0 <= self.eps_phi <= math.pi:
            raise ValueError(f"eps_phi must lie in [0, pi], got {self.eps_phi}")
        if not 0.0 <= self.eps_amp <= math.pi:
            raise ValueError(f"eps_amp must lie in [0, pi], got {self.eps_amp}")

    @property
    def monomial_only(self) -> bool:
        """True when every noisy gate stays monomial (sparse backend suffices)."""
        return self.eps_amp == 0.0

    def stream(self) -> np.random.Generator:
        return rng_stream(self.seed, self.realization_index)


def _require_exchange(gate: GateInstance):
    if not np.array_equal(gate.block, EXCHANGE):
        raise ValueError("noise models are defined on the ideal exchange block")


def phase_perturb(gate: GateInstance, eps_phi: float, rng) -> GateInstance:
    """Left-multiply the gate's exchange block by a random diagonal phase pair."""
    if eps_phi == 0.0:
        return gate
    _require_exchange(gate)
    theta = rng.uniform(-eps_phi, eps_phi, size=2)
    block = np.exp(1j * theta)[:, None] * gate.block
    return GateInstance(controls=gate.controls, target=gate.target, block=block)


def amplitude_perturb(gate: GateInstance, eps_amp: float, rng) -> GateInstance:
    """Randomly dephase the two eigenvalues of the gate's exchange block."""
    if eps_amp == 0.0:
        return gate
    _require_exchange(gate)
    eta = rng.uniform(-eps_amp, eps_amp, size=2)
    p = np.exp(1j * eta[0])
    q = np.exp(1j * eta[1])
    block = 0.5 * np.array([[p - q, p + q], [p + q, p - q]])
    return GateInstance(controls=gate.controls, target=gate.target, block=block)


def noisy_gate(gate: GateInstance, config: NoiseConfig, rng) -> GateInstance:
    """One noisy copy of `gate`: amplitude perturbation first, then phase.

    The phase factor is applied by scaling the rows of the (possibly already
    perturbed) block directly, so that a phase-only gate keeps its exact
    zero entries and remains monomial.
    """
    out = gate
    if config.eps_amp > 0.0:
        out = amplitude_perturb(out, config.eps_amp, rng)
    if config.eps_phi > 0.0:
        if out is gate:
            return phase_perturb(gate, config.eps_phi, rng)
        theta = rng.uniform(-config.eps_phi, config.eps_phi, size=2)
        block = np.exp(1j * theta)[:, None] * out.block
        out = GateInstance(controls=gate.controls, target=gate.target, block=block)
    return out
