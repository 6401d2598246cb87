"""Dense and sparse statevector backends.

The sparse backend stores only the occupied basis states and handles
monomial gates exactly (a permutation with phases), so runs whose gates are
all monomial cost O(support) per gate instead of O(2^qubits).  The dense
backend holds the full amplitude vector and accepts arbitrary 2x2 blocks.
Neither backend ever renormalizes: unitarity is asserted by callers, not
enforced, so noise-model bugs surface as norm drift.
"""

from __future__ import annotations

import math

import numpy as np

from .gates import GateInstance
from .registers import RegisterLayout


class NumericalError(RuntimeError):
    """A numerical invariant was violated mid-run (e.g. norm drift)."""


def init_state(layout: RegisterLayout, support, backend: str = "sparse"):
    """Uniform superposition 1/sqrt(N_d) over the given lattice points, workspace |0>.

    `support` is an iterable of (i, j) points; duplicates are collapsed.
    """
    points = list(support)
    if not points:
        raise ValueError("empty initial distribution")
    indices = sorted({layout.encode(i, j, 0) for i, j in points})
    amp = 1.0 / math.sqrt(len(indices))
    if backend == "sparse":
        return SparseState(
            layout,
            np.array(indices, dtype=np.int64),
            np.full(len(indices), amp, dtype=complex),
        )
    if backend == "dense":
        amps = np.zeros(layout.dim, dtype=complex)
        amps[np.array(indices, dtype=np.int64)] = amp
        return DenseState(layout, amps)
    raise ValueError(f"unknown backend: {backend!r}")


def _check_gate(gate: GateInstance, layout: RegisterLayout):
    for q in gate.qubits():
        if not 0 <= q < layout.total_qubits:
            raise ValueError(f"gate qubit out of range: {q}")


def _control_mask(layout: RegisterLayout, controls) -> int:
    mask = 0
    for c in controls:
        mask |= 1 << layout.bit_position(c)
    return mask


class SparseState:
    """Occupied basis indices with their amplitudes (monomial gates only)."""

    backend = "sparse"

    def __init__(self, layout: RegisterLayout, indices, amps):
        self.layout = layout
        self.indices = np.asarray(indices, dtype=np.int64)
        self.amps = np.asarray(amps, dtype=complex)
        if self.indices.shape != self.amps.shape:
            raise ValueError("indices and amplitudes must have the same length")

    def copy(self) -> "SparseState":
        return SparseState(self.layout, self.indices.copy(), self.amps.copy())

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def support_size(self) -> int:
        return int(self.indices.size)

    def apply_gate(self, gate: GateInstance) -> None:
        """Apply a monomial gate in place; anything else needs the dense backend."""
        _check_gate(gate, self.layout)
        b = gate.block
        anti = b[0, 0] == 0 and b[1, 1] == 0
        if not anti and not (b[0, 1] == 0 and b[1, 0] == 0):
            raise ValueError("sparse backend supports only monomial gates; use the dense backend")
        tmask = 1 << self.layout.bit_position(gate.target)
        cmask = _control_mask(self.layout, gate.controls)
        if cmask:
            sel = np.flatnonzero((self.indices & cmask) == cmask)
            if sel.size == 0:
                return
            t1 = (self.indices[sel] & tmask) != 0
            if anti:
                self.indices[sel] ^= tmask
                if b[0, 1] != 1.0 or b[1, 0] != 1.0:
                    self.amps[sel] *= np.where(t1, b[0, 1], b[1, 0])
            elif b[0, 0] != 1.0 or b[1, 1] != 1.0:
                self.amps[sel] *= np.where(t1, b[1, 1], b[0, 0])
        else:
            t1 = (self.indices & tmask) != 0
            if anti:
                self.indices ^= tmask
                if b[0, 1] != 1.0 or b[1, 0] != 1.0:
                    self.amps *= np.where(t1, b[0, 1], b[1, 0])
            elif b[0, 0] != 1.0 or b[1, 1] != 1.0:
                self.amps *= np.where(t1, b[1, 1], b[0, 0])

    def apply_per_amplitude_phase(self, rng) -> None:
        """Multiply every occupied amplitude by an independent uniform phase in [-pi, pi].

        Draws are consumed in increasing basis-index order so that sparse and
        dense backends fed the same generator stay identical.
        """
        order = np.argsort(self.indices)
        theta = rng.uniform(-math.pi, math.pi, size=order.size)
        self.amps[order] *= np.exp(1j * theta)

    def to_dense(self) -> "DenseState":
        amps = np.zeros(self.layout.dim, dtype=complex)
        amps[self.indices] = self.amps
        return DenseState(self.layout, amps)

    def lattice_amplitudes(self) -> np.ndarray:
        """N x N array of the workspace-|0> amplitudes a_ij."""
        lay = self.layout
        w_bits = lay.n_q - 1
        keep = (self.indices & ((1 << w_bits) - 1)) == 0
        ij = self.indices[keep] >> w_bits
        out = np.zeros((lay.N, lay.N), dtype=complex)
        out[ij >> lay.n_q, ij & (lay.N - 1)] = self.amps[keep]
        return out

    def lattice_probabilities(self) -> np.ndarray:
        """N x N array of |a_ij|^2 with the workspace register summed out."""
        lay = self.layout
        ij = self.indices >> (lay.n_q - 1)
        flat = np.bincount(ij, weights=np.abs(self.amps) ** 2, minlength=lay.N * lay.N)
        return flat.reshape(lay.N, lay.N)

    def work_error_probability(self) -> float:
        """Probability of finding the workspace register away from |0>."""
        lay = self.layout
        bad = (self.indices & ((1 << (lay.n_q - 1)) - 1)) != 0
        if not bad.any():
            return 0.0
        return float(np.sum(np.abs(self.amps[bad]) ** 2))


class DenseState:
    """Full 2^(3 n_q - 1) amplitude vector; accepts arbitrary 2x2 blocks."""

    backend = "dense"

    def __init__(self, layout: RegisterLayout, amps):
        self.layout = layout
        self.amps = np.asarray(amps, dtype=complex)
        if self.amps.shape != (layout.dim,):
            raise ValueError(
                f"amplitude vector must have length {layout.dim}, got {self.amps.shape}"
            )

    def copy(self) -> "DenseState":
        return DenseState(self.layout, self.amps.copy())

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def support_size(self) -> int:
        return int(np.count_nonzero(self.amps))

    def apply_gate(self, gate: GateInstance) -> None:
        _check_gate(gate, self.layout)
        n = self.layout.total_qubits
        view = self.amps.reshape((2,) * n)
        base: list = [slice(None)] * n
        for c in gate.controls:
            base[c] = 1
        i0 = list(base)
        i0[gate.target] = 0
        i0 = tuple(i0)
        i1 = list(base)
        i1[gate.target] = 1
        i1 = tuple(i1)
        b = gate.block
        if b[0, 0] == 0 and b[1, 1] == 0:
            # X-type block: swap the two target slices (they are disjoint).
            s0 = view[i0].copy()
            view[i0] = view[i1] if b[0, 1] == 1.0 else b[0, 1] * view[i1]
            view[i1] = s0 if b[1, 0] == 1.0 else b[1, 0] * s0
        else:
            s0 = view[i0].copy()
            s1 = view[i1].copy()
            view[i0] = b[0, 0] * s0 + b[0, 1] * s1
            view[i1] = b[1, 0] * s0 + b[1, 1] * s1

    def apply_per_amplitude_phase(self, rng) -> None:
        """Uniform random phase on every nonzero amplitude, in basis-index order."""
        nz = np.flatnonzero(self.amps)
        theta = rng.uniform(-math.pi, math.pi, size=nz.size)
        self.amps[nz] *= np.exp(1j * theta)

    def to_dense(self) -> "DenseState":
        return self

    def lattice_amplitudes(self) -> np.ndarray:
        lay = self.layout
        return self.amps.reshape(lay.N, lay.N, -1)[:, :, 0].copy()

    def lattice_probabilities(self) -> np.ndarray:
        lay = self.layout
        return (np.abs(self.amps) ** 2).reshape(lay.N, lay.N, -1).sum(axis=2)

    def work_error_probability(self) -> float:
        lay = self.layout
        p = (np.abs(self.amps) ** 2).reshape(lay.N * lay.N, -1)
        return float(p[:, 1:].sum())


QuantumState = SparseState | DenseState
