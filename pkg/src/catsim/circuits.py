"""Reversible circuits for one step of the cat map.

One iteration of the map (i, j) -> ((2i + j) mod N, (i + j) mod N) is two
in-place modular additions on the x and y registers:

    y += x  (mod N)   then   x += y  (mod N)

i.e. (i, j) -> (i, i + j) -> (2i + j, i + j), all mod N = 2^n_q.  Each
addition is a ripple-carry adder built from Toffoli and CNOT gates with the
final carry discarded, which is exactly addition mod 2^n.  The work register
holds the carry chain and is returned to |0> by the uncompute half, so the
circuit is a permutation of the lattice basis states.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .gates import GateInstance, cnot, toffoli
from .registers import RegisterLayout


class GateCounts(NamedTuple):
    toffoli: int
    cnot: int
    total: int


@dataclass
class Circuit:
    """An ordered list of gates acting on a fixed register layout."""

    layout: RegisterLayout
    gates: list[GateInstance] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[GateInstance]:
        return iter(self.gates)

    def gate_count(self) -> GateCounts:
        t = sum(1 for g in self.gates if len(g.controls) == 2)
        c = sum(1 for g in self.gates if len(g.controls) == 1)
        return GateCounts(toffoli=t, cnot=c, total=len(self.gates))

    def to_text(self) -> str:
        """One gate per line, e.g. ``TOFFOLI 1 3 4`` or ``CNOT 0 2``."""
        lines = []
        for g in self.gates:
            parts = [g.kind, *map(str, g.controls), str(g.target)]
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"


def build_modular_adder(layout: RegisterLayout, src, dst, work) -> Circuit:
    """In-place ripple-carry adder: |a>|b> -> |a>|a + b mod 2^n>.

    `src` and `dst` are n-qubit registers (most significant qubit first, the
    register convention everywhere in this package), `work` is n-1 qubits of
    zeroed carry space.  Dropping the carry out of the top bit gives addition
    mod 2^n for free; the backward sweep restores the carries to zero.
    """
    n = len(src)
    if len(dst) != n:
        raise ValueError(f"register size mismatch: src has {n} qubits, dst has {len(dst)}")
    if len(work) != n - 1:
        raise ValueError(f"register size mismatch: work needs {n - 1} qubits, got {len(work)}")
    if n < 2:
        raise ValueError("adder needs registers of at least 2 qubits")
    everything = list(src) + list(dst) + list(work)
    if len(set(everything)) != len(everything):
        raise ValueError("registers overlap")

    # Work bit-by-bit from the least significant end.  c[k] carries into
    # bit k; there is no carry into bit 0 and the carry out of the top bit
    # is never computed (mod-2^n arithmetic).
    a = list(reversed(src))
    b = list(reversed(dst))
    c = [None] + list(reversed(work))

    gates: list[GateInstance] = []

    # Forward sweep: compute carries, fold each a_k into b_k.
    gates.append(toffoli(a[0], b[0], c[1]))
    gates.append(cnot(a[0], b[0]))
    for k in range(1, n - 1):
        gates.append(toffoli(a[k], b[k], c[k + 1]))
        gates.append(cnot(a[k], b[k]))
        gates.append(toffoli(c[k], b[k], c[k + 1]))

    # Top bit: just the sum, no carry out.
    gates.append(cnot(a[n - 1], b[n - 1]))
    gates.append(cnot(c[n - 1], b[n - 1]))

    # Backward sweep: uncompute the carries.  Each step needs b_k restored to
    # a_k XOR b_k before the Toffolis can be undone, hence the CNOT shuffle.
    for k in range(n - 2, 0, -1):
        gates.append(toffoli(c[k], b[k], c[k + 1]))
        gates.append(cnot(a[k], b[k]))
        gates.append(toffoli(a[k], b[k], c[k + 1]))
        gates.append(cnot(a[k], b[k]))
        gates.append(cnot(c[k], b[k]))
    gates.append(cnot(a[0], b[0]))
    gates.append(toffoli(a[0], b[0], c[1]))
    gates.append(cnot(a[0], b[0]))

    return Circuit(layout=layout, gates=gates)


def build_cat_iteration(layout: RegisterLayout) -> Circuit:
    """One full cat-map step: y += x, then x += y (both mod N)."""
    first = build_modular_adder(layout, layout.x_qubits, layout.y_qubits, layout.work_qubits)
    second = build_modular_adder(layout, layout.y_qubits, layout.x_qubits, layout.work_qubits)
    return Circuit(layout=layout, gates=first.gates + second.gates)


def invert_circuit(circuit: Circuit) -> Circuit:
    """Exact inverse: every gate is self-inverse, so just reverse the order."""
    return Circuit(layout=circuit.layout, gates=list(reversed(circuit.gates)))


def adder_gate_total(n: int) -> int:
    """Gate count of one modular adder on n-qubit registers: 8n - 9."""
    return 8 * n - 9


def iteration_gate_total(n_q: int) -> int:
    """Gate count of one cat-map iteration (two adders): 16 n_q - 18."""
    return 16 * n_q - 18


def nominal_gate_budget(n_q: int) -> int:
    """Budget of 16 n_q - 22 obtained when each adder's final CNOT-Toffoli-CNOT
    block is counted as one gate (it equals a Toffoli with a negated control).
    The as-built circuit uses 4 more two-qubit/three-qubit gates per iteration
    because it spells that block out in plain Toffoli/CNOT gates."""
    return 16 * n_q - 22


def zero_harmonic(state, workspace_tol: float | None = 1e-9) -> complex:
    """Fourier zero mode Q_0 = (1/N) * sum_ij a_ij of the lattice amplitudes.

    Only the workspace-|0> slice carries lattice meaning.  With the default
    tolerance a dirty workspace raises; pass ``workspace_tol=None`` to project
    onto the workspace-|0> slice regardless (appropriate under amplitude
    noise, where small leakage is the object of study).
    """
    if workspace_tol is not None:
        leak = state.work_error_probability()
        if leak > workspace_tol:
            raise ValueError(f"workspace not cleared: P(w != 0) = {leak:.3e}")
    return complex(state.lattice_amplitudes().sum() / state.layout.N)
