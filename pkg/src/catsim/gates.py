"""X-family gate instances: NOT, CNOT, Toffoli and their perturbed blocks."""

from __future__ import annotations

import numpy as np

# Ideal block of every gate used by the map circuits: exchange of |0> and |1>.
EXCHANGE = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
EXCHANGE.setflags(write=False)


class GateInstance:
    """A 2x2 unitary applied to `target` when all `controls` read 1.

    `is_monomial` is true when the block has exactly one nonzero entry per
    row and column (a permutation with phases).  Such gates map basis states
    to single basis states and leave amplitude magnitudes untouched, which
    is what the sparse backend exploits.
    """

    __slots__ = ("controls", "target", "block", "is_monomial")

    def __init__(self, controls, target, block):
        controls = tuple(int(c) for c in controls)
        if len(controls) > 2:
            raise ValueError(f"at most 2 controls supported, got {len(controls)}")
        qubits = controls + (int(target),)
        if len(set(qubits)) != len(qubits):
            raise ValueError(
                f"duplicate qubit index in gate: controls={controls}, target={target}"
            )
        block = np.array(block, dtype=complex)
        if block.shape != (2, 2):
            raise ValueError(f"gate block must be 2x2, got shape {block.shape}")
        if not np.allclose(block @ block.conj().T, np.eye(2), atol=1e-12):
            raise ValueError("gate block is not unitary")
        block.setflags(write=False)
        self.controls = controls
        self.target = int(target)
        self.block = block
        self.is_monomial = bool(
            np.count_nonzero(block[0]) == 1
            and np.count_nonzero(block[1]) == 1
            and np.count_nonzero(block[:, 0]) == 1
            and np.count_nonzero(block[:, 1]) == 1
        )

    @property
    def kind(self) -> str:
        return ("X", "CNOT", "TOFFOLI")[len(self.controls)]

    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)

    def __eq__(self, other):
        return (
            isinstance(other, GateInstance)
            and self.controls == other.controls
            and self.target == other.target
            and np.array_equal(self.block, other.block)
        )

    def __repr__(self):
        return f"GateInstance({self.kind} {' '.join(map(str, self.qubits()))})"


def x_gate(target: int) -> GateInstance:
    return GateInstance((), target, EXCHANGE)


def cnot(control: int, target: int) -> GateInstance:
    return GateInstance((control,), target, EXCHANGE)


def toffoli(control_a: int, control_b: int, target: int) -> GateInstance:
    return GateInstance((control_a, control_b), target, EXCHANGE)
