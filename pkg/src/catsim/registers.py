"""Register layout and basis-index bookkeeping for the coordinate and workspace qubits."""

from __future__ import annotations


class RegisterLayout:
    """Qubit bookkeeping for two n_q-qubit coordinate registers plus workspace.

    Qubit 0 is the most significant bit of the global basis index.  The x
    register occupies qubits 0..n_q-1, the y register the next n_q qubits,
    and the n_q - 1 workspace qubits (carry scratch) sit in the least
    significant positions, so that

        index = (i << (2 n_q - 1)) | (j << (n_q - 1)) | w

    With this ordering the leading bits of each coordinate register are
    literally the high bits of i and j, which makes coarse-graining a plain
    bit shift.
    """

    def __init__(self, n_q: int):
        if n_q < 2:
            raise ValueError(f"n_q must be >= 2, got {n_q}")
        self.n_q = n_q
        self.N = 1 << n_q
        self.total_qubits = 3 * n_q - 1
        self.dim = 1 << self.total_qubits
        self.x_qubits = list(range(n_q))
        self.y_qubits = list(range(n_q, 2 * n_q))
        self.work_qubits = list(range(2 * n_q, 3 * n_q - 1))

    def bit_position(self, qubit: int) -> int:
        """Bit position of `qubit` in the integer basis index (qubit 0 = MSB)."""
        if not 0 <= qubit < self.total_qubits:
            raise ValueError(f"qubit index out of range: {qubit}")
        return self.total_qubits - 1 - qubit

    def encode(self, i: int, j: int, w: int = 0) -> int:
        """Basis index of lattice point (i, j) with workspace value w."""
        if not (0 <= i < self.N and 0 <= j < self.N):
            raise ValueError(f"lattice point out of range: ({i}, {j})")
        if not 0 <= w < (1 << (self.n_q - 1)):
            raise ValueError(f"workspace value out of range: {w}")
        return (i << (2 * self.n_q - 1)) | (j << (self.n_q - 1)) | w

    def decode(self, index: int) -> tuple[int, int, int]:
        """Inverse of encode: (i, j, w) of a basis index."""
        if not 0 <= index < self.dim:
            raise ValueError(f"basis index out of range: {index}")
        w_bits = self.n_q - 1
        w = index & ((1 << w_bits) - 1)
        j = (index >> w_bits) & (self.N - 1)
        i = index >> (w_bits + self.n_q)
        return i, j, w

    def __eq__(self, other):
        return isinstance(other, RegisterLayout) and other.n_q == self.n_q

    def __repr__(self):
        return f"RegisterLayout(n_q={self.n_q})"
