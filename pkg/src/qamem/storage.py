"""Pattern sets and the two ways of loading them into a register.

``exclusion_superposition`` builds the uniform superposition over every basis
state *not* in the pattern set (the starting point of retrieval).
``store_patterns_gate_level`` runs the gate-level storage circuit on an
``x | g | c`` register of ``n + (n-1) + 2`` qubits and leaves the x register in
the uniform superposition over the patterns.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gates import GateKind, GateOp, apply_gate_inplace
from .register import DomainError, QuantumRegister, new_basis


@dataclass(frozen=True)
class PatternSet:
    n: int
    members: tuple[int, ...]

    def __init__(self, n: int, members: Iterable[int]):
        members = tuple(int(x) for x in members)
        if n < 1:
            raise DomainError(f"pattern length must be >= 1, got {n}")
        if not members:
            raise DomainError("pattern set is empty")
        if len(set(members)) != len(members):
            raise DomainError(f"duplicate patterns in {members}")
        for x in members:
            if not 0 <= x < (1 << n):
                raise DomainError(f"pattern {x} out of range for n={n} (must be < {1 << n})")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "members", members)

    @property
    def m(self) -> int:
        return len(self.members)

    @property
    def N(self) -> int:
        return 1 << self.n

    def z(self, p: int, j: int) -> int:
        """Bit j (1 = most significant) of pattern p (1-based); pattern m+1 is all zeros."""
        if not 1 <= j <= self.n:
            raise DomainError(f"bit index {j} outside 1..{self.n}")
        if p == self.m + 1:
            return 0
        if not 1 <= p <= self.m:
            raise DomainError(f"pattern index {p} outside 1..{self.m + 1}")
        return (self.members[p - 1] >> (self.n - j)) & 1

    def mask(self) -> np.ndarray:
        mask = np.zeros(self.N, dtype=np.uint8)
        mask[list(self.members)] = 1
        return mask

    def bitstrings(self) -> list[str]:
        return [format(x, f"0{self.n}b") for x in self.members]


@dataclass(frozen=True)
class StorageLayout:
    """Qubit labels of the x, g and c sub-registers inside one flat register."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"gate-level storage needs n >= 2, got {self.n}")

    @property
    def width(self) -> int:
        return 2 * self.n + 1

    def x(self, j: int) -> int:
        return j

    def g(self, k: int) -> int:
        return self.n + k

    @property
    def c1(self) -> int:
        return 2 * self.n

    @property
    def c2(self) -> int:
        return 2 * self.n + 1


def exclusion_superposition(patterns: PatternSet) -> QuantumRegister:
    if patterns.m >= patterns.N:
        raise DomainError("exclusion state is empty when every basis state is a pattern")
    amps = np.where(patterns.mask() == 0, 1.0 / np.sqrt(patterns.N - patterns.m), 0.0)
    return QuantumRegister(patterns.n, amps.astype(np.complex128))


def _check_p(patterns: PatternSet, p: int) -> None:
    if not 1 <= p <= patterns.m:
        raise DomainError(f"pattern index p={p} outside 1..{patterns.m}")


def flip_ops(patterns: PatternSet, p: int) -> list[GateOp]:
    """Move the active term from pattern p+1 to pattern p and raise c1 on it."""
    _check_p(patterns, p)
    lay = StorageLayout(patterns.n)
    ops = [
        GateOp(GateKind.CNOT, lay.x(j), (lay.c2,), (0,))
        for j in range(1, patterns.n + 1)
        if patterns.z(p, j) != patterns.z(p + 1, j)
    ]
    ops.append(GateOp(GateKind.CNOT, lay.c1, (lay.c2,), (0,)))
    return ops


def _match_ops(patterns: PatternSet, p: int) -> list[GateOp]:
    # g_{k-1} accumulates "x_1..x_k equal pattern p"
    lay = StorageLayout(patterns.n)
    ops = [GateOp(GateKind.FREDKIN, lay.g(1), (lay.x(1), lay.x(2)),
                  (patterns.z(p, 1), patterns.z(p, 2)))]
    for k in range(3, patterns.n + 1):
        ops.append(GateOp(GateKind.FREDKIN, lay.g(k - 1), (lay.x(k), lay.g(k - 2)),
                          (patterns.z(p, k), 1)))
    return ops


def save_ops(patterns: PatternSet, p: int) -> list[GateOp]:
    """Reset c1 on both pattern-p terms, then uncompute the g workspace."""
    _check_p(patterns, p)
    lay = StorageLayout(patterns.n)
    match = _match_ops(patterns, p)
    return [*match, GateOp(GateKind.CNOT, lay.c1, (lay.g(patterns.n - 1),), (1,)), *reversed(match)]


def storage_circuit(patterns: PatternSet) -> list[GateOp]:
    lay = StorageLayout(patterns.n)
    ops: list[GateOp] = []
    for p in range(patterns.m, 0, -1):
        ops += flip_ops(patterns, p)
        ops.append(GateOp(GateKind.CS, lay.c2, (lay.c1,), (1,), p=p))
        ops += save_ops(patterns, p)
    ops.append(GateOp(GateKind.NOT, lay.c2))
    return ops


def _run(reg: QuantumRegister, ops: Sequence[GateOp]) -> QuantumRegister:
    out = reg.copy()
    for op in ops:
        apply_gate_inplace(out.amplitudes, out.n_qubits, op)
    return out


def flip_step(reg: QuantumRegister, patterns: PatternSet, p: int) -> QuantumRegister:
    return _run(reg, flip_ops(patterns, p))


def save_step(reg: QuantumRegister, patterns: PatternSet, p: int) -> QuantumRegister:
    return _run(reg, save_ops(patterns, p))


def store_patterns_gate_level(patterns: PatternSet) -> QuantumRegister:
    lay = StorageLayout(patterns.n)
    return _run(new_basis(lay.width, 0), storage_circuit(patterns))


def split_x_register(reg: QuantumRegister, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Schmidt-decompose a storage register across the x | (g, c) cut.

    Returns ``(x_state, ancilla_state, schmidt_coefficients)``; the first two are
    the leading Schmidt vectors, phased so the largest x amplitude is real positive.
    """
    lay = StorageLayout(n)
    if reg.n_qubits != lay.width:
        raise DomainError(f"expected a {lay.width}-qubit storage register, got {reg.n_qubits}")
    mat = reg.amplitudes.reshape(1 << n, 1 << (n + 1))
    u, s, vh = np.linalg.svd(mat)
    k = np.argmax(np.abs(u[:, 0]))
    phase = u[k, 0] / abs(u[k, 0])
    return u[:, 0] / phase, vh[0] * phase, s


def parse_patterns(text: str, n: int | None = None) -> PatternSet:
    """Parse one pattern per line: a bit-string (``0010``) or ``#<index>``.

    Blank lines and lines starting with ``;`` are ignored.
    """
    bits: list[tuple[int, str]] = []
    indices: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        if line.startswith("#"):
            try:
                indices.append(int(line[1:]))
            except ValueError:
                raise DomainError(f"line {lineno}: bad index {line!r}") from None
            bits.append((lineno, ""))
        elif set(line) <= {"0", "1"}:
            bits.append((lineno, line))
            indices.append(int(line, 2))
        else:
            raise DomainError(f"line {lineno}: expected a bit-string or #index, got {line!r}")
    widths = {len(b) for _, b in bits if b}
    if n is None:
        if len(widths) != 1:
            raise DomainError("cannot infer pattern length; give n or use bit-strings of one length")
        n = widths.pop()
    for lineno, b in bits:
        if b and len(b) != n:
            raise DomainError(f"line {lineno}: bit-string {b!r} has length {len(b)}, expected {n}")
    return PatternSet(n, indices)
