"""NOT, CNOT, Fredkin (doubly controlled NOT), CS^p and Walsh-Hadamard gates.

Qubits are addressed 1..width with qubit 1 most significant. Controlled
gates carry an explicit polarity per control: the gate fires when the
control qubit reads that value, so ``CNOT^0 = diag(NOT, I)`` fires on 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import reduce

import numpy as np

from . import kernels
from .register import DenseOperator, DomainError, QuantumRegister

_SQRT1_2 = 1.0 / np.sqrt(2.0)
NOT_MATRIX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
WALSH_MATRIX = np.array([[1, 1], [1, -1]], dtype=np.complex128) * _SQRT1_2


class GateKind(str, Enum):
    NOT = "NOT"
    CNOT = "CNOT"
    FREDKIN = "FREDKIN"
    CS = "CS"
    WALSH = "WALSH"


def s_matrix(p: int) -> np.ndarray:
    """The 2x2 state-generation block S^p."""
    if p < 1:
        raise DomainError(f"CS^p requires p >= 1, got {p}")
    c = np.sqrt((p - 1) / p)
    s = 1.0 / np.sqrt(p)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


@dataclass(frozen=True)
class GateOp:
    kind: GateKind
    target: int
    controls: tuple[int, ...] = ()
    polarities: tuple[int, ...] = ()
    p: int = 0

    def __post_init__(self):
        if len(self.controls) != len(self.polarities):
            raise DomainError("each control needs exactly one polarity")
        if len(self.controls) > 2:
            raise DomainError("at most two controls are supported")
        if self.target in self.controls or len(set(self.controls)) != len(self.controls):
            raise DomainError(f"qubit clash: target {self.target}, controls {self.controls}")
        if any(b not in (0, 1) for b in self.polarities):
            raise DomainError(f"polarities must be bits, got {self.polarities}")
        expected = {GateKind.NOT: 0, GateKind.WALSH: 0, GateKind.CNOT: 1,
                    GateKind.FREDKIN: 2, GateKind.CS: 1}[self.kind]
        if len(self.controls) != expected:
            raise DomainError(f"{self.kind.value} takes {expected} control(s)")
        if self.kind is GateKind.CS and self.p < 1:
            raise DomainError(f"CS^p requires p >= 1, got {self.p}")

    def block(self) -> np.ndarray:
        if self.kind is GateKind.CS:
            return s_matrix(self.p)
        if self.kind is GateKind.WALSH:
            return WALSH_MATRIX
        return NOT_MATRIX

    def __str__(self):
        name = self.kind.value
        if self.kind is GateKind.CS:
            name += f"^{self.p}"
        elif self.polarities:
            name += "^" + "".join(map(str, self.polarities))
        ctrl = ",".join(map(str, self.controls))
        return f"{name}[{ctrl}->{self.target}]" if ctrl else f"{name}[{self.target}]"


def _bit(width: int, q: int) -> int:
    if not 1 <= q <= width:
        raise DomainError(f"qubit {q} outside 1..{width}")
    return 1 << (width - q)


def apply_gate_inplace(amplitudes: np.ndarray, width: int, op: GateOp) -> None:
    target = _bit(width, op.target)
    ctrl_mask = ctrl_value = 0
    for q, b in zip(op.controls, op.polarities):
        bit = _bit(width, q)
        ctrl_mask |= bit
        if b:
            ctrl_value |= bit
    if op.kind in (GateKind.NOT, GateKind.CNOT, GateKind.FREDKIN):
        kernels.controlled_x(amplitudes, target, ctrl_mask, ctrl_value)
    else:
        u = op.block()
        kernels.controlled_u2(amplitudes, target, ctrl_mask, ctrl_value,
                              u[0, 0], u[0, 1], u[1, 0], u[1, 1])


def apply_gate(reg: QuantumRegister, op: GateOp) -> QuantumRegister:
    out = reg.copy()
    apply_gate_inplace(out.amplitudes, out.n_qubits, op)
    return out


def apply_not(reg: QuantumRegister, q: int) -> QuantumRegister:
    return apply_gate(reg, GateOp(GateKind.NOT, q))


def apply_cnot(reg: QuantumRegister, control: int, polarity: int, target: int) -> QuantumRegister:
    return apply_gate(reg, GateOp(GateKind.CNOT, target, (control,), (polarity,)))


def apply_fredkin(reg: QuantumRegister, c1: int, c2: int, polarities: tuple[int, int],
                  target: int) -> QuantumRegister:
    return apply_gate(reg, GateOp(GateKind.FREDKIN, target, (c1, c2), tuple(polarities)))


def apply_cs(reg: QuantumRegister, p: int, control: int, target: int) -> QuantumRegister:
    return apply_gate(reg, GateOp(GateKind.CS, target, (control,), (1,), p=p))


def apply_walsh(reg: QuantumRegister, q: int) -> QuantumRegister:
    return apply_gate(reg, GateOp(GateKind.WALSH, q))


def gate_matrix(op: GateOp, width: int) -> DenseOperator:
    """Full 2^width matrix of ``op`` assembled from Kronecker products."""
    for q in (op.target, *op.controls):
        _bit(width, q)
    eye = np.eye(2, dtype=np.complex128)
    proj = [np.diag([1.0, 0.0]).astype(np.complex128), np.diag([0.0, 1.0]).astype(np.complex128)]
    fired = []
    for q in range(1, width + 1):
        if q == op.target:
            fired.append(op.block())
        elif q in op.controls:
            fired.append(proj[op.polarities[op.controls.index(q)]])
        else:
            fired.append(eye)
    idle = [proj[op.polarities[op.controls.index(q)]] if q in op.controls else eye
            for q in range(1, width + 1)]
    fired_m = reduce(np.kron, fired)
    if not op.controls:
        return DenseOperator(fired_m)
    return DenseOperator(np.eye(1 << width) - reduce(np.kron, idle) + fired_m)
