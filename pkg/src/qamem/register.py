"""Dense state-vector register.

Basis convention: qubits are labelled 1..n and qubit 1 is the most
significant bit, so ``|x1 ... xn>`` is the integer ``x1*2**(n-1) + ... + xn``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels

NORM_TOL = 1e-9


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


@dataclass
class QuantumRegister:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise DomainError(f"n_qubits must be >= 1, got {self.n_qubits}")
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n_qubits,):
            raise DomainError(
                f"expected {1 << self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got shape {amps.shape}"
            )
        self.amplitudes = amps

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def copy(self) -> QuantumRegister:
        return QuantumRegister(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def bitstring(self, x: int) -> str:
        return format(x, f"0{self.n_qubits}b")


@dataclass(frozen=True)
class DenseOperator:
    """Explicit matrix of an operator; unitarity is checked on construction."""

    entries: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.entries, dtype=np.complex128)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DomainError(f"operator must be square, got shape {u.shape}")
        if not np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=NORM_TOL, rtol=0):
            raise DomainError("operator is not unitary")
        object.__setattr__(self, "entries", u)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _check_index(n: int, x: int) -> int:
    x = int(x)
    if not 0 <= x < (1 << n):
        raise DomainError(f"basis index {x} out of range for {n} qubits")
    return x


def new_basis(n: int, x: int = 0) -> QuantumRegister:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[_check_index(n, x)] = 1.0
    return QuantumRegister(n, amps)


def uniform_superposition(n: int) -> QuantumRegister:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    dim = 1 << n
    return QuantumRegister(n, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


def membership_mask(n: int, indices: Iterable[int]) -> np.ndarray:
    mask = np.zeros(1 << n, dtype=np.uint8)
    for x in indices:
        mask[_check_index(n, x)] = 1
    return mask


def probability_of_set(reg: QuantumRegister, indices: Iterable[int]) -> float:
    """Probability that measuring ``reg`` yields one of ``indices``."""
    mask = membership_mask(reg.n_qubits, indices)
    return kernels.set_probability(reg.amplitudes, mask)


def apply_dense(reg: QuantumRegister, op: DenseOperator) -> QuantumRegister:
    if op.dim != reg.dim:
        raise DomainError(f"operator dimension {op.dim} does not match register dimension {reg.dim}")
    return QuantumRegister(reg.n_qubits, op.entries @ reg.amplitudes)


def measure(reg: QuantumRegister, rng_seed: int | None = None) -> int:
    """Sample one basis index with probability |a_x|^2."""
    return int(sample(reg, 1, rng_seed)[0])


def sample(reg: QuantumRegister, shots: int, rng_seed: int | None = None) -> np.ndarray:
    probs = reg.probabilities()
    probs = probs / probs.sum()
    rng = np.random.default_rng(rng_seed)
    return rng.choice(reg.dim, size=shots, p=probs)
