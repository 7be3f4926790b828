"""Hamming distance and binomial distributed-query amplitude profiles."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .register import DomainError, QuantumRegister


def hamming(x: int, y: int) -> int:
    return (int(x) ^ int(y)).bit_count()


def hamming_row(n: int, center: int) -> np.ndarray:
    """Hamming distance from ``center`` to every basis index 0..2^n-1."""
    idx = np.arange(1 << n, dtype=np.int64) ^ center
    dist = np.zeros(1 << n, dtype=np.int64)
    for _ in range(n):
        dist += idx & 1
        idx >>= 1
    return dist


@dataclass(frozen=True, eq=False)
class QueryDistribution:
    n: int
    amplitudes: np.ndarray
    centers: tuple[tuple[int, float], ...]

    @property
    def k(self) -> int:
        return len(self.centers)

    @property
    def center_indices(self) -> tuple[int, ...]:
        return tuple(b for b, _ in self.centers)

    def as_register(self) -> QuantumRegister:
        return QuantumRegister(self.n, self.amplitudes.astype(np.complex128))


def _check_width(a: float) -> float:
    a = float(a)
    if not 0.0 < a < 0.5:
        raise DomainError(f"a must lie in (0, 1/2), got {a}")
    return a


def _binomial_weights(n: int, center: int, a: float) -> np.ndarray:
    d = hamming_row(n, center)
    return a**d * (1.0 - a) ** (n - d)


def single_center_query(n: int, center: int, a: float) -> QueryDistribution:
    return multi_center_query(n, [(center, a)])


def multi_center_query(n: int, centers: Sequence[tuple[int, float]]) -> QueryDistribution:
    """Square root of the equal-weight mixture of binomial profiles, one per center."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not centers:
        raise DomainError("query needs at least one center")
    checked = []
    for b, a in centers:
        b = int(b)
        if not 0 <= b < (1 << n):
            raise DomainError(f"center {b} out of range for n={n} (must be < {1 << n})")
        checked.append((b, _check_width(a)))
    if len({b for b, _ in checked}) != len(checked):
        raise DomainError("query centers must be distinct")
    # sort so the floating-point sum does not depend on list order
    total = sum(_binomial_weights(n, b, a) for b, a in sorted(checked))
    amps = np.sqrt(total / len(checked))
    return QueryDistribution(n, amps, tuple(checked))


def pattern_query(patterns, a_prime: float) -> QueryDistribution:
    """Multi-center query with one center per stored pattern, all of width ``a_prime``."""
    return multi_center_query(patterns.n, [(b, a_prime) for b in patterns.members])
