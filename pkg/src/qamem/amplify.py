"""Reflection operators and iteration schedules for distributed-query retrieval.

The operators act on amplitudes directly:

* oracle      ``a <- a - 2 q <q|a>``   (reflection about the query, ``I - 2|q><q|``)
* diffusion   ``a <- 2 m <m|a> - a``   (reflection about the exclusion state)
* I_M, C1     phase flip of the stored patterns
* I_M, C2     oracle-style reflection about a query centred on every pattern

``operator_matrix`` builds the same operators as explicit matrices from outer
products; it is the reference path the tests compare against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from . import kernels
from .query import QueryDistribution, pattern_query
from .register import DenseOperator, DomainError, QuantumRegister
from .storage import PatternSet, exclusion_superposition

if TYPE_CHECKING:
    from .memory import ProbabilityTrace, RetrievalConfig

DEFAULT_ALPHA_MAX = 10
DEFAULT_INT_TOL = 0.1
DEFAULT_MAX_ITERS = 30


class Method(str, Enum):
    EZHOV = "Ezhov"
    C1 = "C1"
    C2 = "C2"

    @classmethod
    def parse(cls, value) -> Method:
        if isinstance(value, cls):
            return value
        for m in cls:
            if str(value).strip().lower() == m.value.lower():
                return m
        raise DomainError(f"method must be one of Ezhov, C1, C2; got {value!r}")


@dataclass(frozen=True)
class ImVariant:
    tag: Method
    c2_query: QueryDistribution | None = None

    def __post_init__(self):
        if self.tag is Method.EZHOV:
            raise DomainError("I_M variant must be C1 or C2")
        if self.tag is Method.C2 and self.c2_query is None:
            raise DomainError("C2 variant requires a pattern-centred query")

    @classmethod
    def c1(cls) -> ImVariant:
        return cls(Method.C1)

    @classmethod
    def c2(cls, patterns: PatternSet, a_prime: float) -> ImVariant:
        return cls(Method.C2, pattern_query(patterns, a_prime))


@dataclass(frozen=True)
class ScheduleParams:
    B: float
    omega: float
    T: float
    alpha: int
    lam: int

    @property
    def fractional_distance(self) -> float:
        x = self.T * (0.25 + self.alpha)
        return abs(x - round(x))


def _check_dim(reg: QuantumRegister, n: int, what: str) -> None:
    if reg.n_qubits != n:
        raise DomainError(f"{what} is for {n} qubits but the register has {reg.n_qubits}")


def exclusion_axis(patterns: PatternSet) -> np.ndarray:
    return exclusion_superposition(patterns).amplitudes.real.copy()


def oracle_apply(reg: QuantumRegister, q: QueryDistribution) -> QuantumRegister:
    _check_dim(reg, q.n, "query")
    out = reg.copy()
    kernels.reflect(out.amplitudes, np.ascontiguousarray(q.amplitudes, dtype=float), 1.0)
    return out


def diffusion_apply(reg: QuantumRegister, patterns: PatternSet) -> QuantumRegister:
    _check_dim(reg, patterns.n, "pattern set")
    out = reg.copy()
    kernels.reflect(out.amplitudes, exclusion_axis(patterns), -1.0)
    return out


def _check_c2(variant: ImVariant, patterns: PatternSet) -> None:
    if variant.tag is Method.C2 and set(variant.c2_query.center_indices) != set(patterns.members):
        raise DomainError("C2 query centers must be exactly the stored patterns")


def im_apply(reg: QuantumRegister, variant: ImVariant, patterns: PatternSet) -> QuantumRegister:
    _check_dim(reg, patterns.n, "pattern set")
    _check_c2(variant, patterns)
    if variant.tag is Method.C2:
        return oracle_apply(reg, variant.c2_query)
    out = reg.copy()
    kernels.phase_flip(out.amplitudes, patterns.mask())
    return out


def overlap_b(q: QueryDistribution, patterns: PatternSet, wrong_b: bool = False) -> float:
    """Overlap of the query with the exclusion state.

    ``wrong_b`` swaps in the large-N shortcut that sums the query over all
    basis states and normalises by sqrt(N); it is a diagnostic, not a default.
    """
    if wrong_b:
        return float(np.sum(q.amplitudes) / math.sqrt(patterns.N))
    off = q.amplitudes[patterns.mask() == 0]
    return float(np.sum(off) / math.sqrt(patterns.N - patterns.m))


def analytic_schedule(q: QueryDistribution, patterns: PatternSet,
                      alpha_max: int = DEFAULT_ALPHA_MAX, int_tol: float = DEFAULT_INT_TOL,
                      wrong_b: bool = False) -> ScheduleParams:
    """Grover frequency, period and iteration count from the query overlap.

    Picks the smallest alpha in ``1..alpha_max`` whose ``T (1/4 + alpha)`` lies
    within ``int_tol`` of an integer; if none does, the alpha with the smallest
    fractional distance (smallest alpha on ties).
    """
    if alpha_max < 1:
        raise DomainError(f"alpha_max must be >= 1, got {alpha_max}")
    if q.n != patterns.n:
        raise DomainError("query and pattern set disagree on n")
    B = overlap_b(q, patterns, wrong_b)
    if B <= 0.0:
        raise DomainError("query has no overlap with the exclusion state")
    assert B <= 1.0 + 1e-12, B
    B = min(B, 1.0)
    omega = 2.0 * math.asin(B)
    T = 2.0 * math.pi / omega
    dists = [abs(T * (0.25 + a) - round(T * (0.25 + a))) for a in range(1, alpha_max + 1)]
    near = [a for a, d in enumerate(dists, 1) if d <= int_tol]
    alpha = near[0] if near else 1 + int(np.argmin(dists))
    return ScheduleParams(B, omega, T, alpha, int(round(T * (0.25 + alpha))))


def simulate(patterns: PatternSet, query: QueryDistribution, method: Method,
             iterations: int, im_variant: ImVariant | None = None,
             initial: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Run retrieval for ``iterations`` rounds from the exclusion state (or ``initial``).

    Returns ``(final_amplitudes, p_c)`` where ``p_c[i]`` is the probability of
    the pattern set after i rounds (``p_c[0]`` is the initial state). For C1/C2
    round 2 is the ``I_M`` + diffusion pair.
    """
    if query.n != patterns.n:
        raise DomainError("query and pattern set disagree on n")
    if iterations < 0:
        raise DomainError(f"iteration count must be >= 0, got {iterations}")
    method = Method.parse(method)
    if initial is None:
        state = exclusion_superposition(patterns).amplitudes
    else:
        state = np.array(initial, dtype=np.complex128)
        if state.shape != (patterns.N,):
            raise DomainError(f"initial state must have {patterns.N} amplitudes")
    q_axis = np.ascontiguousarray(query.amplitudes, dtype=float)
    m_axis = exclusion_axis(patterns)
    members = patterns.mask()
    pc = np.zeros(iterations + 1)
    pc[0] = kernels.set_probability(state, members)
    if method is Method.EZHOV:
        kernels.grover_trace(state, q_axis, m_axis, members, pc[1:])
        return state, pc
    if iterations < 2:
        raise DomainError(f"improved retrieval needs at least 2 iterations, got {iterations}")
    if im_variant is None or im_variant.tag is not method:
        raise DomainError(f"{method.value} retrieval needs a matching I_M variant")
    _check_c2(im_variant, patterns)
    kernels.grover_trace(state, q_axis, m_axis, members, pc[1:2])
    if method is Method.C1:
        kernels.phase_flip(state, members)
    else:
        kernels.reflect(state, np.ascontiguousarray(im_variant.c2_query.amplitudes, dtype=float), 1.0)
    kernels.reflect(state, m_axis, -1.0)
    pc[2] = kernels.set_probability(state, members)
    kernels.grover_trace(state, q_axis, m_axis, members, pc[3:])
    return state, pc


def empirical_lambda(config: RetrievalConfig,
                     max_iters: int = DEFAULT_MAX_ITERS) -> tuple[int, ProbabilityTrace]:
    """Iteration count in ``1..max_iters`` (``2..`` for C1/C2) with the highest P_c.

    Ties go to the smallest count. The returned trace covers all ``max_iters``
    rounds, with ``lambda_used`` set to the chosen count.
    """
    from .memory import trace_from_run

    if max_iters < 1:
        raise DomainError(f"max_iters must be >= 1, got {max_iters}")
    first = 1 if config.method is Method.EZHOV else 2
    if max_iters < first:
        raise DomainError(f"max_iters must be >= {first} for {config.method.value}")
    state, pc = simulate(config.patterns, config.query, config.method, max_iters,
                         config.im_variant())
    lam = first + int(np.argmax(pc[first:]))
    return lam, trace_from_run(pc, state, lam)


def _outer(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    return np.outer(v, v.conj())


def operator_matrix(kind: str, patterns: PatternSet | None = None,
                    query: QueryDistribution | None = None,
                    variant: ImVariant | None = None) -> DenseOperator:
    """Explicit matrix of ``oracle``, ``diffusion``, ``im_c1`` or ``im_c2``."""
    if kind == "oracle":
        if query is None:
            raise DomainError("oracle matrix needs a query")
        return DenseOperator(np.eye(1 << query.n) - 2 * _outer(query.amplitudes))
    if patterns is None:
        raise DomainError(f"{kind} matrix needs a pattern set")
    eye = np.eye(patterns.N)
    if kind == "diffusion":
        psi = np.where(patterns.mask() == 0, 1.0 / math.sqrt(patterns.N - patterns.m), 0.0)
        return DenseOperator(2 * _outer(psi) - eye)
    if kind == "im_c1":
        proj = sum(_outer(eye[x]) for x in patterns.members)
        return DenseOperator(eye - 2 * proj)
    if kind == "im_c2":
        if variant is None or variant.tag is not Method.C2:
            raise DomainError("im_c2 matrix needs a C2 variant")
        if variant.c2_query.n != patterns.n:
            raise DomainError("C2 query and pattern set disagree on n")
        return DenseOperator(eye - 2 * _outer(variant.c2_query.amplitudes))
    raise DomainError(f"unknown operator kind {kind!r}")
