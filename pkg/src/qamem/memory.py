"""End-to-end retrieval: the baseline loop and the improved C1/C2 algorithm."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .amplify import (
    DEFAULT_ALPHA_MAX,
    DEFAULT_INT_TOL,
    DEFAULT_MAX_ITERS,
    ImVariant,
    Method,
    ScheduleParams,
    analytic_schedule,
    empirical_lambda,
    simulate,
)
from .query import QueryDistribution, single_center_query
from .register import DomainError
from .storage import PatternSet


@dataclass(frozen=True)
class LambdaPolicy:
    """How the iteration count is chosen.

    ``analytic`` uses ``alpha_max``/``int_tol`` (and ``wrong_b``), ``empirical``
    scans ``max_iters`` rounds, ``fixed`` uses ``value`` directly.
    """

    kind: str = "analytic"
    value: int = 0
    alpha_max: int = DEFAULT_ALPHA_MAX
    int_tol: float = DEFAULT_INT_TOL
    max_iters: int = DEFAULT_MAX_ITERS
    wrong_b: bool = False

    def __post_init__(self):
        if self.kind not in ("analytic", "empirical", "fixed"):
            raise DomainError(f"lambda policy must be analytic, empirical or fixed:<k>; got {self.kind!r}")
        if self.kind == "fixed" and self.value < 0:
            raise DomainError(f"fixed iteration count must be >= 0, got {self.value}")

    @classmethod
    def parse(cls, text: str, **kw) -> LambdaPolicy:
        text = str(text).strip()
        if text.startswith("fixed:"):
            try:
                value = int(text[len("fixed:"):])
            except ValueError:
                raise DomainError(f"bad fixed iteration count in {text!r}") from None
            return cls("fixed", value, **kw)
        return cls(text, **kw)

    def __str__(self):
        return f"fixed:{self.value}" if self.kind == "fixed" else self.kind


@dataclass(frozen=True)
class RetrievalConfig:
    patterns: PatternSet
    query: QueryDistribution
    method: Method = Method.EZHOV
    a_prime: float | None = None
    lambda_policy: LambdaPolicy = field(default_factory=LambdaPolicy)

    def __post_init__(self):
        object.__setattr__(self, "method", Method.parse(self.method))
        if self.query.n != self.patterns.n:
            raise DomainError(f"query n={self.query.n} differs from pattern n={self.patterns.n}")
        if (self.a_prime is not None) != (self.method is Method.C2):
            raise DomainError("a_prime must be given exactly when method is C2")
        if self.a_prime is not None and not 0.0 < self.a_prime < 0.5:
            raise DomainError(f"a_prime must lie in (0, 1/2), got {self.a_prime}")

    def im_variant(self) -> ImVariant | None:
        if self.method is Method.C1:
            return ImVariant.c1()
        if self.method is Method.C2:
            return ImVariant.c2(self.patterns, self.a_prime)
        return None


@dataclass
class ProbabilityTrace:
    p_c: np.ndarray
    final_amplitudes: np.ndarray
    lambda_used: int
    schedule: ScheduleParams | None = None

    @property
    def p_w(self) -> np.ndarray:
        return 1.0 - self.p_c

    @property
    def final_p_c(self) -> float:
        return float(self.p_c[self.lambda_used])

    @property
    def efficiency(self) -> float:
        pc = self.final_p_c
        return math.inf if pc >= 1.0 else pc / (1.0 - pc)

    def rows(self) -> list[tuple[int, float, float]]:
        return [(i, float(pc), float(1.0 - pc)) for i, pc in enumerate(self.p_c)]


def trace_from_run(pc: np.ndarray, state: np.ndarray, lam: int,
                   schedule: ScheduleParams | None = None) -> ProbabilityTrace:
    return ProbabilityTrace(pc, state, lam, schedule)


def _diagnostic_schedule(config: RetrievalConfig) -> ScheduleParams | None:
    pol = config.lambda_policy
    try:
        return analytic_schedule(config.query, config.patterns, pol.alpha_max, pol.int_tol, pol.wrong_b)
    except DomainError:
        return None


def resolve_lambda(config: RetrievalConfig) -> tuple[int, ScheduleParams | None]:
    pol = config.lambda_policy
    if pol.kind == "fixed":
        return pol.value, _diagnostic_schedule(config)
    if pol.kind == "analytic":
        sched = analytic_schedule(config.query, config.patterns, pol.alpha_max, pol.int_tol, pol.wrong_b)
        return sched.lam, sched
    lam, _ = empirical_lambda(config, pol.max_iters)
    return lam, _diagnostic_schedule(config)


def _run(config: RetrievalConfig) -> ProbabilityTrace:
    lam, sched = resolve_lambda(config)
    state, pc = simulate(config.patterns, config.query, config.method, lam, config.im_variant())
    return ProbabilityTrace(pc, state, lam, sched)


def run_ezhov(config: RetrievalConfig) -> ProbabilityTrace:
    if config.method is not Method.EZHOV:
        raise DomainError(f"run_ezhov needs method Ezhov, got {config.method.value}")
    return _run(config)


def run_improved(config: RetrievalConfig) -> ProbabilityTrace:
    if config.method is Method.EZHOV:
        raise DomainError("run_improved needs method C1 or C2")
    return _run(config)


def run(config: RetrievalConfig) -> ProbabilityTrace:
    return _run(config)


@dataclass(frozen=True)
class SweepRow:
    method: Method
    a: float
    a_prime: float | None
    lam: int
    p_c: float
    efficiency: float


def compare_methods(patterns: PatternSet, center: int, sweep: Iterable[tuple[float, float | None, str]],
                    ezhov_policy: LambdaPolicy | None = None,
                    improved_policy: LambdaPolicy | None = None) -> list[SweepRow]:
    """One summary row per ``(a, a_prime, method)`` entry of ``sweep``.

    By default the baseline uses the analytic schedule and C1/C2 the empirical
    one.
    """
    ezhov_policy = ezhov_policy or LambdaPolicy("analytic")
    improved_policy = improved_policy or LambdaPolicy("empirical")
    rows = []
    for a, a_prime, method in sweep:
        method = Method.parse(method)
        cfg = RetrievalConfig(
            patterns,
            single_center_query(patterns.n, center, a),
            method,
            a_prime if method is Method.C2 else None,
            ezhov_policy if method is Method.EZHOV else improved_policy,
        )
        tr = run(cfg)
        rows.append(SweepRow(method, a, cfg.a_prime, tr.lambda_used, tr.final_p_c, tr.efficiency))
    return rows
