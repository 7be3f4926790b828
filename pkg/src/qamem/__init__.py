"""Quantum associative memory with distributed Grover queries."""
from .amplify import (
    ImVariant,
    Method,
    ScheduleParams,
    analytic_schedule,
    diffusion_apply,
    empirical_lambda,
    im_apply,
    operator_matrix,
    oracle_apply,
    simulate,
)
from .kernels import BACKEND
from .memory import (
    LambdaPolicy,
    ProbabilityTrace,
    RetrievalConfig,
    compare_methods,
    run,
    run_ezhov,
    run_improved,
)
from .query import QueryDistribution, hamming, multi_center_query, single_center_query
from .register import (
    DenseOperator,
    DomainError,
    QuantumRegister,
    apply_dense,
    measure,
    new_basis,
    probability_of_set,
    uniform_superposition,
)
from .storage import (
    PatternSet,
    exclusion_superposition,
    parse_patterns,
    store_patterns_gate_level,
)

__version__ = "0.1.0"
