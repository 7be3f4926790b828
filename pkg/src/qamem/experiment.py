"""Experiment specs and the file artifacts the CLI writes.

A spec is a flat YAML mapping::

    name: example1
    n: 3
    patterns: ["#2", "#4"]     # bit-strings ("010") or "#<index>"
    centers: ["#3"]            # query center(s), same notation
    a: 0.25
    method: Ezhov              # Ezhov | C1 | C2
    a_prime: null              # required for C2 only
    lambda: auto               # auto | analytic | empirical | fixed:<k>
    alpha_max: 10
    int_tol: 0.1
    max_iters: 30
    wrong_b: false
    seed: null
    out: null
    grid: {}                   # sweep axes: a, a_prime, method, lambda

``lambda: auto`` means analytic for Ezhov and empirical for C1/C2.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .amplify import DEFAULT_ALPHA_MAX, DEFAULT_INT_TOL, DEFAULT_MAX_ITERS, Method, simulate
from .memory import LambdaPolicy, ProbabilityTrace, RetrievalConfig, run
from .query import multi_center_query
from .register import DomainError, QuantumRegister, measure
from .storage import PatternSet, StorageLayout, split_x_register, storage_circuit, store_patterns_gate_level

GRID_AXES = ("a", "a_prime", "lambda", "method")


class SpecError(ValueError):
    """A spec document failed validation; ``field`` names the offending key."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class ExperimentSpec:
    name: str
    n: int
    patterns: list[str]
    centers: list[str]
    a: float
    method: str = "Ezhov"
    a_prime: float | None = None
    lambda_: str = "auto"
    alpha_max: int = DEFAULT_ALPHA_MAX
    int_tol: float = DEFAULT_INT_TOL
    max_iters: int = DEFAULT_MAX_ITERS
    wrong_b: bool = False
    seed: int | None = None
    out: str | None = None
    grid: dict[str, list] = field(default_factory=dict)


_KEYS = {f.name.rstrip("_"): f.name for f in fields(ExperimentSpec)}
_REQUIRED = ("name", "n", "patterns", "centers", "a")


def _label_to_index(label: str, n: int, what: str) -> int:
    if label.startswith("#"):
        try:
            x = int(label[1:])
        except ValueError:
            raise SpecError(what, f"bad index {label!r}") from None
    elif label and set(label) <= {"0", "1"}:
        if len(label) != n:
            raise SpecError(what, f"bit-string {label!r} has length {len(label)}, expected n={n}")
        x = int(label, 2)
    else:
        raise SpecError(what, f"expected a bit-string or '#<index>', got {label!r}")
    if not 0 <= x < (1 << n):
        raise SpecError(what, f"index {x} out of range: must be < 2^n = {1 << n}")
    return x


def _as_labels(value, what: str) -> list[str]:
    if not isinstance(value, list) or not value:
        raise SpecError(what, "must be a non-empty list")
    for v in value:
        if not isinstance(v, str):
            raise SpecError(what, f"entries must be quoted strings ('0010' or '#2'), got {v!r}")
    return [v.strip() for v in value]


def _check_width(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(what, f"must be a number, got {value!r}")
    if not 0.0 < value < 0.5:
        raise SpecError(what, f"{what} must lie in (0, 1/2), got {value}")
    return float(value)


def _check_int(value, what: str, lo: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecError(what, f"must be an integer, got {value!r}")
    if value < lo:
        raise SpecError(what, f"must be >= {lo}, got {value}")
    return value


def _check_lambda(value) -> str:
    text = str(value).strip()
    if text in ("auto", "analytic", "empirical"):
        return text
    if text.startswith("fixed:"):
        try:
            if int(text[6:]) >= 0:
                return text
        except ValueError:
            pass
    raise SpecError("lambda", f"must be auto, analytic, empirical or fixed:<k>, got {value!r}")


def validate(spec: ExperimentSpec) -> ExperimentSpec:
    """Check every field; raises ``SpecError`` naming the first bad one."""
    if not isinstance(spec.name, str) or not spec.name:
        raise SpecError("name", "must be a non-empty string")
    n = _check_int(spec.n, "n", 1)
    pats = [_label_to_index(p, n, "patterns") for p in _as_labels(spec.patterns, "patterns")]
    if len(set(pats)) != len(pats):
        raise SpecError("patterns", f"duplicate patterns {sorted(x for x in pats if pats.count(x) > 1)}")
    if len(pats) >= (1 << n):
        raise SpecError("patterns", "retrieval needs at least one basis state outside the pattern set")
    centers = [_label_to_index(c, n, "centers") for c in _as_labels(spec.centers, "centers")]
    if len(set(centers)) != len(centers):
        raise SpecError("centers", "duplicate centers")
    _check_width(spec.a, "a")
    try:
        method = Method.parse(spec.method)
    except DomainError as exc:
        raise SpecError("method", str(exc)) from None
    if method is Method.C2:
        if spec.a_prime is None:
            raise SpecError("a_prime", "required when method is C2")
        _check_width(spec.a_prime, "a_prime")
    _check_lambda(spec.lambda_)
    _check_int(spec.alpha_max, "alpha_max", 1)
    _check_int(spec.max_iters, "max_iters", 1)
    if isinstance(spec.int_tol, bool) or not isinstance(spec.int_tol, (int, float)) or not 0 <= spec.int_tol <= 0.5:
        raise SpecError("int_tol", f"must be a number in [0, 1/2], got {spec.int_tol!r}")
    if not isinstance(spec.wrong_b, bool):
        raise SpecError("wrong_b", f"must be true or false, got {spec.wrong_b!r}")
    if spec.seed is not None:
        _check_int(spec.seed, "seed", 0)
    if spec.out is not None and not isinstance(spec.out, str):
        raise SpecError("out", "must be a path string")
    if not isinstance(spec.grid, dict):
        raise SpecError("grid", "must be a mapping of axis -> list of values")
    for axis, values in spec.grid.items():
        if axis not in GRID_AXES:
            raise SpecError("grid", f"unknown axis {axis!r}; allowed: {', '.join(GRID_AXES)}")
        if not isinstance(values, list):
            raise SpecError("grid", f"axis {axis!r} must be a list")
    return spec


def parse_spec(text: str) -> ExperimentSpec:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SpecError("document", f"malformed document: {exc}") from None
    if not isinstance(doc, dict):
        raise SpecError("document", "malformed document: expected a key-value mapping")
    unknown = sorted(set(doc) - set(_KEYS))
    if unknown:
        raise SpecError(unknown[0], "unknown key")
    missing = [k for k in _REQUIRED if k not in doc]
    if missing:
        raise SpecError(missing[0], "required key missing")
    kwargs = {_KEYS[k]: v for k, v in doc.items()}
    if kwargs.get("grid") is None:
        kwargs["grid"] = {}
    return validate(ExperimentSpec(**kwargs))


def serialize(spec: ExperimentSpec) -> str:
    doc = {k.rstrip("_"): v for k, v in asdict(spec).items()}
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)


def load_spec(path: str | os.PathLike) -> ExperimentSpec:
    return parse_spec(Path(path).read_text())


def lambda_policy(spec: ExperimentSpec) -> LambdaPolicy:
    text = spec.lambda_
    if text == "auto":
        text = "analytic" if Method.parse(spec.method) is Method.EZHOV else "empirical"
    return LambdaPolicy.parse(text, alpha_max=spec.alpha_max, int_tol=spec.int_tol,
                              max_iters=spec.max_iters, wrong_b=spec.wrong_b)


def to_config(spec: ExperimentSpec) -> RetrievalConfig:
    patterns = PatternSet(spec.n, [_label_to_index(p, spec.n, "patterns") for p in spec.patterns])
    centers = [(_label_to_index(c, spec.n, "centers"), spec.a) for c in spec.centers]
    method = Method.parse(spec.method)
    return RetrievalConfig(
        patterns,
        multi_center_query(spec.n, centers),
        method,
        spec.a_prime if method is Method.C2 else None,
        lambda_policy(spec),
    )


# -- output formatting ------------------------------------------------------

def fmt(x: float) -> str:
    return f"{x:.6f}"


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def trace_csv(trace: ProbabilityTrace) -> str:
    return _csv_text(["iteration", "P_c", "P_w"],
                     [[i, fmt(pc), fmt(pw)] for i, pc, pw in trace.rows()])


def state_csv(n: int, amplitudes: np.ndarray) -> str:
    rows = []
    for x, amp in enumerate(amplitudes):
        rows.append([x, format(x, f"0{n}b"), fmt(float(np.real(amp))), fmt(float(abs(amp) ** 2))])
    return _csv_text(["basis_index", "bitstring", "amplitude", "probability"], rows)


def _num(x: float) -> float | None:
    return None if not math.isfinite(x) else float(x)


def summary(spec: ExperimentSpec, cfg: RetrievalConfig, trace: ProbabilityTrace) -> dict[str, Any]:
    out: dict[str, Any] = {
        "name": spec.name,
        "method": cfg.method.value,
        "lambda_policy": str(cfg.lambda_policy),
        "lambda": trace.lambda_used,
        "p_c": trace.final_p_c,
        "p_w": 1.0 - trace.final_p_c,
        "efficiency": _num(trace.efficiency),
    }
    if trace.schedule is not None:
        s = trace.schedule
        out.update(B=s.B, omega=s.omega, omega_over_pi=s.omega / math.pi, T=s.T,
                   alpha=s.alpha, analytic_lambda=s.lam, wrong_b=cfg.lambda_policy.wrong_b)
    if spec.seed is not None:
        reg = QuantumRegister(cfg.patterns.n, trace.final_amplitudes)
        out["seed"] = spec.seed
        out["observed"] = measure(reg, spec.seed)
    return out


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def run_spec(spec: ExperimentSpec, out_dir: str | os.PathLike | None = None) -> dict[str, Any]:
    """Run one retrieval experiment and write its trace, state and summary files."""
    cfg = to_config(spec)
    trace = run(cfg)
    info = summary(spec, cfg, trace)
    target = out_dir or spec.out
    if target is not None:
        d = Path(target)
        _write(d / f"{spec.name}_trace.csv", trace_csv(trace))
        _write(d / f"{spec.name}_state.csv", state_csv(cfg.patterns.n, trace.final_amplitudes))
        _write(d / f"{spec.name}_summary.json", json.dumps(info, indent=2, sort_keys=True) + "\n")
    return info


# -- sweeps -----------------------------------------------------------------

SWEEP_HEADER = ["point", "method", "a", "a_prime", "lambda_policy", "lambda", "p_c", "p_w",
                "efficiency", "error"]


def grid_points(spec: ExperimentSpec) -> list[ExperimentSpec]:
    """Cartesian product of the grid axes, axes in name order, values in listed order."""
    axes = sorted(spec.grid)
    if not axes or any(not spec.grid[a] for a in axes):
        return []
    points = []
    for values in itertools.product(*(spec.grid[a] for a in axes)):
        over = {("lambda_" if a == "lambda" else a): v for a, v in zip(axes, values)}
        if "lambda_" in over and isinstance(over["lambda_"], int):
            over["lambda_"] = f"fixed:{over['lambda_']}"
        pt = replace(spec, grid={}, **over)
        if _method_ok(pt.method) and Method.parse(pt.method) is not Method.C2:
            pt = replace(pt, a_prime=None)
        points.append(pt)
    return points


def _method_ok(value) -> bool:
    try:
        Method.parse(value)
        return True
    except DomainError:
        return False


def _sweep_row(args: tuple[int, ExperimentSpec]) -> list:
    i, pt = args
    try:
        validate(pt)
        cfg = to_config(pt)
        tr = run(cfg)
        eff = tr.efficiency
        return [i, cfg.method.value, fmt(pt.a), "" if cfg.a_prime is None else fmt(cfg.a_prime),
                str(cfg.lambda_policy), tr.lambda_used, fmt(tr.final_p_c), fmt(1.0 - tr.final_p_c),
                fmt(eff) if math.isfinite(eff) else "inf", ""]
    except (DomainError, SpecError) as exc:
        return [i, str(pt.method), pt.a, "" if pt.a_prime is None else pt.a_prime, pt.lambda_,
                "", "", "", "", str(exc)]


def sweep(spec: ExperimentSpec, jobs: int | None = None) -> str:
    """Run every grid point; rows come back in grid order whatever the worker count."""
    points = list(enumerate(grid_points(spec)))
    jobs = jobs or os.cpu_count() or 1
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(points))) as pool:
            rows = list(pool.map(_sweep_row, points))
    else:
        rows = [_sweep_row(p) for p in points]
    return _csv_text(SWEEP_HEADER, rows)


# -- canned reproductions -----------------------------------------------------

EXAMPLE1 = ExperimentSpec(name="example1", n=3, patterns=["#2", "#4"], centers=["#3"], a=0.25)
SEVEN_QUBIT_PATTERNS = ["#23", "#59", "#61", "#110"]
SEVEN_QUBIT = ExperimentSpec(name="seven_qubit", n=7, patterns=SEVEN_QUBIT_PATTERNS,
                             centers=["#60"], a=0.15)
TABLE1_ROWS = [("Ezhov", None), ("C1", None), ("C2", 0.1)]
TABLE2_ROWS = [(a, m, ap) for a in (0.15, 0.40)
               for m, ap in (("Ezhov", None), ("C1", None), ("C2", 0.10), ("C2", 0.40))]


def example1(wrong_b: bool = False, max_iters: int = DEFAULT_MAX_ITERS) -> ExperimentSpec:
    name = "example1-wrongB" if wrong_b else "example1"
    return replace(EXAMPLE1, name=name, wrong_b=wrong_b, max_iters=max_iters)


def table1(max_iters: int = DEFAULT_MAX_ITERS) -> str:
    rows = []
    for method, ap in TABLE1_ROWS:
        spec = replace(EXAMPLE1, name=f"table1-{method}", method=method, a_prime=ap, max_iters=max_iters)
        cfg = to_config(spec)
        tr = run(cfg)
        rows.append([method, tr.lambda_used, fmt(tr.final_p_c), fmt(tr.efficiency)])
    return _csv_text(["method", "lambda", "p_c", "efficiency"], rows)


def table2(max_iters: int = DEFAULT_MAX_ITERS) -> str:
    rows = []
    for a, method, ap in TABLE2_ROWS:
        spec = replace(SEVEN_QUBIT, name=f"table2-{method}", a=a, method=method, a_prime=ap,
                       max_iters=max_iters)
        cfg = to_config(spec)
        tr = run(cfg)
        rows.append([method, fmt(a), "" if ap is None else fmt(ap), tr.lambda_used,
                     fmt(tr.final_p_c)])
    return _csv_text(["method", "a", "a_prime", "lambda", "p_c"], rows)


FIGURES = {
    2: "baseline P_c/P_w trace, 3-qubit example",
    3: "baseline final-state probabilities, 3-qubit example",
    5: "C1 P_c/P_w trace, 3-qubit example",
    6: "C1 final-state probabilities, 3-qubit example",
    7: "C2 (a'=0.1) P_c/P_w trace, 3-qubit example",
    8: "C2 (a'=0.1) final-state probabilities, 3-qubit example",
    9: "7-qubit P_c traces for every method, a=0.15",
    10: "7-qubit P_c traces for every method, a=0.40",
}
_FIG_METHOD = {2: ("Ezhov", None), 3: ("Ezhov", None), 5: ("C1", None), 6: ("C1", None),
               7: ("C2", 0.1), 8: ("C2", 0.1)}
_TRACE_FIGS = {2, 5, 7}


def figure(fig_id: int, horizon: int = 40, max_iters: int = DEFAULT_MAX_ITERS) -> str:
    """Plot data for one figure; trace figures run ``horizon`` rounds."""
    if fig_id not in FIGURES:
        raise SpecError("fig", f"no plot data for figure {fig_id}; available: "
                               + ", ".join(map(str, FIGURES)))
    if fig_id in _FIG_METHOD:
        method, ap = _FIG_METHOD[fig_id]
        spec = replace(EXAMPLE1, method=method, a_prime=ap, max_iters=max_iters)
        cfg = to_config(spec)
        if fig_id in _TRACE_FIGS:
            state, pc = simulate(cfg.patterns, cfg.query, cfg.method, horizon, cfg.im_variant())
            return trace_csv(ProbabilityTrace(pc, state, horizon))
        tr = run(cfg)
        return state_csv(cfg.patterns.n, tr.final_amplitudes)
    a = 0.15 if fig_id == 9 else 0.40
    cols, header = [], ["iteration"]
    for method, ap in (("Ezhov", None), ("C1", None), ("C2", 0.10), ("C2", 0.40)):
        cfg = to_config(replace(SEVEN_QUBIT, a=a, method=method, a_prime=ap))
        _, pc = simulate(cfg.patterns, cfg.query, cfg.method, horizon, cfg.im_variant())
        cols.append(pc)
        header.append(method if ap is None else f"{method}_a'={ap:.2f}")
    rows = [[i, *(fmt(c[i]) for c in cols)] for i in range(horizon + 1)]
    return _csv_text(header, rows)


# -- gate-level storage demo --------------------------------------------------

def storage_demo(patterns: PatternSet) -> tuple[dict[str, Any], str, str]:
    """Run the storage circuit; returns (summary, x-register CSV, gate listing)."""
    lay = StorageLayout(patterns.n)
    ops = storage_circuit(patterns)
    reg = store_patterns_gate_level(patterns)
    x_state, anc, s = split_x_register(reg, patterns.n)
    expected = np.zeros(patterns.N)
    expected[list(patterns.members)] = 1.0 / math.sqrt(patterns.m)
    info = {
        "n": patterns.n,
        "m": patterns.m,
        "width": lay.width,
        "gate_count": len(ops),
        "max_deviation": float(np.max(np.abs(x_state - expected))),
        "second_schmidt_coefficient": float(s[1]) if len(s) > 1 else 0.0,
        "ancilla_ground_amplitude": float(abs(anc[0])),
        "patterns": patterns.bitstrings(),
    }
    listing = "\n".join(str(op) for op in ops) + "\n"
    return info, state_csv(patterns.n, x_state), listing
