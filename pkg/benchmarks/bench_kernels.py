"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--n 7 12] [--repeat 5]

Each row is the best-of-``repeat`` wall time per call, in microseconds.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from qamem import kernels


def _cases(n: int, rng: np.random.Generator):
    dim = 1 << n
    state = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    state /= np.linalg.norm(state)
    axis = np.abs(rng.normal(size=dim))
    axis /= np.linalg.norm(axis)
    members = np.zeros(dim, dtype=np.uint8)
    members[rng.choice(dim, size=max(1, dim // 32), replace=False)] = 1
    m_axis = np.where(members == 0, 1.0, 0.0)
    m_axis /= np.linalg.norm(m_axis)
    out = np.zeros(30)
    ctrl = (1 << (n - 1)) | 1
    return {
        "controlled_x": lambda k, s: k.controlled_x(s, 1, ctrl, ctrl),
        "controlled_u2": lambda k, s: k.controlled_u2(s, 2, ctrl, 0, 0, 1j, 1j, 0),
        "reflect": lambda k, s: k.reflect(s, axis, 1.0),
        "phase_flip": lambda k, s: k.phase_flip(s, members),
        "grover_trace(30)": lambda k, s: k.grover_trace(s, axis, m_axis, members, out),
    }, state


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[7, 12, 16])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if "cython" not in kernels.BACKENDS:
        print("compiled kernels not built; only the python backend is available")
    names = list(kernels.BACKENDS)
    print(f"{'kernel':<18}{'n':>4}" + "".join(f"{b + ' us':>14}" for b in names)
          + ("   speedup" if len(names) == 2 else ""))
    rng = np.random.default_rng(0)
    for n in args.n:
        cases, state = _cases(n, rng)
        for name, fn in cases.items():
            times = []
            for b in names:
                mod, s = kernels.BACKENDS[b], state.copy()
                number = max(1, 2000 >> max(0, n - 7))
                t = min(timeit.repeat(lambda: fn(mod, s), number=number, repeat=args.repeat)) / number
                times.append(t * 1e6)
            row = f"{name:<18}{n:>4}" + "".join(f"{t:>14.2f}" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:>9.1f}x"
            print(row)


if __name__ == "__main__":
    main()
