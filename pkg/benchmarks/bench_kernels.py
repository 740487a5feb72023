#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-numpy fallback.

Times the two hot paths on both backends: the structure-constant bracket
contraction and the full fixed-step RK4 loop of the Brockett flow.  Run from
the repository root after `python3 setup.py build_ext --inplace`:

    python3 benchmarks/bench_kernels.py [--steps 200000] [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from doublebracket.algebra import so3, so4
from doublebracket.backends import available_backends


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=200_000, help="RK4 steps per flow run")
    parser.add_argument("--brackets", type=int, default=50_000, help="bracket calls per run")
    parser.add_argument("--repeat", type=int, default=5, help="best-of repetitions")
    args = parser.parse_args()

    backends = available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; run: python3 setup.py build_ext --inplace")

    rows = []
    for alg in (so3(), so4()):
        rng = np.random.default_rng(0)
        n_vec = rng.normal(size=alg.dim)
        l0 = rng.normal(size=alg.dim)
        l0 /= np.linalg.norm(l0)
        x, y = rng.normal(size=(2, alg.dim))

        for name, impl in backends.items():
            def run_brackets(impl=impl):
                for _ in range(args.brackets):
                    impl.bracket(alg.constants, x, y)

            def run_flow(impl=impl):
                impl.brockett_rk4(alg.constants, n_vec, l0, 1e-3, args.steps)

            t_bracket = best_of(args.repeat, run_brackets)
            t_flow = best_of(args.repeat, run_flow)
            rows.append((alg.name, name, t_bracket, t_flow))

    print(f"{'algebra':<8} {'backend':<10} {'bracket x' + str(args.brackets):>18} "
          f"{'rk4 x' + str(args.steps):>16}")
    for alg_name, backend, t_bracket, t_flow in rows:
        print(f"{alg_name:<8} {backend:<10} {t_bracket:>16.3f}s {t_flow:>15.3f}s")

    by_key = {(r[0], r[1]): r for r in rows}
    for alg_name in ("so3", "so4"):
        if (alg_name, "compiled") in by_key and (alg_name, "python") in by_key:
            py = by_key[(alg_name, "python")]
            cy = by_key[(alg_name, "compiled")]
            print(
                f"{alg_name}: compiled speedup  bracket {py[2] / cy[2]:.1f}x  "
                f"rk4 {py[3] / cy[3]:.1f}x"
            )


if __name__ == "__main__":
    main()
