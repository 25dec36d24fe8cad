#!/usr/bin/env python3
"""Benchmark the basis-action kernel backends (numba vs pure numpy).

Builds the full supercharge-sum matrix and one long charge monomial on
windows of increasing size with each backend, checks that the assembled
matrices are identical, and reports wall times.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

from nicolai import kernels
from nicolai.charges import ConservationSequence, charge_monomial
from nicolai.fock import OperatorSum, SiteWindow, build_matrix
from nicolai.model import supercharge_term


def _workload(n_pairs):
    window = SiteWindow(-1, 2 * n_pairs + 1)
    supercharge = OperatorSum(tuple(supercharge_term(i) for i in range(n_pairs + 1)))
    charge = charge_monomial(ConservationSequence.constant(0, n_pairs, 1))
    return window, supercharge, charge


def _run(backend, window, supercharge, charge, repeats):
    previous = kernels.set_backend(backend)
    try:
        build_matrix(supercharge, window)  # warm-up (includes JIT compile)
        best = float("inf")
        result = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            q = build_matrix(supercharge, window)
            c = build_matrix(charge, window)
            best = min(best, time.perf_counter() - t0)
            result = (q, c)
        return best, result
    finally:
        kernels.set_backend(previous)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"{'sites':>6} {'dim':>7} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for n_pairs in (3, 4, 5, 6):
        window, supercharge, charge = _workload(n_pairs)
        t_np, r_np = _run("numpy", window, supercharge, charge, args.repeats)
        t_nb, r_nb = _run("numba", window, supercharge, charge, args.repeats)
        assert r_np[0] == r_nb[0] and r_np[1] == r_nb[1], "backends disagree"
        print(
            f"{window.size:>6} {window.dimension:>7} {t_np * 1e3:>9.2f}ms"
            f" {t_nb * 1e3:>9.2f}ms {t_np / t_nb:>7.1f}x"
        )
    print("matrices identical across backends for every size")


if __name__ == "__main__":
    main()
