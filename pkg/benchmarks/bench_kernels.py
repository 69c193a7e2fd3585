#!/usr/bin/env python3
"""Time the compiled kernels against their pure-numpy twins.

Each section builds one large workload, checks that both backends return
the same answer, then reports best-of-N wall times and the speedup.  Run
from the repository root after installing the package:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeat 5

Without numba (or with GRZLAB_NO_NUMBA=1) only the numpy column runs.
"""

import argparse
import itertools
import time

import numpy as np

from grzlab import kernels
from grzlab.finlat import chain_heyting, chain_poset
from grzlab.modal import complex_algebra
from grzlab.ulogic import (
    UniversalSentence,
    compile_sentence,
    formula_vars,
    parse_formula,
)


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def identity(lhs: str, rhs: str, signature: str) -> UniversalSentence:
    left = parse_formula(lhs, signature)
    right = parse_formula(rhs, signature)
    names: list[str] = []
    formula_vars(left, names)
    formula_vars(right, names)
    return UniversalSentence((), ((left, right),), signature, tuple(names))


def bench_scan_heyting():
    """Meet associativity under implication on a 12-chain, 5 variables.

    The identity holds, so the scan visits all 12**5 assignments.
    """
    alg = chain_heyting(12)
    sent = identity("(p & q) & r -> (s -> t)", "p & (q & r) -> (s -> t)", "heyting")
    code, arg, eqb, n_prem = compile_sentence(sent, alg)

    def run(backend):
        return kernels.scan_heyting(
            alg.size, 5, code, arg, eqb, n_prem,
            alg.meet, alg.join, alg.imp, force_backend=backend,
        )

    return "scan_heyting", "12-chain, 5 vars", run, -1


def bench_scan_modal():
    """Box distribution over meet on a 10-atom interior algebra, 2 variables."""
    alg = complex_algebra(chain_poset(10))
    sent = identity("box (p & q)", "box p & box q", "modal")
    code, arg, eqb, n_prem = compile_sentence(sent, alg)

    def run(backend):
        return kernels.scan_modal(
            alg.atoms, 2, code, arg, eqb, n_prem, alg.box, force_backend=backend,
        )

    return "scan_modal", "10 atoms, 2 vars", run, -1


def bench_perm_min_key():
    """Canonical keys for 300 random reflexive 7x7 relations, all 5040 perms."""
    rng = np.random.default_rng(0)
    perms = np.array(list(itertools.permutations(range(7))), dtype=np.int64)
    mats = (rng.random((300, 7, 7)) < 0.4).astype(np.uint8)
    for m in mats:
        np.fill_diagonal(m, 1)

    def run(backend):
        return sum(kernels.perm_min_key(m, perms, force_backend=backend) for m in mats)

    expect = run("numpy")
    return "perm_min_key", "300 relations, n=7", run, expect


def bench_topology_valid():
    """All 2**16 subset families on four points, checked for topology laws."""

    def run(backend):
        return kernels.topology_valid(4, force_backend=backend)

    return "topology_valid", "k=4, 65536 families", run, None


WORKLOADS = [bench_scan_heyting, bench_scan_modal, bench_perm_min_key, bench_topology_valid]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="timing repeats per backend")
    args = parser.parse_args()

    have_numba = kernels.HAVE_NUMBA
    print(f"default backend: {kernels.backend_name()}")
    if not have_numba:
        print("numba unavailable; timing the numpy path only\n")

    header = f"{'kernel':<16} {'workload':<22} {'numba':>9} {'numpy':>9} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for build in WORKLOADS:
        name, desc, run, expect = build()
        got_np = run("numpy")
        if expect is not None and not isinstance(expect, np.ndarray):
            assert got_np == expect, f"{name}: numpy returned {got_np}, expected {expect}"
        if have_numba:
            got_nb = run("numba")  # first call pays JIT warmup, outside timing
            if isinstance(got_np, np.ndarray):
                assert np.array_equal(got_nb, got_np), f"{name}: backends disagree"
            else:
                assert got_nb == got_np, f"{name}: backends disagree ({got_nb} vs {got_np})"
            t_nb = best_of(lambda: run("numba"), args.repeat)
        t_np = best_of(lambda: run("numpy"), args.repeat)
        if have_numba:
            print(f"{name:<16} {desc:<22} {t_nb:>8.3f}s {t_np:>8.3f}s {t_np / t_nb:>7.1f}x")
        else:
            print(f"{name:<16} {desc:<22} {'-':>9} {t_np:>8.3f}s {'-':>8}")


if __name__ == "__main__":
    main()
