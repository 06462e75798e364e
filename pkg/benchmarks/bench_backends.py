#!/usr/bin/env python3
"""Time the two hot kernels on both compute backends.

Run: python benchmarks/bench_backends.py [--rounds N] [--repeats K]

The sampler is timed on an honest Bell-state game (16 label cells, 4
outcomes) and on the three-party layout (64 cells, 8 outcomes); the Jacobi
eigensolver on batches of random 4x4 and 8x8 Hermitian matrices.  Both
backends consume identical inputs and must produce identical outputs, which
is asserted before timing.
"""

import argparse
import time

import numpy as np

import ewgame as ew
from ewgame import backends, game


def time_call(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_sampler(rounds, repeats):
    rows = []
    cases = [
        ("sampler 16x4", ew.honest_strategy(ew.make_werner(1.0)),
         ew.werner_witness().weights, 2),
        ("sampler 64x8", ew.honest_strategy3(ew.ghz_state()),
         ew.ghz_witness().weights, 3),
    ]
    for name, strat, weights, n in cases:
        cfg = ew.GameConfig.uniform(rounds, seed=0, n_parties=n)
        parity = game.outcome_parity(n)
        pays = game.payoff_table(cfg, weights)
        label_cdf = np.cumsum(cfg.pi.ravel())
        label_cdf[-1] = 1.0
        out_cdf = game._table_cdfs(strat.outcome_table)
        u = np.random.default_rng(0).random((rounds, 2))

        results = {}
        for be in ("numba", "numpy"):
            if be == "numba" and backends.numba is None:
                continue
            backends.sample_rounds(u[:100], label_cdf, out_cdf, pays, parity, backend=be)
            results[be] = backends.sample_rounds(u, label_cdf, out_cdf, pays, parity,
                                                 backend=be)
        if len(results) == 2:
            for a, b in zip(results["numba"], results["numpy"]):
                assert np.array_equal(a, b), "backends disagree"

        times = {}
        for be in results:
            times[be] = time_call(
                lambda be=be: backends.sample_rounds(u, label_cdf, out_cdf, pays,
                                                     parity, backend=be), repeats)
        rows.append((f"{name} ({rounds:.0e} rounds)", times))
    return rows


def bench_eigensolver(repeats):
    rows = []
    rng = np.random.default_rng(1)
    for dim, count in ((4, 2000), (8, 500)):
        mats = []
        for _ in range(count):
            g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            mats.append((g + g.conj().T) / 2)
        for be in ("numba", "numpy"):
            if be == "numba" and backends.numba is None:
                continue
            backends.jacobi_eigh(mats[0], backend=be)  # warm up / compile
        if backends.numba is not None:
            va, ua = backends.jacobi_eigh(mats[0], backend="numba")
            vb, ub = backends.jacobi_eigh(mats[0], backend="numpy")
            assert np.array_equal(va, vb) and np.array_equal(ua, ub)

        times = {}
        for be in ("numba", "numpy"):
            if be == "numba" and backends.numba is None:
                continue
            times[be] = time_call(
                lambda be=be: [backends.jacobi_eigh(m, backend=be) for m in mats],
                repeats)
        rows.append((f"jacobi {dim}x{dim} (batch of {count})", times))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rounds", type=int, default=1_000_000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"active backend: {backends.ACTIVE_BACKEND}"
          + ("" if backends.numba is not None else "  (numba not installed)"))
    rows = bench_sampler(args.rounds, args.repeats) + bench_eigensolver(args.repeats)

    print(f"\n{'kernel':38s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, times in rows:
        nb = times.get("numba")
        np_ = times.get("numpy")
        nb_s = f"{nb * 1e3:8.1f}ms" if nb is not None else "       -"
        np_s = f"{np_ * 1e3:8.1f}ms" if np_ is not None else "       -"
        speed = f"{np_ / nb:7.1f}x" if nb and np_ else "      -"
        print(f"{name:38s} {nb_s:>10s} {np_s:>10s} {speed:>8s}")


if __name__ == "__main__":
    main()
