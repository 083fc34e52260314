#!/usr/bin/env python3
"""Benchmark the generation kernels: compiled extension vs pure-Python
fallback.

Usage: python benchmarks/bench_kernels.py [--pairs N] [--repeat K]

Both backends produce byte-identical output (verified here as well); the
numbers show what the compiled core buys on the hot loops.
"""

import argparse
import time

from synthpara._kernels import available_backends
from synthpara.corpus import DEFAULT_LENGTHS, length_thresholds
from synthpara.rng import RandomSource, threshold53
from synthpara.synth_tasks import SyntheticVocabulary


def bench(fn, repeat):
    best = None
    result = None
    for _ in range(repeat):
        started = time.perf_counter()
        result = fn()
        elapsed = time.perf_counter() - started
        best = elapsed if best is None else min(best, elapsed)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=100_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; benchmarking pure only")

    vocab = SyntheticVocabulary()
    table = list(length_thresholds(DEFAULT_LENGTHS))
    key = RandomSource(42).key
    min_len = DEFAULT_LENGTHS.min_len
    d15 = threshold53(0.15)

    tasks = {
        "identity": lambda mod, n: mod.gen_identity_block(
            key, 0, n, vocab.lower_bytes, 3, vocab.size, min_len, table,
        ),
        "case-map": lambda mod, n: mod.gen_case_map_block(
            key, 0, n, vocab.lower_bytes, vocab.upper_bytes, 3, vocab.size,
            min_len, table, d15, d15, False,
        ),
        "pb-trees": lambda mod, n: mod.gen_pb_trees_block(
            key, 0, n, vocab.lower_bytes, vocab.upper_bytes, 3, vocab.size,
            min_len, table, d15, False,
        ),
        "pb-trees+deriv": lambda mod, n: mod.gen_pb_trees_block(
            key, 0, n, vocab.lower_bytes, vocab.upper_bytes, 3, vocab.size,
            min_len, table, d15, True,
        ),
    }

    print(f"{'kernel':<16} {'backend':<9} {'pairs/s':>12} {'seconds':>9}")
    for name, call in tasks.items():
        for backend in ("pure", "compiled"):
            if backend not in backends:
                continue
            mod = backends[backend]
            # the pure backend is much slower; keep its workload manageable
            n = args.pairs if backend == "compiled" else max(args.pairs // 20, 1000)
            seconds, _ = bench(lambda: call(mod, n), args.repeat)
            print(f"{name:<16} {backend:<9} {n / seconds:>12,.0f} {seconds:>9.3f}")
        if len(backends) == 2:
            n_check = 2000
            pure_out = call(backends["pure"], n_check)
            comp_out = call(backends["compiled"], n_check)
            assert pure_out == comp_out, f"backend outputs differ for {name}"
    if len(backends) == 2:
        print("byte-equality of backends verified on 2000-pair samples")


if __name__ == "__main__":
    main()
