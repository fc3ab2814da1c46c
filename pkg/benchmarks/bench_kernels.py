#!/usr/bin/env python3
"""Compare the numba kernels against the pure numpy/python fallback.

Runs each hot kernel on a representative workload under both backends and
prints the timings. The numba backend is warmed once so compilation time
is reported separately from steady-state throughput.
"""

from __future__ import annotations

import time

import numpy as np

from metasumm.kernels import _numbaimpl, _purepy


def timeit(fn, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_lcs(impl):
    rng = np.random.default_rng(0)
    pairs = [
        (
            rng.integers(0, 50, size=200).astype(np.int32),
            rng.integers(0, 50, size=180).astype(np.int32),
        )
        for _ in range(50)
    ]

    def run():
        total = 0
        for a, b in pairs:
            total += impl.lcs_len(a, b)
            impl.lcs_ref_mask(a[:80], b[:80])
        return total

    return run


def bench_d2v(impl):
    rng = np.random.default_rng(1)
    n_docs, doc_len, vocab, dim = 60, 200, 500, 64
    words = rng.integers(0, vocab, size=n_docs * doc_len).astype(np.int32)
    offsets = (np.arange(n_docs + 1) * doc_len).astype(np.int64)
    doc_rows = np.arange(n_docs, dtype=np.int32)
    order = np.arange(n_docs, dtype=np.int32)
    table = rng.integers(0, vocab, size=100_000).astype(np.int32)

    def run():
        syn0 = (rng.random((vocab, dim), dtype=np.float32) - 0.5) / dim
        syn1 = np.zeros((vocab, dim), dtype=np.float32)
        dvecs = (rng.random((n_docs, dim), dtype=np.float32) - 0.5) / dim
        impl.d2v_train_block(
            words, offsets, doc_rows, order, syn0, syn1, dvecs, table,
            5, 5, 0.025, 1e-4, 0, len(words), np.uint64(7), True, True,
        )

    return run


def bench_best_split(impl):
    rng = np.random.default_rng(2)
    x = rng.normal(size=(2000, 16))
    y = rng.normal(size=(2000, 4))

    def run():
        impl.best_split(x, y)

    return run


def main() -> None:
    benches = [
        ("lcs (50 pairs, len 200)", bench_lcs),
        ("doc2vec epoch (12k positions, dim 64)", bench_d2v),
        ("best_split (2000 x 16, 4 outputs)", bench_best_split),
    ]
    print("warming numba kernels (compilation)...")
    warm_start = time.perf_counter()
    for _, make in benches:
        make(_numbaimpl)()
    print(f"compilation + first run: {time.perf_counter() - warm_start:.2f}s\n")

    header = f"{'kernel':40} {'numba':>10} {'numpy':>10} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, make in benches:
        t_numba = timeit(make(_numbaimpl))
        t_numpy = timeit(make(_purepy))
        print(f"{name:40} {t_numba:9.4f}s {t_numpy:9.4f}s {t_numpy / t_numba:8.1f}x")


if __name__ == "__main__":
    main()
