"""Time the LCS kernels: numba, row-vectorised numpy and a pure-Python DP.

    python benchmarks/bench_lcs.py [--pairs 200] [--length 400]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from webscraper.metrics._lcs import lcs_length_jit, lcs_length_numpy


def lcs_python(a, b) -> int:
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def timed(fn, pairs) -> tuple[float, list[int]]:
    start = time.perf_counter()
    out = [fn(a, b) for a, b in pairs]
    return time.perf_counter() - start, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=200)
    ap.add_argument("--length", type=int, default=400, help="tokens per sequence (roughly an article body)")
    ap.add_argument("--vocab", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    pairs = [
        (rng.integers(0, args.vocab, args.length), rng.integers(0, args.vocab, args.length)) for _ in range(args.pairs)
    ]
    lcs_length_jit(pairs[0][0], pairs[0][1])  # compile outside the timing

    results = {}
    for name, fn, data in (
        ("numba", lcs_length_jit, pairs),
        ("numpy", lcs_length_numpy, pairs),
        ("python", lcs_python, [(a.tolist(), b.tolist()) for a, b in pairs]),
    ):
        results[name] = timed(fn, data)

    reference = results["python"][1]
    print(f"{args.pairs} pairs x {args.length} tokens")
    for name, (secs, out) in results.items():
        agree = "ok" if out == reference else "MISMATCH"
        speedup = results["python"][0] / secs if secs else float("inf")
        print(f"{name:>7}: {secs * 1000:9.1f} ms  {speedup:7.1f}x vs python  {agree}")


if __name__ == "__main__":
    main()
