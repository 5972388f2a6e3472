"""Compiled kernels against the numpy fallback.

Run:  python benchmarks/bench_kernels.py [--repeat N]

Both implementations are imported directly, so one process compares them;
the outputs are checked for equality before timing.
"""
from __future__ import annotations

import argparse
import itertools
import timeit

import numpy as np

from gl3moment import _fallback

try:
    from gl3moment import _ext
except ImportError:  # extension not built
    _ext = None

FREQS = np.array(list(itertools.product(range(4), repeat=4)), dtype=np.int64)

CASES = {
    "gl3_hist D=(12,18), 256 freqs": lambda m: m.gl3_hist(12, 18, 1, FREQS),
    "gl3_hist D=(30,30), 256 freqs": lambda m: m.gl3_hist(30, 30, 1, FREQS),
    "tilde_hist D=(6,36), 64 freqs": lambda m: m.tilde_hist(6, 36, FREQS[:64, :3]),
    "kloosterman_hist c=997, 500 pairs": lambda m: m.kloosterman_hist(np.arange(500), np.arange(500) * 7 + 1, 997),
    "tau_residues n<=20000": lambda m: m.tau_residues(20000),
}


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ext is None:
        print("compiled extension not available; build with `pip install -e . --no-build-isolation`")
        return
    print(f"{'case':<36} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8}")
    for name, fn in CASES.items():
        if not _same(fn(_fallback), fn(_ext)):
            raise SystemExit(f"{name}: outputs differ")
        tp = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: fn(_ext), number=1, repeat=args.repeat))
        print(f"{name:<36} {1e3 * tp:>12.2f} {1e3 * tc:>12.2f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
