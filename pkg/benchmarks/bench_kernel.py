"""Compare the compiled overlay kernel against the pure-Python fallback.

Usage: python benchmarks/bench_kernel.py [--repeats N] [--shapes N]
"""

import argparse
import random
import time

from medbuild.geometry import GridPolygon, kernel_backend, load_pure_kernel
from medbuild.geometry import api


def make_shapes(rng: random.Random, count: int):
    shapes = []
    for _ in range(count):
        if rng.random() < 0.3:
            cx, cy = rng.randrange(30, 220), rng.randrange(30, 220)
            r = rng.randrange(10, 28)
            ring = ((cx + r, cy), (cx, cy + r), (cx - r, cy), (cx, cy - r))
        else:
            x0, y0 = rng.randrange(0, 200), rng.randrange(0, 200)
            w, h = rng.randrange(10, 56), rng.randrange(10, 56)
            ring = ((x0, y0), (x0 + w, y0), (x0 + w, y0 + h), (x0, y0 + h))
        shapes.append(GridPolygon(ring))
    return [[list(p.ring)] for p in shapes]


def bench(kernel, groups, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        kernel.overlay(groups, kernel.OP_UNION)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--shapes", type=int, default=24)
    args = ap.parse_args()

    rng = random.Random(2024)
    groups = make_shapes(rng, args.shapes)
    pure = load_pure_kernel()
    active = api._kernel

    sanity = active.overlay(groups, active.OP_UNION) \
        == pure.overlay(groups, pure.OP_UNION)
    t_active = bench(active, groups, args.repeats)
    t_pure = bench(pure, groups, args.repeats)

    print(f"active backend : {kernel_backend()}")
    print(f"shapes         : {args.shapes} (union overlay, best of {args.repeats})")
    print(f"outputs match  : {sanity}")
    print(f"active kernel  : {t_active * 1000:8.2f} ms")
    print(f"pure python    : {t_pure * 1000:8.2f} ms")
    if kernel_backend() == "compiled":
        print(f"speedup        : {t_pure / t_active:8.2f}x")


if __name__ == "__main__":
    main()
