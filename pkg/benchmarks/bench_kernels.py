"""Compare the numba and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Both implementations are imported side by side, so one run times both
regardless of JNRANGE_BACKEND. The numba path is called once before timing
so compilation is excluded.
"""
import argparse
import time

import numpy as np

from jnrange.kernels import IMPLEMENTATIONS


def hermitian_stack(rng, batch, n):
    g = rng.normal(size=(batch, n, n)) + 1j * rng.normal(size=(batch, n, n))
    return (g + np.conj(np.swapaxes(g, 1, 2))) / 2


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    for n in (3, 8):
        a = hermitian_stack(rng, 2000, n)
        yield f"eigh_batch  2000 x {n}x{n}", "eigh_batch", (a,)
    psi = rng.normal(size=(100_000, 4)) + 1j * rng.normal(size=(100_000, 4))
    ops = hermitian_stack(rng, 3, 4)
    yield "quad_forms  1e5 states, 3 ops, N=4", "quad_forms", (psi, ops)
    u = rng.random((1_000_000, 2))
    yield "box_muller  1e6 pairs", "box_muller", (u,)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    names = sorted(IMPLEMENTATIONS)
    print(f"{'kernel':40s}" + "".join(f"{n:>12s}" for n in names) + f"{'speedup':>10s}")
    for label, kernel, inputs in cases(rng):
        row = {}
        for name in names:
            fn = getattr(IMPLEMENTATIONS[name], kernel)
            fn(*inputs)  # warm-up / JIT
            row[name] = best_of(lambda: fn(*inputs), args.repeat)
        line = f"{label:40s}" + "".join(f"{row[n] * 1e3:10.2f}ms" for n in names)
        if "numba" in row:
            line += f"{row['numpy'] / row['numba']:9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
