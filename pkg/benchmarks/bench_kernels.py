"""Compare the numba and pure-numpy kernel paths.

Times each hot kernel on random small-coefficient series of a few sizes,
checks the two paths return identical arrays, and optionally times a full
registry run in a subprocess under each setting of QRR_DISABLE_JIT.

    python3 benchmarks/bench_kernels.py --sizes 400 2000 8000 --repeat 5
    python3 benchmarks/bench_kernels.py --end-to-end
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from qrr import _kernels as K


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(n: int, rng: np.random.Generator):
    a = rng.integers(-3, 4, n).astype(np.int64)
    b = rng.integers(-3, 4, n).astype(np.int64)
    # prod_{j<=5} (1 - q^j): its inverse (partitions into parts <= 5) stays inside int64
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    for j in range(1, 6):
        unit = K.mul_binomial(unit, j, 1)
    return {
        "convolve": lambda k: K.convolve(a, b, n, kernels=k),
        "inverse": lambda k: K.inverse(unit, n, kernels=k),
        "mul_binomial": lambda k: K.mul_binomial(a, 3, -1, kernels=k),
        "div_binomial": lambda k: K.div_binomial(a, 3, 1, kernels=k),
    }


def bench_kernels(sizes, repeat: int, seed: int) -> bool:
    rng = np.random.default_rng(seed)
    if not K.HAVE_NUMBA:
        print("numba is not importable; only the numpy path can be timed")
    paths = {name: K.KERNELS[name] for name in ("numba", "numpy")}
    # compile outside the timed region
    for fn in _cases(16, rng).values():
        fn(paths["numba"])
    same = True
    print(f"{'kernel':<14}{'n':>7}{'numba ms':>12}{'numpy ms':>12}{'speedup':>9}  equal")
    for n in sizes:
        for name, fn in _cases(n, rng).items():
            r_nb, r_np = fn(paths["numba"]), fn(paths["numpy"])
            eq = r_nb.dtype == r_np.dtype and np.array_equal(r_nb, r_np)
            same &= eq
            t_nb = _best(lambda: fn(paths["numba"]), repeat)
            t_np = _best(lambda: fn(paths["numpy"]), repeat)
            print(f"{name:<14}{n:>7}{t_nb * 1e3:>12.3f}{t_np * 1e3:>12.3f}"
                  f"{t_np / t_nb:>8.1f}x  {eq}")
    return same


def bench_end_to_end(order: int) -> None:
    for flag in ("0", "1"):
        env = dict(os.environ, QRR_DISABLE_JIT=flag)
        t0 = time.perf_counter()
        out = subprocess.run([sys.executable, "-m", "qrr", "verify", "--all", "--order",
                              str(order)], env=env, capture_output=True, text=True)
        dt = time.perf_counter() - t0
        label = "numpy" if flag == "1" else "numba"
        summary = out.stdout.strip().splitlines()[-1] if out.stdout else out.stderr
        print(f"registry at q-order {order}, {label:<5}: {dt:6.2f} s  exit {out.returncode}  "
              f"({summary})")


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[400, 2000, 8000])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=20240611)
    p.add_argument("--end-to-end", action="store_true",
                   help="also time a full registry run under each backend")
    p.add_argument("--order", type=int, default=100)
    args = p.parse_args(argv)
    ok = bench_kernels(args.sizes, args.repeat, args.seed)
    if args.end_to_end:
        bench_end_to_end(args.order)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
