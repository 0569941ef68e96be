"""Compare the numba and numpy kernels of the derivative inversion.

    python benchmarks/bench_invert.py [--sizes 100 10000 1000000] [--repeat 5]

The numba kernel is timed after a warm-up call so compilation is excluded.
"""
import argparse
import time

import numpy as np

from divdecomp import _jit
from divdecomp.generator import BURG_ENTROPY, HALF_SQUARE, NEG_ENTROPY, conjugate_grid
from divdecomp.rootfind import invert_increasing


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[100, 10_000, 1_000_000])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = ["numpy"] + (["numba"] if _jit.NUMBA_AVAILABLE else [])
    if len(backends) == 1:
        print("numba unavailable or disabled; timing the numpy kernel only")
    print(f"{'generator':<14}{'n':>10}" + "".join(f"{b + ' [ms]':>14}" for b in backends)
          + f"{'speedup':>10}{'max |dx|':>12}")
    rng = np.random.default_rng(0)
    for g in (NEG_ENTROPY, BURG_ENTROPY, HALF_SQUARE):
        pool = conjugate_grid(g, 1000)
        for n in args.sizes:
            y = rng.choice(pool, n)
            run = {b: (lambda b=b: invert_increasing(g.f_prime, y, g.domain.lower, g.domain.upper,
                                                     df=g.f_second, backend=b))
                   for b in backends}
            if "numba" in run:
                run["numba"]()
            t = {b: best_of(fn, args.repeat) for b, fn in run.items()}
            xs = [fn() for fn in run.values()]
            dx = float(np.max(np.abs(xs[0] - xs[-1])))
            speed = t["numpy"] / t["numba"] if "numba" in t else float("nan")
            print(f"{g.name:<14}{n:>10}" + "".join(f"{1e3 * t[b]:>14.3f}" for b in backends)
                  + f"{speed:>10.1f}{dx:>12.1e}")


if __name__ == "__main__":
    main()
