"""Compare the compiled moment kernels against the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat 20000]
"""

import argparse
import time

import numpy as np

from varbounds import matcore as mc
from varbounds.kernels import _fallback

try:
    from varbounds.kernels import _core
except ImportError:
    _core = None


def bench(fn, args, repeat):
    fn(*args)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat * 1e6


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=20000)
    args = parser.parse_args()

    print(f"{'kernel':<22}{'dim':>4}{'numpy us':>12}{'cython us':>12}{'speedup':>9}")
    for dim in (2, 4, 8, 16):
        hs = np.ascontiguousarray(
            [mc.random_observable(dim, [0, j]).matrix for j in range(4)])
        rho = np.ascontiguousarray(mc.random_state(dim, False, 1).matrix)
        psi = np.ascontiguousarray(
            np.linalg.eigh(rho)[1][:, -1])
        for name, fargs in (("state_moments", (hs, rho)),
                            ("pure_state_moments", (hs, psi))):
            repeat = max(200, args.repeat // dim)
            t_py = bench(getattr(_fallback, name), fargs, repeat)
            if _core is None:
                print(f"{name:<22}{dim:>4}{t_py:>12.2f}{'n/a':>12}{'':>9}")
            else:
                t_cy = bench(getattr(_core, name), fargs, repeat)
                print(f"{name:<22}{dim:>4}{t_py:>12.2f}{t_cy:>12.2f}"
                      f"{t_py / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
