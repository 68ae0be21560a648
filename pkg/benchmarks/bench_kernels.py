"""Compare the numba and pure-numpy paths of every hot kernel.

    python3 benchmarks/bench_kernels.py [--rows 2048] [--repeat 5]

Both paths are called directly, so the KICKROTOR_PURE_NUMPY flag does not
matter here. Timings are best-of-``repeat`` after one warm-up call (which
also absorbs numba compilation).
"""

import argparse
import time

import numpy as np

from kickrotor import kernels as K
from kickrotor.quantum import default_halfwidth, ladder_batch


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rows):
    rng = np.random.default_rng(0)
    idx = np.arange(rows * 16, dtype=np.uint64)
    phi, rho = rng.uniform(0, 2 * np.pi, rows * 16), rng.normal(0, 3, rows * 16)
    amps, mom = ladder_batch(rng.normal(0, 1.8, rows), default_halfwidth(7.0, 2) + 8)
    kicked = K.kick_numpy(amps, 7.0)
    yield ("philox (16x rows)",
           lambda: K.philox_blocks_numba(idx, 0, 1), lambda: K.philox_blocks_numpy(idx, 0, 1))
    yield ("standard map, 100 steps (16x rows)",
           lambda: K.standard_map_numba(phi, rho, 3.5, 100),
           lambda: K.standard_map_numpy(phi, rho, 3.5, 100))
    yield ("delta kick k=7",
           lambda: K.kick_numba(kicked, 7.0), lambda: K.kick_numpy(kicked, 7.0))
    yield ("rectangular pulse, 64 substeps",
           lambda: K.strang_pulse_numba(kicked, mom, 0.5, 7.0, 0.1, 64),
           lambda: K.strang_pulse_numpy(kicked, mom, 0.5, 7.0, 0.1, 64))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=2048)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"rows={args.rows}  repeat={args.repeat}")
    print(f"{'kernel':38s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, fast, slow in cases(args.rows):
        a, b = best_of(fast, args.repeat), best_of(slow, args.repeat)
        print(f"{name:38s} {a * 1e3:10.2f} {b * 1e3:10.2f} {b / a:8.2f}")


if __name__ == "__main__":
    main()
