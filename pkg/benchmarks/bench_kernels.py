"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both paths are imported directly, so the UQA_DISABLE_NUMBA flag does not
matter here. The first numba call (compilation) is timed separately.
"""
import argparse
import time

import numpy as np

from uqa import _accel
from uqa.operators import random_instance
from uqa.oracle import pole_weights


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def evolve_case(n, q, rng):
    inst = random_instance(rng, n_range=(n, n))
    s = inst.s
    factors = np.exp(1j * inst.theta)
    v0 = s.astype(np.complex128)
    return (factors, s, v0, q, inst.target)


def bisect_case(n, rng):
    return pole_weights(random_instance(rng, n_range=(n, n)))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    if not _accel.HAVE_NUMBA:
        print("numba not importable; nothing to compare")
        return

    small = evolve_case(8, 2, rng)
    t0 = time.perf_counter()
    _accel.evolve_numba(*small)
    _accel.bisect_roots_numba(*bisect_case(8, rng))
    print(f"first numba call (compile or cache load): {time.perf_counter() - t0:.3f}s\n")

    print(f"{'kernel':<12}{'size':>16}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for n, q in [(64, 2000), (512, 2000), (4096, 2000)]:
        case = evolve_case(n, q, rng)
        tn = best_of(lambda: _accel.evolve_numpy(*case), args.repeat)
        tj = best_of(lambda: _accel.evolve_numba(*case), args.repeat)
        v1, a1 = _accel.evolve_numpy(*case)
        v2, a2 = _accel.evolve_numba(*case)
        assert np.allclose(a1, a2, atol=1e-10)
        print(f"{'evolve':<12}{f'N={n} q={q}':>16}{tn:>12.4f}{tj:>12.4f}{tn / tj:>10.1f}")
    for n in (64, 256, 512, 1024):
        poles, weights = bisect_case(n, rng)
        tn = best_of(lambda: _accel.bisect_roots_numpy(poles, weights), args.repeat)
        tj = best_of(lambda: _accel.bisect_roots_numba(poles, weights), args.repeat)
        print(f"{'bisect':<12}{f'N={n}':>16}{tn:>12.4f}{tj:>12.4f}{tn / tj:>10.1f}")


if __name__ == "__main__":
    main()
