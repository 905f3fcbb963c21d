"""Compare the compiled and numpy Monte Carlo kernels on the same point blocks.

Usage::

    python benchmarks/bench_kernels.py --trials 2000 --density 1 --repeat 5
"""
import argparse
import time

import numpy as np

from dirnet import AntennaPattern, SystemParams, kernels
from dirnet.montecarlo import SimulationConfig, _block_points, _pattern_args


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--trials", type=int, default=2000)
    parser.add_argument("--density", type=float, default=1.0)
    parser.add_argument("--radius", type=float, default=8.0)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    params = SystemParams(density=args.density)
    config = SimulationConfig(params, AntennaPattern(1.0, 2), radius=args.radius,
                              trials=args.trials)
    _, offsets, flat = _block_points(config, 0, args.trials)
    shape = _pattern_args(config)
    print(f"{args.trials} trials, {len(flat[0])} points, backends: {sorted(kernels.BACKENDS)}")
    print(f"{'backend':<8} {'interference (ms)':>18} {'degree (ms)':>12}")

    results = {}
    for name in sorted(kernels.BACKENDS):
        kern = kernels.get(name)
        t_i, interference = _best(lambda: kern.interference(offsets, *flat, *shape), args.repeat)
        t_d, degree = _best(lambda: kern.degree_counts(offsets, *flat, *shape, params.power,
                                                       params.noise, params.gamma,
                                                       params.threshold), args.repeat)
        results[name] = (interference, degree, t_i, t_d)
        print(f"{name:<8} {1e3 * t_i:>18.2f} {1e3 * t_d:>12.2f}")

    if len(results) == 2:
        (i_c, d_c, ti_c, td_c), (i_p, d_p, ti_p, td_p) = results["cython"], results["python"]
        print(f"speedup  {ti_p / ti_c:>18.1f}x {td_p / td_c:>11.1f}x")
        print("max relative interference difference:",
              float(np.max(np.abs(i_c - i_p) / np.maximum(np.abs(i_p), 1e-300))))
        print("degree counts identical:", bool(np.array_equal(d_c, d_p)))


if __name__ == "__main__":
    main()
