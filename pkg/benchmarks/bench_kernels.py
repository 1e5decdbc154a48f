"""Time the compiled kernels against the numpy fallback.

Usage: ``python3 benchmarks/bench_kernels.py [--repeat N]``. Without the
compiled extension only the numpy column is printed.
"""
import argparse
import timeit

import numpy as np
from scipy.special import roots_hermite

from kreinbounds import _kernels
from kreinbounds.enclosures import random_unit_vectors


def _cases(rng):
    n0, n1, samples = 6, 6, 2000

    def c(*shape):
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    a0, a1, b, cc = c(n0, n0), c(n1, n1), c(n0, n1), c(n1, n0)
    xs, ys = random_unit_vectors(rng, samples, n0), random_unit_vectors(rng, samples, n1)
    nodes, _ = roots_hermite(306)
    s0 = np.sort(rng.uniform(-10, 0, 400))
    s1 = np.sort(rng.uniform(0, 10, 400))
    return {
        "qnr_eigs (2000 samples, 6+6)": lambda impl: _kernels.qnr_eigs(a0, a1, b, cc, xs, ys, impl=impl),
        "rayleigh_quotients (2000, 6)": lambda impl: _kernels.rayleigh_quotients(a0, xs, impl=impl),
        "hermite_weighted (306 nodes, 64)": lambda impl: _kernels.hermite_weighted(nodes, 64, 306, impl=impl),
        "min_cross_distance (400 x 400)": lambda impl: _kernels.min_cross_distance(s0, s1, impl=impl),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--number", type=int, default=20)
    args = parser.parse_args(argv)

    backends = _kernels.available_backends()
    names = sorted(backends)
    cases = _cases(np.random.default_rng(0))
    header = f"{'kernel':<34}" + "".join(f"{n + ' [ms]':>16}" for n in names)
    if len(names) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for label, fn in cases.items():
        times = {}
        for name in names:
            impl = backends[name]
            fn(impl)  # warm up
            runs = timeit.repeat(lambda: fn(impl), repeat=args.repeat, number=args.number)
            times[name] = 1e3 * min(runs) / args.number
        line = f"{label:<34}" + "".join(f"{times[n]:>16.4f}" for n in names)
        if "cython" in times:
            line += f"{times['numpy'] / times['cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
