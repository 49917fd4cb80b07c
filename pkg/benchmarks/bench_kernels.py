"""Compare the compiled and NumPy S-matrix kernels on the reference sweep size.

    python benchmarks/bench_kernels.py [--sites 5001] [--energies 600] [--repeat 3]
"""
import argparse
import time

import numpy as np

from curvewire import kernels
from curvewire.geometry import reference_single_gaussian
from curvewire.hamiltonian import build_chain
from curvewire.scattering import smatrix_array
from curvewire.units import mev_to_hartree


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sites", type=int, default=5001)
    parser.add_argument("--energies", type=int, default=600)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--threads", type=int, nargs="+", default=[1, 4])
    args = parser.parse_args(argv)

    prof = reference_single_gaussian()
    chain = build_chain(prof, prof.length / (args.sites - 1))
    energies = mev_to_hartree(np.geomspace(0.5, 120.0, args.energies))
    print(f"chain: {chain.n_sites} sites, {energies.size} energies, backends: {', '.join(sorted(kernels.AVAILABLE))}")

    ref = smatrix_array(chain, energies, backend="numpy")
    timings = {}
    for backend in sorted(kernels.AVAILABLE):
        out = smatrix_array(chain, energies, backend=backend)
        dev = float(np.max(np.abs(out - ref)))
        for threads in args.threads:
            t = best_time(lambda: smatrix_array(chain, energies, threads=threads, backend=backend), args.repeat)
            timings[backend, threads] = t
            rate = energies.size * chain.n_sites / t / 1e6
            print(f"{backend:>7}  threads={threads:<2d} {t * 1e3:9.1f} ms  {rate:8.1f} Msite-energies/s  max|dS| vs numpy {dev:.1e}")
    if "cython" in kernels.AVAILABLE:
        for threads in args.threads:
            print(f"speedup at threads={threads}: {timings['numpy', threads] / timings['cython', threads]:.1f}x")


if __name__ == "__main__":
    main()
