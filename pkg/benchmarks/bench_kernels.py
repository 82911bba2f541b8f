"""Time the compiled and pure-Python kernels on the workloads the CLI runs.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from egspin import _backend, fermi_gas

WORKLOADS = {}


def workload(name):
    def wrap(fn):
        WORKLOADS[name] = fn
        return fn
    return wrap


@workload("pair function, 121 x at t=0.2")
def pair_sweep(k):
    mu = fermi_gas.solve_chemical_potential(0.2).mu_rel
    for x in np.linspace(0.0, 12.0, 121):
        k.pair_function(float(x), mu, 0.2, 1e-10, 1e-10, 40)


@workload("pair function, 121 x at t=0")
def pair_sweep_cold(k):
    for x in np.linspace(0.0, 12.0, 121):
        k.pair_function(float(x), 1.0, 0.0, 1e-10, 1e-10, 40)


@workload("chemical potential, 20 temperatures")
def mu_solves(k):
    saved = fermi_gas.kernels
    fermi_gas.kernels = k
    try:
        for t in np.linspace(0.01, 0.5, 20):
            fermi_gas.solve_chemical_potential(float(t))
    finally:
        fermi_gas.kernels = saved


@workload("eigh4, 2000 random symmetric matrices")
def eigen_loop(k, _mats=[]):
    if not _mats:
        rng = np.random.default_rng(0)
        for _ in range(2000):
            a = rng.uniform(-1, 1, (4, 4))
            _mats.append((0.5 * (a + a.T)).ravel().tolist())
    for m in _mats:
        k.eigh4(m)


def best_of(fn, k, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(k)
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = sorted(_backend.AVAILABLE)
    if "cython" not in backends:
        print("compiled kernels not built; timing the pure-Python backend only")
    print(f"{'workload':<40}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in WORKLOADS.items():
        t = {b: best_of(fn, _backend.AVAILABLE[b], args.repeat) for b in backends}
        line = f"{name:<40}" + "".join(f"{t[b] * 1e3:>10.2f}ms" for b in backends)
        if len(backends) > 1:
            line += f"{t['python'] / t['cython']:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
