"""Time the numba and numpy versions of every kernel on N=10 sized inputs.

    python benchmarks/bench_kernels.py --repeat 5

The first numba call (compilation or cache load) is reported separately and
excluded from the steady-state timing. Outputs of the two versions are also
compared, so a speedup never hides a wrong answer.
"""

import argparse
import time

import numpy as np

from oecm import _kernels
from oecm.hamiltonian import SpinChainSpec, build_ising, diagonalize
from oecm.hilbert import down_counts


def inputs(n_sites=10, n_times=20001):
    decomp = diagonalize(build_ising(SpinChainSpec(n_sites)))
    energies = decomp.energies
    gaps = np.sort(_kernels.pair_gaps_numpy(energies))
    rng = np.random.default_rng(0)
    probs = rng.dirichlet(np.ones(n_sites + 1), size=n_times)
    times = np.linspace(0.0, 1000.0, n_times)
    weights = rng.random((2048, 2**n_sites))
    labels = down_counts(n_sites).astype(np.int64)
    return {
        "pair_gaps": (energies,),
        "merge_sorted": (gaps, 1e-10 * decomp.spectral_range),
        "max_window_count": (gaps, 0.01),
        "label_sums": (weights, labels, n_sites + 1),
        "cumulative_trapezoid": (probs, times),
        "entropy_rows": (probs,),
    }


def best_of(func, args, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        out = func(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.allclose(a, b, rtol=1e-12, atol=1e-12)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--n", type=int, default=10, help="chain length used to size the inputs")
    args = parser.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    print(f"{'kernel':22s} {'first numba':>12s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}  agree")
    for name, kargs in inputs(args.n).items():
        py, jit = _kernels.implementations(name)
        start = time.perf_counter()
        jit(*kargs)
        first = time.perf_counter() - start
        t_jit, out_jit = best_of(jit, kargs, args.repeat)
        t_py, out_py = best_of(py, kargs, args.repeat)
        print(
            f"{name:22s} {first * 1e3:10.2f}ms {t_jit * 1e3:8.3f}ms {t_py * 1e3:8.3f}ms "
            f"{t_py / t_jit:7.1f}x  {same(out_jit, out_py)}"
        )


if __name__ == "__main__":
    main()
