"""Compare the compiled and pure-Python integer kernels.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``. Inputs are
the rank-23 and rank-24 Gram matrices and random monodromy operators, which
is the workload the library actually generates.
"""

import argparse
import random
import timeit

from k3nrefl import _pykernels, kernels
from k3nrefl.k3n import make_k3n, mukai_lattice
from k3nrefl.monodromy import random_monodromy
from k3nrefl.suites import monodromy_invariance, reflectivity_fuzz
from k3nrefl.catalog import all_entries

try:
    from k3nrefl import _ckernels
except ImportError:
    _ckernels = None


def workloads(seed: int = 0):
    rng = random.Random(seed)
    gram = make_k3n(7).lattice.gram
    g = random_monodromy(7, seed, 4).matrix
    x = tuple(rng.randint(-50, 50) for _ in range(23))
    y = tuple(rng.randint(-50, 50) for _ in range(23))
    big = tuple(tuple(c * 2**40 for c in row) for row in g)  # forces the overflow fallback
    return {
        "matmul 23x23": ("matmul", (g, gram)),
        "matvec 23": ("matvec", (g, x)),
        "bilinear 23": ("bilinear", (gram, x, y)),
        "is_isometry 23": ("is_isometry", (g, gram)),
        "bilinear 24 (Mukai)": ("bilinear", (mukai_lattice().gram, x + (1,), y + (2,))),
        "matmul 23x23, entries > 2^40": ("matmul", (big, big)),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=200)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled kernels are not built; nothing to compare")
        return
    print(f"{'kernel':32} {'python (us)':>12} {'compiled (us)':>14} {'speedup':>8}")
    for name, (fn, call_args) in workloads().items():
        py_fn, c_fn = getattr(_pykernels, fn), getattr(_ckernels, fn)
        assert py_fn(*call_args) == c_fn(*call_args)
        t_py = min(timeit.repeat(lambda: py_fn(*call_args), number=args.repeat, repeat=3)) / args.repeat
        t_c = min(timeit.repeat(lambda: c_fn(*call_args), number=args.repeat, repeat=3)) / args.repeat
        print(f"{name:32} {t_py * 1e6:12.1f} {t_c * 1e6:14.1f} {t_py / t_c:7.1f}x")

    print()
    print(f"{'end to end':32} {'python (s)':>12} {'compiled (s)':>14} {'speedup':>8}")
    entries = all_entries()
    suites = {
        "reflectivity fuzz, 5 x 100": lambda: reflectivity_fuzz(range(2, 7), 100, seed=1),
        "monodromy invariance, 27 x 5": lambda: monodromy_invariance(entries, 5, seed=1),
    }
    for name, run in suites.items():
        t_py = _with_backend(_pykernels, run)
        t_c = _with_backend(_ckernels, run)
        print(f"{name:32} {t_py:12.2f} {t_c:14.2f} {t_py / t_c:7.1f}x")


def _with_backend(module, run):
    """Time run() with the library's kernels swapped for those of module."""
    names = ("matmul", "matvec", "bilinear", "is_isometry")
    saved = {n: getattr(kernels, n) for n in names}
    try:
        for n in names:
            setattr(kernels, n, getattr(module, n))
        start = timeit.default_timer()
        run()
        return timeit.default_timer() - start
    finally:
        for n, fn in saved.items():
            setattr(kernels, n, fn)


if __name__ == "__main__":
    main()
