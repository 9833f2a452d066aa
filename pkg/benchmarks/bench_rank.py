"""Time the compiled and pure-Python modular rank kernels on stress matrices.

Usage: python3 benchmarks/bench_rank.py [repeats]
"""
import sys
import timeit
from array import array

from pseudofold import _pykernels
from pseudofold.generators import chain_sum, inflate, sharp_one_singularity
from pseudofold.rigidity import generic_embedding, stress_system

try:
    from pseudofold import _ckernels
except ImportError:
    _ckernels = None

P = 2 ** 31 - 1


def main(repeats: int = 3):
    cases = {
        "chain8": chain_sum(8),
        "chain8+moves": inflate(chain_sum(8), 20, 1),
        "sharp1(3)": sharp_one_singularity(3)[0],
    }
    print(f"{'complex':14} {'shape':>10} {'python s':>10} {'cython s':>10}")
    for name, K in cases.items():
        m = stress_system(K, generic_embedding(K, 1)).matrix
        nr, nc = len(m), len(m[0])
        flat = [x % P for row in m for x in row]
        py = min(timeit.repeat(lambda: _pykernels.rank_mod_p(flat, nr, nc, P), number=1, repeat=repeats))
        if _ckernels is not None:
            data = array("q", flat)
            cy = min(timeit.repeat(lambda: _ckernels.rank_mod_p(data, nr, nc, P), number=1, repeat=repeats))
            cy_text = f"{cy:10.4f}"
        else:
            cy_text = f"{'n/a':>10}"
        print(f"{name:14} {f'{nr}x{nc}':>10} {py:10.4f} {cy_text}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 3)
