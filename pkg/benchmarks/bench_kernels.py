"""Compare the compiled kernels with their pure-Python fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

Workloads: Smith diagonals of the boundary matrices of the order complex of
the open interval poset of {0<1}^n, and lexicographic trace normal forms of
random words over a partially commuting alphabet.
"""

import argparse
import random
import timeit

from hdasem import _kernels
from hdasem._kernels import _fallback
from hdasem.homology import open_interval_poset, order_complex


def smith_workload(n):
    C = order_complex(open_interval_poset(n))
    return [(C.boundary(k), C.counts()[k]) for k in range(1, C.dim + 1)]


def word_workload(count, length, letters, seed=3):
    rng = random.Random(seed)
    flags = [rng.random() < 0.7 for _ in range(letters)]
    indep = [[int(a and b) for b in flags] for a in flags]
    words = [[rng.randrange(letters) for _ in range(length)] for _ in range(count)]
    return words, indep


def bench(label, fn, repeat):
    best = min(timeit.repeat(fn, number=1, repeat=repeat))
    print(f"  {label:<10} {best * 1000:10.2f} ms")
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    core = _kernels._core
    print(f"backend in use: {_kernels.BACKEND}")
    if core is None:
        print("the compiled extension is not built; only the fallback is timed")

    for n in (5, 6):
        mats = smith_workload(n)
        size = sum(len(m) * c for m, c in mats)
        print(f"smith diagonal, order complex n={n} ({size} matrix entries)")
        slow = bench("python", lambda: [_fallback.smith_diagonal(m, c) for m, c in mats], args.repeat)
        if core is not None:
            assert [core.smith_diagonal(m, c) for m, c in mats] == [_fallback.smith_diagonal(m, c) for m, c in mats]
            fast = bench("compiled", lambda: [core.smith_diagonal(m, c) for m, c in mats], args.repeat)
            print(f"  speedup    {slow / fast:10.1f}x")

    for length in (12, 48):
        words, indep = word_workload(2000, length, 8)
        print(f"lex normal form, 2000 words of length {length}")
        slow = bench("python", lambda: [_fallback.lex_normal_form(w, indep) for w in words], args.repeat)
        if core is not None:
            assert all(core.lex_normal_form(w, indep) == _fallback.lex_normal_form(w, indep) for w in words)
            fast = bench("compiled", lambda: [core.lex_normal_form(w, indep) for w in words], args.repeat)
            print(f"  speedup    {slow / fast:10.1f}x")


if __name__ == "__main__":
    main()
