"""Compare the numba kernels against the interpreted fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

The fallback timings come from a child process started with
FPGADGETS_DISABLE_NUMBA=1, so every nested kernel runs interpreted.
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np


def _workloads():
    from fpgadgets import kernels, parse_presentation
    from fpgadgets.cosets import coset_enumerate

    rng = np.random.default_rng(0)
    # long words with plenty of cancellation
    words = [rng.choice(np.array([1, -1, 2, -2, 3, -3]), size=20_000).astype(np.int64) for _ in range(20)]
    a5 = parse_presentation("gens a b\nrel a^2\nrel b^3\nrel a b a b a b a b a b\n")
    psl = parse_presentation("gens a b\nrel a^2\nrel b^3\nrel a b a b a b a b a b a b a b\n"
                             "rel a b a b^-1 a b a b^-1 a b a b^-1 a b a b^-1\n")
    c200xc50 = parse_presentation("gens a b\nrel a^200\nrel b^50\nrel a b a^-1 b^-1\n")

    return {
        "free_reduce 20x20k": lambda: [kernels.free_reduce_codes(w) for w in words],
        "hlt A5 (60 cosets)": lambda: coset_enumerate(a5),
        "hlt PSL(2,7) (168 cosets)": lambda: coset_enumerate(psl),
        "hlt C200xC50 (10k cosets)": lambda: coset_enumerate(c200xc50),
    }


def measure(repeat):
    out = {}
    for name, fn in _workloads().items():
        fn()  # warm-up, includes JIT compilation when enabled
        out[name] = min(timeit.repeat(fn, number=1, repeat=repeat))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)

    if args.child:
        from fpgadgets._accel import NUMBA_ENABLED
        print(json.dumps({"numba": NUMBA_ENABLED, "times": measure(args.repeat)}))
        return 0

    def child(disable):
        env = dict(os.environ, FPGADGETS_DISABLE_NUMBA="1" if disable else "0")
        res = subprocess.run([sys.executable, __file__, "--child", "--repeat", str(args.repeat)],
                             env=env, capture_output=True, text=True, check=True)
        return json.loads(res.stdout)

    fast, slow = child(False), child(True)
    if not fast["numba"]:
        print("note: numba is not importable, both columns use the fallback")
    print(f"{'workload':<28}{'numba s':>10}{'fallback s':>12}{'speedup':>9}")
    for name, t_fast in fast["times"].items():
        t_slow = slow["times"][name]
        print(f"{name:<28}{t_fast:>10.4f}{t_slow:>12.4f}{t_slow / t_fast:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
