"""Compare the numba and numpy kernel backends on realistic webs.

Usage:
    python benchmarks/bench_kernels.py [--sizes 6,8,12,24,40] [--reps 2000]

Times the four matrix kernels (square/triangle/transitivity conditions,
counting-form incoherence, forbidden-square scan) on relation matrices
of webs of random flat structures.  The same inputs run through both
backends; results must agree, timings are printed per kernel and size.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from fbv_prover import kernels
from fbv_prover.relweb import web_of
from families import random_flat_distinct


def make_inputs(size: int, count: int, rng: random.Random):
    out = []
    while len(out) < count:
        s = random_flat_distinct(rng, names="abcdefghij",
                                 max_pairs=max(2, size // 2))
        w = web_of(s)
        if len(w) < 4:
            continue
        pairs = np.asarray(w.dual_pairs(), dtype=np.int64)
        out.append((np.ascontiguousarray(w.matrix), pairs))
    return out


def run_kernel(name, fn, inputs):
    t0 = time.perf_counter()
    acc = 0
    for m, pairs in inputs:
        if name == "ainc":
            acc += fn(m, 0, 1)
        elif name == "c2":
            acc += int(fn(m, pairs)[0])
        else:
            acc += int(fn(m)[0])
    return time.perf_counter() - t0, acc


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    inputs = make_inputs(12, args.reps, rng)

    names = ("s4", "s6", "s7", "ainc", "c2")
    results = {}
    for backend in sorted(kernels._BACKENDS):
        kernels.set_backend(backend)
        # warm-up pass compiles the jitted versions
        for name in names:
            run_kernel(name, getattr(kernels, {"s4": "s4_witness",
                                               "s6": "s6_witness",
                                               "s7": "s7_witness",
                                               "ainc": "ainc_count",
                                               "c2": "c2_witness"}[name]),
                       inputs[:10])
        for name in names:
            fn = getattr(kernels, {"s4": "s4_witness", "s6": "s6_witness",
                                   "s7": "s7_witness", "ainc": "ainc_count",
                                   "c2": "c2_witness"}[name])
            dt, acc = run_kernel(name, fn, inputs)
            results[(backend, name)] = (dt, acc)

    print(f"{args.reps} webs per kernel")
    print(f"{'kernel':>6} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for name in names:
        nb = results.get(("numba", name))
        nl = results.get(("numpy", name))
        if nb and nl:
            assert nb[1] == nl[1], f"backend disagreement on {name}"
            print(f"{name:>6} {nb[0]*1e6/args.reps:>10.1f}us "
                  f"{nl[0]*1e6/args.reps:>10.1f}us {nl[0]/nb[0]:>8.1f}x")
        else:
            only = nb or nl
            print(f"{name:>6} {only[0]*1e6/args.reps:>10.1f}us (single backend)")


if __name__ == "__main__":
    main()
