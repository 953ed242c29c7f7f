#!/usr/bin/env python3
"""Benchmark the compiled elimination kernels against the pure-Python path.

Times exact rank computation over GF(11) and GF(2^8) at several matrix
sizes, plus one end-to-end capacity sweep per backend.  Usage:

    python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import random
import time

from coopstore import _purekern, kernels
from coopstore.field import binary_field, prime_field


def time_rank(field, size, repeats, impl):
    rng = random.Random(size * field.order)
    mats = [
        [rng.randrange(field.order) for _ in range(size * size)] for _ in range(repeats)
    ]
    start = time.perf_counter()
    for data in mats:
        impl(data, size, size, field)
    return (time.perf_counter() - start) / repeats


def compiled_rank(data, nrows, ncols, field):
    kind = 0 if field.kind == "prime" else 1
    m = 0 if field.kind == "prime" else field.m
    mod = field.order if field.kind == "prime" else field.poly
    from coopstore import _fastkern

    return _fastkern.rank(data, nrows, ncols, kind, m, mod)


def bench_ranks(repeats):
    have_ext = kernels._fastkern is not None
    print(f"compiled kernel available: {have_ext}")
    print()
    print(f"{'field':>10} {'size':>6} {'pure (ms)':>12} {'compiled (ms)':>14} {'speedup':>8}")
    for field in (prime_field(11), prime_field(65537), binary_field(8), binary_field(16)):
        for size in (8, 16, 32, 64):
            pure = time_rank(field, size, repeats, _purekern.rank) * 1000
            if have_ext:
                comp = time_rank(field, size, repeats, compiled_rank) * 1000
                print(f"{field!r:>10} {size:>6} {pure:>12.3f} {comp:>14.3f} {pure / comp:>7.1f}x")
            else:
                print(f"{field!r:>10} {size:>6} {pure:>12.3f} {'-':>14} {'-':>8}")


def bench_sweep():
    import os
    import subprocess
    import sys

    print()
    print("end-to-end: S1 capacity sweep + lemma suite per backend")
    code = (
        "import time; from coopstore.eve import capacity_table, lemma_suite; "
        "from coopstore.instances import s1; "
        "t0=time.perf_counter(); c=s1(); capacity_table(c); lemma_suite(c); "
        "print(f'{time.perf_counter()-t0:.3f}s')"
    )
    for label, env_val in (("compiled", "0"), ("pure-python", "1")):
        env = dict(os.environ, COOPSTORE_PURE=env_val)
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        print(f"  {label:>12}: {out.stdout.strip() or out.stderr.strip()}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()
    bench_ranks(args.repeats)
    bench_sweep()


if __name__ == "__main__":
    main()
