#!/usr/bin/env python3
"""
Freeness sweep over the small test groups.

For every (group, m) the invariant basis of D_m and the basis of D~_m are
built and certified; the degree bookkeeping Σ exp(D_m) = Σ m n + |A|,
Σ exp(D~_m) = Σ m n and Σ (exp - c_V) = |A| is checked alongside.  The
integral formula basis is certified for A2 and A3 with m = 1.

    python scripts/freeness_sweep.py --threads 4
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import time

from quasiarr import config
from quasiarr.groups import Family, MultFn, build_group, c_v
from quasiarr.logder import GroupContext, free_basis_dm, free_basis_dtilde, integral_basis_certificate

CASES = [
    (Family.A, (2,)),
    (Family.A, (3,)),
    (Family.B, (2,)),
    (Family.B, (3,)),
    (Family.I2, (6,)),
    (Family.G, (3, 1, 2)),
]


def multiplicities(group) -> list[MultFn]:
    out = [MultFn.constant(group, v) for v in (0, 1, 2)]
    if len(group.orbits) == 2:
        out.append(MultFn((2, 1)))
    return out


def sweep_case(family: Family, params: tuple) -> list[tuple[str, bool]]:
    group = build_group(family, params)
    ctx = GroupContext.of(group)
    results = []
    for m in multiplicities(group):
        cv = c_v(group, m)
        cutoff = math.ceil(cv) + max(ctx.basic.degrees)
        weight = sum(m.of(h) * h.n_H for h in group.hyperplanes)

        dm = free_basis_dm(ctx, m, cutoff)
        ok = dm.passed and sum(dm.exponents) == weight + len(group.hyperplanes)
        ok = ok and sum(dm.exponent_shift(cv)) == len(group.hyperplanes)
        results.append((f"{group.label} m={m} D_m {dm.exponents}", ok))

        dt = free_basis_dtilde(group, m, cutoff)
        ok = dt.passed and sum(dt.exponents) == weight
        results.append((f"{group.label} m={m} D~_m {dt.exponents}", ok))
    return results


def main() -> int:
    parser = argparse.ArgumentParser(description="Certify D_m and D~_m for the small test groups")
    parser.add_argument("--threads", type=int, default=1, help="Worker threads (default: 1)")
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(asctime)s %(message)s")
    config.settings.threads = args.threads

    failed = 0
    start = time.perf_counter()
    for family, params in CASES:
        for name, ok in sweep_case(family, params):
            print(f"{'PASS' if ok else 'FAIL'}  {name}")
            failed += not ok
    for n in (2, 3):
        cert = integral_basis_certificate(build_group(Family.A, (n,)), 1)
        print(f"{cert.verdict}  A{n} m=1 integral basis {cert.exponents}")
        failed += not cert.passed
    print(f"{failed} failures in {time.perf_counter() - start:.1f}s")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
