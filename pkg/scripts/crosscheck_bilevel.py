#!/usr/bin/env python3
"""Cross-check the multilevel solver against the basis-enumeration oracle on
seeded random standard-form bilevel instances.

Usage: crosscheck_bilevel.py [COUNT] [SEED]
"""

import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from klp.mlp import solve
from klp.oracle import bilevel_basis_solve, random_bilevel, to_mlp


def main() -> None:
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 50
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 60_000
    rng = random.Random(seed)
    mismatches = 0
    started = time.time()
    print(f"{'#':>3} {'n1':>3} {'n2':>3} {'bases':>5} {'solver':>12} {'oracle':>12}")
    for i in range(count):
        problem = random_bilevel(rng)
        fast = solve(to_mlp(problem))
        slow = bilevel_basis_solve(problem)
        agree = fast.status == slow.status and fast.value == slow.value
        mismatches += not agree
        mark = "" if agree else "   <-- MISMATCH"
        print(
            f"{i:>3} {problem.n1:>3} {problem.n2:>3} {slow.bases_total:>5} "
            f"{fast.status + '/' + str(fast.value):>12} "
            f"{slow.status + '/' + str(slow.value):>12}{mark}"
        )
    elapsed = time.time() - started
    print(f"\n{count} instances, {mismatches} mismatches, {elapsed:.1f}s")
    sys.exit(1 if mismatches else 0)


if __name__ == "__main__":
    main()
