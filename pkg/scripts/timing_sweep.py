#!/usr/bin/env python3
"""Rough timing sweep of the exact solver over growing instance shapes.

Cell counts in the value-function reformulation grow combinatorially with
levels and rows, so expect desk-scale limits; this prints where they are on
the current machine.
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from klp.mlp import solve
from klp.oracle import random_instance

SHAPES = [
    (1, (3,), (4,)),
    (2, (1, 2), (1, 3)),
    (2, (2, 2), (2, 4)),
    (2, (2, 3), (2, 5)),
    (3, (1, 1, 1), (1, 1, 3)),
    (3, (1, 1, 2), (1, 1, 4)),
    (3, (1, 2, 2), (1, 2, 4)),
    (3, (2, 2, 2), (2, 2, 4)),
]


def main() -> None:
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    print(f"{'k':>2} {'dims':>12} {'rows':>12} {'mean_s':>8} {'max_s':>8} statuses")
    for k, dims, rows in SHAPES:
        times = []
        statuses = []
        for r in range(repeats):
            inst = random_instance(9_000 + r, k, dims, rows, 3)
            started = time.time()
            statuses.append(solve(inst).status)
            times.append(time.time() - started)
        print(
            f"{k:>2} {str(dims):>12} {str(rows):>12} "
            f"{sum(times) / len(times):>8.3f} {max(times):>8.3f} {statuses}"
        )


if __name__ == "__main__":
    main()
