#!/usr/bin/env python3
"""Run the trilevel counterexample demo for a few thresholds.

The exact solver reports the instance INFEASIBLE, while the naive
dual-feasible-basis replacement of the last level accepts a certificate
point, so every run should end with mismatch = true.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from klp.jsonio import dumps, demo_to_obj
from klp.oracle import naive_trilevel_demo


def main() -> None:
    thresholds = sys.argv[1:] or ["0", "1/2", "1"]
    for t in thresholds:
        record = naive_trilevel_demo(t)
        sys.stdout.write(dumps(demo_to_obj(record)))


if __name__ == "__main__":
    main()
