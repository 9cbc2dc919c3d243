#!/usr/bin/env python3
"""Regenerate the full set of reports for the built-in metrics:
classification for each builtin, the published-table verification for the
regular charged black hole, and the side-by-side comparison of the two
charged black holes.  Reports land in reports/ as JSON."""

import os
import sys

from curvkit import cli

OUT = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                   "reports")


def main():
    os.makedirs(OUT, exist_ok=True)
    jobs = []
    for mid in ("bardeen", "reissner_nordstrom", "schwarzschild",
                "minkowski"):
        jobs.append((f"classify_{mid}.json",
                     ["classify", "--metric", mid]))
    jobs.append(("verify_bardeen.json", ["verify", "--metric", "bardeen"]))
    jobs.append(("compare_bardeen_rn.json",
                 ["compare", "--metric", "bardeen",
                  "--metric", "reissner_nordstrom"]))
    status = 0
    for fname, argv in jobs:
        path = os.path.join(OUT, fname)
        rc = cli.run(argv + ["--out", path])
        print(f"{fname}: {'ok' if rc == 0 else f'exit {rc}'}")
        status = status or rc
    return status


if __name__ == "__main__":
    sys.exit(main())
