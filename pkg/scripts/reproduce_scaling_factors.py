#!/usr/bin/env python3
"""Reproduce the steady-state scaling-factor tables.

Runs the preset families through the CLI and prints one row per run:
the regular degenerate family (a > 0, k = 3), optionally the k-sweep at
a = 0.5, and the singular half-line family (a < 0) against the prediction
gamma = 1 - a.  Expect roughly an hour per run on a laptop-class machine.

Usage:
    python scripts/reproduce_scaling_factors.py regular   [a values...]
    python scripts/reproduce_scaling_factors.py halfline  [a values...]
    python scripts/reproduce_scaling_factors.py odd       [a values...]
"""

import json
import sys
from pathlib import Path

from gclmlab.cli import main as cli_main

FAMILIES = {
    "regular": ("regular_a{a:g}_k3", [0.3, 0.5]),
    "halfline": ("halfline_a{a:g}", [-0.5, -1.0]),
    "odd": ("odd_a{a:g}", [-1.0]),
}


def main(argv):
    family = argv[0] if argv else "regular"
    pattern, default_as = FAMILIES[family]
    a_values = [float(v) for v in argv[1:]] or default_as
    rows = []
    for a in a_values:
        preset = pattern.format(a=a)
        out = Path("out") / preset
        code = cli_main(["simulate", "--config", preset, "--out", str(out),
                         "--verbose"])
        if code not in (0, 4):
            print(f"{preset}: failed with exit code {code}")
            continue
        s = json.loads((out / "summary.json").read_text())
        rows.append((a, s["c_l"], s["c_omega"], s["gamma"], s["reason"]))
    print(f"\n{'a':>8} {'c_l':>12} {'c_omega':>12} {'gamma':>12}  reason")
    for a, cl, cw, g, reason in rows:
        print(f"{a:8.3f} {cl:12.6f} {cw:12.6f} {g:12.6f}  {reason}")


if __name__ == "__main__":
    main(sys.argv[1:])
