#!/usr/bin/env python3
"""Traveling-wave fixed points across a: speed, tail exponent or support.

Prints r(a) with the tail classification and checks the admissibility of
every converged profile.  Takes a couple of minutes for the default sweep.
"""

import sys

from gclmlab.waves import check_membership_Da, solve_fixed_point


def main(argv):
    a_values = [float(v) for v in argv] or \
        [-1.0, -0.8, -0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6, 0.8]
    print(f"{'a':>6} {'r':>10} {'iters':>6} {'tail/support':>16} {'in D_a':>7}")
    for a in a_values:
        res = solve_fixed_point(a, tol=1e-8, max_iter=1000)
        member = check_membership_Da(res.profile, tol=1e-7).passed
        if res.tail_exponent is not None:
            tail = f"x^{res.tail_exponent:+.4f}"
            expect = -1.0 / (1.0 + abs(a)) if a < 0 else -2.0
            tail += f" (thy {expect:+.4f})"
        else:
            tail = f"L = {res.support:.4f}"
        print(f"{a:6.2f} {res.r:10.6f} {res.iterations:6d} {tail:>16} {member!s:>7}")


if __name__ == "__main__":
    main(sys.argv[1:])
