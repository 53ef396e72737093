"""Initial profiles for the rescaling solver, as f0(X) = W0(X)/X^k on X >= 0.

The library covers the degenerate families used throughout:

  regular_degenerate   f0 = -3/(3 + k X^(k+3)), vanishing order exactly k,
                       minimum of W0 at X = 1, f0(0) = -1  (a > 0 runs)
  odd_infinite_order   W0 = -27 x^-3 exp(-3/x) on x > 0, odd extension
  odd_outside_unit     W0 = -x^-3 exp(-1/(x-1)) for x > 1, odd, zero on [-1, 1]
  half_infinite_order  same profile as odd_infinite_order, supported on x > 0
  half_outside_unit    same as odd_outside_unit, supported on x > 1
  a0_oracle            W0 = -6 (x/sqrt(2))^3 / (1 + (x/sqrt(2))^6): the k = 3
                       power profile rescaled so H(W0)(0) = 2, H(W0)_XX(0) = 4
  expr:<python>        arbitrary numpy expression in X for W0 (divided by X^k)

All profiles are negative on their support and degenerate at the origin.
"""

from __future__ import annotations

import numpy as np


def _infinite_order_f(x: np.ndarray, k: int) -> np.ndarray:
    # -27 x^-(3+k) exp(-3/x), evaluated in log space to dodge under/overflow
    out = np.zeros_like(x)
    pos = x > 0
    xp = x[pos]
    out[pos] = -27.0 * np.exp(-3.0 / xp - (3.0 + k) * np.log(xp))
    return out


def _outside_unit_f(x: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 1.0
    xp = x[pos]
    out[pos] = -np.exp(-1.0 / (xp - 1.0) - (3.0 + k) * np.log(xp))
    return out


def f0_preset(name: str, k: int):
    """Initial f profile by preset name (or 'expr:<numpy expression>')."""
    if name == "regular_degenerate":
        return lambda x: -3.0 / (3.0 + k * x ** (k + 3))
    if name in ("odd_infinite_order", "half_infinite_order"):
        return lambda x: _infinite_order_f(np.asarray(x, float), k)
    if name in ("odd_outside_unit", "half_outside_unit"):
        return lambda x: _outside_unit_f(np.asarray(x, float), k)
    if name == "a0_oracle":
        if k != 3:
            raise ValueError("the a0 oracle profile has vanishing order 3")
        # -3/sqrt(2) / (1 + x^6/8); W0 = x^3 f0 satisfies H(W0)(0) = 2 and
        # H(W0)_XX(0) = 4 exactly (moments of x^3/(1+x^6) rescaled).
        return lambda x: (-3.0 / np.sqrt(2.0)) / (1.0 + np.asarray(x, float) ** 6 / 8.0)
    if name.startswith("expr:"):
        expr = name[5:]

        def f0(x):
            X = np.asarray(x, float)
            w = eval(expr, {"np": np, "X": X})  # noqa: S307 - documented config hook
            out = np.zeros_like(X)
            pos = X > 0
            out[pos] = np.asarray(w, float)[pos] / X[pos] ** k if k else w[pos]
            return out

        return f0
    raise ValueError(f"unknown initial-data preset {name!r}")


def default_symmetry(name: str) -> str:
    """'odd' for full-line odd presets, 'none' for half-line support."""
    if name.startswith("half_"):
        return "none"
    return "odd"
