"""Location, amplitude, and half-maximum width of a negative profile peak."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq


class FlatPeakError(ValueError):
    """Profile has no usable interior minimum / half-maximum crossings."""


@dataclass(frozen=True)
class PeakInfo:
    x_m: float          # refined location of the minimum
    amplitude: float    # |value| at the minimum
    x1: float           # left half-maximum crossing
    x2: float           # right half-maximum crossing

    @property
    def width(self) -> float:
        return self.x2 - self.x1


def peak_geometry(spline, nodes: np.ndarray, values: np.ndarray,
                  lo: float | None = None) -> PeakInfo:
    """Geometry of the minimum of `values` (expected negative peak).

    `spline` evaluates the underlying profile; `lo` restricts the search to
    nodes >= lo (to skip the origin region of odd profiles).
    """
    sel = np.arange(nodes.size) if lo is None else np.nonzero(nodes >= lo)[0]
    i = sel[np.argmin(values[sel])]
    if i <= 0 or i >= nodes.size - 1:
        raise FlatPeakError("minimum sits on the domain boundary")
    # parabola through the three nodes around the discrete minimum
    xa, xb, xc = nodes[i - 1], nodes[i], nodes[i + 1]
    fa, fb, fc = values[i - 1], values[i], values[i + 1]
    d1 = (fc - fa) / (xc - xa)
    d2 = ((fc - fb) / (xc - xb) - (fb - fa) / (xb - xa)) / (xc - xa) * 2.0
    if d2 <= 0:
        x_m, f_m = xb, fb
    else:
        x_m = 0.5 * (xa + xc) - d1 / d2
        x_m = min(max(x_m, xa), xc)
        f_m = float(spline(x_m))
    amp = -f_m
    if amp <= 0:
        raise FlatPeakError("profile is not negative at its minimum")

    level = f_m / 2.0

    def crossing(j_from, j_to, step):
        j = j_from
        while j != j_to and values[j] <= level:
            j += step
        if values[j] > level:
            a, b = sorted((nodes[j], nodes[j - step]))
            return brentq(lambda x: float(spline(x)) - level, a, b, xtol=1e-14)
        raise FlatPeakError("no half-maximum crossing inside the domain")

    x1 = crossing(i, 0, -1)
    x2 = crossing(i, nodes.size - 1, +1)
    return PeakInfo(x_m=float(x_m), amplitude=float(amp), x1=float(x1), x2=float(x2))
