"""Traveling-wave profiles by fixed-point iteration of the map R_a.

A traveling wave w(x - r t) of the gCLM model solves

    (a u - r) w_x = u_x w,   u_x = H(w),

and nonnegative even solutions normalized by w(0) = 1, w''(0) = -2 are the
fixed points of

    R_a(w) = (1 - a T(w)/r(w))_+^(1/a),      R_0(w) = exp(-T(w)/r(w)),

where T is the even-function Biot-Savart integral

    T(w)(x) = (1/pi) int_0^inf log|(x^2 - y^2)/y^2| w(y) dy,

and the wave speed is r(w) = (1/pi) int_0^inf (w(0) - w(y))/y^2 dy.

Admissible candidates live in the convex set D_a: w(0) = 1,
(1-x^2)_+ <= w <= 1, non-increasing on [0, inf), w(sqrt(s)) convex in s,
and left slope at 1/2 at most -eta_a with eta_a = 1/(2^(9/2) (4+|a|)^3).
Plain Picard iteration from 1/(1+x^2) converges for every a < 1; the fixed
point is compactly supported for a in (0,1) and has an algebraic
x^(-1/(1+|a|)) tail for a < 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spline import Grid, HilbertOperator, SplineFunction, build_spline, eval_velocity


class WaveError(ValueError):
    pass


def eta_a(a: float) -> float:
    """Slope floor of the admissible set at x = 1/2."""
    return 1.0 / (2.0 ** 4.5 * (4.0 + abs(a)) ** 3)


def wave_grid(a: float, spacing: float = 0.0025, growth: float = 0.005) -> Grid:
    """Sinh-graded radial grid: fine near 0, log-uniform into the tail.

    Slowly decaying profiles (a <= 0) need decades of range for tail fits,
    so the domain runs to 1e6; compactly supported ones (a > 0) stop at 1e2.
    """
    m_w = 1e2 if a > 0 else 1e6
    kappa = spacing / growth
    n = int(np.ceil(np.arcsinh(m_w / kappa) / growth))
    x = kappa * np.sinh(growth * np.arange(n + 1))
    x[0] = 0.0
    return Grid(x)


@dataclass(frozen=True)
class WaveProfile:
    """Even nonnegative candidate profile sampled on a radial grid."""

    grid: Grid
    values: np.ndarray
    a: float

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    def spline(self) -> SplineFunction:
        """Natural spline of the even extension (exact zero slope at 0)."""
        x = self.grid.nodes
        full = Grid(np.concatenate([-x[:0:-1], x]))
        vals = np.concatenate([self.values[:0:-1], self.values])
        return build_spline(full, vals)


def initial_wave(a: float, grid: Grid | None = None) -> WaveProfile:
    grid = grid if grid is not None else wave_grid(a)
    return WaveProfile(grid=grid, values=1.0 / (1.0 + grid.nodes ** 2), a=a)


def biot_savart_T(profile: WaveProfile, x) -> np.ndarray:
    """T(w) at arbitrary points via the even-extension spline kernels."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0) or np.any(x > profile.x[-1]):
        raise WaveError("T evaluation point outside [0, M_w]")
    return eval_velocity(profile.spline(), x)


def wave_speed_r(profile: WaveProfile) -> float:
    """r(w) by exact integration of the spline of (w(0) - w)/y^2.

    Per interval the spline is cubic, so the integral has the closed form
    b0 (1/x_i - 1/x_{i+1}) + b1 log(x_{i+1}/x_i) + b2 h + b3 (x_{i+1}^2 - x_i^2)/2.
    On the first interval b0 and b1 vanish identically (w interpolates w(0)
    with zero even-extension slope).  The truncated tail contributes
    w(0)/M_w minus the fitted algebraic remainder of w itself.
    """
    x = profile.x
    w = profile.values
    sp = profile.spline()
    n_half = x.size
    vals = sp.values[n_half - 1:]
    ders = sp.derivatives[n_half - 1:]
    h = np.diff(x)
    xi, xj = x[:-1], x[1:]
    f0, f1 = vals[:-1], vals[1:]
    d0, d1 = ders[:-1], ders[1:]
    slope = (f1 - f0) / h
    c2 = (3.0 * slope - 2.0 * d0 - d1) / h
    c3 = (d0 + d1 - 2.0 * slope) / (h * h)
    # numerator polynomial w(0) - w(y) in powers of y
    b0 = w[0] - (f0 - d0 * xi + c2 * xi**2 - c3 * xi**3)
    b1 = -(d0 - 2.0 * c2 * xi + 3.0 * c3 * xi**2)
    b2 = -(c2 - 3.0 * c3 * xi)
    b3 = -c3
    with np.errstate(divide="ignore", invalid="ignore"):
        parts = (b0 * (1.0 / xi - 1.0 / xj) + b1 * np.log(xj / xi)
                 + b2 * h + b3 * 0.5 * (xj**2 - xi**2))
    # first interval: singular weights multiply exactly-zero coefficients
    parts[0] = b2[0] * h[0] + b3[0] * 0.5 * (xj[0] ** 2 - xi[0] ** 2)
    total = parts.sum() + w[0] / x[-1]
    # algebraic remainder of the tail, slope fitted on the last decade
    if w[-1] > 0:
        sel = x >= 0.1 * x[-1]
        if sel.sum() >= 2 and np.all(w[sel] > 0):
            p = -np.polyfit(np.log(x[sel]), np.log(w[sel]), 1)[0]
            if p > 0:
                total -= w[-1] / ((1.0 + p) * x[-1])
    return float(total / np.pi)


class _WaveOps:
    """Cached even-parity Hilbert operator for one radial grid."""

    def __init__(self, grid: Grid):
        self.grid = grid
        self.op = HilbertOperator(grid, parity="even", with_velocity=True)

    def T(self, values: np.ndarray) -> np.ndarray:
        _, v = self.op.apply(values)
        return v


def apply_R_a(profile: WaveProfile, ops: _WaveOps | None = None,
              r: float | None = None) -> WaveProfile:
    """One application of the fixed-point map; (.)_+ kink flushed below 1e-300."""
    ops = ops if ops is not None and ops.grid is profile.grid else _WaveOps(profile.grid)
    t_vals = ops.T(profile.values)
    r = wave_speed_r(profile) if r is None else r
    if r <= 0:
        raise WaveError("wave speed r(w) must be positive for admissible w")
    a = profile.a
    if a == 0.0:
        new = np.exp(-t_vals / r)
    else:
        base = np.maximum(1.0 - a * t_vals / r, 0.0)
        with np.errstate(divide="ignore", over="ignore"):
            new = base ** (1.0 / a)
    new[~np.isfinite(new)] = 0.0
    new[new < 1e-300] = 0.0
    return WaveProfile(grid=profile.grid, values=new, a=a)


@dataclass
class MembershipReport:
    """Admissibility conditions of D_a with numeric margins (>= 0 passes)."""

    value_at_zero: float        # -|w(0) - 1|
    upper_bound: float          # min(1 - w)
    lower_bound: float          # min(w - (1-x^2)_+)
    monotone: float             # -max forward increment
    s_convex: float             # min second difference of w(sqrt(s))
    slope_at_half: float        # -(w'(1/2) + eta_a)
    tol: float = 1e-9

    def conditions(self) -> dict:
        return {
            "value_at_zero": self.value_at_zero,
            "upper_bound": self.upper_bound,
            "lower_bound": self.lower_bound,
            "monotone": self.monotone,
            "s_convex": self.s_convex,
            "slope_at_half": self.slope_at_half,
        }

    @property
    def passed(self) -> bool:
        return all(v >= -self.tol for v in self.conditions().values())


def check_membership_Da(profile: WaveProfile, tol: float = 1e-9) -> MembershipReport:
    x = profile.x
    w = profile.values
    eta = eta_a(profile.a)
    lower = w - np.maximum(1.0 - x * x, 0.0)
    inc = np.diff(w)
    s = x * x
    # second divided differences of g(s) = w(sqrt(s)); scaled by the local
    # s-spacing so the margin is a curvature, not an absolute difference
    g1 = np.diff(w) / np.diff(s)
    conv = np.diff(g1)
    sp = profile.spline()
    slope_half = float(sp.derivative(0.5))
    return MembershipReport(
        value_at_zero=-abs(w[0] - 1.0),
        upper_bound=float((1.0 - w).min()),
        lower_bound=float(lower.min()),
        monotone=float(-inc.max()) if inc.size else 0.0,
        s_convex=float(conv.min()) if conv.size else 0.0,
        slope_at_half=-(slope_half + eta),
        tol=tol,
    )


def tail_exponent(profile: WaveProfile, window=(1e2, 1e4)) -> float:
    """Least-squares slope of log w against log x over the window."""
    x = profile.x
    sel = (x >= window[0]) & (x <= window[1])
    if not sel.any():
        raise WaveError("tail window contains no grid nodes")
    if np.any(profile.values[sel] <= 0):
        raise WaveError("profile is not positive on the tail window")
    return float(np.polyfit(np.log(x[sel]), np.log(profile.values[sel]), 1)[0])


def support_radius(profile: WaveProfile, floor: float = 1e-10) -> float:
    """Smallest node beyond which the profile stays below `floor`."""
    below = profile.values < floor
    if not below.any() or not below[-1]:
        raise WaveError("profile does not drop below the support floor")
    idx = np.nonzero(~below)[0]
    last = idx[-1] if idx.size else 0
    return float(profile.x[min(last + 1, profile.x.size - 1)])


@dataclass
class WaveResult:
    profile: WaveProfile
    r: float
    iterations: int
    final_increment: float
    tail_exponent: float | None = None
    support: float | None = None
    converged: bool = True


def solve_fixed_point(a: float, tol: float = 1e-8, max_iter: int = 2000,
                      grid: Grid | None = None, relax: float = 1.0,
                      tail_window=(1e2, 1e4)) -> WaveResult:
    """Picard iteration w <- R_a(w) from 1/(1+x^2) until sup increment < tol."""
    if a >= 1.0:
        raise WaveError("the fixed-point map needs a < 1")
    prof = initial_wave(a, grid)
    ops = _WaveOps(prof.grid)
    inc = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        new = apply_R_a(prof, ops)
        if relax != 1.0:
            new = WaveProfile(prof.grid,
                              (1 - relax) * prof.values + relax * new.values, a)
        inc = float(np.abs(new.values - prof.values).max())
        prof = new
        if inc < tol:
            break
    r = wave_speed_r(prof)
    res = WaveResult(profile=prof, r=r, iterations=it, final_increment=inc,
                     converged=inc < tol)
    if a > 0:
        try:
            res.support = support_radius(prof)
        except WaveError:
            res.support = None
    else:
        res.tail_exponent = tail_exponent(prof, tail_window)
    return res


def curvature_at_zero(profile: WaveProfile, n_fit: int = 6) -> float:
    """w''(0) from an even quadratic fit through the first nodes."""
    x = profile.x[1:n_fit + 1]
    w = profile.values[1:n_fit + 1]
    c = np.polyfit(x * x, w, 1)[0]
    return 2.0 * float(c)
