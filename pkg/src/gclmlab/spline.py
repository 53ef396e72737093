"""Cubic-spline representation of grid functions and analytic Hilbert transforms.

A function f given at nodes x_0 < ... < x_N is represented as the natural
cubic spline interpolant, written in the C^1_0 "hat" basis

    f(x) = sum_i  f_i P_i(x) + f'_i Q_i(x),

where P_i, Q_i are the Hermite hat functions supported on
[x_{i-1}, x_{i+1}] and the node derivatives f'_i solve the standard
natural-spline tridiagonal system (f''(x_0) = f''(x_N) = 0).

Because each P_i, Q_i is piecewise cubic with compact support, its Hilbert
transform

    H(g)(x) = (1/pi) P.V. integral g(y)/(x - y) dy

and the antiderivative of the Hilbert transform are available in closed
form through four scalar kernels A, B, C, D.  With

    l = (x_{i-1} - x_i)/(x - x_i),   r = (x_{i+1} - x_i)/(x - x_i),

one has H(P_i)(x) = A(l) - A(r), H(Q_i)(x) = (x_{i-1}-x_i) B(l)
- (x_{i+1}-x_i) B(r), and analogously C, D for the antiderivative.  Near
s = 0 the closed forms suffer catastrophic cancellation, so on
|s| <= 0.5 they are evaluated through certified minimax polynomial fits
(R1, R2 below); elsewhere the closed forms are used, rewritten in
z = 1/s so that very large |s| (evaluation points close to a node)
stays overflow-free.

The transform of the spline neglects whatever the true function does
outside [x_0, x_N]; callers own that truncation error and should pick the
domain so the tail contribution is below their tolerance.  Values of H at
the two boundary nodes are only meaningful when f vanishes there (the
transform of a truncated nonzero edge value has a log singularity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

_PI = np.pi

# Minimax fit of (s-1)(log|1-s| + s + s^2/2 + s^3/3)/s^4 on [-0.5, 0.5],
# max abs error ~2.0e-16.  Degree 23, coefficients low -> high.
_R1_COEF = np.array([
    0.25,
    -0.04999999999999866,
    -0.03333333333338085,
    -0.02380952381002668,
    -0.01785714284817429,
    -0.01388888883280194,
    -0.0111111117723456,
    -0.00909091199993801,
    -0.007575732470825958,
    -0.006410171819766842,
    -0.005495065477419788,
    -0.004763424514296551,
    -0.0041587945938036,
    -0.003658683032021482,
    -0.003340203914467509,
    -0.00306305502520356,
    -0.002195292685440593,
    -0.001652974757186405,
    -0.003865944631093168,
    -0.004466133542538447,
    0.002210270189446115,
    0.003532901236598389,
    -0.006394622541761529,
    -0.006964811435003471,
])

# Minimax fit of (s-1)^3 (log|1-s| + s + s^2/2 + s^3/3)/s^4 on [-0.5, 0.5],
# max abs error ~4.1e-17.  Degree 21.
_R2_COEF = np.array([
    0.25,
    -0.5500000000000005,
    0.3166666666666673,
    -0.007142857142718389,
    -0.003571428571658581,
    -0.001984126996758493,
    -0.001190476169455116,
    -0.0007575752302443226,
    -0.0005050513541658974,
    -0.0003496624830794595,
    -0.0002497317240860826,
    -0.0001829814020322089,
    -0.0001376024384624091,
    -0.0001065281770442371,
    -0.00007978095495689995,
    -0.00005609995868764908,
    -0.00006109725530208673,
    -0.00007171425465849955,
    -6.388916781803325e-6,
    0.00003490077048616611,
    -0.00006504398511532267,
    -0.0000856727088008827,
])


class SplineError(ValueError):
    """Invalid grid or spline input."""


@dataclass(frozen=True)
class Grid:
    """Strictly increasing node coordinates, at least 5 of them."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 5:
            raise SplineError("grid needs at least 5 nodes")
        if not np.all(np.isfinite(nodes)):
            raise SplineError("grid nodes must be finite")
        if not np.all(np.diff(nodes) > 0):
            raise SplineError("grid nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def spacings(self) -> np.ndarray:
        return np.diff(self.nodes)


@dataclass(frozen=True)
class KernelValue:
    """One evaluated Hilbert kernel: kind in {A, B, C, D}, argument s, scale d."""

    kind: str
    s: float
    d: float | None
    value: float


def _natural_spline_bands(grid: Grid):
    """Banded LHS of the natural-spline system for the node derivatives."""
    h = grid.spacings
    n = grid.n
    ab = np.zeros((3, n))
    # superdiagonal, diagonal, subdiagonal rows for solve_banded((1, 1), ...)
    ab[0, 1] = 1.0
    ab[1, 0] = 2.0
    ab[0, 2:] = 1.0 / h[1:]
    ab[1, 1:-1] = 2.0 * (1.0 / h[:-1] + 1.0 / h[1:])
    ab[2, :-2] = 1.0 / h[:-1]
    ab[1, -1] = 2.0
    ab[2, -2] = 1.0
    return ab


def _natural_spline_rhs(grid: Grid, values: np.ndarray) -> np.ndarray:
    h = grid.spacings
    slopes = np.diff(values) / h
    rhs = np.empty(grid.n)
    rhs[0] = 3.0 * slopes[0]
    rhs[1:-1] = 3.0 * (slopes[:-1] / h[:-1] + slopes[1:] / h[1:])
    rhs[-1] = 3.0 * slopes[-1]
    return rhs


def solve_spline_derivatives(grid: Grid, values: np.ndarray, bands=None) -> np.ndarray:
    """Node derivatives of the natural cubic spline through (nodes, values)."""
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.n,):
        raise SplineError("values length does not match grid")
    if bands is None:
        bands = _natural_spline_bands(grid)
    return solve_banded((1, 1), bands, _natural_spline_rhs(grid, values))


@dataclass(frozen=True)
class SplineFunction:
    """Natural cubic spline: grid, node values, node derivatives."""

    grid: Grid
    values: np.ndarray
    derivatives: np.ndarray

    def _locate(self, x):
        x = np.asarray(x, dtype=float)
        nodes = self.grid.nodes
        idx = np.clip(np.searchsorted(nodes, x, side="right") - 1, 0, nodes.size - 2)
        h = nodes[idx + 1] - nodes[idx]
        u = (x - nodes[idx]) / h
        return idx, h, u

    def __call__(self, x):
        idx, h, u = self._locate(x)
        f0, f1 = self.values[idx], self.values[idx + 1]
        d0, d1 = self.derivatives[idx], self.derivatives[idx + 1]
        u2, u3 = u * u, u * u * u
        return (f0 * (1 - 3 * u2 + 2 * u3) + f1 * (3 * u2 - 2 * u3)
                + h * d0 * (u - 2 * u2 + u3) + h * d1 * (u3 - u2))

    def derivative(self, x):
        idx, h, u = self._locate(x)
        f0, f1 = self.values[idx], self.values[idx + 1]
        d0, d1 = self.derivatives[idx], self.derivatives[idx + 1]
        u2 = u * u
        return (6 * (f1 - f0) / h * (u - u2)
                + d0 * (1 - 4 * u + 3 * u2) + d1 * (3 * u2 - 2 * u))

    def second_derivative(self, x):
        idx, h, u = self._locate(x)
        f0, f1 = self.values[idx], self.values[idx + 1]
        d0, d1 = self.derivatives[idx], self.derivatives[idx + 1]
        return (6 * (f1 - f0) / (h * h) * (1 - 2 * u)
                + d0 * (6 * u - 4) / h + d1 * (6 * u - 2) / h)


def build_spline(grid: Grid, values) -> SplineFunction:
    """Natural cubic spline interpolant (f''(x_0) = f''(x_N) = 0)."""
    values = np.asarray(values, dtype=float)
    derivs = solve_spline_derivatives(grid, values)
    return SplineFunction(grid, values, derivs)


# ---------------------------------------------------------------------------
# Kernels.  All internal evaluation is in z = 1/s; the closed-form branch
# (|z| < 2) never forms powers of s, so nearly-coincident evaluation points
# (|s| huge) cannot overflow.
# ---------------------------------------------------------------------------


def _polyval(x, coef):
    """Horner evaluation with in-place passes (low -> high coefficients)."""
    out = np.full_like(x, coef[-1])
    for c in coef[-2::-1]:
        out *= x
        out += c
    return out


def _closed_logs(z):
    # log|1-z| with the removable z==1 mishap (coefficient vanishes there)
    # patched to 0, and log|z| (callers never use it at z == 0).
    with np.errstate(divide="ignore", invalid="ignore"):
        l1 = np.where(z == 1.0, 0.0, np.log(np.abs(1.0 - z)))
        lz = np.where(z == 0.0, 0.0, np.log(np.abs(z)))
    return l1, lz


def _ab_from_z(z, out_a=None, out_b=None):
    """A and B kernels from z = 1/s.

    The minimax branch (|z| >= 2) is evaluated vectorized on the whole
    array with one shared R1 Horner pass; the closed-form branch lives in
    a thin band |z| < 2 and is gathered, evaluated, and scattered back.
    """
    z = np.asarray(z, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = 1.0 / z
    np.clip(s, -0.5, 0.5, out=s)  # junk outside the minimax branch, masked below
    r1 = _polyval(s, _R1_COEF)
    s2 = s * s
    a = np.multiply(-(3 * s2 + 2 * s2 * s), 1.0 / (6 * _PI), out=out_a)
    a += (s2 + s2 * s - 2 * s) * (r1 / _PI)
    b = np.multiply(s - 2 * s2, 1.0 / (6 * _PI), out=out_b)
    b += (s2 - s) * (r1 / _PI)
    near = np.abs(z) < 2.0
    if near.any():
        idx = np.nonzero(near.ravel())[0]
        zc = z.ravel()[idx]
        l1, lz = _closed_logs(zc)
        omz2 = (1.0 - zc) ** 2
        dl = l1 - lz
        a.flat[idx] = ((-5 - 12 * zc + 12 * zc * zc) / (6 * _PI)
                       + omz2 * (1 + 2 * zc) * dl / _PI)
        b.flat[idx] = ((2 - 9 * zc + 6 * zc * zc) / (6 * _PI)
                       + zc * omz2 * dl / _PI)
    return a, b


def _cd_from_z(z, d, logd, out_c=None, out_d=None):
    """C and D kernels from z = 1/s; d broadcasts along the last axis."""
    z = np.asarray(z, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = 1.0 / z
        lz = np.log(np.abs(z))
    np.clip(s, -0.5, 0.5, out=s)
    r2 = _polyval(s, _R2_COEF)
    s2 = s * s
    ldz = logd + lz
    c = np.multiply(d / (24 * _PI), -3 + 2 * s2 - 4 * s2 * s + 12 * ldz, out=out_c)
    c += (d / (2 * _PI)) * ((1 + s) * r2)
    dd = np.multiply(d * d / (144 * _PI),
                     9 - 12 * s + 6 * s2 + 4 * s2 * s - 12 * ldz, out=out_d)
    dd -= (d * d / (12 * _PI)) * ((3 + s) * r2)
    near = np.abs(z) < 2.0
    if near.any():
        idx = np.nonzero(near.ravel())[0]
        zc = z.ravel()[idx]
        dcol = np.broadcast_to(d, z.shape).ravel()[idx]
        ldcol = np.broadcast_to(logd, z.shape).ravel()[idx]
        l1, lzc = _closed_logs(zc)
        p0 = -19 + zc * (8 + zc * (18 - 12 * zc))
        p1 = 12 + zc * (-24 + zc * zc * (24 - 12 * zc))
        p2 = zc * (24 + zc * zc * (-24 + 12 * zc))
        c.flat[idx] = dcol * (p0 + p1 * l1 + p2 * lzc + 12 * ldcol) / (24 * _PI)
        q0 = 13 + zc * (36 + zc * (-78 + 36 * zc))
        q1 = -12 + zc * zc * (72 + zc * (-96 + 36 * zc))
        q2 = zc * zc * (-72 + zc * (96 - 36 * zc))
        dd.flat[idx] = (dcol * dcol * (q0 + q1 * l1 + q2 * lzc - 12 * ldcol)
                        / (144 * _PI))
    return c, dd


def _A_from_z(z):
    return _ab_from_z(z)[0]


def _B_from_z(z):
    return _ab_from_z(z)[1]


def _C_from_z(z, d, logd):
    return _cd_from_z(z, d, logd)[0]


def _D_from_z(z, d, logd):
    return _cd_from_z(z, d, logd)[1]


def kernel_eval(kind: str, s: float, d: float | None = None) -> float:
    """Evaluate one Hilbert kernel A(s), B(s), C(d, s) or D(d, s).

    The minimax branch is used for |s| <= 0.5 and the closed form
    otherwise; both agree at the seam to ~1e-13.
    """
    if not np.isfinite(s):
        raise SplineError("kernel argument s must be finite")
    if kind in ("C", "D"):
        if d is None:
            raise SplineError(f"kernel {kind} requires the interval length d")
        if d <= 0 or not np.isfinite(d):
            raise SplineError("interval length d must be positive and finite")
    elif d is not None:
        raise SplineError(f"kernel {kind} takes no interval length")
    if s == 0.0:
        if kind in ("C", "D"):
            raise SplineError("kernel C/D undefined at s = 0")
        return 0.0
    # |s| <= 0.5 maps to |z| >= 2, which the branch selection below routes
    # to the minimax polynomials.
    z = np.array([1.0 / s])
    if kind == "A":
        return float(_A_from_z(z)[0])
    if kind == "B":
        return float(_B_from_z(z)[0])
    logd = np.log(d)
    if kind == "C":
        return float(_C_from_z(z, d, logd)[0])
    if kind == "D":
        return float(_D_from_z(z, d, logd)[0])
    raise SplineError(f"unknown kernel kind {kind!r}")


def kernel_value(kind: str, s: float, d: float | None = None) -> KernelValue:
    return KernelValue(kind, float(s), None if d is None else float(d), kernel_eval(kind, s, d))


# ---------------------------------------------------------------------------
# Assembly of H(f) and of the antiderivative V(f) = int H(f) dx at arbitrary
# evaluation points.  Everything is linear in (values, derivatives); the
# kernel weights depend on the grid only.
# ---------------------------------------------------------------------------


_FAST = None
_FAST_FAILED = False


def _fast_kernels():
    """Lazy import of the numba-compiled assembly (None if unavailable)."""
    global _FAST, _FAST_FAILED
    if _FAST is None and not _FAST_FAILED:
        import os
        if os.environ.get("GCLMLAB_NO_NUMBA"):
            _FAST_FAILED = True
            return None
        try:
            from . import _kernels_fast
            _FAST = _kernels_fast
        except ImportError:
            _FAST_FAILED = True
    return _FAST


def _kernel_block(xe: np.ndarray, grid: Grid, want_h: bool, want_v: bool,
                  reference: bool = False):
    """Kernel weight matrices for a chunk of evaluation points.

    Returns (KP, KQ, KPV, KQV), each of shape (len(xe), n_nodes), such that
    H = KP @ f + KQ @ f' and V = KPV @ f + KQV @ f'.  Entries where an
    evaluation point coincides with a node carry the analytic limits; the
    log-divergent P self-weight at the two boundary nodes is set to 0 (valid
    whenever f vanishes at the domain ends).
    """
    fast = None if reference else _fast_kernels()
    if fast is not None:
        if want_v:
            kp, kq, kpv, kqv = fast.block_hv(xe, grid.nodes)
            return [kp if want_h else None, kq if want_h else None, kpv, kqv]
        kp, kq = fast.block_h(xe, grid.nodes)
        return [kp, kq, None, None]
    return _kernel_block_reference(xe, grid, want_h, want_v)


def _kernel_block_reference(xe: np.ndarray, grid: Grid, want_h: bool, want_v: bool):
    """Pure-numpy assembly, the correctness reference for the numba path."""
    x = grid.nodes
    n = x.size
    d1 = np.empty(n)          # x_i - x_{i-1}, left interval length
    d2 = np.empty(n)          # x_{i+1} - x_i, right interval length
    d1[1:] = np.diff(x)
    d2[:-1] = np.diff(x)
    d1[0] = d2[-1] = 1.0      # dummies, masked below
    has_l = np.ones(n, dtype=bool)
    has_r = np.ones(n, dtype=bool)
    has_l[0] = has_r[-1] = False

    t = xe[:, None] - x[None, :]
    self_mask = t == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        zl = np.where(self_mask, np.nan, -t / d1[None, :])
        zr = np.where(self_mask, np.nan, t / d2[None, :])

    out = []
    if want_h:
        AL, BL = _ab_from_z(zl)
        AR, BR = _ab_from_z(zr)
        KP = np.where(has_l, AL, 0.0) - np.where(has_r, AR, 0.0)
        KQ = (np.where(has_l, -d1 * BL, 0.0)
              - np.where(has_r, d2 * BR, 0.0))
        if self_mask.any():
            e_idx, i_idx = np.nonzero(self_mask)
            interior = (i_idx > 0) & (i_idx < n - 1)
            kp_self = np.zeros(e_idx.size)
            kq_self = np.zeros(e_idx.size)
            ii = i_idx[interior]
            kp_self[interior] = np.log(d1[ii] / d2[ii]) / _PI
            kq_self[interior] = -(d1[ii] + d2[ii]) / (3 * _PI)
            left_end = i_idx == 0
            right_end = i_idx == n - 1
            kq_self[left_end] = -d2[0] / (3 * _PI)
            kq_self[right_end] = -d1[-1] / (3 * _PI)
            KP[e_idx, i_idx] = kp_self
            KQ[e_idx, i_idx] = kq_self
        out += [KP, KQ]
    else:
        out += [None, None]

    if want_v:
        logd1 = np.log(d1)
        logd2 = np.log(d2)
        CL, DL = _cd_from_z(zl, d1, logd1)
        CR, DR = _cd_from_z(zr, d2, logd2)
        KPV = np.where(has_l, CL, 0.0) + np.where(has_r, CR, 0.0)
        KQV = np.where(has_l, DL, 0.0) - np.where(has_r, DR, 0.0)
        if self_mask.any():
            e_idx, i_idx = np.nonzero(self_mask)
            pv = np.zeros(e_idx.size)
            qv = np.zeros(e_idx.size)
            il = i_idx > 0
            ir = i_idx < n - 1
            a1, a2 = d1[i_idx], d2[i_idx]
            pv += np.where(il, a1 * (-19 + 12 * np.log(a1)) / (24 * _PI), 0.0)
            pv += np.where(ir, a2 * (-19 + 12 * np.log(a2)) / (24 * _PI), 0.0)
            qv += np.where(il, a1 * a1 * (13 - 12 * np.log(a1)) / (144 * _PI), 0.0)
            qv -= np.where(ir, a2 * a2 * (13 - 12 * np.log(a2)) / (144 * _PI), 0.0)
            KPV[e_idx, i_idx] = pv
            KQV[e_idx, i_idx] = qv
        out += [KPV, KQV]
    else:
        out += [None, None]
    return out


def _assemble(f: SplineFunction, xe: np.ndarray, want_h: bool, want_v: bool,
              chunk: int = 512):
    xe = np.atleast_1d(np.asarray(xe, dtype=float))
    H = np.empty(xe.size) if want_h else None
    V = np.empty(xe.size) if want_v else None
    vals, ders = f.values, f.derivatives
    for lo in range(0, xe.size, chunk):
        hi = min(lo + chunk, xe.size)
        KP, KQ, KPV, KQV = _kernel_block(xe[lo:hi], f.grid, want_h, want_v)
        if want_h:
            H[lo:hi] = KP @ vals + KQ @ ders
        if want_v:
            V[lo:hi] = KPV @ vals + KQV @ ders
    return H, V


def eval_hilbert(f: SplineFunction, x) -> np.ndarray:
    """H(f) at arbitrary points (valid inside and outside the grid span)."""
    h, _ = _assemble(f, x, True, False)
    return h


def hilbert_at_nodes(f: SplineFunction) -> np.ndarray:
    """H(f) at every grid node."""
    return eval_hilbert(f, f.grid.nodes)


def eval_velocity(f: SplineFunction, x) -> np.ndarray:
    """Antiderivative of H(f), gauged so that the value at 0 vanishes."""
    lo, hi = f.grid.nodes[0], f.grid.nodes[-1]
    if not (lo <= 0.0 <= hi):
        raise SplineError("velocity gauge point 0 lies outside the grid span")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    pts = np.concatenate([x, [0.0]])
    _, v = _assemble(f, pts, False, True)
    return v[:-1] - v[-1]


def velocity_at_nodes(f: SplineFunction) -> np.ndarray:
    """U(x_i) with U(0) = 0 at every grid node."""
    return eval_velocity(f, f.grid.nodes)


# ---------------------------------------------------------------------------
# Cached operator: precomputes the kernel matrices for one grid so that a
# time stepper can apply H and U as dense mat-vecs.  Odd/even symmetry about
# x = 0 is folded into the matrix columns, so symmetric problems store and
# evolve only x >= 0.
# ---------------------------------------------------------------------------


class HilbertOperator:
    """Dense node-to-node Hilbert/velocity operator for a fixed grid.

    parity None operates on the grid as given; parity 'odd'/'even' treats
    `grid` as the x >= 0 half (first node exactly 0) of a symmetric grid
    and folds the mirrored contribution into the matrices.
    """

    def __init__(self, grid: Grid, parity: str | None = None, with_velocity: bool = True,
                 chunk: int = 256):
        if parity not in (None, "odd", "even"):
            raise SplineError("parity must be None, 'odd' or 'even'")
        self.grid = grid
        self.parity = parity
        self.with_velocity = with_velocity
        x = grid.nodes
        if parity is None:
            self.full_grid = grid
            self._pos = slice(0, x.size)
        else:
            if x[0] != 0.0:
                raise SplineError("symmetric operator needs the half grid to start at 0")
            full = np.concatenate([-x[:0:-1], x])
            self.full_grid = Grid(full)
            self._pos = slice(x.size - 1, 2 * x.size - 1)
        self._bands = _natural_spline_bands(self.full_grid)
        self._build(chunk)

    def _fold(self, K, sign):
        if self.parity is None:
            return K
        n = self.grid.n
        neg = K[:, :n - 1][:, ::-1]
        folded = K[:, n - 1:].copy()
        folded[:, 1:] += sign * neg
        return folded

    def _signs(self):
        # column fold signs for (values, derivatives): an odd function has
        # even derivative and vice versa.
        return (-1.0, 1.0) if self.parity == "odd" else (1.0, -1.0)

    def _build(self, chunk):
        xe = self.grid.nodes
        n = self.grid.n
        want_v = self.with_velocity
        # Stacked [H; V] layout: one pair of GEMVs applies both operators.
        rows = 2 * n if want_v else n
        self._KP = np.empty((rows, n))
        self._KQ = np.empty((rows, n))
        sp, sq = self._signs() if self.parity else (0.0, 0.0)
        for lo in range(0, n, chunk):
            hi = min(lo + chunk, n)
            bp, bq, bpv, bqv = _kernel_block(xe[lo:hi], self.full_grid, True, want_v)
            if self.parity is not None:
                bp = self._fold(bp, sp)
                bq = self._fold(bq, sq)
                if want_v:
                    bpv = self._fold(bpv, sp)
                    bqv = self._fold(bqv, sq)
            self._KP[lo:hi] = bp
            self._KQ[lo:hi] = bq
            if want_v:
                self._KP[n + lo:n + hi] = bpv
                self._KQ[n + lo:n + hi] = bqv
        if 0.0 in xe:
            self._i0 = int(np.nonzero(xe == 0.0)[0][0])
        else:
            self._i0 = None

    def mirror(self, values: np.ndarray, parity: str | None = None) -> np.ndarray:
        """Values on the full grid implied by the stored half (or as-is)."""
        if self.parity is None:
            return values
        sign = -1.0 if (parity or self.parity) == "odd" else 1.0
        return np.concatenate([sign * values[:0:-1], values])

    def node_derivatives(self, values: np.ndarray,
                         parity: str | None = None) -> np.ndarray:
        """Natural-spline derivative at the (half-)grid nodes.

        `parity` overrides the fold symmetry of the mirrored extension
        (e.g. H of an odd function is even).
        """
        full = self.mirror(values, parity)
        ders = solve_banded((1, 1), self._bands,
                            _natural_spline_rhs(self.full_grid, full))
        return ders[self._pos]

    def spline(self, values: np.ndarray, parity: str | None = None) -> SplineFunction:
        """Spline of the full underlying function (mirrored if symmetric)."""
        full = self.mirror(values, parity)
        ders = solve_banded((1, 1), self._bands,
                            _natural_spline_rhs(self.full_grid, full))
        return SplineFunction(self.full_grid, full, ders)

    def apply(self, values: np.ndarray, derivs: np.ndarray | None = None):
        """(H, U) at the grid nodes; U gauged to vanish at x = 0.

        With with_velocity=False returns (H, None).
        """
        if derivs is None:
            derivs = self.node_derivatives(values)
        out = self._KP @ values + self._KQ @ derivs
        if not self.with_velocity:
            return out, None
        n = self.grid.n
        h, v = out[:n], out[n:]
        if self._i0 is not None:
            v = v - v[self._i0]
        else:
            sp = SplineFunction(self.grid, v, solve_spline_derivatives(self.grid, v))
            v = v - sp(0.0)
        return h, v

    def point_weights(self, x: float, want_v: bool = False):
        """Row weights so that H(f)(x) = wp @ values + wq @ derivs (and V rows)."""
        bp, bq, bpv, bqv = _kernel_block(np.array([float(x)]), self.full_grid,
                                         True, want_v)
        if self.parity:
            sp, sq = self._signs()
            bp = self._fold(bp, sp)
            bq = self._fold(bq, sq)
            if want_v:
                bpv = self._fold(bpv, sp)
                bqv = self._fold(bqv, sq)
        if want_v:
            return bp[0], bq[0], bpv[0], bqv[0]
        return bp[0], bq[0]
