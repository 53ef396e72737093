"""Dynamic-rescaling solver for self-similar blowup profiles.

The rescaled profile W(X, tau) obeys

    W_tau + (c_l X + a U) W_X = (c_w + U_X) W,   U_X = H(W),  U(0) = 0,

where the scaling factors (c_l, c_w) are determined at every stage by two
normalization conditions.  To protect a prescribed vanishing order k at the
origin, the solver evolves f = W / X^k:

    f_tau + (c_l X + a U) f_X = (c_w + U_X - k (c_l + a U/X)) f,

with U/X -> U_X(0) at the origin (k = 0 evolves W itself).

Each normalization functional is a point evaluation of W, W_X, f, H(W) or
U, so requiring its tau-derivative to vanish gives an equation affine in
(c_l, c_w); two conditions make a 2x2 linear solve.  After every full time
step the conditions are re-imposed exactly through the scaling symmetry
(alpha W(beta X), alpha c_l, alpha c_w), which cancels the O(dt^5)
per-step drift of the linear solve.

Advection derivatives use upwinded WENO5 in the uniform mesh coordinate;
time stepping is the ten-stage fourth-order strong-stability-preserving
Runge-Kutta scheme with a CFL-limited step.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .mesh import AdaptiveMesh, MeshSpec, generate_mesh, remesh, should_remesh
from .peaks import FlatPeakError, PeakInfo, peak_geometry
from .spline import HilbertOperator, SplineFunction
from .weno import weno5_rho


class SolverError(RuntimeError):
    pass


class DivergenceError(SolverError):
    """Residual blew up, a NaN appeared, or the CFL step underflowed."""


class NormalizationError(SolverError):
    """The 2x2 system for (c_l, c_w) is singular; the step is rejected."""


# ---------------------------------------------------------------------------
# Normalization schemes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalizationScheme:
    """How (c_l, c_w) are pinned.

    tags:
      degenerate_slope         f(0) = -1 and W_X(1) = 0           (a > 0 runs)
      min_pin_hilbert_origin   W_X(1) = 0 and H(W)(0) = h0        (peaked data)
      support_pin_hilbert_origin  c_l + a U(1) = 0 and H(W)(0) = h0
      constant_a0_odd          (c_l, c_w) = (1/2, -1)             (a = 0, odd)
      constant_a0_half         (c_l, c_w) = (1, -1)               (a = 0, half-line)

    h0 is the reference value of H(W)(0) captured from the initial data.
    """

    tag: str
    h0: float | None = None
    pin: float = 1.0

    def needs_h0(self) -> bool:
        return self.tag in ("min_pin_hilbert_origin", "support_pin_hilbert_origin")


def degenerate_slope() -> NormalizationScheme:
    return NormalizationScheme("degenerate_slope")


def min_pin_hilbert_origin(h0: float | None = None) -> NormalizationScheme:
    return NormalizationScheme("min_pin_hilbert_origin", h0=h0)


def support_pin_hilbert_origin(h0: float | None = None) -> NormalizationScheme:
    return NormalizationScheme("support_pin_hilbert_origin", h0=h0)


def constant_a0_odd() -> NormalizationScheme:
    return NormalizationScheme("constant_a0_odd")


def constant_a0_half() -> NormalizationScheme:
    return NormalizationScheme("constant_a0_half")


_CONSTANT_FACTORS = {
    "constant_a0_odd": (0.5, -1.0),
    "constant_a0_half": (1.0, -1.0),
}


# ---------------------------------------------------------------------------
# State
# ---------------------------------------------------------------------------


class SolverOps:
    """Per-mesh cache: Hilbert operator, origin rows, CFL metric.

    For a = 0 the velocity never enters the dynamics (it always appears as
    a*U), so the antiderivative kernels are skipped.
    """

    def __init__(self, mesh: AdaptiveMesh, symmetry: str, with_velocity: bool = True):
        if symmetry not in ("odd", "none"):
            raise SolverError("symmetry must be 'odd' or 'none'")
        parity = "odd" if symmetry == "odd" else None
        self.mesh = mesh
        self.symmetry = symmetry
        self.op = HilbertOperator(mesh.grid, parity=parity,
                                  with_velocity=with_velocity)
        self.x = mesh.nodes
        self.dx = mesh.drho * mesh.xprime()
        # H(w)(0) row weights (x = 0 is the first node, but the row form also
        # serves the product functionals H(W)(0) for arbitrary node data W)
        self._row_p0, self._row_q0 = self.op.point_weights(0.0)

    @property
    def omega_parity(self):
        return "odd" if self.symmetry == "odd" else None

    @property
    def f_parity(self):
        # f = W / X^k with odd W and odd k is even
        return "even" if self.symmetry == "odd" else None

    def dx_near(self, x: float) -> float:
        """Local node spacing at coordinate x."""
        i = int(np.clip(np.searchsorted(self.x, x), 1, self.x.size - 1))
        return float(self.dx[i])

    def hilbert_at_zero(self, values: np.ndarray, parity: str | None) -> float:
        ders = self.op.node_derivatives(values, parity=parity)
        return float(self._row_p0 @ values + self._row_q0 @ ders)


@dataclass
class RescalingState:
    """Evolving profile f = W/X^k on the x >= 0 nodes of `mesh`."""

    a: float
    k: int
    mesh: AdaptiveMesh
    symmetry: str                 # 'odd' (mirrored) or 'none' (half-line)
    f: np.ndarray
    tau: float = 0.0
    c_l: float = 0.0
    c_omega: float = 0.0
    ops: SolverOps | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.k < 0 or (self.k and self.k % 2 == 0):
            raise SolverError("vanishing order k must be 0 or a positive odd integer")
        if self.ops is None or self.ops.mesh is not self.mesh:
            self.ops = SolverOps(self.mesh, self.symmetry,
                                 with_velocity=self.a != 0.0)

    @property
    def x(self) -> np.ndarray:
        return self.mesh.nodes

    def omega(self) -> np.ndarray:
        if self.k == 0:
            return self.f.copy()
        return self.x ** self.k * self.f

    def omega_spline(self) -> SplineFunction:
        return self.ops.op.spline(self.omega(), parity=self.ops.omega_parity)

    def f_spline(self) -> SplineFunction:
        return self.ops.op.spline(self.f, parity=self.ops.f_parity)


@dataclass
class Fields:
    """Everything the scheme equations and the RHS need at one stage."""

    omega: np.ndarray
    omega_x: np.ndarray      # spline derivative at nodes
    H: np.ndarray            # H(W) = U_X at nodes
    U: np.ndarray            # antiderivative with U(0) = 0
    H_x: np.ndarray          # spline derivative of H at nodes


def compute_fields(state: RescalingState) -> Fields:
    ops = state.ops
    if not np.all(np.isfinite(state.f)):
        raise DivergenceError("non-finite profile values")
    om = state.omega()
    om_x = ops.op.node_derivatives(om, parity=ops.omega_parity)
    H, U = ops.op.apply(om, derivs=om_x)
    if U is None:
        U = np.zeros_like(H)   # a = 0: U enters only as a*U
    h_parity = "even" if state.symmetry == "odd" else None
    H_x = ops.op.node_derivatives(H, parity=h_parity)
    return Fields(omega=om, omega_x=om_x, H=H, U=U, H_x=H_x)


def _hermite_point(x: np.ndarray, vals: np.ndarray, ders: np.ndarray, xq: float):
    """Cubic Hermite value and derivative at xq from node (vals, ders)."""
    i = int(np.clip(np.searchsorted(x, xq, side="right") - 1, 0, x.size - 2))
    h = x[i + 1] - x[i]
    u = (xq - x[i]) / h
    f0, f1, d0, d1 = vals[i], vals[i + 1], ders[i], ders[i + 1]
    u2, u3 = u * u, u ** 3
    val = (f0 * (1 - 3 * u2 + 2 * u3) + f1 * (3 * u2 - 2 * u3)
           + h * d0 * (u - 2 * u2 + u3) + h * d1 * (u3 - u2))
    der = (6 * (f1 - f0) / h * (u - u2)
           + d0 * (1 - 4 * u + 3 * u2) + d1 * (3 * u2 - 2 * u))
    return float(val), float(der)


def _pin_values(state: RescalingState, fields: Fields, xq: float):
    """(W, W_X, W_XX, U, U_X, U_XX) at the pin location xq."""
    x = state.x
    w, wx = _hermite_point(x, fields.omega, fields.omega_x, xq)
    # W_XX from the Hermite interpolant of (W_X, H_x-like): use the spline of
    # W_X values; its nodal derivative is not stored, so differentiate the
    # Hermite piece of W itself.
    i = int(np.clip(np.searchsorted(x, xq, side="right") - 1, 0, x.size - 2))
    h = x[i + 1] - x[i]
    u = (xq - x[i]) / h
    f0, f1 = fields.omega[i], fields.omega[i + 1]
    d0, d1 = fields.omega_x[i], fields.omega_x[i + 1]
    wxx = (6 * (f1 - f0) / (h * h) * (1 - 2 * u)
           + d0 * (6 * u - 4) / h + d1 * (6 * u - 2) / h)
    uval, _ = _hermite_point(x, fields.U, fields.H, xq)
    ux, uxx = _hermite_point(x, fields.H, fields.H_x, xq)
    return w, wx, float(wxx), uval, ux, uxx


def _pin_resolved(state: RescalingState, fields: Fields, xq: float,
                  min_cells: float = 3.0) -> bool:
    """Is the peak at the pin wider than a few mesh cells?

    The curvature width sqrt(2|W|/W_XX) at the pin must exceed `min_cells`
    local spacings (and the curvature must look like a minimum at all) for
    pointwise second derivatives there to be trustworthy.
    """
    w, wx, wxx, *_ = _pin_values(state, fields, xq)
    if wxx <= 0 or w >= 0:
        return False
    width = np.sqrt(2.0 * abs(w) / wxx)
    return width >= min_cells * state.ops.dx_near(xq)


def _eq_pin_slope(state: RescalingState, fields: Fields, xq: float):
    """d/dtau W_X(xq) = 0 as alpha*c_l + beta*c_w = g."""
    w, wx, wxx, uval, ux, uxx = _pin_values(state, fields, xq)
    alpha = -(wx + xq * wxx)
    beta = wx
    g = state.a * (ux * wx + uval * wxx) - uxx * w - ux * wx
    return alpha, beta, g


def _eq_hilbert_origin(state: RescalingState, fields: Fields):
    """d/dtau H(W)(0) = 0 as alpha*c_l + beta*c_w = g."""
    ops = state.ops
    x = state.x
    par = ops.omega_parity
    h_w = float(fields.H[0]) if x[0] == 0.0 else None
    if h_w is None:
        h_w = ops.hilbert_at_zero(fields.omega, par)
    w1 = x * fields.omega_x                   # X W_X   (odd like W)
    w2 = fields.U * fields.omega_x            # U W_X   (odd like W)
    w3 = fields.H * fields.omega              # U_X W   (odd like W)
    alpha = -ops.hilbert_at_zero(w1, par)
    beta = h_w
    g = state.a * ops.hilbert_at_zero(w2, par) - ops.hilbert_at_zero(w3, par)
    return alpha, beta, g


def compute_scaling_factors(state: RescalingState,
                            scheme: NormalizationScheme,
                            fields: Fields | None = None):
    """The (c_l, c_w) that freeze both normalization functionals."""
    if scheme.tag in _CONSTANT_FACTORS:
        return _CONSTANT_FACTORS[scheme.tag]
    if fields is None:
        fields = compute_fields(state)

    if scheme.tag == "degenerate_slope":
        # d/dtau f(0) = 0 with f(0) != 0:  c_w - k c_l = -(1 - k a) U_X(0)
        ux0 = float(fields.H[0])
        a1, b1, g1 = -float(state.k), 1.0, -(1.0 - state.k * state.a) * ux0
        a2, b2, g2 = _eq_pin_slope(state, fields, scheme.pin)
        return _solve2(a1, b1, g1, a2, b2, g2)

    if scheme.tag == "min_pin_hilbert_origin":
        a2, b2, g2 = _eq_hilbert_origin(state, fields)
        if _pin_resolved(state, fields, scheme.pin):
            a1, b1, g1 = _eq_pin_slope(state, fields, scheme.pin)
            return _solve2(a1, b1, g1, a2, b2, g2)
        # Unresolvable peak at the pin: the slope condition degenerates to
        # the stagnation condition c_l + a U(pin) = 0 (the curvature
        # correction scales with the squared peak width), so fall back to
        # the support-pin form, which is exactly that limit.
        u1, _ = _hermite_point(state.x, fields.U, fields.H, scheme.pin)
        c_l = -state.a * u1
        if abs(b2) < 1e-300:
            raise NormalizationError("H(W)(0) vanished; cannot pin c_w")
        return c_l, (g2 - a2 * c_l) / b2

    if scheme.tag == "support_pin_hilbert_origin":
        u1, _ = _hermite_point(state.x, fields.U, fields.H, scheme.pin)
        c_l = -state.a * u1
        a2, b2, g2 = _eq_hilbert_origin(state, fields)
        if abs(b2) < 1e-300:
            raise NormalizationError("H(W)(0) vanished; cannot pin c_w")
        return c_l, (g2 - a2 * c_l) / b2

    raise SolverError(f"unknown scheme {scheme.tag!r}")


def _solve2(a1, b1, g1, a2, b2, g2):
    det = a1 * b2 - a2 * b1
    scale = max(abs(a1 * b2), abs(a2 * b1), 1e-300)
    if abs(det) < 1e-12 * scale:
        raise NormalizationError("normalization system is singular")
    c_l = (g1 * b2 - g2 * b1) / det
    c_w = (a1 * g2 - a2 * g1) / det
    return c_l, c_w


# ---------------------------------------------------------------------------
# Right-hand side and time stepping
# ---------------------------------------------------------------------------


def advection_speed(state: RescalingState, fields: Fields, c_l: float) -> np.ndarray:
    return c_l * state.x + state.a * fields.U


def rhs(state: RescalingState, c_l: float, c_omega: float,
        fields: Fields | None = None) -> np.ndarray:
    """f_tau at the nodes for given scaling factors."""
    if fields is None:
        fields = compute_fields(state)
    x = state.x
    v = advection_speed(state, fields, c_l)
    f_x = weno5_rho(state.f, state.mesh.drho, v) / state.mesh.xprime()
    growth = c_omega + fields.H
    if state.k:
        u_over_x = np.empty_like(x)
        u_over_x[1:] = fields.U[1:] / x[1:]
        u_over_x[0] = fields.H[0]          # limit U/X -> U_X(0)
        growth = growth - state.k * (c_l + state.a * u_over_x)
    out = -v * f_x + growth * state.f
    # inflow at the truncation boundary (c_l < 0 regimes): there is no
    # upwind data there, so hold the outermost nodes fixed instead of
    # letting a downwind-biased stencil feed an instability
    if v[-1] < 0:
        out[-3:] = 0.0
    if not np.all(np.isfinite(out)):
        raise DivergenceError("non-finite right-hand side")
    return out


def omega_rhs(state: RescalingState, c_l: float, c_omega: float) -> np.ndarray:
    """W_tau evaluated directly in the W form (cross-check for the f form)."""
    fields = compute_fields(state)
    v = advection_speed(state, fields, c_l)
    om = fields.omega
    om_x = weno5_rho(om, state.mesh.drho, v) / state.mesh.xprime()
    return -v * om_x + (c_omega + fields.H) * om


def ssprk104(y: np.ndarray, dt: float, rhs_fn) -> np.ndarray:
    """One step of the ten-stage fourth-order SSP Runge-Kutta scheme."""
    q1 = y + dt / 6.0 * rhs_fn(y)
    for _ in range(4):
        q1 += dt / 6.0 * rhs_fn(q1)
    q2 = y / 25.0 + 9.0 / 25.0 * q1
    q1 = 15.0 * q2 - 5.0 * q1
    for _ in range(4):
        q1 += dt / 6.0 * rhs_fn(q1)
    return q2 + 0.6 * q1 + dt / 10.0 * rhs_fn(q1)


def cfl_dt(state: RescalingState, fields: Fields, c_l: float, cfl: float,
           dt_max: float) -> float:
    v = advection_speed(state, fields, c_l)
    with np.errstate(divide="ignore"):
        ratios = state.ops.dx / np.maximum(np.abs(v), 1e-300)
    dt = cfl * float(ratios.min())
    dt = min(dt, dt_max)
    if dt < 1e-14:
        raise DivergenceError(
            "CFL step underflowed (advection speed blow-up on the mesh)")
    return dt


def _renormalize(state: RescalingState, scheme: NormalizationScheme,
                 slope_tol: float = 1e-11) -> None:
    """Re-impose the normalization exactly via alpha*W(beta X).

    Amplitude (alpha) is re-imposed exactly (a pure multiplication).  The
    position factor (beta) is re-imposed through a clamped first-order
    transport (never a respline, whose ringing at a sharp front couples
    back into the dynamics) and only while the peak at the pin is still
    mesh-resolved; past that point the minimum has merged with the forming
    singularity and the stagnation condition in the per-stage solve owns
    the pin.  Keeping W_X(pin) ~ 0 while resolved also keeps the 2x2
    normalization system effectively triangular and well conditioned.
    """
    tag = scheme.tag
    if tag in _CONSTANT_FACTORS:
        return

    if tag in ("degenerate_slope", "min_pin_hilbert_origin"):
        sp = state.omega_spline()
        wx = float(sp.derivative(scheme.pin))
        wxx = float(sp.second_derivative(scheme.pin))
        w = float(sp(scheme.pin))
        resolved = (wxx > 0 and w < 0 and
                    np.sqrt(2.0 * abs(w) / wxx) >= 3.0 * state.ops.dx_near(scheme.pin))
        scale = max(1.0, float(np.abs(state.omega()).max()))
        if resolved and abs(wx) > slope_tol * scale:
            beta = scheme.pin - wx / wxx  # Newton zero of W_X near the pin
            shift = float(np.clip(beta - 1.0, -1e-3, 1e-3))
            beta = 1.0 + shift
            if abs(shift) > 1e-16:
                # first-order transport: exact to O(shift^2), and the
                # relative displacement shift/drho stays far below one
                # cell, so no interpolation ringing enters
                f_x = state.ops.op.node_derivatives(
                    state.f, parity=state.ops.f_parity)
                state.f = beta ** state.k * (state.f + shift * state.x * f_x)

    if tag == "degenerate_slope":
        f0 = state.f[0]
        if f0 != 0.0:
            state.f = state.f * (-1.0 / f0)
    else:
        h0 = scheme.h0
        if h0 is None:
            return
        om = state.omega()
        cur = state.ops.hilbert_at_zero(om, state.ops.omega_parity)
        if cur != 0.0:
            state.f = state.f * (h0 / cur)


@dataclass
class StepInfo:
    dt: float
    c_l: float
    c_omega: float
    f_tau: np.ndarray    # step-start RHS, reused as the residual probe


def step(state: RescalingState, scheme: NormalizationScheme, cfl: float = 0.4,
         dt_max: float = 0.05, dt: float | None = None,
         fields: Fields | None = None) -> StepInfo:
    """Advance one SSPRK(10,4) step in place; factors recomputed per stage."""
    if fields is None:
        fields = compute_fields(state)
    c_l0, c_w0 = compute_scaling_factors(state, scheme, fields)
    if dt is None:
        dt = cfl_dt(state, fields, c_l0, cfl, dt_max)
    f_tau0 = rhs(state, c_l0, c_w0, fields)

    f0 = state.f

    def stage_rhs(y):
        if y is f0:
            return f_tau0
        st = replace(state, f=y, ops=state.ops)
        flds = compute_fields(st)
        cl, cw = compute_scaling_factors(st, scheme, flds)
        return rhs(st, cl, cw, flds)

    state.f = ssprk104(state.f, dt, stage_rhs)
    if not np.all(np.isfinite(state.f)):
        raise DivergenceError("non-finite state after step")
    state.tau += dt
    state.c_l, state.c_omega = c_l0, c_w0
    _renormalize(state, scheme)
    return StepInfo(dt=dt, c_l=c_l0, c_omega=c_w0, f_tau=f_tau0)


# ---------------------------------------------------------------------------
# Run loop, history, physical reconstruction
# ---------------------------------------------------------------------------


class ScalingHistory:
    """Per-step record: (tau, t, c_l, c_w, gamma, residual, max|W|, X_m, halfwidth).

    t is accumulated as the integral of C_w = exp(int c_w) over tau, so the
    physical clock is available without reprocessing.
    """

    COLUMNS = ("tau", "t", "c_l", "c_omega", "gamma", "residual",
               "max_abs_omega", "x_m", "halfwidth")

    def __init__(self):
        self.rows: list[tuple] = []

    def append(self, **kw):
        self.rows.append(tuple(float(kw[c]) for c in self.COLUMNS))

    def column(self, name: str) -> np.ndarray:
        i = self.COLUMNS.index(name)
        return np.array([r[i] for r in self.rows])

    def as_array(self) -> np.ndarray:
        return np.array(self.rows)

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(",".join(self.COLUMNS) + "\n")
            for r in self.rows:
                fh.write(",".join(f"{v:.17g}" for v in r) + "\n")

    @classmethod
    def read_csv(cls, path) -> "ScalingHistory":
        hist = cls()
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        hist.rows = [tuple(row) for row in data]
        return hist


@dataclass
class RunResult:
    state: RescalingState
    history: ScalingHistory
    converged: bool
    reason: str
    n_steps: int
    n_remesh: int = 0


def residual_norm(state: RescalingState, f_tau: np.ndarray, mode: str,
                  exclusions=((1.0, 0.1),)) -> float:
    """max|f_tau| ('f') or max|W_tau| away from the listed windows ('omega')."""
    if mode == "f":
        return float(np.abs(f_tau).max())
    if mode == "omega":
        w_tau = state.x ** state.k * f_tau if state.k else f_tau
        mask = np.ones(state.x.size, dtype=bool)
        for center, radius in exclusions:
            mask &= np.abs(state.x - center) > radius
        return float(np.abs(w_tau[mask]).max())
    raise SolverError(f"unknown residual mode {mode!r}")


def _peak(state: RescalingState):
    om = state.omega()
    try:
        sp = state.omega_spline()
        return peak_geometry(sp, state.x, om)
    except FlatPeakError:
        return None


def run_to_convergence(state: RescalingState, scheme: NormalizationScheme, *,
                       cfl: float = 0.4, tol: float = 1e-8,
                       tau_max: float = 200.0, max_steps: int = 2_000_000,
                       dt_max: float = 0.05, residual_mode: str | None = None,
                       exclusions=((1.0, 0.1),), adaptive: bool = False,
                       remesh_every: int = 20, history: ScalingHistory | None = None,
                       checkpoint_taus=(), checkpoint_cb=None,
                       divergence_factor: float = 1e6,
                       stall_steps: int = 2000, stall_tau_min: float = 10.0,
                       progress_cb=None) -> RunResult:
    """March `state` until the residual drops below tol (or budget runs out).

    The residual is max|f_tau| for a > 0 and max|W_tau| outside the
    exclusion windows for a <= 0, matching the steady-state criteria of the
    two regimes.  With adaptive=True the mesh tracks the peak (25% drift /
    50% width-shrink triggers) and the solution is respline-transferred.

    Fixed-mesh runs of singular fronts floor the pointwise residual at the
    discretization level, so the loop also stops (reason 'stalled') once the
    residual has not improved by 2% over `stall_steps` steps past
    `stall_tau_min`; the scaling factors are locked to many digits well
    before that point.  Set stall_steps=0 to disable.
    """
    if scheme.needs_h0() and scheme.h0 is None:
        fields = compute_fields(state)
        h0 = float(fields.H[0]) if state.x[0] == 0.0 else \
            state.ops.hilbert_at_zero(fields.omega, state.ops.omega_parity)
        scheme = replace(scheme, h0=h0)
    if residual_mode is None:
        residual_mode = "f" if state.a > 0 else "omega"
    history = history if history is not None else ScalingHistory()
    checkpoints = sorted(t for t in checkpoint_taus if t > state.tau)

    t_phys = 0.0
    int_cw = 0.0       # integral of c_w over tau
    c_w_prev = None
    residual0 = None
    converged = False
    reason = "max_steps"
    n_remesh = 0
    dt_prev = None

    n = 0
    while n < max_steps:
        if state.tau >= tau_max - 1e-12:
            reason = "tau_max"
            break
        fields = compute_fields(state)
        c_l0, _ = compute_scaling_factors(state, scheme, fields)
        dt = cfl_dt(state, fields, c_l0, cfl, dt_max)
        # speeds are sampled at the step start; limit the step growth so a
        # front sharpening within the step cannot outrun the CFL bound
        if dt_prev is not None:
            dt = min(dt, 1.2 * dt_prev)
        dt_prev = dt
        dt = min(dt, tau_max - state.tau)
        hit_checkpoint = None
        if checkpoints and state.tau + dt >= checkpoints[0] - 1e-12:
            hit_checkpoint = checkpoints.pop(0)
            dt = hit_checkpoint - state.tau
        info = step(state, scheme, cfl=cfl, dt_max=dt_max, dt=dt, fields=fields)
        n += 1

        res = residual_norm(state, info.f_tau, residual_mode, exclusions)
        if residual0 is None:
            residual0 = max(res, 1e-300)
        if not np.isfinite(res) or res > divergence_factor * residual0:
            raise DivergenceError(
                f"residual {res:.3e} exceeded {divergence_factor:.0e} x initial")

        # physical clock: C_w = exp(int c_w), t = int C_w dtau
        if c_w_prev is None:
            c_w_prev = info.c_omega
        c_w_half = 0.5 * (c_w_prev + info.c_omega)
        cw_old = np.exp(int_cw)
        int_cw += c_w_half * info.dt
        cw_new = np.exp(int_cw)
        t_phys += 0.5 * (cw_old + cw_new) * info.dt
        c_w_prev = info.c_omega

        peak = _peak(state)
        history.append(
            tau=state.tau, t=t_phys, c_l=info.c_l, c_omega=info.c_omega,
            gamma=-info.c_l / info.c_omega if info.c_omega else np.nan,
            residual=res,
            max_abs_omega=peak.amplitude if peak else np.abs(state.omega()).max(),
            x_m=peak.x_m if peak else np.nan,
            halfwidth=peak.width if peak else np.nan)

        if hit_checkpoint is not None and checkpoint_cb is not None:
            checkpoint_cb(state, hit_checkpoint)
        if progress_cb is not None and n % 200 == 0:
            progress_cb(n, state, res)

        if res < tol:
            converged = True
            reason = "converged"
            break

        if (stall_steps and tol > 0 and state.tau > stall_tau_min
                and len(history.rows) > stall_steps):
            gcol = history.COLUMNS.index("gamma")
            rcol = history.COLUMNS.index("residual")
            prev = history.rows[-1 - stall_steps]
            gamma_now = history.rows[-1][gcol]
            # locked scaling factors plus no residual progress over the
            # trailing window: the discretization floor has been reached
            if (abs(gamma_now - prev[gcol]) <= 1e-5 * max(1.0, abs(gamma_now))
                    and res >= 0.98 * prev[rcol]):
                reason = "stalled"
                break

        if adaptive and peak is not None and n % remesh_every == 0:
            if should_remesh(state.mesh, peak.x_m, peak.width):
                _do_remesh(state, peak)
                n_remesh += 1
    else:
        reason = "max_steps"

    return RunResult(state=state, history=history, converged=converged,
                     reason=reason, n_steps=n, n_remesh=n_remesh)


def _do_remesh(state: RescalingState, peak: PeakInfo) -> None:
    spec = state.mesh.spec
    pad = 0.25 * peak.width
    new_spec = MeshSpec(X_m=peak.x_m, X1=peak.x1 - pad, X2=peak.x2 + pad,
                        M=spec.M, N_bulk=spec.N_bulk, drho=spec.drho)
    new_mesh = generate_mesh(new_spec)
    fsp = state.f_spline()
    state.f = remesh(state.f, state.mesh, new_mesh, spline=fsp)
    state.mesh = new_mesh
    state.ops = SolverOps(new_mesh, state.symmetry)


@dataclass
class PhysicalReconstruction:
    """Cumulative scales and the physical-time clock recovered from a run."""

    tau: np.ndarray
    C_omega: np.ndarray
    C_l: np.ndarray
    t: np.ndarray
    T_est: float
    max_abs_omega: np.ndarray
    halfwidth: np.ndarray

    def omega_max_physical(self) -> np.ndarray:
        return self.max_abs_omega / self.C_omega

    def halfwidth_physical(self) -> np.ndarray:
        return self.halfwidth / self.C_l


class NoBlowupError(SolverError):
    """c_w ended nonnegative: the rescaled clock does not compress."""


def reconstruct_physical(history: ScalingHistory, state: RescalingState | None = None
                         ) -> PhysicalReconstruction:
    """C_w, C_l, t(tau) by cumulative trapezoid, and the blowup-time estimate

        T ~ t_end + C_w(tau_end)/|c_w(tau_end)|,

    valid once c_w has stabilized at a negative value."""
    tau = history.column("tau")
    c_l = history.column("c_l")
    c_w = history.column("c_omega")
    if tau.size == 0:
        raise SolverError("empty history")
    if c_w[-1] >= 0:
        raise NoBlowupError("final c_w is nonnegative; no finite-time blowup")
    dtau = np.diff(tau)
    # anchor the cumulative integrals over the un-recorded [0, tau_0] gap by
    # holding the first recorded factors constant there
    int_cw = c_w[0] * tau[0] + np.concatenate(
        [[0.0], np.cumsum(0.5 * (c_w[1:] + c_w[:-1]) * dtau)])
    int_cl = c_l[0] * tau[0] + np.concatenate(
        [[0.0], np.cumsum(0.5 * (c_l[1:] + c_l[:-1]) * dtau)])
    C_w = np.exp(int_cw)
    C_l = np.exp(int_cl)
    # the in-loop clock is exact at full step resolution; recompute only if
    # the history lacks it
    t = history.column("t")
    if not np.all(np.isfinite(t)):
        t = np.concatenate([[0.0], np.cumsum(0.5 * (C_w[1:] + C_w[:-1]) * dtau)])
    T_est = float(t[-1] + C_w[-1] / abs(c_w[-1]))
    return PhysicalReconstruction(
        tau=tau, C_omega=C_w, C_l=C_l, t=t, T_est=T_est,
        max_abs_omega=history.column("max_abs_omega"),
        halfwidth=history.column("halfwidth"))


def initial_state(a: float, k: int, mesh: AdaptiveMesh, symmetry: str,
                  f0, tau0: float = 0.0) -> RescalingState:
    """State from an initial profile callable f0(X) = W0(X)/X^k on X >= 0."""
    f = np.asarray(f0(mesh.nodes), dtype=float)
    return RescalingState(a=a, k=k, mesh=mesh, symmetry=symmetry, f=f, tau=tau0)
