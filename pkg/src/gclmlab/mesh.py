"""Adaptive sinh-stretched meshes concentrated around a moving peak.

Nodes are the image of a uniform computational lattice rho_j = j*drho under

    X(rho) = X_m (1 - cosh rho) + sqrt(c + X_m^2) sinh rho,

which maps rho = 0 to X = 0, is strictly increasing, and has its smallest
metric X'(rho) = sqrt(c + (X - X_m)^2) exactly at the peak location X_m.
The concentration parameter c is solved so that at least N_bulk lattice
points land in the half-maximum window [X1, X2]; rho_max is solved so the
last node sits at the truncation radius M (drho is shrunk slightly so the
lattice hits M exactly).

Remeshing policy: a mesh is regenerated when the peak drifts by more than
25% of the width the mesh was generated for, or when the peak width shrinks
below 50% of it; the solution is transferred by cubic-spline interpolation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spline import Grid, SplineFunction, build_spline


class MeshError(ValueError):
    """Mesh specification cannot be realized."""


@dataclass(frozen=True)
class MeshSpec:
    """Geometry request: peak X_m inside the window [X1, X2], radius M."""

    X_m: float
    X1: float
    X2: float
    M: float = 1e10
    N_bulk: int = 600
    drho: float = 0.01

    def __post_init__(self):
        if not (0.0 <= self.X_m and self.X1 < self.X_m < self.X2 <= self.M):
            raise MeshError("need 0 <= X1 < X_m < X2 <= M")
        if self.drho <= 0:
            raise MeshError("drho must be positive")
        if self.N_bulk < 2:
            raise MeshError("N_bulk must be at least 2")


def _x_of_rho(rho, X_m, c):
    s = np.sqrt(c + X_m * X_m)
    return X_m * (1.0 - np.cosh(rho)) + s * np.sinh(rho)


def _xprime_of_rho(rho, X_m, c):
    s = np.sqrt(c + X_m * X_m)
    return -X_m * np.sinh(rho) + s * np.cosh(rho)


def _rho_of_x(x, X_m, c):
    # invert X(rho): a*e^rho + b*e^-rho = x - X_m with a = (s - X_m)/2,
    # b = -(s + X_m)/2, so e^rho solves a quadratic with -4ab = c.
    # a and the u < 0 branch are computed in cancellation-free form.
    s = np.sqrt(c + X_m * X_m)
    a = 0.5 * c / (s + X_m) if X_m > 0 else 0.5 * s
    u = np.asarray(x, dtype=float) - X_m
    root = np.sqrt(u * u + c)
    with np.errstate(divide="ignore", invalid="ignore"):
        num = np.where(u >= 0, u + root, c / (root - u))
    return np.log(num) - np.log(2.0 * a)


@dataclass(frozen=True)
class AdaptiveMesh:
    """Realized mesh: lattice, nodes on [0, M], and generation-time geometry."""

    spec: MeshSpec
    c: float
    rho_max: float
    drho: float
    nodes: np.ndarray
    width_at_generation: float

    @property
    def grid(self) -> Grid:
        return Grid(self.nodes)

    @property
    def n(self) -> int:
        return self.nodes.size

    def xprime(self) -> np.ndarray:
        """Mesh metric X'(rho) at the lattice points (all positive)."""
        rho = self.drho * np.arange(self.n)
        return _xprime_of_rho(rho, self.spec.X_m, self.c)


def generate_mesh(spec: MeshSpec) -> AdaptiveMesh:
    """Solve for (c, rho_max) realizing the spec and lay down the nodes."""

    def bulk_count(c):
        # the lattice lives on rho >= 0: a window reaching past X = 0 only
        # ever collects nodes from its nonnegative part
        r1 = max(_rho_of_x(spec.X1, spec.X_m, c), 0.0) if spec.X1 > 0 else 0.0
        r2 = _rho_of_x(spec.X2, spec.X_m, c)
        return np.floor(r2 / spec.drho) - np.ceil(r1 / spec.drho) + 1

    def realize(c):
        rho_m = _rho_of_x(spec.M, spec.X_m, c)
        n = int(np.ceil(rho_m / spec.drho))
        drho = rho_m / n
        nodes = _x_of_rho(drho * np.arange(n + 1), spec.X_m, c)
        nodes[0] = 0.0
        nodes[-1] = spec.M
        return rho_m, drho, nodes

    # count is monotone decreasing in c; bisect log10(c) for the largest c
    # still meeting the request (coarsest admissible mesh).  The effective
    # step is nudged so the lattice ends exactly at M, which can shift one
    # boundary point out of the window, hence the safety retry.
    for safety in (0, 1, 2, 4):
        target = spec.N_bulk + safety
        lo, hi = -30.0, 30.0
        if bulk_count(10.0 ** lo) < target:
            raise MeshError(
                f"cannot place {target} lattice points in [{spec.X1}, {spec.X2}] "
                f"with drho={spec.drho}")
        while hi - lo > 1e-12:
            mid = 0.5 * (lo + hi)
            if bulk_count(10.0 ** mid) >= target:
                lo = mid
            else:
                hi = mid
        c = 10.0 ** lo
        rho_m, drho, nodes = realize(c)
        inside = np.count_nonzero((nodes >= spec.X1) & (nodes <= spec.X2))
        if inside >= spec.N_bulk:
            break
    else:
        raise MeshError("could not realize the requested bulk count")

    if not np.all(np.diff(nodes) > 0):
        # the requested concentration squeezes nodes below float resolution
        raise MeshError(
            f"bulk window [{spec.X1}, {spec.X2}] too small: node spacing "
            "collapses below floating-point resolution")
    return AdaptiveMesh(spec=spec, c=c, rho_max=rho_m, drho=drho, nodes=nodes,
                        width_at_generation=spec.X2 - spec.X1)


def should_remesh(current: AdaptiveMesh, x_m_now: float, width_now: float) -> bool:
    """Peak drifted > 25% of the generation-time width, or width halved."""
    if width_now <= 0:
        raise MeshError("peak width must be positive")
    w0 = current.width_at_generation
    return (abs(x_m_now - current.spec.X_m) > 0.25 * w0) or (width_now < 0.5 * w0)


def remesh(values: np.ndarray, old: AdaptiveMesh, new: AdaptiveMesh,
           spline: SplineFunction | None = None) -> np.ndarray:
    """Transfer node values from `old` to `new` by cubic-spline interpolation.

    Passing a prebuilt spline (e.g. the mirrored extension for symmetric
    problems) overrides the default natural spline on the old nodes.
    """
    tol = 1e-12 * max(1.0, abs(new.nodes[-1]))
    if new.nodes[0] < old.nodes[0] - tol or new.nodes[-1] > old.nodes[-1] + tol:
        raise MeshError("new mesh extends beyond the old span")
    if spline is None:
        spline = build_spline(old.grid, values)
    out = np.asarray(spline(np.clip(new.nodes, old.nodes[0], old.nodes[-1])))
    # coinciding nodes keep their data exactly
    shared = np.searchsorted(old.nodes, new.nodes)
    shared = np.clip(shared, 0, old.nodes.size - 1)
    hit = old.nodes[shared] == new.nodes
    out[hit] = values[shared[hit]]
    return out
