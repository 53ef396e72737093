"""Closed-form profiles, their Hilbert transforms, and steady-state residuals.

Each profile is an exact (or distributional) steady state of the rescaled
equation

    (c_l X + a U) W_X = (c_w + H(W)) W,      U' = H(W), U(0) = 0,

for specific scaling factors (c_l, c_w).  They serve as oracles: pointwise
targets for the spline Hilbert transform, fixed points for the solver, and
inputs to the residual checker below.

Distributional profiles (the odd a=0 limit, a pair of opposite Dirac masses
at X = +-1) are represented only through their Hilbert transforms; their
pointwise omega is reported as 0 away from the singular support.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad


class SingularPointError(ValueError):
    """Profile evaluated exactly at one of its singular points."""


@dataclass(frozen=True)
class ProfileKind:
    """Closed-form profile selector; a/alpha only where the family needs them."""

    tag: str
    a: float | None = None
    alpha: float | None = None


def clm0() -> ProfileKind:
    return ProfileKind("clm0")


def half_case() -> ProfileKind:
    return ProfileKind("half_case", a=0.5)


def castro(a: float) -> ProfileKind:
    return ProfileKind("castro", a=a)


def c_alpha(alpha: float) -> ProfileKind:
    if not (0.0 < alpha <= 1.0):
        raise ValueError("alpha must lie in (0, 1]")
    return ProfileKind("c_alpha", a=0.0, alpha=alpha)


def singular_half_line(a: float) -> ProfileKind:
    if a >= 0:
        raise ValueError("the explicit singular half-line family needs a < 0")
    return ProfileKind("singular_half_line", a=a)


def traveling_a0() -> ProfileKind:
    return ProfileKind("traveling_a0", a=0.0)


def singular_odd_limit() -> ProfileKind:
    return ProfileKind("singular_odd_limit", a=0.0)


def _singular_points(kind: ProfileKind) -> tuple:
    return {
        "castro": (-1.0, 1.0),
        "singular_half_line": (1.0,),
        "singular_odd_limit": (-1.0, 1.0),
    }.get(kind.tag, ())


def eval_profile(kind: ProfileKind, X):
    """(omega, hilbert, gamma) of the selected profile at X.

    gamma is the spatial shrinking rate -c_l/c_w, except for the traveling
    wave where it reports the wave speed.
    """
    X = np.asarray(X, dtype=float)
    for xs in _singular_points(kind):
        if np.any(X == xs):
            raise SingularPointError(f"{kind.tag} is singular at X = {xs}")

    if kind.tag == "clm0":
        om = -4.0 * X / (1.0 + 4.0 * X * X)
        hi = 2.0 / (1.0 + 4.0 * X * X)
        return om, hi, 1.0

    if kind.tag == "half_case":
        q = 3.0 / 8.0
        den = (q + X * X) ** 2
        return -np.sqrt(q) * X / den, (q - X * X) / den, 1.0 / 3.0

    if kind.tag == "castro":
        inside = np.abs(X) < 1.0
        with np.errstate(invalid="ignore", divide="ignore"):
            om = np.where(inside, -X / np.sqrt(np.abs(1.0 - X * X)), 0.0)
            out = X / np.sqrt(np.abs(X * X - 1.0))
            hi = np.where(inside, 1.0, 1.0 - np.sign(X) * np.abs(out))
        return om, hi, -kind.a

    if kind.tag == "c_alpha":
        al = kind.alpha
        ax = np.abs(X) ** al
        co = np.cos(al * np.pi / 2.0)
        den = 1.0 + 2.0 * co * ax + ax * ax
        om = -np.sin(al * np.pi / 2.0) * np.sign(X) * ax / den
        hi = (1.0 + co * ax) / den
        return om, hi, 1.0 / al

    if kind.tag == "singular_half_line":
        mu = 1.0 / (1.0 - kind.a)
        right = X > 1.0
        with np.errstate(invalid="ignore", divide="ignore"):
            pw = np.abs(1.0 - X) ** (-mu)
        om = np.where(right, -np.sin(np.pi * mu) * pw, 0.0)
        hi = np.where(right, np.cos(np.pi * mu) * pw, pw)
        return om, hi, 1.0 - kind.a

    if kind.tag == "traveling_a0":
        den = 1.0 + X * X
        return 1.0 / den, X / den, 0.5

    if kind.tag == "singular_odd_limit":
        return np.zeros_like(X), 2.0 / (1.0 - X * X), 0.5

    raise ValueError(f"unknown profile kind {kind.tag!r}")


@dataclass(frozen=True)
class SteadyTriple:
    """A steady profile with its scaling factors and analytic companions."""

    a: float
    c_l: float
    c_omega: float
    omega: Callable
    hilbert: Callable
    velocity: Callable
    omega_x: Callable | None = None
    singular_points: tuple = ()

    @property
    def gamma(self) -> float:
        return -self.c_l / self.c_omega


def steady_triple(kind: ProfileKind) -> SteadyTriple:
    """The (profile, c_l, c_w) solution of the steady equation for `kind`."""
    if kind.tag == "clm0":
        return SteadyTriple(
            a=0.0, c_l=1.0, c_omega=-1.0,
            omega=lambda X: -4.0 * X / (1.0 + 4.0 * X**2),
            hilbert=lambda X: 2.0 / (1.0 + 4.0 * X**2),
            velocity=lambda X: np.arctan(2.0 * X),
            omega_x=lambda X: -4.0 * (1.0 - 4.0 * X**2) / (1.0 + 4.0 * X**2) ** 2,
        )
    if kind.tag == "half_case":
        q = 3.0 / 8.0
        return SteadyTriple(
            a=0.5, c_l=1.0 / 3.0, c_omega=-1.0,
            omega=lambda X: -np.sqrt(q) * X / (q + X**2) ** 2,
            hilbert=lambda X: (q - X**2) / (q + X**2) ** 2,
            velocity=lambda X: X / (q + X**2),
            omega_x=lambda X: -np.sqrt(q) * (q - 3.0 * X**2) / (q + X**2) ** 3,
        )
    if kind.tag == "castro":
        a = kind.a

        def om(X):
            X = np.asarray(X, float)
            inside = np.abs(X) < 1.0
            with np.errstate(invalid="ignore", divide="ignore"):
                v = -X / np.sqrt(np.abs(1.0 - X * X))
            return np.where(inside, v, 0.0)

        def omx(X):
            X = np.asarray(X, float)
            inside = np.abs(X) < 1.0
            with np.errstate(invalid="ignore", divide="ignore"):
                v = -(1.0 - X * X) ** (-1.5)
            return np.where(inside, v, 0.0)

        def hi(X):
            return eval_profile(castro(a), X)[1]

        def vel(X):
            X = np.asarray(X, float)
            inside = np.abs(X) <= 1.0
            with np.errstate(invalid="ignore"):
                tail = X - np.sign(X) * np.sqrt(np.abs(X * X - 1.0))
            return np.where(inside, X, tail)

        return SteadyTriple(a=a, c_l=-a, c_omega=-1.0, omega=om, hilbert=hi,
                            velocity=vel, omega_x=omx, singular_points=(-1.0, 1.0))
    if kind.tag == "c_alpha":
        al = kind.alpha

        def om(X):
            return eval_profile(kind, X)[0]

        def hi(X):
            return eval_profile(kind, X)[1]

        def vel(X):
            X = np.asarray(X, float)
            flat = X.ravel()
            out = np.array([quad(lambda y: float(hi(y)), 0.0, xi,
                                 epsabs=1e-12, epsrel=1e-12, limit=200)[0]
                            for xi in flat])
            return out.reshape(X.shape)

        # the printed normalization of this family pairs with the factors
        # (1/(2 alpha), -1/2): the X -> 0 balance forces c_l*alpha = c_w + 1.
        return SteadyTriple(a=0.0, c_l=0.5 / al, c_omega=-0.5, omega=om,
                            hilbert=hi, velocity=vel, omega_x=None)
    if kind.tag == "singular_half_line":
        a = kind.a
        mu = 1.0 / (1.0 - a)

        def om(X):
            return eval_profile(kind, X)[0]

        def hi(X):
            return eval_profile(kind, X)[1]

        def omx(X):
            X = np.asarray(X, float)
            right = X > 1.0
            with np.errstate(invalid="ignore", divide="ignore"):
                v = mu * np.sin(np.pi * mu) * np.abs(X - 1.0) ** (-1.0 - mu)
            return np.where(right, v, 0.0)

        def vel(X):
            X = np.asarray(X, float)
            return (1.0 + (X - 1.0) * hi(X)) / (1.0 - mu)

        return SteadyTriple(a=a, c_l=1.0 - a, c_omega=-1.0, omega=om, hilbert=hi,
                            velocity=vel, omega_x=omx, singular_points=(1.0,))
    raise ValueError(f"no steady triple for {kind.tag!r}")


def _fd_derivative(fn: Callable, x: np.ndarray, scale: float = 1e-2) -> np.ndarray:
    """6th-order central difference on a fine local stencil."""
    h = scale * np.maximum(1.0, np.abs(x))
    w = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
    out = np.zeros_like(x, dtype=float)
    for k, wk in zip(range(-3, 4), w):
        if wk:
            out += wk * np.asarray(fn(x + k * h), float)
    return out / h


def steady_residual(triple: SteadyTriple, points) -> np.ndarray:
    """R(X) = (c_l X + a U) W_X - (c_w + H(W)) W at the given points."""
    X = np.atleast_1d(np.asarray(points, dtype=float))
    for xs in triple.singular_points:
        if np.any(X == xs):
            raise SingularPointError(f"residual point at singularity X = {xs}")
    if triple.omega_x is not None:
        wx = np.asarray(triple.omega_x(X), float)
    else:
        wx = _fd_derivative(triple.omega, X)
    w = np.asarray(triple.omega(X), float)
    h = np.asarray(triple.hilbert(X), float)
    u = np.asarray(triple.velocity(X), float)
    return (triple.c_l * X + triple.a * u) * wx - (triple.c_omega + h) * w
