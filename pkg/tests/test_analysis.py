"""Characteristic oracle, power-law fitting, inner-profile extraction."""

import numpy as np
import pytest

from gclmlab.analysis import (FitError, OracleA0, compare_profiles,
                              extract_inner_profile, fit_power_law, oracle_a0,
                              rescale_wave_to_inner)
from gclmlab.mesh import MeshSpec, generate_mesh
from gclmlab.rescaling import RescalingState


@pytest.fixture(scope="module")
def cubic_oracle():
    # F0 odd with cubic vanishing; G0 with the exact normalization values
    return OracleA0(F0=lambda x: -np.asarray(x, float) ** 3,
                    G0=lambda x: 2.0 + 2.0 * np.asarray(x, float) ** 2)


def test_oracle_identity_at_t0(cubic_oracle):
    xs = np.array([0.3, 0.9, 2.0])
    F, G = oracle_a0(cubic_oracle, xs, 0.0)
    assert np.abs(F - cubic_oracle.F0(xs)).max() <= 1e-14
    assert np.abs(G - cubic_oracle.G0(xs)).max() <= 1e-14


def test_oracle_center_value(cubic_oracle):
    for t in (0.5, 3.0, 20.0):
        _, G = oracle_a0(cubic_oracle, 0.0, t)
        assert abs(G - 2.0) <= 1e-13


def test_oracle_limit_profile(cubic_oracle):
    _, G = oracle_a0(cubic_oracle, 0.5, 20.0)
    assert abs(G - 2.0 / (1.0 - 0.25)) <= 1e-6


def test_oracle_rejects_negative_time(cubic_oracle):
    with pytest.raises(ValueError):
        oracle_a0(cubic_oracle, 0.1, -1.0)


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("eta", [-1.5, -1.2, 1.0])
def test_fit_synthetic_power_law(eta):
    T = 2.0
    t = np.linspace(0.5, 1.8, 200)
    v = 3.0 * (T - t) ** eta
    res = fit_power_law(t, v, (0.5, 1.8))
    assert abs(res.eta - eta) <= 1e-3
    assert res.r2 >= 0.9999
    assert abs(res.T_est - T) <= 5e-3


def test_fit_linear_exact():
    T = 2.0
    t = np.linspace(0.0, 1.5, 60)
    res = fit_power_law(t, T - t, (0.0, 1.5))
    assert abs(res.eta - 1.0) <= 1e-12
    assert res.r2 == 1.0
    assert abs(res.T_est - T) <= 1e-12


def test_fit_idempotence():
    T, eta = 1.6, -1.47
    t = np.linspace(1.0, 1.5, 150)
    v = 2.0 * (T - t) ** eta
    first = fit_power_law(t, v, (1.0, 1.5))
    # regenerate exact data from the winning model and refit
    y = 2.0 ** (1.0 / first.eta) * (first.T_est - t)
    second = fit_power_law(t, y ** first.eta, (1.0, 1.5))
    assert abs(second.eta - first.eta) <= 1e-6


def test_fit_eta_strictly_inside_window():
    T = 2.0
    t = np.linspace(0.5, 1.8, 200)
    v = (T - t) ** -0.37          # crude estimate lands off-center
    res = fit_power_law(t, v, (0.5, 1.8), span=0.02)
    assert abs(res.eta - (-0.37)) <= 1e-3


def test_fit_guards():
    t = np.linspace(0, 1, 30)
    with pytest.raises(FitError):
        fit_power_law(t, np.sin(6 * t) + 2.0, (0, 1))    # not monotone
    with pytest.raises(FitError):
        fit_power_law(t, -np.ones(30), (0, 1))           # not positive
    with pytest.raises(FitError):
        fit_power_law(t[:5], np.exp(t[:5]), (0, 1))      # too few samples


# ---------------------------------------------------------------------------
# Inner profile
# ---------------------------------------------------------------------------


def _state_with_profile(fn, a=-0.2):
    mesh = generate_mesh(MeshSpec(X_m=1.0, X1=0.5, X2=1.5, M=1e4,
                                  N_bulk=200, drho=0.02))
    f = fn(mesh.nodes)
    return RescalingState(a=a, k=0, mesh=mesh, symmetry="none", f=f)


def test_inner_profile_lorentzian_peak():
    # W = -1/(1 + ((X-1)/0.2)^2): halfwidth 0.4, and the normalized zoom is
    # the universal -1/(1 + 4 Xhat^2)
    st = _state_with_profile(lambda x: -1.0 / (1.0 + ((x - 1.0) / 0.2) ** 2))
    inner = extract_inner_profile(st)
    assert abs(inner.values[np.argmin(np.abs(inner.xhat))] + 1.0) <= 1e-10
    assert abs(inner.halfwidth - 0.4) <= 1e-6
    ref = -1.0 / (1.0 + 4.0 * inner.xhat ** 2)
    sel = np.abs(inner.xhat) <= 2.0
    assert np.abs(inner.values - ref)[sel].max() <= 1e-5


def test_inner_profile_measure_normalization():
    st = _state_with_profile(lambda x: -np.exp(-((x - 1.0) ** 2) / 0.1))
    inner = extract_inner_profile(st)
    dx = inner.xhat[1] - inner.xhat[0]
    measure = float(np.sum(inner.values < -0.5) * dx)
    assert abs(measure - 1.0) <= 0.01
    assert inner.values.min() >= -1.0 - 1e-12


def test_rescale_wave_matches_closed_form():
    x = np.linspace(0, 60, 4001)
    w = 1.0 / (1.0 + x * x)
    xhat = np.linspace(-5, 5, 401)
    vals = rescale_wave_to_inner(x, w, xhat)
    # halfwidth of the even lorentzian is 2 -> -1/(1+4 Xhat^2)
    ref = -1.0 / (1.0 + 4.0 * xhat ** 2)
    assert np.abs(vals - ref).max() <= 1e-6


def test_compare_profiles():
    x = np.linspace(-3, 3, 301)
    p = (x, np.sin(x))
    q = (x, np.sin(x) + 0.01)
    assert compare_profiles(p, p, (-2, 2)) == 0.0
    assert abs(compare_profiles(p, q, (-2, 2)) - 0.01) <= 1e-12
    with pytest.raises(ValueError):
        compare_profiles((x, np.sin(x)), (x + 10.0, np.sin(x)), (-2, 2))
