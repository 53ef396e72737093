"""Sinh-stretched mesh generation, remesh triggers, and solution transfer."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gclmlab.mesh import (MeshError, MeshSpec, generate_mesh, remesh,
                          should_remesh)


def test_origin_and_truncation_nodes():
    spec = MeshSpec(X_m=1.0, X1=0.99, X2=1.01, M=1e10)
    mesh = generate_mesh(spec)
    assert mesh.nodes[0] == 0.0
    assert abs(mesh.nodes[-1] - 1e10) <= 1e-6 * 1e10
    assert abs(mesh.rho_max - mesh.drho * (mesh.n - 1)) <= 1e-12 * mesh.rho_max


def test_default_bulk_count():
    spec = MeshSpec(X_m=1.0, X1=0.99, X2=1.01, M=1e10)
    mesh = generate_mesh(spec)
    inside = (mesh.nodes >= 0.99) & (mesh.nodes <= 1.01)
    assert inside.sum() >= 600


def test_monotone_metric():
    spec = MeshSpec(X_m=1.0, X1=0.9, X2=1.1, M=1e8, N_bulk=100, drho=0.02)
    mesh = generate_mesh(spec)
    assert np.all(np.diff(mesh.nodes) > 0)
    assert np.all(mesh.xprime() > 0)
    # metric times drho is the local spacing, up to quadrature of X'
    dx = np.diff(mesh.nodes)
    mid = 0.5 * (mesh.xprime()[1:] + mesh.xprime()[:-1]) * mesh.drho
    assert np.abs(dx / mid - 1).max() <= 1e-3


@settings(max_examples=25, deadline=None)
@given(x_m=st.floats(0.3, 5.0), w=st.floats(0.005, 0.8), m=st.floats(1e2, 1e10),
       n_bulk=st.integers(20, 400))
def test_mesh_properties_random(x_m, w, m, n_bulk):
    spec = MeshSpec(X_m=x_m, X1=x_m - w / 2, X2=x_m + w / 2, M=m,
                    N_bulk=n_bulk, drho=0.02)
    mesh = generate_mesh(spec)
    assert mesh.nodes[0] == 0.0
    assert abs(mesh.nodes[-1] - m) <= 1e-8 * m
    assert np.all(np.diff(mesh.nodes) > 0)
    inside = (mesh.nodes >= spec.X1) & (mesh.nodes <= spec.X2)
    assert inside.sum() >= n_bulk


def test_sizing_error():
    with pytest.raises(MeshError):
        generate_mesh(MeshSpec(X_m=1.0, X1=1.0 - 5e-14, X2=1.0 + 5e-14,
                               M=1e10, N_bulk=600, drho=0.01))


def test_spec_validation():
    with pytest.raises(MeshError):
        MeshSpec(X_m=1.0, X1=1.2, X2=1.4)          # X_m outside window
    with pytest.raises(MeshError):
        MeshSpec(X_m=1.0, X1=0.9, X2=1.1, drho=-1.0)


def test_should_remesh_triggers():
    mesh = generate_mesh(MeshSpec(X_m=1.0, X1=0.9, X2=1.1, M=1e6,
                                  N_bulk=50, drho=0.02))
    w0 = mesh.width_at_generation
    assert not should_remesh(mesh, 1.0, w0)
    assert should_remesh(mesh, 1.0 + 0.26 * w0, w0)           # drift > 25%
    assert not should_remesh(mesh, 1.0 + 0.24 * w0, w0)
    assert should_remesh(mesh, 1.0, 0.49 * w0)                # shrink > 50%
    assert not should_remesh(mesh, 1.0, 0.51 * w0)
    with pytest.raises(MeshError):
        should_remesh(mesh, 1.0, 0.0)


@pytest.fixture()
def mesh_pair():
    a = generate_mesh(MeshSpec(X_m=1.0, X1=0.9, X2=1.1, M=1e4,
                               N_bulk=80, drho=0.02))
    b = generate_mesh(MeshSpec(X_m=1.3, X1=1.1, X2=1.5, M=1e4,
                               N_bulk=80, drho=0.02))
    return a, b


def test_remesh_identity(mesh_pair):
    a, _ = mesh_pair
    vals = np.tanh(a.nodes)
    assert np.array_equal(remesh(vals, a, a), vals)


def test_remesh_cubic_exact(mesh_pair):
    a, b = mesh_pair
    p = np.polynomial.Polynomial([0.1, 0.4, -0.02, 0.003])
    out = remesh(p(a.nodes), a, b)
    interior = (b.nodes > a.nodes[40]) & (b.nodes < a.nodes[-40])
    scale = np.abs(p(b.nodes[interior])).max()
    assert np.abs(out[interior] - p(b.nodes[interior])).max() <= 1e-10 * scale


def test_remesh_runge(mesh_pair):
    a, b = mesh_pair
    out = remesh(1.0 / (1.0 + a.nodes**2), a, b)
    ref = 1.0 / (1.0 + b.nodes**2)
    assert np.abs(out - ref).max() <= 2e-5


def test_remesh_roundtrip(mesh_pair):
    a, b = mesh_pair
    vals = np.exp(-((a.nodes - 1.0) ** 2))
    once = remesh(vals, a, b)
    back = remesh(once, b, a)
    # single-transfer error in either direction
    err_ab = np.abs(once - np.exp(-((b.nodes - 1.0) ** 2))).max()
    err_ba = np.abs(remesh(np.exp(-((b.nodes - 1.0) ** 2)), b, a) - vals).max()
    assert np.abs(back - vals).max() <= 2.0 * max(err_ab, err_ba) + 1e-14


def test_remesh_span_guard(mesh_pair):
    a, _ = mesh_pair
    wider = generate_mesh(MeshSpec(X_m=1.0, X1=0.9, X2=1.1, M=2e4,
                                   N_bulk=80, drho=0.02))
    with pytest.raises(MeshError):
        remesh(np.zeros(a.n), a, wider)
