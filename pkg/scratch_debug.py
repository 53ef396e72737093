"""Instrumented debugging of the two calibration failures."""
import sys
import numpy as np
from gclmlab.mesh import MeshSpec, generate_mesh
from gclmlab.rescaling import (initial_state, degenerate_slope, min_pin_hilbert_origin,
                               compute_fields, compute_scaling_factors, step,
                               advection_speed, cfl_dt, _renormalize)
from gclmlab.initialdata import f0_preset

case = sys.argv[1]
cfl = float(sys.argv[2]) if len(sys.argv) > 2 else 2.5
renorm = sys.argv[3] if len(sys.argv) > 3 else "on"

if case == "cal1":
    spec = MeshSpec(X_m=1.0, X1=0.9, X2=1.1, M=1e10, N_bulk=200, drho=0.015)
    mesh = generate_mesh(spec)
    st = initial_state(a=0.5, k=3, mesh=mesh, symmetry="odd",
                       f0=f0_preset("regular_degenerate", 3))
    scheme = degenerate_slope()
    nmax, stride = 2000, 25
else:
    spec = MeshSpec(X_m=1.0, X1=0.9, X2=1.1, M=1e10, N_bulk=240, drho=0.02)
    mesh = generate_mesh(spec)
    st = initial_state(a=-1.0, k=3, mesh=mesh, symmetry="none",
                       f0=f0_preset("half_infinite_order", 3))
    from gclmlab.rescaling import run_to_convergence, replace as _r
    scheme = min_pin_hilbert_origin()
    # capture h0
    fl = compute_fields(st)
    import dataclasses
    scheme = dataclasses.replace(scheme, h0=float(fl.H[0]))
    nmax, stride = 1500, 25

import gclmlab.rescaling as R
if renorm == "off":
    R._renormalize = lambda *a, **k: None

for n in range(nmax):
    fields = compute_fields(st)
    c_l, c_w = compute_scaling_factors(st, scheme, fields)
    v = advection_speed(st, fields, c_l)
    ratios = st.ops.dx / np.maximum(np.abs(v), 1e-300)
    j = int(np.argmin(ratios))
    try:
        info = step(st, scheme, cfl=cfl, dt_max=0.05, fields=fields)
    except Exception as e:
        print(f"STEP FAILED at n={n}: {e}")
        print(f"  c_l={c_l:.5f} c_w={c_w:.5f} maxO={np.abs(st.omega()).max():.3e}")
        print(f"  cfl-binding node j={j} x={st.x[j]:.6g} v={v[j]:.4e} dx={st.ops.dx[j]:.4e}")
        break
    if n % stride == 0:
        om = st.omega()
        sp = st.omega_spline()
        wx1 = float(sp.derivative(1.0))
        print(f"n={n} tau={st.tau:.4f} dt={info.dt:.2e} c_l={c_l:.5f} c_w={c_w:.5f} "
              f"maxO={np.abs(om).max():.4e} Wx(1)={wx1:.2e} "
              f"cfl@x={st.x[j]:.4g}(v={v[j]:.2e})", flush=True)
