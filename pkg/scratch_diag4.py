"""Instrumented fine-mesh half-line run: where does it depart?"""
import sys, time, dataclasses
import numpy as np
from gclmlab.mesh import MeshSpec, generate_mesh
from gclmlab.rescaling import (initial_state, min_pin_hilbert_origin, compute_fields,
                               compute_scaling_factors, step, advection_speed,
                               _pin_resolved)
from gclmlab.initialdata import f0_preset

n_bulk, drho = int(sys.argv[1]), float(sys.argv[2])
cfl_arg = float(sys.argv[3]) if len(sys.argv) > 3 else 2.5
spec = MeshSpec(X_m=1.0, X1=0.9, X2=1.1, M=1e10, N_bulk=n_bulk, drho=drho)
mesh = generate_mesh(spec)
st = initial_state(a=-1.0, k=3, mesh=mesh, symmetry="none",
                   f0=f0_preset("half_infinite_order", 3))
fl = compute_fields(st)
scheme = dataclasses.replace(min_pin_hilbert_origin(), h0=float(fl.H[0]))
print(f"n={mesh.n} dx_front={np.min(mesh.drho*mesh.xprime()):.2e}", flush=True)
t0 = time.time()
for n in range(1, 12001):
    fields = compute_fields(st)
    info = step(st, scheme, cfl=cfl_arg, dt_max=0.05, fields=fields)
    if n % 200 == 0:
        v = advection_speed(st, fields, info.c_l)
        ratios = st.ops.dx / np.maximum(np.abs(v), 1e-300)
        j = int(np.argmin(ratios))
        res = _pin_resolved(st, fields, 1.0)
        om = st.omega()
        print(f"n={n} tau={st.tau:.3f} dt={info.dt:.2e} gamma={-info.c_l/info.c_omega:.5f} "
              f"c_w={info.c_omega:.5f} maxO={np.abs(om).max():.3e} resolved={res} "
              f"bind@X={st.x[j]:.5g}(v={v[j]:.2e}) [{time.time()-t0:.0f}s]", flush=True)
