"""Calibration: a=0.5, k=3, degenerate-slope scheme. Target gamma = -1.4771."""
import sys, time
import numpy as np
from gclmlab.mesh import MeshSpec, generate_mesh
from gclmlab.rescaling import (initial_state, degenerate_slope, run_to_convergence)
from gclmlab.initialdata import f0_preset

nsteps = int(sys.argv[1]) if len(sys.argv) > 1 else 10**9
spec = MeshSpec(X_m=1.0, X1=0.9, X2=1.1, M=1e10, N_bulk=200, drho=0.015)
mesh = generate_mesh(spec)
print("mesh n:", mesh.n, flush=True)
st = initial_state(a=0.5, k=3, mesh=mesh, symmetry="odd",
                   f0=f0_preset("regular_degenerate", 3))
t0 = time.time()

def prog(n, state, res):
    print(f"n={n} tau={state.tau:.3f} c_l={state.c_l:.6f} c_w={state.c_omega:.6f} "
          f"gamma={-state.c_l/state.c_omega:.6f} res={res:.3e} "
          f"[{time.time()-t0:.0f}s]", flush=True)

res = run_to_convergence(st, degenerate_slope(), cfl=2.5, tol=1e-8, tau_max=150,
                         max_steps=nsteps, dt_max=0.05, progress_cb=prog)
print("DONE", res.reason, "steps:", res.n_steps, "tau:", st.tau)
print("gamma:", -st.c_l/st.c_omega, " c_l:", st.c_l, " c_w:", st.c_omega)
print("target: gamma=-1.4771 c_l=-0.1288 c_w=-0.0872")
res.history.write_csv("/tmp/cal1_history.csv")
