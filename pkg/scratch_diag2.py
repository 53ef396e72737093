"""Locate the frozen residual of the half-line a=-1 run."""
import numpy as np, time, dataclasses
from gclmlab.mesh import MeshSpec, generate_mesh
from gclmlab.rescaling import (initial_state, min_pin_hilbert_origin, compute_fields,
                               step, rhs)
from gclmlab.initialdata import f0_preset

spec = MeshSpec(X_m=1.0, X1=0.9, X2=1.1, M=1e10, N_bulk=240, drho=0.02)
mesh = generate_mesh(spec)
st = initial_state(a=-1.0, k=3, mesh=mesh, symmetry="none",
                   f0=f0_preset("half_infinite_order", 3))
fl = compute_fields(st)
scheme = dataclasses.replace(min_pin_hilbert_origin(), h0=float(fl.H[0]))
t0 = time.time()
info = None
for n in range(2600):
    info = step(st, scheme, cfl=2.5, dt_max=0.05)
    if n % 200 == 0:
        w_tau = st.x**3 * info.f_tau
        mask = np.abs(st.x - 1.0) > 0.1
        j = np.nonzero(mask)[0][np.argmax(np.abs(w_tau[mask]))]
        print(f"n={n} tau={st.tau:.2f} res={np.abs(w_tau[mask]).max():.3e} "
              f"at X={st.x[j]:.4g} |W|there={np.abs(st.x[j]**3*st.f[j]):.3e} "
              f"gamma={-info.c_l/info.c_omega:.6f} [{time.time()-t0:.0f}s]", flush=True)
w_tau = st.x**3 * rhs(st, info.c_l, info.c_omega)
for lo, hi in [(0, 0.9), (1.1, 1.5), (1.5, 3), (3, 10), (10, 100), (100, 1e4),
               (1e4, 1e8), (1e8, 1e10)]:
    sel = (st.x >= lo) & (st.x < hi)
    if sel.any():
        print(f"X in [{lo:g},{hi:g}): max|W_tau| = {np.abs(w_tau[sel]).max():.3e}")
np.save("/tmp/diag2_state.npy", st.f)
np.save("/tmp/diag2_x.npy", st.x)
print("gamma final:", -info.c_l/info.c_omega)
