"""gamma accuracy vs front resolution for the half-line a=-1 run."""
import sys, time, dataclasses
import numpy as np
from gclmlab.mesh import MeshSpec, generate_mesh
from gclmlab.rescaling import (initial_state, min_pin_hilbert_origin, compute_fields, step)
from gclmlab.initialdata import f0_preset
from gclmlab.profiles import eval_profile, singular_half_line

n_bulk = int(sys.argv[1]); drho = float(sys.argv[2]); a = float(sys.argv[3]) if len(sys.argv) > 3 else -1.0
spec = MeshSpec(X_m=1.0, X1=0.9, X2=1.1, M=1e10, N_bulk=n_bulk, drho=drho)
mesh = generate_mesh(spec)
st = initial_state(a=a, k=3, mesh=mesh, symmetry="none",
                   f0=f0_preset("half_infinite_order", 3))
fl = compute_fields(st)
h0 = float(fl.H[0])
scheme = dataclasses.replace(min_pin_hilbert_origin(), h0=h0)
print(f"mesh n={mesh.n} dx_front={0.2/n_bulk:.2e} h0={h0:.6f} (2/pi={2/np.pi:.6f})", flush=True)
t0 = time.time()
gamma_prev = None
for n in range(1, 60001):
    info = step(st, scheme, cfl=2.5, dt_max=0.05)
    if n % 400 == 0:
        g = -info.c_l/info.c_omega
        print(f"n={n} tau={st.tau:.2f} gamma={g:.6f} c_w={info.c_omega:.6f} [{time.time()-t0:.0f}s]", flush=True)
        if st.tau > 12 and gamma_prev is not None and abs(g - gamma_prev) < 2e-6:
            break
        gamma_prev = g
g = -info.c_l/info.c_omega
print(f"FINAL gamma={g:.6f} err={abs(g-(1-a)):.2e} c_w={info.c_omega:.6f} vs -h0={-h0:.6f}")
sp = st.omega_spline()
xs = np.linspace(1.2, 10.0, 300)
num = np.asarray(sp(xs)) / h0
ref = eval_profile(singular_half_line(a), xs)[0]
print("profile rel err [1.2,10] (scaled by 1/h0):", float(np.abs((num-ref)/ref).max()))
