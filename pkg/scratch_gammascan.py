"""gamma error vs front resolution scan for half-line runs."""
import sys, time, dataclasses
import numpy as np
from gclmlab.mesh import MeshSpec, generate_mesh
from gclmlab.rescaling import (initial_state, min_pin_hilbert_origin, compute_fields, step)
from gclmlab.initialdata import f0_preset
from gclmlab.profiles import eval_profile, singular_half_line

for (a, n_bulk, drho) in [(-1.0, 340, 0.02), (-0.5, 340, 0.02), (-1.0, 420, 0.02)]:
    spec = MeshSpec(X_m=1.0, X1=0.9, X2=1.1, M=1e10, N_bulk=n_bulk, drho=drho)
    mesh = generate_mesh(spec)
    st = initial_state(a=a, k=3, mesh=mesh, symmetry="none",
                       f0=f0_preset("half_infinite_order", 3))
    fl = compute_fields(st)
    h0 = float(fl.H[0])
    scheme = dataclasses.replace(min_pin_hilbert_origin(), h0=h0)
    dxf = float(np.min(mesh.drho * mesh.xprime()))
    t0 = time.time(); g_prev = None; info = None
    for n in range(1, 100001):
        info = step(st, scheme, cfl=2.5, dt_max=0.05)
        if n % 500 == 0:
            g = -info.c_l / info.c_omega
            if st.tau > 12 and g_prev is not None and abs(g - g_prev) < 5e-6:
                break
            g_prev = g
            if time.time() - t0 > 2400:
                break
    g = -info.c_l / info.c_omega
    sp = st.omega_spline()
    xs = np.linspace(1.2, 10.0, 300)
    num = np.asarray(sp(xs)) / abs(info.c_omega)
    ref = eval_profile(singular_half_line(a), xs)[0]
    rel = float(np.abs((num - ref) / ref).max())
    print(f"a={a} n_bulk={n_bulk} drho={drho} dx_front={dxf:.2e}: tau={st.tau:.1f} "
          f"gamma={g:.6f} err={abs(g-(1-a)):.2e} profile_rel={rel:.3f} "
          f"steps={n} [{time.time()-t0:.0f}s]", flush=True)
