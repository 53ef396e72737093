"""Numerical laboratory for self-similar blowup in the gCLM model.

The gCLM (generalized Constantin-Lax-Majda / Okamoto-Sakajo-Wunsch) model is

    w_t + a u w_x = u_x w,    u_x = H(w),

on the real line, with H the Hilbert transform and a the advection weight.
This package provides spline-based Hilbert transforms, a dynamic-rescaling
solver for self-similar profiles, traveling-wave fixed-point iteration, and
blowup-exponent fitting, together with a CLI for reproducible runs.
"""

__version__ = "0.1.0"
