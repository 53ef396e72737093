"""Numba-compiled assembly of the spline Hilbert kernel matrices.

Same semantics as the numpy reference in spline._kernel_block_reference
(branch selection, node limits, boundary conventions); kept separate so the
reference stays importable without numba and the two can be cross-checked.
"""

import os

os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

import numpy as np
from numba import njit, prange

from .spline import _R1_COEF, _R2_COEF

_PI = np.pi


@njit(inline="always")
def _r1(s):
    acc = _R1_COEF[-1]
    for k in range(_R1_COEF.shape[0] - 2, -1, -1):
        acc = acc * s + _R1_COEF[k]
    return acc


@njit(inline="always")
def _r2(s):
    acc = _R2_COEF[-1]
    for k in range(_R2_COEF.shape[0] - 2, -1, -1):
        acc = acc * s + _R2_COEF[k]
    return acc


@njit(inline="always")
def _ab(z):
    if abs(z) >= 2.0:
        s = 1.0 / z
        r1 = _r1(s)
        s2 = s * s
        s3 = s2 * s
        a = -(3.0 * s2 + 2.0 * s3) / (6.0 * _PI) + (s2 + s3 - 2.0 * s) * r1 / _PI
        b = (s - 2.0 * s2) / (6.0 * _PI) + (s2 - s) * r1 / _PI
    else:
        l1 = 0.0 if z == 1.0 else np.log(abs(1.0 - z))
        lz = np.log(abs(z))
        dl = l1 - lz
        omz2 = (1.0 - z) * (1.0 - z)
        a = (-5.0 - 12.0 * z + 12.0 * z * z) / (6.0 * _PI) + omz2 * (1.0 + 2.0 * z) * dl / _PI
        b = (2.0 - 9.0 * z + 6.0 * z * z) / (6.0 * _PI) + z * omz2 * dl / _PI
    return a, b


@njit(inline="always")
def _cd(z, d, logd):
    if abs(z) >= 2.0:
        s = 1.0 / z
        r2 = _r2(s)
        s2 = s * s
        s3 = s2 * s
        ldz = logd + np.log(abs(z))
        c = d * (-3.0 + 2.0 * s2 - 4.0 * s3 + 12.0 * ldz) / (24.0 * _PI) \
            + d * (1.0 + s) * r2 / (2.0 * _PI)
        dv = d * d * (9.0 - 12.0 * s + 6.0 * s2 + 4.0 * s3 - 12.0 * ldz) / (144.0 * _PI) \
            - d * d * (3.0 + s) * r2 / (12.0 * _PI)
    else:
        l1 = 0.0 if z == 1.0 else np.log(abs(1.0 - z))
        lz = np.log(abs(z))
        p0 = -19.0 + z * (8.0 + z * (18.0 - 12.0 * z))
        p1 = 12.0 + z * (-24.0 + z * z * (24.0 - 12.0 * z))
        p2 = z * (24.0 + z * z * (-24.0 + 12.0 * z))
        c = d * (p0 + p1 * l1 + p2 * lz + 12.0 * logd) / (24.0 * _PI)
        q0 = 13.0 + z * (36.0 + z * (-78.0 + 36.0 * z))
        q1 = -12.0 + z * z * (72.0 + z * (-96.0 + 36.0 * z))
        q2 = z * z * (-72.0 + z * (96.0 - 36.0 * z))
        dv = d * d * (q0 + q1 * l1 + q2 * lz - 12.0 * logd) / (144.0 * _PI)
    return c, dv


@njit(cache=True, parallel=True)
def block_h(xe, x):
    ne = xe.shape[0]
    n = x.shape[0]
    KP = np.empty((ne, n))
    KQ = np.empty((ne, n))
    for e in prange(ne):
        xv = xe[e]
        for i in range(n):
            d1 = x[i] - x[i - 1] if i > 0 else 1.0
            d2 = x[i + 1] - x[i] if i < n - 1 else 1.0
            t = xv - x[i]
            if t == 0.0:
                if 0 < i < n - 1:
                    KP[e, i] = np.log(d1 / d2) / _PI
                    KQ[e, i] = -(d1 + d2) / (3.0 * _PI)
                elif i == 0:
                    KP[e, i] = 0.0
                    KQ[e, i] = -d2 / (3.0 * _PI)
                else:
                    KP[e, i] = 0.0
                    KQ[e, i] = -d1 / (3.0 * _PI)
            else:
                kp = 0.0
                kq = 0.0
                if i > 0:
                    a, b = _ab(-t / d1)
                    kp += a
                    kq -= d1 * b
                if i < n - 1:
                    a, b = _ab(t / d2)
                    kp -= a
                    kq -= d2 * b
                KP[e, i] = kp
                KQ[e, i] = kq
    return KP, KQ


@njit(cache=True, parallel=True)
def block_hv(xe, x):
    ne = xe.shape[0]
    n = x.shape[0]
    KP = np.empty((ne, n))
    KQ = np.empty((ne, n))
    KPV = np.empty((ne, n))
    KQV = np.empty((ne, n))
    for e in prange(ne):
        xv = xe[e]
        for i in range(n):
            d1 = x[i] - x[i - 1] if i > 0 else 1.0
            d2 = x[i + 1] - x[i] if i < n - 1 else 1.0
            logd1 = np.log(d1)
            logd2 = np.log(d2)
            t = xv - x[i]
            if t == 0.0:
                pv = 0.0
                qv = 0.0
                if i > 0:
                    pv += d1 * (-19.0 + 12.0 * logd1) / (24.0 * _PI)
                    qv += d1 * d1 * (13.0 - 12.0 * logd1) / (144.0 * _PI)
                if i < n - 1:
                    pv += d2 * (-19.0 + 12.0 * logd2) / (24.0 * _PI)
                    qv -= d2 * d2 * (13.0 - 12.0 * logd2) / (144.0 * _PI)
                KPV[e, i] = pv
                KQV[e, i] = qv
                if 0 < i < n - 1:
                    KP[e, i] = np.log(d1 / d2) / _PI
                    KQ[e, i] = -(d1 + d2) / (3.0 * _PI)
                elif i == 0:
                    KP[e, i] = 0.0
                    KQ[e, i] = -d2 / (3.0 * _PI)
                else:
                    KP[e, i] = 0.0
                    KQ[e, i] = -d1 / (3.0 * _PI)
            else:
                kp = 0.0
                kq = 0.0
                pv = 0.0
                qv = 0.0
                if i > 0:
                    zl = -t / d1
                    a, b = _ab(zl)
                    kp += a
                    kq -= d1 * b
                    c, dv = _cd(zl, d1, logd1)
                    pv += c
                    qv += dv
                if i < n - 1:
                    zr = t / d2
                    a, b = _ab(zr)
                    kp -= a
                    kq -= d2 * b
                    c, dv = _cd(zr, d2, logd2)
                    pv += c
                    qv -= dv
                KP[e, i] = kp
                KQ[e, i] = kq
                KPV[e, i] = pv
                KQV[e, i] = qv
    return KP, KQ, KPV, KQV
