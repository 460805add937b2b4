# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled residual and Jacobian of the discrete graph operator.

Same arithmetic as ``_assembly_py`` node by node, so residuals agree to
the last bit and the assembled Jacobians agree after summing duplicates.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


cdef inline void _tangential(const double[::1] u, const cnp.int64_t[:, ::1] nb,
                             const double[:, ::1] dist, int w,
                             double[:, ::1] val, double[:, ::1] cp, double[:, ::1] cm) noexcept nogil:
    # w = 0: x-direction pair (E, W); w = 1: y-direction pair (N, S)
    cdef Py_ssize_t i, N = u.shape[0]
    cdef int jp = 2 * w, jm = 2 * w + 1
    cdef double dp, dm, up, um
    cdef cnp.int64_t kp, km
    for i in range(N):
        dp = dist[i, jp]
        dm = dist[i, jm]
        cp[w, i] = dm / (dp * (dp + dm))
        cm[w, i] = dp / (dm * (dp + dm))
        kp = nb[i, jp]
        km = nb[i, jm]
        up = u[kp] if kp >= 0 else 0.0
        um = u[km] if km >= 0 else 0.0
        val[w, i] = cp[w, i] * up + (cm[w, i] - cp[w, i]) * u[i] - cm[w, i] * um


def residual_jacobian(const double[::1] u, const cnp.int64_t[:, ::1] nb,
                      const double[:, ::1] dist, const double[:, ::1] Fface,
                      const double[::1] rhs, bint want_jac=True):
    """Residual vector and (optionally) COO triplets of its Jacobian."""
    cdef Py_ssize_t N = u.shape[0]
    cdef double[:, ::1] tang = np.empty((2, N)), cp = np.empty((2, N)), cm = np.empty((2, N))
    _tangential(u, nb, dist, 0, tang, cp, cm)
    _tangential(u, nb, dist, 1, tang, cp, cm)

    res_arr = np.empty(N)
    cdef double[::1] res = res_arr
    cdef Py_ssize_t cap = 32 * N if want_jac else 0
    rows_arr = np.empty(cap, dtype=np.int64)
    cols_arr = np.empty(cap, dtype=np.int64)
    vals_arr = np.empty(cap)
    cdef cnp.int64_t[::1] rows = rows_arr
    cdef cnp.int64_t[::1] cols = cols_arr
    cdef double[::1] vals = vals_arr

    cdef Py_ssize_t i, n = 0, m
    cdef int j, jp, jm, t
    cdef cnp.int64_t k, o, kp, km
    cdef double V, g, gt, F2, a, a3, dg, dgt, inv, w, uk, r
    cdef cnp.int64_t owners[2]
    cdef double weights[2]

    for i in range(N):
        r = -rhs[i]
        for j in range(4):
            k = nb[i, j]
            uk = u[k] if k >= 0 else 0.0
            g = (uk - u[i]) / dist[i, j]
            # tangential derivative: y-derivative on x-links and vice versa
            if j < 2:
                V = 0.5 * (dist[i, 0] + dist[i, 1])
                t = 1
            else:
                V = 0.5 * (dist[i, 2] + dist[i, 3])
                t = 0
            jp = 2 * t
            jm = 2 * t + 1
            if k >= 0:
                gt = 0.5 * (tang[t, i] + tang[t, k])
            else:
                gt = tang[t, i]
            F2 = Fface[i, j] * Fface[i, j]
            a = 1.0 / sqrt(1.0 + (g * g + gt * gt) / F2)
            r += a * g / V
            if not want_jac:
                continue
            a3 = a * a * a
            dg = (a - a3 * g * g / F2) / V
            dgt = (-a3 * g * gt / F2) / V
            inv = 1.0 / dist[i, j]
            rows[n] = i; cols[n] = i; vals[n] = -dg * inv; n += 1
            if k >= 0:
                rows[n] = i; cols[n] = k; vals[n] = dg * inv; n += 1
            owners[0] = i
            weights[0] = 0.5 * dgt if k >= 0 else dgt
            owners[1] = k
            weights[1] = 0.5 * dgt
            for m in range(2 if k >= 0 else 1):
                o = owners[m]
                w = weights[m]
                rows[n] = i; cols[n] = o; vals[n] = w * (cm[t, o] - cp[t, o]); n += 1
                kp = nb[o, jp]
                km = nb[o, jm]
                if kp >= 0:
                    rows[n] = i; cols[n] = kp; vals[n] = w * cp[t, o]; n += 1
                if km >= 0:
                    rows[n] = i; cols[n] = km; vals[n] = -w * cm[t, o]; n += 1
        res[i] = r
    if not want_jac:
        return res_arr, None
    return res_arr, (rows_arr[:n], cols_arr[:n], vals_arr[:n])
