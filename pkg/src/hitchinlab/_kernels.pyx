# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot-path kernels for the gradient flow.

Contract identical to `_kernels_ref`: fused residual/energy/gradient
evaluation on (N, N, n, n) complex128 arrays with periodic indexing.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"

ctypedef double complex cplx


cdef inline double _abs2(cplx z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef void _fill_residuals(const cplx[:, :, :, ::1] a01,
                          const cplx[:, :, :, ::1] phi,
                          double h,
                          cplx[:, :, :, ::1] r1,
                          cplx[:, :, :, ::1] r2,
                          double* s1,
                          double* s2) nogil:
    cdef Py_ssize_t N = a01.shape[0]
    cdef Py_ssize_t n = a01.shape[2]
    cdef Py_ssize_t j, k, jp, kp, a, b, c
    cdef double inv2h = 1.0 / (2.0 * h)
    cdef cplx I = 1j
    cdef cplx v1, v2, acc
    cdef double acc1 = 0.0, acc2 = 0.0
    for j in range(N):
        jp = j + 1 if j + 1 < N else 0
        for k in range(N):
            kp = k + 1 if k + 1 < N else 0
            for a in range(n):
                for b in range(n):
                    # del(a01) + dbar(a01^dagger), forward stencils
                    v1 = ((a01[jp, k, a, b] - a01[j, k, a, b])
                          - I * (a01[j, kp, a, b] - a01[j, k, a, b])) * inv2h
                    v1 = v1 + ((a01[jp, k, b, a].conjugate() - a01[j, k, b, a].conjugate())
                               + I * (a01[j, kp, b, a].conjugate() - a01[j, k, b, a].conjugate())) * inv2h
                    # - [a01^dagger, a01] + [phi, phi^dagger]
                    acc = 0
                    for c in range(n):
                        acc = acc + a01[j, k, a, c] * a01[j, k, b, c].conjugate()
                        acc = acc - a01[j, k, c, a].conjugate() * a01[j, k, c, b]
                        acc = acc + phi[j, k, a, c] * phi[j, k, b, c].conjugate()
                        acc = acc - phi[j, k, c, a].conjugate() * phi[j, k, c, b]
                    v1 = v1 + acc
                    r1[j, k, a, b] = v1
                    acc1 += _abs2(v1)
                    # r2 = -(dbar(phi) + [a01, phi])
                    v2 = ((phi[jp, k, a, b] - phi[j, k, a, b])
                          + I * (phi[j, kp, a, b] - phi[j, k, a, b])) * inv2h
                    acc = 0
                    for c in range(n):
                        acc = acc + a01[j, k, a, c] * phi[j, k, c, b]
                        acc = acc - phi[j, k, a, c] * a01[j, k, c, b]
                    v2 = -(v2 + acc)
                    r2[j, k, a, b] = v2
                    acc2 += _abs2(v2)
    s1[0] = acc1
    s2[0] = acc2


def eval_state(const cplx[:, :, :, ::1] a01, const cplx[:, :, :, ::1] phi, double h):
    """Energy and residual norms at (a01, phi)."""
    cdef Py_ssize_t N = a01.shape[0]
    cdef Py_ssize_t n = a01.shape[2]
    r1_arr = np.empty((N, N, n, n), dtype=np.complex128)
    r2_arr = np.empty((N, N, n, n), dtype=np.complex128)
    cdef cplx[:, :, :, ::1] r1 = r1_arr
    cdef cplx[:, :, :, ::1] r2 = r2_arr
    cdef double s1 = 0.0, s2 = 0.0
    cdef double w = 4.0 * h * h
    with nogil:
        _fill_residuals(a01, phi, h, r1, r2, &s1, &s2)
    return w * (s1 + s2), (w * s1) ** 0.5, (w * s2) ** 0.5


def eval_gradient(const cplx[:, :, :, ::1] a01, const cplx[:, :, :, ::1] phi, double h):
    """Energy, residual norms, metric gradient (gx, gp) and its squared norm."""
    cdef Py_ssize_t N = a01.shape[0]
    cdef Py_ssize_t n = a01.shape[2]
    r1_arr = np.empty((N, N, n, n), dtype=np.complex128)
    r2_arr = np.empty((N, N, n, n), dtype=np.complex128)
    gx_arr = np.empty((N, N, n, n), dtype=np.complex128)
    gp_arr = np.empty((N, N, n, n), dtype=np.complex128)
    cdef cplx[:, :, :, ::1] r1 = r1_arr
    cdef cplx[:, :, :, ::1] r2 = r2_arr
    cdef cplx[:, :, :, ::1] gx = gx_arr
    cdef cplx[:, :, :, ::1] gp = gp_arr
    cdef double s1 = 0.0, s2 = 0.0, gsum = 0.0
    cdef double w = 4.0 * h * h
    cdef double inv2h = 1.0 / (2.0 * h)
    cdef cplx I = 1j
    cdef cplx vx, vp, acc
    cdef Py_ssize_t j, k, jm, km, a, b, c
    with nogil:
        _fill_residuals(a01, phi, h, r1, r2, &s1, &s2)
        for j in range(N):
            jm = j - 1 if j > 0 else N - 1
            for k in range(N):
                km = k - 1 if k > 0 else N - 1
                for a in range(n):
                    for b in range(n):
                        # gx = -4 (dbar_adj(r1) + [a01, r1]) - 2 [r2, phi^dagger]
                        vx = ((r1[j, k, a, b] - r1[jm, k, a, b])
                              + I * (r1[j, k, a, b] - r1[j, km, a, b])) * inv2h
                        acc = 0
                        for c in range(n):
                            acc = acc + a01[j, k, a, c] * r1[j, k, c, b]
                            acc = acc - r1[j, k, a, c] * a01[j, k, c, b]
                        vx = -4.0 * (vx + acc)
                        acc = 0
                        for c in range(n):
                            acc = acc + r2[j, k, a, c] * phi[j, k, b, c].conjugate()
                            acc = acc - phi[j, k, c, a].conjugate() * r2[j, k, c, b]
                        vx = vx - 2.0 * acc
                        gx[j, k, a, b] = vx
                        gsum += _abs2(vx)
                        # gp = 4 [r1, phi] + 2 (del_adj(r2) + [a10, r2]), a10 = -a01^dagger
                        vp = ((r2[j, k, a, b] - r2[jm, k, a, b])
                              - I * (r2[j, k, a, b] - r2[j, km, a, b])) * inv2h
                        acc = 0
                        for c in range(n):
                            acc = acc - a01[j, k, c, a].conjugate() * r2[j, k, c, b]
                            acc = acc + r2[j, k, a, c] * a01[j, k, b, c].conjugate()
                        vp = 2.0 * (vp + acc)
                        acc = 0
                        for c in range(n):
                            acc = acc + r1[j, k, a, c] * phi[j, k, c, b]
                            acc = acc - phi[j, k, a, c] * r1[j, k, c, b]
                        vp = vp + 4.0 * acc
                        gp[j, k, a, b] = vp
                        gsum += _abs2(vp)
    return (
        w * (s1 + s2),
        (w * s1) ** 0.5,
        (w * s2) ** 0.5,
        gx_arr,
        gp_arr,
        w * gsum,
    )
