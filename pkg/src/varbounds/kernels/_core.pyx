# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled moment kernels for small dense complex matrices.

Same contracts as ``_fallback``; hand-rolled loops beat numpy dispatch
overhead for the dims (<= 64) this package targets.
"""

import numpy as np


def state_moments(hs, rho):
    """exps[j] = Tr(rho H_j); cross[j, k] = Tr(rho H_j H_k)."""
    hs = np.ascontiguousarray(hs, dtype=np.complex128)
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef const double complex[:, :, ::1] h = hs
    cdef const double complex[:, ::1] r = rho
    cdef Py_ssize_t k = h.shape[0], d = h.shape[1]
    cdef Py_ssize_t i, j, a, b, c

    exps_np = np.empty(k, dtype=np.complex128)
    cross_np = np.empty((k, k), dtype=np.complex128)
    m_np = np.empty((k, d, d), dtype=np.complex128)
    cdef double complex[::1] exps = exps_np
    cdef double complex[:, ::1] cross = cross_np
    cdef double complex[:, :, ::1] m = m_np
    cdef double complex acc

    for j in range(k):
        for a in range(d):
            for b in range(d):
                acc = 0
                for c in range(d):
                    acc += r[a, c] * h[j, c, b]
                m[j, a, b] = acc
        acc = 0
        for a in range(d):
            acc += m[j, a, a]
        exps[j] = acc

    for i in range(k):
        for j in range(k):
            acc = 0
            for a in range(d):
                for b in range(d):
                    acc += m[i, a, b] * h[j, b, a]
            cross[i, j] = acc

    return exps_np, cross_np


def pure_state_moments(hs, psi):
    """Moment kernel for a unit vector state: cross[j, k] = (H_j psi)^dag (H_k psi)."""
    hs = np.ascontiguousarray(hs, dtype=np.complex128)
    psi = np.ascontiguousarray(psi, dtype=np.complex128)
    cdef const double complex[:, :, ::1] h = hs
    cdef const double complex[::1] p = psi
    cdef Py_ssize_t k = h.shape[0], d = h.shape[1]
    cdef Py_ssize_t i, j, a, b

    exps_np = np.empty(k, dtype=np.complex128)
    cross_np = np.empty((k, k), dtype=np.complex128)
    v_np = np.empty((k, d), dtype=np.complex128)
    cdef double complex[::1] exps = exps_np
    cdef double complex[:, ::1] cross = cross_np
    cdef double complex[:, ::1] v = v_np
    cdef double complex acc

    for j in range(k):
        for a in range(d):
            acc = 0
            for b in range(d):
                acc += h[j, a, b] * p[b]
            v[j, a] = acc
        acc = 0
        for a in range(d):
            acc += p[a].conjugate() * v[j, a]
        exps[j] = acc

    for i in range(k):
        for j in range(k):
            acc = 0
            for a in range(d):
                acc += v[i, a].conjugate() * v[j, a]
            cross[i, j] = acc

    return exps_np, cross_np
