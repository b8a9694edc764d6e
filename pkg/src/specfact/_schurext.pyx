# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled generator-driven triangularization kernel.

Same contract as the pure fallback in ``_schur.py``: given an (n x m)
shift-displacement generator of a Hermitian positive definite matrix,
return the lower Cholesky factor in O(m n^2) without forming the matrix.
"""

import numpy as np

from libc.math cimport sqrt


class KernelBreakdown(Exception):
    pass


def schur_cholesky(gen):
    g = np.array(gen, dtype=np.complex128, order="C")
    if g.ndim != 2:
        raise ValueError("generator must be a 2-D array")
    cdef Py_ssize_t n = g.shape[0]
    cdef Py_ssize_t m = g.shape[1]
    out = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] gv = g
    cdef double complex[:, ::1] lv = out
    cdef Py_ssize_t i, j, k
    cdef double nrm2, head, tail2, wnorm, tau, amax, floor, pabs
    cdef double complex a0, phase, mu, proj, pivot
    cdef double complex[::1] w = np.zeros(m, dtype=np.complex128)

    amax = 0.0
    for i in range(n):
        for j in range(m):
            head = gv[i, j].real * gv[i, j].real + gv[i, j].imag * gv[i, j].imag
            if head > amax:
                amax = head
    floor = 1e-28 * amax
    if floor <= 0.0:
        floor = 1e-300

    for k in range(n):
        head = gv[k, 0].real * gv[k, 0].real + gv[k, 0].imag * gv[k, 0].imag
        # tail summed directly: head + tail - head cancels to zero once the
        # tail drops below sqrt(eps) * pivot, and skipping the reflection
        # then silently drops that tail from the factorization
        tail2 = 0.0
        for j in range(1, m):
            tail2 += gv[k, j].real * gv[k, j].real + gv[k, j].imag * gv[k, j].imag
        nrm2 = head + tail2
        if not nrm2 > floor:
            raise KernelBreakdown("generator pivot collapsed")
        if m > 1 and tail2 > 0.0:
            a0 = gv[k, 0]
            if head > 0.0:
                phase = a0 / sqrt(head)
            else:
                phase = 1.0
            wnorm = 0.0
            for j in range(m):
                w[j] = gv[k, j].conjugate()
            w[0] = w[0] + phase.conjugate() * sqrt(nrm2)
            for j in range(m):
                wnorm += w[j].real * w[j].real + w[j].imag * w[j].imag
            tau = 2.0 / wnorm
            for i in range(k, n):
                proj = 0.0
                for j in range(m):
                    proj = proj + gv[i, j] * w[j]
                proj = proj * tau
                for j in range(m):
                    gv[i, j] = gv[i, j] - proj * w[j].conjugate()
            for j in range(1, m):
                gv[k, j] = 0.0
        pivot = gv[k, 0]
        pabs = sqrt(pivot.real * pivot.real + pivot.imag * pivot.imag)
        mu = pivot.conjugate() / pabs
        for i in range(k, n):
            gv[i, 0] = gv[i, 0] * mu
            lv[i, k] = gv[i, 0]
        for i in range(n - 1, k, -1):
            gv[i, 0] = lv[i - 1, k]
    return out
