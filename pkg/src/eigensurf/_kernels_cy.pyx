# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernels.

Same stripe contract as the NumPy backend: each call fills output grid
rows [r0, r1) and touches nothing else, computing every window
independently so results are identical for any striping.
"""

import numpy as np

cimport cython
from libc.stdlib cimport free, malloc

from scipy.linalg.cython_lapack cimport dgesdd


def trace_scan(double[:, ::1] values, int k, int r0, int r1, double[:, ::1] out):
    """|trace| of every k x k window with top-left row in [r0, r1)."""
    cdef Py_ssize_t cols = values.shape[1] - k + 1
    cdef Py_ssize_t r, s, i
    cdef double acc
    with nogil:
        for r in range(r0, r1):
            for s in range(cols):
                acc = 0.0
                for i in range(k):
                    acc += values[r + i, s + i]
                out[r, s] = acc if acc >= 0.0 else -acc


def nuclear_scan(double[:, ::1] values, int k, int r0, int r1, double[:, ::1] out):
    """Nuclear norm of every window in the stripe (LAPACK dgesdd per window)."""
    cdef Py_ssize_t cols = values.shape[1] - k + 1
    cdef Py_ssize_t r, s, i, j
    cdef int n = k, lda = k, ldu = 1, ldvt = 1, info = 0, lwork = -1
    cdef char jobz = b'N'
    cdef double wkopt = 0.0
    cdef double dummy = 0.0
    cdef double acc
    # workspace query
    dgesdd(&jobz, &n, &n, &dummy, &lda, &dummy, &dummy, &ldu, &dummy, &ldvt,
           &wkopt, &lwork, <int *> &dummy, &info)
    lwork = <int> wkopt
    cdef double *a = <double *> malloc(k * k * sizeof(double))
    cdef double *sv = <double *> malloc(k * sizeof(double))
    cdef double *work = <double *> malloc(lwork * sizeof(double))
    cdef int *iwork = <int *> malloc(8 * k * sizeof(int))
    if a == NULL or sv == NULL or work == NULL or iwork == NULL:
        free(a); free(sv); free(work); free(iwork)
        raise MemoryError("nuclear_scan buffers")
    try:
        with nogil:
            for r in range(r0, r1):
                for s in range(cols):
                    # singular values are transpose invariant, so the copy
                    # need not re-order into column major
                    for i in range(k):
                        for j in range(k):
                            a[i * k + j] = values[r + i, s + j]
                    info = 0
                    dgesdd(&jobz, &n, &n, a, &lda, sv, &dummy, &ldu, &dummy,
                           &ldvt, work, &lwork, iwork, &info)
                    acc = 0.0
                    if info == 0:
                        for i in range(k):
                            acc += sv[i]
                    out[r, s] = acc
                    if info != 0:
                        break
        if info != 0:
            raise ArithmeticError(f"dgesdd failed with info={info}")
    finally:
        free(a); free(sv); free(work); free(iwork)


def jacobian_scan(double[:, ::1] control, double[:, ::1] deformed, int k,
                  int r0, int r1, double[:, ::1] out, double degen_rtol):
    """Trace of the fitted window Jacobian for every window pair.

    Same math as the NumPy backend: affine fit of deformed heights on
    (row, col, control height) via residual regression after removing the
    planar trend, with values shifted by the window's first element.
    """
    cdef Py_ssize_t cols = control.shape[1] - k + 1
    cdef Py_ssize_t r, s, i, j
    cdef double n = <double> (k * k)
    cdef double half = (k - 1) / 2.0
    cdef double splanar = 0.0
    cdef double ti, tj, z, y, z00, y00
    cdef double sz, sy, szz, szy, srz, scz, sry, scy, czz, czy
    for i in range(k):
        splanar += (i - half) * (i - half)
    splanar *= k
    with nogil:
        for r in range(r0, r1):
            for s in range(cols):
                z00 = control[r, s]
                y00 = deformed[r, s]
                sz = 0.0; sy = 0.0; szz = 0.0; szy = 0.0
                srz = 0.0; scz = 0.0; sry = 0.0; scy = 0.0
                for i in range(k):
                    ti = i - half
                    for j in range(k):
                        tj = j - half
                        z = control[r + i, s + j] - z00
                        y = deformed[r + i, s + j] - y00
                        sz += z
                        sy += y
                        szz += z * z
                        szy += z * y
                        srz += ti * z
                        scz += tj * z
                        sry += ti * y
                        scy += tj * y
                czz = szz - sz * sz / n - (srz * srz + scz * scz) / splanar
                czy = szy - sz * sy / n - (srz * sry + scz * scy) / splanar
                if czz <= degen_rtol * szz:
                    out[r, s] = 2.0
                else:
                    out[r, s] = 2.0 + czy / czz
