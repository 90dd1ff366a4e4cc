# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.  Mirrors ``_core_py`` function for function."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, log, lgamma, sqrt, INFINITY

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex clog(double complex)

cnp.import_array()

ctypedef fused scalar_t:
    double
    double complex

cdef double _RESCALE = 1e140
cdef double _LOG_RESCALE = 322.3619130191664  # log(1e140); squares of terms stay finite


def log_bessel_series(long alpha, wsq):
    """log of sum_k (wsq/4)^k / (k! (k+alpha)!) and the cancellation ratio.

    Returns ``(logval, loss)`` where ``loss = sum|t_k| / |sum t_k|``.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] w = np.ascontiguousarray(
        np.atleast_1d(wsq), dtype=np.complex128).ravel()
    cdef Py_ssize_t n = w.shape[0], i
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] loss = np.empty(n, dtype=np.float64)
    cdef double qr, qi, tr, ti, sr, si, tmp, c
    cdef double sabs, tabs, shift, qa, smag
    cdef double prefix = -lgamma(alpha + 1.0)
    cdef long k
    with nogil:
        for i in range(n):
            qr = w[i].real * 0.25
            qi = w[i].imag * 0.25
            qa = sqrt(qr * qr + qi * qi)
            tr = 1.0
            ti = 0.0
            sr = 1.0
            si = 0.0
            sabs = 1.0
            shift = 0.0
            k = 0
            while True:
                k += 1
                c = 1.0 / (<double>k * <double>(k + alpha))
                tmp = (tr * qr - ti * qi) * c
                ti = (tr * qi + ti * qr) * c
                tr = tmp
                tabs = sqrt(tr * tr + ti * ti)
                sr += tr
                si += ti
                sabs += tabs
                if sabs > _RESCALE:
                    tr /= _RESCALE
                    ti /= _RESCALE
                    sr /= _RESCALE
                    si /= _RESCALE
                    sabs /= _RESCALE
                    shift += _LOG_RESCALE
                if <double>k * <double>(k + alpha) > qa and tabs <= 1e-17 * sabs:
                    break
                if k > 10000000:
                    break
            smag = sqrt(sr * sr + si * si)
            if smag == 0.0:
                out[i] = -INFINITY
                loss[i] = INFINITY
            else:
                out[i] = clog(sr + 1j * si) + (shift + prefix)
                loss[i] = sabs / smag
    return out, loss


cdef inline double _mag2(scalar_t v) nogil:
    if scalar_t is double:
        return v * v
    else:
        return v.real * v.real + v.imag * v.imag


cdef scalar_t _lu_det(scalar_t[:, ::1] a, Py_ssize_t m) nogil:
    cdef Py_ssize_t i, j, k, p
    cdef scalar_t det = 1.0, inv, f, tmp
    cdef double best, cur
    for k in range(m):
        p = k
        best = _mag2(a[k, k])
        for i in range(k + 1, m):
            cur = _mag2(a[i, k])
            if cur > best:
                best = cur
                p = i
        if best == 0.0:
            return 0.0
        if p != k:
            for j in range(m):
                tmp = a[k, j]
                a[k, j] = a[p, j]
                a[p, j] = tmp
            det = -det
        det = det * a[k, k]
        if scalar_t is double:
            inv = 1.0 / a[k, k]
        else:
            inv = a[k, k].conjugate() * (1.0 / best)
        for i in range(k + 1, m):
            f = a[i, k] * inv
            if f != 0.0:
                for j in range(k + 1, m):
                    a[i, j] = a[i, j] - f * a[k, j]
    return det


cdef void _charpoly_batch(scalar_t[:, :, ::1] z, double mu, double nu,
                          double[::1] out) nogil:
    cdef Py_ssize_t b, i, j, nb = z.shape[0], m = z.shape[1]
    cdef scalar_t d1, d2
    cdef scalar_t[:, ::1] work
    with gil:
        work = np.empty((m, m), dtype=np.asarray(z).dtype)
    for b in range(nb):
        for i in range(m):
            for j in range(m):
                work[i, j] = z[b, i, j]
            work[i, i] = work[i, i] - mu
        d1 = _lu_det(work, m)
        for i in range(m):
            for j in range(m):
                work[i, j] = z[b, i, j]
            work[i, i] = work[i, i] - nu
        d2 = _lu_det(work, m)
        if scalar_t is double:
            out[b] = d1 * d2
        else:
            out[b] = (d1 * d2).real


def charpoly_products(z, double mu, double nu):
    """det(Z_b - mu) det(Z_b - nu) for a stack of square matrices ``z[b]``."""
    z = np.asarray(z)
    if z.ndim != 3 or z.shape[1] != z.shape[2]:
        raise ValueError("expected a (batch, m, m) array")
    out = np.empty(z.shape[0], dtype=np.float64)
    if z.shape[1] == 0:
        out[:] = 1.0
        return out
    if np.iscomplexobj(z):
        _charpoly_batch[cnp.complex128_t](np.ascontiguousarray(z, dtype=np.complex128), mu, nu, out)
    else:
        _charpoly_batch[double](np.ascontiguousarray(z, dtype=np.float64), mu, nu, out)
    return out
