# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Mirrors ``_pykernels`` one function at a time."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cos, sqrt, log, fabs, floor, pow, tgamma, lgamma, cbrt, M_PI

cnp.import_array()

NAME = "cython"

cdef double _RESCALE = 1e150
cdef double _SERIES_SWITCH = 4.0


def hermite_table(Py_ssize_t kmax, u):
    """Return ``h_k(u)`` for ``k = 0..kmax`` stacked along a new first axis."""
    u_arr = np.ascontiguousarray(u, dtype=np.float64)
    shape = u_arr.shape
    cdef double[::1] uv = u_arr.reshape(-1)
    cdef Py_ssize_t n = uv.shape[0]
    out = np.empty((kmax + 1, n))
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t i, k
    cdef double x, prev, cur, nxt, logscale, seed = pow(M_PI, -0.25)
    with nogil:
        for i in range(n):
            x = uv[i]
            logscale = -0.5 * x * x
            prev = 0.0
            cur = seed
            ov[0, i] = cur * exp(logscale)
            for k in range(kmax):
                nxt = x * sqrt(2.0 / (k + 1)) * cur - sqrt(<double>k / (k + 1)) * prev
                prev = cur
                cur = nxt
                if fabs(cur) > _RESCALE:
                    cur /= _RESCALE
                    prev /= _RESCALE
                    logscale += log(_RESCALE)
                ov[k + 1, i] = cur * exp(logscale)
    return out.reshape((kmax + 1,) + shape)


cdef double _series_ratio(double alpha, double z) noexcept nogil:
    cdef double q = -0.25 * z * z
    cdef double term = 1.0 / tgamma(alpha + 1.0)
    cdef double total = term, biggest = fabs(term)
    cdef int m
    for m in range(1, 400):
        term = term * q / (m * (m + alpha))
        total += term
        if fabs(term) > biggest:
            biggest = fabs(term)
        if m > 0.5 * z and fabs(term) <= 1e-18 * biggest:
            break
    return total * pow(2.0, -alpha)


cdef double _miller(double alpha, double z) noexcept nogil:
    cdef int n_int = <int>floor(alpha)
    cdef double nu = alpha - n_int
    cdef int start = <int>(z + 25.0 + 10.0 * cbrt(z))
    if start < n_int + 20:
        start = n_int + 20
    start += start % 2
    cdef double gk = exp(lgamma(nu + start // 2) - lgamma(nu + 1.0) - lgamma(start // 2 + 1.0))
    cdef double fnext = 0.0, f = 1e-30, fprev, total = 0.0, stored = 0.0, first = 0.0
    cdef int j, k
    for j in range(start, 0, -1):
        if j % 2 == 0:
            k = j // 2
            total += (nu + j) * gk * f
            if k > 1:
                gk = gk * k / (nu + k - 1.0)
        if j == n_int:
            stored = f
        if j == 1:
            first = f
        fprev = (2.0 * (nu + j) / z) * f - fnext
        fnext = f
        f = fprev
        if fabs(f) > 1e250:
            f *= 1e-250
            fnext *= 1e-250
            total *= 1e-250
            stored *= 1e-250
            first *= 1e-250
    total += f
    cdef double norm = pow(0.5 * z, nu) / tgamma(nu + 1.0) / total
    if n_int == 0:
        stored = f
    if n_int >= 0:
        return stored * norm
    return ((2.0 * nu / z) * f - first) * norm


cdef inline double _ratio(double alpha, double z) noexcept nogil:
    if z < _SERIES_SWITCH:
        return _series_ratio(alpha, z)
    return _miller(alpha, z) / pow(z, alpha)


def bessel_j_ratio(double alpha, z):
    """``J_alpha(z) / z**alpha`` for an array of ``z >= 0``."""
    z_arr = np.ascontiguousarray(z, dtype=np.float64)
    cdef double[::1] zv = z_arr.reshape(-1)
    out = np.empty(zv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(zv.shape[0]):
            ov[i] = _ratio(alpha, zv[i])
    return out.reshape(z_arr.shape)


def bessel_j(double alpha, z):
    """``J_alpha(z)`` for an array of ``z >= 0``."""
    z_arr = np.ascontiguousarray(z, dtype=np.float64)
    cdef double[::1] zv = z_arr.reshape(-1)
    out = np.empty(zv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef double x
    with nogil:
        for i in range(zv.shape[0]):
            x = zv[i]
            if x < _SERIES_SWITCH:
                if x == 0.0:
                    if alpha == 0.0:
                        ov[i] = 1.0
                    elif alpha > 0.0:
                        ov[i] = 0.0
                    else:
                        ov[i] = _series_ratio(alpha, x) * pow(x, alpha)
                else:
                    ov[i] = _series_ratio(alpha, x) * pow(x, alpha)
            else:
                ov[i] = _miller(alpha, x)
    return out.reshape(z_arr.shape)


def fiber_cos_sum(logw, T, C, xi, a, b, delta):
    """``out[q] = sum_m exp(logw - a[q] T - b[q] C) cos(delta[q] xi)``."""
    cdef double[::1] lw = np.ascontiguousarray(logw, dtype=np.float64)
    cdef double[::1] tv = np.ascontiguousarray(T, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(C, dtype=np.float64)
    cdef double[::1] xv = np.ascontiguousarray(xi, dtype=np.float64)
    cdef double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] dv = np.ascontiguousarray(delta, dtype=np.float64)
    cdef Py_ssize_t nq = av.shape[0], nm = xv.shape[0], q, m
    out = np.empty(nq)
    cdef double[::1] ov = out
    cdef double acc, aq, bq, dq
    with nogil:
        for q in range(nq):
            aq = av[q]
            bq = bv[q]
            dq = dv[q]
            acc = 0.0
            for m in range(nm):
                acc += exp(lw[m] - aq * tv[m] - bq * cv[m]) * cos(dq * xv[m])
            ov[q] = acc
    return out


def fiber_bessel_sum(logw, T, C, tau, a, b, delta, double alpha):
    """Like :func:`fiber_cos_sum` with ``J_alpha(s)/s**alpha`` at ``s = delta*tau``."""
    cdef double[::1] lw = np.ascontiguousarray(logw, dtype=np.float64)
    cdef double[::1] tv = np.ascontiguousarray(T, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(C, dtype=np.float64)
    cdef double[::1] rv = np.ascontiguousarray(tau, dtype=np.float64)
    cdef double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] dv = np.ascontiguousarray(delta, dtype=np.float64)
    cdef Py_ssize_t nq = av.shape[0], nm = rv.shape[0], q, m
    out = np.empty(nq)
    cdef double[::1] ov = out
    cdef double acc, aq, bq, dq, w
    with nogil:
        for q in range(nq):
            aq = av[q]
            bq = bv[q]
            dq = dv[q]
            acc = 0.0
            for m in range(nm):
                w = exp(lw[m] - aq * tv[m] - bq * cv[m])
                if w != 0.0:
                    acc += w * _ratio(alpha, dq * rv[m])
            ov[q] = acc
    return out
