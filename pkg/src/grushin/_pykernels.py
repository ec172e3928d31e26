"""Pure numpy implementations of the inner loops.

Used whenever the compiled ``_ckernels`` extension is unavailable, and as a
reference in the backend-equivalence tests. Every function here has the same
signature and semantics as its Cython twin.
"""
from __future__ import annotations

import math

import numpy as np

NAME = "python"

_RESCALE = 1e150
_LOG_RESCALE = math.log(_RESCALE)
_SERIES_SWITCH = 4.0


def hermite_table(kmax, u):
    """Return ``h_k(u)`` for ``k = 0..kmax`` stacked along a new first axis."""
    u = np.asarray(u, dtype=np.float64)
    out = np.empty((kmax + 1,) + u.shape)
    logscale = -0.5 * u * u
    prev = np.zeros_like(u)
    cur = np.full_like(u, math.pi ** -0.25)
    out[0] = cur * np.exp(logscale)
    for k in range(kmax):
        nxt = u * math.sqrt(2.0 / (k + 1)) * cur - math.sqrt(k / (k + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE
        if big.any():
            cur = np.where(big, cur / _RESCALE, cur)
            prev = np.where(big, prev / _RESCALE, prev)
            logscale = logscale + big * _LOG_RESCALE
        out[k + 1] = cur * np.exp(logscale)
    return out


def _series_ratio(alpha, z):
    # J_alpha(z) / z**alpha from the ascending series
    q = -0.25 * z * z
    term = np.full_like(z, 1.0 / math.gamma(alpha + 1.0))
    total = term.copy()
    biggest = np.abs(term)
    for m in range(1, 400):
        term = term * q / (m * (m + alpha))
        total = total + term
        biggest = np.maximum(biggest, np.abs(term))
        if m > 0.5 * float(z.max(initial=0.0)) and np.all(np.abs(term) <= 1e-18 * biggest):
            break
    return total * 2.0 ** (-alpha)


def _miller(alpha, z):
    # backward recurrence for J_{nu+j}, normalised by
    # (z/2)^nu / Gamma(nu+1) = sum_k (nu+2k) (nu+1)_{k-1}/k! J_{nu+2k}
    n_int = math.floor(alpha)
    nu = alpha - n_int
    zmax = float(z.max())
    start = int(zmax + 25.0 + 10.0 * zmax ** (1.0 / 3.0))
    start = max(start, n_int + 20)
    start += start % 2
    gk = math.exp(math.lgamma(nu + start // 2) - math.lgamma(nu + 1.0) - math.lgamma(start // 2 + 1.0))
    fnext = np.zeros_like(z)
    f = np.full_like(z, 1e-30)
    total = np.zeros_like(z)
    stored = np.zeros_like(z)
    first = np.zeros_like(z)
    for j in range(start, 0, -1):
        if j % 2 == 0:
            k = j // 2
            total = total + (nu + j) * gk * f
            if k > 1:
                gk = gk * k / (nu + k - 1.0)
        if j == n_int:
            stored = f.copy()
        if j == 1:
            first = f.copy()
        fprev = (2.0 * (nu + j) / z) * f - fnext
        fnext, f = f, fprev
        big = np.abs(f) > 1e250
        if big.any():
            scale = np.where(big, 1e-250, 1.0)
            f, fnext, total = f * scale, fnext * scale, total * scale
            stored, first = stored * scale, first * scale
    total = total + f
    norm = (0.5 * z) ** nu / math.gamma(nu + 1.0) / total
    if n_int == 0:
        stored = f
    if n_int >= 0:
        return stored * norm
    return ((2.0 * nu / z) * f - first) * norm


def bessel_j_ratio(alpha, z):
    """``J_alpha(z) / z**alpha`` for an array of ``z >= 0``."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    small = z < _SERIES_SWITCH
    if small.any():
        out[small] = _series_ratio(alpha, z[small])
    if (~small).any():
        zl = z[~small]
        out[~small] = _miller(alpha, zl) / zl ** alpha
    return out


def bessel_j(alpha, z):
    """``J_alpha(z)`` for an array of ``z >= 0``."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    small = z < _SERIES_SWITCH
    if small.any():
        zs = z[small]
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = _series_ratio(alpha, zs) * zs ** alpha
        if alpha == 0.0:
            vals = np.where(zs == 0.0, 1.0, vals)
        out[small] = vals
    if (~small).any():
        out[~small] = _miller(alpha, z[~small])
    return out


def _chunks(nq, nm, budget=2_000_000):
    step = max(1, budget // max(nm, 1))
    for start in range(0, nq, step):
        yield slice(start, min(nq, start + step))


def fiber_cos_sum(logw, T, C, xi, a, b, delta):
    """``out[q] = sum_m exp(logw - a[q] T - b[q] C) cos(delta[q] xi)``."""
    logw, T, C, xi = (np.asarray(v, dtype=np.float64) for v in (logw, T, C, xi))
    a, b, delta = (np.asarray(v, dtype=np.float64) for v in (a, b, delta))
    out = np.empty(a.shape[0])
    for sl in _chunks(a.shape[0], xi.shape[0]):
        expo = logw[None, :] - a[sl, None] * T[None, :] - b[sl, None] * C[None, :]
        out[sl] = np.sum(np.exp(expo) * np.cos(delta[sl, None] * xi[None, :]), axis=1)
    return out


def fiber_bessel_sum(logw, T, C, tau, a, b, delta, alpha):
    """Like :func:`fiber_cos_sum` with ``J_alpha(s)/s**alpha`` at ``s = delta*tau``."""
    logw, T, C, tau = (np.asarray(v, dtype=np.float64) for v in (logw, T, C, tau))
    a, b, delta = (np.asarray(v, dtype=np.float64) for v in (a, b, delta))
    out = np.empty(a.shape[0])
    for sl in _chunks(a.shape[0], tau.shape[0], budget=400_000):
        expo = logw[None, :] - a[sl, None] * T[None, :] - b[sl, None] * C[None, :]
        arg = delta[sl, None] * tau[None, :]
        ratio = bessel_j_ratio(alpha, arg.ravel()).reshape(arg.shape)
        out[sl] = np.sum(np.exp(expo) * ratio, axis=1)
    return out
