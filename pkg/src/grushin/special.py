"""Hermite functions, the harmonic-oscillator heat kernel and Bessel functions.

The heavy loops live in the backend modules (compiled or numpy); this module
does argument checking and assembles multi-dimensional products.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _backend


@dataclass(frozen=True, order=True)
class MultiIndex:
    """A multi-index ``k`` in ``N^{d'}``.

    Attributes
    ----------
    entries : tuple of int
        Non-negative components ``k_1, ..., k_{d'}``.
    """

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        if not entries:
            raise ValueError("a multi-index needs at least one entry")
        if any(e < 0 for e in entries):
            raise ValueError(f"multi-index entries must be >= 0, got {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *entries: int) -> "MultiIndex":
        return cls(tuple(entries))

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def length(self) -> int:
        """``|k| = k_1 + ... + k_{d'}``."""
        return sum(self.entries)

    @property
    def eigenvalue(self) -> int:
        """``lambda'_k = 2|k| + d'``."""
        return 2 * self.length + self.dim


def as_multi_index(k, d_prime: int | None = None) -> MultiIndex:
    if isinstance(k, MultiIndex):
        mi = k
    elif np.isscalar(k):
        mi = MultiIndex((int(k),))
    else:
        mi = MultiIndex(tuple(k))
    if d_prime is not None and mi.dim != d_prime:
        raise ValueError(f"multi-index has {mi.dim} entries, expected {d_prime}")
    return mi


@lru_cache(maxsize=64)
def multi_indices(d_prime: int, K: int) -> tuple[MultiIndex, ...]:
    """All multi-indices with ``|k| <= K``, ordered by length then lexicographically."""
    if d_prime < 1 or K < 0:
        raise ValueError("need d_prime >= 1 and K >= 0")
    found = [
        MultiIndex(c)
        for c in itertools.product(range(K + 1), repeat=d_prime)
        if sum(c) <= K
    ]
    found.sort(key=lambda m: (m.length, m.entries))
    return tuple(found)


def _check_finite(u, what="argument"):
    arr = np.asarray(u, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} must be finite")
    return arr


def hermite_table(kmax: int, u) -> np.ndarray:
    """Values ``h_k(u)`` for ``k = 0..kmax``; shape ``(kmax + 1,) + u.shape``."""
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    u = _check_finite(u, "u")
    return _backend.kernels().hermite_table(int(kmax), u)


def hermite_1d(k: int, u):
    """L2-orthonormal Hermite function ``h_k(u)``.

    Parameters
    ----------
    k : int
        Degree, ``k >= 0``.
    u : float or array_like
        Evaluation points; must be finite.

    Returns
    -------
    float or ndarray
        Same shape as ``u``.
    """
    if int(k) != k or k < 0:
        raise ValueError(f"Hermite degree must be a non-negative integer, got {k}")
    arr = _check_finite(u, "u")
    vals = hermite_table(int(k), arr)[int(k)]
    return float(vals.reshape(-1)[0]) if np.ndim(u) == 0 else vals


def hermite_multi(k, x_prime):
    """Product ``prod_j h_{k_j}(x'_j)``; the last axis of ``x_prime`` has length ``d'``."""
    x = _check_finite(x_prime, "x_prime")
    mi = as_multi_index(k)
    if x.shape[-1:] != (mi.dim,):
        raise ValueError(f"x_prime has trailing size {x.shape[-1:]}, expected {mi.dim}")
    out = np.ones(x.shape[:-1])
    for j, kj in enumerate(mi.entries):
        out = out * hermite_table(kj, x[..., j])[kj]
    return float(out.reshape(-1)[0]) if out.ndim == 0 else out


def hermite_scaled(k, tau: float, x_prime):
    """Scaled Hermite function ``h_{k,tau}(x') = tau^{d'/4} h_k(sqrt(tau) x')``."""
    if not (tau > 0 and math.isfinite(tau)):
        raise ValueError(f"scale tau must be positive and finite, got {tau}")
    mi = as_multi_index(k)
    x = _check_finite(x_prime, "x_prime")
    return tau ** (mi.dim / 4.0) * hermite_multi(mi, math.sqrt(tau) * x)


def hermite_heat_kernel_closed(t: float, x_prime, y_prime) -> float:
    """Mehler closed form ``G_t(x', y')`` of ``exp(-t(-Delta + |x'|^2))``.

    ``G_t = (2 pi sinh 2t)^{-d'/2} exp(-(|x'+y'|^2 tanh t + |x'-y'|^2 coth t)/4)``.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    x = np.atleast_1d(_check_finite(x_prime, "x_prime"))
    y = np.atleast_1d(_check_finite(y_prime, "y_prime"))
    if x.shape != y.shape:
        raise ValueError("x_prime and y_prime must have the same shape")
    d = x.shape[-1]
    plus = np.sum((x + y) ** 2, axis=-1)
    minus = np.sum((x - y) ** 2, axis=-1)
    expo = -0.25 * (plus * math.tanh(t) + minus / math.tanh(t))
    val = (2.0 * math.pi * math.sinh(2.0 * t)) ** (-d / 2.0) * np.exp(expo)
    return float(val) if np.ndim(val) == 0 else val


def mehler_series(t: float, x_prime, y_prime, K: int) -> float:
    """Truncated spectral sum ``sum_{|k|<=K} e^{-t(2|k|+d')} h_k(x') h_k(y')``.

    Factorises across axes, so each axis is summed to ``K`` independently; the
    total-degree cutoff ``|k| <= K`` is respected exactly.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    x = np.atleast_1d(_check_finite(x_prime, "x_prime")).astype(float)
    y = np.atleast_1d(_check_finite(y_prime, "y_prime")).astype(float)
    d = x.shape[0]
    hx = hermite_table(K, x)  # (K+1, d)
    hy = hermite_table(K, y)
    damp = np.exp(-2.0 * t * np.arange(K + 1))
    per_axis = damp[:, None] * hx * hy  # (K+1, d)
    # polynomial product in the total degree, truncated at K
    acc = np.zeros(K + 1)
    acc[0] = 1.0
    for j in range(d):
        acc = np.convolve(acc, per_axis[:, j])[: K + 1]
    return float(math.exp(-t * d) * acc.sum())


def bessel_j(alpha: float, z):
    """Bessel function of the first kind ``J_alpha(z)`` for ``alpha > -1``, ``z >= 0``.

    Ascending series for small ``z`` and a normalised Miller backward
    recurrence beyond the switch point. ``J_0(0) = 1`` and ``J_alpha(0) = 0``
    for ``alpha > 0``.
    """
    if not alpha > -1:
        raise ValueError(f"order must exceed -1, got {alpha}")
    arr = np.asarray(z, dtype=np.float64)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise ValueError("z must be finite and non-negative")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = _backend.kernels().bessel_j(float(alpha), arr.reshape(-1)).reshape(arr.shape)
    if alpha < 0:
        out = np.where(arr == 0.0, np.inf, out)
    return float(out) if np.ndim(z) == 0 else out


def bessel_j_ratio(alpha: float, z):
    """``J_alpha(z) / z^alpha``, finite at ``z = 0`` where it equals ``2^{-alpha}/Gamma(alpha+1)``."""
    if not alpha > -1:
        raise ValueError(f"order must exceed -1, got {alpha}")
    arr = np.asarray(z, dtype=np.float64)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise ValueError("z must be finite and non-negative")
    out = _backend.kernels().bessel_j_ratio(float(alpha), arr.reshape(-1)).reshape(arr.shape)
    return float(out) if np.ndim(z) == 0 else out


def hyperbolic_form_sech(u, x_prime, y_prime):
    """``coth u (|x'|^2 + |y'|^2 - 2 x'.y' sech u)``."""
    x, y = np.asarray(x_prime, float), np.asarray(y_prime, float)
    return (np.sum(x * x, -1) + np.sum(y * y, -1) - 2.0 * np.sum(x * y, -1) / np.cosh(u)) / np.tanh(u)


def hyperbolic_form_half(u, x_prime, y_prime):
    """``(|x'+y'|^2 tanh(u/2) + |x'-y'|^2 coth(u/2)) / 2``."""
    x, y = np.asarray(x_prime, float), np.asarray(y_prime, float)
    h = 0.5 * np.asarray(u, float)
    return 0.5 * (np.sum((x + y) ** 2, -1) * np.tanh(h) + np.sum((x - y) ** 2, -1) / np.tanh(h))
