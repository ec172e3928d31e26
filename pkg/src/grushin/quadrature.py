"""Quadrature helpers shared by the kernel evaluators."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln


class NonConvergenceError(RuntimeError):
    """A quadrature refinement check failed."""


@lru_cache(maxsize=32)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def composite_gauss_legendre(a: float, b: float, n_panels: int, order: int = 10):
    """Nodes and weights of a composite Gauss-Legendre rule on ``[a, b]``."""
    if n_panels < 1:
        raise ValueError("need at least one panel")
    x, w = _legendre(order)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def log_sphere_area(n: int) -> float:
    """``log |S^{n-1}|``; the 0-sphere has two points."""
    return math.log(2.0) + 0.5 * n * math.log(math.pi) - gammaln(0.5 * n)


def log_tau_over_sinh(tau: np.ndarray, c: float = 2.0) -> np.ndarray:
    """``log(tau / sinh(c tau))`` without overflow; limit ``-log c`` at 0."""
    tau = np.asarray(tau, dtype=float)
    ct = c * tau
    safe = np.where(ct > 0, ct, 1.0)
    big = ct + np.log1p(-np.exp(-2.0 * safe)) - math.log(2.0)
    small = np.log(np.where(ct > 0, np.sinh(np.minimum(safe, 1.0)) / safe, 1.0))
    log_sinh_over = np.where(ct > 1.0, big - np.log(safe), small)
    return -math.log(c) - log_sinh_over


def radial_cutoff(d_prime: int, d_doubleprime: int, eps: float = 1e-16) -> float:
    """Solve ``(R / sinh 2R)^{d'/2} |S^{d''-1}| R^{d''-1} = eps`` for ``R``."""

    def excess(r):
        return (0.5 * d_prime * float(log_tau_over_sinh(r)) + log_sphere_area(d_doubleprime)
                + (d_doubleprime - 1) * math.log(r) - math.log(eps))

    lo, hi = 1.0, 2.0
    while excess(hi) > 0:
        hi *= 2.0
    if excess(lo) < 0:
        return lo
    return brentq(excess, lo, hi, xtol=1e-10)
