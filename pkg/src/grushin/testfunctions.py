"""Reproducible test data: band-limited combinations and smooth bumps."""
from __future__ import annotations

import math

import numpy as np

from .grids import DualCoefficients, GridFunction, GrushinConfig, sample
from .transforms import get_plan


def bandlimited(config: GrushinConfig, rng: np.random.Generator, n_terms: int = 8,
                kmax: int | None = None, tol: float = 1e-12) -> tuple[GridFunction, DualCoefficients]:
    """Random finite combination of discrete eigenfunctions.

    Frequencies are restricted to shells whose Hermite basis is orthonormal on
    the grid to ``tol`` for ``|k| <= kmax`` (default ``K // 2``), so the data
    lie exactly in the range where the discrete transform is unitary.

    Returns
    -------
    f : GridFunction
    F : DualCoefficients
        Its exact coefficients (``G f = F`` up to rounding).
    """
    plan = get_plan(config)
    kmax = config.K // 2 if kmax is None else kmax
    good = set(plan.resolved_shell_keys(kmax, tol))
    if not good:
        raise ValueError("no frequency shell is resolved at this tolerance")
    lattice = np.flatnonzero(np.isin(plan.shell_key.ravel(), sorted(good)))
    k_ok = np.flatnonzero(plan.lengths <= kmax)
    vals = np.zeros((len(plan.multi_indices), plan.shell_key.size), complex)
    picks_xi = rng.choice(lattice, size=n_terms)
    picks_k = rng.choice(k_ok, size=n_terms)
    coef = rng.standard_normal(n_terms) + 1j * rng.standard_normal(n_terms)
    np.add.at(vals, (picks_k, picks_xi), coef)
    F = DualCoefficients(config, vals.reshape((-1,) + config.xi_shape))
    return plan.inverse(F), F


def smooth_step(s: np.ndarray) -> np.ndarray:
    """C-infinity transition: 0 for ``s <= 0``, 1 for ``s >= 1``."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = (s > 0) & (s < 1)
    a = np.exp(-1.0 / np.where(inside, s, 1.0))
    b = np.exp(-1.0 / np.where(inside, 1.0 - s, 1.0))
    out[inside] = (a / (a + b))[inside]
    out[s >= 1] = 1.0
    return out


def cutoff(r: np.ndarray, inner: float, outer: float) -> np.ndarray:
    """1 on ``r <= inner``, 0 on ``r >= outer``, smooth in between."""
    return 1.0 - smooth_step((np.asarray(r) - inner) / (outer - inner))


def bump(config: GrushinConfig, center=None, width_prime: float = 1.0, width_dd: float = 1.0,
         radius: float | None = None, phase=None) -> GridFunction:
    """Compactly supported smooth function: a Gaussian times a smooth cutoff.

    The cutoff switches on at ``radius`` (default: where the Gaussian has
    fallen to ``1e-20``) in the anisotropic distance, so the function is
    ``C_c^infty`` while numerically indistinguishable from the Gaussian.
    """
    d = config.d_prime + config.d_doubleprime
    center = np.zeros(d) if center is None else np.asarray(center, dtype=float)
    widths = np.array([width_prime] * config.d_prime + [width_dd] * config.d_doubleprime)
    inner = math.sqrt(2 * math.log(1e20)) if radius is None else radius

    def field(x):
        z = (x - center) / widths
        r = np.sqrt(np.sum(z * z, axis=-1))
        val = np.exp(-0.5 * r * r) * cutoff(r, inner, 1.25 * inner)
        if phase is not None:
            val = val * np.exp(1j * (x @ np.asarray(phase, dtype=float)))
        return val

    return sample(config, field)


def gaussian(config: GrushinConfig, width_prime: float = 1.0, width_dd: float = 1.0, center=None) -> GridFunction:
    """Schwartz test function ``exp(-|x'-c'|^2/(2a^2) - |x''-c''|^2/(2b^2))``."""
    d = config.d_prime + config.d_doubleprime
    center = np.zeros(d) if center is None else np.asarray(center, dtype=float)
    widths = np.array([width_prime] * config.d_prime + [width_dd] * config.d_doubleprime)
    return sample(config, lambda x: np.exp(-0.5 * np.sum(((x - center) / widths) ** 2, axis=-1)))
