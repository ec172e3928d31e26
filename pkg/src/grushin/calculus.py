"""Spectral functional calculus of the Grushin operator.

``Phi(G) f = G^{-1}[ (Phi o Theta) . G f ]`` with ``Theta(k, xi'') = (2|k|+d')|xi''|``.

On the ``xi'' = 0`` slice the fiber operator ``-Delta' + |xi''|^2 |x'|^2``
degenerates to ``-Delta'``; that slice is therefore multiplied by
``Phi(|omega'|^2)`` in an ``x'``-Fourier basis instead of being left alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grids import DualCoefficients, GridFunction, GrushinConfig, dual_norm
from .special import MultiIndex, as_multi_index, hermite_scaled
from .transforms import TransformPlan, get_plan


def theta(k, xi) -> float:
    """Symbol ``Theta(k, xi'') = (2|k| + d') |xi''|``; zero at ``xi'' = 0``."""
    mi = as_multi_index(k)
    return float(mi.eigenvalue * np.linalg.norm(np.atleast_1d(np.asarray(xi, dtype=float))))


def theta_grid(config: GrushinConfig) -> np.ndarray:
    """``Theta`` on the whole dual lattice, shape ``(n_k,) + xi_shape``."""
    plan = get_plan(config)
    lam = 2 * plan.lengths + config.d_prime
    return lam.reshape((-1,) + (1,) * config.d_doubleprime) * plan.xi_norm[None]


def zero_slice_frequencies(config: GrushinConfig) -> np.ndarray:
    """``|omega'|^2`` on the ``x'`` FFT lattice, shape ``(N',) * d'``."""
    w1 = 2.0 * math.pi * np.fft.fftfreq(config.N_prime, d=config.h_prime)
    grids = np.meshgrid(*([w1] * config.d_prime), indexing="ij")
    return sum(g * g for g in grids)


@dataclass(frozen=True)
class SpectralSymbol:
    """A function ``Phi: [0, inf) -> C`` defining ``Phi(G)``.

    ``phi`` must accept and return numpy arrays. ``bound`` is ``sup |Phi|``
    when known (``None`` for unbounded symbols).
    """

    phi: Callable[[np.ndarray], np.ndarray]
    name: str = "custom"
    bound: float | None = None

    @property
    def bounded(self) -> bool:
        return self.bound is not None

    def __call__(self, u):
        return self.phi(np.asarray(u, dtype=float))

    def __mul__(self, other: "SpectralSymbol") -> "SpectralSymbol":
        bound = None if self.bound is None or other.bound is None else self.bound * other.bound
        return SpectralSymbol(lambda u: self.phi(u) * other.phi(u), f"{self.name}*{other.name}", bound)

    # common symbols
    @classmethod
    def identity(cls) -> "SpectralSymbol":
        return cls(lambda u: np.ones_like(u), "identity", 1.0)

    @classmethod
    def heat(cls, t: float) -> "SpectralSymbol":
        if not t > 0:
            raise ValueError(f"heat time must be positive, got {t}")
        return cls(lambda u: np.exp(-t * u), f"heat(t={t:g})", 1.0)

    @classmethod
    def projection(cls, cutoff: float, t: float = 0.0) -> "SpectralSymbol":
        """Indicator of ``[0, cutoff]``, optionally damped by ``e^{-t u}``."""
        if t < 0:
            raise ValueError("damping time must be non-negative")
        return cls(lambda u: np.where(u <= cutoff, np.exp(-t * u), 0.0),
                   f"projection({cutoff:g})", 1.0)

    @classmethod
    def power(cls, p: float = 1.0) -> "SpectralSymbol":
        """``Phi(u) = u**p``; unbounded for ``p > 0``."""
        return cls(lambda u: u ** p, f"power({p:g})", None if p > 0 else 1.0)


def apply_symbol(F: DualCoefficients, s: SpectralSymbol) -> DualCoefficients:
    """Multiply ``F(k, xi'')`` by ``Phi(Theta(k, xi''))``."""
    cfg = F.config
    mult = np.asarray(s(theta_grid(cfg)), dtype=complex)
    zero_mult = np.asarray(s(zero_slice_frequencies(cfg)), dtype=complex)
    if not (np.all(np.isfinite(mult)) and np.all(np.isfinite(zero_mult))):
        raise ValueError(f"symbol {s.name} is not finite on the spectrum grid")
    axes = tuple(range(cfg.d_prime))
    zero = np.fft.ifftn(zero_mult * np.fft.fftn(F.zero_slice, axes=axes), axes=axes)
    return F.replace(F.values * mult, zero)


def functional_calculus(f: GridFunction, s: SpectralSymbol, plan: TransformPlan | None = None) -> GridFunction:
    """``Phi(G) f`` via the G-transform."""
    plan = plan or get_plan(f.config)
    return plan.inverse(apply_symbol(plan.forward(f), s))


def heat_semigroup(f: GridFunction, t: float, plan: TransformPlan | None = None) -> GridFunction:
    """``exp(-t G) f``."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    return functional_calculus(f, SpectralSymbol.heat(t), plan)


def domain_diagnostic(f: GridFunction, plan: TransformPlan | None = None) -> float:
    """Discrete ``||Theta . G f||``; large values flag data outside the operator domain."""
    plan = plan or get_plan(f.config)
    return dual_norm(apply_symbol(plan.forward(f), SpectralSymbol.power(1.0)))


def psi_eigenfunction(k, xi, x) -> np.ndarray:
    """``psi_{k,xi''}(x) = (2 pi)^{-d''/2} h_{k,|xi''|}(x') e^{-i x''.xi''}``.

    ``x`` has trailing size ``d' + d''``; ``d'`` is read from ``k``.
    """
    mi = as_multi_index(k)
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    tau = float(np.linalg.norm(xi))
    if tau == 0.0:
        raise ValueError("psi is undefined at zero frequency")
    x = np.asarray(x, dtype=float)
    dp, dd = mi.dim, xi.shape[0]
    if x.shape[-1] != dp + dd:
        raise ValueError(f"points need {dp + dd} coordinates")
    xp, xpp = x[..., :dp], x[..., dp:]
    val = (2 * math.pi) ** (-dd / 2) * hermite_scaled(mi, tau, xp) * np.exp(-1j * (xpp @ xi))
    return val


def sample_psi(config: GrushinConfig, k, xi) -> GridFunction:
    mi = as_multi_index(k, config.d_prime)
    return GridFunction(config, psi_eigenfunction(mi, xi, config.mesh("x")))


def _second_difference_prime(vals: np.ndarray, axis: int, h: float) -> np.ndarray:
    v = np.moveaxis(vals, axis, 0)
    out = np.empty_like(v)
    out[1:-1] = v[2:] - 2 * v[1:-1] + v[:-2]
    # second-order one-sided stencil at the ends
    out[0] = 2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]
    out[-1] = 2 * v[-1] - 5 * v[-2] + 4 * v[-3] - v[-4]
    return np.moveaxis(out / (h * h), 0, axis)


def grushin_fd(f: GridFunction) -> GridFunction:
    """Finite-difference ``-Delta' f - |x'|^2 Delta'' f`` (centred, periodic in ``x''``)."""
    cfg = f.config
    if f.domain != "x":
        raise ValueError("grushin_fd acts on physical samples")
    if cfg.N_prime < 5 or cfg.N_doubleprime < 5:
        raise ValueError("grid too coarse for the finite-difference stencil")
    vals = f.values
    lap_p = sum(_second_difference_prime(vals, j, cfg.h_prime) for j in range(cfg.d_prime))
    h2 = cfg.h_doubleprime
    lap_pp = sum(
        (np.roll(vals, 1, axis=ax) - 2 * vals + np.roll(vals, -1, axis=ax)) / (h2 * h2)
        for ax in range(cfg.d_prime, cfg.d_prime + cfg.d_doubleprime)
    )
    xp = cfg.mesh("x")[..., : cfg.d_prime]
    r2 = np.sum(xp * xp, axis=-1)
    return f.with_values(-lap_p - r2 * lap_pp)


def fd_symbol_doubleprime(config: GrushinConfig, xi) -> float:
    """Symbol of the periodic second difference: ``sum (2/h^2)(1 - cos(xi_j h))``."""
    h = config.h_doubleprime
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    return float(np.sum(2.0 / h ** 2 * (1.0 - np.cos(xi * h))))


__all__ = [
    "MultiIndex",
    "SpectralSymbol",
    "apply_symbol",
    "domain_diagnostic",
    "fd_symbol_doubleprime",
    "functional_calculus",
    "grushin_fd",
    "heat_semigroup",
    "psi_eigenfunction",
    "sample_psi",
    "theta",
    "theta_grid",
    "zero_slice_frequencies",
]
