"""Partial Fourier transform, scaled Hermite transform and the G-transform.

The forward G-transform is ``F(k, xi'') = <F''f(., xi''), h_{k,|xi''|}>``: a
unitary DFT along every ``x''`` axis followed by a Hermite analysis of each
frequency slice against the Hermite basis dilated by ``|xi''|``. The slice at
``xi'' = 0`` has no Hermite basis and is carried through verbatim as an
``x'``-profile (see :class:`~grushin.grids.DualCoefficients`).
"""
from __future__ import annotations

import logging
import math
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .grids import DualCoefficients, GridFunction, GrushinConfig
from .special import hermite_table

log = logging.getLogger(__name__)

_SQRT_2PI = math.sqrt(2.0 * math.pi)


# -- partial Fourier transform ------------------------------------------------

def _xi_axes(cfg: GrushinConfig) -> tuple[int, ...]:
    return tuple(range(cfg.d_prime, cfg.d_prime + cfg.d_doubleprime))


def _lattice_sign(cfg: GrushinConfig) -> np.ndarray:
    # (-1)^{j_1 + ... + j_{d''}} over the ascending lattice, broadcast to cfg.shape
    n = cfg.N_doubleprime
    s1 = np.where(np.arange(-n // 2, n // 2) % 2 == 0, 1.0, -1.0)
    sign = np.ones((1,) * cfg.d_prime + cfg.xi_shape)
    for j in range(cfg.d_doubleprime):
        shape = [1] * (cfg.d_prime + cfg.d_doubleprime)
        shape[cfg.d_prime + j] = n
        sign = sign * s1.reshape(shape)
    return sign


def partial_fourier(g: GridFunction) -> GridFunction:
    """DFT along the ``x''`` axes with the continuum normalisation.

    ``F(x', xi_j) = (h''/sqrt(2 pi))^{d''} sum_n g(x', x''_n) e^{-i xi_j . x''_n}``;
    the result lives on the ascending frequency lattice and satisfies the
    discrete Parseval identity exactly.
    """
    if g.domain != "x":
        raise ValueError("partial_fourier expects physical-domain samples")
    cfg = g.config
    axes = _xi_axes(cfg)
    out = np.fft.fftshift(np.fft.fftn(g.values, axes=axes), axes=axes)
    out *= _lattice_sign(cfg) * (cfg.h_doubleprime / _SQRT_2PI) ** cfg.d_doubleprime
    return GridFunction(cfg, out, domain="xi")


def partial_fourier_inverse(G: GridFunction) -> GridFunction:
    """Inverse of :func:`partial_fourier`."""
    if G.domain != "xi":
        raise ValueError("partial_fourier_inverse expects frequency-domain samples")
    cfg = G.config
    axes = _xi_axes(cfg)
    vals = np.fft.ifftshift(G.values * _lattice_sign(cfg), axes=axes)
    out = np.fft.ifftn(vals, axes=axes)
    out *= (cfg.dxi * cfg.N_doubleprime / _SQRT_2PI) ** cfg.d_doubleprime
    return GridFunction(cfg, out, domain="x")


# -- scaled Hermite transform -------------------------------------------------

@dataclass(frozen=True)
class Shell:
    """Cached Hermite data for one radial frequency shell ``|xi''| = tau``."""

    tau: float
    table: np.ndarray  # (K+1, N'): tau^{1/4} h_k(sqrt(tau) x'_i)
    weighted: np.ndarray  # table * x'-weights

    def defect(self, kmax: int | None = None) -> float:
        """``max |H W H^T - I|`` over all rows and the columns ``<= kmax``.

        This block governs exact recovery of coefficient vectors supported on
        ``k <= kmax``; ``kmax=None`` gives the full square Gram defect.
        """
        n = self.table.shape[0] if kmax is None else kmax + 1
        gram = self.weighted @ self.table[:n].T
        return float(np.max(np.abs(gram - np.eye(*gram.shape))))


class TransformPlan:
    """Precomputed state for repeated G-transforms on one configuration.

    Parameters
    ----------
    config : GrushinConfig
    max_shells : int, optional
        Bound on the number of cached radial shells.
    """

    def __init__(self, config: GrushinConfig, max_shells: int = 4096):
        self.config = config
        self.max_shells = max_shells
        self._x = config.x_prime_axis()
        self._w = config.x_prime_weights()
        self._shells: OrderedDict[int, Shell] = OrderedDict()
        cfg = config
        self.multi_indices = cfg.multi_indices()
        self._k_array = np.array([m.entries for m in self.multi_indices])
        self._k_flat = np.ravel_multi_index(self._k_array.T, (cfg.K + 1,) * cfg.d_prime)
        self.lengths = self._k_array.sum(axis=1)
        # integer |j|^2 on the lattice identifies the radial shell exactly
        n = cfg.N_doubleprime
        j = np.arange(-n // 2, n // 2)
        grids = np.meshgrid(*([j] * cfg.d_doubleprime), indexing="ij")
        self.shell_key = sum(g * g for g in grids)
        keys, inverse = np.unique(self.shell_key.ravel(), return_inverse=True)
        self.shell_keys = keys
        self._members = [np.flatnonzero(inverse == i) for i in range(len(keys))]
        self.xi_norm = cfg.dxi * np.sqrt(self.shell_key)

    def tau_of(self, key: int) -> float:
        return self.config.dxi * math.sqrt(key)

    def shell(self, key: int) -> Shell:
        """Return (and cache) the shell with integer key ``|j|^2``."""
        if key <= 0:
            raise ValueError("the zero frequency has no scaled Hermite basis")
        hit = self._shells.get(key)
        if hit is not None:
            self._shells.move_to_end(key)
            return hit
        shell = self.shell_for_tau(self.tau_of(key))
        self._shells[key] = shell
        if len(self._shells) > self.max_shells:
            self._shells.popitem(last=False)
        return shell

    def shell_for_tau(self, tau: float) -> Shell:
        if not tau > 0:
            raise ValueError("the zero frequency has no scaled Hermite basis")
        table = tau ** 0.25 * hermite_table(self.config.K, math.sqrt(tau) * self._x)
        return Shell(tau, table, table * self._w[None, :])

    # -- per-slice operations -------------------------------------------------
    def analyse(self, profiles: np.ndarray, shell: Shell) -> np.ndarray:
        """Hermite coefficients of ``profiles`` (shape ``prime_shape + (m,)``) -> ``(n_k, m)``."""
        dp = self.config.d_prime
        if dp == 1:
            return shell.weighted @ profiles
        out = profiles
        for axis in range(dp):
            out = np.tensordot(shell.weighted, out, axes=([1], [axis]))
            out = np.moveaxis(out, 0, axis)
        flat = out.reshape((-1, out.shape[-1]))
        return flat[self._k_flat]

    def synthesise(self, coeffs: np.ndarray, shell: Shell) -> np.ndarray:
        """Inverse of :meth:`analyse`: ``(n_k, m)`` -> ``prime_shape + (m,)``."""
        cfg = self.config
        dp = cfg.d_prime
        if dp == 1:
            return shell.table.T @ coeffs
        full = np.zeros(((cfg.K + 1) ** dp, coeffs.shape[-1]), dtype=coeffs.dtype)
        full[self._k_flat] = coeffs
        out = full.reshape((cfg.K + 1,) * dp + (coeffs.shape[-1],))
        for axis in range(dp):
            out = np.tensordot(shell.table, out, axes=([0], [axis]))
            out = np.moveaxis(out, 0, axis)
        return out

    # -- diagnostics ----------------------------------------------------------
    def shell_defects(self, kmax: int | None = None) -> dict[float, float]:
        """Orthonormality defect of every nonzero lattice shell, keyed by ``tau``."""
        return {
            self.tau_of(int(k)): self.shell(int(k)).defect(kmax)
            for k in self.shell_keys
            if k > 0
        }

    def resolved_shell_keys(self, kmax: int | None = None, tol: float | None = None) -> list[int]:
        """Shell keys whose discrete Hermite basis is orthonormal within ``tol``."""
        tol = self.config.tolerances["shell_orthonormality"] if tol is None else tol
        return [int(k) for k in self.shell_keys if k > 0 and self.shell(int(k)).defect(kmax) <= tol]

    def tail_fraction(self, F: DualCoefficients) -> float:
        """Energy in the outermost Hermite layer ``|k| = K`` relative to the total."""
        energy = np.abs(F.values) ** 2
        total = energy.sum()
        if total == 0:
            return 0.0
        return float(energy[self.lengths == self.config.K].sum() / total)

    # -- full transforms ------------------------------------------------------
    def forward(self, f: GridFunction) -> DualCoefficients:
        cfg = self.config
        if f.config != cfg:
            raise ValueError("function and plan use different configurations")
        fhat = partial_fourier(f).values
        slab = fhat.reshape(cfg.prime_shape + (-1,))
        out = np.zeros((len(self.multi_indices), slab.shape[-1]), complex)
        for key, members in zip(self.shell_keys, self._members):
            if key == 0:
                continue
            out[:, members] = self.analyse(slab[..., members], self.shell(int(key)))
        zero = fhat[(Ellipsis,) + (cfg.xi_zero_index,) * cfg.d_doubleprime]
        F = DualCoefficients(cfg, out.reshape((-1,) + cfg.xi_shape), zero)
        tail = self.tail_fraction(F)
        if tail > cfg.tolerances["hermite_tail"]:
            log.info("Hermite tail fraction %.3e exceeds %.1e; K may be too small",
                     tail, cfg.tolerances["hermite_tail"])
        return F

    def forward_swapped(self, f: GridFunction) -> DualCoefficients:
        """Same transform with the two stages in the opposite order.

        For each shell the Hermite analysis runs on every ``x''`` column first
        and the DFT second. The stages act on different axes, so the result
        agrees with :meth:`forward` up to rounding; it costs one FFT per shell.
        """
        cfg = self.config
        if f.config != cfg:
            raise ValueError("function and plan use different configurations")
        cols = f.values.reshape(cfg.prime_shape + (-1,)).astype(complex)
        axes = tuple(range(1, 1 + cfg.d_doubleprime))
        scale = _lattice_sign(cfg).reshape((1,) + cfg.xi_shape) * (cfg.h_doubleprime / _SQRT_2PI) ** cfg.d_doubleprime
        out = np.zeros((len(self.multi_indices), cols.shape[-1]), complex)
        for key, members in zip(self.shell_keys, self._members):
            if key == 0:
                continue
            coef = self.analyse(cols, self.shell(int(key))).reshape((-1,) + cfg.xi_shape)
            freq = np.fft.fftshift(np.fft.fftn(coef, axes=axes), axes=axes) * scale
            out[:, members] = freq.reshape(freq.shape[0], -1)[:, members]
        zero = partial_fourier(f).values[(Ellipsis,) + (cfg.xi_zero_index,) * cfg.d_doubleprime]
        return DualCoefficients(cfg, out.reshape((-1,) + cfg.xi_shape), zero)

    def inverse(self, F: DualCoefficients) -> GridFunction:
        cfg = self.config
        if F.config != cfg:
            raise ValueError("coefficients and plan use different configurations")
        vals = F.values.reshape((len(self.multi_indices), -1))
        slab = np.zeros(cfg.prime_shape + (vals.shape[-1],), complex)
        for key, members in zip(self.shell_keys, self._members):
            if key == 0:
                continue
            slab[..., members] = self.synthesise(vals[:, members], self.shell(int(key)))
        slab = slab.reshape(cfg.shape)
        slab[(Ellipsis,) + (cfg.xi_zero_index,) * cfg.d_doubleprime] = F.zero_slice
        return partial_fourier_inverse(GridFunction(cfg, slab, domain="xi"))


_PLANS: OrderedDict[GrushinConfig, TransformPlan] = OrderedDict()


def get_plan(config: GrushinConfig) -> TransformPlan:
    """Shared plan per configuration (small LRU cache)."""
    plan = _PLANS.get(config)
    if plan is None:
        plan = TransformPlan(config)
        _PLANS[config] = plan
        if len(_PLANS) > 8:
            _PLANS.popitem(last=False)
    else:
        _PLANS.move_to_end(config)
    return plan


def _tau(xi) -> float:
    tau = float(np.linalg.norm(np.atleast_1d(np.asarray(xi, dtype=float))))
    if tau == 0.0:
        raise ValueError("zero frequency: the xi''=0 slice bypasses Hermite analysis")
    return tau


def scaled_hermite_analysis(profile, xi, config: GrushinConfig) -> np.ndarray:
    """Coefficients ``<profile, h_{k,|xi|}>`` for every ``|k| <= K``.

    Parameters
    ----------
    profile : array_like
        Samples on the ``x'`` grid, shape ``(N',) * d'``.
    xi : float or array_like
        Nonzero frequency; only ``|xi|`` matters.
    config : GrushinConfig
    """
    plan = get_plan(config)
    shell = plan.shell_for_tau(_tau(xi))
    prof = np.asarray(profile, dtype=complex)
    if prof.shape != config.prime_shape:
        raise ValueError(f"profile must have shape {config.prime_shape}")
    return plan.analyse(prof[..., None], shell)[:, 0]


def scaled_hermite_synthesis(coeffs, xi, config: GrushinConfig) -> np.ndarray:
    """``sum_k c_k h_{k,|xi|}`` on the ``x'`` grid; the adjoint of the analysis."""
    plan = get_plan(config)
    shell = plan.shell_for_tau(_tau(xi))
    c = np.asarray(coeffs, dtype=complex)
    if c.shape != (len(plan.multi_indices),):
        raise ValueError("coefficient vector has the wrong length")
    return plan.synthesise(c[:, None], shell)[..., 0]


def grushin_forward(f: GridFunction, plan: TransformPlan | None = None) -> DualCoefficients:
    """The G-transform of ``f``."""
    return (plan or get_plan(f.config)).forward(f)


def grushin_inverse(F: DualCoefficients, plan: TransformPlan | None = None) -> GridFunction:
    """Inverse G-transform: Hermite synthesis per slice, then inverse DFT."""
    return (plan or get_plan(F.config)).inverse(F)
