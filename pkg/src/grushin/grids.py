"""Tensor grids on R^{d'} x R^{d''} and their dual-space counterparts.

Layout conventions
------------------
* ``x'`` axes: ``N'`` uniform points on ``[-L', L']`` (both ends included),
  trapezoid weights.
* ``x''`` axes: ``N''`` uniform points on ``[-L'', L'')`` (periodic), equal
  weights ``2L''/N''``.
* ``xi''`` axes: the DFT lattice ``(pi/L'') * {-N''/2, ..., N''/2 - 1}`` in
  ascending order, equal weights ``pi/L''``.

Array axes are always ordered ``(x'_1, ..., x'_{d'}, x''_1, ..., x''_{d''})``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from typing import Callable, Mapping

import numpy as np

from .special import MultiIndex, multi_indices

CONFIG_VERSION = 1

DEFAULT_TOLERANCES = {
    "plancherel_bandlimited": 1e-9,
    "plancherel_schwartz": 1e-4,
    "roundtrip_bandlimited": 1e-9,
    "roundtrip_schwartz": 1e-4,
    "shell_orthonormality": 1e-8,
    "hermite_tail": 1e-10,
    "kernel_quadrature": 1e-10,
}


class ConfigError(ValueError):
    """Raised when a configuration violates its invariants."""


@dataclass(frozen=True)
class GrushinConfig:
    """Dimensions, grids and truncation shared by every discrete object.

    Parameters
    ----------
    d_prime, d_doubleprime : int
        Dimensions of the degenerate (``x'``) and Fourier (``x''``) factors.
    K : int
        Hermite cutoff, the largest admissible ``|k|``.
    L_prime, N_prime : float, int
        Half-width and point count of each ``x'`` axis.
    L_doubleprime, N_doubleprime : float, int
        Half-width and point count of each ``x''`` axis; ``N''`` even, ``>= 4``.
    D : int, optional
        Homogeneous dimension; must equal ``d' + 2 d''`` when given.
    tolerances : mapping, optional
        Overrides for :data:`DEFAULT_TOLERANCES`.
    """

    d_prime: int = 1
    d_doubleprime: int = 1
    K: int = 64
    L_prime: float = 12.0
    N_prime: int = 256
    L_doubleprime: float = 16.0
    N_doubleprime: int = 256
    D: int | None = None
    tolerances: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.D is None:
            object.__setattr__(self, "D", self.d_prime + 2 * self.d_doubleprime)
        tol = dict(DEFAULT_TOLERANCES)
        tol.update(self.tolerances or {})
        object.__setattr__(self, "tolerances", tol)
        self.validate()

    def validate(self) -> None:
        for name in ("d_prime", "d_doubleprime", "K", "N_prime", "N_doubleprime", "D"):
            if int(getattr(self, name)) != getattr(self, name):
                raise ConfigError(f"{name} must be an integer")
        if self.d_prime < 1 or self.d_doubleprime < 1:
            raise ConfigError("dimensions d_prime and d_doubleprime must be >= 1")
        if self.D != self.d_prime + 2 * self.d_doubleprime:
            raise ConfigError(
                f"homogeneous dimension D={self.D} must equal d'+2d''="
                f"{self.d_prime + 2 * self.d_doubleprime}"
            )
        if self.K < 0:
            raise ConfigError("K must be >= 0")
        if not (self.L_prime > 0 and self.L_doubleprime > 0):
            raise ConfigError("half-widths must be positive")
        if self.N_doubleprime < 4 or self.N_doubleprime % 2:
            raise ConfigError("N_doubleprime must be even and >= 4")
        if self.N_prime < 2:
            raise ConfigError("N_prime must be >= 2")
        for key, val in self.tolerances.items():
            if not (isinstance(val, (int, float)) and val > 0):
                raise ConfigError(f"tolerance {key!r} must be a positive number")

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        out = {"version": CONFIG_VERSION}
        for f in fields(self):
            out[f.name] = getattr(self, f.name)
        out["tolerances"] = dict(self.tolerances)
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "GrushinConfig":
        data = dict(data)
        version = data.pop("version", None)
        if version != CONFIG_VERSION:
            raise ConfigError(f"unsupported config version {version!r}; expected {CONFIG_VERSION}")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        tol = data.get("tolerances", {})
        if not isinstance(tol, Mapping):
            raise ConfigError("tolerances must be a mapping")
        unknown_tol = sorted(set(tol) - set(DEFAULT_TOLERANCES))
        if unknown_tol:
            raise ConfigError(f"unknown tolerance keys: {', '.join(unknown_tol)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GrushinConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    def __hash__(self):
        return hash(self.to_json())

    def with_(self, **changes) -> "GrushinConfig":
        if "d_prime" in changes or "d_doubleprime" in changes:
            changes.setdefault("D", None)
        return replace(self, **changes)

    # -- grids ---------------------------------------------------------------
    @property
    def h_prime(self) -> float:
        return 2.0 * self.L_prime / (self.N_prime - 1)

    @property
    def h_doubleprime(self) -> float:
        return 2.0 * self.L_doubleprime / self.N_doubleprime

    @property
    def dxi(self) -> float:
        """Spacing of the dual frequency lattice, ``pi / L''``."""
        return math.pi / self.L_doubleprime

    def x_prime_axis(self) -> np.ndarray:
        return np.linspace(-self.L_prime, self.L_prime, self.N_prime)

    def x_prime_weights(self) -> np.ndarray:
        w = np.full(self.N_prime, self.h_prime)
        w[0] = w[-1] = 0.5 * self.h_prime
        return w

    def x_doubleprime_axis(self) -> np.ndarray:
        return -self.L_doubleprime + self.h_doubleprime * np.arange(self.N_doubleprime)

    def xi_axis(self) -> np.ndarray:
        n = self.N_doubleprime
        return self.dxi * np.arange(-n // 2, n // 2)

    @property
    def xi_zero_index(self) -> int:
        return self.N_doubleprime // 2

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N_prime,) * self.d_prime + (self.N_doubleprime,) * self.d_doubleprime

    @property
    def prime_shape(self) -> tuple[int, ...]:
        return (self.N_prime,) * self.d_prime

    @property
    def xi_shape(self) -> tuple[int, ...]:
        return (self.N_doubleprime,) * self.d_doubleprime

    def multi_indices(self) -> tuple[MultiIndex, ...]:
        return multi_indices(self.d_prime, self.K)

    def mesh(self, domain: str = "x") -> np.ndarray:
        """Coordinates with shape ``self.shape + (d,)``."""
        axes = [self.x_prime_axis()] * self.d_prime
        second = self.x_doubleprime_axis() if domain == "x" else self.xi_axis()
        axes += [second] * self.d_doubleprime
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack(grids, axis=-1)

    def weights(self, domain: str = "x") -> np.ndarray:
        """Tensor quadrature weights with shape ``self.shape``."""
        w = np.ones(self.shape)
        wp = self.x_prime_weights()
        second = self.h_doubleprime if domain == "x" else self.dxi
        for j in range(self.d_prime):
            shape = [1] * len(self.shape)
            shape[j] = self.N_prime
            w = w * wp.reshape(shape)
        return w * second ** self.d_doubleprime

    def prime_weights(self) -> np.ndarray:
        w = np.ones(self.prime_shape)
        wp = self.x_prime_weights()
        for j in range(self.d_prime):
            shape = [1] * self.d_prime
            shape[j] = self.N_prime
            w = w * wp.reshape(shape)
        return w

    def dilated(self, r: float) -> "GrushinConfig":
        """Config whose grid is the image of this one under ``delta_r``."""
        return self.with_(L_prime=r * self.L_prime, L_doubleprime=r * r * self.L_doubleprime)


def _check_config(a: GrushinConfig, b: GrushinConfig) -> None:
    if a != b:
        raise ValueError("objects live on different configurations")


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples on the tensor grid.

    ``domain`` is ``"x"`` for physical samples and ``"xi"`` for the output of
    the partial Fourier transform (``x''`` axes replaced by frequencies).
    """

    config: GrushinConfig
    values: np.ndarray
    domain: str = "x"

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128)
        if vals.shape != self.config.shape:
            raise ValueError(f"values have shape {vals.shape}, expected {self.config.shape}")
        if self.domain not in ("x", "xi"):
            raise ValueError("domain must be 'x' or 'xi'")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def weights(self) -> np.ndarray:
        return self.config.weights(self.domain)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.config, values, self.domain)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        _check_config(self.config, other.config)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        _check_config(self.config, other.config)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar) -> "GridFunction":
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class DualCoefficients:
    """Discrete element of ``L^2(N^{d'} x R^{d''})``.

    Attributes
    ----------
    values : ndarray
        Shape ``(n_k,) + xi_shape``; entry ``[i, j...]`` is ``F(k_i, xi_j)``
        with ``k_i = config.multi_indices()[i]``. Entries at ``xi'' = 0`` are
        zero because that slice is stored separately.
    zero_slice : ndarray
        The ``xi'' = 0`` frequency slice, kept as an ``x'``-profile of shape
        ``(N',) * d'``.
    """

    config: GrushinConfig
    values: np.ndarray
    zero_slice: np.ndarray | None = None

    def __post_init__(self):
        cfg = self.config
        n_k = len(cfg.multi_indices())
        vals = np.array(self.values, dtype=np.complex128)
        if vals.shape != (n_k,) + cfg.xi_shape:
            raise ValueError(f"values have shape {vals.shape}, expected {(n_k,) + cfg.xi_shape}")
        zero = np.zeros(cfg.prime_shape, complex) if self.zero_slice is None else np.array(
            self.zero_slice, dtype=np.complex128
        )
        if zero.shape != cfg.prime_shape:
            raise ValueError("zero_slice has the wrong shape")
        vals[(slice(None),) + (cfg.xi_zero_index,) * cfg.d_doubleprime] = 0.0
        vals.setflags(write=False)
        zero.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "zero_slice", zero)

    @property
    def xi_grid(self) -> np.ndarray:
        return self.config.xi_axis()

    @property
    def zero_index(self) -> tuple[int, ...]:
        return (self.config.xi_zero_index,) * self.config.d_doubleprime

    def replace(self, values=None, zero_slice=None) -> "DualCoefficients":
        return DualCoefficients(
            self.config,
            self.values if values is None else values,
            self.zero_slice if zero_slice is None else zero_slice,
        )

    def __add__(self, other: "DualCoefficients") -> "DualCoefficients":
        _check_config(self.config, other.config)
        return self.replace(self.values + other.values, self.zero_slice + other.zero_slice)

    def __sub__(self, other: "DualCoefficients") -> "DualCoefficients":
        _check_config(self.config, other.config)
        return self.replace(self.values - other.values, self.zero_slice - other.zero_slice)

    def __mul__(self, scalar) -> "DualCoefficients":
        return self.replace(self.values * scalar, self.zero_slice * scalar)

    __rmul__ = __mul__

    @classmethod
    def zeros(cls, config: GrushinConfig) -> "DualCoefficients":
        return cls(config, np.zeros((len(config.multi_indices()),) + config.xi_shape))

    @classmethod
    def unit(cls, config: GrushinConfig, k, xi_index) -> "DualCoefficients":
        """A single unit entry at multi-index ``k`` and lattice index ``xi_index``."""
        idx = config.multi_indices().index(k if isinstance(k, MultiIndex) else MultiIndex(tuple(np.atleast_1d(k))))
        vals = np.zeros((len(config.multi_indices()),) + config.xi_shape, complex)
        xi_index = tuple(np.atleast_1d(xi_index))
        if xi_index == (config.xi_zero_index,) * config.d_doubleprime:
            raise ValueError("the zero frequency carries no Hermite coefficients")
        vals[(idx,) + xi_index] = 1.0
        return cls(config, vals)


def sample(config: GrushinConfig, f: Callable[[np.ndarray], np.ndarray]) -> GridFunction:
    """Sample ``f`` on the physical grid.

    ``f`` receives an array of points with shape ``config.shape + (d,)`` and
    must return values broadcastable to ``config.shape``.
    """
    pts = config.mesh("x")
    vals = np.broadcast_to(np.asarray(f(pts), dtype=np.complex128), config.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("non-finite sample encountered")
    return GridFunction(config, vals)


def l2_inner(g: GridFunction, h: GridFunction) -> complex:
    """``<g, h> = sum w g conj(h)``; linear in the first slot."""
    _check_config(g.config, h.config)
    if g.domain != h.domain:
        raise ValueError("cannot pair functions on different domains")
    return complex(np.sum(g.weights * g.values * np.conj(h.values)))


def l2_norm(g: GridFunction) -> float:
    return math.sqrt(max(l2_inner(g, g).real, 0.0))


def dual_inner(F: DualCoefficients, G: DualCoefficients) -> complex:
    """Counting measure in ``k`` times the frequency-lattice weight in ``xi''``."""
    _check_config(F.config, G.config)
    cfg = F.config
    wxi = cfg.dxi ** cfg.d_doubleprime
    main = np.sum(F.values * np.conj(G.values))
    zero = np.sum(cfg.prime_weights() * F.zero_slice * np.conj(G.zero_slice))
    return complex(wxi * (main + zero))


def dual_norm(F: DualCoefficients) -> float:
    return math.sqrt(max(dual_inner(F, F).real, 0.0))


# -- grid-preserving symmetries -------------------------------------------------

def _flip_index(n: int, periodic: bool) -> np.ndarray:
    i = np.arange(n)
    return (n - i) % n if periodic else n - 1 - i


def rotate(g: GridFunction, perm_prime=None, flip_prime=None, perm_dd=None, flip_dd=None) -> GridFunction:
    """Apply ``T_g f = f(g x)`` for a hyperoctahedral ``g`` in ``O(d') x O(d'')``.

    ``perm_*`` are axis permutations and ``flip_*`` boolean sign flips of the
    respective factors. Reflections map the grids onto themselves exactly.
    """
    cfg = g.config
    dp, dd = cfg.d_prime, cfg.d_doubleprime
    perm_prime = list(range(dp)) if perm_prime is None else list(perm_prime)
    perm_dd = list(range(dd)) if perm_dd is None else list(perm_dd)
    flip_prime = [False] * dp if flip_prime is None else list(flip_prime)
    flip_dd = [False] * dd if flip_dd is None else list(flip_dd)
    if sorted(perm_prime) != list(range(dp)) or sorted(perm_dd) != list(range(dd)):
        raise ValueError("invalid axis permutation")
    # (g x)_j = s_j x_{perm_j}, so the new array reads axis perm_j of the old one
    vals = np.transpose(g.values, perm_prime + [dp + p for p in perm_dd])
    for j, flip in enumerate(flip_prime):
        if flip:
            vals = np.take(vals, _flip_index(cfg.N_prime, False), axis=j)
    for j, flip in enumerate(flip_dd):
        if flip:
            # x'' grid and xi'' lattice both reflect as n -> (N - n) mod N
            vals = np.take(vals, _flip_index(cfg.N_doubleprime, True), axis=dp + j)
    return g.with_values(vals)


def dilate(g: GridFunction, r: float) -> GridFunction:
    """Represent ``rho_r f = f(delta_r x)`` on the dilated grid.

    With ``delta_r(x', x'') = (r x', r^2 x'')`` the grid of ``config.dilated(1/r)``
    is mapped onto the grid of ``config``, so ``rho_r f`` is sampled exactly by
    reusing the values on the smaller box.
    """
    return GridFunction(g.config.dilated(1.0 / r), g.values, g.domain)
