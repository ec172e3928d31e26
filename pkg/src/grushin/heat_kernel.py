"""The Grushin heat kernel ``p_t(x, y)`` and identities it satisfies.

Three evaluators are provided:

* :func:`kernel_fourier_form` integrates
  ``(2 pi t)^{-D/2} int e^{i (x''-y'').xi/t} Psi(xi) dxi`` with
  ``Psi(xi) = exp(-|xi|/(4t) (|x'+y'|^2 tanh|xi| + |x'-y'|^2 coth|xi|)) (|xi|/sinh 2|xi|)^{d'/2}``;
* :func:`kernel_hankel_form` reduces the same integral to a radial
  Bessel integral;
* :func:`kernel_t_inside` integrates the fiber kernel with ``t`` kept inside the
  hyperbolic arguments.

The single-query evaluators use composite Gauss-Legendre panels with a
refinement check. The grid evaluator :func:`kernel_on_grid` serves batch
identities (kernel vs semigroup, Chapman-Kolmogorov, L2 norms) with a
trapezoid rule in ``xi''``, which is spectrally accurate for this analytic,
rapidly decaying integrand.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .calculus import heat_semigroup
from .grids import GridFunction
from .quadrature import (
    NonConvergenceError,
    composite_gauss_legendre,
    log_sphere_area,
    log_tau_over_sinh,
    radial_cutoff,
)
from .special import bessel_j_ratio

SMALL_T = 1e-3


class KernelWarning(UserWarning):
    """Evaluation outside the range where quadrature is warranted."""


@dataclass(frozen=True)
class HeatKernelQuery:
    """A request for ``p_t(x, y)``.

    Parameters
    ----------
    t : float
        Time, ``t > 0``.
    x, y : array_like
        Points of ``R^{d'} x R^{d''}`` (first ``d'`` entries are ``x'``).
    d_prime : int
        Dimension of the ``x'`` factor.
    method : {"fourier", "hankel"}
    R : float, optional
        Radial cutoff in ``|xi''|``; by default the root of
        ``(R/sinh 2R)^{d'/2} |S^{d''-1}| R^{d''-1} = 1e-16``.
    order : int
        Gauss-Legendre points per panel.
    panel_width : float, optional
        Extra upper bound on the panel width.
    tol : float
        Relative tolerance of the panel-doubling check.
    lattice : bool
        For ``d'' >= 2`` with ``method="fourier"``: integrate on a full
        ``xi''`` lattice instead of delegating to the Hankel form.
    """

    t: float
    x: tuple
    y: tuple
    d_prime: int = 1
    method: str = "fourier"
    R: float | None = None
    order: int = 10
    panel_width: float | None = None
    tol: float = 1e-12
    lattice: bool = False

    def __post_init__(self):
        x = tuple(float(v) for v in np.atleast_1d(self.x))
        y = tuple(float(v) for v in np.atleast_1d(self.y))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if not (self.t > 0 and math.isfinite(self.t)):
            raise ValueError(f"t must be positive and finite, got {self.t}")
        if len(x) != len(y):
            raise ValueError("x and y must have the same dimension")
        if not 1 <= self.d_prime < len(x):
            raise ValueError("need 1 <= d_prime < dim(x)")
        if self.method not in ("fourier", "hankel"):
            raise ValueError(f"unknown method {self.method!r}")
        if not all(math.isfinite(v) for v in x + y):
            raise ValueError("points must be finite")

    @property
    def d_doubleprime(self) -> int:
        return len(self.x) - self.d_prime

    @property
    def D(self) -> int:
        return self.d_prime + 2 * self.d_doubleprime

    @property
    def cutoff(self) -> float:
        return self.R if self.R is not None else radial_cutoff(self.d_prime, self.d_doubleprime)

    def split(self):
        dp = self.d_prime
        x, y = np.array(self.x), np.array(self.y)
        return x[:dp], x[dp:], y[:dp], y[dp:]

    def replace(self, **changes) -> "HeatKernelQuery":
        data = {f: getattr(self, f) for f in self.__dataclass_fields__}
        data.update(changes)
        return HeatKernelQuery(**data)


@dataclass
class KernelValue:
    """Result of a single kernel evaluation with its diagnostics."""

    value: float
    method: str
    refinement_error: float
    imag_residual: float = 0.0
    nodes: int = 0
    diagnostics: list = field(default_factory=list)


# -- building blocks ------------------------------------------------------------

def _coefficients(t, xp, yp):
    a = float(np.sum((xp + yp) ** 2)) / (4.0 * t)
    b = float(np.sum((xp - yp) ** 2)) / (4.0 * t)
    return a, b


def _profile_parts(tau, d_prime):
    """``log(tau/sinh 2tau)^{d'/2}``, ``tau tanh tau`` and ``tau coth tau``."""
    tau = np.asarray(tau, dtype=float)
    logp = 0.5 * d_prime * log_tau_over_sinh(tau)
    T = tau * np.tanh(tau)
    with np.errstate(divide="ignore", invalid="ignore"):
        C = np.where(tau > 0, tau / np.tanh(np.where(tau > 0, tau, 1.0)), 1.0)
    return logp, T, C


def _panel_width(q: HeatKernelQuery, a: float, b: float, delta: float) -> float:
    width = 1.0
    if delta > 0:
        width = min(width, math.pi / (4.0 * delta))
    spread = a + b / 3.0
    if spread > 1.0:
        width = min(width, 1.0 / math.sqrt(spread))
    if q.panel_width is not None:
        width = min(width, q.panel_width)
    return width


def _diagnose(q: HeatKernelQuery) -> list[str]:
    notes = []
    if q.t < SMALL_T:
        msg = f"t={q.t:g} is below {SMALL_T:g}: the kernel concentrates and quadrature is out of warranty"
        warnings.warn(msg, KernelWarning, stacklevel=3)
        notes.append(msg)
    return notes


def _radial_integral(q: HeatKernelQuery, n_panels: int, R: float, a: float, b: float,
                     delta: float, kind: str) -> tuple[float, float]:
    """Radial sum and its absolute-value scale on ``n_panels`` GL panels."""
    kern = _backend.kernels()
    tau, w = composite_gauss_legendre(0.0, R, n_panels, q.order)
    logp, T, C = _profile_parts(tau, q.d_prime)
    dd = q.d_doubleprime
    logw = np.log(w) + logp + (dd - 1) * np.log(tau)
    A, B = np.array([a]), np.array([b])
    scale = float(kern.fiber_cos_sum(logw, T, C, tau, A, B, np.zeros(1))[0])
    if kind == "cos":
        val = float(kern.fiber_cos_sum(logw, T, C, tau, A, B, np.array([delta]))[0])
    else:
        val = float(kern.fiber_bessel_sum(logw, T, C, tau, A, B, np.array([delta]), 0.5 * (dd - 2))[0])
    return val, scale


def _refined(evaluate, n_panels: int, tol: float, what: str):
    coarse, _ = evaluate(n_panels)
    fine, scale = evaluate(2 * n_panels)
    err = abs(fine - coarse)
    if err > tol * abs(fine) + 64 * np.finfo(float).eps * abs(scale):
        raise NonConvergenceError(
            f"{what}: panel doubling changed the value by {err:.3e} (value {fine:.6e})"
        )
    return fine, err


# -- closed-form fiber kernel ----------------------------------------------------

def fiber_kernel(t: float, x_prime, y_prime, xi) -> float:
    """``T_{t,x',xi''}(y')``, the kernel of ``exp(-t(-Delta' + |xi''|^2 |x'|^2))``.

    ``(|xi|/(2 pi sinh 2t|xi|))^{d'/2} exp(-|xi|/4 (|x'+y'|^2 tanh t|xi| + |x'-y'|^2 coth t|xi|))``.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    s = float(np.linalg.norm(np.atleast_1d(np.asarray(xi, dtype=float))))
    if s == 0.0:
        raise ValueError("fiber kernel needs a nonzero frequency")
    xp = np.atleast_1d(np.asarray(x_prime, dtype=float))
    yp = np.atleast_1d(np.asarray(y_prime, dtype=float))
    d = xp.shape[0]
    plus = float(np.sum((xp + yp) ** 2))
    minus = float(np.sum((xp - yp) ** 2))
    u = t * s
    logpre = 0.5 * d * (float(log_tau_over_sinh(np.array(u))) - math.log(t) - math.log(2 * math.pi))
    return math.exp(logpre - 0.25 * s * (plus * math.tanh(u) + minus / math.tanh(u)))


# -- single-query evaluators ---------------------------------------------------

def kernel_hankel_form(q: HeatKernelQuery) -> float:
    """``p_t(x, y)`` from the radial Bessel representation."""
    return evaluate_hankel(q).value


def evaluate_hankel(q: HeatKernelQuery) -> KernelValue:
    notes = _diagnose(q)
    xp, xpp, yp, ypp = q.split()
    a, b = _coefficients(q.t, xp, yp)
    delta = float(np.linalg.norm(xpp - ypp)) / q.t
    R = q.cutoff
    width = _panel_width(q, a, b, delta)
    n = max(1, math.ceil(R / width))
    dd = q.d_doubleprime
    pre = (2 * math.pi) ** (dd / 2) * (2 * math.pi * q.t) ** (-q.D / 2)
    val, err = _refined(lambda m: _radial_integral(q, m, R, a, b, delta, "bessel"), n, q.tol, "hankel form")
    return KernelValue(pre * val, "hankel", pre * err, 0.0, 2 * n * q.order, notes)


def kernel_fourier_form(q: HeatKernelQuery) -> float:
    """``p_t(x, y)`` from the Fourier-form integral over ``xi''``."""
    return evaluate_fourier(q).value


def evaluate_fourier(q: HeatKernelQuery) -> KernelValue:
    if q.d_doubleprime >= 2 and not q.lattice:
        out = evaluate_hankel(q)
        out.method = "fourier->hankel"
        return out
    notes = _diagnose(q)
    xp, xpp, yp, ypp = q.split()
    a, b = _coefficients(q.t, xp, yp)
    delta_vec = (xpp - ypp) / q.t
    delta = float(np.linalg.norm(delta_vec))
    R = q.cutoff
    width = _panel_width(q, a, b, delta)
    n = max(1, math.ceil(R / width))
    pre = (2 * math.pi * q.t) ** (-q.D / 2)
    dd = q.d_doubleprime
    if dd == 1:
        val, err = _refined(lambda m: _radial_integral(q, m, R, a, b, delta, "cos"), n, q.tol, "fourier form")
        val, err = 2 * val, 2 * err
        imag = _imag_residual_1d(q, n, R, a, b, delta)
    elif dd in (2, 3):
        val, err, imag = _lattice(q, n, R, a, b, delta_vec)
    else:
        raise NotImplementedError("the Fourier lattice covers d'' <= 3; use the Hankel form")
    value = pre * val
    imag = pre * imag
    if abs(imag) > 1e-12 * abs(value) + 1e-300:
        notes.append(f"imaginary residual {imag:.2e} exceeds 1e-12 relative")
    return KernelValue(value, "fourier", pre * err, abs(imag), 2 * n * q.order, notes)


def _imag_residual_1d(q, n, R, a, b, delta):
    tau, w = composite_gauss_legendre(-R, R, 2 * n, q.order)
    logp, T, C = _profile_parts(np.abs(tau), q.d_prime)
    g = w * np.exp(logp - a * T - b * C)
    return float(np.sum(g * np.sin(delta * tau)))


def _lattice(q, n, R, a, b, delta_vec):
    """Full ``xi''`` lattice: polar for ``d'' = 2``, cylindrical for ``d'' = 3``.

    No Bessel function is involved; the angular (``d''=2``) or axial
    (``d''=3``) direction carries the oscillation explicitly.
    """
    dd = q.d_doubleprime
    dn = float(np.linalg.norm(delta_vec))
    smooth = _panel_width(q.replace(panel_width=None), a, b, 0.0)
    if q.panel_width is not None:
        smooth = min(smooth, q.panel_width)
    n_smooth = max(1, math.ceil(R / smooth))

    def run(m, m_smooth):
        re = im = sc = 0.0
        if dd == 2:
            rho, wr = composite_gauss_legendre(0.0, R, m, q.order)
            n_phi = 2 * (int(dn * R) + 40)
            phi = 2 * math.pi * np.arange(n_phi) / n_phi
            phi0 = math.atan2(delta_vec[1], delta_vec[0]) if dn > 0 else 0.0
            cosang = np.cos(phi - phi0)
            logp, T, C = _profile_parts(rho, q.d_prime)
            g = wr * rho * np.exp(logp - a * T - b * C) * (2 * math.pi / n_phi)
            for i in range(0, rho.size, 512):
                ph = dn * np.outer(rho[i:i + 512], cosang)
                gi = g[i:i + 512, None]
                re += float(np.sum(gi * np.cos(ph)))
                im += float(np.sum(gi * np.sin(ph)))
                sc += float(np.sum(gi)) * n_phi
            return re, im, sc
        u, wu = composite_gauss_legendre(-R, R, 2 * m, q.order)
        r, wr = composite_gauss_legendre(0.0, R, m_smooth, q.order)
        wrr = 2 * math.pi * r * wr
        for i in range(0, u.size, 512):
            ui = u[i:i + 512, None]
            rho = np.hypot(ui, r[None, :])
            logp, T, C = _profile_parts(rho, q.d_prime)
            g = wu[i:i + 512, None] * wrr[None, :] * np.exp(logp - a * T - b * C)
            re += float(np.sum(g * np.cos(dn * ui)))
            im += float(np.sum(g * np.sin(dn * ui)))
            sc += float(np.sum(g))
        return re, im, sc

    c_re, _, _ = run(n, n_smooth)
    f_re, f_im, scale = run(2 * n, 2 * n_smooth)
    err = abs(f_re - c_re)
    if err > q.tol * abs(f_re) + 64 * np.finfo(float).eps * scale:
        raise NonConvergenceError(f"fourier lattice: panel doubling changed the value by {err:.3e}")
    return f_re, err, f_im


def kernel_t_inside(q: HeatKernelQuery) -> float:
    """``p_t`` as ``(2 pi)^{-d''} int e^{i (x''-y'').xi} T_{t,x',xi}(y') dxi``.

    Uses its own radial nodes in the unscaled variable, so agreement with
    :func:`kernel_fourier_form` tests the change of variables ``t xi -> xi``.
    """
    _diagnose(q)
    xp, xpp, yp, ypp = q.split()
    t = q.t
    a, b = _coefficients(t, xp, yp)
    dist = float(np.linalg.norm(xpp - ypp))
    R = q.cutoff / t
    width = 0.7 / t
    if dist > 0:
        width = min(width, math.pi / (4.0 * dist))
    spread = a + b / 3.0
    if spread > 1.0:
        width = min(width, 1.0 / (t * math.sqrt(spread)))
    n = max(1, math.ceil(R / width))
    dp, dd = q.d_prime, q.d_doubleprime
    kern = _backend.kernels()

    def run(m):
        rho, w = composite_gauss_legendre(0.0, R, m, q.order)
        u = t * rho
        logp = 0.5 * dp * (log_tau_over_sinh(rho, 2 * t) - math.log(2 * math.pi))
        T = u * np.tanh(u)
        C = u / np.tanh(u)
        logw = np.log(w) + logp + (dd - 1) * np.log(rho)
        A, B = np.array([a]), np.array([b])
        scale = float(kern.fiber_cos_sum(logw, T, C, rho, A, B, np.zeros(1))[0])
        if dd == 1:
            return 2 * float(kern.fiber_cos_sum(logw, T, C, rho, A, B, np.array([dist]))[0]), 2 * scale
        val = float(kern.fiber_bessel_sum(logw, T, C, rho, A, B, np.array([dist]), 0.5 * (dd - 2))[0])
        return (2 * math.pi) ** (dd / 2) * val, scale

    val, _ = _refined(run, n, q.tol, "t-inside form")
    return (2 * math.pi) ** (-dd) * val


def heat_kernel(q: HeatKernelQuery) -> float:
    """Dispatch on ``q.method``."""
    return kernel_fourier_form(q) if q.method == "fourier" else kernel_hankel_form(q)


# -- grid evaluation -------------------------------------------------------------

def kernel_on_grid(t: float, x, y_prime_pts, y_doubleprime_pts, d_prime: int = 1,
                   R: float | None = None) -> np.ndarray:
    """``p_t(x, (y'_i, y''_j))`` for all pairs; returns shape ``(Q', Q'')``.

    ``y_prime_pts`` has shape ``(Q', d')`` and ``y_doubleprime_pts`` shape
    ``(Q'', d'')``. For ``d'' = 1`` the ``xi''`` integral is a trapezoid sum
    over the whole line whose step resolves both the oscillation
    ``|x''-y''|/t`` and the narrowest Gaussian factor; the result is a
    single matrix product. For ``d'' >= 2`` the Hankel integrand is summed on
    Gauss-Legendre panels.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    x = np.asarray(x, dtype=float)
    yp = np.atleast_2d(np.asarray(y_prime_pts, dtype=float))
    ypp = np.atleast_2d(np.asarray(y_doubleprime_pts, dtype=float))
    dp = d_prime
    dd = ypp.shape[1]
    if yp.shape[1] != dp or x.shape[0] != dp + dd:
        raise ValueError("point dimensions do not match d_prime")
    if t < SMALL_T:
        warnings.warn(f"t={t:g} below {SMALL_T:g}: out of warranty", KernelWarning, stacklevel=2)
    xp, xpp = x[:dp], x[dp:]
    a = np.sum((xp[None] + yp) ** 2, axis=1) / (4 * t)
    b = np.sum((xp[None] - yp) ** 2, axis=1) / (4 * t)
    dist = np.linalg.norm(xpp[None] - ypp, axis=1) / t
    R = radial_cutoff(dp, dd) if R is None else R
    D = dp + 2 * dd
    pre = (2 * math.pi * t) ** (-D / 2)
    spread = float(np.max(a + b / 3.0))
    if dd == 1:
        h = 2 * math.pi / (float(dist.max()) + 25.0 + math.sqrt(156.0 * spread))
        tau = h * np.arange(0, math.ceil(R / h) + 1)
        w = np.full(tau.shape, 2 * h)
        w[0] = h
        logp, T, C = _profile_parts(tau, dp)
        profile = np.exp(np.log(w)[None] + logp[None] - a[:, None] * T[None] - b[:, None] * C[None])
        osc = np.cos(np.outer(tau, dist))
        return pre * (profile @ osc)
    width = min(1.0, math.pi / (4 * max(float(dist.max()), 1e-300)), 1.0 / math.sqrt(max(spread, 1.0)))
    tau, w = composite_gauss_legendre(0.0, R, max(1, math.ceil(R / width)), 10)
    logp, T, C = _profile_parts(tau, dp)
    logw = np.log(w) + logp + (dd - 1) * np.log(tau)
    profile = np.exp(logw[None] - a[:, None] * T[None] - b[:, None] * C[None])
    alpha = 0.5 * (dd - 2)
    bess = bessel_j_ratio(alpha, np.outer(tau, dist).ravel()).reshape(tau.size, dist.size)
    return (2 * math.pi) ** (dd / 2) * pre * (profile @ bess)


# -- identities --------------------------------------------------------------------

@dataclass
class SemigroupComparison:
    """Kernel integral vs spectral semigroup on a sample of grid points."""

    relative_l2: float
    max_abs: float
    points: np.ndarray
    kernel_values: np.ndarray
    semigroup_values: np.ndarray


def kernel_vs_semigroup(f: GridFunction, t: float, n_points: int = 12,
                        rng: np.random.Generator | None = None, indices=None) -> SemigroupComparison:
    """Compare ``int p_t(x, y) f(y) dy`` with ``exp(-t G) f`` at sampled grid points.

    Only ``d'' = 1`` grids are supported for the kernel side; points are
    drawn from the central half of the grid so the kernel integral stays
    inside the box.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    cfg = f.config
    if cfg.d_doubleprime != 1:
        raise NotImplementedError("kernel_vs_semigroup supports d'' = 1")
    semi = heat_semigroup(f, t).values
    mesh = cfg.mesh("x")
    if indices is None:
        rng = np.random.default_rng(0) if rng is None else rng
        lo_p, hi_p = cfg.N_prime // 4, 3 * cfg.N_prime // 4
        lo_d, hi_d = cfg.N_doubleprime // 4, 3 * cfg.N_doubleprime // 4
        indices = [
            tuple(int(v) for v in rng.integers(lo_p, hi_p, cfg.d_prime))
            + (int(rng.integers(lo_d, hi_d)),)
            for _ in range(n_points)
        ]
    # y grid as (Q', d') x (Q'',) with weights
    xp_axis = cfg.x_prime_axis()
    yp = np.stack(np.meshgrid(*([xp_axis] * cfg.d_prime), indexing="ij"), -1).reshape(-1, cfg.d_prime)
    ypp = cfg.x_doubleprime_axis()[:, None]
    w = cfg.weights("x").reshape(yp.shape[0], -1)
    fv = f.values.reshape(yp.shape[0], -1)
    kern_vals, semi_vals, pts = [], [], []
    for idx in indices:
        x = mesh[idx]
        P = kernel_on_grid(t, x, yp, ypp, cfg.d_prime)
        kern_vals.append(np.sum(P * w * fv))
        semi_vals.append(semi[idx])
        pts.append(x)
    kv, sv = np.array(kern_vals), np.array(semi_vals)
    denom = np.linalg.norm(sv)
    rel = float(np.linalg.norm(kv - sv) / denom) if denom > 0 else float(np.linalg.norm(kv - sv))
    return SemigroupComparison(rel, float(np.max(np.abs(kv - sv))), np.array(pts), kv, sv)


class _FixedRule:
    """Radial nodes frozen at a base query so nearby evaluations share them."""

    def __init__(self, q: HeatKernelQuery, refine: int = 2):
        self.q = q
        xp, xpp, yp, ypp = q.split()
        a, b = _coefficients(q.t, xp, yp)
        delta = float(np.linalg.norm(xpp - ypp)) / q.t
        # widen the envelope slightly since stencil points move t and x
        width = _panel_width(q, 1.2 * a + 1.0, 1.2 * b + 1.0, 1.2 * delta + 1.0)
        n = refine * max(1, math.ceil(q.cutoff / width))
        self.tau, w = composite_gauss_legendre(0.0, q.cutoff, n, q.order)
        self.logp, self.T, self.C = _profile_parts(self.tau, q.d_prime)
        dd = q.d_doubleprime
        self.logw = np.log(w) + self.logp + (dd - 1) * np.log(self.tau)

    def __call__(self, t, x, y, prefactor_shift: float = 0.0) -> float:
        q = self.q
        dp, dd = q.d_prime, q.d_doubleprime
        x, y = np.asarray(x, float), np.asarray(y, float)
        a, b = _coefficients(t, x[:dp], y[:dp])
        delta = float(np.linalg.norm(x[dp:] - y[dp:])) / t
        g = np.exp(self.logw - a * self.T - b * self.C)
        if dd == 1:
            val = 2 * float(np.sum(g * np.cos(delta * self.tau)))
        else:
            ratio = bessel_j_ratio(0.5 * (dd - 2), delta * self.tau)
            val = (2 * math.pi) ** (dd / 2) * float(np.sum(g * ratio))
        return (2 * math.pi * (t + prefactor_shift)) ** (-q.D / 2) * val


def heat_equation_residual(t: float, x, y, h: float, d_prime: int = 1,
                           prefactor_shift: float = 0.0, rule: _FixedRule | None = None) -> float:
    """``|(d/dt + G_x) p_t(x, y)|`` by centred differences of step ``h`` in ``t`` and ``x``.

    All stencil evaluations share one set of quadrature nodes, so the result
    measures the finite-difference truncation error (order ``h^2``).
    ``prefactor_shift`` replaces ``t`` by ``t + shift`` in the normalising
    factor only; a nonzero shift gives a kernel that violates the equation.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    if not (t > 0 and h > 0):
        raise ValueError("need t > 0 and h > 0")
    if h > 0.5 * t:
        raise ValueError(f"step h={h} too large relative to t={t}")
    rule = rule or _FixedRule(HeatKernelQuery(t, x, y, d_prime))
    p = lambda tt, xx: rule(tt, xx, y, prefactor_shift)  # noqa: E731
    dt = (p(t + h, x) - p(t - h, x)) / (2 * h)
    centre = p(t, x)
    lap_p = lap_pp = 0.0
    for j in range(x.shape[0]):
        e = np.zeros_like(x)
        e[j] = h
        second = (p(t, x + e) - 2 * centre + p(t, x - e)) / (h * h)
        if j < d_prime:
            lap_p += second
        else:
            lap_pp += second
    r2 = float(np.sum(x[:d_prime] ** 2))
    return abs(dt - lap_p - r2 * lap_pp)


@dataclass
class L2NormReport:
    direct: float
    plancherel: float

    @property
    def relative_gap(self) -> float:
        return abs(self.direct - self.plancherel) / abs(self.plancherel)


def kernel_l2_norm_plancherel(t: float, x, d_prime: int = 1) -> float:
    """``int |p_t(x, y)|^2 dy`` through Plancherel in ``y''`` and a Gaussian integral in ``y'``.

    Equals ``(2 pi t)^{-d} (pi t)^{d'/2} int (2|xi|/sinh 4|xi|)^{d'/2}
    exp(-|xi| |x'|^2 tanh(2|xi|) / t) dxi``.
    """
    x = np.asarray(x, float)
    dd = x.shape[0] - d_prime
    r2 = float(np.sum(x[:d_prime] ** 2))
    R = 0.5 * radial_cutoff(d_prime, dd)
    tau, w = composite_gauss_legendre(0.0, R, max(40, math.ceil(4 * R * (1 + math.sqrt(r2 / t)))), 10)
    logf = 0.5 * d_prime * (math.log(2.0) + log_tau_over_sinh(tau, 4.0)) - tau * r2 * np.tanh(2 * tau) / t
    logf = logf + (dd - 1) * np.log(tau) + log_sphere_area(dd)
    radial = float(np.sum(w * np.exp(logf)))
    d = d_prime + dd
    return (2 * math.pi * t) ** (-d) * (math.pi * t) ** (0.5 * d_prime) * radial


def kernel_l2_norm_direct(t: float, x, d_prime: int = 1, resolution: float = 1.0) -> float:
    """``int |p_t(x, y)|^2 dy`` by trapezoid quadrature over a ``y`` box (``d'' = 1``)."""
    x = np.asarray(x, float)
    if x.shape[0] - d_prime != 1:
        raise NotImplementedError("direct route supports d'' = 1")
    xp, xpp = x[:d_prime], x[d_prime:]
    st = math.sqrt(t)
    half_p = math.sqrt(90 * t) + 1.0
    n_p = int(math.ceil(2 * half_p / (0.3 * min(st, 1.0)) * resolution)) + 1
    axis = np.linspace(-half_p, half_p, n_p)
    hp = axis[1] - axis[0]
    grids = np.meshgrid(*([axis] * d_prime), indexing="ij")
    yp = np.stack(grids, -1).reshape(-1, d_prime) + xp[None]
    wp = np.full(n_p, hp)
    wp[[0, -1]] *= 0.5
    wyp = np.ones(1)
    for _ in range(d_prime):
        wyp = np.outer(wyp, wp).ravel()
    half_pp = 14 * t + 2.0 + 2.0 * float(np.sqrt(np.sum(xp ** 2))) * st
    hpp = min(t / 6.0, 0.25) / resolution
    n_pp = int(math.ceil(2 * half_pp / hpp)) + 1
    ypp = (xpp[0] + np.linspace(-half_pp, half_pp, n_pp))[:, None]
    wpp = np.full(n_pp, ypp[1, 0] - ypp[0, 0])
    wpp[[0, -1]] *= 0.5
    P = kernel_on_grid(t, x, yp, ypp, d_prime)
    return float(np.sum(wyp[:, None] * wpp[None, :] * P * P))


def kernel_l2_norm(t: float, x, d_prime: int = 1, rtol: float = 1e-6) -> L2NormReport:
    """Both computations of ``||p_t(x, .)||^2``; raises if they disagree beyond ``rtol``."""
    report = L2NormReport(kernel_l2_norm_direct(t, x, d_prime), kernel_l2_norm_plancherel(t, x, d_prime))
    if not math.isfinite(report.direct) or report.relative_gap > rtol:
        raise NonConvergenceError(
            f"L2 norm routes disagree: direct {report.direct:.10e} vs plancherel {report.plancherel:.10e}"
        )
    return report


def chapman_kolmogorov(t: float, s: float, x, y, d_prime: int = 1, resolution: float = 1.0) -> tuple[float, float]:
    """Return ``(int p_t(x,z) p_s(z,y) dz, p_{t+s}(x,y))`` for ``d'' = 1``."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if x.shape[0] - d_prime != 1:
        raise NotImplementedError("chapman_kolmogorov supports d'' = 1")
    tm = max(t, s)
    centre = 0.5 * (x + y)
    span_p = float(np.max(np.abs(x[:d_prime] - y[:d_prime])))
    half_p = math.sqrt(90 * tm) + 1.0 + span_p
    n_p = int(math.ceil(2 * half_p / (0.3 * min(math.sqrt(min(t, s)), 1.0)) * resolution)) + 1
    axis = np.linspace(-half_p, half_p, n_p)
    grids = np.meshgrid(*([axis] * d_prime), indexing="ij")
    zp = np.stack(grids, -1).reshape(-1, d_prime) + centre[:d_prime][None]
    wp = np.full(n_p, axis[1] - axis[0])
    wp[[0, -1]] *= 0.5
    wz = np.ones(1)
    for _ in range(d_prime):
        wz = np.outer(wz, wp).ravel()
    rmax = float(np.max(np.abs(zp)))
    half_pp = 14 * tm + 2.0 + 2.0 * rmax * math.sqrt(tm) + abs(x[-1] - y[-1])
    hpp = min(min(t, s) / 6.0, 0.25) / resolution
    n_pp = int(math.ceil(2 * half_pp / hpp)) + 1
    zpp = (centre[-1] + np.linspace(-half_pp, half_pp, n_pp))[:, None]
    wpp = np.full(n_pp, zpp[1, 0] - zpp[0, 0])
    wpp[[0, -1]] *= 0.5
    left = kernel_on_grid(t, x, zp, zpp, d_prime)
    right = kernel_on_grid(s, y, zp, zpp, d_prime)
    integral = float(np.sum(wz[:, None] * wpp[None, :] * left * right))
    direct = kernel_fourier_form(HeatKernelQuery(t + s, x, y, d_prime))
    return integral, direct
