"""Numerical checks of the identities the library is built on.

Every check returns a :class:`CheckResult` with the measured error, the
tolerance and a verdict. :func:`run_verification` runs a selection and
produces a report; the CLI ``verify`` command and the acceptance tests both
call into this module, so the numbers they print are the same.

Random inputs come from ``numpy.random.default_rng([seed, crc32(name)])``,
so each check is reproducible on its own and independent of execution order.
"""
from __future__ import annotations

import json
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .calculus import (
    SpectralSymbol,
    functional_calculus,
    grushin_fd,
    heat_semigroup,
    sample_psi,
    apply_symbol,
)
from .grids import GridFunction, GrushinConfig, dilate, dual_inner, dual_norm, l2_inner, l2_norm, rotate
from .heat_kernel import (
    HeatKernelQuery,
    _FixedRule,
    chapman_kolmogorov,
    evaluate_fourier,
    fiber_kernel,
    heat_equation_residual,
    kernel_fourier_form,
    kernel_hankel_form,
    kernel_l2_norm_direct,
    kernel_l2_norm_plancherel,
    kernel_t_inside,
    kernel_vs_semigroup,
)
from .quadrature import composite_gauss_legendre
from .special import (
    bessel_j,
    hermite_heat_kernel_closed,
    hermite_scaled,
    hermite_table,
    hyperbolic_form_half,
    hyperbolic_form_sech,
    mehler_series,
)
from . import _pykernels
from .testfunctions import bandlimited, bump, gaussian
from .transforms import get_plan

GROUPS = ("special", "transform", "calculus", "heat")


@dataclass
class CheckResult:
    name: str
    group: str
    identity: str
    measured: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0


def _result(name, group, identity, measured, tolerance, detail=None, passed=None):
    ok = bool(measured <= tolerance) if passed is None else bool(passed)
    return CheckResult(name, group, identity, float(measured), float(tolerance), ok, detail or {})


def rng_for(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(name.encode())])


def fitted_orders(errors, steps) -> list[float]:
    """Observed orders between successive refinement levels."""
    return [math.log(errors[i] / errors[i + 1]) / math.log(steps[i] / steps[i + 1])
            for i in range(len(errors) - 1)]


# -- special functions ----------------------------------------------------------

def check_hermite_orthonormality(seed=0, tol=1e-8):
    u, w = composite_gauss_legendre(-30.0, 30.0, 300, 10)
    H = hermite_table(40, u)
    err = float(np.max(np.abs((H * w) @ H.T - np.eye(41))))
    return _result("hermite_orthonormality", "special", "orthonormal Hermite functions", err, tol)


def check_hermite_growth(seed=0, tol=0.0):
    u, w = composite_gauss_legendre(-25.0, 25.0, 400, 10)
    H = hermite_table(100, u)
    sup = float(np.max(np.abs(H)))
    bound = math.pi ** -0.25
    k = np.arange(10, 101)
    band = (np.abs(H[10:]) @ w) * k ** -0.25
    spread = float(band.max() / band.min())
    ok = sup <= bound * (1 + 1e-12) and spread < 1.2
    return _result("hermite_growth", "special", "uniform and L1 growth of Hermite functions",
                   max(sup - bound, 0.0), tol, {"sup": sup, "bound": bound, "l1_band": [float(band.min()), float(band.max())]},
                   passed=ok)


def check_scaled_eigen_relation(seed=0, tol=0.3):
    rng = rng_for(seed, "scaled_eigen_relation")
    worst = 0.0
    orders_all = []
    for _ in range(4):
        k = int(rng.integers(0, 15))
        tau = float(rng.uniform(0.5, 3.0))
        errs, steps = [], []
        for n in (801, 1601, 3201):
            x = np.linspace(-15, 15, n)
            h = x[1] - x[0]
            v = hermite_scaled(k, tau, x[:, None])
            lap = (v[2:] - 2 * v[1:-1] + v[:-2]) / h ** 2
            res = -lap + tau ** 2 * x[1:-1] ** 2 * v[1:-1] - (2 * k + 1) * tau * v[1:-1]
            errs.append(float(np.sqrt(np.sum(res ** 2) * h)))
            steps.append(h)
        orders = fitted_orders(errs, steps)
        orders_all.append(orders)
        worst = max(worst, max(abs(o - 2.0) for o in orders))
    return _result("scaled_eigen_relation", "special", "scaled Hermite eigen-relation (order 2)",
                   worst, tol, {"orders": orders_all})


def check_mehler(seed=0, tol=1e-10, K=200):
    pts = np.linspace(-2, 2, 5)
    worst = 0.0
    for t in (0.1, 0.5, 2.0):
        for a in pts:
            for b in pts:
                closed = hermite_heat_kernel_closed(t, [a], [b])
                worst = max(worst, abs(closed - mehler_series(t, [a], [b], K)))
    return _result("mehler_closed_form", "special", "Mehler formula vs spectral series",
                   worst, tol, {"terms": K})


def check_fiber_mehler(seed=0, tol=1e-10):
    rng = rng_for(seed, "fiber_mehler")
    worst = 0.0
    for _ in range(10):
        t = float(rng.uniform(0.2, 1.5))
        xi = float(rng.uniform(0.5, 3.0))
        x, y = rng.uniform(-1.5, 1.5, 2)
        closed = fiber_kernel(t, [x], [y], [xi])
        s = math.sqrt(xi)
        series = s * mehler_series(t * xi, [s * x], [s * y], 60)
        worst = max(worst, abs(closed - series))
    return _result("fiber_kernel_mehler", "special", "scaled fiber kernel vs scaled Mehler series", worst, tol)


def check_hyperbolic_identity(seed=0, tol=1e-13):
    rng = rng_for(seed, "hyperbolic_identity")
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(1, 4))
        x, y = rng.uniform(-2, 2, d), rng.uniform(-2, 2, d)
        u = float(rng.uniform(0.1, 5.0))
        lhs = hyperbolic_form_sech(u, x, y)
        worst = max(worst, abs(lhs - hyperbolic_form_half(u, x, y)) / max(1.0, abs(lhs)))
    return _result("hyperbolic_identity", "special", "hyperbolic identity for the kernel exponent", worst, tol)


def check_bessel_branches(seed=0, tol=1e-12):
    z = np.linspace(1.0, 8.0, 141)
    worst = 0.0
    for alpha in (-0.5, 0.0, 0.5, 1.0, 1.5):
        series = _pykernels._series_ratio(alpha, z) * z ** alpha
        miller = _pykernels._miller(alpha, z)
        worst = max(worst, float(np.max(np.abs(series - miller))))
    return _result("bessel_branches", "special", "Bessel series and recurrence branches agree", worst, tol)


# -- transforms ------------------------------------------------------------------

def check_plancherel_bandlimited(config, seed=0, tol=1e-9, n=50):
    rng = rng_for(seed, "plancherel_bandlimited")
    plan = get_plan(config)
    worst_f = worst_i = 0.0
    for _ in range(n):
        f, F = bandlimited(config, rng)
        worst_f = max(worst_f, abs(dual_norm(plan.forward(f)) / l2_norm(f) - 1))
        worst_i = max(worst_i, abs(l2_norm(plan.inverse(F)) / dual_norm(F) - 1))
    return _result("plancherel_bandlimited", "transform", "Plancherel identity, both directions (band-limited)",
                   max(worst_f, worst_i), tol, {"forward": worst_f, "inverse": worst_i, "samples": n})


def schwartz_samples(config):
    return [gaussian(config), gaussian(config, 1.5, 2.0, [0.5] * config.d_prime + [1.0] * config.d_doubleprime),
            bump(config, [0.3] * config.d_prime + [-1.0] * config.d_doubleprime, 0.8, 1.2)]


def check_plancherel_schwartz(config, seed=0, tol=1e-4):
    plan = get_plan(config)
    worst_f = worst_i = 0.0
    for g in schwartz_samples(config):
        G = plan.forward(g)
        worst_f = max(worst_f, abs(dual_norm(G) / l2_norm(g) - 1))
        worst_i = max(worst_i, abs(l2_norm(plan.inverse(G)) / dual_norm(G) - 1))
    return _result("plancherel_schwartz", "transform", "Plancherel identity, both directions (Schwartz)",
                   max(worst_f, worst_i), tol, {"forward": worst_f, "inverse": worst_i})


def check_inversion_bandlimited(config, seed=0, tol=1e-9, n=50):
    rng = rng_for(seed, "inversion_bandlimited")
    plan = get_plan(config)
    worst_a = worst_b = 0.0
    for _ in range(n):
        f, F = bandlimited(config, rng)
        worst_a = max(worst_a, l2_norm(plan.inverse(plan.forward(f)) - f) / l2_norm(f))
        worst_b = max(worst_b, dual_norm(plan.forward(plan.inverse(F)) - F) / dual_norm(F))
    return _result("inversion_bandlimited", "transform", "inversion formulas, both compositions (band-limited)",
                   max(worst_a, worst_b), tol, {"inverse_after_forward": worst_a, "forward_after_inverse": worst_b})


def check_inversion_schwartz(config, seed=0, tol=1e-4):
    plan = get_plan(config)
    worst_a = worst_b = 0.0
    for g in schwartz_samples(config):
        G = plan.forward(g)
        worst_a = max(worst_a, l2_norm(plan.inverse(G) - g) / l2_norm(g))
        worst_b = max(worst_b, dual_norm(plan.forward(plan.inverse(G)) - G) / dual_norm(G))
    return _result("inversion_schwartz", "transform", "inversion formulas, both compositions (Schwartz)",
                   max(worst_a, worst_b), tol, {"inverse_after_forward": worst_a, "forward_after_inverse": worst_b})


def check_transform_adjointness(config, seed=0, tol=1e-9):
    rng = rng_for(seed, "transform_adjointness")
    plan = get_plan(config)
    worst = 0.0
    for _ in range(5):
        f = GridFunction(config, rng.standard_normal(config.shape) + 1j * rng.standard_normal(config.shape))
        _, F = bandlimited(config, rng)
        lhs = dual_inner(plan.forward(f), F)
        rhs = l2_inner(f, plan.inverse(F))
        worst = max(worst, abs(lhs - rhs) / (l2_norm(f) * dual_norm(F)))
    return _result("transform_adjointness", "transform", "polarised Plancherel (forward adjoint to inverse)", worst, tol)


def check_composition_order(config, seed=0, tol=1e-12):
    plan = get_plan(config)
    worst = 0.0
    for g in schwartz_samples(config):
        A = plan.forward(g)
        worst = max(worst, dual_norm(A - plan.forward_swapped(g)) / dual_norm(A))
    return _result("composition_order", "transform", "Fourier-then-Hermite equals Hermite-then-Fourier",
                   worst, tol)


def intertwining_errors(config, sizes=(128, 256, 512), **bump_kw):
    errs, steps = [], []
    for n in sizes:
        cfg = config.with_(N_prime=n, N_doubleprime=n)
        plan = get_plan(cfg)
        phi = bump(cfg, **bump_kw)
        lhs = plan.forward(grushin_fd(phi))
        rhs = apply_symbol(plan.forward(phi), SpectralSymbol.power(1.0))
        errs.append(dual_norm(lhs - rhs) / dual_norm(rhs))
        steps.append(cfg.h_doubleprime)
    return errs, steps


def check_intertwining(config, seed=0, tol=0.3):
    rng = rng_for(seed, "intertwining")
    center = np.concatenate([rng.uniform(-1, 1, config.d_prime), rng.uniform(-2, 2, config.d_doubleprime)])
    errs, steps = intertwining_errors(config, center=center, width_prime=1.0, width_dd=1.2)
    orders = fitted_orders(errs, steps)
    return _result("intertwining", "transform", "transform intertwines the operator with Theta (order 2)",
                   max(abs(o - 2) for o in orders), tol, {"errors": errs, "orders": orders})


# -- calculus --------------------------------------------------------------------

def eigen_pairs(seed, n=10, kmax=20):
    rng = rng_for(seed, "eigenfunction_relation")
    return [(int(rng.integers(0, kmax + 1)), int(rng.integers(4, 9))) for _ in range(n)]


def eigen_orders(config, pairs, scale=1.0, sizes=(128, 256, 512)):
    out = []
    for k, m in pairs:
        errs, steps = [], []
        for n in sizes:
            cfg = config.with_(d_prime=1, d_doubleprime=1, N_prime=n, N_doubleprime=n)
            xi = m * cfg.dxi
            psi = sample_psi(cfg, k, [xi])
            lam = (2 * k + 1) * xi * scale
            errs.append(l2_norm(grushin_fd(psi) - psi * lam) / l2_norm(psi))
            steps.append(cfg.h_doubleprime)
        out.append(fitted_orders(errs, steps))
    return out


def check_eigenfunction(config, seed=0, tol=0.3, scale=1.0):
    pairs = eigen_pairs(seed)
    orders = eigen_orders(config, pairs, scale)
    worst = max(abs(o - 2) for row in orders for o in row)
    name = "eigenfunction_relation" if scale == 1.0 else "eigenfunction_off_eigenvalue"
    return _result(name, "calculus", "eigenfunction relation (order 2)", worst, tol,
                   {"pairs": pairs, "orders": orders, "eigenvalue_scale": scale})


def check_calculus_algebra(config, seed=0, tol=1e-9):
    rng = rng_for(seed, "calculus_algebra")
    plan = get_plan(config)
    f, _ = bandlimited(config, rng)
    g, _ = bandlimited(config, rng)
    nf, ng = l2_norm(f), l2_norm(g)
    heat, proj = SpectralSymbol.heat(0.3), SpectralSymbol.projection(25.0)
    out = {}
    out["contraction"] = max(0.0, l2_norm(functional_calculus(f, heat, plan)) / nf - 1.0)
    out["homomorphism"] = l2_norm(functional_calculus(f, heat * proj, plan)
                                  - functional_calculus(functional_calculus(f, proj, plan), heat, plan)) / nf
    pf = functional_calculus(f, proj, plan)
    out["idempotence"] = l2_norm(functional_calculus(pf, proj, plan) - pf) / nf
    out["self_adjointness"] = max(
        abs(l2_inner(functional_calculus(f, s, plan), g) - l2_inner(f, functional_calculus(g, s, plan))) / (nf * ng)
        for s in (heat, proj)
    )
    out["semigroup_law"] = l2_norm(heat_semigroup(heat_semigroup(f, 0.1, plan), 0.2, plan)
                                   - heat_semigroup(f, 0.3, plan)) / nf
    return _result("calculus_algebra", "calculus",
                   "functional calculus: contraction, homomorphism, projection, self-adjointness",
                   max(out.values()), tol, out)


def check_strong_continuity(config, seed=0, tol=1e-4, t=1e-6):
    rng = rng_for(seed, "strong_continuity")
    plan = get_plan(config)
    worst = 0.0
    for _ in range(5):
        f, _ = bandlimited(config, rng, kmax=4)
        worst = max(worst, l2_norm(heat_semigroup(f, t, plan) - f) / l2_norm(f))
    return _result("strong_continuity", "calculus", "semigroup tends to the identity as t -> 0", worst, tol, {"t": t})


def check_rotation_commutation(config, seed=0, tol=1e-9):
    rng = rng_for(seed, "rotation_commutation")
    worst = 0.0
    cases = [
        (config.with_(d_prime=2, d_doubleprime=1, N_prime=64, N_doubleprime=64, K=16),
         dict(perm_prime=[1, 0], flip_prime=[True, False], flip_dd=[True])),
        (config.with_(d_prime=1, d_doubleprime=2, N_prime=64, N_doubleprime=64, K=16),
         dict(perm_dd=[1, 0], flip_dd=[False, True], flip_prime=[True])),
    ]
    for cfg, g in cases:
        d = cfg.d_prime + cfg.d_doubleprime
        f = bump(cfg, rng.uniform(-1, 1, d), 0.9, 1.1)
        lhs = heat_semigroup(rotate(f, **g), 0.2)
        rhs = rotate(heat_semigroup(f, 0.2), **g)
        worst = max(worst, l2_norm(lhs - rhs) / l2_norm(f))
    return _result("rotation_commutation", "calculus", "semigroup commutes with grid-preserving rotations", worst, tol)


def check_dilation(config, seed=0, tol=1e-9, r=2.0):
    """``rho_r`` intertwines ``G`` with ``r^2 G``, on operator and on semigroup level."""
    rng = rng_for(seed, "dilation")
    cfg = config.with_(N_prime=128, N_doubleprime=128)
    d = cfg.d_prime + cfg.d_doubleprime
    f = bump(cfg, rng.uniform(-1, 1, d), 1.0, 1.0)
    fr = dilate(f, r)  # rho_r f on the contracted grid
    fd = l2_norm(GridFunction(fr.config, grushin_fd(fr).values - r * r * grushin_fd(f).values)) / l2_norm(grushin_fd(fr))
    t = 0.1
    lhs = heat_semigroup(fr, t).values
    rhs = heat_semigroup(f, r * r * t).values
    sg = float(np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs))
    return _result("parabolic_dilation", "calculus", "degree-2 homogeneity under parabolic dilations",
                   max(fd, sg), tol, {"operator": fd, "semigroup": sg})


def green_pairs(config, seed, n=10):
    rng = rng_for(seed, "green_symmetry")
    d = config.d_prime + config.d_doubleprime
    out = []
    for _ in range(n):
        phi = bump(config, rng.uniform(-2, 2, d), rng.uniform(0.5, 1.2), rng.uniform(0.5, 1.5), radius=4.0,
                   phase=rng.uniform(-1, 1, d))
        psi = bump(config, rng.uniform(-2, 2, d), rng.uniform(0.5, 1.2), rng.uniform(0.5, 1.5), radius=4.0,
                   phase=rng.uniform(-1, 1, d))
        out.append((phi, psi))
    return out


def check_green(config, seed=0, tol=1e-8):
    worst = 0.0
    for phi, psi in green_pairs(config, seed):
        lhs = l2_inner(grushin_fd(phi), psi)
        rhs = l2_inner(phi, grushin_fd(psi))
        worst = max(worst, abs(lhs - rhs) / (l2_norm(phi) * l2_norm(psi)))
    return _result("green_symmetry", "calculus", "Green's formula: symmetry of the discrete operator", worst, tol)


# -- heat kernel ---------------------------------------------------------------------

def random_queries(seed, name, n, d_prime, d_doubleprime, box=1.2, trange=(0.4, 2.0)):
    rng = rng_for(seed, name)
    d = d_prime + d_doubleprime
    return [HeatKernelQuery(float(rng.uniform(*trange)), rng.uniform(-box, box, d),
                            rng.uniform(-box, box, d), d_prime) for _ in range(n)]


def check_fourier_vs_hankel(seed=0, tol=1e-8, n=20):
    worst = {}
    for dd in (1, 2, 3):
        w = 0.0
        for q in random_queries(seed, f"fourier_vs_hankel_{dd}", n, 1, dd):
            f = evaluate_fourier(q.replace(lattice=True)).value
            h = kernel_hankel_form(q)
            w = max(w, abs(f - h) / abs(h))
        worst[f"d''={dd}"] = w
    return _result("fourier_vs_hankel", "heat", "Fourier form vs Hankel form", max(worst.values()), tol, worst)


def check_kernel_vs_semigroup(config, seed=0, tol=1e-6, t=0.5):
    cfg = config.with_(d_prime=1, d_doubleprime=1)
    f = bump(cfg, [0.2, 0.5], 1.0, 1.0)
    rep = kernel_vs_semigroup(f, t, rng=rng_for(seed, "kernel_vs_semigroup"))
    return _result("kernel_vs_semigroup", "heat", "kernel integral equals the spectral semigroup",
                   rep.relative_l2, tol, {"max_abs": rep.max_abs, "t": t, "points": len(rep.points)})


def check_kernel_symmetry(seed=0, tol=1e-12):
    worst = 0.0
    for dp, dd in ((1, 1), (2, 1), (1, 2)):
        for q in random_queries(seed, f"symmetry_{dp}{dd}", 5, dp, dd):
            a = kernel_fourier_form(q)
            b = kernel_fourier_form(q.replace(x=q.y, y=q.x))
            worst = max(worst, abs(a - b) / abs(a))
    return _result("kernel_symmetry", "heat", "kernel symmetry p_t(x,y) = p_t(y,x)", worst, tol)


def check_kernel_positivity(seed=0, tol=0.0):
    values = [kernel_fourier_form(q) for q in random_queries(seed, "positivity", 10, 1, 1, box=2.0)]
    values += [kernel_hankel_form(q) for q in random_queries(seed, "positivity2", 5, 1, 2, box=2.0)]
    return _result("kernel_positivity", "heat", "kernel positivity", 0.0, tol,
                   {"min": float(min(values))}, passed=min(values) > 0)


def _dilate_point(x, d_prime, r):
    x = np.asarray(x, float).copy()
    x[:d_prime] *= r
    x[d_prime:] *= r * r
    return x


def check_parabolic_scaling(seed=0, tol=1e-10):
    worst = 0.0
    for dp, dd in ((1, 1), (1, 2)):
        for q in random_queries(seed, f"scaling_{dp}{dd}", 5, dp, dd):
            for r in (2.0, 0.5):
                lhs = kernel_fourier_form(q)
                q2 = q.replace(t=q.t / r ** 2, x=_dilate_point(q.x, dp, 1 / r), y=_dilate_point(q.y, dp, 1 / r))
                rhs = r ** (-q.D) * kernel_fourier_form(q2)
                worst = max(worst, abs(lhs - rhs) / abs(lhs))
    return _result("parabolic_scaling", "heat", "parabolic scaling of the kernel", worst, tol)


def check_kernel_rotation(seed=0, tol=1e-12):
    rng = rng_for(seed, "kernel_rotation")
    worst = 0.0
    for q in random_queries(seed, "kernel_rotation_q", 6, 2, 2):
        x, y = np.array(q.x), np.array(q.y)
        perm = np.concatenate([rng.permutation(2), 2 + rng.permutation(2)])
        signs = rng.choice([-1.0, 1.0], size=4)
        a = kernel_fourier_form(q)
        b = kernel_fourier_form(q.replace(x=signs * x[perm], y=signs * y[perm]))
        worst = max(worst, abs(a - b) / abs(a))
    return _result("kernel_rotation", "heat", "rotation invariance of the kernel", worst, tol)


def check_chapman_kolmogorov(seed=0, tol=1e-6):
    rng = rng_for(seed, "chapman_kolmogorov")
    worst = 0.0
    for _ in range(3):
        t, s = rng.uniform(0.3, 1.0, 2)
        x, y = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
        lhs, rhs = chapman_kolmogorov(float(t), float(s), x, y)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return _result("chapman_kolmogorov", "heat", "Chapman-Kolmogorov identity", worst, tol)


def check_t_inside(seed=0, tol=1e-12):
    worst = 0.0
    for dd in (1, 2):
        for q in random_queries(seed, f"t_inside_{dd}", 5, 1, dd):
            a = kernel_fourier_form(q)
            b = kernel_t_inside(q)
            worst = max(worst, abs(a - b) / abs(a))
    return _result("t_inside_form", "heat", "change of variables t xi -> xi in the kernel integral", worst, tol)


def heat_equation_ratios(seed, n=5, prefactor_shift=0.0, h=1e-2):
    rng = rng_for(seed, "heat_equation")
    ratios = []
    for _ in range(n):
        t = float(rng.uniform(0.3, 1.0))
        x, y = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
        rule = _FixedRule(HeatKernelQuery(t, x, y, 1))
        shift = prefactor_shift * t
        r1 = heat_equation_residual(t, x, y, h, rule=rule, prefactor_shift=shift)
        r2 = heat_equation_residual(t, x, y, h / 2, rule=rule, prefactor_shift=shift)
        ratios.append(r1 / r2)
    return ratios


def check_heat_equation(seed=0, tol=0.5, prefactor_shift=0.0):
    ratios = heat_equation_ratios(seed, prefactor_shift=prefactor_shift)
    worst = max(abs(r - 4.0) for r in ratios)
    name = "heat_equation" if prefactor_shift == 0 else "heat_equation_perturbed"
    return _result(name, "heat", "kernel solves the heat equation (residual ratio 4)", worst, tol,
                   {"ratios": ratios, "prefactor_shift": prefactor_shift})


def check_l2_finiteness(seed=0, tol=1e-6):
    out = {}
    worst = 0.0
    for t in (0.1, 1.0, 10.0):
        x = np.array([0.5, 0.2])
        direct = kernel_l2_norm_direct(t, x)
        planch = kernel_l2_norm_plancherel(t, x)
        gap = abs(direct - planch) / planch
        out[f"t={t:g}"] = {"direct": direct, "plancherel": planch, "gap": gap}
        worst = max(worst, gap)
    finite = all(math.isfinite(v["direct"]) for v in out.values())
    return _result("l2_finiteness", "heat", "square integrability of the kernel (two routes)",
                   worst, tol, out, passed=finite and worst <= tol)


# -- driver -------------------------------------------------------------------------

def registry(config: GrushinConfig) -> list[tuple[str, str, Callable[[int], CheckResult]]]:
    """Ordered ``(name, group, runner)`` triples; each identity appears once."""
    c = config
    return [
        ("hermite_orthonormality", "special", lambda s: check_hermite_orthonormality(s)),
        ("hermite_growth", "special", lambda s: check_hermite_growth(s)),
        ("scaled_eigen_relation", "special", lambda s: check_scaled_eigen_relation(s)),
        ("mehler_closed_form", "special", lambda s: check_mehler(s)),
        ("fiber_kernel_mehler", "special", lambda s: check_fiber_mehler(s)),
        ("hyperbolic_identity", "special", lambda s: check_hyperbolic_identity(s)),
        ("bessel_branches", "special", lambda s: check_bessel_branches(s)),
        ("plancherel_bandlimited", "transform", lambda s: check_plancherel_bandlimited(c, s)),
        ("plancherel_schwartz", "transform", lambda s: check_plancherel_schwartz(c, s)),
        ("inversion_bandlimited", "transform", lambda s: check_inversion_bandlimited(c, s)),
        ("inversion_schwartz", "transform", lambda s: check_inversion_schwartz(c, s)),
        ("transform_adjointness", "transform", lambda s: check_transform_adjointness(c, s)),
        ("composition_order", "transform", lambda s: check_composition_order(c, s)),
        ("intertwining", "transform", lambda s: check_intertwining(c, s)),
        ("eigenfunction_relation", "calculus", lambda s: check_eigenfunction(c, s)),
        ("calculus_algebra", "calculus", lambda s: check_calculus_algebra(c, s)),
        ("strong_continuity", "calculus", lambda s: check_strong_continuity(c, s)),
        ("rotation_commutation", "calculus", lambda s: check_rotation_commutation(c, s)),
        ("parabolic_dilation", "calculus", lambda s: check_dilation(c, s)),
        ("green_symmetry", "calculus", lambda s: check_green(c, s)),
        ("fourier_vs_hankel", "heat", lambda s: check_fourier_vs_hankel(s)),
        ("kernel_vs_semigroup", "heat", lambda s: check_kernel_vs_semigroup(c, s)),
        ("kernel_symmetry", "heat", lambda s: check_kernel_symmetry(s)),
        ("kernel_positivity", "heat", lambda s: check_kernel_positivity(s)),
        ("parabolic_scaling", "heat", lambda s: check_parabolic_scaling(s)),
        ("kernel_rotation", "heat", lambda s: check_kernel_rotation(s)),
        ("chapman_kolmogorov", "heat", lambda s: check_chapman_kolmogorov(s)),
        ("t_inside_form", "heat", lambda s: check_t_inside(s)),
        ("heat_equation", "heat", lambda s: check_heat_equation(s)),
        ("l2_finiteness", "heat", lambda s: check_l2_finiteness(s)),
    ]


@dataclass
class VerificationReport:
    seed: int
    generator: str
    config: dict
    tolerance_scale: float
    results: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self, timings: bool = False) -> dict:
        rows = []
        for r in self.results:
            row = asdict(r)
            if not timings:
                row.pop("seconds")
            rows.append(row)
        return {"seed": self.seed, "generator": self.generator, "config": self.config,
                "tolerance_scale": self.tolerance_scale, "passed": self.passed, "results": rows}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_jsonable)

    def table(self) -> str:
        lines = [f"{'identity':<28} {'group':<10} {'measured':>12} {'tolerance':>12}  result"]
        for r in self.results:
            lines.append(f"{r.name:<28} {r.group:<10} {r.measured:>12.3e} {r.tolerance:>12.3e}  "
                         f"{'PASS' if r.passed else 'FAIL'}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj)}")


def run_verification(config: GrushinConfig | None = None, seed: int = 0, only: list[str] | None = None,
                     tolerance_scale: float = 1.0, threads: int = 1) -> VerificationReport:
    """Run the selected checks and collect them in a fixed order.

    ``only`` filters by group name (``special``, ``transform``, ``calculus``,
    ``heat``) or by check name. ``tolerance_scale`` multiplies every
    tolerance, so values below 1 tighten the suite.
    """
    config = config or GrushinConfig()
    entries = registry(config)
    if only:
        unknown = set(only) - set(GROUPS) - {n for n, _, _ in entries}
        if unknown:
            raise ValueError(f"unknown check or group: {', '.join(sorted(unknown))}")
        entries = [e for e in entries if e[0] in only or e[1] in only]

    def run(entry):
        name, _, fn = entry
        start = time.perf_counter()
        res = fn(seed)
        res.seconds = time.perf_counter() - start
        if tolerance_scale != 1.0:
            res.tolerance *= tolerance_scale
            res.passed = res.passed and res.measured <= res.tolerance
        return res

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, entries))
    else:
        results = [run(e) for e in entries]
    return VerificationReport(seed, "numpy.random.default_rng([seed, crc32(check name)])",
                              config.to_dict(), tolerance_scale, results)
