import math
import warnings

import numpy as np
import pytest

from grushin.heat_kernel import (
    HeatKernelQuery,
    KernelWarning,
    chapman_kolmogorov,
    evaluate_fourier,
    evaluate_hankel,
    fiber_kernel,
    heat_equation_residual,
    heat_kernel,
    kernel_fourier_form,
    kernel_hankel_form,
    kernel_l2_norm,
    kernel_on_grid,
    kernel_t_inside,
    kernel_vs_semigroup,
)
from grushin.quadrature import NonConvergenceError, composite_gauss_legendre, radial_cutoff
from grushin.special import hermite_heat_kernel_closed, mehler_series
from grushin.testfunctions import bump


def test_radial_cutoff_values():
    assert radial_cutoff(1, 1) == pytest.approx(39.7, abs=0.1)
    assert radial_cutoff(2, 1) == pytest.approx(20.6, abs=0.1)
    assert radial_cutoff(1, 3) > radial_cutoff(1, 2) > radial_cutoff(1, 1)


def test_gauss_legendre_exactness():
    x, w = composite_gauss_legendre(-1.0, 2.0, 3, 5)
    assert np.sum(w * x ** 9) == pytest.approx((2 ** 10 - 1) / 10, rel=1e-13)


class TestQuery:
    @pytest.mark.parametrize("kw", [dict(t=0.0), dict(t=-1.0), dict(y=[0.0]), dict(d_prime=2),
                                    dict(method="laplace"), dict(x=[np.nan, 0.0])])
    def test_validation(self, kw):
        base = dict(t=1.0, x=[0.0, 0.0], y=[0.1, 0.2])
        base.update(kw)
        with pytest.raises(ValueError):
            HeatKernelQuery(**base)

    def test_small_time_warns(self):
        with pytest.warns(KernelWarning):
            kernel_fourier_form(HeatKernelQuery(5e-4, [0.1, 0.0], [0.1, 0.001]))

    def test_nonconvergence_is_reported(self):
        # one midpoint panel on a truncated range cannot pass the doubling check
        q = HeatKernelQuery(1.0, [0.2, 0.0], [0.1, 3.0], order=1, R=0.5)
        with pytest.raises(NonConvergenceError):
            kernel_fourier_form(q)


def test_fiber_kernel_is_scaled_mehler():
    t, xi, x, y = 0.7, 2.3, 0.4, -0.9
    s = math.sqrt(xi)
    assert fiber_kernel(t, [x], [y], [xi]) == pytest.approx(s * hermite_heat_kernel_closed(t * xi, [s * x], [s * y]),
                                                            rel=1e-13)
    assert fiber_kernel(t, [x], [y], [xi]) == pytest.approx(s * mehler_series(t * xi, [s * x], [s * y], 80), rel=1e-12)


class TestForms:
    @pytest.mark.parametrize("dd", [1, 2, 3])
    def test_fourier_matches_hankel(self, dd):
        rng = np.random.default_rng(dd)
        for _ in range(3):
            q = HeatKernelQuery(float(rng.uniform(0.4, 2)), rng.uniform(-1, 1, 1 + dd), rng.uniform(-1, 1, 1 + dd))
            a = evaluate_fourier(q.replace(lattice=True))
            b = evaluate_hankel(q)
            assert a.value == pytest.approx(b.value, rel=1e-10)
            assert a.refinement_error < 1e-10 * abs(a.value)

    def test_t_inside_form(self):
        q = HeatKernelQuery(0.6, [0.3, -0.5], [0.9, 1.1])
        assert kernel_t_inside(q) == pytest.approx(kernel_fourier_form(q), rel=1e-12)

    def test_dispatch(self):
        q = HeatKernelQuery(1.0, [0.0, 0.0], [0.0, 1.0], method="hankel")
        assert heat_kernel(q) == kernel_hankel_form(q)

    def test_on_diagonal_at_origin_scaling(self):
        # p_t(0,0) = t^{-D/2} p_1(0,0)
        p1 = kernel_fourier_form(HeatKernelQuery(1.0, [0.0, 0.0], [0.0, 0.0]))
        p4 = kernel_fourier_form(HeatKernelQuery(4.0, [0.0, 0.0], [0.0, 0.0]))
        assert p4 == pytest.approx(p1 * 4 ** -1.5, rel=1e-12)

    def test_symmetry_and_positivity(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            x, y = rng.uniform(-2, 2, 2), rng.uniform(-2, 2, 2)
            a = kernel_fourier_form(HeatKernelQuery(0.5, x, y))
            assert a > 0
            assert a == pytest.approx(kernel_fourier_form(HeatKernelQuery(0.5, y, x)), rel=1e-12)

    def test_translation_in_second_factor(self):
        a = kernel_fourier_form(HeatKernelQuery(0.8, [0.3, 1.0], [0.5, -0.2]))
        b = kernel_fourier_form(HeatKernelQuery(0.8, [0.3, 4.0], [0.5, 2.8]))
        assert a == pytest.approx(b, rel=1e-12)


class TestGrid:
    def test_grid_matches_pointwise(self):
        t, x = 0.7, np.array([0.4, 0.1])
        yp = np.array([[-0.5], [0.0], [1.2]])
        ypp = np.array([[-1.0], [0.3], [2.0]])
        P = kernel_on_grid(t, x, yp, ypp)
        for i in range(3):
            for j in range(3):
                ref = kernel_fourier_form(HeatKernelQuery(t, x, [yp[i, 0], ypp[j, 0]]))
                assert P[i, j] == pytest.approx(ref, rel=1e-10)

    def test_grid_hankel_branch(self):
        t, x = 0.9, np.array([0.2, 0.1, -0.3])
        yp, ypp = np.array([[0.5]]), np.array([[0.4, 0.2], [-1.0, 0.0]])
        P = kernel_on_grid(t, x, yp, ypp)
        for j in range(2):
            ref = kernel_hankel_form(HeatKernelQuery(t, x, np.concatenate([yp[0], ypp[j]])))
            assert P[0, j] == pytest.approx(ref, rel=1e-10)

    def test_dimension_check(self):
        with pytest.raises(ValueError):
            kernel_on_grid(1.0, [0.0, 0.0], [[0.0, 0.0]], [[0.0]])


class TestIdentities:
    def test_kernel_reproduces_semigroup(self, config):
        f = bump(config, [0.2, 0.5], 1.0, 1.0)
        rep = kernel_vs_semigroup(f, 0.5, n_points=6, rng=np.random.default_rng(0))
        assert rep.relative_l2 < 1e-6

    def test_zero_data(self, config):
        f = bump(config) * 0.0
        rep = kernel_vs_semigroup(f, 0.5, n_points=3)
        assert rep.max_abs == 0.0

    @pytest.mark.xfail(strict=True, reason="periodic box leaks mass to the x'' boundary at t=10; "
                                            "the kernel integral sees free space (see decisions ledger)")
    def test_large_time_absolute_agreement(self, config):
        f = bump(config, [0.2, 0.5], 1.0, 1.0)
        rep = kernel_vs_semigroup(f, 10.0, n_points=6, rng=np.random.default_rng(0))
        assert rep.max_abs < 1e-8

    def test_heat_equation_second_order(self):
        x, y, t = np.array([0.4, -0.3]), np.array([-0.2, 0.5]), 0.6
        r1 = heat_equation_residual(t, x, y, 1e-2)
        r2 = heat_equation_residual(t, x, y, 5e-3)
        assert 3.5 < r1 / r2 < 4.5

    def test_heat_equation_step_guard(self):
        with pytest.raises(ValueError):
            heat_equation_residual(0.1, [0, 0], [0, 0], 0.2)

    def test_l2_norm_routes_agree(self):
        rep = kernel_l2_norm(1.0, [0.0, 0.0])
        assert rep.relative_gap < 1e-6 and math.isfinite(rep.direct)

    def test_chapman_kolmogorov(self):
        lhs, rhs = chapman_kolmogorov(0.4, 0.7, [0.1, 0.2], [-0.3, 0.5])
        assert lhs == pytest.approx(rhs, rel=1e-6)
