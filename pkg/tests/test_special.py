import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jv

from grushin._backend import available, use_backend
from grushin.quadrature import composite_gauss_legendre
from grushin.special import (
    MultiIndex,
    as_multi_index,
    bessel_j,
    bessel_j_ratio,
    hermite_1d,
    hermite_heat_kernel_closed,
    hermite_multi,
    hermite_scaled,
    hermite_table,
    hyperbolic_form_half,
    hyperbolic_form_sech,
    mehler_series,
    multi_indices,
)


def mp_hermite(k, u, prec=200):
    """Hermite function from the three-term recurrence in high precision."""
    with mpmath.workprec(prec):
        u = mpmath.mpf(u)
        prev, cur = mpmath.mpf(0), mpmath.pi ** mpmath.mpf(-0.25) * mpmath.exp(-u * u / 2)
        for j in range(k):
            prev, cur = cur, u * mpmath.sqrt(mpmath.mpf(2) / (j + 1)) * cur - mpmath.sqrt(mpmath.mpf(j) / (j + 1)) * prev
        return float(cur)


def mp_bessel_series(alpha, z, prec=200):
    with mpmath.workprec(prec):
        z = mpmath.mpf(z)
        alpha = mpmath.mpf(alpha)
        return float(mpmath.nsum(lambda m: (-1) ** m / (mpmath.factorial(m) * mpmath.gamma(m + alpha + 1))
                                 * (z / 2) ** (2 * m + alpha), [0, mpmath.inf]))


class TestHermite:
    @pytest.mark.parametrize("k,u", [(25, 0.7), (0, 0.0), (3, -1.2), (60, 5.5), (100, 13.0)])
    def test_matches_high_precision_recurrence(self, k, u):
        assert hermite_1d(k, u) == pytest.approx(mp_hermite(k, u), rel=1e-12, abs=1e-15)

    def test_low_degrees_closed_form(self):
        u = np.linspace(-3, 3, 13)
        g = math.pi ** -0.25 * np.exp(-u * u / 2)
        np.testing.assert_allclose(hermite_1d(0, u), g, atol=1e-15)
        np.testing.assert_allclose(hermite_1d(1, u), math.sqrt(2) * u * g, atol=1e-15)
        np.testing.assert_allclose(hermite_1d(2, u), (2 * u * u - 1) / math.sqrt(2) * g, atol=1e-15)

    def test_orthonormal(self):
        u, w = composite_gauss_legendre(-30, 30, 300)
        H = hermite_table(40, u)
        np.testing.assert_allclose((H * w) @ H.T, np.eye(41), atol=1e-12)

    def test_large_argument_underflows_cleanly(self):
        vals = hermite_table(50, np.array([40.0, -60.0, 1e3]))
        assert np.all(np.isfinite(vals))
        assert np.max(np.abs(vals)) < 1e-200

    def test_sup_bound(self):
        u = np.linspace(-25, 25, 20001)
        assert np.max(np.abs(hermite_table(100, u))) <= math.pi ** -0.25 * (1 + 1e-12)

    def test_parity(self):
        u = np.linspace(0, 5, 11)
        for k in (4, 7):
            np.testing.assert_allclose(hermite_1d(k, -u), (-1) ** k * hermite_1d(k, u), atol=1e-15)

    @pytest.mark.parametrize("k", [-1, 1.5])
    def test_bad_degree(self, k):
        with pytest.raises(ValueError):
            hermite_1d(k, 0.3)

    def test_non_finite_argument(self):
        with pytest.raises(ValueError):
            hermite_1d(2, np.nan)

    def test_scaled_norm(self):
        u, w = composite_gauss_legendre(-20, 20, 200)
        for k, tau in ((0, 0.3), (5, 2.0), (12, 7.5)):
            v = hermite_scaled(k, tau, u[:, None])
            assert np.sum(w * v * v) == pytest.approx(1.0, abs=1e-12)

    def test_scaled_rejects_bad_tau(self):
        with pytest.raises(ValueError):
            hermite_scaled(1, 0.0, [0.1])

    def test_multi_product(self):
        x = np.array([[0.3, -0.4]])
        expected = hermite_1d(2, 0.3) * hermite_1d(3, -0.4)
        assert hermite_multi((2, 3), x)[0] == pytest.approx(expected, rel=1e-14)


class TestMultiIndex:
    def test_basic(self):
        m = MultiIndex.of(1, 2)
        assert m.dim == 2 and m.length == 3 and m.eigenvalue == 8

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            MultiIndex.of(1, -1)

    def test_enumeration_count(self):
        # number of multi-indices of total degree <= K in d variables
        assert len(multi_indices(2, 10)) == math.comb(12, 2)
        assert len(multi_indices(3, 5)) == math.comb(8, 3)

    def test_enumeration_order(self):
        lengths = [m.length for m in multi_indices(2, 6)]
        assert lengths == sorted(lengths)

    def test_coercion_dimension_check(self):
        with pytest.raises(ValueError):
            as_multi_index((1, 2), 3)


class TestMehler:
    @pytest.mark.parametrize("t", [0.1, 0.5, 2.0])
    def test_series_converges_to_closed_form(self, t):
        for a, b in ((0.0, 0.0), (1.0, -0.5), (-2.0, 1.5)):
            assert mehler_series(t, [a], [b], 200) == pytest.approx(
                hermite_heat_kernel_closed(t, [a], [b]), abs=1e-12)

    def test_two_dimensional_factorises(self):
        t, x, y = 0.4, np.array([0.3, -0.2]), np.array([0.1, 0.5])
        prod = hermite_heat_kernel_closed(t, x[:1], y[:1]) * hermite_heat_kernel_closed(t, x[1:], y[1:])
        assert hermite_heat_kernel_closed(t, x, y) == pytest.approx(prod, rel=1e-14)
        assert mehler_series(t, x, y, 120) == pytest.approx(prod, abs=1e-12)

    def test_rejects_nonpositive_time(self):
        with pytest.raises(ValueError):
            hermite_heat_kernel_closed(0.0, [0], [0])


class TestBessel:
    def test_j1_against_mpmath_series(self):
        assert bessel_j(1.0, 3.7) == pytest.approx(mp_bessel_series(1, 3.7), rel=1e-13)

    @pytest.mark.parametrize("backend", available())
    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.0, 1.5, 2.5])
    def test_against_scipy(self, alpha, backend):
        z = np.concatenate([np.linspace(1e-3, 4, 50), np.linspace(4, 120, 300)])
        # rounding in the recurrence normalisation grows slowly with z
        with use_backend(backend):
            np.testing.assert_allclose(bessel_j(alpha, z), jv(alpha, z), atol=1e-13, rtol=0)

    def test_values_at_zero(self):
        assert bessel_j(0.0, 0.0) == 1.0
        assert bessel_j(1.0, 0.0) == 0.0
        assert math.isinf(bessel_j(-0.5, 0.0))

    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 2.0])
    def test_ratio_limit(self, alpha):
        assert bessel_j_ratio(alpha, 0.0) == pytest.approx(2 ** -alpha / math.gamma(alpha + 1), rel=1e-14)

    def test_half_order_elementary(self):
        z = np.linspace(0.1, 30, 200)
        np.testing.assert_allclose(bessel_j(0.5, z), np.sqrt(2 / (math.pi * z)) * np.sin(z), atol=1e-14)
        np.testing.assert_allclose(bessel_j_ratio(-0.5, z), math.sqrt(2 / math.pi) * np.cos(z), atol=1e-14)

    @pytest.mark.parametrize("alpha,z", [(-1.0, 1.0), (0.0, -1.0), (0.0, np.inf)])
    def test_domain_errors(self, alpha, z):
        with pytest.raises(ValueError):
            bessel_j(alpha, z)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.0, 3.0), st.floats(1e-6, 200.0))
    def test_property_matches_scipy(self, alpha, z):
        assert bessel_j(alpha, z) == pytest.approx(float(jv(alpha, z)), abs=5e-14)

    def test_subnormal_argument(self):
        # scipy flushes this to zero; the series keeps the true magnitude
        z = 5e-324
        assert bessel_j(0.03125, z) == pytest.approx(float(mpmath.besselj(0.03125, mpmath.mpf(z))), rel=1e-12)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=2, max_size=2), st.lists(st.floats(-3, 3), min_size=2, max_size=2),
       st.floats(0.05, 6.0))
def test_hyperbolic_identity(x, y, u):
    lhs = hyperbolic_form_sech(u, x, y)
    assert hyperbolic_form_half(u, x, y) == pytest.approx(lhs, rel=1e-12, abs=1e-12)
