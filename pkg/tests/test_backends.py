import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grushin import _backend, _pykernels
from grushin.special import bessel_j, hermite_table

needs_c = pytest.mark.skipif("cython" not in _backend.available(), reason="compiled kernels not built")


def test_fallback_always_available():
    assert "python" in _backend.available()


def test_use_backend_restores():
    before = _backend.backend_name()
    with _backend.use_backend("python") as mod:
        assert mod.NAME == "python"
        assert _backend.backend_name() == "python"
    assert _backend.backend_name() == before


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.set_backend("fortran")


@needs_c
class TestEquivalence:
    @pytest.fixture(autouse=True)
    def _c(self):
        from grushin import _ckernels
        self.c = _ckernels

    def test_hermite_table(self):
        u = np.linspace(-40, 40, 1001)
        np.testing.assert_allclose(self.c.hermite_table(90, u), _pykernels.hermite_table(90, u), atol=1e-15)

    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.0, 3.5])
    def test_bessel(self, alpha):
        z = np.linspace(0, 80, 4001)
        np.testing.assert_allclose(self.c.bessel_j_ratio(alpha, z), _pykernels.bessel_j_ratio(alpha, z),
                                   atol=1e-14, rtol=1e-12)

    def test_fiber_sums(self):
        rng = np.random.default_rng(3)
        tau = np.linspace(0.01, 20, 300)
        logw = -0.5 * tau
        T, C = np.tanh(tau), 1 / np.tanh(tau)
        a, b, d = rng.uniform(0, 2, 20), rng.uniform(0, 2, 20), rng.uniform(0, 4, 20)
        np.testing.assert_allclose(self.c.fiber_cos_sum(logw, T, C, tau, a, b, d),
                                   _pykernels.fiber_cos_sum(logw, T, C, tau, a, b, d), rtol=1e-12, atol=1e-13)
        np.testing.assert_allclose(self.c.fiber_bessel_sum(logw, T, C, tau, a, b, d, 0.0),
                                   _pykernels.fiber_bessel_sum(logw, T, C, tau, a, b, d, 0.0),
                                   rtol=1e-12, atol=1e-13)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 60), st.floats(-30, 30))
    def test_public_api_backend_independent(self, k, u):
        with _backend.use_backend("python"):
            a = hermite_table(k, np.array([u]))
            ja = bessel_j(0.0, abs(u))
        with _backend.use_backend("cython"):
            b = hermite_table(k, np.array([u]))
            jb = bessel_j(0.0, abs(u))
        np.testing.assert_allclose(a, b, atol=1e-15)
        assert ja == pytest.approx(jb, abs=1e-14)
