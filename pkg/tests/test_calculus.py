import numpy as np
import pytest

from grushin.calculus import (
    SpectralSymbol,
    apply_symbol,
    domain_diagnostic,
    fd_symbol_doubleprime,
    functional_calculus,
    grushin_fd,
    heat_semigroup,
    psi_eigenfunction,
    sample_psi,
    theta,
    theta_grid,
)
from grushin.grids import GridFunction, dual_norm, l2_inner, l2_norm
from grushin.testfunctions import bandlimited, bump
from grushin.verify import fitted_orders


def test_theta_values():
    assert theta(3, [0.5]) == pytest.approx(3.5)
    assert theta((1, 2), [3.0, 4.0]) == pytest.approx(8 * 5.0)


def test_theta_grid_vanishes_at_zero_frequency(config):
    T = theta_grid(config)
    assert T.shape == (config.K + 1,) + config.xi_shape
    assert np.all(T[:, config.xi_zero_index] == 0)


class TestSymbols:
    def test_composition(self):
        s = SpectralSymbol.heat(0.5) * SpectralSymbol.projection(2.0)
        np.testing.assert_allclose(s(np.array([1.0, 3.0])), [np.exp(-0.5), 0.0])

    def test_bounds(self):
        assert SpectralSymbol.heat(1.0).bounded
        assert not SpectralSymbol.power(1.0).bounded

    def test_heat_needs_nonnegative_time(self):
        with pytest.raises(ValueError):
            SpectralSymbol.heat(-1.0)

    def test_identity_symbol_is_identity(self, config, plan, rng):
        f, _ = bandlimited(config, rng)
        assert l2_norm(functional_calculus(f, SpectralSymbol.identity(), plan) - f) <= 1e-12 * l2_norm(f)


class TestSemigroup:
    def test_eigenfunction_decays_at_its_eigenvalue(self, config):
        k, m = 3, 7
        xi = m * config.dxi
        psi = sample_psi(config, k, [xi])
        out = heat_semigroup(psi, 0.2)
        assert l2_norm(out - psi * np.exp(-0.2 * (2 * k + 1) * xi)) <= 1e-10 * l2_norm(psi)

    def test_contraction_and_positive_time(self, config, plan, rng):
        f = bump(config, [0.0, 0.0], 1.0, 1.0)
        norms = [l2_norm(heat_semigroup(f, t, plan)) for t in (0.05, 0.1, 0.4)]
        assert l2_norm(f) >= norms[0] >= norms[1] >= norms[2]
        with pytest.raises(ValueError):
            heat_semigroup(f, 0.0, plan)

    def test_semigroup_law(self, config, plan, rng):
        f, _ = bandlimited(config, rng)
        a = heat_semigroup(heat_semigroup(f, 0.1, plan), 0.25, plan)
        assert l2_norm(a - heat_semigroup(f, 0.35, plan)) <= 1e-12 * l2_norm(f)

    def test_self_adjoint(self, config, plan, rng):
        f, _ = bandlimited(config, rng)
        g, _ = bandlimited(config, rng)
        s = SpectralSymbol.projection(30.0)
        lhs = l2_inner(functional_calculus(f, s, plan), g)
        assert lhs == pytest.approx(l2_inner(f, functional_calculus(g, s, plan)), abs=1e-12)

    def test_strong_continuity(self, config, plan, rng):
        f, _ = bandlimited(config, rng, kmax=4)
        assert l2_norm(heat_semigroup(f, 1e-6, plan) - f) < 1e-4 * l2_norm(f)

    def test_rotation_commutes(self, small2p, rng):
        from grushin.grids import rotate
        f = bump(small2p, rng.uniform(-1, 1, 3), 0.9, 1.1)
        kw = dict(perm_prime=[1, 0], flip_dd=[True])
        assert l2_norm(heat_semigroup(rotate(f, **kw), 0.3) - rotate(heat_semigroup(f, 0.3), **kw)) < 1e-10


class TestFiniteDifference:
    def test_matches_symbol_on_eigenfunction_to_second_order(self, config):
        k, m = 5, 6
        errs, hs = [], []
        for n in (128, 256, 512):
            cfg = config.with_(N_prime=n, N_doubleprime=n)
            psi = sample_psi(cfg, k, [m * cfg.dxi])
            errs.append(l2_norm(grushin_fd(psi) - psi * ((2 * k + 1) * m * cfg.dxi)) / l2_norm(psi))
            hs.append(cfg.h_doubleprime)
        assert all(abs(o - 2) < 0.3 for o in fitted_orders(errs, hs))

    def test_periodic_symbol(self, config):
        xi = 3 * config.dxi
        h = config.h_doubleprime
        assert fd_symbol_doubleprime(config, [xi]) == pytest.approx(xi ** 2, rel=h ** 2 * xi ** 2 / 10)

    def test_green_symmetry_compact_support(self, config, rng):
        a = bump(config, [0.5, -1.0], 0.8, 1.0, radius=4.0, phase=[0.3, -0.2])
        b = bump(config, [-0.3, 0.8], 1.0, 0.7, radius=4.0)
        lhs = l2_inner(grushin_fd(a), b)
        assert abs(lhs - l2_inner(a, grushin_fd(b))) < 1e-10 * l2_norm(a) * l2_norm(b)

    def test_domain_diagnostic_grows_with_frequency(self, config):
        lo = sample_psi(config, 1, [2 * config.dxi])
        hi = sample_psi(config, 1, [20 * config.dxi])
        assert domain_diagnostic(hi) / l2_norm(hi) > 5 * domain_diagnostic(lo) / l2_norm(lo)

    def test_rejects_frequency_data(self, config):
        with pytest.raises(ValueError):
            grushin_fd(GridFunction(config, np.zeros(config.shape), "xi"))


def test_psi_needs_nonzero_frequency():
    with pytest.raises(ValueError):
        psi_eigenfunction(1, [0.0], np.zeros((1, 2)))


def test_apply_symbol_on_zero_slice_uses_prime_frequencies(config, plan):
    # on the zero slice the operator reduces to -Laplacian in x'
    f = bump(config, [0.0, 0.0], 1.0, 1.0)
    F = plan.forward(f)
    G = apply_symbol(F, SpectralSymbol.heat(0.1))
    assert np.max(np.abs(G.zero_slice)) < np.max(np.abs(F.zero_slice))
    assert dual_norm(G) < dual_norm(F)
