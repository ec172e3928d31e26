import json

import numpy as np
import pytest

from grushin.grids import (
    ConfigError,
    DualCoefficients,
    GridFunction,
    GrushinConfig,
    dilate,
    dual_norm,
    l2_inner,
    l2_norm,
    rotate,
    sample,
)


class TestConfig:
    def test_defaults(self, config):
        assert (config.d_prime, config.d_doubleprime, config.K) == (1, 1, 64)
        assert config.D == 3
        assert config.shape == (256, 256)

    def test_mismatched_homogeneous_dimension(self):
        with pytest.raises(ConfigError, match="homogeneous dimension"):
            GrushinConfig(D=4)

    @pytest.mark.parametrize("kw", [dict(d_prime=0), dict(K=-1), dict(N_doubleprime=7), dict(L_prime=-1.0),
                                    dict(tolerances={"hermite_tail": -1.0}), dict(N_prime=2.5)])
    def test_invalid(self, kw):
        with pytest.raises(ConfigError):
            GrushinConfig(**kw)

    def test_json_roundtrip(self):
        cfg = GrushinConfig(d_prime=2, K=20, N_prime=32, tolerances={"hermite_tail": 1e-8})
        again = GrushinConfig.from_json(cfg.to_json())
        assert again == cfg and hash(again) == hash(cfg)

    def test_unknown_keys_rejected(self, config):
        data = config.to_dict()
        data["colour"] = "blue"
        with pytest.raises(ConfigError, match="unknown"):
            GrushinConfig.from_dict(data)

    def test_version_required(self, config):
        data = config.to_dict()
        data.pop("version")
        with pytest.raises(ConfigError, match="version"):
            GrushinConfig.from_dict(data)

    def test_bad_json(self):
        with pytest.raises(ConfigError):
            GrushinConfig.from_json("{not json")
        with pytest.raises(ConfigError):
            GrushinConfig.from_json(json.dumps([1, 2]))

    def test_with_recomputes_D(self, config):
        assert config.with_(d_doubleprime=2).D == 5

    def test_grid_geometry(self, config):
        xp = config.x_prime_axis()
        assert xp[0] == -config.L_prime and xp[-1] == config.L_prime
        xi = config.xi_axis()
        assert xi[config.xi_zero_index] == 0.0
        assert np.allclose(np.diff(xi), config.dxi)
        assert config.dxi == pytest.approx(np.pi / config.L_doubleprime)
        # trapezoid in x' times uniform in x'' integrates constants exactly
        assert config.weights("x").sum() == pytest.approx(2 * config.L_prime * 2 * config.L_doubleprime)


class TestGridFunction:
    def test_shape_check(self, config):
        with pytest.raises(ValueError):
            GridFunction(config, np.zeros((3, 3)))

    def test_immutable(self, config):
        g = GridFunction(config, np.zeros(config.shape))
        with pytest.raises(ValueError):
            g.values[0, 0] = 1.0

    def test_arithmetic_and_inner(self, config, rng):
        a = GridFunction(config, rng.standard_normal(config.shape))
        b = GridFunction(config, rng.standard_normal(config.shape))
        assert l2_norm(a + b) ** 2 == pytest.approx(
            l2_norm(a) ** 2 + l2_norm(b) ** 2 + 2 * l2_inner(a, b).real, rel=1e-12)
        assert l2_norm(a * 3.0) == pytest.approx(3 * l2_norm(a))
        assert l2_inner(a * 1j, b) == pytest.approx(1j * l2_inner(a, b))

    def test_config_mismatch(self, config, small2p):
        with pytest.raises(ValueError):
            GridFunction(config, np.zeros(config.shape)) + GridFunction(small2p, np.zeros(small2p.shape))

    def test_sample_gaussian_norm(self, config):
        g = sample(config, lambda x: np.exp(-np.sum(x * x, axis=-1) / 2))
        assert l2_norm(g) ** 2 == pytest.approx(np.pi, rel=1e-10)

    def test_sample_rejects_nan(self, config):
        with pytest.raises(ValueError):
            sample(config, lambda x: np.full(x.shape[:-1], np.nan))


class TestDual:
    def test_zero_frequency_entries_cleared(self, config):
        vals = np.ones((config.K + 1,) + config.xi_shape)
        F = DualCoefficients(config, vals)
        assert np.all(F.values[(slice(None),) + F.zero_index] == 0)

    def test_unit_norm(self, config):
        F = DualCoefficients.unit(config, 3, (config.xi_zero_index + 5,))
        assert dual_norm(F) == pytest.approx(np.sqrt(config.dxi))

    def test_unit_rejects_zero_frequency(self, config):
        with pytest.raises(ValueError):
            DualCoefficients.unit(config, 0, (config.xi_zero_index,))


class TestSymmetries:
    def test_rotation_is_isometric_involution(self, small2p, rng):
        g = GridFunction(small2p, rng.standard_normal(small2p.shape))
        kw = dict(perm_prime=[1, 0], flip_prime=[True, False], flip_dd=[True])
        r = rotate(g, **kw)
        assert l2_norm(r) == pytest.approx(l2_norm(g), rel=1e-12)
        back = rotate(rotate(r, flip_prime=[True, False], flip_dd=[True]), perm_prime=[1, 0])
        np.testing.assert_array_equal(back.values, g.values)

    def test_bad_permutation(self, small2p):
        g = GridFunction(small2p, np.zeros(small2p.shape))
        with pytest.raises(ValueError):
            rotate(g, perm_prime=[0, 0])

    def test_dilation_preserves_samples_and_scales_norm(self, config, rng):
        g = GridFunction(config, rng.standard_normal(config.shape))
        r = 2.0
        d = dilate(g, r)
        np.testing.assert_array_equal(d.values, g.values)
        assert d.config.L_prime == pytest.approx(config.L_prime / r)
        assert d.config.L_doubleprime == pytest.approx(config.L_doubleprime / r ** 2)
        # ||f(delta_r .)|| = r^{-D/2} ||f||
        assert l2_norm(d) == pytest.approx(r ** (-config.D / 2) * l2_norm(g), rel=1e-12)
