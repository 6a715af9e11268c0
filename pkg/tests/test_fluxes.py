import math

import numpy as np
import pytest

from relaxeuler import BlowUpError, ModelParams, pressure, rusanov_flux

P14 = ModelParams(epsilon=1.0, beta=1.0, gamma=1.4)


def test_consistency_at_rest():
    f = rusanov_flux((1.0, 0.0), (1.0, 0.0), P14)
    assert f.f_rho == 0.0
    assert f.f_conv == 0.0
    assert f.f_prs == 1.0


def test_sod_interface_values():
    f = rusanov_flux((1.0, 0.0), (0.125, 0.0), P14)
    a = math.sqrt(1.4)
    assert f.f_rho == pytest.approx(-0.5 * a * (0.125 - 1.0), rel=1e-12)
    assert f.f_conv == 0.0  # no convection, no velocity dissipation on q
    assert f.f_prs == pytest.approx(0.5 * (1.0 + 0.125**1.4), rel=1e-13)


def test_consistency_moving_state():
    f = rusanov_flux((1.0, 0.5), (1.0, 0.5), P14)
    assert f.f_rho == pytest.approx(0.5, rel=1e-14)
    assert f.f_conv == pytest.approx(0.25, rel=1e-14)
    assert f.f_prs == pytest.approx(1.0, rel=1e-14)


def test_consistency_on_random_states():
    rng = np.random.default_rng(23)
    for _ in range(100):
        rho = rng.uniform(0.05, 5.0)
        q = rng.uniform(-2.0, 2.0)
        gamma = rng.choice([1.0, 1.4, 2.0])
        eps = rng.choice([1.0, 0.1])
        params = ModelParams(epsilon=float(eps), beta=1.0, gamma=float(gamma))
        f = rusanov_flux((rho, q), (rho, q), params)
        assert f.f_rho == pytest.approx(q, rel=1e-13, abs=1e-13)
        assert f.f_conv == pytest.approx(q * q / rho, rel=1e-13, abs=1e-13)
        assert f.f_prs == pytest.approx(pressure(rho, float(gamma)), rel=1e-13)


def test_vectorized_matches_scalar():
    rho_l = np.array([1.0, 0.5])
    q_l = np.array([0.2, -0.1])
    rho_r = np.array([0.8, 0.7])
    q_r = np.array([0.0, 0.3])
    fv = rusanov_flux((rho_l, q_l), (rho_r, q_r), P14)
    for i in range(2):
        fs = rusanov_flux((rho_l[i], q_l[i]), (rho_r[i], q_r[i]), P14)
        assert fv.f_rho[i] == fs.f_rho
        assert fv.f_conv[i] == fs.f_conv
        assert fv.f_prs[i] == fs.f_prs


def test_nan_input_raises():
    with pytest.raises(BlowUpError):
        rusanov_flux((float("nan"), 0.0), (1.0, 0.0), P14)
    with pytest.raises(BlowUpError):
        rusanov_flux((1.0, 0.0), (1.0, float("inf")), P14)
