import math

import numpy as np
import pytest

import niekf


def test_exp_log_round_trip():
    xi = np.array([0.1, -0.2, 0.3, 1.0, 2.0, -1.0, 0.5, 0.0, 0.2])
    x = niekf.exp_se23(xi)
    assert x.shape == (5, 5)
    np.testing.assert_allclose(niekf.log_se23(x), xi, atol=1e-12)


def test_zmatrix_constant_acceleration():
    z = niekf.zmatrix([0, 0, 0], [1, 0, 0], 0.01)
    np.testing.assert_allclose(z[:3, 3], [0.01, 0, 0], atol=1e-15)
    np.testing.assert_allclose(z[:3, 4], [5e-5, 0, 0], atol=1e-15)
    with pytest.raises(ValueError):
        niekf.zmatrix([0, 0, 0], [0, 0, 0], 0.0)


def test_phi_is_exponential_of_a():
    from scipy.linalg import expm

    w, a = np.array([0.3, -0.1, 0.2]), np.array([0.5, 0.1, 9.8])
    np.testing.assert_allclose(niekf.phi_blocks(w, a, 0.002), expm(niekf.matrix_A(w, a) * 0.002), atol=1e-12)


def test_equal_readings_cancel():
    x = niekf.propagate_mean(np.eye(5), [0.1, 0.2, 0.3], [1, 2, 3], [0.1, 0.2, 0.3], [1, 2, 3], 0.002)
    np.testing.assert_allclose(x, np.eye(5), atol=1e-15)


def test_leg_jacobian_matches_differences():
    q = np.array([0.1, -0.2, 0.3, -0.6, 0.2, 0.05])
    j = niekf.biped_leg_jacobian(q)
    h = 1e-6
    fd = np.column_stack(
        [(niekf.biped_leg_fk(q + h * e) - niekf.biped_leg_fk(q - h * e)) / (2 * h) for e in np.eye(6)]
    )
    np.testing.assert_allclose(j, fd, atol=1e-8)


def test_observability_patterns():
    still = niekf.observability(stationary=True)
    assert still["rank"] == 5
    assert still["classification"] == "YawAndPositionUnobservable"
    moving = niekf.observability(t0=0.3)
    assert moving["rank"] == 8
    assert abs(moving["null_space"][0][7]) == pytest.approx(1.0, abs=1e-8)


def test_compare_short_run():
    cfg = "[scenario]\nduration = 1\n[compare]\nsteady_state_start = 0.5\n"
    rows = niekf.compare(cfg, trials=2, seed=3)
    assert [r["trial"] for r in rows] == [0, 1]
    assert all(math.isfinite(v) for r in rows for v in r["proposed"].values())


def test_cli_usage_and_config_errors():
    code, _, _ = niekf.cli([])
    assert code == 2
    code, out, _ = niekf.cli(["observability", "--stationary"])
    assert code == 0 and "YawAndPositionUnobservable" in out
    with pytest.raises(RuntimeError):
        niekf.compare("[scenario]\nbogus = 1\n")
    assert "[ground]" in niekf.default_config()
