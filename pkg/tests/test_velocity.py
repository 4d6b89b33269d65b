import numpy as np
import pytest

from egosar import (
    FrameDetections,
    InsufficientDetections,
    RadarConfig,
    SingularGeometry,
    doppler_matrix,
    estimate_velocity,
    simulate_frame_detections,
    tangential_velocity,
    velocity_covariance_analytical,
    velocity_covariance_terms,
)
from egosar.radar import Scene, spread_scene

CFG = RadarConfig()
LAM = CFG.wavelength_m


def _noiseless(angles, v):
    return FrameDetections(doppler_matrix(angles, LAM) @ np.asarray(v, float), angles)


def test_exact_recovery_orthogonal_pair():
    det = _noiseless(np.array([np.pi / 2, 0.0]), [1.0, 10.0])
    est = estimate_velocity(det, LAM)
    assert np.allclose(est.v_hat, [1.0, 10.0], atol=1e-12)
    assert est.residual_norm < 1e-9


@pytest.mark.parametrize("seed", range(5))
def test_zero_noise_exact_recovery_random_scenes(seed):
    rng = np.random.default_rng(seed)
    angles = rng.uniform(-np.pi / 2, np.pi / 2, rng.integers(2, 12))
    v = rng.uniform(-20, 20, 2)
    est = estimate_velocity(_noiseless(angles, v), LAM)
    assert np.allclose(est.v_hat, v, atol=1e-9)


def test_identical_angles_raise_singular():
    det = _noiseless(np.array([0.5236, 0.5236]), [0.0, 10.0])
    with pytest.raises(SingularGeometry):
        estimate_velocity(det, LAM)


def test_single_detection_raises():
    det = _noiseless(np.array([0.3]), [0.0, 10.0])
    with pytest.raises(InsufficientDetections):
        estimate_velocity(det, LAM)


def test_tangential_velocity_examples():
    assert tangential_velocity([0.0, 10.0], 0.0) == 0.0
    assert abs(tangential_velocity([0.0, 10.0], np.pi / 2) + 10.0) < 1e-12
    assert abs(tangential_velocity([3.0, 4.0], np.pi / 6) - 0.598) < 1e-3


def test_covariance_sigma_phi_zero_reduces_to_doppler_term():
    cfg = RadarConfig(sigma_phi_rad=0.0)
    angles = np.array([0.2, -0.7, 1.1])
    g = doppler_matrix(angles, cfg.wavelength_m)
    gamma = np.linalg.inv(g.T @ g)
    cov = velocity_covariance_analytical(angles, [0.0, 10.0], cfg)
    assert np.allclose(cov, cfg.sigma_f_hz**2 * gamma, rtol=1e-12)


def test_covariance_orthogonal_pair_closed_form():
    angles = np.array([np.pi / 2, 0.0])
    v = np.array([3.0, 4.0])
    cov = velocity_covariance_analytical(angles, v, CFG)
    expected = CFG.sigma_f_hz**2 * (LAM**2 / 4) * np.eye(2)
    expected += CFG.sigma_phi_rad**2 * np.diag([v[1] ** 2, v[0] ** 2])
    assert np.allclose(cov, expected, rtol=1e-12)


def test_covariance_symmetric_psd_and_permutation_invariant():
    rng = np.random.default_rng(8)
    angles = rng.uniform(-1.4, 1.4, 9)
    cov = velocity_covariance_analytical(angles, [2.0, 12.0], CFG)
    assert np.allclose(cov, cov.T)
    assert np.all(np.linalg.eigvalsh(cov) >= -1e-15)
    shuffled = velocity_covariance_analytical(angles[::-1], [2.0, 12.0], CFG)
    assert np.allclose(cov, shuffled, rtol=1e-12)


def test_covariance_trace_nondecreasing_in_speed():
    angles = np.random.default_rng(3).uniform(-1.2, 1.2, 6)
    traces = [
        np.trace(velocity_covariance_analytical(angles, [0.0, s], CFG))
        for s in (1.0, 5.0, 10.0, 20.0, 25.0)
    ]
    assert all(b >= a - 1e-15 for a, b in zip(traces, traces[1:]))


def test_covariance_monte_carlo_agreement():
    # 1e4 trials on a frozen scene: each covariance entry within 10%.
    rng = np.random.default_rng(2024)
    k = 10
    scene = Scene(rng.uniform(-np.pi / 2, np.pi / 2, k), target_angle_rad=0.0)
    v = np.array([0.0, 10.0])
    trials = 10_000
    estimates = np.empty((trials, 2))
    for t in range(trials):
        det = simulate_frame_detections(scene, v, CFG, rng)
        estimates[t] = estimate_velocity(det, CFG.wavelength_m).v_hat
    emp = np.cov(estimates.T)
    ana = velocity_covariance_analytical(scene.reflector_angles_rad, v, CFG)
    assert np.all(np.abs(emp - ana) <= 0.10 * np.abs(ana))


def test_covariance_terms_sum():
    angles = np.array([0.4, -0.2, 0.9])
    cov_f, cov_phi = velocity_covariance_terms(angles, [1.0, 8.0], CFG)
    total = velocity_covariance_analytical(angles, [1.0, 8.0], CFG)
    assert np.allclose(cov_f + cov_phi, total)


def test_large_k_gamma_limit():
    # K * Gamma -> (lambda^2 / 2) I for reflectors evenly spread over the FOV.
    k = 10_000
    angles = spread_scene(k, 0.0).reflector_angles_rad
    g = doppler_matrix(angles, LAM)
    gamma = np.linalg.inv(g.T @ g)
    target = (LAM**2 / 2.0) * np.eye(2)
    assert np.linalg.norm(k * gamma - target) / np.linalg.norm(target) < 0.05
