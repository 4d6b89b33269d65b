"""Per-frame least-squares ego-velocity estimation and its error covariance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDetections, SingularGeometry
from .radar import doppler_matrix, steering_derivative, steering_vector

# Relative singular-value threshold below which the reflector geometry is
# treated as collinear.
RANK_TOLERANCE = 1e-10


@dataclass(frozen=True)
class VelocityEstimate:
    """Least-squares velocity estimate for one frame.

    ``covariance`` is not computed by the estimator itself (it depends on the
    unknown true geometry); fill it from :func:`velocity_covariance_analytical`
    when the true angles are available.
    """

    v_hat: np.ndarray
    residual_norm: float
    covariance: np.ndarray | None = None


def tangential_velocity(velocity, theta):
    """Velocity component perpendicular to the line of sight at ``theta``.

    Equals ``v_x*cos(theta) - v_y*sin(theta)``; it drives both the synthetic
    aperture's angular sensitivity and the angle-noise leverage on the
    velocity estimate.
    """
    velocity = np.asarray(velocity, dtype=float)
    return float(velocity @ steering_derivative(theta))


def _check_rank(g):
    s = np.linalg.svd(g, compute_uv=False)
    if s[-1] <= RANK_TOLERANCE * s[0]:
        raise SingularGeometry(
            "reflector angles are collinear; velocity is unobservable"
        )
    return s


def estimate_velocity(detections, wavelength):
    """Least-squares 2-D velocity from one frame of Doppler/angle detections.

    Minimizes ``0.5 * ||G(angles) v - dopplers||^2`` over v, using the
    measured (noisy) angles in G. Solved through an SVD rather than the
    normal equations for numerical stability.

    Raises
    ------
    InsufficientDetections : fewer than two detections.
    SingularGeometry : all measured angles equal up to numerical tolerance.
    """
    if len(detections) < 2:
        raise InsufficientDetections("need at least two detections per frame")
    g = doppler_matrix(detections.angles_rad, wavelength)
    _check_rank(g)
    v_hat, *_ = np.linalg.lstsq(g, detections.dopplers_hz, rcond=None)
    residual = float(np.linalg.norm(g @ v_hat - detections.dopplers_hz))
    return VelocityEstimate(v_hat=v_hat, residual_norm=residual)


def velocity_covariance_terms(true_angles, velocity, config):
    """Doppler-noise and angle-noise parts of the estimate covariance.

    Returns ``(cov_doppler, cov_angle)`` whose sum is the first-order
    covariance of the per-frame least-squares velocity estimate:

        cov_doppler = sigma_f^2 * Gamma
        cov_angle   = sigma_phi^2 * Gamma G^T D^2 G Gamma

    with ``Gamma = (G^T G)^(-1)`` and ``D`` the diagonal matrix of
    ``(2/lambda) * tangential_velocity(v, phi_i)``. Both matrices are
    evaluated at the true reflector angles.
    """
    true_angles = np.atleast_1d(np.asarray(true_angles, dtype=float))
    if true_angles.size < 2:
        raise InsufficientDetections("need at least two reflectors")
    velocity = np.asarray(velocity, dtype=float)
    lam = config.wavelength_m
    g = doppler_matrix(true_angles, lam)
    _check_rank(g)
    gamma = np.linalg.inv(g.T @ g)
    cov_doppler = config.sigma_f_hz**2 * gamma
    d_diag = (2.0 / lam) * (steering_derivative(true_angles) @ velocity)
    gtd2g = (g * d_diag[:, None] ** 2).T @ g
    cov_angle = config.sigma_phi_rad**2 * (gamma @ gtd2g @ gamma)
    return cov_doppler, cov_angle


def velocity_covariance_analytical(true_angles, velocity, config):
    """First-order covariance of the per-frame velocity estimate (2 x 2)."""
    cov_doppler, cov_angle = velocity_covariance_terms(true_angles, velocity, config)
    return cov_doppler + cov_angle


def scene_doppler_vector(true_angles, velocity, wavelength):
    """Noiseless Doppler vector ``G(angles) @ velocity`` of a static scene."""
    return doppler_matrix(true_angles, wavelength) @ np.asarray(velocity, dtype=float)


__all__ = [
    "VelocityEstimate",
    "estimate_velocity",
    "velocity_covariance_analytical",
    "velocity_covariance_terms",
    "tangential_velocity",
    "scene_doppler_vector",
    "steering_vector",
]
