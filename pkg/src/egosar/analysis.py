"""Closed-form angle-error machinery.

Everything here is built from O(N) vector identities: the cumulative-sum
matrix ``L_N`` applied to a vector is a prefix sum, its transpose a suffix
sum, and the mean-removal projector subtracts the mean. No dense N x N
matrices are formed, so frame counts up to 1e6 stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UndefinedForN1, ZeroTangentialVelocity
from .radar import steering_derivative, steering_vector
from .velocity import tangential_velocity, velocity_covariance_terms

# ``u`` norms below this fraction of the velocity scale count as endfire.
_U_NORM_FLOOR = 1e-12


def _prefix_sum(x):
    return np.cumsum(x, axis=0)


def _suffix_sum(x):
    return np.cumsum(x[::-1], axis=0)[::-1]


def _demean(x):
    return x - x.mean(axis=0, keepdims=True)


def u_vector(velocity_track, theta):
    """Demeaned cumulative tangential-velocity vector (length N).

    ``u = P (L V p'(theta))`` where ``L`` is the lower-triangular all-ones
    matrix and ``P`` removes the mean. Its direction is the sensitivity of
    the demeaned range-migration profile to the angle hypothesis.
    """
    v = np.asarray(velocity_track, dtype=float)
    return _demean(_prefix_sum(v @ steering_derivative(theta)))


def omega(num_frames):
    """Frame-count gain factor in the angle-variance denominator.

    Defined as ``||P L 1||^4 / ||L^T P L 1||^2`` for N frames; it grows
    linearly in N (about 5N/6 for large N), so integrating more frames
    shrinks the angle variance accordingly.
    """
    n = int(num_frames)
    if n <= 1:
        raise UndefinedForN1("omega requires at least two frames")
    ramp = np.arange(1.0, n + 1.0)  # L @ ones
    centered = ramp - ramp.mean()
    norm4 = float(centered @ centered) ** 2
    tail = _suffix_sum(centered)  # L^T applied to the centered ramp
    norm2 = float(tail @ tail)
    return norm4 / norm2


@dataclass(frozen=True)
class AngleErrorPrediction:
    """Predicted SAR angle-estimation variance and its two noise components.

    ``variance = doppler_term + angle_term`` (rad^2); the split follows the
    linearity of the prediction in ``sigma_f^2`` and ``sigma_phi^2``.
    """

    variance: float
    doppler_term: float
    angle_term: float

    @property
    def std_rad(self) -> float:
        return float(np.sqrt(self.variance))


def _angle_factor(velocity_track, theta):
    """``u^T L L^T u / ||u||^4`` for a velocity track and target angle."""
    u = u_vector(velocity_track, theta)
    norm2 = float(u @ u)
    speed_scale = float(np.abs(np.asarray(velocity_track)).max()) + 1.0
    if norm2 <= (_U_NORM_FLOOR * speed_scale) ** 2:
        raise ZeroTangentialVelocity(
            "tangential velocity is zero at this angle; no angular sensitivity"
        )
    tail = _suffix_sum(u)
    return float(tail @ tail) / norm2**2


def angle_variance_general(velocity_track, theta, vel_cov, vel_cov_split=None):
    """Angle variance for an arbitrary velocity track and per-frame covariance.

    ``variance = (u^T L L^T u / ||u||^4) * p(theta)^T vel_cov p(theta)``,
    assuming i.i.d. per-frame velocity errors with covariance ``vel_cov``.

    ``vel_cov_split`` optionally carries ``(doppler_part, angle_part)`` whose
    sum is ``vel_cov``; the returned prediction then splits accordingly.
    Without it the whole variance is reported in ``doppler_term``.
    """
    factor = _angle_factor(velocity_track, theta)
    p = steering_vector(theta)
    if vel_cov_split is not None:
        cov_f, cov_phi = vel_cov_split
        doppler_term = factor * float(p @ np.asarray(cov_f, dtype=float) @ p)
        angle_term = factor * float(p @ np.asarray(cov_phi, dtype=float) @ p)
        return AngleErrorPrediction(doppler_term + angle_term, doppler_term, angle_term)
    variance = factor * float(p @ np.asarray(vel_cov, dtype=float) @ p)
    return AngleErrorPrediction(variance, variance, 0.0)


def angle_variance_full(velocity_track, theta, true_angles, velocity, config):
    """Full closed-form angle variance for a finite reflector scene.

    Composes the analytical velocity covariance (evaluated at the true
    reflector angles) into :func:`angle_variance_general`.
    """
    cov_f, cov_phi = velocity_covariance_terms(true_angles, velocity, config)
    return angle_variance_general(
        velocity_track, theta, cov_f + cov_phi, vel_cov_split=(cov_f, cov_phi)
    )


def angle_variance_asymptotic(theta, velocity, num_targets, num_frames, config):
    """Large-K closed form for constant velocity and uniformly spread reflectors.

    Uses the analytic averages over a uniform [-pi/2, pi/2] angle
    distribution: E[p p^T] = I/2 and
    E[v_t^2 p p^T] = 0.5 * [[vx^2/4 + 3 vy^2/4, -vx vy/2],
                            [-vx vy/2, 3 vx^2/4 + vy^2/4]].

    For motion along +y this reduces to
    ``(sigma_f^2 lam^2 + sigma_phi^2 vy^2 (1 + 2 sin^2 theta))
      / (2 K omega(N) vy^2 sin^2 theta)``.
    """
    velocity = np.asarray(velocity, dtype=float)
    vx, vy = velocity
    vt = tangential_velocity(velocity, theta)
    if vt == 0.0:
        raise ZeroTangentialVelocity(
            "tangential velocity is zero at this angle; no angular sensitivity"
        )
    lam = config.wavelength_m
    k = float(num_targets)
    om = omega(num_frames)
    p = steering_vector(theta)
    denom = 2.0 * k * om * vt**2
    doppler_term = config.sigma_f_hz**2 * lam**2 * float(p @ p) / denom
    m_angle = np.array(
        [
            [vx**2 + 3.0 * vy**2, -2.0 * vx * vy],
            [-2.0 * vx * vy, 3.0 * vx**2 + vy**2],
        ]
    )
    angle_term = config.sigma_phi_rad**2 * float(p @ m_angle @ p) / denom
    return AngleErrorPrediction(doppler_term + angle_term, doppler_term, angle_term)


@dataclass(frozen=True)
class LemmaReport:
    """Exact polynomial identities behind the omega(N) growth rate."""

    num_frames: int
    norm4_exact: float  # ||P L 1||^4, directly computed
    norm2_exact: float  # ||L^T P L 1||^2, directly computed
    omega: float

    @property
    def norm4_closed_form(self) -> float:
        """``N^2 (N^2 - 1)^2 / 144`` (exact for every N)."""
        n = float(self.num_frames)
        return n**2 * (n**2 - 1.0) ** 2 / 144.0


def suffix_element(i, num_frames):
    """Closed form for element i (1-based) of ``L^T P L 1``: (N-i+1)(i-1)/2."""
    n = float(num_frames)
    return (n - i + 1.0) * (i - 1.0) / 2.0


def lemma_polynomials(num_frames):
    """Directly computed norms behind omega(N), for comparison with closed forms."""
    n = int(num_frames)
    if n < 2:
        raise UndefinedForN1("need at least two frames")
    ramp = np.arange(1.0, n + 1.0)
    centered = ramp - ramp.mean()
    norm4 = float(centered @ centered) ** 2
    tail = _suffix_sum(centered)
    norm2 = float(tail @ tail)
    return LemmaReport(n, norm4, norm2, norm4 / norm2)
