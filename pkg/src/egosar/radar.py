"""Sensor model, scene geometry and the per-frame detection simulator.

Coordinate convention: the radar boresight (driving direction) is the +y
axis, angles are measured in radians from boresight, and the direction
vector to a reflector at angle ``theta`` is ``[sin(theta), cos(theta)]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigInvalid

SPEED_OF_LIGHT = 299_792_458.0  # m/s

HALF_PI = np.pi / 2.0


def steering_vector(theta):
    """Unit direction vector(s) ``[sin(theta), cos(theta)]``.

    Accepts a scalar angle (returns shape ``(2,)``) or an array of angles
    (returns shape ``(..., 2)``).
    """
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.sin(theta), np.cos(theta)], axis=-1)


def steering_derivative(theta):
    """Derivative of :func:`steering_vector`: ``[cos(theta), -sin(theta)]``."""
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), -np.sin(theta)], axis=-1)


def doppler_matrix(angles, wavelength):
    """K x 2 matrix mapping a 2-D velocity to the K reflector Dopplers.

    Row i is ``(2 / wavelength) * steering_vector(angles[i])``, so the
    noiseless Doppler vector of a scene moving at velocity ``v`` is
    ``doppler_matrix(angles, wavelength) @ v``.
    """
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    return (2.0 / wavelength) * steering_vector(angles)


@dataclass(frozen=True)
class RadarConfig:
    """Fixed sensor model for one experiment.

    Attributes
    ----------
    carrier_frequency_hz : carrier frequency; the wavelength is derived.
    frame_duration_s : duration of one processing frame.
    sigma_phi_rad : std of the per-detection angle measurement error.
    sigma_f_hz : std of the per-detection Doppler measurement error.
    snr_db : SNR at the per-frame matched-filter output (``inf`` = noiseless).
    field_of_view : (low, high) angular interval covered by the array.
    """

    carrier_frequency_hz: float = 77e9
    frame_duration_s: float = 20e-3
    sigma_phi_rad: float = np.deg2rad(1.0)
    sigma_f_hz: float = 50.0
    snr_db: float = 20.0
    field_of_view: tuple[float, float] = (-HALF_PI, HALF_PI)

    def __post_init__(self):
        if self.carrier_frequency_hz <= 0:
            raise ConfigInvalid("carrier frequency must be positive")
        if self.frame_duration_s <= 0:
            raise ConfigInvalid("frame duration must be positive")
        if self.sigma_phi_rad < 0 or self.sigma_f_hz < 0:
            raise ConfigInvalid("noise levels must be nonnegative")
        lo, hi = self.field_of_view
        if not (-HALF_PI <= lo < hi <= HALF_PI):
            raise ConfigInvalid("field of view must be a nonempty sub-interval of [-pi/2, pi/2]")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency_hz

    @property
    def phasor_noise_scale(self) -> float:
        """Amplitude scale of the complex noise on a unit matched-filter output."""
        if np.isinf(self.snr_db):
            return 0.0
        return float(np.sqrt(10.0 ** (-self.snr_db / 10.0)))


@dataclass(frozen=True)
class Scene:
    """Static reflectors used for velocity estimation plus one imaged target.

    ``reflector_ranges_m`` is only needed for range-angle imaging and may be
    omitted for the angle-error experiments.
    """

    reflector_angles_rad: np.ndarray
    target_angle_rad: float
    target_range_m: float = 30.0
    reflector_ranges_m: np.ndarray | None = None

    def __post_init__(self):
        angles = np.atleast_1d(np.asarray(self.reflector_angles_rad, dtype=float))
        object.__setattr__(self, "reflector_angles_rad", angles)
        if angles.size < 1:
            raise ConfigInvalid("scene needs at least one reflector")
        if self.target_range_m <= 0:
            raise ConfigInvalid("target range must be positive")
        if self.reflector_ranges_m is not None:
            ranges = np.atleast_1d(np.asarray(self.reflector_ranges_m, dtype=float))
            object.__setattr__(self, "reflector_ranges_m", ranges)
            if ranges.shape != angles.shape:
                raise ConfigInvalid("reflector ranges must match reflector angles")
            if np.any(ranges <= 0):
                raise ConfigInvalid("reflector ranges must be positive")

    @property
    def num_reflectors(self) -> int:
        return int(self.reflector_angles_rad.size)


def random_scene(num_reflectors, target_angle_rad, rng, config=None,
                 target_range_m=30.0):
    """Scene with reflector angles drawn uniformly over the field of view."""
    fov = config.field_of_view if config is not None else (-HALF_PI, HALF_PI)
    angles = rng.uniform(fov[0], fov[1], size=num_reflectors)
    return Scene(angles, float(target_angle_rad), target_range_m)


def spread_scene(num_reflectors, target_angle_rad, config=None,
                 target_range_m=30.0):
    """Deterministic scene with reflectors evenly spread over the field of view.

    Uses midpoint spacing, so the direction-vector second moment matches
    the uniform-distribution average as closely as possible for small K.
    """
    fov = config.field_of_view if config is not None else (-HALF_PI, HALF_PI)
    width = fov[1] - fov[0]
    k = int(num_reflectors)
    angles = fov[0] + (np.arange(k) + 0.5) * width / k
    return Scene(angles, float(target_angle_rad), target_range_m)


@dataclass(frozen=True)
class FrameDetections:
    """Noisy Doppler/angle measurements of the K static reflectors in one frame."""

    dopplers_hz: np.ndarray
    angles_rad: np.ndarray

    def __post_init__(self):
        f = np.atleast_1d(np.asarray(self.dopplers_hz, dtype=float))
        a = np.atleast_1d(np.asarray(self.angles_rad, dtype=float))
        if f.shape != a.shape:
            raise ConfigInvalid("doppler and angle vectors must have equal length")
        object.__setattr__(self, "dopplers_hz", f)
        object.__setattr__(self, "angles_rad", a)

    def __len__(self) -> int:
        return int(self.dopplers_hz.size)


def simulate_frame_detections(scene, velocity, config, rng):
    """Simulate one frame of noisy reflector detections.

    True Dopplers are ``G(phi) @ velocity``; Gaussian noise with std
    ``sigma_f_hz`` / ``sigma_phi_rad`` is added independently per reflector.
    Measured angles are not clamped to the field of view: the noise model is
    unbounded and clamping would bias the velocity estimator.
    """
    velocity = np.asarray(velocity, dtype=float)
    phi = scene.reflector_angles_rad
    f_true = doppler_matrix(phi, config.wavelength_m) @ velocity
    f_meas = f_true + config.sigma_f_hz * rng.standard_normal(phi.size)
    phi_meas = phi + config.sigma_phi_rad * rng.standard_normal(phi.size)
    return FrameDetections(f_meas, phi_meas)


def constant_velocity_track(velocity, num_frames):
    """N x 2 velocity matrix with the same velocity in every frame."""
    velocity = np.asarray(velocity, dtype=float).reshape(2)
    return np.tile(velocity, (int(num_frames), 1))


def velocity_from_heading(speed_mps, heading_rad=0.0):
    """2-D velocity for a speed and heading (0 = straight along +y)."""
    return np.array([speed_mps * np.sin(heading_rad), speed_mps * np.cos(heading_rad)])
