"""Config-driven Monte-Carlo experiment runner with reproducible CSV output.

Every per-trial RNG stream is derived from the entropy tuple
``(seed, sweep_index, theta_index, trial_index)``, so results are
bit-identical regardless of execution order or worker count, and every CSV
starts with a provenance comment (config hash, seed, tool version).
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import __version__
from .analysis import angle_variance_asymptotic, angle_variance_full, lemma_polynomials
from .errors import ConfigInvalid, DegenerateGeometry, InsufficientDetections, SingularGeometry
from .radar import (
    RadarConfig,
    Scene,
    constant_velocity_track,
    doppler_matrix,
    random_scene,
    spread_scene,
    velocity_from_heading,
)
from .sar import beamwidth_3db, estimate_sar_angle, sar_image
from .velocity import velocity_covariance_analytical

SWEEPABLE = ("sigma_phi_deg", "speed_mps", "num_targets", "num_frames", "aperture_m")


@dataclass(frozen=True)
class SweepSpec:
    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.name not in SWEEPABLE:
            raise ConfigInvalid(f"unknown sweep parameter {self.name!r}")
        if len(self.values) < 1:
            raise ConfigInvalid("sweep needs at least one value")


@dataclass(frozen=True)
class ExperimentConfig:
    """Full experiment definition; defaults give the baseline configuration."""

    carrier_hz: float = 77e9
    frame_duration_s: float = 20e-3
    sigma_phi_deg: float = 1.0
    sigma_f_hz: float = 50.0
    snr_db: float = 20.0
    speed_mps: float = 10.0
    heading_deg: float = 0.0
    num_targets: int = 5
    num_frames: int = 5
    theta_start_deg: float = 5.0
    theta_stop_deg: float = 85.0
    theta_step_deg: float = 5.0
    trials: int = 1000
    seed: int = 0
    sweep: SweepSpec | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigInvalid("trials must be >= 1")
        if self.theta_step_deg <= 0:
            raise ConfigInvalid("theta step must be positive")
        if self.theta_stop_deg < self.theta_start_deg:
            raise ConfigInvalid("theta interval is empty")
        if self.num_targets < 1 or self.num_frames < 1:
            raise ConfigInvalid("num_targets and num_frames must be >= 1")
        if self.speed_mps <= 0:
            raise ConfigInvalid("speed must be positive")
        if self.sweep is not None and any(v <= 0 for v in self.sweep.values):
            raise ConfigInvalid("sweep values must be positive")

    def radar_config(self) -> RadarConfig:
        return RadarConfig(
            carrier_frequency_hz=self.carrier_hz,
            frame_duration_s=self.frame_duration_s,
            sigma_phi_rad=np.deg2rad(self.sigma_phi_deg),
            sigma_f_hz=self.sigma_f_hz,
            snr_db=self.snr_db,
        )

    def velocity(self) -> np.ndarray:
        return velocity_from_heading(self.speed_mps, np.deg2rad(self.heading_deg))

    def theta_grid_deg(self) -> np.ndarray:
        n = int(np.floor((self.theta_stop_deg - self.theta_start_deg)
                         / self.theta_step_deg + 1e-9)) + 1
        return self.theta_start_deg + self.theta_step_deg * np.arange(n)

    def canonical_text(self) -> str:
        parts = []
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "sweep":
                value = (None if value is None
                         else f"{value.name}:{','.join(repr(float(v)) for v in value.values)}")
            parts.append(f"{f.name}={value!r}")
        return "\n".join(parts)

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:16]


def _apply_sweep(config: ExperimentConfig, name: str, value: float) -> ExperimentConfig:
    if name == "sigma_phi_deg":
        return replace(config, sigma_phi_deg=float(value))
    if name == "speed_mps":
        return replace(config, speed_mps=float(value))
    if name == "num_targets":
        return replace(config, num_targets=int(round(value)))
    if name == "num_frames":
        return replace(config, num_frames=int(round(value)))
    if name == "aperture_m":
        n = frames_for_aperture(value, config.speed_mps, config.frame_duration_s)
        return replace(config, num_frames=n)
    raise ConfigInvalid(f"unknown sweep parameter {name!r}")


def frames_for_aperture(aperture_m, speed_mps, frame_duration_s) -> int:
    """Frame count whose synthetic aperture best matches ``aperture_m``."""
    n = int(round(aperture_m / (speed_mps * frame_duration_s)))
    return max(n, 2)


def effective_sweep(config: ExperimentConfig) -> SweepSpec:
    """The configured sweep, or a single-point sweep over sigma_phi_deg."""
    if config.sweep is not None:
        return config.sweep
    return SweepSpec("sigma_phi_deg", (config.sigma_phi_deg,))


# --- config-file parsing -----------------------------------------------

_INT_KEYS = {"num_targets", "num_frames", "trials", "seed"}


def parse_config_text(text: str) -> ExperimentConfig:
    """Parse ``key = value`` lines (# comments allowed) into a config."""
    values: dict[str, object] = {}
    sweep_name = None
    sweep_values = None
    known = {f.name for f in fields(ExperimentConfig)} - {"sweep"}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigInvalid(f"line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "sweep.name":
            sweep_name = value
        elif key == "sweep.values":
            try:
                sweep_values = tuple(float(v) for v in value.split(","))
            except ValueError as exc:
                raise ConfigInvalid(f"line {lineno}: bad sweep values") from exc
        elif key in known:
            try:
                values[key] = int(value) if key in _INT_KEYS else float(value)
            except ValueError as exc:
                raise ConfigInvalid(f"line {lineno}: bad value for {key}") from exc
        else:
            raise ConfigInvalid(f"line {lineno}: unknown key {key!r}")
    if (sweep_name is None) != (sweep_values is None):
        raise ConfigInvalid("sweep.name and sweep.values must be given together")
    if sweep_name is not None:
        values["sweep"] = SweepSpec(sweep_name, sweep_values)
    return ExperimentConfig(**values)


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read())


# --- CSV output ---------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (bool, int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.9g}"
    return str(value)


def write_csv(path, columns, rows, config: ExperimentConfig) -> None:
    """Write rows with a provenance comment line and 9-significant-digit floats."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            f"# config_hash={config.config_hash()} seed={config.seed} "
            f"version={__version__}\n"
        )
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


# --- RMSE sweep ---------------------------------------------------------


@dataclass(frozen=True)
class RmsePoint:
    sweep_value: float
    theta_deg: float
    rmse_sim_deg: float
    rmse_analysis_deg: float
    rmse_asymptotic_deg: float
    trials_used: int
    failed_trials: int


RMSE_COLUMNS = (
    "sweep_value",
    "theta_deg",
    "rmse_sim_deg",
    "rmse_analysis_deg",
    "rmse_asymptotic_deg",
    "trials_used",
    "failed_trials",
)


def _rmse_point(args):
    config, sweep_index, theta_index = args
    sweep = effective_sweep(config)
    point_config = _apply_sweep(config, sweep.name, sweep.values[sweep_index])
    rc = point_config.radar_config()
    v = point_config.velocity()
    track = constant_velocity_track(v, point_config.num_frames)
    theta = float(np.deg2rad(point_config.theta_grid_deg()[theta_index]))

    sq_errors = []
    variances = []
    failed = 0
    for trial in range(point_config.trials):
        rng = np.random.default_rng(
            [point_config.seed, sweep_index, theta_index, trial]
        )
        scene = random_scene(point_config.num_targets, theta, rng, rc)
        try:
            variance = angle_variance_full(
                track, theta, scene.reflector_angles_rad, v, rc
            ).variance
            estimate = estimate_sar_angle(scene, track, rc, rng)
        except (SingularGeometry, InsufficientDetections):
            failed += 1
            continue
        sq_errors.append((estimate - theta) ** 2)
        variances.append(variance)
    used = len(sq_errors)
    rmse_sim = float(np.sqrt(np.mean(sq_errors))) if used else float("nan")
    rmse_analysis = float(np.sqrt(np.mean(variances))) if used else float("nan")
    asym = angle_variance_asymptotic(
        theta, v, point_config.num_targets, point_config.num_frames, rc
    )
    return RmsePoint(
        sweep_value=float(sweep.values[sweep_index]),
        theta_deg=float(point_config.theta_grid_deg()[theta_index]),
        rmse_sim_deg=float(np.rad2deg(rmse_sim)),
        rmse_analysis_deg=float(np.rad2deg(rmse_analysis)),
        rmse_asymptotic_deg=float(np.rad2deg(asym.std_rad)),
        trials_used=used,
        failed_trials=failed,
    )


def run_rmse_sweep(config: ExperimentConfig, threads: int = 1):
    """Monte-Carlo RMSE vs closed-form predictions over the sweep x theta grid.

    Per trial the reflector scene is redrawn uniformly over the field of
    view; the analysis column averages the full closed-form variance over
    the same per-trial scenes. Trials that hit a singular reflector geometry
    are counted in ``failed_trials`` and excluded.
    """
    sweep = effective_sweep(config)
    thetas = config.theta_grid_deg()
    tasks = [
        (config, si, ti)
        for si in range(len(sweep.values))
        for ti in range(len(thetas))
    ]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_rmse_point, tasks))
    return [_rmse_point(t) for t in tasks]


# --- resolution sweep ---------------------------------------------------

RESOLUTION_COLUMNS = ("theta_deg", "aperture_m", "beamwidth_deg")


def run_resolution_sweep(apertures_m, config: ExperimentConfig):
    """Noiseless 3 dB beamwidth over the theta grid for each aperture.

    The frame count is derived from the aperture and speed; endfire rows
    (no angular response) are recorded with an unbounded beamwidth.
    """
    rc = config.radar_config()
    v = config.velocity()
    rows = []
    for theta_deg in config.theta_grid_deg():
        theta = float(np.deg2rad(theta_deg))
        for aperture in apertures_m:
            n = frames_for_aperture(aperture, config.speed_mps, config.frame_duration_s)
            track = constant_velocity_track(v, n)
            try:
                width = float(np.rad2deg(beamwidth_3db(track, theta, rc)))
            except DegenerateGeometry:
                width = float("inf")
            rows.append((float(theta_deg), float(aperture), width))
    return rows


# --- gain / degradation report -------------------------------------------

GAIN_COLUMNS = ("theta_deg", "sweep_value", "gain_ratio", "degradation_ratio")


def run_gain_report(config: ExperimentConfig):
    """Closed-form gain over the physical array and degradation vs resolution.

    ``gain_ratio = sigma_phi / sqrt(full angle variance)`` and
    ``degradation_ratio = sqrt(full angle variance) / beamwidth`` with the
    beamwidth measured at known velocity. The full variance is evaluated on
    a deterministic evenly-spread reflector scene, the reproducible stand-in
    for the uniformly random scenes of the Monte-Carlo runs.
    """
    sweep = effective_sweep(config)
    rows = []
    for theta_deg in config.theta_grid_deg():
        theta = float(np.deg2rad(theta_deg))
        for value in sweep.values:
            point_config = _apply_sweep(config, sweep.name, value)
            if point_config.sigma_phi_deg <= 0:
                raise ConfigInvalid("gain report requires sigma_phi > 0")
            rc = point_config.radar_config()
            v = point_config.velocity()
            track = constant_velocity_track(v, point_config.num_frames)
            scene = spread_scene(point_config.num_targets, theta, rc)
            std = angle_variance_full(
                track, theta, scene.reflector_angles_rad, v, rc
            ).std_rad
            gain = rc.sigma_phi_rad / std
            width = beamwidth_3db(track, theta, rc)
            rows.append((float(theta_deg), float(value), float(gain), float(std / width)))
    return rows


# --- velocity covariance report ------------------------------------------

VELCOV_COLUMNS = (
    "sigma_phi_deg",
    "speed_mps",
    "num_targets",
    "std_sim_mps",
    "std_analysis_mps",
)


def _batched_ls_velocity(true_angles, velocity, rc, trials, rng):
    """Vectorized per-frame LS velocity estimates over noise realizations.

    Same estimator as :func:`egosar.velocity.estimate_velocity`, solved via
    the 2x2 normal equations simultaneously for all trials.
    """
    lam = rc.wavelength_m
    f_true = doppler_matrix(true_angles, lam) @ velocity
    k = true_angles.size
    f = f_true[None, :] + rc.sigma_f_hz * rng.standard_normal((trials, k))
    phi = true_angles[None, :] + rc.sigma_phi_rad * rng.standard_normal((trials, k))
    s = (2.0 / lam) * np.sin(phi)
    c = (2.0 / lam) * np.cos(phi)
    a = np.einsum("tk,tk->t", s, s)
    b = np.einsum("tk,tk->t", s, c)
    d = np.einsum("tk,tk->t", c, c)
    r1 = np.einsum("tk,tk->t", s, f)
    r2 = np.einsum("tk,tk->t", c, f)
    det = a * d - b * b
    vx = (d * r1 - b * r2) / det
    vy = (a * r2 - b * r1) / det
    return np.stack([vx, vy], axis=1)


def run_velocity_cov_report(config: ExperimentConfig,
                            sigma_phi_deg_values=(1.0, 3.0, 10.0),
                            speed_values=(3.0, 10.0, 25.0),
                            num_targets_values=(5, 10)):
    """Monte-Carlo vs analytical velocity-error std over a parameter cross.

    For each setting the reflector scene is frozen (drawn once from the
    seed); ``std`` is the square root of the trace of the covariance.
    """
    rows = []
    for si, sigma_phi in enumerate(sigma_phi_deg_values):
        for vi, speed in enumerate(speed_values):
            for ki, k in enumerate(num_targets_values):
                point_config = replace(
                    config, sigma_phi_deg=float(sigma_phi), speed_mps=float(speed),
                    num_targets=int(k),
                )
                rc = point_config.radar_config()
                v = point_config.velocity()
                rng = np.random.default_rng([config.seed, si, vi, ki])
                scene = random_scene(int(k), 0.0, rng, rc)
                estimates = _batched_ls_velocity(
                    scene.reflector_angles_rad, v, rc, config.trials, rng
                )
                sample_cov = np.cov(estimates.T)
                std_sim = float(np.sqrt(np.trace(sample_cov)))
                analytical = velocity_covariance_analytical(
                    scene.reflector_angles_rad, v, rc
                )
                std_analysis = float(np.sqrt(np.trace(analytical)))
                rows.append((float(sigma_phi), float(speed), int(k), std_sim, std_analysis))
    return rows


# --- lemma check ----------------------------------------------------------

LEMMA_COLUMNS = ("N", "norm4_direct", "norm4_closed_form", "norm2_direct", "omega")


def run_lemma_check(n_values):
    rows = []
    for n in n_values:
        report = lemma_polynomials(int(n))
        rows.append(
            (
                int(n),
                report.norm4_exact,
                report.norm4_closed_form,
                report.norm2_exact,
                report.omega,
            )
        )
    return rows


# --- prediction table ------------------------------------------------------

PREDICT_COLUMNS = (
    "theta_deg",
    "rmse_analysis_deg",
    "rmse_asymptotic_deg",
    "gain_ratio",
    "beamwidth_deg",
)


def run_predict(config: ExperimentConfig):
    """Single-point closed-form evaluation over the theta grid."""
    rc = config.radar_config()
    v = config.velocity()
    track = constant_velocity_track(v, config.num_frames)
    rows = []
    for theta_deg in config.theta_grid_deg():
        theta = float(np.deg2rad(theta_deg))
        scene = spread_scene(config.num_targets, theta, rc)
        full = angle_variance_full(track, theta, scene.reflector_angles_rad, v, rc)
        asym = angle_variance_asymptotic(
            theta, v, config.num_targets, config.num_frames, rc
        )
        gain = rc.sigma_phi_rad / full.std_rad if rc.sigma_phi_rad > 0 else float("inf")
        width = float(np.rad2deg(beamwidth_3db(track, theta, rc)))
        rows.append(
            (
                float(theta_deg),
                float(np.rad2deg(full.std_rad)),
                float(np.rad2deg(asym.std_rad)),
                float(gain),
                width,
            )
        )
    return rows


# --- ambiguity image --------------------------------------------------------


def run_image(config: ExperimentConfig, target_range_m=28.0, target_angle_deg=6.0,
              delta_v=(0.0, 0.03), range_half_span_m=3.0, range_step_m=0.05,
              angle_half_span_deg=6.0, angle_step_deg=0.02):
    """Range-angle image of one point target under a velocity-estimate offset.

    ``delta_v`` is the constant (x, y) error added to the hypothesis
    velocity of every frame.
    """
    rc = config.radar_config()
    v = config.velocity()
    track_true = constant_velocity_track(v, config.num_frames)
    track_hyp = track_true + np.asarray(delta_v, dtype=float)
    theta = float(np.deg2rad(target_angle_deg))
    scene = Scene(
        reflector_angles_rad=np.array([theta]),
        target_angle_rad=theta,
        target_range_m=target_range_m,
        reflector_ranges_m=np.array([target_range_m]),
    )
    n_r = int(np.floor(2 * range_half_span_m / range_step_m + 1e-9)) + 1
    range_axis = target_range_m - range_half_span_m + range_step_m * np.arange(n_r)
    n_a = int(np.floor(2 * angle_half_span_deg / angle_step_deg + 1e-9)) + 1
    angle_axis_deg = target_angle_deg - angle_half_span_deg + angle_step_deg * np.arange(n_a)
    return sar_image(
        scene, track_true, track_hyp, rc, range_axis, np.deg2rad(angle_axis_deg)
    )


def write_image_csv(image, path, config: ExperimentConfig) -> None:
    """Image grid as CSV: header row = angle axis (deg), first column = range (m)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            f"# config_hash={config.config_hash()} seed={config.seed} "
            f"version={__version__}\n"
        )
        angles_deg = np.rad2deg(image.angle_axis_rad)
        fh.write("range_m," + ",".join(_fmt(a) for a in angles_deg) + "\n")
        for i, r in enumerate(image.range_axis_m):
            cells = ",".join(_fmt(x) for x in image.intensity_db[i])
            fh.write(_fmt(r) + "," + cells + "\n")
