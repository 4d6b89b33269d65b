"""Angle-accuracy toolkit for automotive SAR with radar-only ego-velocity.

Simulates the full measurement chain (noisy per-frame Doppler/angle
detections, least-squares velocity estimation, coherent multi-frame
integration, peak extraction) and evaluates the matching closed-form
error predictions, so the two can be compared config-by-config.
"""

from .errors import (
    ConfigInvalid,
    DegenerateGeometry,
    DimensionMismatch,
    EgosarError,
    InsufficientDetections,
    MissingRanges,
    SingularGeometry,
    UndefinedForN1,
    ZeroTangentialVelocity,
)
from .radar import (
    SPEED_OF_LIGHT,
    FrameDetections,
    RadarConfig,
    Scene,
    constant_velocity_track,
    doppler_matrix,
    random_scene,
    simulate_frame_detections,
    spread_scene,
    steering_derivative,
    steering_vector,
    velocity_from_heading,
)
from .velocity import (
    VelocityEstimate,
    estimate_velocity,
    tangential_velocity,
    velocity_covariance_analytical,
    velocity_covariance_terms,
)
from .analysis import (
    AngleErrorPrediction,
    LemmaReport,
    angle_variance_asymptotic,
    angle_variance_full,
    angle_variance_general,
    lemma_polynomials,
    omega,
    suffix_element,
    u_vector,
)
from .sar import (
    FramePhasors,
    SarImage,
    SarScanResult,
    ScanGrid,
    angle_scan,
    approx_beamwidth,
    beamwidth_3db,
    coherent_sum,
    default_scan_grid,
    estimate_sar_angle,
    range_migration,
    sar_image,
    synthesize_frame_phasors,
)

__version__ = "0.1.0"
