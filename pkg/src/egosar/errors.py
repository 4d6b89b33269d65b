"""Exception types raised by the toolkit."""


class EgosarError(Exception):
    """Base class for all toolkit errors."""


class InsufficientDetections(EgosarError):
    """Fewer than two detections; the 2-D velocity is unobservable."""


class SingularGeometry(EgosarError):
    """Reflector angles are collinear (rank-deficient Doppler matrix)."""


class DimensionMismatch(EgosarError):
    """Phasor count does not match the hypothesis track length."""


class DegenerateGeometry(EgosarError):
    """No angular response: the synthetic array is at endfire."""


class ZeroTangentialVelocity(EgosarError):
    """Tangential velocity vanishes; the angle-error variance is undefined."""


class MissingRanges(EgosarError):
    """Scene has no reflector ranges, required for imaging."""


class UndefinedForN1(EgosarError):
    """The frame-count factor is undefined for a single frame."""


class ConfigInvalid(EgosarError):
    """Experiment configuration failed validation."""
