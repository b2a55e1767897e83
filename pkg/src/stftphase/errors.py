"""Exception types raised by stftphase."""


class StftPhaseError(ValueError):
    """Base class for all stftphase errors."""


class ConfigurationError(StftPhaseError):
    """Invalid window, transform, or analysis parameters."""


class EmptySignalError(StftPhaseError):
    """Signal too short to produce a single analysis frame."""


class ReconstructionUnsupportedError(StftPhaseError):
    """Grid configuration does not support overlap-add reconstruction."""


class DegenerateDecompositionError(StftPhaseError):
    """Cosine decomposition collapsed (zero imaginary amplitude or equal kernel energies)."""


class EmptyHistogramError(StftPhaseError):
    """Histogram has no counted samples."""


class BandingError(StftPhaseError):
    """Magnitude banding is impossible (e.g. all-zero coefficients)."""


class DegenerateDesignError(StftPhaseError):
    """Quantizer design asked for more cells than the data can populate."""


class InsufficientDataError(StftPhaseError):
    """Not enough samples to run an experiment at the requested size."""


class UnsupportedFormatError(StftPhaseError):
    """Audio file codec or layout not supported."""


class WavParseError(StftPhaseError):
    """Malformed or truncated RIFF/WAVE file."""
