"""STFT coefficient phase distribution analysis.

Per-frequency and per-magnitude phase histograms of audio, the closed-form
mapping from tone phase to coefficient phase, its induced density and peak
locations, a normalized-EMD nonuniformity measure, and phase quantizer
design (uniform and Lloyd-Max).
"""

from .analytic import (
    AnalyticContext,
    RectDecomposition,
    coefficient_parts,
    coefficient_phase,
    dirichlet_kernel,
    pdf_peak_locations,
    phase_pdf_curve,
    phase_via_decomposition,
    principal_angle_2pi,
    principal_angle_pi,
    rect_decompose,
    trig_sums,
)
from .errors import (
    BandingError,
    ConfigurationError,
    DegenerateDecompositionError,
    DegenerateDesignError,
    EmptyHistogramError,
    EmptySignalError,
    InsufficientDataError,
    ReconstructionUnsupportedError,
    StftPhaseError,
    UnsupportedFormatError,
    WavParseError,
)
from .histograms import (
    PerFrequencyHistogramSet,
    PerMagnitudeHistogramSet,
    PhaseHistogram,
    accumulate_per_frequency,
    accumulate_per_magnitude,
    nonuniformity_ubar,
    sidelobe_suppression_db,
    ubar_from_counts,
)
from .quantize import (
    QuantExperimentReport,
    ScalarQuantizer,
    design_pdf_optimized,
    design_urq,
    quantize,
    run_band_quantization_experiment,
)
from .signals import CorpusKind, CorpusSpec, ToneParams, make_corpus, make_tone
from .stft import (
    StftConfig,
    StftFrameGrid,
    istft_ola,
    perturb_phase,
    stft,
    stft_of_frames,
)
from .wavio import AudioBuffer, read_wav, write_wav_pcm16
from .windows import WindowMode, WindowSpec, make_window

__version__ = "0.1.0"

__all__ = [
    "AnalyticContext",
    "AudioBuffer",
    "BandingError",
    "ConfigurationError",
    "CorpusKind",
    "CorpusSpec",
    "DegenerateDecompositionError",
    "DegenerateDesignError",
    "EmptyHistogramError",
    "EmptySignalError",
    "InsufficientDataError",
    "PerFrequencyHistogramSet",
    "PerMagnitudeHistogramSet",
    "PhaseHistogram",
    "QuantExperimentReport",
    "ReconstructionUnsupportedError",
    "RectDecomposition",
    "ScalarQuantizer",
    "StftConfig",
    "StftFrameGrid",
    "StftPhaseError",
    "ToneParams",
    "UnsupportedFormatError",
    "WavParseError",
    "WindowMode",
    "WindowSpec",
    "accumulate_per_frequency",
    "accumulate_per_magnitude",
    "coefficient_parts",
    "coefficient_phase",
    "design_pdf_optimized",
    "design_urq",
    "dirichlet_kernel",
    "istft_ola",
    "make_corpus",
    "make_tone",
    "make_window",
    "nonuniformity_ubar",
    "pdf_peak_locations",
    "perturb_phase",
    "phase_pdf_curve",
    "phase_via_decomposition",
    "principal_angle_2pi",
    "principal_angle_pi",
    "quantize",
    "read_wav",
    "rect_decompose",
    "run_band_quantization_experiment",
    "sidelobe_suppression_db",
    "stft",
    "stft_of_frames",
    "trig_sums",
    "ubar_from_counts",
    "write_wav_pcm16",
]
