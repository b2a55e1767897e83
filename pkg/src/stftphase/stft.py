"""Forward STFT, overlap-add reconstruction, and coefficient phase perturbation.

The transform follows X[k, t] = sum_i w_i * x[t*stride + i] * exp(-2j*pi*k*i/N)
with an unnormalized forward kernel and 1/N on the inverse.  Trailing samples
that do not fill a frame are dropped.  Frames are independent, so frame-level
work can run on any number of threads with identical results.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import principal_angle_pi
from .errors import (
    ConfigurationError,
    EmptySignalError,
    ReconstructionUnsupportedError,
)
from .windows import WindowMode, WindowSpec, make_window, overlap_add_profile

COLA_FLATNESS_TOL = 1e-12


@dataclass(frozen=True)
class StftConfig:
    """Analysis window plus hop size (defaults to half the window length)."""

    window: WindowSpec
    stride: int = 0  # 0 means "use length // 2"

    def __post_init__(self) -> None:
        if self.stride == 0:
            object.__setattr__(self, "stride", self.window.length // 2)
        if not 1 <= self.stride <= self.window.length:
            raise ConfigurationError(
                f"stride must be in 1..{self.window.length}, got {self.stride}"
            )


@dataclass
class StftFrameGrid:
    """Complex coefficients indexed (frame, bin) plus the producing config."""

    coefficients: np.ndarray
    config: StftConfig

    @property
    def n(self) -> int:
        return self.config.window.length

    @property
    def frame_count(self) -> int:
        return self.coefficients.shape[0]

    @property
    def unique_bins(self) -> range:
        """Bins 1 .. N/2 - 1, the ones carrying unique phase information."""
        return range(1, self.n // 2)

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.coefficients)

    def phases(self) -> np.ndarray:
        """Phases in [-pi, pi); exact zeros report phase 0."""
        return principal_angle_pi(np.angle(self.coefficients))

    def max_conjugate_asymmetry(self) -> float:
        """Worst relative deviation from X[N-k] == conj(X[k])."""
        coeffs = self.coefficients
        if coeffs.size == 0:
            return 0.0
        ks = np.arange(1, self.n // 2)
        mirrored = coeffs[:, self.n - ks]
        direct = coeffs[:, ks]
        scale = np.maximum(np.abs(direct), 1e-30)
        err = np.abs(mirrored - np.conj(direct)) / scale
        imag_edges = np.abs(coeffs[:, [0, self.n // 2]].imag) / np.maximum(
            np.abs(coeffs[:, [0, self.n // 2]]), 1e-30
        )
        return float(max(err.max(initial=0.0), imag_edges.max(initial=0.0)))


def _frame_matrix(signal: np.ndarray, config: StftConfig) -> np.ndarray:
    n, stride = config.window.length, config.stride
    if signal.ndim != 1:
        raise ConfigurationError("signal must be one-dimensional")
    if len(signal) < n:
        raise EmptySignalError(
            f"signal of {len(signal)} samples is shorter than one frame of {n}"
        )
    starts = np.arange(0, len(signal) - n + 1, stride)
    return signal[starts[:, None] + np.arange(n)[None, :]]


def stft(signal, config: StftConfig, workers: int | None = None) -> StftFrameGrid:
    """Windowed DFT of successive frames; trailing partial frame dropped.

    `workers` > 1 splits the frames across threads; the result is identical
    to the sequential computation.
    """
    signal = np.asarray(signal, dtype=float)
    frames = _frame_matrix(signal, config) * make_window(config.window)
    if workers is not None and workers > 1 and frames.shape[0] > 1:
        chunks = np.array_split(np.arange(frames.shape[0]), workers)
        out = np.empty(frames.shape, dtype=complex)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(lambda ix: (ix, np.fft.fft(frames[ix], axis=1)), ix)
                for ix in chunks
                if len(ix)
            ]
            for fut in futures:
                ix, block = fut.result()
                out[ix] = block
        coeffs = out
    else:
        coeffs = np.fft.fft(frames, axis=1)
    return StftFrameGrid(coefficients=coeffs, config=config)


def stft_of_frames(frames, window: WindowSpec) -> StftFrameGrid:
    """Transform a stack of independent frames (rows), one frame each.

    Convenience for synthetic corpora where every item is already a frame;
    the recorded stride equals the frame length (no overlap).
    """
    frames = np.asarray(frames, dtype=float)
    if frames.ndim != 2 or frames.shape[1] != window.length:
        raise ConfigurationError(
            f"frames must be (count, {window.length}), got {frames.shape}"
        )
    config = StftConfig(window=window, stride=window.length)
    coeffs = np.fft.fft(frames * make_window(window), axis=1)
    return StftFrameGrid(coefficients=coeffs, config=config)


def _cola_constant(config: StftConfig) -> float:
    window = config.window
    if window.mode is not WindowMode.PERIODIC or config.stride != window.length // 2:
        raise ReconstructionUnsupportedError(
            "overlap-add reconstruction needs a periodic window at stride N/2"
        )
    profile = overlap_add_profile(window, config.stride)
    if profile.max() - profile.min() > COLA_FLATNESS_TOL:
        raise ReconstructionUnsupportedError(
            "shifted window copies do not sum to a constant"
        )
    return float(profile.mean())


def istft_ola(grid: StftFrameGrid) -> np.ndarray:
    """Overlap-add inverse; divides by the constant window sum.

    Requires a periodic window at 50% overlap and at least two frames.  The
    interior of the signal (beyond the first and last N/2 samples) round-trips;
    the edges see fewer window copies and stay attenuated.
    """
    constant = _cola_constant(grid.config)
    if grid.frame_count < 2:
        raise ReconstructionUnsupportedError(
            "need at least two frames to overlap-add"
        )
    n, stride = grid.n, grid.config.stride
    frames = np.fft.ifft(grid.coefficients, axis=1).real
    out = np.zeros((grid.frame_count - 1) * stride + n)
    for t in range(grid.frame_count):
        out[t * stride : t * stride + n] += frames[t]
    return out / constant


def perturb_phase(
    grid: StftFrameGrid, bin_index: int, noise_halfwidth: float, seed: int
) -> StftFrameGrid:
    """Rotate one bin's phase per frame by uniform noise in [-halfwidth, halfwidth].

    Magnitudes are unchanged; the conjugate-symmetric mirror bin N - k is
    updated so real reconstruction is preserved.  Deterministic given seed.
    """
    n = grid.n
    if not 1 <= bin_index <= n // 2 - 1:
        raise ConfigurationError(
            f"bin must be in 1..{n // 2 - 1} (unique-phase range), got {bin_index}"
        )
    if noise_halfwidth < 0:
        raise ConfigurationError("noise halfwidth must be nonnegative")
    gen = np.random.Generator(np.random.Philox(key=seed))
    u = gen.uniform(-noise_halfwidth, noise_halfwidth, size=grid.frame_count)
    coeffs = grid.coefficients.copy()
    # rotating the mirror bin by the opposite angle keeps conjugate symmetry
    # (and leaves the grid bit-identical when the halfwidth is zero)
    coeffs[:, bin_index] = coeffs[:, bin_index] * np.exp(1j * u)
    coeffs[:, n - bin_index] = coeffs[:, n - bin_index] * np.exp(-1j * u)
    return StftFrameGrid(coefficients=coeffs, config=grid.config)
