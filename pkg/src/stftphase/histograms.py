"""Phase histograms, the normalized-EMD nonuniformity measure, window
sidelobe measurement, and raster/CSV export.

Histograms use M uniform cells partitioning [-pi, pi).  Coefficients whose
real and imaginary parts both fall under the near-zero guard are excluded
from the counts (their phase is an artifact of the atan2(0, 0) convention)
and reported separately.  All accumulators are mergeable with exact integer
semantics, so parallel accumulation over frame ranges followed by a merge
equals sequential accumulation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .analytic import near_zero_parts, principal_angle_pi
from .errors import BandingError, ConfigurationError, EmptyHistogramError
from .stft import StftFrameGrid
from .windows import WindowSpec, make_window

LOG_SPACED = "log_spaced"
QUANTILE = "quantile"


def phase_bin_edges(bin_count: int) -> np.ndarray:
    return np.linspace(-np.pi, np.pi, bin_count + 1)


def phase_bin_centers(bin_count: int) -> np.ndarray:
    edges = phase_bin_edges(bin_count)
    return 0.5 * (edges[:-1] + edges[1:])


def phase_cells(phases: np.ndarray, bin_count: int) -> np.ndarray:
    """Cell index in 0..M-1 for each phase in [-pi, pi)."""
    cells = np.floor((np.asarray(phases) + np.pi) * (bin_count / (2.0 * np.pi)))
    return np.clip(cells.astype(np.int64), 0, bin_count - 1)


@dataclass
class PhaseHistogram:
    """Counts over M uniform phase cells plus the excluded near-zero tally."""

    counts: np.ndarray
    excluded: int = 0

    def __post_init__(self) -> None:
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 1 or len(self.counts) < 2:
            raise ConfigurationError("histogram needs at least 2 cells")
        if (self.counts < 0).any():
            raise ConfigurationError("counts must be nonnegative")

    @classmethod
    def empty(cls, bin_count: int) -> "PhaseHistogram":
        return cls(counts=np.zeros(bin_count, dtype=np.int64))

    @classmethod
    def from_phases(cls, phases, bin_count: int, excluded: int = 0) -> "PhaseHistogram":
        counts = np.bincount(phase_cells(phases, bin_count), minlength=bin_count)
        return cls(counts=counts.astype(np.int64), excluded=excluded)

    @property
    def bin_count(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def probabilities(self) -> np.ndarray:
        if self.total == 0:
            raise EmptyHistogramError("histogram has no samples")
        return self.counts / self.total

    def merge(self, other: "PhaseHistogram") -> "PhaseHistogram":
        if other.bin_count != self.bin_count:
            raise ConfigurationError("cannot merge histograms with different cell counts")
        return PhaseHistogram(
            counts=self.counts + other.counts, excluded=self.excluded + other.excluded
        )


def ubar_from_counts(counts) -> float:
    """Normalized earth mover's distance from the uniform distribution.

    ubar = (1/u0) * sum_k | sum_{m<=k} (p_m - 1/M) | where u0 is the same
    sum for the distribution with all mass in the central cell floor(M/2).
    0.0 for exactly uniform counts, 1.0 for the central-cell delta.  Computed
    with integer partial sums, so those anchors and scale invariance are
    exact.
    """
    c = np.asarray(counts, dtype=np.int64)
    m = len(c)
    total = int(c.sum())
    if total <= 0:
        raise EmptyHistogramError("cannot measure nonuniformity of an empty histogram")
    # integer numerators: cumsum(M*c - total) = M*total*(CDF - uniform CDF)
    deviation = np.cumsum(m * c - total)
    numer = int(np.abs(deviation).sum())
    delta = np.zeros(m, dtype=np.int64)
    delta[m // 2] = total
    denom = int(np.abs(np.cumsum(m * delta - total)).sum())
    return numer / denom


def nonuniformity_ubar(hist: PhaseHistogram) -> float:
    return ubar_from_counts(hist.counts)


@dataclass
class PerFrequencyHistogramSet:
    """One phase histogram per unique-phase bin k = 1 .. N/2 - 1."""

    n: int
    histograms: list[PhaseHistogram] = field(repr=False)

    @property
    def bin_count(self) -> int:
        return self.histograms[0].bin_count

    @property
    def ks(self) -> range:
        return range(1, self.n // 2)

    def histogram_for(self, k: int) -> PhaseHistogram:
        return self.histograms[k - 1]

    def ubar_by_bin(self) -> np.ndarray:
        return np.array([nonuniformity_ubar(h) for h in self.histograms])

    def argmax_cells(self) -> np.ndarray:
        return np.array([int(np.argmax(h.counts)) for h in self.histograms])

    def merge(self, other: "PerFrequencyHistogramSet") -> "PerFrequencyHistogramSet":
        if other.n != self.n or other.bin_count != self.bin_count:
            raise ConfigurationError("incompatible per-frequency sets")
        merged = [a.merge(b) for a, b in zip(self.histograms, other.histograms)]
        return PerFrequencyHistogramSet(n=self.n, histograms=merged)


@dataclass
class PerMagnitudeHistogramSet:
    """Phase histograms pooled across bins, one per magnitude band."""

    band_edges: np.ndarray
    histograms: list[PhaseHistogram] = field(repr=False)
    banding: str = QUANTILE
    excluded: int = 0

    @property
    def band_count(self) -> int:
        return len(self.histograms)

    @property
    def bin_count(self) -> int:
        return self.histograms[0].bin_count

    def ubar_by_band(self) -> np.ndarray:
        return np.array([nonuniformity_ubar(h) for h in self.histograms])

    def merge(self, other: "PerMagnitudeHistogramSet") -> "PerMagnitudeHistogramSet":
        if other.band_count != self.band_count or other.bin_count != self.bin_count:
            raise ConfigurationError("incompatible per-magnitude sets")
        merged = [a.merge(b) for a, b in zip(self.histograms, other.histograms)]
        return PerMagnitudeHistogramSet(
            band_edges=self.band_edges,
            histograms=merged,
            banding=self.banding,
            excluded=self.excluded + other.excluded,
        )


def _unique_phase_values(grid: StftFrameGrid):
    """Phases, magnitudes, near-zero mask, and bin index per coefficient."""
    ks = np.arange(1, grid.n // 2)
    coeffs = grid.coefficients[:, ks]
    flagged = near_zero_parts(coeffs.real, coeffs.imag, grid.n)
    phases = principal_angle_pi(np.angle(coeffs))
    return ks, phases, np.abs(coeffs), flagged


def accumulate_per_frequency(grid: StftFrameGrid, bin_count: int = 64) -> PerFrequencyHistogramSet:
    """Per-bin phase histograms over all frames; near-zero coefficients excluded."""
    if bin_count < 2:
        raise ConfigurationError("need at least 2 phase cells")
    ks, phases, _, flagged = _unique_phase_values(grid)
    hists = []
    if grid.frame_count == 0:
        return PerFrequencyHistogramSet(
            n=grid.n, histograms=[PhaseHistogram.empty(bin_count) for _ in ks]
        )
    cells = phase_cells(phases, bin_count)
    for col in range(len(ks)):
        keep = ~flagged[:, col]
        counts = np.bincount(cells[keep, col], minlength=bin_count)
        hists.append(
            PhaseHistogram(counts=counts.astype(np.int64), excluded=int((~keep).sum()))
        )
    return PerFrequencyHistogramSet(n=grid.n, histograms=hists)


def magnitude_band_edges(magnitudes: np.ndarray, bands: int, banding: str) -> np.ndarray:
    """Ascending band edges over pooled magnitudes (log-spaced or quantile)."""
    if bands < 2:
        raise ConfigurationError("need at least 2 magnitude bands")
    if magnitudes.size == 0 or magnitudes.max() <= 0.0:
        raise BandingError("cannot band an all-zero or empty magnitude pool")
    if banding == QUANTILE:
        return np.quantile(magnitudes, np.linspace(0.0, 1.0, bands + 1))
    if banding == LOG_SPACED:
        lo = magnitudes.min()
        return np.geomspace(lo, magnitudes.max(), bands + 1)
    raise ConfigurationError(f"unknown banding {banding!r}")


def accumulate_per_magnitude(
    grid: StftFrameGrid,
    bin_count: int = 64,
    bands: int = 16,
    banding: str = QUANTILE,
) -> PerMagnitudeHistogramSet:
    """Phase histograms by magnitude band, pooled across frames and bins.

    Tied band edges (degenerate pools) resolve to the lowest band.
    """
    if bin_count < 2:
        raise ConfigurationError("need at least 2 phase cells")
    if grid.frame_count == 0:
        raise BandingError("cannot band an empty grid")
    _, phases, mags, flagged = _unique_phase_values(grid)
    keep = ~flagged
    pooled = mags[keep]
    edges = magnitude_band_edges(pooled, bands, banding)
    # first upper edge >= magnitude; ties collapse into the lowest band
    band_of = np.clip(
        np.searchsorted(edges[1:], pooled, side="left"), 0, bands - 1
    )
    cells = phase_cells(phases[keep], bin_count)
    flat = np.bincount(band_of * bin_count + cells, minlength=bands * bin_count)
    counts = flat.reshape(bands, bin_count)
    hists = [PhaseHistogram(counts=counts[b]) for b in range(bands)]
    return PerMagnitudeHistogramSet(
        band_edges=edges,
        histograms=hists,
        banding=banding,
        excluded=int(flagged.sum()),
    )


def sidelobe_suppression_db(window: WindowSpec, offset: float, oversample: int = 16) -> float:
    """Mean spectral magnitude in a one-bin band at `offset`, in dB re the peak.

    The window transform is sampled on an `oversample`-times-N grid; the band
    is one analysis bin wide (full width 2*pi/N) centered at the offset.
    Negative values mean suppression.
    """
    if not 0.0 < offset <= np.pi:
        raise ConfigurationError(f"offset must be in (0, pi], got {offset}")
    if oversample < 16:
        raise ConfigurationError("oversample must be >= 16")
    n = window.length
    spectrum = np.abs(np.fft.fft(make_window(window), oversample * n))
    omega = 2.0 * np.pi * np.arange(oversample * n) / (oversample * n)
    band = np.abs(omega - offset) <= np.pi / n
    return float(20.0 * np.log10(spectrum[band].mean() / spectrum[0]))


def render_per_frequency_image(hist_set: PerFrequencyHistogramSet) -> np.ndarray:
    """Grayscale raster: columns are bins k, rows are phase cells.

    Row 0 is the +pi edge of the phase axis; each column is normalized to its
    own maximum (white = most probable cell in that column).
    """
    m = hist_set.bin_count
    img = np.zeros((m, len(hist_set.histograms)), dtype=np.uint8)
    for col, hist in enumerate(hist_set.histograms):
        peak = hist.counts.max()
        if peak > 0:
            norm = (hist.counts * 255.0) / peak
            img[:, col] = np.flip(np.round(norm).astype(np.uint8))
    return img


def render_per_magnitude_image(
    hist_set: PerMagnitudeHistogramSet, band_pixels: int = 8
) -> np.ndarray:
    """Polar grayscale raster: radius = magnitude band, angle = phase cell.

    The lowest band is the innermost annulus; each band is normalized to its
    own maximum.  Pixels beyond the outer annulus stay black.
    """
    if band_pixels < 1:
        raise ConfigurationError("band_pixels must be >= 1")
    bands = hist_set.band_count
    m = hist_set.bin_count
    radius = bands * band_pixels
    side = 2 * radius + 1
    y, x = np.mgrid[0:side, 0:side]
    dy = y - radius
    dx = x - radius
    r = np.hypot(dx, dy)
    band_idx = np.floor(r / band_pixels).astype(int)
    angle = principal_angle_pi(np.arctan2(dy, dx))
    cell_idx = phase_cells(angle, m)
    norm = np.zeros((bands, m))
    for b, hist in enumerate(hist_set.histograms):
        peak = hist.counts.max()
        if peak > 0:
            norm[b] = hist.counts / peak
    img = np.zeros((side, side), dtype=np.uint8)
    inside = band_idx < bands
    img[inside] = np.round(255.0 * norm[band_idx[inside], cell_idx[inside]]).astype(
        np.uint8
    )
    return img


def write_pgm(path, image: np.ndarray, comment: str | None = None) -> None:
    """Write a grayscale image as binary PGM (P5, maxval 255)."""
    image = np.asarray(image, dtype=np.uint8)
    if image.ndim != 2:
        raise ConfigurationError("PGM image must be two-dimensional")
    height, width = image.shape
    header = f"P5\n{width} {height}\n255\n"
    if comment:
        header = f"P5\n# {comment}\n{width} {height}\n255\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(image.tobytes())


def _center_labels(bin_count: int) -> list[str]:
    return [f"{c:.9g}" for c in phase_bin_centers(bin_count)]


def write_per_frequency_csv(path, hist_set: PerFrequencyHistogramSet) -> None:
    """Counts per (bin k, phase cell); header names cell centers in radians."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "excluded"] + _center_labels(hist_set.bin_count))
        for k, hist in zip(hist_set.ks, hist_set.histograms):
            writer.writerow([k, hist.excluded] + [int(c) for c in hist.counts])


def write_per_magnitude_csv(path, hist_set: PerMagnitudeHistogramSet) -> None:
    """Counts per (magnitude band, phase cell); headers in radians."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["band_low", "band_high"] + _center_labels(hist_set.bin_count)
        )
        for b, hist in enumerate(hist_set.histograms):
            lo = f"{hist_set.band_edges[b]:.9g}"
            hi = f"{hist_set.band_edges[b + 1]:.9g}"
            writer.writerow([lo, hi] + [int(c) for c in hist.counts])
