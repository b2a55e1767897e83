"""Reproduction experiments behind the command-line interface.

Each function is pure given its arguments (seeds included), so the CLI's
outputs are byte-identical across reruns.  Angles in result tables are kept
in units of pi to match the reference presentation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import (
    TONE_ABOVE,
    TONE_BELOW,
    pdf_peak_locations,
    phase_via_decomposition,
    principal_angle_2pi,
    rect_decompose,
)
from .errors import ConfigurationError
from .histograms import (
    PerFrequencyHistogramSet,
    PerMagnitudeHistogramSet,
    accumulate_per_frequency,
    accumulate_per_magnitude,
    phase_cells,
    sidelobe_suppression_db,
)
from .signals import CorpusKind, CorpusSpec, draw_tone_params, make_corpus, make_tone_noise_mix
from .stft import StftConfig, StftFrameGrid, istft_ola, perturb_phase, stft, stft_of_frames
from .windows import WindowMode, WindowSpec

RATIO_TOL = 0.01
ANGLE_TOL_PI = 0.01


@dataclass(frozen=True)
class Table1Row:
    """One reference condition of the tone/bin decomposition summary table."""

    label: str
    k: int
    n: int
    omega_t: float
    published_ratio: float
    published_angle_pi: float
    reference_ratio: float
    reference_angle_pi: float
    note: str = ""

    @property
    def omega_k(self) -> float:
        return 2.0 * np.pi * self.k / self.n


# Reference conditions: bins are the exact analysis frequencies nearest
# 0.90*pi (k = round(0.45*N)).  Row 3's tone frequency comes from its
# frequency-difference column (-0.25*pi); the other published ratio/angle
# pairs reproduce at these conditions to print precision.  Row 4's published
# angle 0.79*pi is a misprint: closed form, direct summation, and a
# formula-free cosine fit all give 0.768*pi, which prints as 0.77*pi (the
# same conditions at N = 2048 print 0.77*pi in row 5).
TABLE1_ROWS = (
    Table1Row("1", 230, 512, 0.88 * np.pi, 1.18, 0.52, 1.18, 0.52),
    Table1Row("2", 230, 512, 0.80 * np.pi, 1.93, 0.57, 1.93, 0.57),
    Table1Row("3", 230, 512, 0.65 * np.pi, 3.25, 0.66, 3.25, 0.66),
    Table1Row(
        "4",
        230,
        512,
        0.45 * np.pi,
        4.73,
        0.79,
        4.73,
        0.77,
        note="published angle 0.79*pi is a misprint; verified value is 0.77*pi",
    ),
    Table1Row("5", 922, 2048, 0.45 * np.pi, 4.82, 0.77, 4.82, 0.77),
)


@dataclass(frozen=True)
class Table1Result:
    row: Table1Row
    ratio: float
    angle_pi: float

    @property
    def matches_reference(self) -> bool:
        return (
            abs(self.ratio - self.row.reference_ratio) <= RATIO_TOL
            and abs(self.angle_pi - self.row.reference_angle_pi) <= ANGLE_TOL_PI
        )


def table1_results() -> list[Table1Result]:
    """Amplitude ratio and zeta gap for the five reference conditions."""
    results = []
    for row in TABLE1_ROWS:
        dec = rect_decompose(row.omega_t, row.omega_k, row.n)
        results.append(
            Table1Result(
                row=row,
                ratio=float(dec.amplitude_ratio),
                angle_pi=float(dec.zeta_gap_2pi / np.pi),
            )
        )
    return results


@dataclass
class Fig2Sweep:
    """Ratio and zeta-gap curves versus tone frequency for every bin."""

    n: int
    omega_t: np.ndarray
    ratio: np.ndarray  # (grid, bins)
    angle_pi: np.ndarray  # (grid, bins)

    @property
    def ks(self) -> range:
        return range(1, self.n // 2)


def fig2_sweep(n: int = 16, grid_points: int = 2048) -> Fig2Sweep:
    """Sweep omega_t over (0, pi) exclusive for each bin k."""
    if grid_points < 2:
        raise ConfigurationError("grid_points must be >= 2")
    omega_t = np.linspace(0.0, np.pi, grid_points + 2)[1:-1]
    ks = np.arange(1, n // 2)
    ratio = np.empty((len(omega_t), len(ks)))
    angle = np.empty_like(ratio)
    for col, k in enumerate(ks):
        dec = rect_decompose(omega_t, 2.0 * np.pi * k / n, n)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio[:, col] = dec.c_re / dec.c_im
        angle[:, col] = principal_angle_2pi(dec.zeta_re - dec.zeta_im) / np.pi
    return Fig2Sweep(n=n, omega_t=omega_t, ratio=ratio, angle_pi=angle)


def fig2_on_bin_anchors(n: int = 16) -> list[tuple[int, float, float]]:
    """(k, ratio, zeta gap) evaluated exactly at omega_t = omega_k."""
    out = []
    for k in range(1, n // 2):
        omega_k = 2.0 * np.pi * k / n
        dec = rect_decompose(omega_k, omega_k, n)
        out.append((k, float(dec.amplitude_ratio), float(dec.zeta_gap_2pi)))
    return out


@dataclass
class Fig3Curves:
    theta: np.ndarray
    phi: np.ndarray  # (rows, theta)
    labels: list[str]


def fig3_curves(theta_points: int = 1024) -> Fig3Curves:
    """Coefficient phase versus tone phase for the five reference conditions."""
    theta = np.linspace(-np.pi, np.pi, theta_points, endpoint=False)
    phi = np.empty((len(TABLE1_ROWS), theta_points))
    for r, row in enumerate(TABLE1_ROWS):
        dec = rect_decompose(row.omega_t, row.omega_k, row.n)
        phi[r] = phase_via_decomposition(dec, theta)
    return Fig3Curves(theta=theta, phi=phi, labels=[r.label for r in TABLE1_ROWS])


@dataclass(frozen=True)
class PeakReportRow:
    k: int
    fraction_below: float
    side: str | None  # None when neither side dominates
    predicted_cells: tuple[int, ...]
    argmax_cell: int
    within_one_cell: bool | None


@dataclass
class ToneExperimentResult:
    hist_set: PerFrequencyHistogramSet
    peak_rows: list[PeakReportRow]
    window: WindowSpec

    @property
    def checked_rows(self) -> list[PeakReportRow]:
        return [r for r in self.peak_rows if r.side is not None]

    @property
    def all_checked_within_one_cell(self) -> bool:
        return all(r.within_one_cell for r in self.checked_rows)


def predicted_peak_cells(omega_k: float, side: str, bin_count: int, n: int) -> tuple[int, ...]:
    peaks = pdf_peak_locations(omega_k, side, n=n)
    return tuple(int(c) for c in phase_cells(np.array(peaks), bin_count))


def cell_distance(a: int, b: int, bin_count: int) -> int:
    d = abs(a - b) % bin_count
    return min(d, bin_count - d)


def tone_experiment(
    count: int = 10_000,
    n: int = 512,
    alpha: float = 0.0,
    mode: WindowMode = WindowMode.PERIODIC,
    seed: int = 20_240,
    bin_count: int = 64,
    dominance: float = 0.9,
) -> ToneExperimentResult:
    """Random-tone Monte Carlo: per-bin histograms and peak agreement.

    Draws `count` tones with uniform frequency and phase, transforms each as
    a single frame, and compares every dominated bin's histogram argmax with
    the two predicted peak cells for that side.  A bin is "dominated" when at
    least `dominance` of the tone draws lie on one side of it.
    """
    spec = CorpusSpec(kind=CorpusKind.RANDOM_TONES, count=count, n=n, seed=seed)
    omegas, _ = draw_tone_params(spec)
    frames = make_corpus(spec)
    window = WindowSpec(alpha=alpha, length=n, mode=mode)
    grid = stft_of_frames(frames, window)
    hist_set = accumulate_per_frequency(grid, bin_count)
    rows = []
    argmaxes = hist_set.argmax_cells()
    for k in hist_set.ks:
        omega_k = 2.0 * np.pi * k / n
        frac_below = float(np.mean(omegas < omega_k))
        side = None
        if frac_below >= dominance:
            side = TONE_BELOW
        elif frac_below <= 1.0 - dominance:
            side = TONE_ABOVE
        argmax = int(argmaxes[k - 1])
        if side is None:
            rows.append(PeakReportRow(k, frac_below, None, (), argmax, None))
            continue
        cells = predicted_peak_cells(omega_k, side, bin_count, n)
        dist = min(cell_distance(argmax, c, bin_count) for c in cells)
        rows.append(PeakReportRow(k, frac_below, side, cells, argmax, dist <= 1))
    return ToneExperimentResult(hist_set=hist_set, peak_rows=rows, window=window)


@dataclass(frozen=True)
class AlphaSweepRow:
    alpha: float
    suppression_db: float
    ubar_by_bin: tuple[float, ...]


DEFAULT_ALPHA_GRID = (0.0, 0.1, 0.2, 0.3, 0.4, 0.46, 0.5)
DEFAULT_TRACKED_BINS = (225, 235, 245)


def alpha_sweep(
    frames: np.ndarray,
    n: int,
    alphas=DEFAULT_ALPHA_GRID,
    tracked_bins=DEFAULT_TRACKED_BINS,
    bin_count: int = 64,
    offset: float = np.pi / 2,
) -> list[AlphaSweepRow]:
    """Nonuniformity of tracked bins and sidelobe suppression across shapes."""
    tracked_bins = tuple(int(k) for k in tracked_bins)
    for k in tracked_bins:
        if not 1 <= k <= n // 2 - 1:
            raise ConfigurationError(f"tracked bin {k} outside 1..{n // 2 - 1}")
    rows = []
    for alpha in alphas:
        window = WindowSpec(alpha=float(alpha), length=n, mode=WindowMode.PERIODIC)
        grid = stft_of_frames(frames, window)
        hist_set = accumulate_per_frequency(grid, bin_count)
        ubars = tuple(
            float(u)
            for u in (
                hist_set.ubar_by_bin()[np.array(tracked_bins) - 1]
            )
        )
        rows.append(
            AlphaSweepRow(
                alpha=float(alpha),
                suppression_db=sidelobe_suppression_db(window, offset),
                ubar_by_bin=ubars,
            )
        )
    return rows


def default_trend_corpus(count: int = 4000, n: int = 512, seed: int = 2024) -> np.ndarray:
    """The fixed synthetic corpus the window-shape trend is demonstrated on."""
    return make_tone_noise_mix(count=count, n=n, seed=seed)


@dataclass
class AnalysisResult:
    per_frequency: PerFrequencyHistogramSet
    per_magnitude: PerMagnitudeHistogramSet
    ubar_by_bin: np.ndarray


def analyze_grid(grid: StftFrameGrid, bin_count: int = 64, bands: int = 16) -> AnalysisResult:
    per_freq = accumulate_per_frequency(grid, bin_count)
    per_mag = accumulate_per_magnitude(grid, bin_count, bands)
    return AnalysisResult(
        per_frequency=per_freq,
        per_magnitude=per_mag,
        ubar_by_bin=per_freq.ubar_by_bin(),
    )


def perturb_pipeline(
    samples: np.ndarray,
    sample_rate: int,
    bin_index: int,
    halfwidth: float,
    seed: int,
    n: int = 512,
    alpha: float = 0.5,
    mode: WindowMode = WindowMode.PERIODIC,
) -> tuple[np.ndarray, float]:
    """Transform, rotate one bin's phases, reconstruct; returns (audio, bin Hz)."""
    config = StftConfig(window=WindowSpec(alpha=alpha, length=n, mode=mode))
    grid = stft(samples, config)
    noisy = perturb_phase(grid, bin_index, halfwidth, seed)
    rebuilt = istft_ola(noisy)
    return rebuilt, bin_index * sample_rate / n
