"""Scalar phase quantizers: uniform rounding and histogram Lloyd-Max design,
plus the banded URQ-versus-PDF-optimized comparison experiment.

Quantization error is measured with wrapped (circular) differences, since
phase is an angle.  Lloyd-Max alternates levels = conditional cell means and
boundaries = level midpoints on a histogram of the training phases, which is
deterministic and O(M) per iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .analytic import near_zero_parts, principal_angle_pi
from .errors import (
    ConfigurationError,
    DegenerateDesignError,
    InsufficientDataError,
)
from .histograms import PhaseHistogram, phase_bin_centers
from .stft import StftFrameGrid

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITERS = 500
TRAINING_BINS = 1024
MIN_SAMPLES_PER_CELL = 100


@dataclass(frozen=True)
class ScalarQuantizer:
    """C cells over [-pi, pi): C+1 ascending boundaries, one level per cell."""

    boundaries: np.ndarray
    levels: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundaries", np.asarray(self.boundaries, dtype=float))
        object.__setattr__(self, "levels", np.asarray(self.levels, dtype=float))
        if len(self.boundaries) != len(self.levels) + 1:
            raise ConfigurationError("need exactly one more boundary than levels")
        if len(self.levels) < 2:
            raise ConfigurationError("need at least 2 cells")
        if not (np.diff(self.boundaries) > 0).all():
            raise ConfigurationError("boundaries must be strictly increasing")
        inside = (self.levels > self.boundaries[:-1]) & (self.levels < self.boundaries[1:])
        if not inside.all():
            raise ConfigurationError("each level must lie inside its cell")

    @property
    def cells(self) -> int:
        return len(self.levels)


class QuantizeResult(NamedTuple):
    indices: np.ndarray
    reconstructed: np.ndarray
    rms_error: float


def design_urq(cells: int) -> ScalarQuantizer:
    """Uniform rounding quantizer: equal cells, midpoint levels."""
    if cells < 2:
        raise ConfigurationError(f"need at least 2 cells, got {cells}")
    boundaries = np.linspace(-np.pi, np.pi, cells + 1)
    levels = 0.5 * (boundaries[:-1] + boundaries[1:])
    return ScalarQuantizer(boundaries=boundaries, levels=levels)


def _assign(boundaries: np.ndarray, values: np.ndarray) -> np.ndarray:
    # value equal to an interior boundary goes to the upper cell
    return np.searchsorted(boundaries[1:-1], values, side="right")


def _histogram_rms(
    centers: np.ndarray, weights: np.ndarray, boundaries: np.ndarray, levels: np.ndarray
) -> float:
    idx = _assign(boundaries, centers)
    err = principal_angle_pi(centers - levels[idx])
    return float(np.sqrt(np.sum(weights * err * err) / weights.sum()))


def design_pdf_optimized(
    hist: PhaseHistogram,
    cells: int,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    return_history: bool = False,
):
    """Lloyd-Max quantizer fitted to a phase histogram.

    Starts from the uniform quantizer and alternates conditional-mean levels
    with midpoint boundaries until the training RMS changes by less than
    `tol` or `max_iters` is reached.  Training RMS is nonincreasing across
    iterations and never exceeds the uniform quantizer's RMS.

    With `return_history` the per-iteration RMS list is returned alongside
    the quantizer.
    """
    if cells < 2:
        raise ConfigurationError(f"need at least 2 cells, got {cells}")
    weights = hist.counts.astype(float)
    populated = int((weights > 0).sum())
    if populated < cells:
        raise DegenerateDesignError(
            f"{populated} populated histogram cells cannot support {cells} quantizer cells"
        )
    centers = phase_bin_centers(hist.bin_count)
    urq = design_urq(cells)
    boundaries = urq.boundaries.copy()
    levels = urq.levels.copy()
    history = [_histogram_rms(centers, weights, boundaries, levels)]
    for _ in range(max_iters):
        idx = _assign(boundaries, centers)
        for c in range(cells):
            mask = idx == c
            mass = weights[mask].sum()
            if mass > 0:
                levels[c] = np.sum(weights[mask] * centers[mask]) / mass
            else:
                levels[c] = 0.5 * (boundaries[c] + boundaries[c + 1])
        boundaries[1:-1] = 0.5 * (levels[:-1] + levels[1:])
        rms = _histogram_rms(centers, weights, boundaries, levels)
        converged = abs(history[-1] - rms) < tol
        history.append(rms)
        if converged:
            break
    quantizer = ScalarQuantizer(boundaries=boundaries, levels=levels)
    if return_history:
        return quantizer, history
    return quantizer


def quantize(quantizer: ScalarQuantizer, phases) -> QuantizeResult:
    """Assign phases to cells and measure the wrapped RMS error.

    A phase exactly on an interior boundary goes to the upper cell.
    """
    phases = np.asarray(phases, dtype=float)
    indices = _assign(quantizer.boundaries, phases)
    reconstructed = quantizer.levels[indices]
    err = principal_angle_pi(phases - reconstructed)
    rms = float(np.sqrt(np.mean(err * err))) if phases.size else 0.0
    return QuantizeResult(indices=indices, reconstructed=reconstructed, rms_error=rms)


@dataclass(frozen=True)
class BandQuantRecord:
    cells: int
    rms_urq: float
    rms_pdf_opt: float

    @property
    def reduction_percent(self) -> float:
        return 100.0 * (1.0 - self.rms_pdf_opt / self.rms_urq)


@dataclass
class QuantExperimentReport:
    """Per-cell-count comparison of one URQ against four banded quantizers."""

    records: list[BandQuantRecord]
    band_edges_hz: np.ndarray
    quarter_counts: list[int]
    training_bins: int = TRAINING_BINS
    error_metric: str = "wrapped-rms"
    evaluation: str = "training-data"

    @property
    def average_reduction_percent(self) -> float:
        return float(np.mean([r.reduction_percent for r in self.records]))

    def to_text(self) -> str:
        lines = [
            "cells  rms_urq      rms_pdf_opt  reduction_%",
        ]
        for r in self.records:
            lines.append(
                f"{r.cells:5d}  {r.rms_urq:<11.6f}  {r.rms_pdf_opt:<11.6f}  {r.reduction_percent:.2f}"
            )
        lines.append(f"average reduction: {self.average_reduction_percent:.2f}%")
        lines.append(
            "bands (Hz): "
            + ", ".join(f"{e:.9g}" for e in self.band_edges_hz)
            + f"; samples per quarter: {self.quarter_counts}"
        )
        lines.append(
            f"metric: {self.error_metric}; training histogram bins: {self.training_bins};"
            f" evaluated on: {self.evaluation}"
        )
        return "\n".join(lines)

    def csv_rows(self) -> list[list[str]]:
        rows = [["cells", "rms_urq", "rms_pdf_opt", "reduction_percent"]]
        for r in self.records:
            rows.append(
                [
                    str(r.cells),
                    f"{r.rms_urq:.9g}",
                    f"{r.rms_pdf_opt:.9g}",
                    f"{r.reduction_percent:.9g}",
                ]
            )
        return rows


def run_band_quantization_experiment(
    grid: StftFrameGrid,
    sample_rate: float,
    cells_range: Sequence[int] = tuple(range(2, 9)),
    training_bins: int = TRAINING_BINS,
    holdout_grid: StftFrameGrid | None = None,
) -> QuantExperimentReport:
    """Quantize upper-half-band phases: one URQ versus four banded designs.

    Collects phases of all bins whose frequency lies in [fs/4, fs/2), trains
    one PDF-optimized quantizer per quarter of that band, and for every cell
    count reports the pooled wrapped RMS of the quartet against the single
    uniform quantizer.  Training and evaluation use the same grid unless a
    `holdout_grid` is given.
    """
    if sample_rate <= 0:
        raise ConfigurationError("sample rate must be positive")
    cells_range = sorted(set(int(c) for c in cells_range))
    if not cells_range or cells_range[0] < 2:
        raise ConfigurationError("cell counts must all be >= 2")

    def quarter_phases(g: StftFrameGrid) -> list[np.ndarray]:
        n = g.n
        ks = np.arange(1, n // 2)
        freqs = ks * sample_rate / n
        edges = sample_rate / 4.0 + np.arange(5) * sample_rate / 16.0
        out = []
        coeffs = g.coefficients[:, ks]
        flagged = near_zero_parts(coeffs.real, coeffs.imag, n)
        phases = principal_angle_pi(np.angle(coeffs))
        for q in range(4):
            sel = (freqs >= edges[q]) & (freqs < edges[q + 1])
            if q == 3:  # include the Nyquist-side edge bins
                sel = (freqs >= edges[q]) & (freqs <= edges[q + 1])
            cols = np.flatnonzero(sel)
            if cols.size == 0:
                raise InsufficientDataError(
                    f"no analysis bins in band quarter {q} at fs={sample_rate}"
                )
            block = phases[:, cols]
            out.append(block[~flagged[:, cols]])
        return out

    train_quarters = quarter_phases(grid)
    eval_quarters = quarter_phases(holdout_grid) if holdout_grid is not None else train_quarters
    counts = [q.size for q in train_quarters]
    needed = MIN_SAMPLES_PER_CELL * max(cells_range)
    if min(counts) < needed:
        raise InsufficientDataError(
            f"need at least {needed} samples per band quarter, got {min(counts)}"
        )
    all_eval = np.concatenate(eval_quarters)
    records = []
    for cells in cells_range:
        urq = design_urq(cells)
        rms_urq = quantize(urq, all_eval).rms_error
        sq_sum = 0.0
        for train, evaluate in zip(train_quarters, eval_quarters):
            hist = PhaseHistogram.from_phases(train, training_bins)
            q = design_pdf_optimized(hist, cells)
            res = quantize(q, evaluate)
            sq_sum += res.rms_error**2 * evaluate.size
        rms_pdf = float(np.sqrt(sq_sum / all_eval.size))
        records.append(BandQuantRecord(cells=cells, rms_urq=rms_urq, rms_pdf_opt=rms_pdf))
    edges = sample_rate / 4.0 + np.arange(5) * sample_rate / 16.0
    return QuantExperimentReport(
        records=records,
        band_edges_hz=edges,
        quarter_counts=counts,
        training_bins=training_bins,
        evaluation="holdout-data" if holdout_grid is not None else "training-data",
    )
