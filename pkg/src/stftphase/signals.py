"""Deterministic synthetic corpora: tones, white noise, and tone+noise mixes.

Randomness comes from numpy's counter-based Philox generator with
key = seed and counter = item_index * 2**64, so every corpus item owns a
disjoint counter block and can be generated independently, in any order, on
any platform, with identical results.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class ToneParams:
    """A real tone cos(omega_t * i + theta) of `length` samples."""

    omega_t: float
    theta: float
    length: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.omega_t <= np.pi:
            raise ConfigurationError(f"omega_t must be in [0, pi], got {self.omega_t}")
        if not -np.pi <= self.theta < np.pi:
            raise ConfigurationError(f"theta must be in [-pi, pi), got {self.theta}")
        if self.length < 1:
            raise ConfigurationError("length must be positive")


class CorpusKind(str, Enum):
    RANDOM_TONES = "random_tones"
    NOISE = "noise"


@dataclass(frozen=True)
class CorpusSpec:
    kind: CorpusKind
    count: int
    n: int
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", CorpusKind(self.kind))
        if self.count < 1:
            raise ConfigurationError("count must be >= 1")
        if self.n < 1:
            raise ConfigurationError("n must be >= 1")
        if self.seed < 0:
            raise ConfigurationError("seed must be nonnegative")


def make_tone(params: ToneParams) -> np.ndarray:
    """Evaluate the cosine sequence exactly."""
    i = np.arange(params.length, dtype=float)
    return np.cos(params.omega_t * i + params.theta)


def item_generator(seed: int, index: int) -> np.random.Generator:
    """Generator for corpus item `index`: Philox key=seed, counter=index*2**64."""
    return np.random.Generator(np.random.Philox(key=seed, counter=index << 64))


def draw_tone_params(spec: CorpusSpec) -> tuple[np.ndarray, np.ndarray]:
    """The (omega_t, theta) draws behind a random-tone corpus.

    omega_t is uniform on [0, pi], theta uniform on [-pi, pi), one pair per
    item from that item's own generator.
    """
    if spec.kind is not CorpusKind.RANDOM_TONES:
        raise ConfigurationError("tone parameters exist only for random_tones corpora")
    omegas = np.empty(spec.count)
    thetas = np.empty(spec.count)
    for j in range(spec.count):
        u = item_generator(spec.seed, j).random(2)
        omegas[j] = np.pi * u[0]
        thetas[j] = -np.pi + 2.0 * np.pi * u[1]
    return omegas, thetas


def make_corpus(spec: CorpusSpec) -> np.ndarray:
    """Corpus as a (count, n) array of frames, deterministic given seed.

    random_tones: each frame is cos(omega_t * i + theta) with the item's
    draws.  noise: each frame is i.i.d. uniform amplitude on [-1, 1].
    """
    if spec.kind is CorpusKind.RANDOM_TONES:
        omegas, thetas = draw_tone_params(spec)
        i = np.arange(spec.n, dtype=float)
        return np.cos(omegas[:, None] * i[None, :] + thetas[:, None])
    frames = np.empty((spec.count, spec.n))
    for j in range(spec.count):
        frames[j] = item_generator(spec.seed, j).uniform(-1.0, 1.0, size=spec.n)
    return frames


def make_tone_noise_mix(
    count: int,
    n: int,
    seed: int,
    band: tuple[float, float] = (0.05 * np.pi, 0.40 * np.pi),
    noise_level: float = 1.5e-3,
) -> np.ndarray:
    """Strong band-limited tones plus weak broadband noise, one tone per frame.

    Tone frequencies are uniform on `band`, phases uniform on [-pi, pi),
    amplitude 1; uniform noise at `noise_level` rides on top.  At bins far
    above the band the windowed tone leakage competes with the local noise
    floor, which is what makes the phase-uniformity trend across window
    shapes measurable.
    """
    lo, hi = band
    if not 0.0 <= lo < hi <= np.pi:
        raise ConfigurationError(f"band must satisfy 0 <= lo < hi <= pi, got {band}")
    if noise_level < 0:
        raise ConfigurationError("noise_level must be nonnegative")
    i = np.arange(n, dtype=float)
    frames = np.empty((count, n))
    for j in range(count):
        gen = item_generator(seed, j)
        u = gen.random(2)
        omega = lo + (hi - lo) * u[0]
        theta = -np.pi + 2.0 * np.pi * u[1]
        frames[j] = np.cos(omega * i + theta) + noise_level * gen.uniform(-1.0, 1.0, size=n)
    return frames
