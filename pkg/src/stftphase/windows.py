"""Parametric cosine analysis windows.

The window family is w_i = (1 - alpha) - alpha * cos(2*pi*i / N_w) for
i = 0 .. N-1.  alpha = 0 is the rectangular window, alpha = 0.46 the Hamming
window and alpha = 0.5 the Hann window.  The denominator N_w is N for
periodic windows (exact constant overlap-add at 50% overlap) and N - 1 for
symmetric windows.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError


class WindowMode(str, Enum):
    PERIODIC = "periodic"
    SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class WindowSpec:
    """Shape parameter, length in samples, and periodic/symmetric mode."""

    alpha: float
    length: int
    mode: WindowMode = WindowMode.PERIODIC

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", WindowMode(self.mode))
        if not 0.0 <= self.alpha <= 0.5:
            raise ConfigurationError(f"alpha must be in [0, 0.5], got {self.alpha}")
        if self.length < 4 or self.length % 2:
            raise ConfigurationError(
                f"window length must be even and >= 4, got {self.length}"
            )

    @property
    def denominator(self) -> int:
        """N_w: the cosine denominator selected by the mode."""
        if self.mode is WindowMode.PERIODIC:
            return self.length
        return self.length - 1


def make_window(spec: WindowSpec) -> np.ndarray:
    """Evaluate the window values w_0 .. w_{N-1} as float64."""
    i = np.arange(spec.length, dtype=float)
    return (1.0 - spec.alpha) - spec.alpha * np.cos(2.0 * np.pi * i / spec.denominator)


def overlap_add_profile(spec: WindowSpec, stride: int) -> np.ndarray:
    """Sum of window copies shifted by multiples of `stride`, over one period.

    Returns the length-`stride` profile sum_m w[i + m*stride].  For periodic
    windows at stride N/2 this is the constant 2*(1 - alpha).
    """
    if stride < 1 or spec.length % stride:
        raise ConfigurationError(
            f"stride {stride} must be positive and divide the window length {spec.length}"
        )
    w = make_window(spec)
    return w.reshape(spec.length // stride, stride).sum(axis=0)
