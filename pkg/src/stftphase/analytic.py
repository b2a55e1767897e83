"""Closed-form analysis of the phase a windowed tone induces on an STFT bin.

A real tone cos(omega_t*i + theta) analyzed with a length-N cosine window
produces a complex coefficient X_k at bin frequency omega_k whose real and
imaginary parts are finite combinations of Dirichlet-kernel trigonometric
sums.  This module evaluates those sums, the resulting coefficient phase
phi_k = F(theta), the rectangular-window decomposition of Re/Im into single
cosines of theta, the induced probability density of phi_k when theta is
uniform, and the window-independent locations of the density peaks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegenerateDecompositionError
from .windows import WindowMode

# |sin(gamma/2)| below this means "evaluate the kernel by its limit".
NEAR_SINGULAR_SIN = 1e-12

# Both |Re| and |Im| below NEAR_ZERO_COEFF_SCALE * N means the coefficient
# phase is an artifact of the atan2(0, 0) convention and should be flagged.
NEAR_ZERO_COEFF_SCALE = 1e-12

TONE_BELOW = "tone_below"
TONE_ABOVE = "tone_above"


def principal_angle_pi(x):
    """Reduce angle(s) into [-pi, pi).  principal_angle_pi(pi) == -pi."""
    x = np.asarray(x, dtype=float)
    y = np.mod(x + np.pi, 2.0 * np.pi)
    # guard the seam: float rounding can land mod() exactly on 2*pi
    y = np.where(y >= 2.0 * np.pi, 0.0, y) - np.pi
    return y[()] if y.ndim == 0 else y


def principal_angle_2pi(x):
    """Reduce angle(s) into [0, 2*pi)."""
    x = np.asarray(x, dtype=float)
    y = np.mod(x, 2.0 * np.pi)
    y = np.where(y >= 2.0 * np.pi, 0.0, y)
    return y[()] if y.ndim == 0 else y


def dirichlet_kernel(gamma, n: int):
    """sin(n*gamma/2) / sin(gamma/2) with removable singularities filled in.

    Equals n at gamma = 0.  Near even multiples of pi (|sin(gamma/2)| below
    NEAR_SINGULAR_SIN) the value is the limit n*cos(n*gamma/2)/cos(gamma/2),
    which keeps the function total and continuous.
    """
    if n < 4 or n % 2:
        raise ConfigurationError(f"n must be even and >= 4, got {n}")
    scalar = np.ndim(gamma) == 0
    half = 0.5 * np.atleast_1d(np.asarray(gamma, dtype=float))
    sin_half = np.sin(half)
    out = np.empty_like(half)
    near = np.abs(sin_half) < NEAR_SINGULAR_SIN
    safe = ~near
    out[safe] = np.sin(n * half[safe]) / sin_half[safe]
    if near.any():
        out[near] = n * np.cos(n * half[near]) / np.cos(half[near])
    return out[0] if scalar else out


def trig_sums(gamma, theta, n: int):
    """Closed forms of the length-n sine and cosine progressions.

    Returns (f, g) where
      f = sum_{i=0}^{n-1} sin(gamma*i + theta) = s(gamma, n) * sin((n-1)*gamma/2 + theta)
      g = sum_{i=0}^{n-1} cos(gamma*i + theta) = s(gamma, n) * cos((n-1)*gamma/2 + theta)
    and s is `dirichlet_kernel`.
    """
    s = dirichlet_kernel(gamma, n)
    arg = 0.5 * (n - 1) * np.asarray(gamma, dtype=float) + theta
    return s * np.sin(arg), s * np.cos(arg)


@dataclass(frozen=True)
class AnalyticContext:
    """Tone frequency, bin frequency, and window parameters for one evaluation.

    delta_plus = omega_t + omega_k and delta_minus = omega_t - omega_k are the
    sum/difference frequencies the trigonometric sums are evaluated at, and
    beta = 2*pi/N_w is the window modulation frequency.
    """

    omega_t: float
    omega_k: float
    n: int
    alpha: float = 0.0
    mode: WindowMode = WindowMode.PERIODIC

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", WindowMode(self.mode))
        if self.n < 4 or self.n % 2:
            raise ConfigurationError(f"n must be even and >= 4, got {self.n}")
        if not 0.0 <= self.omega_t <= np.pi:
            raise ConfigurationError(f"omega_t must be in [0, pi], got {self.omega_t}")
        if not 0.0 < self.omega_k < np.pi:
            raise ConfigurationError(f"omega_k must be in (0, pi), got {self.omega_k}")
        if not 0.0 <= self.alpha <= 0.5:
            raise ConfigurationError(f"alpha must be in [0, 0.5], got {self.alpha}")

    @classmethod
    def for_bin(
        cls,
        omega_t: float,
        k: int,
        n: int,
        alpha: float = 0.0,
        mode: WindowMode = WindowMode.PERIODIC,
    ) -> "AnalyticContext":
        """Context for integer bin k (1 <= k <= n/2 - 1)."""
        if not 1 <= k <= n // 2 - 1:
            raise ConfigurationError(f"bin k must be in 1..{n // 2 - 1}, got {k}")
        return cls(omega_t=omega_t, omega_k=2.0 * np.pi * k / n, n=n, alpha=alpha, mode=mode)

    @property
    def delta_plus(self) -> float:
        return self.omega_t + self.omega_k

    @property
    def delta_minus(self) -> float:
        return self.omega_t - self.omega_k

    @property
    def window_denominator(self) -> int:
        return self.n if self.mode is WindowMode.PERIODIC else self.n - 1

    @property
    def beta(self) -> float:
        return 2.0 * np.pi / self.window_denominator


def coefficient_parts(ctx: AnalyticContext, theta):
    """Real and imaginary parts of the coefficient of the windowed tone.

    Twelve trigonometric sums: one (f, g) pair at each of delta_plus,
    delta_minus, and their four beta-shifted neighbours.  theta may be a
    scalar or an array.
    """
    n, a, beta = ctx.n, ctx.alpha, ctx.beta
    dp, dm = ctx.delta_plus, ctx.delta_minus
    f_p, g_p = trig_sums(dp, theta, n)
    f_m, g_m = trig_sums(dm, theta, n)
    f_pl, g_pl = trig_sums(dp - beta, theta, n)
    f_pr, g_pr = trig_sums(dp + beta, theta, n)
    f_ml, g_ml = trig_sums(dm - beta, theta, n)
    f_mr, g_mr = trig_sums(dm + beta, theta, n)
    re = 0.5 * (1.0 - a) * (g_p + g_m) - 0.25 * a * (g_pl + g_pr + g_ml + g_mr)
    im = 0.5 * (1.0 - a) * (-f_p + f_m) - 0.25 * a * (-f_pl - f_pr + f_ml + f_mr)
    return re, im


def near_zero_parts(re, im, n: int):
    """True where both |re| and |im| fall under the near-zero guard for size n."""
    tiny = NEAR_ZERO_COEFF_SCALE * n
    return (np.abs(re) < tiny) & (np.abs(im) < tiny)


def coefficient_phase(ctx: AnalyticContext, theta):
    """Coefficient phase phi_k = F(theta) in [-pi, pi); atan2(0, 0) is 0.

    Coefficients whose real and imaginary parts are both below the near-zero
    guard report phase 0 (see `near_zero_parts` to detect them).
    """
    re, im = coefficient_parts(ctx, theta)
    phi = principal_angle_pi(np.arctan2(im, re))
    flagged = near_zero_parts(re, im, ctx.n)
    out = np.where(flagged, 0.0, phi)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class RectDecomposition:
    """Rectangular-window coefficient as single cosines of the tone phase.

    Re(X) = c_re * cos(theta + zeta_re) and Im(X) = c_im * cos(theta + zeta_im),
    with (a, b) the cos/sin coefficients the c/zeta pairs are built from.
    """

    a_re: float
    b_re: float
    a_im: float
    b_im: float
    c_re: float
    c_im: float
    zeta_re: float
    zeta_im: float

    @property
    def amplitude_ratio(self):
        """c_re / c_im, the quantity that drives nonlinearity of F."""
        return self.c_re / self.c_im

    @property
    def zeta_gap_2pi(self):
        """zeta_re - zeta_im reduced into [0, 2*pi); pi/2 exactly on-bin."""
        return principal_angle_2pi(self.zeta_re - self.zeta_im)


def rect_decompose(omega_t, omega_k, n: int) -> RectDecomposition:
    """Decompose the rectangular-window coefficient at (omega_t, omega_k).

    Accepts scalars or broadcastable arrays.  c_im is zero when the tone and
    bin are mutually orthogonal; callers needing the ratio must handle that.
    """
    f_p, g_p = trig_sums(np.asarray(omega_t, float) + omega_k, 0.0, n)
    f_m, g_m = trig_sums(np.asarray(omega_t, float) - omega_k, 0.0, n)
    a_re = 0.5 * (g_p + g_m)
    b_re = -0.5 * (f_p + f_m)
    a_im = 0.5 * (f_m - f_p)
    b_im = 0.5 * (g_m - g_p)
    return RectDecomposition(
        a_re=a_re,
        b_re=b_re,
        a_im=a_im,
        b_im=b_im,
        c_re=np.hypot(a_re, b_re),
        c_im=np.hypot(a_im, b_im),
        zeta_re=np.arctan2(-b_re, a_re),
        zeta_im=np.arctan2(-b_im, a_im),
    )


def phase_via_decomposition(dec: RectDecomposition, theta):
    """Coefficient phase from the cosine decomposition.

    phi_k = atan2(cos(theta + zeta_im), (c_re/c_im) * cos(theta + zeta_re)),
    valid when c_im > 0.  Agrees with `coefficient_phase` at alpha = 0
    wherever the coefficient is not under the near-zero guard.
    """
    if not np.all(dec.c_im > 0.0):
        raise DegenerateDecompositionError("c_im must be positive for the phase form")
    ratio = dec.c_re / dec.c_im
    theta = np.asarray(theta, dtype=float)
    phi = np.arctan2(
        np.cos(theta + dec.zeta_im), ratio * np.cos(theta + dec.zeta_re)
    )
    return principal_angle_pi(phi)


def phase_pdf_curve(ctx: AnalyticContext, resolution: int = 100_000):
    """Parametric density of the coefficient phase for uniform tone phase.

    Rectangular window only.  Sweeps theta over a uniform grid on [-pi, pi)
    and returns (phi, density) where phi = F(theta) and density is the
    change-of-variables value 1 / (2*pi*|F'(theta)|) in closed form:

        | s(d+)^2 + 2 s(d+) s(d-) cos((n-1)*omega_t + 2*theta) + s(d-)^2 |
        | --------------------------------------------------------------- |
        |              2*pi * (s(d-)^2 - s(d+)^2)                          |

    Raises if alpha != 0, if omega_t == omega_k, or if the kernel energies
    s(d+)^2 and s(d-)^2 coincide (degenerate denominator).
    """
    if ctx.alpha != 0.0:
        raise ConfigurationError("closed-form phase pdf requires a rectangular window")
    if ctx.omega_t == ctx.omega_k:
        raise ConfigurationError("phase pdf requires omega_t != omega_k")
    if resolution < 2:
        raise ConfigurationError("resolution must be >= 2")
    n = ctx.n
    s_p = dirichlet_kernel(ctx.delta_plus, n)
    s_m = dirichlet_kernel(ctx.delta_minus, n)
    denom = s_m * s_m - s_p * s_p
    if abs(denom) <= 1e-12 * (s_p * s_p + s_m * s_m):
        raise DegenerateDecompositionError(
            "kernel energies coincide; the phase pdf denominator vanishes"
        )
    theta = np.linspace(-np.pi, np.pi, resolution, endpoint=False)
    phi = coefficient_phase(ctx, theta)
    numer = s_p * s_p + 2.0 * s_p * s_m * np.cos((n - 1) * ctx.omega_t + 2.0 * theta) + s_m * s_m
    density = np.abs(numer / (2.0 * np.pi * denom))
    return phi, density


def pdf_peak_locations(omega_k: float, side: str, n: int | None = None):
    """The two intrinsic phase-density peaks for tones on one side of the bin.

    Tones below the bin peak at ((omega_k +- pi) / 2); tones above peak at
    ((omega_k + pi +- pi) / 2), both reduced into [-pi, pi).  The locations
    depend only on the side, not on the tone frequency.  Returns the pair
    sorted ascending.  When `n` is given, omega_k must be an exact bin
    frequency 2*pi*k/n with 1 <= k <= n/2 - 1.
    """
    if n is not None:
        k = omega_k * n / (2.0 * np.pi)
        if abs(k - round(k)) > 1e-9 * n or not 1 <= round(k) <= n // 2 - 1:
            raise ConfigurationError(
                f"omega_k={omega_k} is not a bin frequency for n={n}"
            )
    elif not 0.0 < omega_k < np.pi:
        raise ConfigurationError(f"omega_k must be in (0, pi), got {omega_k}")
    if side == TONE_BELOW:
        pair = (
            principal_angle_pi((omega_k + np.pi) / 2.0),
            principal_angle_pi((omega_k - np.pi) / 2.0),
        )
    elif side == TONE_ABOVE:
        pair = (
            principal_angle_pi((omega_k + 2.0 * np.pi) / 2.0),
            principal_angle_pi(omega_k / 2.0),
        )
    else:
        raise ConfigurationError(f"side must be {TONE_BELOW!r} or {TONE_ABOVE!r}, got {side!r}")
    return tuple(sorted(float(p) for p in pair))
