"""Closed-form phase analysis versus brute-force numerical oracles."""

import numpy as np
import pytest

from stftphase.analytic import (
    TONE_ABOVE,
    TONE_BELOW,
    AnalyticContext,
    RectDecomposition,
    coefficient_parts,
    coefficient_phase,
    dirichlet_kernel,
    near_zero_parts,
    pdf_peak_locations,
    phase_pdf_curve,
    phase_via_decomposition,
    principal_angle_2pi,
    principal_angle_pi,
    rect_decompose,
    trig_sums,
)
from stftphase.errors import ConfigurationError, DegenerateDecompositionError
from stftphase.windows import WindowMode, WindowSpec, make_window


def windowed_tone_dft_bin(omega_t, theta, k, n, alpha, mode):
    """Numeric oracle: direct summation of the windowed tone at one bin."""
    i = np.arange(n)
    w = make_window(WindowSpec(alpha=alpha, length=n, mode=mode))
    x = np.cos(omega_t * i + theta)
    value = np.sum(w * x * np.exp(-2j * np.pi * k * i / n))
    return value.real, value.imag


class TestPrincipalAngles:
    def test_pi_boundary(self):
        assert principal_angle_pi(np.pi) == -np.pi

    def test_2pi_example(self):
        assert principal_angle_2pi(-np.pi / 2) == pytest.approx(3 * np.pi / 2, abs=1e-15)

    def test_idempotent(self):
        rng = np.random.default_rng(1)
        x = rng.uniform(-50, 50, 1000)
        once = principal_angle_pi(x)
        assert np.array_equal(principal_angle_pi(once), once)
        once2 = principal_angle_2pi(x)
        assert np.array_equal(principal_angle_2pi(once2), once2)

    def test_ranges(self):
        rng = np.random.default_rng(2)
        x = rng.uniform(-100, 100, 5000)
        p = principal_angle_pi(x)
        q = principal_angle_2pi(x)
        assert (p >= -np.pi).all() and (p < np.pi).all()
        assert (q >= 0).all() and (q < 2 * np.pi).all()
        # tiny negative values must not wrap onto the excluded endpoint
        assert principal_angle_2pi(-1e-20) < 2 * np.pi
        assert principal_angle_pi(np.pi - 1e-18) < np.pi


class TestDirichletKernel:
    def test_value_at_zero(self):
        assert dirichlet_kernel(0.0, 16) == 16

    def test_zero_at_twice_bin_frequency(self):
        omega_k = 2 * np.pi * 3 / 16
        assert abs(dirichlet_kernel(2 * omega_k, 16)) <= 1e-12 * 16

    def test_limit_at_2pi(self):
        # continuous continuation: s(2*pi - eps, n) -> -n for even n
        assert dirichlet_kernel(2 * np.pi, 16) == pytest.approx(-16.0)
        assert dirichlet_kernel(2 * np.pi - 1e-9, 16) == pytest.approx(-16.0, abs=1e-5)

    def test_matches_brute_force_sums(self):
        rng = np.random.default_rng(3)
        n = 32
        i = np.arange(n)
        for _ in range(100):
            gamma = rng.uniform(-np.pi, 2 * np.pi)
            theta = rng.uniform(-np.pi, np.pi)
            f, g = trig_sums(gamma, theta, n)
            assert f == pytest.approx(np.sum(np.sin(gamma * i + theta)), abs=1e-9)
            assert g == pytest.approx(np.sum(np.cos(gamma * i + theta)), abs=1e-9)

    def test_odd_n_rejected(self):
        with pytest.raises(ConfigurationError):
            dirichlet_kernel(0.5, 15)


class TestTrigSums:
    def test_zero_gamma_zero_theta(self):
        f, g = trig_sums(0.0, 0.0, 8)
        assert f == pytest.approx(0.0, abs=1e-15)
        assert g == pytest.approx(8.0, abs=1e-15)

    def test_zero_gamma_quarter_turn(self):
        f, g = trig_sums(0.0, np.pi / 2, 8)
        assert f == pytest.approx(8.0, abs=1e-15)
        assert g == pytest.approx(0.0, abs=1e-14)


class TestCoefficientParts:
    def test_on_bin_cosine(self):
        n = 64
        ctx = AnalyticContext.for_bin(omega_t=2 * np.pi * 5 / n, k=5, n=n)
        re, im = coefficient_parts(ctx, 0.0)
        assert re == pytest.approx(n / 2, rel=1e-12)
        assert im == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("alpha", [0.0, 0.25, 0.46, 0.5])
    @pytest.mark.parametrize("mode", list(WindowMode))
    def test_matches_numeric_stft(self, alpha, mode):
        # Relative scale floored at 1e-3*n: when a heavily-suppressed
        # coefficient cancels down to ~1e-6 from O(n) intermediates, both
        # evaluation routes are limited to ~eps*n absolute accuracy, so a
        # bare relative comparison against |X| is unattainable in float64.
        rng = np.random.default_rng(hash((alpha, mode)) % 2**32)
        n = 512
        for _ in range(10):
            k = int(rng.integers(1, n // 2))
            omega_t = rng.uniform(0, np.pi)
            theta = rng.uniform(-np.pi, np.pi)
            ctx = AnalyticContext.for_bin(omega_t, k, n, alpha=alpha, mode=mode)
            re, im = coefficient_parts(ctx, theta)
            re0, im0 = windowed_tone_dft_bin(omega_t, theta, k, n, alpha, mode)
            scale = max(np.hypot(re0, im0), 1e-3 * n)
            assert np.hypot(re - re0, im - im0) <= 1e-8 * scale

    def test_sinusoidal_in_theta_for_rect(self):
        # alpha = 0: Re and Im are pure cosines of theta (period 2*pi)
        n = 512
        ctx = AnalyticContext.for_bin(0.3777 * np.pi, 100, n)
        theta = np.linspace(-np.pi, np.pi, 256, endpoint=False)
        re, im = coefficient_parts(ctx, theta)
        basis = np.column_stack([np.cos(theta), np.sin(theta)])
        for series in (re, im):
            coef, *_ = np.linalg.lstsq(basis, series, rcond=None)
            residual = series - basis @ coef
            assert np.max(np.abs(residual)) <= 1e-9 * np.max(np.abs(series))


class TestOnBinPhaseIdentity:
    theta_grid = np.linspace(-np.pi, np.pi, 100, endpoint=False)

    def phase_errors(self, alpha, mode, n=512, ks=(5, 100, 230, 255)):
        worst = 0.0
        for k in ks:
            ctx = AnalyticContext.for_bin(2 * np.pi * k / n, k, n, alpha=alpha, mode=mode)
            phi = coefficient_phase(ctx, self.theta_grid)
            err = np.abs(principal_angle_pi(phi - self.theta_grid))
            worst = max(worst, float(err.max()))
        return worst

    def test_rectangular_exact(self):
        assert self.phase_errors(0.0, WindowMode.PERIODIC) <= 1e-9

    def test_periodic_hamming_exact(self):
        assert self.phase_errors(0.46, WindowMode.PERIODIC) <= 1e-9

    def test_symmetric_hamming_close_but_not_exact(self):
        worst = self.phase_errors(0.46, WindowMode.SYMMETRIC)
        assert 1e-12 < worst <= 0.01


class TestRectDecompose:
    def test_amplitudes_match_components(self):
        dec = rect_decompose(0.88 * np.pi, 2 * np.pi * 230 / 512, 512)
        assert dec.c_re == pytest.approx(np.hypot(dec.a_re, dec.b_re), rel=1e-15)
        assert dec.c_im == pytest.approx(np.hypot(dec.a_im, dec.b_im), rel=1e-15)

    def test_cosine_form_reconstructs_parts(self):
        n = 512
        omega_t, k = 0.754321 * np.pi, 222
        ctx = AnalyticContext.for_bin(omega_t, k, n)
        dec = rect_decompose(omega_t, ctx.omega_k, n)
        theta = np.linspace(-np.pi, np.pi, 64, endpoint=False)
        re, im = coefficient_parts(ctx, theta)
        assert np.allclose(re, dec.c_re * np.cos(theta + dec.zeta_re), atol=1e-9 * n)
        assert np.allclose(im, dec.c_im * np.cos(theta + dec.zeta_im), atol=1e-9 * n)

    @pytest.mark.parametrize(
        "k,n,omega_t,ratio,angle_pi",
        [
            (230, 512, 0.88 * np.pi, 1.18, 0.52),
            (230, 512, 0.65 * np.pi, 3.25, 0.66),
            (922, 2048, 0.45 * np.pi, 4.82, 0.77),
        ],
    )
    def test_reference_conditions(self, k, n, omega_t, ratio, angle_pi):
        dec = rect_decompose(omega_t, 2 * np.pi * k / n, n)
        assert dec.amplitude_ratio == pytest.approx(ratio, abs=0.01)
        assert dec.zeta_gap_2pi / np.pi == pytest.approx(angle_pi, abs=0.01)

    def test_on_bin_anchor(self):
        n = 16
        for k in range(1, 8):
            omega_k = 2 * np.pi * k / n
            dec = rect_decompose(omega_k, omega_k, n)
            assert dec.amplitude_ratio == pytest.approx(1.0, abs=1e-9)
            assert dec.zeta_gap_2pi == pytest.approx(np.pi / 2, abs=1e-9)


class TestPhaseViaDecomposition:
    def test_agrees_with_direct_phase(self):
        rng = np.random.default_rng(5)
        n = 512
        theta = np.linspace(-np.pi, np.pi, 257, endpoint=False)
        for _ in range(20):
            k = int(rng.integers(1, n // 2))
            omega_t = rng.uniform(0, np.pi)
            ctx = AnalyticContext.for_bin(omega_t, k, n)
            dec = rect_decompose(omega_t, ctx.omega_k, n)
            if dec.c_im == 0:
                continue
            re, im = coefficient_parts(ctx, theta)
            usable = ~near_zero_parts(re, im, n)
            diff = principal_angle_pi(
                phase_via_decomposition(dec, theta) - coefficient_phase(ctx, theta)
            )
            assert np.max(np.abs(diff[usable])) <= 1e-9

    def test_periodic_in_theta(self):
        dec = rect_decompose(0.45 * np.pi, 2 * np.pi * 230 / 512, 512)
        theta = np.linspace(-np.pi, np.pi, 64, endpoint=False)
        assert np.allclose(
            phase_via_decomposition(dec, theta),
            phase_via_decomposition(dec, theta + 2 * np.pi),
            atol=1e-12,
        )

    def test_nearly_linear_versus_strongly_nonlinear(self):
        theta = np.linspace(-np.pi, np.pi, 4096, endpoint=False)

        def slope_spread(omega_t):
            dec = rect_decompose(omega_t, 2 * np.pi * 230 / 512, 512)
            phi = np.unwrap(phase_via_decomposition(dec, theta))
            slope = np.abs(np.diff(phi)) / (theta[1] - theta[0])
            return slope.max() / slope.min()

        assert slope_spread(0.88 * np.pi) < 2.0  # near the bin: nearly linear
        assert slope_spread(0.45 * np.pi) > 4.0  # far from the bin

    def test_degenerate_rejected(self):
        dec = RectDecomposition(
            a_re=1.0, b_re=0.0, a_im=0.0, b_im=0.0,
            c_re=1.0, c_im=0.0, zeta_re=0.0, zeta_im=0.0,
        )
        with pytest.raises(DegenerateDecompositionError):
            phase_via_decomposition(dec, 0.0)


class TestPhasePdfCurve:
    def density_context(self, omega_t=0.88 * np.pi, k=230, n=512):
        return AnalyticContext.for_bin(omega_t, k, n)

    def test_density_nonnegative_and_normalized(self):
        phi, density = phase_pdf_curve(self.density_context(), resolution=100_000)
        assert (density >= 0).all()
        seg = np.abs(principal_angle_pi(np.roll(phi, -1) - phi))
        total = np.sum(density * seg)
        assert total == pytest.approx(1.0, abs=1e-3)

    def test_matches_finite_difference_derivative(self):
        ctx = self.density_context(omega_t=0.45 * np.pi)
        resolution = 200_000
        theta = np.linspace(-np.pi, np.pi, resolution, endpoint=False)
        phi, density = phase_pdf_curve(ctx, resolution=resolution)
        dtheta = theta[1] - theta[0]
        dphi = principal_angle_pi(np.roll(phi, -1) - np.roll(phi, 1))
        deriv = np.abs(dphi) / (2 * dtheta)
        strong = deriv > 0.1
        expected = 1.0 / (2 * np.pi * deriv[strong])
        assert np.max(np.abs(density[strong] - expected) / expected) <= 1e-4

    def test_matches_monte_carlo_histogram(self):
        ctx = self.density_context(omega_t=0.65 * np.pi)
        phi, density = phase_pdf_curve(ctx, resolution=400_000)
        bins = 64
        edges = np.linspace(-np.pi, np.pi, bins + 1)
        seg = np.abs(principal_angle_pi(np.roll(phi, -1) - phi))
        mid = principal_angle_pi(phi + 0.5 * principal_angle_pi(np.roll(phi, -1) - phi))
        mass = np.bincount(
            np.clip(((mid + np.pi) * bins / (2 * np.pi)).astype(int), 0, bins - 1),
            weights=density * seg,
            minlength=bins,
        )
        mass /= mass.sum()
        rng = np.random.Generator(np.random.Philox(key=99))
        theta_mc = rng.uniform(-np.pi, np.pi, 10**6)
        counts, _ = np.histogram(coefficient_phase(ctx, theta_mc), bins=edges)
        mc = counts / counts.sum()
        tv = 0.5 * np.sum(np.abs(mass - mc))
        assert tv <= 0.02

    def test_near_bin_density_nearly_flat(self):
        _, density = phase_pdf_curve(self.density_context(), resolution=100_000)
        assert density.max() / density.min() <= 1.6

    def test_nonrectangular_rejected(self):
        ctx = AnalyticContext.for_bin(0.88 * np.pi, 230, 512, alpha=0.46)
        with pytest.raises(ConfigurationError):
            phase_pdf_curve(ctx)

    def test_on_bin_rejected(self):
        n = 512
        ctx = AnalyticContext.for_bin(2 * np.pi * 230 / n, 230, n)
        with pytest.raises(ConfigurationError):
            phase_pdf_curve(ctx)

    def test_equal_kernel_energies_flagged(self):
        # at omega_t = 0 the sum/difference kernels coincide and the density
        # denominator vanishes; such contexts are flagged for callers to skip
        ctx = AnalyticContext(omega_t=0.0, omega_k=2 * np.pi * 100 / 512, n=512)
        with pytest.raises(DegenerateDecompositionError):
            phase_pdf_curve(ctx)


class TestPdfPeakLocations:
    def test_below_example(self):
        assert pdf_peak_locations(0.5 * np.pi, TONE_BELOW) == pytest.approx(
            (-0.25 * np.pi, 0.75 * np.pi)
        )

    def test_above_example(self):
        assert pdf_peak_locations(0.5 * np.pi, TONE_ABOVE) == pytest.approx(
            (-0.75 * np.pi, 0.25 * np.pi)
        )

    def test_bin_validation(self):
        with pytest.raises(ConfigurationError):
            pdf_peak_locations(0.5001 * np.pi, TONE_BELOW, n=16)
        assert pdf_peak_locations(2 * np.pi * 4 / 16, TONE_BELOW, n=16)

    def test_invalid_side(self):
        with pytest.raises(ConfigurationError):
            pdf_peak_locations(0.5 * np.pi, "sideways")

    def test_pdf_curve_argmax_lands_on_predictions(self):
        # independent oracle: argmax of the parametric density over a phase grid
        rng = np.random.default_rng(17)
        n, k = 512, 230
        omega_k = 2 * np.pi * k / n
        cell = 2 * np.pi / 256
        predicted = pdf_peak_locations(omega_k, TONE_BELOW, n=n)
        for _ in range(20):
            omega_t = rng.uniform(0.05 * np.pi, omega_k - 0.02 * np.pi)
            phi, density = phase_pdf_curve(
                AnalyticContext.for_bin(omega_t, k, n), resolution=200_000
            )
            top = phi[np.argmax(density)]
            nearest = min(abs(principal_angle_pi(top - p)) for p in predicted)
            assert nearest <= cell

    def test_peaks_do_not_depend_on_tone_frequency(self):
        n, k = 512, 100
        omega_k = 2 * np.pi * k / n
        argmax_cells = set()
        for omega_t in np.linspace(omega_k + 0.05 * np.pi, 0.95 * np.pi, 10):
            phi, density = phase_pdf_curve(
                AnalyticContext.for_bin(omega_t, k, n), resolution=100_000
            )
            cell = int((phi[np.argmax(density)] + np.pi) * 64 / (2 * np.pi))
            argmax_cells.add(cell)
        predicted = pdf_peak_locations(omega_k, TONE_ABOVE, n=n)
        predicted_cells = {int((p + np.pi) * 64 / (2 * np.pi)) for p in predicted}
        assert argmax_cells <= predicted_cells


class TestSignProperty:
    def test_kernel_product_sign_follows_side(self):
        n = 128
        for k in range(1, n // 2):
            omega_k = 2 * np.pi * k / n
            for omega_t in np.linspace(0.01 * np.pi, 0.99 * np.pi, 37):
                product = dirichlet_kernel(omega_t + omega_k, n) * dirichlet_kernel(
                    omega_t - omega_k, n
                )
                if omega_t < omega_k:
                    assert product <= 1e-9
                elif omega_t > omega_k:
                    assert product >= -1e-9
