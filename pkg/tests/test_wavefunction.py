"""Tests for cpskit.wavefunction module."""

import math

import numpy as np
import pytest

from cpskit.observables import quadrature_stats
from cpskit.quadrature import QuadratureCoverageWarning, QuadratureSpec, composite_gauss_legendre
from cpskit.series import SeriesNotConvergedWarning, TruncationPolicy
from cpskit.states import CoherentState, DomainError, PhaseState
from cpskit.wavefunction import (
    EIGENFUNCTION_BOUND,
    GAUSSIANITY_COEFFICIENT,
    ExpansionRangeWarning,
    density_moments_quadrature,
    density_peak,
    gaussian_density,
    gaussianity_G,
    gaussianity_report,
    gaussianity_small_eps,
    oscillator_eigenfunction_sequence,
    psi_coherent,
    psi_cps,
    psi_cps_series,
    wavefunction_samples,
)

from conftest import eigenfunction_oracle

PI_QUARTER = math.pi**-0.25


class TestEigenfunctionSequence:
    """Tests for oscillator_eigenfunction_sequence."""

    def test_values_at_origin(self) -> None:
        """phi_0(0) = pi^(-1/4) and odd functions vanish at the origin."""
        phi = oscillator_eigenfunction_sequence(0.0, 3)
        assert phi[0] == pytest.approx(PI_QUARTER, rel=1e-15)
        assert phi[1] == 0.0
        assert phi[3] == 0.0

    def test_second_function_at_one(self) -> None:
        """phi_2(1) is about 0.32214."""
        assert oscillator_eigenfunction_sequence(1.0, 2)[2] == pytest.approx(0.32214, abs=1e-5)

    @pytest.mark.parametrize("x", [-2.5, 0.3, 1.0, 4.0])
    def test_matches_hermite_oracle(self, x: float) -> None:
        """The recurrence should agree with explicit Hermite polynomials."""
        phi = oscillator_eigenfunction_sequence(x, 20)
        for n in range(21):
            assert phi[n] == pytest.approx(eigenfunction_oracle(n, x), rel=1e-12, abs=1e-14)

    @pytest.mark.parametrize("x", [0.0, 3.7, 20.0, 45.0])
    def test_uniformly_bounded(self, x: float) -> None:
        """|phi_n(x)| stays below the uniform bound."""
        phi = oscillator_eigenfunction_sequence(x, 2000)
        assert np.all(np.abs(phi) <= EIGENFUNCTION_BOUND)

    def test_no_overflow_far_out(self) -> None:
        """Deep in the forbidden region the rescaled recurrence stays finite."""
        phi = oscillator_eigenfunction_sequence(50.0, 200_000)
        assert np.all(np.isfinite(phi))
        assert np.max(np.abs(phi)) <= EIGENFUNCTION_BOUND
        assert phi[0] == 0.0
        assert np.max(np.abs(phi)) > 0.0

    def test_rejects_negative_order(self) -> None:
        """A negative n_max raises DomainError."""
        with pytest.raises(DomainError):
            oscillator_eigenfunction_sequence(0.0, -1)


class TestPsiCps:
    """Tests for the CPS wavefunction."""

    def test_vacuum(self) -> None:
        """|eps| = 0 gives the oscillator ground state."""
        xs = np.array([-1.0, 0.0, 2.0])
        np.testing.assert_allclose(psi_cps(PhaseState(0.0), xs), PI_QUARTER * np.exp(-xs * xs / 2), rtol=1e-14)

    def test_scalar_input_gives_complex(self) -> None:
        """A scalar x returns a Python complex."""
        assert isinstance(psi_cps(PhaseState(0.5), 0.3), complex)

    def test_real_at_phase_zero(self) -> None:
        """Positive real eps gives an exactly real wavefunction."""
        values = psi_cps(PhaseState(0.7, 0.0), np.linspace(-3.0, 5.0, 17))
        assert np.all(values.imag == 0.0)

    def test_parity(self) -> None:
        """Flipping the sign of eps mirrors the density."""
        xs = np.linspace(-3.0, 3.0, 13)
        ahead = np.abs(psi_cps(PhaseState(0.6, 0.0), xs))
        behind = np.abs(psi_cps(PhaseState(0.6, math.pi), -xs))
        np.testing.assert_allclose(ahead, behind, rtol=1e-12, atol=1e-14)

    def test_symmetric_density_at_half_pi(self) -> None:
        """At phase pi/2 the density is even in x."""
        xs = np.linspace(0.0, 3.0, 7)
        state = PhaseState.from_mean_n(5.0, math.pi / 2)
        left = np.abs(psi_cps(state, -xs)) ** 2
        right = np.abs(psi_cps(state, xs)) ** 2
        np.testing.assert_allclose(left, right, rtol=1e-10, atol=1e-14)

    def test_series_reports_truncation(self) -> None:
        """psi_cps_series returns its term count and tail."""
        result = psi_cps_series(PhaseState(0.5), np.array([0.0, 1.0]))
        assert result.converged
        assert result.tail_estimate <= 1e-10
        assert result.terms_used > 1

    def test_unconverged_warns(self) -> None:
        """Too few terms should warn rather than raise."""
        with pytest.warns(SeriesNotConvergedWarning):
            psi_cps(PhaseState(0.99), 0.0, TruncationPolicy.fixed(10, tail_tol=1e-10))

    @pytest.mark.parametrize("n_bar", [0.0, 1.0, 25.0])
    @pytest.mark.parametrize("phase", [0.0, math.pi / 2])
    def test_normalised(self, n_bar: float, phase: float) -> None:
        """The density integrates to one."""
        moments = density_moments_quadrature(PhaseState.from_mean_n(n_bar, phase))
        assert moments.norm == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("n_bar", [1.0, 25.0])
    @pytest.mark.parametrize("phase", [0.0, math.pi / 2])
    def test_moments_match_series_statistics(self, n_bar: float, phase: float) -> None:
        """Numerical moments of |psi|^2 agree with the S1/S2 statistics."""
        state = PhaseState.from_mean_n(n_bar, phase)
        stats = quadrature_stats(state)
        moments = density_moments_quadrature(state)
        assert moments.converged
        assert moments.mean_x == pytest.approx(stats.mean_x, abs=1e-6)
        assert moments.var_x == pytest.approx(stats.var_x, abs=1e-6)

    def test_narrow_window_is_flagged(self) -> None:
        """A window that misses the support warns and is flagged."""
        state = PhaseState.from_mean_n(25.0, 0.0)
        with pytest.warns(QuadratureCoverageWarning):
            moments = density_moments_quadrature(state, quad_spec=QuadratureSpec(half_width=5.0))
        assert not moments.converged

    def test_samples_store_density(self) -> None:
        """Each sample's density is re^2 + im^2."""
        for sample in wavefunction_samples(PhaseState(0.5, 1.0), np.array([-1.0, 0.5])):
            assert sample.density == sample.re * sample.re + sample.im * sample.im


class TestReferenceWavefunctions:
    """Tests for the coherent and Gaussian references."""

    def test_coherent_vacuum(self) -> None:
        """alpha = 0 is the ground state."""
        assert psi_coherent(CoherentState(0.0), 0.0) == pytest.approx(PI_QUARTER, rel=1e-15)

    def test_coherent_imaginary_alpha(self) -> None:
        """Imaginary alpha modulates the ground state with a plane wave."""
        x = 0.3
        value = psi_coherent(CoherentState(5j), x)
        expected = PI_QUARTER * math.exp(-x * x / 2) * math.cos(5.0 * math.sqrt(2.0) * x)
        assert value.real == pytest.approx(expected, rel=1e-12)

    def test_coherent_density_is_shifted_gaussian(self) -> None:
        """|psi_alpha|^2 is normal around sqrt(2) alpha with variance 1/2."""
        xs = np.linspace(4.0, 10.0, 7)
        density = np.abs(psi_coherent(CoherentState(5.0), xs)) ** 2
        np.testing.assert_allclose(density, gaussian_density(5.0 * math.sqrt(2.0), 0.5, xs), rtol=1e-12)

    def test_gaussian_density_normalised(self) -> None:
        """The reference normal density integrates to one."""
        points, weights = composite_gauss_legendre(-60.0, 60.0, 400, 20)
        assert float(np.sum(weights * gaussian_density(6.3, 10.0, points))) == pytest.approx(1.0, abs=1e-8)

    def test_gaussian_density_rejects_zero_variance(self) -> None:
        """A non-positive variance raises DomainError."""
        with pytest.raises(DomainError):
            gaussian_density(0.0, 0.0, 1.0)


class TestGaussianity:
    """Tests for the Gaussianity measure G."""

    def test_vacuum_is_gaussian(self) -> None:
        """G = 1 for the vacuum."""
        assert gaussianity_G(PhaseState(0.0)) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("phase", [0.0, math.pi / 2])
    def test_small_eps_coefficient(self, phase: float) -> None:
        """At |eps| = 0.1, (G - 1) / |eps|^4 is within 5% of 3 sqrt 2 - 3 - sqrt(3/2)."""
        eps_abs = 0.1
        g = gaussianity_G(PhaseState(eps_abs, phase))
        assert (g - 1.0) / eps_abs**4 == pytest.approx(GAUSSIANITY_COEFFICIENT, rel=0.05)

    @pytest.mark.parametrize("eps_abs", [0.03, 0.1])
    def test_phase_cases_agree_for_small_eps(self, eps_abs: float) -> None:
        """Phases 0 and pi/2 give the same G to leading order."""
        along = gaussianity_G(PhaseState(eps_abs, 0.0))
        across = gaussianity_G(PhaseState(eps_abs, math.pi / 2))
        assert along == pytest.approx(across, abs=1e-7)

    def test_sub_gaussian_for_large_n(self) -> None:
        """At n = 25 and phase 0 the density is below a Gaussian at its mean."""
        report = gaussianity_report(PhaseState.from_mean_n(25.0, 0.0))
        assert report.g < 1.0
        assert report.converged

    def test_small_eps_expansion(self) -> None:
        """The expansion gives 1 at eps = 0 and tracks the full value."""
        assert gaussianity_small_eps(0.0) == 1.0
        assert GAUSSIANITY_COEFFICIENT == pytest.approx(0.017896, abs=1e-6)
        assert gaussianity_small_eps(0.03) == pytest.approx(gaussianity_G(PhaseState(0.03)), abs=1e-8)

    def test_small_eps_expansion_warns_outside_range(self) -> None:
        """Beyond |eps| = 0.3 the expansion warns."""
        with pytest.warns(ExpansionRangeWarning):
            gaussianity_small_eps(0.5)

    def test_small_eps_expansion_rejects_generic_phase(self) -> None:
        """Only phases 0 and pi/2 are covered."""
        with pytest.raises(DomainError):
            gaussianity_small_eps(0.1, phase_case=0.4)


class TestDensityPeak:
    """Tests for density_peak."""

    def test_peak_lags_the_mean(self) -> None:
        """At n = 25, phase 0, the density peaks between 4 and 6, below <x>."""
        state = PhaseState.from_mean_n(25.0, 0.0)
        peak = density_peak(state)
        assert 4.0 < peak < 6.0
        assert peak < quadrature_stats(state).mean_x

    def test_vacuum_peak_at_origin(self) -> None:
        """The ground state peaks at x = 0."""
        assert density_peak(PhaseState(0.0)) == pytest.approx(0.0, abs=1e-6)

    def test_rejects_empty_range(self) -> None:
        """An empty search range raises DomainError."""
        with pytest.raises(DomainError):
            density_peak(PhaseState(0.5), x_range=(1.0, 1.0))
