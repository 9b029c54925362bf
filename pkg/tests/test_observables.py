"""Tests for cpskit.observables module."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpskit.observables import (
    coherent_stats,
    fit_eta,
    quadrature_means,
    quadrature_stats,
    radius_R,
    radius_R_interp,
    rs_product,
    rs_product_alt,
    rs_product_approx,
    sigma_x_min,
    sigma_x_min_approx,
    sigma_x_min_series,
    sigma_x_phi0_approx,
    sigma_x_sqzvac,
    sigma_x_sqzvac_asymptotic,
    thermal_fidelity,
    thermal_stats,
)
from cpskit.series import SeriesNotConvergedWarning, TruncationPolicy, s1, s2
from cpskit.states import CoherentState, DomainError, PhaseState, eps_from_mean_n

EPS_SAMPLES = [0.0, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99]


class TestQuadratureStats:
    """Tests for quadrature_stats."""

    def test_vacuum(self) -> None:
        """|eps| = 0 is the vacuum: no displacement and minimum uncertainty."""
        stats = quadrature_stats(PhaseState(0.0))
        assert (stats.mean_x, stats.mean_p) == (0.0, 0.0)
        assert stats.var_x == 0.5
        assert stats.var_p == 0.5
        assert stats.cov_xp == 0.0
        assert stats.rs_product == 0.25
        assert stats.converged

    def test_squeezed_quadrature_at_half_pi(self) -> None:
        """n = 25 at phase pi/2 should squeeze x below 0.035 (within 10%)."""
        stats = quadrature_stats(PhaseState.from_mean_n(25.0, math.pi / 2))
        assert stats.mean_x == 0.0
        assert stats.cov_xp == 0.0
        assert stats.var_x == pytest.approx(0.035, rel=0.1)

    def test_stretched_quadrature_at_phase_zero(self) -> None:
        """n = 25 at phase 0 should have <x> near 6.3 and var_x near 10."""
        stats = quadrature_stats(PhaseState.from_mean_n(25.0, 0.0))
        assert stats.mean_x == pytest.approx(6.3, abs=0.1)
        assert stats.mean_p == 0.0
        assert stats.var_x == pytest.approx(10.0, rel=0.15)

    @pytest.mark.parametrize("eps_abs", EPS_SAMPLES)
    def test_variance_sum_is_phase_independent(self, eps_abs: float) -> None:
        """var_x + var_p = 2 (N - S1^2) at every phase."""
        expected = 2.0 * (PhaseState(eps_abs).mean_n + 0.5 - s1(eps_abs).value ** 2)
        for phase in (0.0, 0.4, math.pi / 2, 2.5):
            stats = quadrature_stats(PhaseState(eps_abs, phase))
            assert stats.var_x + stats.var_p == pytest.approx(expected, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("eps_abs", EPS_SAMPLES)
    @pytest.mark.parametrize("phase", [0.0, 0.7, math.pi / 2, 3.0, -1.2])
    def test_uncertainty_relation(self, eps_abs: float, phase: float) -> None:
        """The Robertson-Schroedinger product never drops below 1/4."""
        assert rs_product(PhaseState(eps_abs, phase)) >= 0.25 - 1e-12

    def test_means_agree_with_stats(self) -> None:
        """quadrature_means should return the same means as quadrature_stats."""
        state = PhaseState(0.8, 0.9)
        stats = quadrature_stats(state)
        assert quadrature_means(state) == (stats.mean_x, stats.mean_p)

    def test_radius_is_phase_independent(self) -> None:
        """radius_sq should be 2 S1^2 at any phase."""
        stats = quadrature_stats(PhaseState(0.8, 1.1))
        assert stats.radius_sq == pytest.approx(radius_R(0.8), rel=1e-14)

    def test_flags_and_warns_when_unconverged(self) -> None:
        """A short fixed sum should flag the result and warn."""
        with pytest.warns(SeriesNotConvergedWarning):
            stats = quadrature_stats(PhaseState(0.99), TruncationPolicy.fixed(10))
        assert not stats.converged
        assert stats.terms_used == 10

    def test_means_warn_and_stats_carry_the_flag(self) -> None:
        """quadrature_means warns on a short sum; quadrature_stats is its flagged form."""
        state = PhaseState(0.99, 0.3)
        policy = TruncationPolicy.fixed(10)
        with pytest.warns(SeriesNotConvergedWarning):
            means = quadrature_means(state, policy)
        with pytest.warns(SeriesNotConvergedWarning):
            stats = quadrature_stats(state, policy)
        assert means == (stats.mean_x, stats.mean_p)
        assert not stats.converged


class TestSqueezing:
    """Tests for the minimal coordinate variance."""

    def test_small_eps_value(self) -> None:
        """sigma_x_min(0.1) should be about 0.495858."""
        assert sigma_x_min(0.1) == pytest.approx(0.495858, abs=1e-5)

    def test_leading_small_eps_coefficient(self) -> None:
        """(1/2 - sigma) / |eps|^2 tends to sqrt(2) - 1."""
        eps_abs = 0.01
        assert (0.5 - sigma_x_min(eps_abs)) / eps_abs**2 == pytest.approx(math.sqrt(2.0) - 1.0, rel=0.01)

    def test_strong_squeezing_stays_positive(self) -> None:
        """Close to |eps| = 1 the variance is small but strictly positive."""
        sigma = sigma_x_min(math.sqrt(0.9999))
        assert 0.0 < sigma < 0.002

    @pytest.mark.parametrize("eps_abs", [0.01, 0.3, 0.6, 0.9, 0.99])
    def test_bounded_by_vacuum_and_line(self, eps_abs: float) -> None:
        """1/2 (1 - |eps|^2) < sigma < 1/2."""
        sigma = sigma_x_min(eps_abs)
        assert 0.5 * (1.0 - eps_abs**2) < sigma < 0.5

    @pytest.mark.parametrize("eps_abs", [0.2, 0.5, 0.8, 0.95])
    def test_matches_stats_at_half_pi(self, eps_abs: float) -> None:
        """The direct series should equal N - S2 from the general formulas."""
        stats = quadrature_stats(PhaseState(eps_abs, math.pi / 2))
        assert sigma_x_min(eps_abs) == pytest.approx(stats.var_x, rel=1e-11, abs=1e-13)

    def test_half_filling_matches_n_minus_s2(self) -> None:
        """At |eps|^2 = 1/2 the series equals N - S2 = 3/2 - S2."""
        eps_abs = math.sqrt(0.5)
        assert sigma_x_min(eps_abs) == pytest.approx(1.5 - s2(eps_abs).value, abs=1e-12)

    def test_series_result_carries_audit_trail(self) -> None:
        """sigma_x_min_series should report how many terms it used."""
        result = sigma_x_min_series(0.9)
        assert result.converged
        assert result.terms_used > 1

    @pytest.mark.parametrize(
        ("eps2", "expected"),
        [(0.0, 0.5), (0.5, 0.25 * (1.0 + 0.25 * math.log(2.0)))],
    )
    def test_closed_form_approximation(self, eps2: float, expected: float) -> None:
        """sigma_x_min_approx should follow 1/2 (1 - x)(1 - ln(1 - x)/4)."""
        assert sigma_x_min_approx(math.sqrt(eps2)) == pytest.approx(expected, rel=1e-14)

    def test_approximation_tracks_exact_value(self) -> None:
        """At n = 25 the closed form should be within 10% of the series."""
        eps_abs = eps_from_mean_n(25.0)
        assert sigma_x_min_approx(eps_abs) == pytest.approx(sigma_x_min(eps_abs), rel=0.1)


class TestSqueezedVacuum:
    """Tests for the squeezed vacuum reference."""

    def test_vacuum_limit(self) -> None:
        """n = 0 should give the vacuum variance."""
        assert sigma_x_sqzvac(0.0) == 0.5
        assert sigma_x_sqzvac_asymptotic(0.0) == 0.25

    def test_known_value(self) -> None:
        """n = 25 should give 1 / (2 (51 + 2 sqrt 650))."""
        expected = 1.0 / (2.0 * (51.0 + 2.0 * math.sqrt(650.0)))
        assert sigma_x_sqzvac(25.0) == pytest.approx(expected, rel=1e-14)

    def test_asymptotic_form_converges(self) -> None:
        """The large-n form should approach the exact value."""
        assert sigma_x_sqzvac_asymptotic(1e4) == pytest.approx(sigma_x_sqzvac(1e4), rel=1e-4)

    def test_cps_squeezes_less_than_squeezed_vacuum(self) -> None:
        """The ratio sigma_cps / sigma_sqz should grow like 4 (1 + ln(1 + n) / 4)."""
        n_bar = 100.0
        ratio = sigma_x_min(eps_from_mean_n(n_bar)) / sigma_x_sqzvac(n_bar)
        assert ratio == pytest.approx(4.0 * (1.0 + 0.25 * math.log1p(n_bar)), rel=0.25)


class TestRadius:
    """Tests for R = <x>^2 + <p>^2."""

    def test_vacuum(self) -> None:
        """R vanishes at |eps| = 0."""
        assert radius_R(0.0) == 0.0

    def test_small_n_slope(self) -> None:
        """R ~ 2n for small n."""
        n_bar = 1e-3
        assert radius_R(eps_from_mean_n(n_bar)) / n_bar == pytest.approx(2.0, rel=0.01)

    def test_large_n_slope(self) -> None:
        """R / n should sit near 1.59 at n = 100."""
        n_bar = 100.0
        assert 1.55 <= radius_R(eps_from_mean_n(n_bar)) / n_bar <= 1.63

    def test_accepts_state(self) -> None:
        """radius_R should accept a PhaseState and ignore its phase."""
        assert radius_R(PhaseState(0.6, 2.0)) == radius_R(0.6)

    def test_interpolation_limits(self) -> None:
        """The interpolation should vanish at n = 0 and reach eta n for large n."""
        assert radius_R_interp(0.0) == 0.0
        assert radius_R_interp(1e6, 1.59) / 1e6 == pytest.approx(1.59, rel=1e-5)


class TestRobertsonSchroedinger:
    """Tests for the Robertson-Schroedinger product D."""

    @pytest.mark.parametrize("n_bar", [0.5, 1.0, 25.0])
    def test_forms_agree(self, n_bar: float) -> None:
        """The factored and sigma-based forms of D should agree."""
        state = PhaseState.from_mean_n(n_bar)
        assert rs_product(state) == pytest.approx(rs_product_alt(state), rel=1e-10)

    @settings(max_examples=20, deadline=None)
    @given(
        st.floats(min_value=0.0, max_value=0.95),
        st.floats(min_value=-math.pi, max_value=math.pi),
        st.floats(min_value=-math.pi, max_value=math.pi),
    )
    def test_invariant_under_free_evolution(self, eps_abs: float, phase: float, other: float) -> None:
        """D should not depend on the phase."""
        first = rs_product(PhaseState(eps_abs, phase))
        second = rs_product(PhaseState(eps_abs, other))
        assert first == pytest.approx(second, rel=1e-10)

    def test_full_approximation_is_exact_at_vacuum(self) -> None:
        """The full closed form should give 1/4 at n = 0."""
        assert rs_product_approx(0.0, variant="full") == pytest.approx(0.25, rel=1e-15)

    def test_simplified_large_n_value(self) -> None:
        """The simplified form at n = 9999 should be about 0.677."""
        assert rs_product_approx(9999.0, variant="simplified") == pytest.approx(0.677, abs=1e-3)

    @pytest.mark.parametrize("n_bar", [100.0, 1000.0])
    def test_simplified_tracks_exact(self, n_bar: float) -> None:
        """For large n the simplified form should be within 10% of D."""
        exact = rs_product(PhaseState.from_mean_n(n_bar))
        assert rs_product_approx(n_bar, variant="simplified") == pytest.approx(exact, rel=0.1)

    def test_rejects_unknown_variant(self) -> None:
        """An unknown variant should raise ValueError."""
        with pytest.raises(ValueError, match="variant"):
            rs_product_approx(1.0, variant="other")


class TestPhaseZeroApproximation:
    """Tests for sigma_x_phi0_approx."""

    @pytest.mark.parametrize(("n_bar", "rel"), [(25.0, 0.15), (100.0, 0.1)])
    def test_tracks_exact(self, n_bar: float, rel: float) -> None:
        """The closed form should follow the exact variance at phase 0."""
        exact = quadrature_stats(PhaseState.from_mean_n(n_bar, 0.0)).var_x
        assert sigma_x_phi0_approx(n_bar) == pytest.approx(exact, rel=rel)

    def test_vacuum(self) -> None:
        """At n = 0 the closed form gives the vacuum variance."""
        assert sigma_x_phi0_approx(0.0) == 0.5

    def test_linear_growth(self) -> None:
        """The exact variance should be close to 0.4 n at n = 100."""
        exact = quadrature_stats(PhaseState.from_mean_n(100.0, 0.0)).var_x
        assert exact == pytest.approx(40.0, rel=0.1)


class TestFitEta:
    """Tests for fit_eta."""

    def test_default_range(self) -> None:
        """The slope over n in [50, 150] should lie in [1.55, 1.63]."""
        fit = fit_eta()
        assert 1.55 <= fit.eta <= 1.63
        assert fit.fit_range == (50.0, 150.0)
        assert fit.residual < 0.1

    def test_slope_approaches_half_pi(self) -> None:
        """At larger n the slope should approach pi / 2."""
        fit = fit_eta((500.0, 1000.0), 6)
        assert fit.eta == pytest.approx(math.pi / 2, abs=0.01)

    @pytest.mark.parametrize(
        ("n_range", "n_points"),
        [((100.0, 50.0), 10), ((50.0, 50.0), 10), ((50.0, 150.0), 1)],
    )
    def test_rejects_degenerate_fits(self, n_range: tuple[float, float], n_points: int) -> None:
        """Empty ranges and single points should raise DomainError."""
        with pytest.raises(DomainError):
            fit_eta(n_range, n_points)


class TestReferenceStates:
    """Tests for thermal and coherent references."""

    def test_thermal_fidelity(self) -> None:
        """The fidelity should be 1 / (2n + 1)."""
        assert thermal_fidelity(0.0) == 1.0
        assert thermal_fidelity(eps_from_mean_n(1.0)) == pytest.approx(1.0 / 3.0, rel=1e-14)
        assert thermal_fidelity(eps_from_mean_n(9999.0)) == pytest.approx(1.0 / 19999.0, rel=1e-10)

    def test_coherent_stats(self) -> None:
        """Coherent states carry vacuum noise around sqrt(2) alpha."""
        stats = coherent_stats(CoherentState(complex(3.0, -1.0)))
        assert stats.mean_x == pytest.approx(3.0 * math.sqrt(2.0))
        assert stats.mean_p == pytest.approx(-math.sqrt(2.0))
        assert (stats.var_x, stats.var_p, stats.rs_product) == (0.5, 0.5, 0.25)

    def test_thermal_stats(self) -> None:
        """Thermal states are centred with variance N in both quadratures."""
        stats = thermal_stats(2.0)
        assert (stats.mean_x, stats.var_x, stats.var_p, stats.rs_product) == (0.0, 2.5, 2.5, 6.25)

    def test_cps_variance_sum_below_thermal(self) -> None:
        """A CPS is displaced, so its variance sum is below the thermal 2N."""
        state = PhaseState.from_mean_n(5.0, 0.3)
        stats = quadrature_stats(state)
        assert stats.var_x + stats.var_p < 2.0 * thermal_stats(5.0).var_x
