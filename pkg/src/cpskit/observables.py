"""Quadrature statistics of coherent phase states and their references.

Units are dimensionless (hbar = m = omega = 1). Everything here derives
from the two series S1 and S2 of :mod:`cpskit.series`; closed forms are
provided for the approximations and for coherent, thermal and squeezed
vacuum reference states.
"""

import math
from dataclasses import dataclass

import numpy as np

from .series import (
    DEFAULT_POLICY,
    SeriesResult,
    TruncationPolicy,
    memoised,
    s1,
    s2,
    sum_series,
    warn_if_unconverged,
)
from .states import CoherentState, DomainError, PhaseState, axis_cos_sin, check_eps_abs, check_mean_n, eps_from_mean_n

ETA_DEFAULT = 1.59

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class QuadratureStats:
    """First and second moments of the quadratures of one state."""

    mean_x: float
    mean_p: float
    var_x: float
    var_p: float
    cov_xp: float
    rs_product: float
    """Robertson-Schroedinger product var_x * var_p - cov_xp**2."""

    radius_sq: float
    """R = mean_x**2 + mean_p**2."""

    converged: bool = True
    terms_used: int = 0


@dataclass(frozen=True)
class EtaFit:
    """Least-squares slope of R against the mean quantum number."""

    eta: float
    fit_range: tuple[float, float]
    residual: float
    """Root mean square deviation of R from the fitted line."""

    intercept: float = 0.0


def _as_eps_abs(state: PhaseState | float) -> float:
    if isinstance(state, PhaseState):
        return state.eps_abs
    return check_eps_abs(state)


def quadrature_means(state: PhaseState, policy: TruncationPolicy = DEFAULT_POLICY) -> tuple[float, float]:
    """Return (<x>, <p>) = sqrt(2) S1 (cos phi, sin phi).

    An unconverged S1 only warns here; :func:`quadrature_stats` carries the
    ``converged`` flag for callers that need it.
    """
    result = s1(state.eps_abs, policy)
    warn_if_unconverged(result, "S1")
    cos_phi, sin_phi = axis_cos_sin(state.phase)
    return SQRT2 * cos_phi * result.value, SQRT2 * sin_phi * result.value


def quadrature_stats(state: PhaseState, policy: TruncationPolicy = DEFAULT_POLICY) -> QuadratureStats:
    """Means, (co)variances, D and R of a coherent phase state.

    Non-convergence of either series is flagged on the result and warned
    about, never raised.
    """
    first = s1(state.eps_abs, policy)
    second = s2(state.eps_abs, policy)
    warn_if_unconverged(first, "S1")
    warn_if_unconverged(second, "S2")

    big_n = state.mean_n + 0.5
    s1_sq = first.value * first.value
    spread = second.value - s1_sq
    cos_phi, sin_phi = axis_cos_sin(state.phase)
    cos_2phi, sin_2phi = axis_cos_sin(2.0 * state.phase)

    mean_x = SQRT2 * cos_phi * first.value
    mean_p = SQRT2 * sin_phi * first.value
    return QuadratureStats(
        mean_x=mean_x,
        mean_p=mean_p,
        var_x=big_n - s1_sq + spread * cos_2phi,
        var_p=big_n - s1_sq - spread * cos_2phi,
        cov_xp=spread * sin_2phi,
        # (N - S1^2)^2 - (S2 - S1^2)^2, factored to avoid cancellation at large N
        rs_product=(big_n - second.value) * (big_n + second.value - 2.0 * s1_sq),
        radius_sq=mean_x * mean_x + mean_p * mean_p,
        converged=first.converged and second.converged,
        terms_used=max(first.terms_used, second.terms_used),
    )


@memoised
def _squeezing_series(eps_abs: float, policy: TruncationPolicy) -> SeriesResult:
    eps2 = eps_abs * eps_abs
    weight = (1.0 - eps2) * eps2

    def term(n: int) -> float:
        root_a = math.sqrt(n + 1)
        return weight * eps2**n * root_a / (root_a + math.sqrt(n + 2))

    def tail(n: int) -> float:
        # every ratio sqrt(n+1)/(sqrt(n+1)+sqrt(n+2)) is below 1/2
        return 0.5 * eps2 ** (n + 2)

    deficit = sum_series(term, policy, tail)
    return SeriesResult(
        value=0.5 - deficit.value,
        terms_used=deficit.terms_used,
        tail_estimate=deficit.tail_estimate,
        converged=deficit.converged,
    )


def sigma_x_min_series(eps_abs: float, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """Minimal coordinate variance (phase pi/2) from the direct squeezing series.

    sigma = 1/2 - (1 - |eps|^2) |eps|^2 sum_n |eps|^(2n) sqrt(n+1) / (sqrt(n+1) + sqrt(n+2))
    """
    return _squeezing_series(check_eps_abs(eps_abs), policy)


def sigma_x_min(eps_abs: float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Coordinate variance at phase pi/2, always in (0, 1/2] and never negative."""
    result = sigma_x_min_series(eps_abs, policy)
    warn_if_unconverged(result, "squeezing series")
    return result.value


def sigma_x_min_approx(eps_abs: float) -> float:
    """Closed form 1/2 (1 - |eps|^2) [1 - 1/4 ln(1 - |eps|^2)]."""
    eps2 = check_eps_abs(eps_abs) ** 2
    return 0.5 * (1.0 - eps2) * (1.0 - 0.25 * math.log1p(-eps2))


def sigma_x_sqzvac(n_bar: float) -> float:
    """Squeezed coordinate variance of the squeezed vacuum with the same mean number."""
    n_bar = check_mean_n(n_bar)
    return 1.0 / (2.0 * (2.0 * n_bar + 1.0 + 2.0 * math.sqrt(n_bar * (n_bar + 1.0))))


def sigma_x_sqzvac_asymptotic(n_bar: float) -> float:
    """Large-n simplification 1 / (4 (1 + 2n)) of :func:`sigma_x_sqzvac`."""
    n_bar = check_mean_n(n_bar)
    return 1.0 / (4.0 * (1.0 + 2.0 * n_bar))


def radius_R(state: PhaseState | float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """R = <x>^2 + <p>^2 = 2 S1^2, independent of the phase.

    Accepts either a :class:`PhaseState` or the modulus |eps|.
    """
    result = s1(_as_eps_abs(state), policy)
    warn_if_unconverged(result, "S1")
    return 2.0 * result.value * result.value


def radius_R_interp(n_bar: float, eta: float = ETA_DEFAULT) -> float:
    """Interpolation n (2 + eta n) / (1 + n) between R ~ 2n and R ~ eta n."""
    n_bar = check_mean_n(n_bar)
    return n_bar * (2.0 + eta * n_bar) / (1.0 + n_bar)


def rs_product(state: PhaseState, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Robertson-Schroedinger product D, invariant under free evolution."""
    return quadrature_stats(state, policy).rs_product


def rs_product_alt(state: PhaseState, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """D = sigma (2N - sigma - R), with sigma the variance at phase pi/2."""
    sigma = sigma_x_min(state.eps_abs, policy)
    big_n = state.mean_n + 0.5
    return sigma * (2.0 * big_n - sigma - radius_R(state, policy))


def rs_product_approx(n_bar: float, eta: float = ETA_DEFAULT, variant: str = "full") -> float:
    """Closed-form approximations of D.

    Args:
        n_bar: Mean quantum number.
        eta: Large-n slope of R.
        variant: ``"full"`` (exact 1/4 at n = 0) or ``"simplified"``
            (large-n form ((2 - eta)/2) [1 + 1/4 ln(1 + n)]).
    """
    n_bar = check_mean_n(n_bar)
    log_term = 0.25 * math.log1p(n_bar)
    if variant == "simplified":
        return 0.5 * (2.0 - eta) * (1.0 + log_term)
    if variant == "full":
        bracket = 2.0 * (2.0 - eta) * n_bar**2 + 1.0 + 2.0 * n_bar - log_term
        return (1.0 + log_term) / (4.0 * (1.0 + n_bar) ** 2) * bracket
    raise ValueError(f"Unknown variant {variant!r}, expected 'full' or 'simplified'")


def sigma_x_phi0_approx(n_bar: float, eta: float = ETA_DEFAULT) -> float:
    """Approximate coordinate variance at phase 0, ~ (2 - eta) n for large n."""
    n_bar = check_mean_n(n_bar)
    log_term = 0.25 * math.log1p(n_bar)
    return (2.0 * (2.0 - eta) * n_bar**2 + 1.0 + 2.0 * n_bar - log_term) / (2.0 * (1.0 + n_bar))


def fit_eta(
    n_range: tuple[float, float] = (50.0, 150.0),
    n_points: int = 20,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> EtaFit:
    """Fit R = eta * n + c by ordinary least squares over evenly spaced n.

    Raises:
        DomainError: If the range is empty or fewer than two points are requested.
    """
    n_min, n_max = (check_mean_n(value) for value in n_range)
    if not n_min < n_max:
        raise DomainError(f"fit range must satisfy n_min < n_max, got ({n_min}, {n_max})")
    if n_points < 2:
        raise DomainError(f"n_points must be at least 2, got {n_points}")

    n_bars = np.linspace(n_min, n_max, n_points)
    radii = np.array([radius_R(eps_from_mean_n(n_bar), policy) for n_bar in n_bars])
    slope, intercept = np.polyfit(n_bars, radii, 1)
    residual = float(np.sqrt(np.mean((radii - (slope * n_bars + intercept)) ** 2)))
    return EtaFit(eta=float(slope), fit_range=(n_min, n_max), residual=residual, intercept=float(intercept))


def thermal_fidelity(eps_abs: float) -> float:
    """<eps| rho_th |eps> = (1 - |eps|^2) / (1 + |eps|^2) = 1 / (2n + 1)."""
    eps2 = check_eps_abs(eps_abs) ** 2
    return (1.0 - eps2) / (1.0 + eps2)


def coherent_stats(cs: CoherentState) -> QuadratureStats:
    """Exact statistics of a coherent state: vacuum noise around sqrt(2) alpha."""
    mean_x = SQRT2 * cs.alpha.real
    mean_p = SQRT2 * cs.alpha.imag
    return QuadratureStats(
        mean_x=mean_x,
        mean_p=mean_p,
        var_x=0.5,
        var_p=0.5,
        cov_xp=0.0,
        rs_product=0.25,
        radius_sq=mean_x * mean_x + mean_p * mean_p,
    )


def thermal_stats(n_bar: float) -> QuadratureStats:
    """Statistics of the thermal state with mean number n."""
    big_n = check_mean_n(n_bar) + 0.5
    return QuadratureStats(
        mean_x=0.0,
        mean_p=0.0,
        var_x=big_n,
        var_p=big_n,
        cov_xp=0.0,
        rs_product=big_n * big_n,
        radius_sq=0.0,
    )
