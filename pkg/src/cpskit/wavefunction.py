"""Coordinate wavefunctions, densities and the Gaussianity measure.

The coherent phase state is expanded over oscillator eigenfunctions,

    psi(x) = sqrt(1 - |eps|^2) * sum_n eps^n phi_n(x),

with phi_n generated by the normalised three-term Hermite recurrence. The
recurrence runs on rescaled values with a per-point logarithmic scale, so
neither phi_0 underflow at large |x| nor growth in the forbidden region
destroys the result.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.optimize import minimize_scalar

from .observables import quadrature_stats
from .quadrature import QuadratureCoverageWarning, QuadratureSpec, composite_gauss_legendre
from .series import DEFAULT_POLICY, SeriesResult, TruncationPolicy, warn_if_unconverged
from .states import CoherentState, DomainError, PhaseState, axis_cos_sin, check_eps_abs

# Uniform bound on |phi_n(x)| (Cramer's inequality gives pi^(-1/4) ~ 0.7511)
EIGENFUNCTION_BOUND = 0.8

WAVEFUNCTION_POLICY = TruncationPolicy(max_terms=1_000_000, tail_tol=1e-10)

GAUSSIANITY_COEFFICIENT = 3.0 * math.sqrt(2.0) - 3.0 - math.sqrt(1.5)

_LOG_PI_QUARTER = -0.25 * math.log(math.pi)
_RESCALE_ABOVE = 1e200


class ExpansionRangeWarning(UserWarning):
    """Emitted when the small-|eps| Gaussianity expansion is used outside its range."""

    pass


@dataclass(frozen=True)
class PsiSeries:
    """Wavefunction values on a set of points with the truncation audit trail."""

    values: np.ndarray
    terms_used: int
    tail_estimate: float
    converged: bool


@dataclass(frozen=True)
class WavefunctionSample:
    x: float
    re: float
    im: float
    density: float
    """re**2 + im**2, as stored."""


@dataclass(frozen=True)
class GaussianityResult:
    """G = sqrt(2 pi var_x) |psi(<x>)|^2 with its inputs."""

    g: float
    mean_x: float
    var_x: float
    density_at_mean: float
    converged: bool


@dataclass(frozen=True)
class DensityMoments:
    mean_x: float
    var_x: float
    norm: float
    half_width: float
    converged: bool


def oscillator_eigenfunction_sequence(x: float, n_max: int) -> np.ndarray:
    """phi_n(x) = pi^(-1/4) exp(-x^2/2) H_n(x) / sqrt(2^n n!) for n = 0..n_max.

    Raises:
        DomainError: If n_max is negative.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    x = float(x)
    log_base = _LOG_PI_QUARTER - 0.5 * x * x
    scaled = np.empty(n_max + 1)
    log_scale = np.empty(n_max + 1)

    prev, cur, shift = 0.0, 1.0, 0.0
    scaled[0], log_scale[0] = cur, shift
    for n in range(n_max):
        prev, cur = cur, math.sqrt(2.0 / (n + 1)) * x * cur - math.sqrt(n / (n + 1)) * prev
        if abs(cur) > _RESCALE_ABOVE:
            shift += math.log(abs(cur))
            prev /= abs(cur)
            cur = math.copysign(1.0, cur)
        scaled[n + 1], log_scale[n + 1] = cur, shift
    return scaled * np.exp(log_scale + log_base)


def _psi_term_count(eps_abs: float, policy: TruncationPolicy) -> int:
    if policy.fixed_n is not None:
        return policy.fixed_n
    if eps_abs == 0.0:
        return 1
    # smallest N with eps^(N+1) * bound / (1 - eps) <= tol
    target = policy.tail_tol * (1.0 - eps_abs) / EIGENFUNCTION_BOUND
    last = max(0, math.ceil(math.log(target) / math.log(eps_abs) - 1.0))
    return min(last + 1, policy.max_terms)


def _psi_tail(eps_abs: float, terms_used: int) -> float:
    if eps_abs == 0.0:
        return 0.0
    return eps_abs**terms_used * EIGENFUNCTION_BOUND / (1.0 - eps_abs)


def psi_cps_series(state: PhaseState, xs: ArrayLike, policy: TruncationPolicy = WAVEFUNCTION_POLICY) -> PsiSeries:
    """Evaluate the CPS wavefunction on an array of points.

    The number of terms is fixed up front from the uniform eigenfunction
    bound, so every point shares the same truncation and tail estimate.
    """
    xs = np.asarray(xs, dtype=float)
    n_terms = _psi_term_count(state.eps_abs, policy)
    ratio = state.eps

    prev = np.zeros_like(xs)
    cur = np.ones_like(xs)
    shift = np.zeros_like(xs)
    coefficient = complex(1.0)
    total = np.full(xs.shape, coefficient, dtype=complex)
    for n in range(n_terms - 1):
        prev, cur = cur, math.sqrt(2.0 / (n + 1)) * xs * cur - math.sqrt(n / (n + 1)) * prev
        coefficient *= ratio
        total += coefficient * cur
        big = np.abs(cur) > _RESCALE_ABOVE
        if big.any():
            factor = np.where(big, np.abs(cur), 1.0)
            shift += np.log(factor)
            prev /= factor
            cur /= factor
            total /= factor

    weight = math.sqrt(1.0 - state.eps2)
    values = weight * total * np.exp(shift + _LOG_PI_QUARTER - 0.5 * xs * xs)
    tail = _psi_tail(state.eps_abs, n_terms)
    return PsiSeries(values=values, terms_used=n_terms, tail_estimate=tail, converged=tail <= policy.tail_tol)


def _warn_psi(result: PsiSeries) -> None:
    warn_if_unconverged(
        SeriesResult(0.0, result.terms_used, result.tail_estimate, result.converged),
        "wavefunction series",
        stacklevel=4,
    )


def psi_cps(state: PhaseState, x: ArrayLike, policy: TruncationPolicy = WAVEFUNCTION_POLICY) -> complex | np.ndarray:
    """psi_eps(x); returns a complex for scalar x and an array otherwise."""
    result = psi_cps_series(state, np.atleast_1d(x), policy)
    _warn_psi(result)
    if np.ndim(x) == 0:
        return complex(result.values[0])
    return result.values


def psi_coherent(cs: CoherentState, x: ArrayLike) -> complex | np.ndarray:
    """Coherent state wavefunction pi^(-1/4) exp(-x^2/2 + sqrt(2) x a - a^2/2 - |a|^2/2)."""
    alpha = cs.alpha
    xs = np.asarray(x, dtype=float)
    exponent = -0.5 * xs * xs + math.sqrt(2.0) * xs * alpha - 0.5 * alpha * alpha - 0.5 * abs(alpha) ** 2
    values = math.pi**-0.25 * np.exp(exponent)
    if xs.ndim == 0:
        return complex(values)
    return values


def gaussian_density(mean_x: float, var_x: float, x: ArrayLike) -> float | np.ndarray:
    """Normal density with the given mean and variance."""
    if not var_x > 0.0:
        raise DomainError(f"var_x must be positive, got {var_x}")
    xs = np.asarray(x, dtype=float)
    values = np.exp(-((xs - mean_x) ** 2) / (2.0 * var_x)) / math.sqrt(2.0 * math.pi * var_x)
    if xs.ndim == 0:
        return float(values)
    return values


def wavefunction_samples(
    state: PhaseState, xs: ArrayLike, policy: TruncationPolicy = WAVEFUNCTION_POLICY
) -> list[WavefunctionSample]:
    result = psi_cps_series(state, np.atleast_1d(xs), policy)
    _warn_psi(result)
    samples = []
    for x, value in zip(np.atleast_1d(xs), result.values):
        re, im = float(value.real), float(value.imag)
        samples.append(WavefunctionSample(x=float(x), re=re, im=im, density=re * re + im * im))
    return samples


def gaussianity_report(
    state: PhaseState,
    policy: TruncationPolicy = DEFAULT_POLICY,
    psi_policy: TruncationPolicy = WAVEFUNCTION_POLICY,
) -> GaussianityResult:
    """Gaussianity measure evaluated at the mean coordinate, not at the density peak."""
    stats = quadrature_stats(state, policy)
    psi = psi_cps_series(state, np.array([stats.mean_x]), psi_policy)
    _warn_psi(psi)
    density = float(abs(psi.values[0]) ** 2)
    return GaussianityResult(
        g=math.sqrt(2.0 * math.pi * stats.var_x) * density,
        mean_x=stats.mean_x,
        var_x=stats.var_x,
        density_at_mean=density,
        converged=stats.converged and psi.converged,
    )


def gaussianity_G(
    state: PhaseState,
    policy: TruncationPolicy = DEFAULT_POLICY,
    psi_policy: TruncationPolicy = WAVEFUNCTION_POLICY,
) -> float:
    """G = sqrt(2 pi var_x) |psi(<x>)|^2; 1 for Gaussian densities, below 1 when subGaussian."""
    return gaussianity_report(state, policy, psi_policy).g


def gaussianity_small_eps(eps_abs: float, phase_case: float = 0.0) -> float:
    """Leading small-|eps| expansion 1 + |eps|^4 (3 sqrt 2 - 3 - sqrt(3/2)).

    Valid for phase 0 and pi/2, where it takes the same value. Warns with
    :class:`ExpansionRangeWarning` above |eps| = 0.3.
    """
    _, sin_2phi = axis_cos_sin(2.0 * phase_case)
    if sin_2phi != 0.0:
        raise DomainError(f"phase_case must be 0 or pi/2, got {phase_case!r}")
    eps_abs = check_eps_abs(eps_abs)
    if eps_abs > 0.3:
        warnings.warn(
            f"small-eps Gaussianity expansion used at |eps| = {eps_abs:g}, beyond 0.3",
            ExpansionRangeWarning,
            stacklevel=2,
        )
    return 1.0 + GAUSSIANITY_COEFFICIENT * eps_abs**4


def required_half_width(mean_x: float, var_x: float) -> float:
    """Window half-width covering the mean plus ten standard deviations."""
    return abs(mean_x) + 10.0 * math.sqrt(var_x) + 5.0


def density_moments_quadrature(
    state: PhaseState,
    policy: TruncationPolicy = WAVEFUNCTION_POLICY,
    quad_spec: QuadratureSpec = QuadratureSpec(),
) -> DensityMoments:
    """Integrate |psi|^2, x|psi|^2 and x^2|psi|^2 numerically.

    Serves as an independent check of the series-based statistics. A
    window narrower than :func:`required_half_width` is flagged.
    """
    stats = quadrature_stats(state)
    needed = required_half_width(stats.mean_x, stats.var_x)
    half_width = quad_spec.half_width if quad_spec.half_width is not None else needed
    covered = half_width >= needed - 5.0
    if not covered:
        warnings.warn(
            f"quadrature window {half_width:g} is narrower than the state's support {needed - 5.0:g}",
            QuadratureCoverageWarning,
            stacklevel=2,
        )

    points, weights = composite_gauss_legendre(-half_width, half_width, quad_spec.panels, quad_spec.order)
    psi = psi_cps_series(state, points, policy)
    _warn_psi(psi)
    density = np.abs(psi.values) ** 2

    norm = float(np.sum(weights * density))
    mean_x = float(np.sum(weights * points * density)) / norm
    var_x = float(np.sum(weights * (points - mean_x) ** 2 * density)) / norm
    return DensityMoments(
        mean_x=mean_x,
        var_x=var_x,
        norm=norm,
        half_width=half_width,
        converged=covered and psi.converged,
    )


def density_peak(
    state: PhaseState,
    policy: TruncationPolicy = WAVEFUNCTION_POLICY,
    x_range: tuple[float, float] | None = None,
) -> float:
    """Location x_m of the maximum of |psi(x)|^2.

    A coarse scan picks the best lattice cell, then a bounded Brent search
    refines within the neighbouring cells.
    """
    if x_range is None:
        stats = quadrature_stats(state)
        spread = 4.0 * math.sqrt(stats.var_x)
        x_range = (stats.mean_x - spread, stats.mean_x + spread)
    lower, upper = x_range
    if not upper > lower:
        raise DomainError(f"x_range must satisfy lower < upper, got {x_range}")

    grid = np.linspace(lower, upper, 2001)
    coarse = np.abs(psi_cps_series(state, grid, policy).values) ** 2
    best = int(np.argmax(coarse))
    left, right = grid[max(best - 1, 0)], grid[min(best + 1, grid.size - 1)]
    if right <= left:
        return float(grid[best])

    def negative_density(x: float) -> float:
        return -float(abs(psi_cps_series(state, np.array([x]), policy).values[0]) ** 2)

    refined = minimize_scalar(negative_density, bounds=(left, right), method="bounded", options={"xatol": 1e-10})
    return float(refined.x)
