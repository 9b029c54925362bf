"""Wigner functions of coherent phase states.

Normalisation follows the convention in which the Wigner function of the
vacuum is 2 exp(-q^2 - p^2), so the plane integral of any W equals 2 pi.

For a coherent phase state W = W1 + W2. The diagonal part W1 is the
thermal Gaussian with the same mean number; the off-diagonal part is

    W2 = 4 (1 - |eps|^2) sum_{lam>=1} |eps|^lam cos(lam (chi - phi))
                          sum_{mu>=0} (-|eps|^2)^mu  l_mu^lam(2 b^2)

with q + ip = b e^{i chi} and l_mu^lam the normalised Laguerre functions
exp(-X/2) X^(lam/2) sqrt(mu!/(mu+lam)!) L_mu^lam(X). These are produced by
ratio updates in lam and the three-term recurrence in mu, never through
factorials.
"""

import cmath
import math
import warnings
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from itertools import count

import numpy as np
from numpy.typing import ArrayLike

from .observables import quadrature_stats
from .quadrature import QuadratureCoverageWarning, QuadratureSpec, integrate
from .series import (
    DEFAULT_POLICY,
    InvalidPolicyError,
    SeriesNotConvergedWarning,
    SeriesResult,
    TruncationPolicy,
    sum_terms,
)
from .states import CoherentState, DomainError, PhaseState, check_mean_n
from .sweep import parallel_map
from .wavefunction import WAVEFUNCTION_POLICY, psi_cps_series

IMAGINARY_RESIDUE_TOL = 1e-8

# rows per work unit; fixed so that results do not depend on the thread count
_ROW_BLOCK = 16


class EmptyGridError(ValueError):
    """Raised when a grid diagnostic is requested on a grid with no points."""

    pass


@dataclass(frozen=True)
class PhasePoint:
    """Phase-space point q + ip = b exp(i chi)."""

    q: float
    p: float

    @classmethod
    def polar(cls, b: float, chi: float) -> "PhasePoint":
        return cls(b * math.cos(chi), b * math.sin(chi))

    @property
    def b(self) -> float:
        return math.hypot(self.q, self.p)

    @property
    def chi(self) -> float:
        """Polar angle in (-pi, pi], 0 at the origin."""
        if self.q == 0.0 and self.p == 0.0:
            return 0.0
        angle = math.atan2(self.p, self.q)
        return math.pi if angle == -math.pi else angle


@dataclass(frozen=True)
class WignerTruncation:
    """Truncation of the double (mu, lam) series.

    ``fixed`` sums every mu <= max_mu and lam <= max_lambda. ``adaptive``
    additionally stops the lam loop once a whole row has max |term| below
    ``row_tol`` over the evaluated points. Results whose tail bound
    exceeds ``tail_tol`` are flagged.
    """

    max_mu: int = 110
    max_lambda: int = 110
    mode: str = "fixed"
    row_tol: float = 1e-12
    tail_tol: float = 1e-6

    def __post_init__(self) -> None:
        if self.max_mu < 0 or self.max_lambda < 0:
            raise InvalidPolicyError(f"truncation orders must be >= 0, got ({self.max_mu}, {self.max_lambda})")
        if self.mode not in ("fixed", "adaptive"):
            raise InvalidPolicyError(f"mode must be 'fixed' or 'adaptive', got {self.mode!r}")
        if not (self.row_tol > 0.0 and self.tail_tol > 0.0):
            raise InvalidPolicyError("row_tol and tail_tol must be positive")

    def describe(self) -> str:
        return f"{self.mode}(mu<={self.max_mu}, lambda<={self.max_lambda}) tail_tol={self.tail_tol:g}"


DEFAULT_TRUNCATION = WignerTruncation()


@dataclass(frozen=True)
class WignerGrid:
    """Wigner values on a rectangular lattice, indexed ``values[iq, jp]``."""

    q_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray
    cell_area: float
    tail_estimate: float = 0.0
    converged: bool = True
    lambda_used: int = 0

    def normalization(self) -> float:
        """Riemann sum of the values; 2 pi when the grid covers the state."""
        return float(np.sum(self.values) * self.cell_area)


@dataclass(frozen=True)
class NegativityReport:
    min_value: float
    min_location: PhasePoint
    negative_volume: float
    """Sum of |W| * cell_area over negative lattice values."""

    max_value: float


def _laguerre_functions(head: np.ndarray, lam: int, arg: np.ndarray, mu_max: int | None) -> Iterator[np.ndarray]:
    """Yield l_mu^lam(arg) for mu = 0, 1, ..., mu_max (endless if None)."""
    prev = np.zeros_like(arg)
    cur = head
    yield cur
    for mu in range(mu_max) if mu_max is not None else count():
        following = ((2 * mu + 1 + lam - arg) * cur - math.sqrt(mu * (mu + lam)) * prev) / math.sqrt(
            (mu + 1) * (mu + 1 + lam)
        )
        prev, cur = cur, following
        yield cur


def normalized_laguerre(mu_max: int, lam: int, arg: ArrayLike) -> np.ndarray:
    """Table of l_mu^lam(arg) for mu = 0..mu_max, stacked along the first axis."""
    if mu_max < 0 or lam < 0:
        raise DomainError(f"indices must be >= 0, got mu_max={mu_max}, lam={lam}")
    arg = np.asarray(arg, dtype=float)
    head = np.exp(-0.5 * arg)
    for j in range(1, lam + 1):
        head = head * np.sqrt(arg / j)
    return np.stack(list(_laguerre_functions(head, lam, arg, mu_max)))


def weyl_wigner_symbol(m: int, n: int, pt: PhasePoint) -> complex:
    """Wigner function of the dyadic |m><n|: 2 (-1)^mu l_mu^lam(2 b^2) exp(-i chi (m - n))."""
    if m < 0 or n < 0:
        raise DomainError(f"Fock indices must be >= 0, got ({m}, {n})")
    mu, lam = min(m, n), abs(m - n)
    ell = float(normalized_laguerre(mu, lam, 2.0 * (pt.q * pt.q + pt.p * pt.p))[mu])
    sign = -1.0 if mu % 2 else 1.0
    return 2.0 * sign * ell * cmath.exp(-1j * pt.chi * (m - n))


def wigner_thermal(n_bar: float, pt: PhasePoint) -> float:
    """2 / (1 + 2n) exp(-(q^2 + p^2) / (1 + 2n))."""
    spread = 1.0 + 2.0 * check_mean_n(n_bar)
    return 2.0 / spread * math.exp(-(pt.q * pt.q + pt.p * pt.p) / spread)


def wigner_thermal_series(n_bar: float, pt: PhasePoint, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """Diagonal Laguerre series 2 (1 - x) sum_mu (-x)^mu l_mu^0(2 b^2), x = n / (1 + n).

    Sums to :func:`wigner_thermal`; |l_mu^0| <= 1 bounds the tail by 2 x^(N+1).
    """
    n_bar = check_mean_n(n_bar)
    x = n_bar / (1.0 + n_bar)
    arg = np.float64(2.0 * (pt.q * pt.q + pt.p * pt.p))
    weight = 2.0 * (1.0 - x)

    def terms() -> Iterator[float]:
        scale = weight
        for ell in _laguerre_functions(np.exp(-0.5 * arg), 0, arg, None):
            yield float(scale * ell)
            scale *= -x

    return sum_terms(terms(), policy, lambda n: 2.0 * x ** (n + 1))


def wigner_coherent(cs: CoherentState, pt: PhasePoint) -> float:
    """Displaced vacuum 2 exp(-(q - sqrt2 Re a)^2 - (p - sqrt2 Im a)^2)."""
    dq = pt.q - math.sqrt(2.0) * cs.alpha.real
    dp = pt.p - math.sqrt(2.0) * cs.alpha.imag
    return 2.0 * math.exp(-dq * dq - dp * dp)


def _wigner_values(
    state: PhaseState, q: ArrayLike, p: ArrayLike, truncation: WignerTruncation
) -> tuple[np.ndarray, np.ndarray, int]:
    """W on broadcast (q, p) arrays with a per-point bound on the neglected terms and the rows used.

    l_mu^lam(X)^2 are the squared moduli of the matrix elements of a displacement
    with |beta|^2 = X, so each row of that unitary sums to one. The squares seen
    so far give, per mu, the mass r_mu left for lam beyond the last row, and
    Cauchy-Schwarz over lam bounds the two omitted blocks:

        rows lam > L:      4 (1 - x) |eps|^L s sum_{mu<=M} x^mu sqrt(r_mu)
        columns mu > M:    4 (1 - x) s x^(M+1) / (1 - x)

    with s = |eps| / sqrt(1 - x).
    """
    q, p = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(p, dtype=float))
    b2 = q * q + p * p
    x = state.eps2
    values = 2.0 * (1.0 - x) / (1.0 + x) * np.exp(-b2 * (1.0 - x) / (1.0 + x))
    if state.eps_abs == 0.0:
        return values, np.zeros_like(values), 0

    max_mu = truncation.max_mu
    arg = 2.0 * b2
    chi = np.arctan2(p, q)
    chi = np.where(chi == -np.pi, np.pi, chi)
    weights = (-x) ** np.arange(max_mu + 1)
    amplitude = 4.0 * (1.0 - x)

    head = np.exp(-0.5 * arg)
    mass = np.zeros((max_mu + 1, *values.shape))
    for mu, ell in enumerate(_laguerre_functions(head, 0, arg, max_mu)):
        mass[mu] += ell * ell

    rows_used = 0
    for lam in range(1, truncation.max_lambda + 1):
        head = head * np.sqrt(arg / lam)
        row = np.zeros_like(values)
        for mu, ell in enumerate(_laguerre_functions(head, lam, arg, max_mu)):
            row += weights[mu] * ell
            square = ell * ell
            mass[mu] += square
            if mu + lam <= max_mu:
                mass[mu + lam] += square
        last_row = amplitude * state.eps_abs**lam * np.cos(lam * (chi - state.phase)) * row
        values = values + last_row
        rows_used = lam
        if truncation.mode == "adaptive" and np.max(np.abs(last_row)) < truncation.row_tol:
            break

    reach = state.eps_abs / math.sqrt(1.0 - x)
    unseen = np.tensordot(np.abs(weights), np.sqrt(np.clip(1.0 - mass, 0.0, None)), axes=1)
    rows_left = state.eps_abs**rows_used * reach * unseen
    columns_left = reach * x ** (max_mu + 1) / (1.0 - x)
    return values, amplitude * (rows_left + columns_left), rows_used


def _flag_tail(tail: float, truncation: WignerTruncation, what: str) -> None:
    if tail > truncation.tail_tol:
        warnings.warn(
            f"{what} tail bound {tail:.3g} exceeds tail_tol {truncation.tail_tol:g}",
            SeriesNotConvergedWarning,
            stacklevel=3,
        )


def wigner_cps_series(
    state: PhaseState, pt: PhasePoint, truncation: WignerTruncation = DEFAULT_TRUNCATION
) -> SeriesResult:
    """W at one point with its tail bound; ``terms_used`` counts the lam rows summed."""
    values, tail, rows_used = _wigner_values(state, pt.q, pt.p, truncation)
    tail = float(tail)
    return SeriesResult(
        value=float(values),
        terms_used=rows_used,
        tail_estimate=tail,
        converged=tail <= truncation.tail_tol,
    )


def wigner_cps(state: PhaseState, pt: PhasePoint, truncation: WignerTruncation = DEFAULT_TRUNCATION) -> float:
    """W = W1 + W2 of a coherent phase state at one point."""
    values, tail, _ = _wigner_values(state, pt.q, pt.p, truncation)
    _flag_tail(float(tail), truncation, "Wigner series")
    return float(values)


def wigner_section(
    state: PhaseState, q_axis: ArrayLike, p: float, truncation: WignerTruncation = DEFAULT_TRUNCATION
) -> np.ndarray:
    """One-dimensional section W(q, p) at fixed p."""
    values, tail, _ = _wigner_values(state, q_axis, p, truncation)
    _flag_tail(float(np.max(tail, initial=0.0)), truncation, "Wigner section")
    return values


def _axis(bounds: tuple[float, float], points: int, name: str) -> np.ndarray:
    lower, upper = bounds
    if points < 2:
        raise InvalidPolicyError(f"{name} resolution must be at least 2, got {points}")
    if not upper > lower:
        raise InvalidPolicyError(f"{name} range must satisfy lower < upper, got {bounds}")
    return np.linspace(lower, upper, points)


def wigner_grid(
    state: PhaseState,
    q_range: tuple[float, float],
    p_range: tuple[float, float],
    resolution: int | tuple[int, int],
    truncation: WignerTruncation = DEFAULT_TRUNCATION,
) -> WignerGrid:
    """Evaluate W on a uniform lattice, row blocks in parallel.

    Args:
        state: The coherent phase state.
        q_range: (q_min, q_max) inclusive.
        p_range: (p_min, p_max) inclusive.
        resolution: Points per axis, or (q points, p points).
        truncation: Series truncation.
    """
    nq, np_ = (resolution, resolution) if isinstance(resolution, int) else resolution
    q_axis = _axis(q_range, nq, "q")
    p_axis = _axis(p_range, np_, "p")

    def block(start: int) -> tuple[np.ndarray, np.ndarray, int]:
        rows = q_axis[start : start + _ROW_BLOCK]
        return _wigner_values(state, rows[:, None], p_axis[None, :], truncation)

    results = parallel_map(block, range(0, nq, _ROW_BLOCK))
    values = np.vstack([values for values, _, _ in results])
    tail = max(float(np.max(bound)) for _, bound, _ in results)
    _flag_tail(tail, truncation, "Wigner grid")
    return WignerGrid(
        q_axis=q_axis,
        p_axis=p_axis,
        values=values,
        cell_area=float((q_axis[1] - q_axis[0]) * (p_axis[1] - p_axis[0])),
        tail_estimate=tail,
        converged=tail <= truncation.tail_tol,
        lambda_used=max(rows for _, _, rows in results),
    )


def wigner_from_wavefunction(
    psi: Callable[[np.ndarray], np.ndarray], pt: PhasePoint, quad_spec: QuadratureSpec
) -> complex:
    """W(q, p) = integral dv exp(-ipv) psi*(q - v/2) psi(q + v/2) over [-V, V].

    ``quad_spec.half_width`` is V and must be given.
    """
    if quad_spec.half_width is None:
        raise InvalidPolicyError("wigner_from_wavefunction needs an explicit half_width")

    def integrand(v: np.ndarray) -> np.ndarray:
        return np.exp(-1j * pt.p * v) * np.conj(psi(pt.q - 0.5 * v)) * psi(pt.q + 0.5 * v)

    return integrate(integrand, -quad_spec.half_width, quad_spec.half_width, quad_spec)


def wigner_quadrature_oracle(
    state: PhaseState,
    pt: PhasePoint,
    policy: TruncationPolicy = WAVEFUNCTION_POLICY,
    quad_spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Wigner value by direct quadrature of the wavefunction, for cross-checks.

    The window defaults to V = 2 (L + |q|) with L = |<x>| + 10 sqrt(max var) + 5.
    """
    stats = quadrature_stats(state)
    support = abs(stats.mean_x) + 10.0 * math.sqrt(max(stats.var_x, stats.var_p)) + 5.0
    needed = 2.0 * (support + abs(pt.q))
    half_width = needed if quad_spec.half_width is None else quad_spec.half_width
    if half_width < needed - 10.0:
        warnings.warn(
            f"oracle window {half_width:g} is narrower than the state's support {needed - 10.0:g}",
            QuadratureCoverageWarning,
            stacklevel=2,
        )

    def psi(xs: np.ndarray) -> np.ndarray:
        return psi_cps_series(state, xs, policy).values

    spec = QuadratureSpec(half_width=half_width, panels=quad_spec.panels, order=quad_spec.order)
    value = wigner_from_wavefunction(psi, pt, spec)
    if abs(value.imag) > IMAGINARY_RESIDUE_TOL:
        warnings.warn(
            f"oracle left an imaginary residue {value.imag:.3g} at ({pt.q}, {pt.p})",
            QuadratureCoverageWarning,
            stacklevel=2,
        )
    return value.real


def negativity_scan(grid: WignerGrid) -> NegativityReport:
    """Minimum, its location and the negative volume of a grid.

    Raises:
        EmptyGridError: If the grid holds no values.
    """
    if grid.values.size == 0:
        raise EmptyGridError("negativity scan needs a non-empty grid")
    iq, jp = np.unravel_index(int(np.argmin(grid.values)), grid.values.shape)
    negative = grid.values[grid.values < 0.0]
    return NegativityReport(
        min_value=float(grid.values[iq, jp]),
        min_location=PhasePoint(float(grid.q_axis[iq]), float(grid.p_axis[jp])),
        negative_volume=float(np.sum(np.abs(negative)) * grid.cell_area),
        max_value=float(np.max(grid.values)),
    )


def marginal_q(grid: WignerGrid) -> np.ndarray:
    """Integral of W over p divided by 2 pi, which approximates |psi(q)|^2."""
    step = float(grid.p_axis[1] - grid.p_axis[0])
    return grid.values.sum(axis=1) * step / (2.0 * math.pi)
