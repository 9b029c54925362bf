"""Compensated, audited summation of the S-type series.

Every quadrature statistic of a coherent phase state reduces to two slowly
convergent single series,

    S1 = (1 - |eps|^2) * sum_n |eps|^(2n+1) sqrt(n+1)
    S2 = (1 - |eps|^2) * sum_n |eps|^(2n+2) sqrt((n+1)(n+2))

which need up to several hundred thousand terms when |eps| approaches 1.
Terms are accumulated in ascending index order with Neumaier compensation,
and every result carries the number of terms used and a rigorous bound on
the neglected tail.
"""

import math
import warnings
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from functools import lru_cache
from itertools import count

from .states import check_eps_abs


class InvalidPolicyError(ValueError):
    """Raised when truncation settings are inconsistent."""

    pass


class SeriesNotConvergedWarning(UserWarning):
    """Emitted when a series stops with its tail estimate above tolerance."""

    pass


@dataclass(frozen=True)
class TruncationPolicy:
    """Controls how many terms of a series are summed.

    In adaptive mode (``fixed_n is None``) summation stops at the first index
    whose tail bound is within ``tail_tol``, or after ``max_terms`` terms. In
    fixed mode exactly ``fixed_n`` terms are summed, which reproduces the
    term counts quoted for published figures.
    """

    max_terms: int = 1_000_000
    tail_tol: float = 1e-13
    fixed_n: int | None = None

    def __post_init__(self) -> None:
        if self.max_terms <= 0:
            raise InvalidPolicyError(f"max_terms must be positive, got {self.max_terms}")
        if not self.tail_tol > 0.0:
            raise InvalidPolicyError(f"tail_tol must be positive, got {self.tail_tol}")
        if self.fixed_n is not None and not 0 < self.fixed_n <= self.max_terms:
            raise InvalidPolicyError(f"fixed_n must lie in [1, max_terms={self.max_terms}], got {self.fixed_n}")

    @classmethod
    def fixed(cls, n_terms: int, tail_tol: float = 1e-13) -> "TruncationPolicy":
        """Policy summing exactly ``n_terms`` terms."""
        return cls(max_terms=n_terms, tail_tol=tail_tol, fixed_n=n_terms)

    @property
    def mode(self) -> str:
        return "adaptive" if self.fixed_n is None else "fixed_n"

    def describe(self) -> str:
        """Short human-readable form used in dataset headers."""
        if self.fixed_n is not None:
            return f"fixed_n({self.fixed_n}) tail_tol={self.tail_tol:g}"
        return f"adaptive(max_terms={self.max_terms}) tail_tol={self.tail_tol:g}"


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class SeriesResult:
    """Value of a summed series together with its audit trail."""

    value: float
    terms_used: int
    tail_estimate: float
    """Upper bound on the absolute value of the neglected tail."""

    converged: bool
    """True iff tail_estimate is within the tail_tol of the policy used."""


class NeumaierSum:
    """Running compensated sum (Neumaier's variant of Kahan summation).

    Keeps the rounding error of every addition in a separate compensation
    term, so the result does not depend on the magnitude ordering of terms.
    """

    __slots__ = ("_sum", "_compensation")

    def __init__(self, value: float = 0.0) -> None:
        self._sum = float(value)
        self._compensation = 0.0

    def add(self, value: float) -> None:
        total = self._sum + value
        if abs(self._sum) >= abs(value):
            self._compensation += (self._sum - total) + value
        else:
            self._compensation += (value - total) + self._sum
        self._sum = total

    @property
    def value(self) -> float:
        return self._sum + self._compensation


def sum_terms(
    terms: Iterable[float],
    policy: TruncationPolicy,
    tail_bound: Callable[[int], float],
) -> SeriesResult:
    """Sum terms produced in ascending index order under a truncation policy.

    Args:
        terms: Iterable yielding term(0), term(1), ...
        policy: Truncation policy.
        tail_bound: ``tail_bound(N)`` bounds ``|sum_{n > N} term(n)|``.

    Returns:
        SeriesResult whose tail_estimate is ``tail_bound(terms_used - 1)``.
    """
    adaptive = policy.fixed_n is None
    limit = policy.max_terms if adaptive else policy.fixed_n
    total = NeumaierSum()
    used = 0
    for index, term in zip(range(limit), terms):
        total.add(term)
        used = index + 1
        if adaptive and tail_bound(index) <= policy.tail_tol:
            break

    tail = max(0.0, tail_bound(used - 1))
    return SeriesResult(
        value=total.value,
        terms_used=used,
        tail_estimate=tail,
        converged=tail <= policy.tail_tol,
    )


def sum_series(
    term: Callable[[int], float],
    policy: TruncationPolicy,
    tail_bound: Callable[[int], float],
) -> SeriesResult:
    """Sum ``term(n)`` for n = 0, 1, ... under a truncation policy."""
    return sum_terms(map(term, count()), policy, tail_bound)


def warn_if_unconverged(result: SeriesResult, what: str, *, stacklevel: int = 3) -> None:
    """Emit SeriesNotConvergedWarning for a flagged result."""
    if not result.converged:
        warnings.warn(
            f"{what} stopped after {result.terms_used} terms with tail estimate "
            f"{result.tail_estimate:.3g} above tolerance",
            SeriesNotConvergedWarning,
            stacklevel=stacklevel,
        )


def geometric_tail(last_term: float, ratio: float) -> float:
    """Tail bound last_term * r / (1 - r) for terms decaying at least geometrically."""
    if ratio >= 1.0:
        return math.inf
    return abs(last_term) * ratio / (1.0 - ratio)


def _s1_term(eps_abs: float, eps2: float, weight: float, n: int) -> float:
    return weight * eps_abs * eps2**n * math.sqrt(n + 1)


def _s2_term(eps2: float, weight: float, n: int) -> float:
    return weight * eps2 ** (n + 1) * math.sqrt((n + 1) * (n + 2))


_memoised: list = []


def memoised(fn: Callable) -> Callable:
    """Memoise a pure series evaluation and register it with :func:`clear_series_cache`."""
    cached = lru_cache(maxsize=4096)(fn)
    _memoised.append(cached)
    return cached


@memoised
def _summed(kind: str, eps_abs: float, policy: TruncationPolicy) -> SeriesResult:
    eps2 = eps_abs * eps_abs
    weight = 1.0 - eps2

    if kind == "s1":

        def term(n: int) -> float:
            return _s1_term(eps_abs, eps2, weight, n)

        def tail(n: int) -> float:
            if n < 0:
                return math.inf if eps_abs > 0.0 else 0.0
            return geometric_tail(term(n), eps2 * math.sqrt((n + 2) / (n + 1)))

    else:

        def term(n: int) -> float:
            return _s2_term(eps2, weight, n)

        def tail(n: int) -> float:
            if n < 0:
                return math.inf if eps_abs > 0.0 else 0.0
            return geometric_tail(term(n), eps2 * math.sqrt((n + 3) / (n + 1)))

    return sum_series(term, policy, tail)


def clear_series_cache() -> None:
    """Forget every memoised series result. Useful for testing."""
    for cached in _memoised:
        cached.cache_clear()


def s1(eps_abs: float, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """S1 = (1 - |eps|^2) sum_n |eps|^(2n+1) sqrt(n+1).

    Raises:
        DomainError: If eps_abs lies outside [0, 1).
    """
    return _summed("s1", check_eps_abs(eps_abs), policy)


def s2(eps_abs: float, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """S2 = (1 - |eps|^2) sum_n |eps|^(2n+2) sqrt((n+1)(n+2)).

    Raises:
        DomainError: If eps_abs lies outside [0, 1).
    """
    return _summed("s2", check_eps_abs(eps_abs), policy)
