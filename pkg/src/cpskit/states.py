"""Domain types for coherent phase states and their reference states."""

import math
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Raised when a physical parameter lies outside its domain."""

    pass


def check_eps_abs(eps_abs: float) -> float:
    """Validate a CPS modulus and return it as a float.

    Raises:
        DomainError: If eps_abs is not finite or lies outside [0, 1).
    """
    value = float(eps_abs)
    if not math.isfinite(value) or value < 0.0 or value >= 1.0:
        raise DomainError(f"|eps| must lie in [0, 1), got {eps_abs!r}")
    return value


def check_mean_n(n_bar: float) -> float:
    """Validate a mean quantum number and return it as a float."""
    value = float(n_bar)
    if not math.isfinite(value) or value < 0.0:
        raise DomainError(f"mean quantum number must be finite and >= 0, got {n_bar!r}")
    return value


def mean_n(eps_abs: float) -> float:
    """Mean number of quanta, |eps|^2 / (1 - |eps|^2)."""
    eps2 = check_eps_abs(eps_abs) ** 2
    return eps2 / (1.0 - eps2)


def eps_from_mean_n(n_bar: float) -> float:
    """Inverse of :func:`mean_n`: |eps| = sqrt(n / (1 + n))."""
    n_bar = check_mean_n(n_bar)
    return math.sqrt(n_bar / (1.0 + n_bar))


# cos/sin on the quadrature axes, where libm leaves residues of order 1e-16
_AXIS_TRIG = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))


def axis_cos_sin(angle: float) -> tuple[float, float]:
    """Return (cos, sin) of an angle, exact at integer multiples of pi/2."""
    quarter = angle / (math.pi / 2)
    k = round(quarter)
    if abs(quarter - k) <= 4 * math.ulp(max(abs(quarter), 1.0)):
        return _AXIS_TRIG[k % 4]
    return math.cos(angle), math.sin(angle)


@dataclass(frozen=True)
class PhaseState:
    """Coherent phase state with parameter eps = eps_abs * exp(i * phase)."""

    eps_abs: float
    """Modulus |eps|, in [0, 1)."""

    phase: float = 0.0
    """Phase of eps in radians."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps_abs", check_eps_abs(self.eps_abs))
        if not math.isfinite(self.phase):
            raise DomainError(f"phase must be finite, got {self.phase!r}")
        object.__setattr__(self, "phase", float(self.phase))

    @classmethod
    def from_mean_n(cls, n_bar: float, phase: float = 0.0) -> "PhaseState":
        """Build the state with a given mean quantum number."""
        return cls(eps_from_mean_n(n_bar), phase)

    @property
    def eps2(self) -> float:
        return self.eps_abs * self.eps_abs

    @property
    def mean_n(self) -> float:
        return mean_n(self.eps_abs)

    @property
    def eps(self) -> complex:
        cos_phi, sin_phi = axis_cos_sin(self.phase)
        return complex(self.eps_abs * cos_phi, self.eps_abs * sin_phi)


@dataclass(frozen=True)
class CoherentState:
    """Standard coherent state with displacement alpha."""

    alpha: complex

    def __post_init__(self) -> None:
        value = complex(self.alpha)
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise DomainError(f"alpha must be finite, got {self.alpha!r}")
        object.__setattr__(self, "alpha", value)

    @classmethod
    def matching(cls, state: PhaseState) -> "CoherentState":
        """Coherent state with the same mean quantum number and phase as a CPS."""
        cos_phi, sin_phi = axis_cos_sin(state.phase)
        amplitude = math.sqrt(state.mean_n)
        return cls(complex(amplitude * cos_phi, amplitude * sin_phi))

    @property
    def mean_n(self) -> float:
        return abs(self.alpha) ** 2


def evolve(state: PhaseState, t: float) -> PhaseState:
    """Free oscillator evolution over time t, which shifts the phase by t."""
    return PhaseState(state.eps_abs, state.phase + t)


def photon_number_distribution(eps_abs: float, n_max: int) -> np.ndarray:
    """P(n) = (1 - |eps|^2) |eps|^(2n) for n = 0..n_max.

    The coherent phase state and its thermal analog share this distribution.
    """
    eps2 = check_eps_abs(eps_abs) ** 2
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    return (1.0 - eps2) * np.power(eps2, np.arange(n_max + 1, dtype=float))
