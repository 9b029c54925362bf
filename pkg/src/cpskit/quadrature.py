"""Composite Gauss-Legendre quadrature used by the numerical oracles."""

from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .series import InvalidPolicyError


class QuadratureCoverageWarning(UserWarning):
    """Emitted when an integration window may not cover the integrand's support."""

    pass


@dataclass(frozen=True)
class QuadratureSpec:
    """Integration window and resolution.

    Attributes:
        half_width: Integrate over [-half_width, half_width]. None lets the
            caller derive the window from the state's own statistics.
        panels: Number of equal panels.
        order: Gauss-Legendre nodes per panel.
    """

    half_width: float | None = None
    panels: int = 400
    order: int = 20

    def __post_init__(self) -> None:
        if self.half_width is not None and not self.half_width > 0.0:
            raise InvalidPolicyError(f"half_width must be positive, got {self.half_width}")
        if self.panels < 1:
            raise InvalidPolicyError(f"panels must be at least 1, got {self.panels}")
        if self.order < 2:
            raise InvalidPolicyError(f"order must be at least 2, got {self.order}")


@lru_cache(maxsize=32)
def _reference_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def composite_gauss_legendre(lower: float, upper: float, panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a composite Gauss-Legendre rule on [lower, upper]."""
    if not upper > lower:
        raise InvalidPolicyError(f"integration interval must satisfy lower < upper, got [{lower}, {upper}]")
    nodes, weights = _reference_rule(order)
    edges = np.linspace(lower, upper, panels + 1)
    half = 0.5 * np.diff(edges)
    centres = 0.5 * (edges[:-1] + edges[1:])
    points = (centres[:, None] + half[:, None] * nodes[None, :]).ravel()
    scaled = (half[:, None] * weights[None, :]).ravel()
    return points, scaled


def integrate(fn: Callable[[np.ndarray], np.ndarray], lower: float, upper: float, spec: QuadratureSpec) -> complex:
    """Integrate a vectorised callable over [lower, upper]."""
    points, weights = composite_gauss_legendre(lower, upper, spec.panels, spec.order)
    return complex(np.sum(weights * fn(points)))
