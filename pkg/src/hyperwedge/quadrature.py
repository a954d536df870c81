"""Composite Gauss-Legendre quadrature on intervals and wedge-shaped sectors."""

from dataclasses import dataclass, field
from typing import Callable
import math
import numpy as np
from numpy.polynomial.legendre import leggauss

from hyperwedge.settings import Settings


@dataclass(frozen=True)
class Box:
    """Axis-aligned rectangle `[x0, x1] x [y0, y1]`."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 <= self.x1 and self.y0 <= self.y1):
            raise ValueError(f"box corners are out of order: {self}")


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule.

    Every outer interval gets `panels` panels of `nodes` points and the
    inner direction of every sector gets `strip_panels` panels across its
    width, however thin it is.
    """

    nodes: int = 16
    panels: int = 2
    strip_panels: int = 8
    _reference: tuple = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.nodes < 1 or self.panels < 1 or self.strip_panels < 1:
            raise ValueError(f"quadrature counts must be positive: {self}")
        object.__setattr__(self, "_reference", leggauss(self.nodes))

    @classmethod
    def from_settings(cls, settings: Settings) -> "QuadratureRule":
        return cls(settings.quadrature_nodes, settings.quadrature_panels, settings.strip_panels)

    def refined(self, factor: int = 2) -> "QuadratureRule":
        """Returns the rule with `factor` times as many panels in each direction."""
        return QuadratureRule(self.nodes, self.panels * factor, self.strip_panels * factor)

    def composite(self, a: float, b: float, panels: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights on `[a, b]`.

        Args:
            a: Left end.
            b: Right end.
            panels: Number of equal panels, `self.panels` if not given.
        Returns:
            tuple: Flat arrays of nodes and weights.
        """

        panels = panels or self.panels
        ref_nodes, ref_weights = self._reference
        edges = np.linspace(a, b, panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])

        nodes = (mid[:, None] + half[:, None] * ref_nodes[None, :]).ravel()
        weights = (half[:, None] * ref_weights[None, :]).ravel()
        return nodes, weights

    def unit_composite(self, panels: int) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights on `[0, 1]`."""
        return self.composite(0.0, 1.0, panels)


DEFAULT_RULE = QuadratureRule()


def integrate(
    f: Callable, a: float, b: float, rule: QuadratureRule = DEFAULT_RULE
) -> float:
    """Integrates a vectorized function over `[a, b]`."""

    if b <= a:
        return 0.0

    nodes, weights = rule.composite(a, b)
    return float(np.sum(weights * f(nodes)))


def integrate_piecewise(
    f: Callable, breakpoints, rule: QuadratureRule = DEFAULT_RULE
) -> float:
    """Integrates over consecutive intervals between sorted breakpoints."""

    points = sorted(set(float(p) for p in breakpoints))
    return math.fsum(
        integrate(f, left, right, rule) for left, right in zip(points[:-1], points[1:])
    )


def _slope_breaks(slope: float, box: Box) -> list[float]:
    if not math.isfinite(slope) or slope <= 0:
        return []
    return [y / slope for y in (box.y0, box.y1) if y > 0]


def integrate_sector(
    f: Callable,
    box: Box,
    lower_slope: float,
    upper_slope: float = math.inf,
    rule: QuadratureRule = DEFAULT_RULE,
) -> float:
    """Integrates `f(x, y)` over the box restricted to a sector.

    The sector is `{x > 0, lower_slope * x < y < upper_slope * x}`. The
    x-range is split wherever a sector edge crosses a box edge, so inside
    every piece the y-limits are linear in x and a piecewise polynomial
    integrand that is smooth in the box is integrated exactly.

    Args:
        f: Vectorized integrand `f(x, y)`.
        box: Region of interest, usually the support of a test function.
        lower_slope: Slope of the lower edge of the sector.
        upper_slope: Slope of the upper edge, `inf` for the half-line `x = 0+`.
        rule: Quadrature rule.
    Returns:
        float: The integral.
    """

    x_lo, x_hi = max(box.x0, 0.0), box.x1
    if x_hi <= x_lo or not upper_slope > lower_slope:
        return 0.0

    breaks = [x_lo, x_hi]
    breaks += _slope_breaks(lower_slope, box) + _slope_breaks(upper_slope, box)
    breaks = sorted(set(x for x in breaks if x_lo <= x <= x_hi))

    inner_nodes, inner_weights = rule.unit_composite(rule.strip_panels)

    pieces = []
    for left, right in zip(breaks[:-1], breaks[1:]):
        if right <= left:
            continue

        xs, wx = rule.composite(left, right)
        bottom = np.maximum(box.y0, lower_slope * xs)
        if math.isfinite(upper_slope):
            top = np.minimum(box.y1, upper_slope * xs)
        else:
            top = np.full_like(xs, box.y1)

        width = np.maximum(top - bottom, 0.0)
        if not np.any(width > 0):
            continue

        ys = bottom[:, None] + width[:, None] * inner_nodes[None, :]
        values = np.broadcast_to(f(np.broadcast_to(xs[:, None], ys.shape), ys), ys.shape)
        inner = np.sum(values * inner_weights[None, :], axis=1) * width
        pieces.append(float(np.sum(wx * inner)))

    return math.fsum(pieces)
