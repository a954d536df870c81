"""Radon measures on the flow domain and their pairing with test functions.

A measure is a sum of sector densities (piecewise constant or smooth
densities on wedge-shaped regions `lower * x < y < upper * x`) and weighted
Dirac measures on straight rays. This is enough to represent both the
shock solutions at `eps > 0` and their singular limit concentrated on the
wedge surface.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from numbers import Real
from typing import Callable
import logging
import math
import numpy as np
from numpy.polynomial import Polynomial

from hyperwedge.euler import FlowParams, GasState, flux, pressure
from hyperwedge.polar import ShockSolution
from hyperwedge.quadrature import (
    Box,
    QuadratureRule,
    DEFAULT_RULE,
    integrate,
    integrate_sector,
)

logger = logging.getLogger(__name__)


class JumpEvaluationError(ValueError):
    """A one-sided value next to a curve could not be evaluated."""


def _bump(s):
    return np.where(np.abs(s) < 1.0, (1.0 - s * s) ** 3, 0.0)


def _bump_prime(s):
    return np.where(np.abs(s) < 1.0, -6.0 * s * (1.0 - s * s) ** 2, 0.0)


class ScalarField:
    """A vectorized function `f(x, y)` with a known bounding support box."""

    support: Box
    """Box outside which the field vanishes."""

    def __init__(self, fn: Callable, support: Box, name: str = "field") -> None:
        self._fn = fn
        self.support = support
        self.name = name

    def __call__(self, x, y):
        return self._fn(x, y)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.name}, {self.support})"


class TestFunction(ScalarField):
    """Tensor-product bump `B((x - c1)/r1) * B((y - c2)/r2)`, `B(s) = (1 - s^2)^3`.

    The bump is C2 with support in the closed box around the center.
    """

    __test__ = False

    center: tuple[float, float]
    radii: tuple[float, float]

    def __init__(self, center: tuple[float, float], radii: tuple[float, float]) -> None:
        """Initializes the class.

        Args:
            center: `(c1, c2)`.
            radii: `(r1, r2)`, both positive.
        """

        c1, c2 = (float(c) for c in center)
        r1, r2 = (float(r) for r in radii)
        if not (r1 > 0 and r2 > 0):
            raise ValueError(f"`radii` must be positive, not {radii}")

        self.center = (c1, c2)
        self.radii = (r1, r2)
        super().__init__(self._value, Box(c1 - r1, c1 + r1, c2 - r2, c2 + r2), "phi")

    def _scaled(self, x, y):
        return (x - self.center[0]) / self.radii[0], (y - self.center[1]) / self.radii[1]

    def _value(self, x, y):
        sx, sy = self._scaled(x, y)
        return _bump(sx) * _bump(sy)

    def gradient(self, x, y):
        """Analytic gradient `(d/dx, d/dy)`."""
        sx, sy = self._scaled(x, y)
        return (
            _bump_prime(sx) * _bump(sy) / self.radii[0],
            _bump(sx) * _bump_prime(sy) / self.radii[1],
        )

    @property
    def dx(self) -> ScalarField:
        return ScalarField(lambda x, y: self.gradient(x, y)[0], self.support, "dphi/dx")

    @property
    def dy(self) -> ScalarField:
        return ScalarField(lambda x, y: self.gradient(x, y)[1], self.support, "dphi/dy")

    def __eq__(self, obj) -> bool:
        return (
            isinstance(obj, TestFunction)
            and self.center == obj.center
            and self.radii == obj.radii
        )

    def __hash__(self) -> int:
        return hash((self.center, self.radii))

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(center={self.center}, radii={self.radii})"

    def __json__(self) -> dict:
        return {"center": list(self.center), "radii": list(self.radii)}


class Curve(ABC):
    """Lipschitz curve `t -> (x(t), y(t))`."""

    @abstractmethod
    def position(self, t) -> tuple:
        """Point at parameter `t`."""

    @abstractmethod
    def velocity(self, t) -> tuple:
        """Derivative of `position`."""

    @abstractmethod
    def window(self, box: Box) -> tuple[float, float] | None:
        """Parameter interval of the part of the curve inside `box`."""

    def speed(self, t):
        vx, vy = self.velocity(t)
        return np.hypot(vx, vy)

    def normal(self, t) -> tuple:
        """Unit tangent rotated clockwise."""
        vx, vy = self.velocity(t)
        speed = np.hypot(vx, vy)
        return vy / speed, -vx / speed


class Ray(Curve):
    """Straight ray `origin + t * direction`, `0 <= t <= t_max`."""

    def __init__(
        self,
        origin: tuple[float, float],
        direction: tuple[float, float],
        t_max: float = math.inf,
    ) -> None:
        if direction[0] == 0 and direction[1] == 0:
            raise ValueError("`direction` must be non-zero")
        if not t_max > 0:
            raise ValueError(f"`t_max` must be positive, not {t_max}")

        self.origin = (float(origin[0]), float(origin[1]))
        self.direction = (float(direction[0]), float(direction[1]))
        self.t_max = float(t_max)

    def position(self, t):
        return (
            self.origin[0] + t * self.direction[0],
            self.origin[1] + t * self.direction[1],
        )

    def velocity(self, t):
        ones = np.ones_like(t, dtype=float)
        return self.direction[0] * ones, self.direction[1] * ones

    def window(self, box: Box) -> tuple[float, float] | None:
        lo, hi = 0.0, self.t_max
        for start, step, low, high in (
            (self.origin[0], self.direction[0], box.x0, box.x1),
            (self.origin[1], self.direction[1], box.y0, box.y1),
        ):
            if step == 0:
                if not low <= start <= high:
                    return None
                continue
            t0, t1 = (low - start) / step, (high - start) / step
            lo, hi = max(lo, min(t0, t1)), min(hi, max(t0, t1))

        if hi <= lo:
            return None
        return lo, hi

    def __eq__(self, obj) -> bool:
        return (
            isinstance(obj, Ray)
            and self.origin == obj.origin
            and self.direction == obj.direction
            and self.t_max == obj.t_max
        )

    def __hash__(self) -> int:
        return hash((self.origin, self.direction, self.t_max))

    def __repr__(self) -> str:
        t_max = "" if math.isinf(self.t_max) else f", t_max={self.t_max!r}"
        return f"{self.__class__.__name__}({self.origin}, {self.direction}{t_max})"


def wedge_surface(params: FlowParams) -> Ray:
    """The wedge surface `y = a x` parametrized by `x`."""
    return Ray((0.0, 0.0), (1.0, params.a))


def shock_ray(sol: ShockSolution) -> Ray:
    """The shock `y = sigma x` parametrized by `x`."""
    return Ray((0.0, 0.0), (1.0, sol.sigma))


def _as_weight(weight) -> Callable:
    if isinstance(weight, Real):
        return Polynomial([float(weight)])
    return weight


@dataclass(frozen=True)
class DiracPart:
    """Weighted Dirac measure `w(t) ds` on a curve."""

    curve: Curve
    weight: Callable
    """Weight as a function of the curve parameter."""

    def __post_init__(self):
        object.__setattr__(self, "weight", _as_weight(self.weight))

    def scaled(self, factor: float) -> "DiracPart":
        if isinstance(self.weight, Polynomial):
            return DiracPart(self.curve, self.weight * factor)
        weight = self.weight
        return DiracPart(self.curve, lambda t: factor * weight(t))

    def pair(self, phi: ScalarField, rule: QuadratureRule = DEFAULT_RULE) -> float:
        window = self.curve.window(phi.support)
        if window is None:
            return 0.0

        def integrand(t):
            x, y = self.curve.position(t)
            return self.weight(t) * phi(x, y) * self.curve.speed(t)

        return integrate(integrand, window[0], window[1], rule)


@dataclass(frozen=True)
class SectorDensity:
    """Density on `{x > 0, lower * x < y < upper * x}`.

    `value` is either a constant or a vectorized function of `(x, y)`.
    """

    lower: float
    upper: float
    value: float | Callable

    def __post_init__(self):
        if not self.upper > self.lower:
            raise ValueError(f"empty sector: lower={self.lower!r}, upper={self.upper!r}")

    @property
    def is_constant(self) -> bool:
        return isinstance(self.value, Real)

    def at(self, x, y):
        if self.is_constant:
            return self.value
        return self.value(x, y)

    def scaled(self, factor: float) -> "SectorDensity":
        if self.is_constant:
            return SectorDensity(self.lower, self.upper, factor * self.value)
        value = self.value
        return SectorDensity(self.lower, self.upper, lambda x, y: factor * value(x, y))

    def pair(self, phi: ScalarField, rule: QuadratureRule = DEFAULT_RULE) -> float:
        if self.is_constant and self.value == 0:
            return 0.0

        return integrate_sector(
            lambda x, y: self.at(x, y) * phi(x, y),
            phi.support,
            self.lower,
            self.upper,
            rule,
        )


@dataclass(frozen=True)
class RadonMeasure:
    """Sum of sector densities and Dirac parts."""

    sectors: tuple[SectorDensity, ...] = ()
    diracs: tuple[DiracPart, ...] = ()

    def __add__(self, other: "RadonMeasure") -> "RadonMeasure":
        if not isinstance(other, RadonMeasure):
            return NotImplemented
        return RadonMeasure(self.sectors + other.sectors, self.diracs + other.diracs)

    def __mul__(self, factor: float) -> "RadonMeasure":
        if not isinstance(factor, Real):
            return NotImplemented
        return RadonMeasure(
            tuple(s.scaled(factor) for s in self.sectors),
            tuple(d.scaled(factor) for d in self.diracs),
        )

    __rmul__ = __mul__

    def pair(self, phi: ScalarField, rule: QuadratureRule = DEFAULT_RULE) -> float:
        return pair(self, phi, rule)

    def density_at(self, x: float, y: float) -> float:
        """Sum of the sector densities containing `(x, y)`."""
        total = 0.0
        for sector in self.sectors:
            if x > 0 and sector.lower * x < y < sector.upper * x:
                total += float(sector.at(x, y))
        return total

    def dirac_weight(self, curve: Curve, t: float) -> float:
        """Total Dirac weight carried by `curve` at parameter `t`."""
        return math.fsum(float(d.weight(t)) for d in self.diracs if d.curve == curve)


def pair(mu: RadonMeasure, phi: ScalarField, rule: QuadratureRule = DEFAULT_RULE) -> float:
    """Pairs a measure with a compactly supported field.

    Sector parts are integrated over the support box of `phi` and Dirac
    parts along the portion of their curve inside it. Pieces are summed
    in a fixed order with `math.fsum`.
    """

    pieces = [sector.pair(phi, rule) for sector in mu.sectors]
    pieces += [dirac.pair(phi, rule) for dirac in mu.diracs]
    return math.fsum(pieces)


def _evaluate(field_fn: Callable, x: float, y: float) -> np.ndarray:
    try:
        value = np.asarray(field_fn(x, y), dtype=float)
    except (ValueError, ArithmeticError) as err:
        raise JumpEvaluationError(f"field failed at ({x!r}, {y!r}): {err}") from err

    if not np.all(np.isfinite(value)):
        raise JumpEvaluationError(f"non-finite field value at ({x!r}, {y!r})")
    return value


def jump_concentration(
    f_field: Callable,
    g_field: Callable,
    curve: Curve,
    h: float | None = None,
) -> DiracPart:
    """Dirac weight that the divergence of `(f, g)` puts on a curve.

    The weight at `t` is `[[f]] n_x + [[g]] n_y`, with `n` the clockwise
    normal and `[[f]] = f(P - h n) - f(P + h n)`. The fields may be scalar
    or vector valued.

    Args:
        f_field: Horizontal component, called as `f(x, y)`.
        g_field: Vertical component.
        curve: The curve carrying the jump.
        h: Offset used for the one-sided values. Defaults to
            `1e-9 * max(1, |P|)`.
    Returns:
        DiracPart: Part whose weight evaluates the jump at scalar `t`.
    """

    def weight(t: float):
        x, y = (float(c) for c in curve.position(t))
        nx, ny = (float(c) for c in curve.normal(t))
        step = h if h is not None else 1e-9 * max(1.0, math.hypot(x, y))

        inner = (x - step * nx, y - step * ny)
        outer = (x + step * nx, y + step * ny)

        f_in, f_out = _evaluate(f_field, *inner), _evaluate(f_field, *outer)
        g_in, g_out = _evaluate(g_field, *inner), _evaluate(g_field, *outer)

        terms = np.stack([f_in * nx, -f_out * nx, g_in * ny, -g_out * ny])
        jump = np.array([math.fsum(column) for column in terms.reshape(4, -1).T])
        return float(jump[0]) if f_in.ndim == 0 else jump

    return DiracPart(curve, weight)


@dataclass(frozen=True, eq=False)
class MeasureFamily:
    """Measures `m^k`, `n^k`, pressure and density of a (measure) solution.

    `m` holds the horizontal fluxes `(rho u, rho u^2, rho u v, rho u E)` and
    `n` the vertical ones `(rho v, rho u v, rho v^2, rho v E)`, both without
    pressure, which is carried separately.
    """

    params: FlowParams
    eps: float
    m: tuple[RadonMeasure, ...]
    n: tuple[RadonMeasure, ...]
    pressure: RadonMeasure
    density: RadonMeasure
    w_p: tuple[float, float]
    """Boundary force weights `(w1_p, w2_p)` on the wedge surface."""

    inflow: np.ndarray
    """Horizontal flux of the incoming state on the line `x = 0`."""

    wedge: Ray
    wedge_velocity: tuple[float, float]
    surface_pressure: float

    def components(self) -> dict[str, RadonMeasure]:
        """Measures by name, in the order used by reports."""
        named = {f"m{k}": mu for k, mu in enumerate(self.m)}
        named.update({f"n{k}": mu for k, mu in enumerate(self.n)})
        named["p"] = self.pressure
        return named

    def parallel_residual(self) -> float:
        """`w1_p + a * w2_p`, zero when the boundary force is normal to the wedge."""
        return self.w_p[0] + self.params.a * self.w_p[1]

    def wedge_derivatives(self, x: float) -> dict[str, float]:
        """Radon-Nikodym ratios of the wedge concentration at `x`.

        Raises:
            ValueError: The family carries no mass on the wedge.
        """

        rho = self.density.dirac_weight(self.wedge, x)
        m0 = self.m[0].dirac_weight(self.wedge, x)
        n0 = self.n[0].dirac_weight(self.wedge, x)
        if rho == 0 or m0 == 0 or n0 == 0:
            raise ValueError(f"no concentration on the wedge at x={x!r}")

        return {
            "u": m0 / rho,
            "v": n0 / rho,
            "u_from_m1": self.m[1].dirac_weight(self.wedge, x) / m0,
            "v_from_m2": self.m[2].dirac_weight(self.wedge, x) / m0,
            "u_from_n1": self.n[1].dirac_weight(self.wedge, x) / n0,
            "v_from_n2": self.n[2].dirac_weight(self.wedge, x) / n0,
            "E_from_m3": self.m[3].dirac_weight(self.wedge, x) / m0,
            "E_from_n3": self.n[3].dirac_weight(self.wedge, x) / n0,
        }

    def constitutive_residual(self) -> float:
        """Largest closure residual over the constant sectors.

        On every sector `p = eps / (eps + 1) * rho * (E - (u^2 + v^2) / 2)`
        with `u = m0 / rho`, `v = n0 / rho` and `E = m3 / m0`.
        """

        residuals = [0.0]
        factor = self.eps / (self.eps + 1.0)
        for sector in self.density.sectors:
            x = 1.0
            y = 0.5 * (sector.lower + min(sector.upper, sector.lower + 1.0))
            rho = self.density.density_at(x, y)
            u = self.m[0].density_at(x, y) / rho
            v = self.n[0].density_at(x, y) / rho
            E = self.m[3].density_at(x, y) / self.m[0].density_at(x, y)
            p = self.pressure.density_at(x, y)
            residuals.append(abs(p - factor * rho * (E - 0.5 * (u * u + v * v))))
        return max(residuals)


def limit_measure_solution(params: FlowParams) -> MeasureFamily:
    """The singular measure solution of the hypersonic limit.

    The incoming flow fills the domain unchanged while all mass, momentum
    and energy deflected by the wedge travel along its surface, with
    weights linear in `x`. The wedge pressure is `sin^2 theta` and the
    pressure measure vanishes.
    """

    s, c = math.sin(params.theta), math.cos(params.theta)
    e0 = params.e0
    a = params.a
    wedge = wedge_surface(params)
    domain = SectorDensity(a, math.inf, 1.0)

    def on_wedge(rate: float, domain_value: float = 0.0) -> RadonMeasure:
        sectors = () if domain_value == 0 else (domain.scaled(domain_value),)
        return RadonMeasure(sectors, (DiracPart(wedge, Polynomial([0.0, rate])),))

    m = (
        on_wedge(s, 1.0),
        on_wedge(s * c * c, 1.0),
        on_wedge(s * s * c),
        on_wedge(e0 * s, e0),
    )
    n = (
        on_wedge(s * s / c),
        on_wedge(s * s * c),
        on_wedge(s**3),
        on_wedge(e0 * s * s / c),
    )

    return MeasureFamily(
        params=params.with_eps(0.0),
        eps=0.0,
        m=m,
        n=n,
        pressure=RadonMeasure(),
        density=on_wedge(s / (c * c), 1.0),
        w_p=(-(s**3), s * s * c),
        inflow=np.array([1.0, 1.0, 0.0, e0]),
        wedge=wedge,
        wedge_velocity=(c * c, s * c),
        surface_pressure=s * s,
    )


def _state_densities(state: GasState, params: FlowParams) -> dict:
    rho, u, v, E = state.rho, state.u, state.v, state.E
    return {
        "m": (rho * u, rho * u * u, rho * u * v, rho * u * E),
        "n": (rho * v, rho * u * v, rho * v * v, rho * v * E),
        "p": pressure(state, params),
        "rho": rho,
    }


def eps_measure_family(sol: ShockSolution) -> MeasureFamily:
    """Measures of the shock solution at `eps > 0`.

    Everything is absolutely continuous: one constant density on the
    downstream strip between wedge and shock and one upstream of the shock.
    The wedge pressure enters only through the boundary weights.
    """

    params = sol.params
    a, sigma = params.a, sol.sigma
    down = _state_densities(sol.downstream, params)
    up = _state_densities(sol.upstream, params)

    def piecewise(downstream_value: float, upstream_value: float) -> RadonMeasure:
        return RadonMeasure(
            (
                SectorDensity(a, sigma, downstream_value),
                SectorDensity(sigma, math.inf, upstream_value),
            )
        )

    p1 = down["p"]
    norm = math.sqrt(1.0 + a * a)

    return MeasureFamily(
        params=params,
        eps=params.eps,
        m=tuple(piecewise(d, u) for d, u in zip(down["m"], up["m"])),
        n=tuple(piecewise(d, u) for d, u in zip(down["n"], up["n"])),
        pressure=piecewise(p1, up["p"]),
        density=piecewise(down["rho"], up["rho"]),
        w_p=(-a * p1 / norm, p1 / norm),
        inflow=flux(sol.upstream, params).f,
        wedge=wedge_surface(params),
        wedge_velocity=(sol.u1, sol.v1),
        surface_pressure=p1,
    )


def _draw_radii(rng: np.random.Generator, low: float, high: float) -> tuple[float, float]:
    return float(rng.uniform(low, high)), float(rng.uniform(low, high))


def bump_battery(
    params: FlowParams,
    count: int = 50,
    seed: int = 1234,
    radius_range: tuple[float, float] = (0.25, 0.75),
) -> list[TestFunction]:
    """Deterministic stratified battery of test functions.

    A third of the supports (rounded up) straddle the wedge surface, a
    third straddle the inflow line `x = 0` above the wedge tip, and the
    rest lie strictly inside the flow domain.

    Args:
        params: Supplies the wedge slope.
        count: Number of bumps.
        seed: Seed of the generator.
        radius_range: Range of the half-widths.
    Returns:
        list[TestFunction]: The battery, wedge bumps first.
    """

    if count < 1:
        raise ValueError(f"`count` must be positive, not {count}")

    rng = np.random.default_rng(seed)
    a = params.a
    low, high = radius_range
    n_wedge = math.ceil(count / 3)
    n_inflow = min(math.ceil(count / 3), count - n_wedge)

    battery = []
    for _ in range(n_wedge):
        r1, r2 = _draw_radii(rng, low, high)
        x = float(rng.uniform(r1, 2.5))
        y = a * x + float(rng.uniform(-0.5, 0.5)) * r2
        battery.append(TestFunction((x, y), (r1, r2)))

    for _ in range(n_inflow):
        r1, r2 = _draw_radii(rng, low, high)
        x = float(rng.uniform(-0.5, 0.5)) * r1
        y = float(rng.uniform(0.5, 3.0)) + r2
        battery.append(TestFunction((x, y), (r1, r2)))

    while len(battery) < count:
        r1, r2 = _draw_radii(rng, low, high)
        x = float(rng.uniform(r1 + 0.05, 2.5))
        y = a * (x + r1) + r2 + float(rng.uniform(0.05, 1.5))
        battery.append(TestFunction((x, y), (r1, r2)))

    return battery


def wedge_bumps(
    params: FlowParams,
    count: int = 10,
    seed: int = 4321,
    radius_range: tuple[float, float] = (0.08, 0.1),
    tip_range: tuple[float, float] = (1.4, 1.8),
    offset_range: tuple[float, float] = (0.4, 0.6),
) -> list[TestFunction]:
    """Bumps whose supports cross the wedge surface close to the tip.

    Each center sits at `x = k * r1` with `k` drawn from `tip_range`, so the
    support stays clear of the inflow line, and at `y = a * x + d * r2` with
    `d` drawn from `offset_range`. With `d` in `(0, 1)` every support covers
    the thin downstream layer of the `eps > 0` solutions while most of its
    mass lies in the upstream sector. For such bumps the pairing gaps of all
    components keep one sign along the usual ladders of `eps`.

    Args:
        params: Supplies the wedge slope.
        count: Number of bumps.
        seed: Seed of the generator.
        radius_range: Range of the half-widths.
        tip_range: Range of the center abscissa in units of `r1`. Must exceed 1.
        offset_range: Range of the height above the wedge in units of `r2`.
            Must lie within `(-1, 1)`.
    Returns:
        list[TestFunction]: The bumps.
    """

    if count < 1:
        raise ValueError(f"`count` must be positive, not {count}")

    if not tip_range[0] > 1.0:
        raise ValueError(f"`tip_range` must lie above 1, not {tip_range}")

    if not -1.0 < offset_range[0] <= offset_range[1] < 1.0:
        raise ValueError(f"`offset_range` must lie within (-1, 1), not {offset_range}")

    rng = np.random.default_rng(seed)
    low, high = radius_range
    bumps = []
    for _ in range(count):
        r1, r2 = _draw_radii(rng, low, high)
        x = float(rng.uniform(*tip_range)) * r1
        y = params.a * x + float(rng.uniform(*offset_range)) * r2
        bumps.append(TestFunction((x, y), (r1, r2)))
    return bumps
