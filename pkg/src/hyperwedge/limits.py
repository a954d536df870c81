"""Closed-form limits of the wedge shock family.

Two regimes are covered: `eps -> 0` at fixed energy, where the downstream
layer collapses onto the wedge, and `E0' -> 0` at fixed `eps`, where the
polar tends to a circle and no mass concentrates. Nothing here calls the
polar solver, so the two can be checked against each other.
"""

from dataclasses import dataclass
import logging
import math

from hyperwedge.euler import FlowParams

logger = logging.getLogger(__name__)


class NoIntersection(ValueError):
    """The wedge line misses the limiting polar circle."""


@dataclass(frozen=True)
class LimitState:
    """Limits and first order rates of the shock family as `eps -> 0`."""

    params: FlowParams
    u_lim: float
    v_lim: float
    p_lim: float
    eps_rho_lim: float
    """Limit of `eps * rho1`."""

    sigma_slope: float
    """Rate of `sigma - a` in `eps`."""

    mass_weight_rate: float
    """Limit of `rho1 * (sigma - a)`."""

    u_slope: float
    """Rate of `u1 - cos^2 theta` in `eps`."""

    def as_dict(self) -> dict:
        return {
            "theta_deg": math.degrees(self.params.theta),
            "e0prime": self.params.e0prime,
            "u_lim": self.u_lim,
            "v_lim": self.v_lim,
            "p_lim": self.p_lim,
            "eps_rho_lim": self.eps_rho_lim,
            "sigma_slope": self.sigma_slope,
            "mass_weight_rate": self.mass_weight_rate,
            "u_slope": self.u_slope,
        }


@dataclass(frozen=True)
class LowEnergyLimit:
    """Limit of the shock solution as `E0' -> 0` with `eps` held fixed."""

    eps: float
    theta: float
    rho_lim: float
    circle_center: float
    circle_radius: float
    intersections: tuple[tuple[float, float], tuple[float, float]]
    """Both points where `v = u tan(theta)` meets the circle, larger `u` first."""

    shock_angles: tuple[float, float]
    pressures: tuple[float, float]


@dataclass(frozen=True)
class AsymptoticPrediction:
    """First order prediction of the shock solution at small `eps`."""

    eps: float
    u1: float
    v1: float
    sigma: float
    rho1: float


def limit_state(params: FlowParams) -> LimitState:
    """Evaluates the `eps -> 0` limits. Only `theta` and `e0prime` are used."""

    s, c = math.sin(params.theta), math.cos(params.theta)
    s2 = s * s
    e = params.e0prime

    return LimitState(
        params=params,
        u_lim=c * c,
        v_lim=s * c,
        p_lim=s2,
        eps_rho_lim=2.0 * s2 / (2.0 * e + s2),
        sigma_slope=(0.5 * s2 + e) / (c**3 * s),
        mass_weight_rate=s / c**3,
        u_slope=-(e + 0.5 * s2),
    )


def limiting_polar_circle(eps: float) -> tuple[float, float]:
    """Center on the `u` axis and radius of the polar as `E0' -> 0`."""

    if eps <= 0:
        raise ValueError(f"`eps` must be positive, not {eps}")
    return (eps + 1.0) / (eps + 2.0), 1.0 / (eps + 2.0)


def low_energy_limit(eps: float, theta: float) -> LowEnergyLimit:
    """Solution limits as the upstream energy vanishes at fixed `eps`.

    Args:
        eps: `gamma - 1`, positive.
        theta: Wedge angle in radians, `0 <= theta < asin(1 / (eps + 1))`.
    Returns:
        LowEnergyLimit: Density limit, circle and both wedge intersections.
    Raises:
        NoIntersection: The wedge is too steep to meet the circle.
    """

    center, radius = limiting_polar_circle(eps)

    if theta < 0:
        raise ValueError(f"`theta` must be non-negative, not {theta}")

    if theta >= math.asin(1.0 / (eps + 1.0)):
        raise NoIntersection(
            f"theta = {math.degrees(theta):.6g} deg misses the circle for eps = {eps!r}"
        )

    t = math.tan(theta)
    k = 1.0 + t * t
    root = math.sqrt(center * center - k * (center * center - radius * radius))

    points = []
    for u in ((center + root) / k, (center - root) / k):
        points.append((u, t * u))

    angles = tuple(math.atan2(1.0 - u, v) for u, v in points)
    pressures = tuple(2.0 * math.sin(alpha) ** 2 / (eps + 2.0) for alpha in angles)

    return LowEnergyLimit(
        eps=eps,
        theta=theta,
        rho_lim=(eps + 2.0) / eps,
        circle_center=center,
        circle_radius=radius,
        intersections=tuple(points),
        shock_angles=angles,
        pressures=pressures,
    )


def asymptotic_prediction(params: FlowParams, eps_small: float) -> AsymptoticPrediction:
    """Linear-in-`eps` prediction of `u1`, `v1`, `sigma` and `rho1`.

    At `eps_small = 0` this is the limit state, with infinite density.
    """

    if eps_small < 0:
        raise ValueError(f"`eps_small` must be non-negative, not {eps_small}")

    limit = limit_state(params)
    a = params.a
    u1 = limit.u_lim + limit.u_slope * eps_small

    return AsymptoticPrediction(
        eps=eps_small,
        u1=u1,
        v1=a * u1,
        sigma=a + limit.sigma_slope * eps_small,
        rho1=limit.eps_rho_lim / eps_small if eps_small > 0 else math.inf,
    )
