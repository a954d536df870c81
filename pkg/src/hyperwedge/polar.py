"""Attached oblique shock on a straight wedge.

The downstream velocity is found on the shock polar with the slip condition
`v1 = a * u1` imposed, which reduces the Rankine-Hugoniot system to a cubic
in `u1`. The weakest admissible shock (largest `u1`) is returned.
"""

from dataclasses import dataclass
import logging
import math
import numpy as np
from scipy import optimize

from hyperwedge.euler import (
    FlowParams,
    GasState,
    flux,
    pressure,
    upstream_state,
)
from hyperwedge.settings import Settings, DEFAULT_SETTINGS

logger = logging.getLogger(__name__)


class ShockDetached(ValueError):
    """No attached shock exists for the given wedge angle and Mach number."""


class RootBracketFailure(RuntimeError):
    """The polar root search failed numerically."""


class OutsideDomain(ValueError):
    """A point lies outside the flow domain or on the shock itself."""


class EmptyPolar(ValueError):
    """The compressive branch of the polar is empty (subsonic inflow)."""


@dataclass(frozen=True)
class PolarPoint:
    """A point `(u, v)` of the shock polar."""

    u: float
    v: float


@dataclass(frozen=True)
class ShockSolution:
    """Piecewise constant self-similar solution separated by one shock ray."""

    params: FlowParams
    upstream: GasState
    downstream: GasState
    sigma: float
    """Slope of the shock ray `y = sigma * x`."""

    alpha: float
    """Shock angle `atan(sigma)` in radians."""

    @property
    def u1(self) -> float:
        return self.downstream.u

    @property
    def v1(self) -> float:
        return self.downstream.v

    @property
    def rho1(self) -> float:
        return self.downstream.rho

    @property
    def p0(self) -> float:
        return pressure(self.upstream, self.params)

    @property
    def p1(self) -> float:
        return pressure(self.downstream, self.params)

    @property
    def eps_rho1(self) -> float:
        return self.params.eps * self.downstream.rho

    @property
    def mass_weight(self) -> float:
        """Mass carried per unit length of the downstream strip, `rho1 * (sigma - a)`."""
        return self.downstream.rho * (self.sigma - self.params.a)

    def check_invariants(self, rel_tol: float = 1e-12) -> None:
        """Raises `ValueError` if any structural invariant fails.

        Checks slip along the wedge, the shock slope, energy conservation,
        the entropy condition and the ordering of wedge and shock.
        """

        a = self.params.a
        u1, v1 = self.u1, self.v1

        if not math.isclose(v1, a * u1, rel_tol=rel_tol, abs_tol=0.0):
            raise ValueError(f"slip condition violated: v1={v1!r}, a*u1={a * u1!r}")

        if not math.isclose(self.sigma, (1.0 - u1) / v1, rel_tol=rel_tol):
            raise ValueError(f"`sigma` {self.sigma!r} disagrees with (1 - u1) / v1")

        if not math.isclose(math.tan(self.alpha), self.sigma, rel_tol=1e3 * rel_tol):
            raise ValueError(f"`alpha` {self.alpha!r} disagrees with atan(sigma)")

        if self.downstream.E != self.upstream.E:
            raise ValueError("total energy changes across the shock")

        if not self.p1 > self.p0:
            raise ValueError(f"entropy condition violated: p1={self.p1!r} <= p0={self.p0!r}")

        if not a < self.sigma:
            raise ValueError(f"shock slope {self.sigma!r} does not exceed wedge slope {a!r}")

    def __json__(self) -> dict:
        return {
            "params": self.params.__json__(),
            "upstream": self.upstream.as_array().tolist(),
            "downstream": self.downstream.as_array().tolist(),
            "sigma": self.sigma,
            "alpha": self.alpha,
        }


def _polar_constants(params: FlowParams) -> tuple[float, float]:
    lam = params.lam
    return lam * (1.0 + 2.0 * params.e0prime), 1.0 + 2.0 * lam * params.e0prime


def polar_residual(u, params: FlowParams):
    """Cubic polar residual with the slip condition imposed.

    `H(u) = (1 - u)^2 (u - lam - 2 lam E0') - a^2 u^2 (1 - u + 2 lam E0')`,
    evaluated in factored form. Accepts scalars or arrays.
    """

    b, c = _polar_constants(params)
    a2 = params.a * params.a
    return (1.0 - u) ** 2 * (u - b) - a2 * u * u * (c - u)


def polar_derivative(u, params: FlowParams):
    """Derivative of `polar_residual` with respect to `u`."""

    b, c = _polar_constants(params)
    a2 = params.a * params.a
    return -2.0 * (1.0 - u) * (u - b) + (1.0 - u) ** 2 - a2 * (2.0 * u * (c - u) - u * u)


def polar_coefficients(params: FlowParams) -> np.ndarray:
    """Coefficients of the expanded cubic, highest power first."""

    b, c = _polar_constants(params)
    a2 = params.a * params.a
    return np.array([1.0 + a2, -(2.0 + b + a2 * c), 1.0 + 2.0 * b, -b])


def polar_v_squared(u, params: FlowParams):
    """`v^2` on the shock polar as a function of `u`."""

    b, c = _polar_constants(params)
    return (1.0 - u) ** 2 * (u - b) / (c - u)


def density_from_angle(params: FlowParams, alpha: float) -> float:
    """Downstream density expressed through the shock angle."""

    eps, s2 = params.eps, math.sin(alpha) ** 2
    return (eps + 2.0) / eps * s2 / (2.0 * params.e0prime + s2)


def pressure_from_angle(params: FlowParams, alpha: float) -> float:
    """Downstream pressure expressed through the shock angle."""

    eps, s2 = params.eps, math.sin(alpha) ** 2
    return (2.0 * (eps + 1.0) * s2 - eps * eps * params.e0prime) / (
        (eps + 1.0) * (eps + 2.0)
    )


def _polish(u: float, params: FlowParams, iterations: int) -> float:
    for _ in range(iterations):
        slope = polar_derivative(u, params)
        if slope == 0 or not math.isfinite(slope):
            break
        step = polar_residual(u, params) / slope
        u -= step
        if abs(step) <= 2.0 * np.spacing(u):
            break
    return u


def _bracketed_roots(params: FlowParams, settings: Settings) -> list[float]:
    lower, _ = _polar_constants(params)
    grid = np.linspace(lower, 1.0, settings.bracket_samples)
    values = polar_residual(grid, params)

    roots = []
    for left, right, f_left, f_right in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if f_left == 0:
            roots.append(float(left))
        elif f_left * f_right < 0:
            try:
                roots.append(
                    optimize.brentq(
                        polar_residual,
                        left,
                        right,
                        args=(params,),
                        xtol=1e-15,
                        maxiter=200,
                    )
                )
            except (ValueError, RuntimeError) as err:
                raise RootBracketFailure(
                    f"bracket [{left!r}, {right!r}] failed for {params}"
                ) from err
    return roots


def polar_roots(params: FlowParams, settings: Settings | None = None) -> list[float]:
    """Real roots of the slip-constrained polar on the compressive branch.

    Companion-matrix roots are polished by Newton steps on the factored
    residual. Sign-change bracketing is the fallback when none survive.

    Returns:
        list[float]: Distinct roots in `(lam (1 + 2 E0'), 1)`, descending.
    """

    settings = settings or DEFAULT_SETTINGS
    lower, _ = _polar_constants(params)

    try:
        raw = np.roots(polar_coefficients(params))
    except np.linalg.LinAlgError as err:
        logger.warning(f"Companion matrix failed for {params}: {err}")
        raw = np.array([])

    roots = []
    for root in raw:
        if abs(root.imag) > settings.imag_tol * max(1.0, abs(root.real)):
            continue
        u = _polish(float(root.real), params, settings.newton_iterations)
        if lower < u < 1.0:
            roots.append(u)

    if not roots:
        logger.debug(f"No companion roots on the polar for {params}, bracketing.")
        roots = [
            _polish(u, params, settings.newton_iterations)
            for u in _bracketed_roots(params, settings)
        ]
        roots = [u for u in roots if lower < u < 1.0]

    distinct = []
    for u in sorted(roots, reverse=True):
        if not distinct or abs(distinct[-1] - u) > 1e-13:
            distinct.append(u)
    return distinct


def _build_solution(params: FlowParams, u1: float, settings: Settings) -> ShockSolution:
    a = params.a
    v1 = a * u1
    sigma = (1.0 - u1) / v1

    # density from mass balance across the shock ray
    normal_speed = u1 - v1 / sigma
    if not normal_speed > 0:
        raise ValueError(f"no mass flux through the shock at u1={u1!r}")

    downstream = GasState(1.0 / normal_speed, u1, v1, params.e0)
    pressure(downstream, params, floor=settings.internal_energy_floor)

    solution = ShockSolution(
        params=params,
        upstream=upstream_state(params),
        downstream=downstream,
        sigma=sigma,
        alpha=math.atan(sigma),
    )
    solution.check_invariants()
    return solution


def _max_residual(sol: ShockSolution) -> float:
    return float(np.max(np.abs(rh_residual(sol))))


def _settle(params: FlowParams, u1: float, settings: Settings) -> ShockSolution:
    """Builds the shock at `u1`, moving to a float neighbour if that lowers the residual.

    Near the hypersonic limit the downstream density is a cancellation of
    order `1 / eps`, so one unit in the last place of `u1` can move the
    Rankine-Hugoniot residual by more than `settings.rh_tol`.

    Raises:
        ValueError: `u1` does not give an admissible shock.
        RootBracketFailure: No neighbour within `settings.ulp_search` units
            in the last place meets `settings.rh_tol`.
    """

    best = _build_solution(params, u1, settings)
    least = _max_residual(best)
    if least <= settings.rh_tol:
        return best

    for direction in (-math.inf, math.inf):
        u = u1
        for _ in range(settings.ulp_search):
            u = float(np.nextafter(u, direction))
            try:
                candidate = _build_solution(params, u, settings)
            except ValueError:
                break
            residual = _max_residual(candidate)
            if residual < least:
                best, least = candidate, residual

    if least > settings.rh_tol:
        raise RootBracketFailure(
            f"Rankine-Hugoniot residual {least:.3e} exceeds {settings.rh_tol:.3e}"
            f" within {settings.ulp_search} ulp of u1={u1!r} for {params}"
        )

    logger.debug(f"Moved u1={u1!r} to {best.u1!r}, residual {least:.3e}")
    return best


def solve_downstream(
    params: FlowParams, settings: Settings | None = None
) -> ShockSolution:
    """Solves the attached shock on the weak branch.

    Args:
        params: Flow parameters with `eps > 0`.
        settings: Root finding controls. Defaults are used if not given.
    Returns:
        ShockSolution: The weakest admissible shock.
    Raises:
        ShockDetached: No admissible root exists.
        RootBracketFailure: The root search failed numerically or the
            Rankine-Hugoniot residual stays above `settings.rh_tol`.
    """

    settings = settings or DEFAULT_SETTINGS

    if params.eps <= 0:
        raise ValueError(
            "`eps` must be positive; the eps = 0 state is built by `hyperwedge.limits`"
        )

    lower, _ = _polar_constants(params)
    if lower >= 1.0:
        raise ShockDetached(
            f"upstream flow is not supersonic (M0 = {params.m0:.6g}) for {params}"
        )

    roots = polar_roots(params, settings)
    for u1 in roots:
        try:
            solution = _settle(params, u1, settings)
        except ValueError as err:
            logger.debug(f"Rejected polar root u1={u1!r}: {err}")
            continue

        logger.debug(
            f"Solved {params}: u1={solution.u1!r} sigma={solution.sigma!r} "
            f"(from {len(roots)} root(s))"
        )
        return solution

    raise ShockDetached(
        f"wedge angle {math.degrees(params.theta):.6g} deg is beyond detachment"
        f" for M0 = {params.m0:.6g} ({params})"
    )


def rh_residual(sol: ShockSolution) -> np.ndarray:
    """Rankine-Hugoniot residual across the shock ray.

    Returns `(F(V1) - F(V0)) - (G(V1) - G(V0)) / sigma`, evaluated through
    the mass flux relative to the ray and summed with `math.fsum`.
    """

    params, s = sol.params, sol.sigma
    left, right = sol.upstream, sol.downstream
    p0 = pressure(left, params)
    p1 = pressure(right, params)

    j0 = left.rho * (left.u - left.v / s)
    j1 = right.rho * (right.u - right.v / s)

    return np.array(
        [
            math.fsum([j1, -j0]),
            math.fsum([j1 * right.u, -j0 * left.u, p1, -p0]),
            math.fsum([j1 * right.v, -j0 * left.v, -p1 / s, p0 / s]),
            math.fsum([j1 * right.E, -j0 * left.E]),
        ]
    )


def rh_residual_direct(sol: ShockSolution) -> np.ndarray:
    """The same residual assembled from the flux vectors themselves."""

    f0 = flux(sol.upstream, sol.params)
    f1 = flux(sol.downstream, sol.params)
    return np.array(
        [
            math.fsum([f1.f[k], -f0.f[k], -f1.g[k] / sol.sigma, f0.g[k] / sol.sigma])
            for k in range(4)
        ]
    )


def sample_polar(params: FlowParams, n: int) -> list[PolarPoint]:
    """Samples the compressive branch of the shock polar.

    Args:
        params: Flow parameters with `eps > 0`.
        n: Number of points, endpoints included.
    Returns:
        list[PolarPoint]: Points with `v >= 0` and `u` ascending to 1.
    """

    if params.eps <= 0:
        raise ValueError(f"`eps` must be positive, not {params.eps}")

    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise ValueError(f"`n` must be an integer of at least 2, not {n!r}")

    lower, _ = _polar_constants(params)
    if lower >= 1.0:
        raise EmptyPolar(f"polar is empty for M0 = {params.m0:.6g}")

    u = np.linspace(lower, 1.0, n)
    v = np.sqrt(np.clip(polar_v_squared(u, params), 0.0, None))
    v[-1] = 0.0

    return [PolarPoint(float(uu), float(vv)) for uu, vv in zip(u, v)]


def evaluate_solution(sol: ShockSolution, x: float, y: float) -> GasState:
    """State of the self-similar solution at `(x, y)`.

    Raises:
        OutsideDomain: The point is not strictly above the wedge, or is on the shock.
    """

    a = sol.params.a
    if not (x > 0 and y > a * x):
        raise OutsideDomain(f"({x!r}, {y!r}) is not above the wedge y = {a!r} x")

    shock_y = sol.sigma * x
    if y > shock_y:
        return sol.upstream
    if y < shock_y:
        return sol.downstream

    raise OutsideDomain(f"({x!r}, {y!r}) lies on the shock")


def _deflection(beta: float, mach: float, gamma: float) -> float:
    m2s2 = (mach * math.sin(beta)) ** 2
    return math.atan(
        2.0 / math.tan(beta) * (m2s2 - 1.0) / (mach * mach * (gamma + math.cos(2.0 * beta)) + 2.0)
    )


def oblique_shock_angle(theta: float, mach: float, gamma: float) -> float:
    """Weak-branch shock angle from the classical deflection relation.

    The angle is bracketed between the Mach angle and the angle of maximum
    deflection and then found by bisection.

    Args:
        theta: Deflection angle in radians.
        mach: Upstream Mach number, above 1.
        gamma: Adiabatic exponent.
    Returns:
        float: The shock angle in radians.
    """

    if mach <= 1:
        raise ShockDetached(f"upstream Mach number {mach!r} is not supersonic")

    mu = math.asin(1.0 / mach)
    peak = optimize.minimize_scalar(
        lambda beta: -_deflection(beta, mach, gamma),
        bounds=(mu, math.pi / 2),
        method="bounded",
        options={"xatol": 1e-12},
    )
    beta_max = float(peak.x)

    if theta > _deflection(beta_max, mach, gamma):
        raise ShockDetached(
            f"deflection {math.degrees(theta):.6g} deg exceeds the maximum for M = {mach!r}"
        )

    return optimize.bisect(
        lambda beta: _deflection(beta, mach, gamma) - theta, mu, beta_max, xtol=1e-14
    )
