"""Weak-form residuals of the measure Euler equations and vague convergence.

For a test function `phi` the four residuals are

    r_k = <m^k, dphi/dx> + <n^k, dphi/dy> + [<p, dphi/dx> + <w1_p dW, phi>]_(k=1)
          + [<p, dphi/dy> + <w2_p dW, phi>]_(k=2) + F_k(U0) * int phi(0, y) dy

which vanish for every `phi` exactly when the family is a measure solution
with the given boundary force on the wedge.
"""

from dataclasses import dataclass
from typing import Sequence
import logging
import math
import numpy as np
import pandas as pd

from hyperwedge import euler
from hyperwedge.euler import FlowParams
from hyperwedge.measures import (
    DiracPart,
    MeasureFamily,
    TestFunction,
    eps_measure_family,
    limit_measure_solution,
    pair,
)
from hyperwedge.polar import ShockSolution, solve_downstream
from hyperwedge.quadrature import (
    Box,
    QuadratureRule,
    DEFAULT_RULE,
    integrate,
    integrate_piecewise,
)
from hyperwedge.settings import Settings, DEFAULT_SETTINGS
from hyperwedge.utils import fit_order, finite_or_none

logger = logging.getLogger(__name__)

EQUATIONS = ("mass", "x_momentum", "y_momentum", "energy")
"""Names of the four conservation laws, in residual order."""


@dataclass(frozen=True, eq=False)
class WeakResidual:
    """Residuals of the four weak equations for one test function."""

    r: np.ndarray
    phi: TestFunction | None = None

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.r)))

    def as_dict(self) -> dict:
        record = {f"r_{name}": float(value) for name, value in zip(EQUATIONS, self.r)}
        record["max_abs"] = self.max_abs
        return record


def inflow_integral(phi, rule: QuadratureRule = DEFAULT_RULE) -> float:
    """`int_0^inf phi(0, y) dy`, truncated to the support of `phi`."""

    box: Box = phi.support
    if not box.x0 <= 0.0 <= box.x1:
        return 0.0

    return integrate(lambda y: phi(np.zeros_like(y), y), max(box.y0, 0.0), box.y1, rule)


def wedge_integral(family: MeasureFamily, phi, rule: QuadratureRule = DEFAULT_RULE) -> float:
    """`<dW, phi>`, the integral of `phi` against arc length on the wedge."""
    return DiracPart(family.wedge, 1.0).pair(phi, rule)


def weak_residual(
    family: MeasureFamily, phi: TestFunction, rule: QuadratureRule = DEFAULT_RULE
) -> WeakResidual:
    """Evaluates the weak residuals of a measure family.

    Args:
        family: Output of `limit_measure_solution` or `eps_measure_family`.
        phi: Test function.
        rule: Quadrature rule used for every pairing.
    Returns:
        WeakResidual: One residual per conservation law.
    """

    dx, dy = phi.dx, phi.dy
    inflow = inflow_integral(phi, rule)
    on_wedge = wedge_integral(family, phi, rule)

    residuals = []
    for k in range(4):
        terms = [
            pair(family.m[k], dx, rule),
            pair(family.n[k], dy, rule),
            float(family.inflow[k]) * inflow,
        ]
        if k == 1:
            terms += [pair(family.pressure, dx, rule), family.w_p[0] * on_wedge]
        elif k == 2:
            terms += [pair(family.pressure, dy, rule), family.w_p[1] * on_wedge]
        residuals.append(math.fsum(terms))

    return WeakResidual(np.array(residuals), phi)


def integral_residual(
    sol: ShockSolution, phi: TestFunction, rule: QuadratureRule = DEFAULT_RULE
) -> np.ndarray:
    """Residual of the integral identity defining entropy solutions at `eps > 0`.

    `int (F phi_x + G phi_y) - int (a F(U_W) - G(U_W)) phi(x, ax) dx
    + int F(U0) phi(0, y) dy`, with `U_W` the downstream state on the wedge.
    """

    family = eps_measure_family(sol)
    a = sol.params.a
    dx, dy = phi.dx, phi.dy
    inflow = inflow_integral(phi, rule)
    on_wedge = wedge_integral(family, phi, rule) / math.sqrt(1.0 + a * a)
    wall = euler.flux(sol.downstream, sol.params)

    residuals = []
    for k in range(4):
        terms = [
            pair(family.m[k], dx, rule),
            pair(family.n[k], dy, rule),
            -(a * wall.f[k] - wall.g[k]) * on_wedge,
            float(family.inflow[k]) * inflow,
        ]
        if k == 1:
            terms.append(pair(family.pressure, dx, rule))
        elif k == 2:
            terms.append(pair(family.pressure, dy, rule))
        residuals.append(math.fsum(terms))

    return np.array(residuals)


def boundary_force(family_or_sol: MeasureFamily | ShockSolution) -> np.ndarray:
    """Lift and drag density `-(w1_p, w2_p)` exerted on the wedge."""

    if isinstance(family_or_sol, ShockSolution):
        family_or_sol = eps_measure_family(family_or_sol)

    w1, w2 = family_or_sol.w_p
    return np.array([-w1, -w2])


def _flux_densities(sol: ShockSolution, which: str) -> tuple[np.ndarray, np.ndarray]:
    if which not in ("m", "n"):
        raise ValueError(f"`flux` must be 'm' or 'n', not {which!r}")

    def densities(state):
        rho, u, v, E = state.rho, state.u, state.v, state.E
        mass = rho * u if which == "m" else rho * v
        return np.array([mass, mass * u, mass * v, mass * E])

    return densities(sol.upstream), densities(sol.downstream)


def eta_weight(sol: ShockSolution, flux: str = "n") -> np.ndarray:
    """Downstream flux densities times the width `1/a - 1/sigma` of the strip in `eta`.

    For `flux="n"` this tends to `(1, cos^2 theta, sin theta cos theta, E0)`.
    """

    _, downstream = _flux_densities(sol, flux)
    return downstream * (1.0 / sol.params.a - 1.0 / sol.sigma)


def _eta_strip(psi, ys, lower, upper, rule: QuadratureRule) -> np.ndarray:
    nodes, weights = rule.unit_composite(rule.strip_panels)
    width = np.maximum(upper - lower, 0.0)
    etas = lower[:, None] + width[:, None] * nodes[None, :]
    yy = np.broadcast_to(ys[:, None], etas.shape)
    values = psi(etas * yy, yy)
    return np.sum(values * weights[None, :], axis=1) * width


def eta_decomposition_pairing(
    sol: ShockSolution,
    psi: TestFunction,
    flux: str = "n",
    rule: QuadratureRule = DEFAULT_RULE,
) -> np.ndarray:
    """Pairs `m^k(eps)` or `n^k(eps)` with `psi` in the variables `(eta, y)`.

    With `x = eta * y` the pairing splits into an upstream part `A` over
    `eta < 1/sigma` and `B * C`, where `B = eta_weight(sol)` and `C` is the
    `y`-weighted average of `psi` over the downstream strip in `eta`.

    Returns:
        np.ndarray: The four pairings.
    """

    upstream, _ = _flux_densities(sol, flux)
    weight = eta_weight(sol, flux)
    a, sigma = sol.params.a, sol.sigma
    box = psi.support

    x_min, x_max = max(box.x0, 0.0), box.x1
    y_lo, y_hi = max(box.y0, 0.0), box.y1
    if x_max <= x_min or y_hi <= y_lo:
        return np.zeros(4)

    breaks = {y_lo, y_hi}
    for slope in (a, sigma):
        for x in (x_min, x_max):
            if y_lo < slope * x < y_hi:
                breaks.add(slope * x)

    def upstream_part(ys):
        lower = x_min / ys
        upper = np.minimum(1.0 / sigma, x_max / ys)
        return ys * _eta_strip(psi, ys, lower, upper, rule)

    def strip_average(ys):
        lower = np.maximum(1.0 / sigma, x_min / ys)
        upper = np.minimum(1.0 / a, x_max / ys)
        return ys * _eta_strip(psi, ys, lower, upper, rule) / (1.0 / a - 1.0 / sigma)

    a_part = integrate_piecewise(upstream_part, breaks, rule)
    c_part = integrate_piecewise(strip_average, breaks, rule)

    return upstream * a_part + weight * c_part


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    """Pairings of the `eps` family against the limit, over a ladder of `eps`."""

    params: FlowParams
    eps_ladder: np.ndarray
    components: tuple[str, ...]
    phis: tuple[TestFunction, ...]
    eps_pairings: np.ndarray
    """Shape `(component, phi, eps)`."""

    limit_pairings: np.ndarray
    """Shape `(component, phi)`."""

    floor: float = 1e-11
    """Gaps below this count as converged."""

    @property
    def pairing_gap(self) -> np.ndarray:
        """`|<mu(eps), phi> - <mu_0, phi>|`, shape `(component, phi, eps)`."""
        return np.abs(self.eps_pairings - self.limit_pairings[:, :, None])

    @property
    def fitted_order(self) -> np.ndarray:
        """Log-log slope per `(component, phi)`, `nan` when fewer than two gaps exceed the floor."""

        gaps = self.pairing_gap
        orders = np.full(gaps.shape[:2], np.nan)
        for i in range(gaps.shape[0]):
            for j in range(gaps.shape[1]):
                keep = gaps[i, j] > self.floor
                if np.count_nonzero(keep) >= 2:
                    orders[i, j] = fit_order(self.eps_ladder[keep], gaps[i, j][keep])
        return orders

    def _rows(self, component: str | None) -> slice | list[int]:
        if component is None:
            return slice(None)
        return [self.components.index(component)]

    def min_order(self, component: str | None = None) -> float:
        """Smallest fitted order, over all components if none is named."""
        orders = self.fitted_order[self._rows(component)]
        if np.all(np.isnan(orders)):
            return math.nan
        return float(np.nanmin(orders))

    def is_monotone(self, component: str | None = None, slack: float | None = None) -> bool:
        """True if every gap is non-increasing along the ladder, up to `slack`."""
        slack = self.floor if slack is None else slack
        gaps = self.pairing_gap[self._rows(component)]
        return bool(np.all(np.diff(gaps, axis=-1) <= slack))

    def to_frame(self) -> pd.DataFrame:
        """Long table with one row per `(component, phi, eps)`."""

        gaps = self.pairing_gap
        rows = []
        for i, name in enumerate(self.components):
            for j in range(len(self.phis)):
                for k, eps in enumerate(self.eps_ladder):
                    rows.append(
                        {
                            "component": name,
                            "phi": j,
                            "eps": float(eps),
                            "pairing_eps": float(self.eps_pairings[i, j, k]),
                            "pairing_limit": float(self.limit_pairings[i, j]),
                            "gap": float(gaps[i, j, k]),
                        }
                    )
        return pd.DataFrame(
            rows,
            columns=["component", "phi", "eps", "pairing_eps", "pairing_limit", "gap"],
        )

    def orders_frame(self) -> pd.DataFrame:
        """Fitted order per `(component, phi)`."""

        orders = self.fitted_order
        rows = [
            {"component": name, "phi": j, "fitted_order": float(orders[i, j])}
            for i, name in enumerate(self.components)
            for j in range(len(self.phis))
        ]
        return pd.DataFrame(rows, columns=["component", "phi", "fitted_order"])

    def to_dict(self) -> dict:
        orders = self.fitted_order
        return {
            "params": self.params.__json__(),
            "eps_ladder": [float(e) for e in self.eps_ladder],
            "components": list(self.components),
            "phis": [phi.__json__() for phi in self.phis],
            "pairing_gap": {
                name: [[float(g) for g in row] for row in self.pairing_gap[i]]
                for i, name in enumerate(self.components)
            },
            "fitted_order": {
                name: [finite_or_none(o) for o in orders[i]]
                for i, name in enumerate(self.components)
            },
            "floor": float(self.floor),
            "min_order": finite_or_none(self.min_order()),
            "monotone": self.is_monotone(),
        }


def _check_ladder(eps_ladder: Sequence[float]) -> np.ndarray:
    ladder = np.asarray(eps_ladder, dtype=float)
    if ladder.ndim != 1 or ladder.size == 0:
        raise ValueError("`eps_ladder` must be a non-empty sequence")
    if np.any(ladder <= 0):
        raise ValueError("`eps_ladder` values must be positive")
    if np.any(np.diff(ladder) >= 0):
        raise ValueError("`eps_ladder` must be strictly decreasing")
    return ladder


def vague_convergence(
    params: FlowParams,
    phis: Sequence[TestFunction],
    eps_ladder: Sequence[float],
    rule: QuadratureRule = DEFAULT_RULE,
    settings: Settings | None = None,
) -> ConvergenceReport:
    """Pairs the shock-solution measures with `phis` along a ladder of `eps`.

    Args:
        params: Supplies `theta` and `e0prime`; its `eps` is ignored.
        phis: Test functions.
        eps_ladder: Strictly decreasing positive values of `eps`.
        rule: Quadrature rule.
        settings: Root finding controls and the converged floor.
    Returns:
        ConvergenceReport: Pairings, gaps and fitted orders.
    Raises:
        ShockDetached: Some `eps` of the ladder has no attached shock.
    """

    settings = settings or DEFAULT_SETTINGS
    ladder = _check_ladder(eps_ladder)
    phis = tuple(phis)
    if not phis:
        raise ValueError("`phis` must not be empty")

    limit = limit_measure_solution(params).components()
    names = tuple(limit)

    limit_pairings = np.array(
        [[pair(limit[name], phi, rule) for phi in phis] for name in names]
    )
    eps_pairings = np.empty((len(names), len(phis), ladder.size))

    for k, eps in enumerate(ladder):
        family = eps_measure_family(solve_downstream(params.with_eps(float(eps)), settings))
        measures = family.components()
        for i, name in enumerate(names):
            for j, phi in enumerate(phis):
                eps_pairings[i, j, k] = pair(measures[name], phi, rule)
        logger.debug(f"Paired {len(names)} measures with {len(phis)} bumps at eps={eps!r}")

    return ConvergenceReport(
        params=params,
        eps_ladder=ladder,
        components=names,
        phis=phis,
        eps_pairings=eps_pairings,
        limit_pairings=limit_pairings,
        floor=settings.converged_floor,
    )
