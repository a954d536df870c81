"""Non-dimensional polytropic gas algebra for steady two-dimensional Euler flow.

All states are normalized by the incoming flow, so the upstream state is
always `(rho, u, v, E) = (1, 1, 0, E0)` and the whole problem is fixed by the
wedge angle, `eps = gamma - 1` and the reduced energy `E0' = E0 - 1/2`.
"""

from dataclasses import dataclass
from numbers import Real
import logging
import math
import numpy as np

logger = logging.getLogger(__name__)

INTERNAL_ENERGY_FLOOR = 1.0e-14
"""Internal energies at or below this are rejected."""


class NonPositiveInternalEnergy(ValueError):
    """Raised when `E - (u^2 + v^2) / 2` is not positive."""


class DegenerateSoundSpeed(ValueError):
    """Raised when the sound speed is zero or undefined."""


def _check_real(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, Real):
        raise TypeError(f"`{name}` must be a real number, not {type(value)}")

    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"`{name}` must be finite, not {value}")

    return value


class FlowParams:
    """The three parameters that determine the wedge problem."""

    theta: float
    """Wedge half-opening angle in radians, in (0, pi/2)."""

    eps: float
    """`gamma - 1`, zero for the hypersonic limit."""

    e0prime: float
    """Reduced upstream energy `E0 - 1/2`."""

    def __init__(self, theta: float, eps: float, e0prime: float) -> None:
        """Initializes the class.

        Args:
            theta: Wedge half-angle in radians.
            eps: `gamma - 1`, non-negative.
            e0prime: Reduced energy, positive.
        """

        theta = _check_real("theta", theta)
        eps = _check_real("eps", eps)
        e0prime = _check_real("e0prime", e0prime)

        if not 0 < theta < math.pi / 2:
            raise ValueError(f"`theta` must lie in (0, pi/2), not {theta}")

        if eps < 0:
            raise ValueError(f"`eps` must be non-negative, not {eps}")

        if e0prime <= 0:
            raise ValueError(f"`e0prime` must be positive, not {e0prime}")

        self.theta = theta
        self.eps = eps
        self.e0prime = e0prime

    @classmethod
    def from_gamma(cls, theta: float, gamma: float, e0prime: float) -> "FlowParams":
        """Builds parameters from the adiabatic exponent."""
        gamma = _check_real("gamma", gamma)
        if gamma < 1:
            raise ValueError(f"`gamma` must be at least 1, not {gamma}")
        return cls(theta, gamma - 1.0, e0prime)

    @classmethod
    def from_mach(cls, theta: float, m0: float, e0prime: float) -> "FlowParams":
        """Builds parameters from the upstream Mach number.

        Uses `M0^2 * eps * E0' = 1`, so a larger Mach number at fixed energy
        means a smaller `eps`.
        """
        m0 = _check_real("m0", m0)
        e0prime = _check_real("e0prime", e0prime)
        if m0 <= 0:
            raise ValueError(f"`m0` must be positive, not {m0}")
        if e0prime <= 0:
            raise ValueError(f"`e0prime` must be positive, not {e0prime}")
        return cls(theta, 1.0 / (m0 * m0 * e0prime), e0prime)

    @property
    def a(self) -> float:
        """Slope of the wedge surface."""
        return math.tan(self.theta)

    @property
    def gamma(self) -> float:
        return 1.0 + self.eps

    @property
    def e0(self) -> float:
        """Upstream total energy per unit mass."""
        return self.e0prime + 0.5

    @property
    def lam(self) -> float:
        """`eps / (eps + 2)`, the parameter of the shock polar."""
        return self.eps / (self.eps + 2.0)

    @property
    def m0(self) -> float:
        """Upstream Mach number, infinite in the hypersonic limit."""
        if self.eps == 0:
            return math.inf
        return 1.0 / math.sqrt(self.eps * self.e0prime)

    @property
    def p0(self) -> float:
        """Upstream pressure."""
        return self.eps / (self.eps + 1.0) * self.e0prime

    def with_eps(self, eps: float) -> "FlowParams":
        return FlowParams(self.theta, eps, self.e0prime)

    def with_e0prime(self, e0prime: float) -> "FlowParams":
        return FlowParams(self.theta, self.eps, e0prime)

    def __eq__(self, obj) -> bool:
        if not isinstance(obj, FlowParams):
            return NotImplemented
        return (
            self.theta == obj.theta
            and self.eps == obj.eps
            and self.e0prime == obj.e0prime
        )

    def __hash__(self) -> int:
        return hash((self.theta, self.eps, self.e0prime))

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}("
            f"theta={self.theta!r}, eps={self.eps!r}, e0prime={self.e0prime!r})"
        )

    def __json__(self) -> dict:
        return {
            "theta": self.theta,
            "theta_deg": math.degrees(self.theta),
            "eps": self.eps,
            "e0prime": self.e0prime,
        }


@dataclass(frozen=True)
class GasState:
    """Conserved-variable state `(rho, u, v, E)`. Pressure is always derived."""

    rho: float
    u: float
    v: float
    E: float

    def __post_init__(self):
        for name in ("rho", "u", "v", "E"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"`{name}` must be finite, not {value}")

        if self.rho <= 0:
            raise ValueError(f"`rho` must be positive, not {self.rho}")

    @property
    def internal_energy(self) -> float:
        return self.E - 0.5 * (self.u * self.u + self.v * self.v)

    def as_array(self) -> np.ndarray:
        return np.array([self.rho, self.u, self.v, self.E])


@dataclass(frozen=True, eq=False)
class FluxPair:
    """Horizontal flux `f = F(U)` and vertical flux `g = G(U)`."""

    f: np.ndarray
    g: np.ndarray

    def mass_consistent(self, state: GasState, tol: float = 1e-12) -> bool:
        """Checks `f[0] * v == g[0] * u` to a relative tolerance."""
        lhs = self.f[0] * state.v
        rhs = self.g[0] * state.u
        return abs(lhs - rhs) <= tol * max(1.0, abs(lhs), abs(rhs))


def upstream_state(params: FlowParams) -> GasState:
    """The normalized incoming state `(1, 1, 0, E0)`."""
    return GasState(1.0, 1.0, 0.0, params.e0)


def pressure(
    state: GasState, params: FlowParams, floor: float = INTERNAL_ENERGY_FLOOR
) -> float:
    """Pressure from the polytropic closure.

    Args:
        state: The gas state.
        params: Flow parameters supplying `eps`.
        floor: Smallest accepted internal energy.
    Returns:
        float: `(E - (u^2 + v^2)/2) * eps / (eps + 1) * rho`.
    """

    internal = state.internal_energy
    if internal <= floor:
        raise NonPositiveInternalEnergy(
            f"internal energy {internal!r} of {state} is not positive"
        )

    return internal * params.eps / (params.eps + 1.0) * state.rho


def sound_speed_mach(state: GasState, params: FlowParams) -> tuple[float, float]:
    """Returns the sound speed and Mach number of a state.

    Raises:
        DegenerateSoundSpeed: When `eps` is zero or the pressure is not positive.
    """

    if params.eps <= 0:
        raise DegenerateSoundSpeed("sound speed is undefined for `eps` = 0")

    p = pressure(state, params)
    if p <= 0:
        raise DegenerateSoundSpeed(f"pressure {p!r} is not positive")

    c = math.sqrt(params.gamma * p / state.rho)
    return c, math.hypot(state.u, state.v) / c


def flux(state: GasState, params: FlowParams) -> FluxPair:
    """Evaluates the flux vectors `F(U)` and `G(U)`."""

    p = pressure(state, params)
    rho, u, v, E = state.rho, state.u, state.v, state.E

    f = np.array([rho * u, rho * u * u + p, rho * u * v, rho * u * E])
    g = np.array([rho * v, rho * u * v, rho * v * v + p, rho * v * E])

    return FluxPair(f, g)
