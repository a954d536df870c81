"""Numerical defaults of the package, loadable from a CFG file."""

from dataclasses import dataclass, asdict, replace
from pathlib import Path
import logging
import config

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(Path(__file__).parent, "__assets__", "defaults.cfg")
"""Packaged configuration file."""


def _float_tuple(values) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class Settings:
    """Quadrature, root finding and verification controls."""

    quadrature_nodes: int = 16
    """Gauss-Legendre nodes per panel."""

    quadrature_panels: int = 2
    """Panels per outer integration interval."""

    strip_panels: int = 8
    """Panels across the width of every sector."""

    newton_iterations: int = 8
    """Newton polishing steps applied to each polar root."""

    bracket_samples: int = 64
    """Samples used to bracket polar roots when the companion matrix fails."""

    imag_tol: float = 1.0e-8
    """Largest imaginary part accepted for a real polar root."""

    ulp_search: int = 16
    """Float neighbours of a polar root searched for a smaller Rankine-Hugoniot residual."""

    rh_tol: float = 1.0e-10
    """Largest Rankine-Hugoniot residual accepted for a solved shock."""

    weak_tol: float = 1.0e-8
    quadrature_tol: float = 1.0e-12
    internal_energy_floor: float = 1.0e-14

    battery_count: int = 50
    battery_seed: int = 1234
    battery_radius_min: float = 0.25
    battery_radius_max: float = 0.75

    convergence_count: int = 10
    convergence_seed: int = 4321
    convergence_radius_min: float = 0.08
    convergence_radius_max: float = 0.1
    convergence_tip_min: float = 1.4
    convergence_tip_max: float = 1.8
    convergence_offset_min: float = 0.4
    convergence_offset_max: float = 0.6
    min_order: float = 0.9

    ladder: tuple[float, ...] = (1.0e-2, 3.0e-3, 1.0e-3, 3.0e-4, 1.0e-4, 3.0e-5, 1.0e-5)
    """Default ladder of `eps`, strictly decreasing."""

    def __post_init__(self):
        for name in ("quadrature_nodes", "quadrature_panels", "strip_panels"):
            if getattr(self, name) < 1:
                raise ValueError(f"`{name}` must be at least 1, not {getattr(self, name)}")

        if self.bracket_samples < 2:
            raise ValueError(
                f"`bracket_samples` must be at least 2, not {self.bracket_samples}"
            )

        if self.battery_radius_min > self.battery_radius_max:
            raise ValueError("`battery_radius_min` exceeds `battery_radius_max`.")

        if self.ulp_search < 0:
            raise ValueError(f"`ulp_search` must not be negative, not {self.ulp_search}")

        if self.convergence_radius_min > self.convergence_radius_max:
            raise ValueError("`convergence_radius_min` exceeds `convergence_radius_max`.")

        if not 1.0 < self.convergence_tip_min <= self.convergence_tip_max:
            raise ValueError("convergence tip ratios must satisfy 1 < min <= max.")

        if not -1.0 < self.convergence_offset_min <= self.convergence_offset_max < 1.0:
            raise ValueError("convergence offsets must satisfy -1 < min <= max < 1.")

        ladder = _float_tuple(self.ladder)
        if not ladder or ladder[-1] <= 0 or any(b >= a for a, b in zip(ladder, ladder[1:])):
            raise ValueError(f"`ladder` must be positive and strictly decreasing, not {self.ladder}")
        object.__setattr__(self, "ladder", ladder)

    @property
    def converged_floor(self) -> float:
        """Gap below which a pairing counts as converged."""
        return 10.0 * self.quadrature_tol

    def with_overrides(self, **overrides) -> "Settings":
        """Returns a copy with the given fields replaced. `None` values are ignored."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def __json__(self) -> dict:
        return asdict(self)

    @classmethod
    def from_config(cls, path: str | Path = DEFAULTS_PATH) -> "Settings":
        """Reads settings from a CFG file.

        Sections and keys missing from the file keep their defaults.

        Args:
            path: Path to the configuration file.
        Returns:
            Settings: The loaded settings.
        """

        cfg = config.Config(str(path))
        logger.debug(f"Loading settings from {path}")

        layout = {
            "quadrature": {
                "nodes": ("quadrature_nodes", int),
                "panels": ("quadrature_panels", int),
                "strip_panels": ("strip_panels", int),
            },
            "root_finding": {
                "newton_iterations": ("newton_iterations", int),
                "bracket_samples": ("bracket_samples", int),
                "imag_tol": ("imag_tol", float),
                "ulp_search": ("ulp_search", int),
            },
            "tolerances": {
                "rh": ("rh_tol", float),
                "weak": ("weak_tol", float),
                "quadrature": ("quadrature_tol", float),
                "internal_energy_floor": ("internal_energy_floor", float),
            },
            "battery": {
                "count": ("battery_count", int),
                "seed": ("battery_seed", int),
                "radius_min": ("battery_radius_min", float),
                "radius_max": ("battery_radius_max", float),
            },
            "convergence": {
                "count": ("convergence_count", int),
                "seed": ("convergence_seed", int),
                "radius_min": ("convergence_radius_min", float),
                "radius_max": ("convergence_radius_max", float),
                "tip_min": ("convergence_tip_min", float),
                "tip_max": ("convergence_tip_max", float),
                "offset_min": ("convergence_offset_min", float),
                "offset_max": ("convergence_offset_max", float),
                "min_order": ("min_order", float),
                "ladder": ("ladder", _float_tuple),
            },
        }

        values = {}
        for section, keys in layout.items():
            if section not in cfg:
                continue
            for key, (field, cast) in keys.items():
                if key in cfg[section]:
                    values[field] = cast(cfg[section][key])

        return cls(**values)


DEFAULT_SETTINGS = Settings()
"""Settings used when a caller passes none."""
