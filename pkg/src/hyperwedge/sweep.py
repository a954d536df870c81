"""Orchestrates parameter sweeps of the wedge shock solver.

A sweep holds one point per ladder value. Points solve concurrently in
worker threads and results are assembled in ladder order.
"""

from typing import List
import asyncio
import logging
import math
import uuid
import pandas as pd

from hyperwedge.euler import FlowParams
from hyperwedge.polar import ShockSolution, rh_residual, solve_downstream
from hyperwedge.settings import Settings, DEFAULT_SETTINGS

logger = logging.getLogger(__name__)

SOLUTION_COLUMNS = [
    "eps",
    "gamma",
    "M0",
    "theta_deg",
    "alpha_deg",
    "sigma",
    "u1",
    "v1",
    "rho1",
    "p1",
    "eps_rho1",
    "rho1_times_sigma_minus_a",
    "rh_residual_max",
]
"""Column order of every solution table."""

SWEEP_PARAMETERS = ("eps", "e0prime")


def solution_row(sol: ShockSolution) -> dict:
    """Flattens a solution into a table row."""

    params = sol.params
    return {
        "eps": params.eps,
        "gamma": params.gamma,
        "M0": params.m0,
        "theta_deg": math.degrees(params.theta),
        "alpha_deg": math.degrees(sol.alpha),
        "sigma": sol.sigma,
        "u1": sol.u1,
        "v1": sol.v1,
        "rho1": sol.rho1,
        "p1": sol.p1,
        "eps_rho1": sol.eps_rho1,
        "rho1_times_sigma_minus_a": sol.mass_weight,
        "rh_residual_max": float(max(abs(r) for r in rh_residual(sol))),
    }


def solutions_frame(solutions: List[ShockSolution]) -> pd.DataFrame:
    return pd.DataFrame([solution_row(s) for s in solutions], columns=SOLUTION_COLUMNS)


class SweepPoint:
    """One solve of a sweep."""

    index: int
    """Position in the ladder."""

    params: FlowParams
    """Parameters to solve for."""

    settings: Settings
    """Root finding controls."""

    solution: ShockSolution | None = None
    """Result, set once `run` succeeds."""

    error: Exception | None = None
    """Failure raised by the solver, if any."""

    _instance_logger: logging.Logger
    """Logger handle used by instance."""

    def __init__(
        self,
        params: FlowParams,
        index: int = 0,
        settings: Settings | None = None,
        inherit_logger: logging.Logger | None = None,
    ) -> None:
        """Initializes the class.

        Args:
            params: Parameters to solve for.
            index: Position of the point in its sweep.
            settings: Root finding controls.
            inherit_logger: Parent logger. Uses the module logger if not given.
        """

        if not isinstance(params, FlowParams):
            raise TypeError(f"`params` must be a FlowParams, not {type(params)}")

        self.params = params
        self.index = int(index)
        self.settings = settings or DEFAULT_SETTINGS

        parent = inherit_logger if inherit_logger is not None else logger
        self._instance_logger = parent.getChild(f"{self.__class__.__name__}.{self.index}")

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.params!r}, index={self.index})"

    def __eq__(self, obj) -> bool:
        return (
            isinstance(obj, SweepPoint)
            and self.params == obj.params
            and self.index == obj.index
            and self.settings == obj.settings
        )

    async def run(self) -> None:
        """Solves in a worker thread and keeps the outcome on the instance."""

        self._instance_logger.debug(f"Solving {self.params}")
        try:
            self.solution = await asyncio.to_thread(
                solve_downstream, self.params, self.settings
            )
        except Exception as err:
            self._instance_logger.warning(f"Solve failed: {err}")
            self.error = err
            return

        self._instance_logger.debug(f"Solved with sigma={self.solution.sigma!r}")


class Sweep:
    """Runs a ladder of solves concurrently and collects them in order."""

    name: str
    """Name of the sweep applied in logs."""

    points: List[SweepPoint]
    """Points in ladder order."""

    _instance_logger: logging.Logger
    """Logger handle used by instance."""

    def __init__(
        self,
        points: List[SweepPoint],
        name: str | None = None,
        inherit_logger: logging.Logger | None = None,
    ) -> None:
        """Initializes the class.

        Args:
            points: Points to solve.
            name: Name given to the sweep.
            inherit_logger: Parent logger. Uses the module logger if not given.
        """

        if isinstance(points, SweepPoint):
            points = [points]

        if not hasattr(points, "__iter__"):
            raise TypeError(f"`points` must be an iterable of `SweepPoint`, not {type(points)}")

        points = list(points)
        if not all(isinstance(point, SweepPoint) for point in points):
            raise TypeError("`points` must only contain `SweepPoint`.")

        self.points = points
        self.name = str(name) if name is not None else f"unnamed-sweep-{uuid.uuid4()}"

        parent = inherit_logger if inherit_logger is not None else logger
        self._instance_logger = parent.getChild(f"{self.__class__.__name__}.{self.name}")

    @classmethod
    def from_ladder(
        cls,
        params: FlowParams,
        values: List[float],
        parameter: str = "eps",
        settings: Settings | None = None,
        name: str | None = None,
        inherit_logger: logging.Logger | None = None,
    ) -> "Sweep":
        """Builds a sweep over one parameter.

        Args:
            params: Base parameters. The swept field is replaced per point.
            values: Ladder of values.
            parameter: Either "eps" or "e0prime".
            settings: Root finding controls shared by all points.
            name: Name given to the sweep.
            inherit_logger: Parent logger.
        """

        if parameter not in SWEEP_PARAMETERS:
            raise ValueError(f"`parameter` must be one of {SWEEP_PARAMETERS}, not {parameter!r}")

        builder = params.with_eps if parameter == "eps" else params.with_e0prime
        sweep = cls([], name=name, inherit_logger=inherit_logger)
        sweep.points = [
            SweepPoint(
                builder(value),
                index=i,
                settings=settings,
                inherit_logger=sweep._instance_logger,
            )
            for i, value in enumerate(values)
        ]
        return sweep

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        name_arg = (
            f', name="{self.name}"' if not self.name.startswith("unnamed-sweep-") else ""
        )
        return f"{self.__class__.__name__}({self.points!r}{name_arg})"

    async def run(self) -> List[ShockSolution]:
        """Solves every point and returns the solutions in ladder order.

        Raises:
            Exception: The first failure in ladder order, re-raised.
        """

        self._instance_logger.info(f"Running {len(self.points)} point(s).")
        await asyncio.gather(*[point.run() for point in self.points])

        for point in self.points:
            if point.error is not None:
                self._instance_logger.error(
                    f"Point {point.index} failed for {point.params}: {point.error}"
                )
                raise point.error

        self._instance_logger.info("Terminated.")
        return [point.solution for point in self.points]

    def to_frame(self) -> pd.DataFrame:
        """Table of solved points in ladder order."""
        return solutions_frame([p.solution for p in self.points if p.solution is not None])
