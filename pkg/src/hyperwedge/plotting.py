"""Static SVG plots of polars and convergence studies."""

from pathlib import Path
from typing import Sequence
import logging
import matplotlib
import numpy as np
from matplotlib.figure import Figure

from hyperwedge.polar import PolarPoint
from hyperwedge.weakform import ConvergenceReport

logger = logging.getLogger(__name__)

SVG_RC = {"svg.hashsalt": "hyper-wedge", "svg.fonttype": "none"}


def _save(figure: Figure, path: str | Path) -> None:
    with matplotlib.rc_context(SVG_RC):
        figure.savefig(path, format="svg", metadata={"Date": None})
    logger.info(f"Wrote {path}")


def plot_polar(
    points: Sequence[PolarPoint],
    path: str | Path,
    circle: tuple[float, float] | None = None,
    wedge_slope: float | None = None,
) -> None:
    """Plots a sampled shock polar.

    Args:
        points: Polar samples.
        path: Output SVG path.
        circle: Optional `(center, radius)` of the limiting circle to overlay.
        wedge_slope: Optional slope of the line `v = a u` to overlay.
    """

    figure = Figure(figsize=(6, 4))
    ax = figure.add_subplot()

    ax.plot([p.u for p in points], [p.v for p in points], label="shock polar")

    if circle is not None:
        center, radius = circle
        angle = np.linspace(0.0, np.pi, 181)
        ax.plot(
            center + radius * np.cos(angle),
            radius * np.sin(angle),
            linestyle="--",
            label="limiting circle",
        )

    if wedge_slope is not None:
        u = np.linspace(0.0, 1.0, 2)
        ax.plot(u, wedge_slope * u, linestyle=":", label="v = a u")

    ax.set_xlabel("u")
    ax.set_ylabel("v")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend()
    _save(figure, path)


def plot_convergence(report: ConvergenceReport, path: str | Path) -> None:
    """Plots the largest pairing gap of each component against `eps` on log axes."""

    figure = Figure(figsize=(6, 4))
    ax = figure.add_subplot()

    gaps = report.pairing_gap
    floor = report.floor
    for i, name in enumerate(report.components):
        worst = np.max(gaps[i], axis=0)
        if np.all(worst <= floor):
            continue
        ax.loglog(report.eps_ladder, np.maximum(worst, floor), marker="o", label=name)

    ax.set_xlabel("eps")
    ax.set_ylabel("max pairing gap")
    ax.legend(fontsize="small", ncol=3)
    _save(figure, path)
