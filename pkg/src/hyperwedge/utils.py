"""Module for handling commonly reused utility functions."""

from typing import Sequence
import math
import numpy as np


def json_serial(obj: object):
    """Serializes an unknown object into a json format."""

    if isinstance(obj, np.generic):
        return obj.item()

    if isinstance(obj, np.ndarray):
        return obj.tolist()

    if obj.__class__.__module__ != "builtins" and hasattr(obj, "__json__"):
        return obj.__json__()

    raise TypeError(f"Type {type(obj)} is not serializable.")


def finite_or_none(value: float) -> float | None:
    """Maps non-finite floats to `None` so JSON output stays standard."""
    value = float(value)
    return value if math.isfinite(value) else None


def geometric_ladder(start: float, end: float, points: int) -> list[float]:
    """Builds a strictly decreasing geometric ladder.

    Args:
        start: First (largest) value.
        end: Last (smallest) value.
        points: Number of values.
    Returns:
        list[float]: The ladder, `[start]` when `points` is 1.
    """

    if not isinstance(points, int) or isinstance(points, bool) or points < 1:
        raise ValueError(f"`points` must be a positive integer, not {points!r}")

    if start <= 0 or end <= 0:
        raise ValueError(f"ladder ends must be positive, not ({start}, {end})")

    if points == 1:
        return [float(start)]

    if not start > end:
        raise ValueError(
            f"ladder must be strictly decreasing, got start={start} end={end}"
        )

    ladder = np.geomspace(start, end, points)
    ladder[0], ladder[-1] = start, end
    return [float(v) for v in ladder]


def fit_order(eps: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log|error| against log eps.

    Args:
        eps: Parameter values, all positive.
        errors: Errors at those values. Zero entries are rejected.
    Returns:
        float: The fitted convergence order.
    """

    eps = np.asarray(eps, dtype=float)
    errors = np.abs(np.asarray(errors, dtype=float))

    if eps.shape != errors.shape or eps.size < 2:
        raise ValueError("need at least two (eps, error) pairs of equal length")

    if np.any(eps <= 0) or np.any(errors <= 0):
        raise ValueError("eps and errors must be positive to fit a log-log slope")

    slope, _ = np.polyfit(np.log(eps), np.log(errors), 1)
    return float(slope)


def fit_slope(eps: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of `values` against `eps` (linear, with intercept)."""

    slope, _ = np.polyfit(np.asarray(eps, dtype=float), np.asarray(values, dtype=float), 1)
    return float(slope)


def richardson_extrapolate(
    values: Sequence[float], eps: Sequence[float], order: float = 1.0
) -> float:
    """Extrapolates `values(eps)` to eps = 0.

    Builds the Richardson tableau in Neville form for an error expansion in
    powers of `eps ** order`, for an arbitrary (not necessarily geometric)
    sequence of eps values.

    Args:
        values: Samples of the quantity, one per eps.
        eps: Distinct positive parameter values.
        order: Power of eps in which the error expands.
    Returns:
        float: The extrapolated value at eps = 0.
    """

    values = [float(v) for v in values]
    eps = [float(h) for h in eps]

    if len(values) != len(eps) or len(values) < 2:
        raise ValueError("need at least two samples to extrapolate")

    if len(set(eps)) != len(eps):
        raise ValueError("eps values must be distinct")

    steps = [h**order for h in eps]
    tableau = list(values)
    for level in range(1, len(tableau)):
        tableau = [
            (steps[i] * tableau[i + 1] - steps[i + level] * tableau[i])
            / (steps[i] - steps[i + level])
            for i in range(len(tableau) - 1)
        ]

    return tableau[0]
