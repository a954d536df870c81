"""Location for common CLI options and helpers"""

from pathlib import Path
import json
import math
import click
import pandas as pd

from hyperwedge import __version__ as package_version
from hyperwedge.euler import FlowParams
from hyperwedge.settings import Settings
from hyperwedge.utils import geometric_ladder, json_serial

EXIT_DETACHED = 2
"""No attached shock exists for the requested parameters."""

EXIT_INVALID = 3
"""Invalid configuration or usage."""

EXIT_NUMERICAL = 4
"""Numerical failure or failed verification."""


class LadderType(click.ParamType):
    """Parses `start,end,points` into a strictly decreasing geometric ladder."""

    name = "ladder"

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value

        try:
            start, end, points = value.split(",")
            return geometric_ladder(float(start), float(end), int(points))
        except ValueError as err:
            self.fail(f"{value!r} is not a valid `start,end,points` ladder: {err}", param, ctx)


LADDER = LadderType()


def angle_options(function):
    click.option(
        "--e0prime",
        type=click.FLOAT,
        help="Reduced upstream energy `E0 - 1/2`. Defaults to 1.",
    )(function)

    click.option(
        "--theta-rad",
        is_flag=True,
        default=False,
        help="Reads `--theta` in radians instead of degrees.",
    )(function)

    click.option(
        "--theta",
        type=click.FLOAT,
        required=True,
        help="Wedge half-angle, in degrees unless `--theta-rad` is set.",
    )(function)

    return function


def state_options(function):
    click.option(
        "--m0",
        type=click.FLOAT,
        help="Upstream Mach number. Combined with `--eps` or `--gamma` it fixes the energy instead.",
    )(function)

    click.option(
        "--gamma",
        type=click.FLOAT,
        help="Adiabatic exponent. Mutually exclusive with `--eps`.",
    )(function)

    click.option(
        "--eps",
        type=click.FLOAT,
        help="`gamma - 1`. Mutually exclusive with `--gamma`.",
    )(function)

    return function


def output_options(function):
    click.option(
        "--out",
        type=click.Path(dir_okay=False, writable=True, path_type=Path),
        help="Writes the table to a file instead of stdout.",
    )(function)

    click.option(
        "--format",
        "fmt",
        type=click.Choice(["csv", "json"]),
        default="csv",
        help="Output format.",
    )(function)

    return function


def svg_option(function):
    click.option(
        "--svg",
        type=click.Path(dir_okay=False, writable=True, path_type=Path),
        help="Writes an SVG plot to this path.",
    )(function)

    return function


def battery_options(function):
    click.option(
        "--bumps",
        type=click.IntRange(min=1),
        help="Number of test functions. Taken from the settings if not given.",
    )(function)

    click.option(
        "--seed",
        type=click.INT,
        help="Seed of the test function generator. Taken from the settings if not given.",
    )(function)

    return function


def tolerance_options(function):
    click.option(
        "--quadrature-tol",
        type=click.FloatRange(min=0, min_open=True),
        help="Quadrature tolerance. Pairing gaps below ten times this count as converged.",
    )(function)

    click.option(
        "--rh-tol",
        type=click.FloatRange(min=0, min_open=True),
        help="Largest Rankine-Hugoniot residual accepted for a solved shock.",
    )(function)

    return function


def ladder_option(function):
    click.option(
        "--ladder",
        type=LADDER,
        help="Geometric ladder `start,end,points`, strictly decreasing. Taken from the settings if not given.",
    )(function)

    return function


def override_settings(ctx: click.Context, **overrides) -> Settings:
    """Replaces the settings of the invocation with flag values that were given."""

    try:
        settings = ctx.obj["settings"].with_overrides(**overrides)
    except ValueError as err:
        raise click.UsageError(str(err))

    ctx.obj["settings"] = settings
    return settings


def resolve_params(
    theta: float,
    theta_rad: bool,
    e0prime: float | None,
    eps: float | None = None,
    gamma: float | None = None,
    m0: float | None = None,
    require_state: bool = True,
) -> FlowParams:
    """Builds flow parameters from CLI values.

    `--eps` and `--gamma` are exclusive. `--m0` alone sets `eps` through
    `M0^2 * eps * E0' = 1`; with one of the others it sets `E0'` instead.

    Args:
        theta: Wedge half-angle as given.
        theta_rad: Whether `theta` is in radians.
        e0prime: Reduced energy or None for the default.
        eps: `gamma - 1` or None.
        gamma: Adiabatic exponent or None.
        m0: Upstream Mach number or None.
        require_state: Fails when none of `eps`, `gamma`, `m0` is given.
            Otherwise `eps = 0` is used.
    Returns:
        FlowParams: The parameters.
    Raises:
        click.UsageError: The combination of options is invalid.
        click.BadParameter: A value is out of range.
    """

    if eps is not None and gamma is not None:
        raise click.UsageError("`--eps` and `--gamma` are mutually exclusive.")

    if gamma is not None:
        eps = gamma - 1.0

    if m0 is not None and eps is not None and e0prime is not None:
        raise click.UsageError(
            "`--m0` with `--eps` or `--gamma` fixes the energy; drop `--e0prime`."
        )

    if eps is None and m0 is None and require_state:
        raise click.UsageError("One of `--eps`, `--gamma` or `--m0` is required.")

    angle = theta if theta_rad else math.radians(theta)

    try:
        if m0 is not None and eps is not None:
            if not m0 > 0 or not eps > 0:
                raise ValueError("`--m0` and `eps` must be positive to fix the energy")
            return FlowParams(angle, eps, 1.0 / (m0 * m0 * eps))

        e0prime = 1.0 if e0prime is None else e0prime
        if m0 is not None:
            return FlowParams.from_mach(angle, m0, e0prime)

        return FlowParams(angle, 0.0 if eps is None else eps, e0prime)
    except ValueError as err:
        raise click.BadParameter(str(err))


def config_record(ctx: click.Context) -> dict:
    """Invocation record written into JSON output."""

    record = {"command": ctx.info_name}
    record.update(
        {k: v for k, v in sorted(ctx.params.items()) if k not in ("out", "svg", "fmt")}
    )
    record["settings"] = ctx.obj["settings"]
    return record


def emit_table(
    ctx: click.Context,
    frame: pd.DataFrame,
    fmt: str,
    out: Path | None,
    key: str = "rows",
    extra: dict | None = None,
) -> None:
    """Writes a table as CSV or as a JSON document.

    CSV carries 17 significant digits and a header row. JSON is one object
    with `config`, `key` and `version` fields, plus any `extra` fields.
    """

    if fmt == "csv":
        text = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    else:
        document = {"config": config_record(ctx), key: frame.to_dict(orient="records")}
        document.update(extra or {})
        document["version"] = package_version
        text = json.dumps(document, indent=2, default=json_serial) + "\n"

    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8", newline="") as file:
            file.write(text)
        ctx.obj["logger"].info(f"Wrote {len(frame)} row(s) to {out}")


def emit_error(err: Exception, **context) -> None:
    """Echoes a machine-readable error record on stderr."""

    record = {"error": err.__class__.__name__, "message": str(err)}
    record.update(context)
    click.echo(json.dumps(record, default=json_serial), err=True)


@click.command
@click.pass_context
def show_settings(ctx: click.Context):
    """Prints the settings loaded by the group."""
    click.echo(json.dumps(ctx.obj["settings"], indent=2, default=json_serial))
