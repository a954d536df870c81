"""CLI exposed when the package is installed."""

import click
from hyperwedge import __version__ as package_version
from hyperwedge.limits import limit_state, limiting_polar_circle
from hyperwedge.measures import (
    bump_battery,
    eps_measure_family,
    limit_measure_solution,
    wedge_bumps,
)
from hyperwedge.polar import (
    EmptyPolar,
    RootBracketFailure,
    ShockDetached,
    sample_polar,
    solve_downstream,
)
from hyperwedge.quadrature import QuadratureRule
from hyperwedge.settings import DEFAULTS_PATH, Settings
from hyperwedge.sweep import Sweep, solutions_frame
from hyperwedge.weakform import vague_convergence, weak_residual
from hyperwedge import plotting
import hyperwedge.scripts.common as cli_common
import asyncio
import math
import pandas as pd
from pathlib import Path
import logging
import logging.config


class WedgeGroup(click.Group):
    """Group that reports usage errors with the invalid configuration status."""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as err:
            err.exit_code = cli_common.EXIT_INVALID
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as err:
            err.exit_code = cli_common.EXIT_INVALID
            raise


@click.group(cls=WedgeGroup)
@click.pass_context
@click.option(
    "--log-config",
    type=click.Path(exists=True),
    help="Path to a logging config file. Uses default if not given.",
    default=Path(Path(__file__).parents[1], "__assets__", "loggers.ini"),
)
@click.option(
    "--log-level",
    type=click.Choice(
        ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False
    ),
    help="Overrides the logging level.",
)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    help="Path to a settings file. Uses the packaged defaults if not given.",
    default=DEFAULTS_PATH,
)
def main(ctx: click.Context, log_config: Path, log_level: str, config_path: Path):
    """Wedge shock solutions and their hypersonic limit."""
    ctx.ensure_object(dict)

    logging.config.fileConfig(fname=log_config, disable_existing_loggers=False)
    logger = logging.getLogger(__name__)

    if log_level:
        logger.setLevel(log_level)
        click.echo(f"Set log level to {log_level}.", err=True)

    try:
        settings = Settings.from_config(config_path)
    except (ValueError, TypeError, KeyError) as err:
        raise click.BadParameter(str(err), param_hint="--config")

    ctx.obj["logger"] = logger
    ctx.obj["settings"] = settings


main.add_command(cli_common.show_settings)


@main.command
def get_version():
    """Gets the package version"""
    click.echo(package_version)


def _detached(ctx: click.Context, err: ShockDetached, **context):
    ctx.obj["logger"].error(f"Detached: {err}")
    cli_common.emit_error(err, **context)
    ctx.exit(cli_common.EXIT_DETACHED)


def _numerical(ctx: click.Context, err: Exception, **context):
    ctx.obj["logger"].error(f"Numerical failure: {err}")
    cli_common.emit_error(err, **context)
    ctx.exit(cli_common.EXIT_NUMERICAL)


@main.command()
@click.pass_context
@cli_common.angle_options
@cli_common.state_options
@cli_common.tolerance_options
@cli_common.output_options
def solve(
    ctx, theta, theta_rad, e0prime, eps, gamma, m0, rh_tol, quadrature_tol, fmt, out
):
    """Solves the attached shock for one set of parameters."""

    settings = cli_common.override_settings(
        ctx, rh_tol=rh_tol, quadrature_tol=quadrature_tol
    )
    params = cli_common.resolve_params(theta, theta_rad, e0prime, eps, gamma, m0)
    if params.eps == 0:
        raise click.UsageError("limit state requested; use the `limit` command")

    try:
        sol = solve_downstream(params, settings)
    except ShockDetached as err:
        _detached(ctx, err, params=params)
    except RootBracketFailure as err:
        _numerical(ctx, err, params=params)

    cli_common.emit_table(ctx, solutions_frame([sol]), fmt, out)


@main.command()
@click.pass_context
@cli_common.angle_options
@cli_common.state_options
@cli_common.ladder_option
@click.option(
    "--sweep-param",
    type=click.Choice(["eps", "e0prime"]),
    default="eps",
    help="Parameter walked along the ladder. The other ones stay fixed.",
)
@click.option("--name", type=click.STRING, help="Name given to the sweep. Appears in the logs.")
@cli_common.tolerance_options
@cli_common.output_options
def sweep(
    ctx,
    theta,
    theta_rad,
    e0prime,
    eps,
    gamma,
    m0,
    ladder,
    sweep_param,
    name,
    rh_tol,
    quadrature_tol,
    fmt,
    out,
):
    """Solves along a ladder of `eps` or of `e0prime`, one row per value."""

    settings = cli_common.override_settings(
        ctx, rh_tol=rh_tol, quadrature_tol=quadrature_tol
    )
    state_given = any(value is not None for value in (eps, gamma, m0))

    if sweep_param == "eps" and state_given:
        raise click.UsageError("`--eps`, `--gamma` and `--m0` conflict with an eps sweep.")

    params = cli_common.resolve_params(
        theta, theta_rad, e0prime, eps, gamma, m0, require_state=sweep_param == "e0prime"
    )
    if sweep_param == "e0prime" and params.eps == 0:
        raise click.UsageError("limit state requested; use the `limit` command")

    if ladder is None:
        ladder = list(settings.ladder)

    runner = Sweep.from_ladder(
        params,
        ladder,
        parameter=sweep_param,
        settings=settings,
        name=name,
        inherit_logger=ctx.obj["logger"],
    )

    try:
        asyncio.run(runner.run())
    except ShockDetached as err:
        failed = next(p for p in runner.points if p.error is not None)
        _detached(ctx, err, index=failed.index, params=failed.params)
    except RootBracketFailure as err:
        failed = next(p for p in runner.points if p.error is not None)
        _numerical(ctx, err, index=failed.index, params=failed.params)

    cli_common.emit_table(ctx, runner.to_frame(), fmt, out)


@main.command()
@click.pass_context
@cli_common.angle_options
@cli_common.output_options
def limit(ctx, theta, theta_rad, e0prime, fmt, out):
    """Prints the `eps -> 0` limits and the limit measure weights at x = 1."""

    params = cli_common.resolve_params(theta, theta_rad, e0prime, require_state=False)
    record = limit_state(params).as_dict()

    family = limit_measure_solution(params)
    for name, measure in family.components().items():
        record[f"{name}_wedge_weight"] = measure.dirac_weight(family.wedge, 1.0)
    record["rho_wedge_weight"] = family.density.dirac_weight(family.wedge, 1.0)
    record["w1_p"], record["w2_p"] = family.w_p
    record["surface_pressure"] = family.surface_pressure
    record["parallel_residual"] = family.parallel_residual()

    cli_common.emit_table(ctx, pd.DataFrame([record]), fmt, out)


@main.command()
@click.pass_context
@cli_common.angle_options
@cli_common.state_options
@cli_common.battery_options
@click.option(
    "--tol",
    type=click.FloatRange(min=0, min_open=True),
    help="Largest accepted residual. Taken from the settings if not given.",
)
@cli_common.tolerance_options
@cli_common.output_options
def verify_weak(
    ctx,
    theta,
    theta_rad,
    e0prime,
    eps,
    gamma,
    m0,
    seed,
    bumps,
    tol,
    rh_tol,
    quadrature_tol,
    fmt,
    out,
):
    """Evaluates the weak residuals over a battery of test functions.

    Checks the limit measure solution unless a finite `eps` is given, in
    which case the shock solution at that `eps` is checked."""

    settings = cli_common.override_settings(
        ctx,
        battery_seed=seed,
        battery_count=bumps,
        weak_tol=tol,
        rh_tol=rh_tol,
        quadrature_tol=quadrature_tol,
    )
    params = cli_common.resolve_params(
        theta, theta_rad, e0prime, eps, gamma, m0, require_state=False
    )

    if params.eps == 0:
        family = limit_measure_solution(params)
    else:
        try:
            family = eps_measure_family(solve_downstream(params, settings))
        except ShockDetached as err:
            _detached(ctx, err, params=params)
        except RootBracketFailure as err:
            _numerical(ctx, err, params=params)

    battery = bump_battery(
        params,
        count=settings.battery_count,
        seed=settings.battery_seed,
        radius_range=(settings.battery_radius_min, settings.battery_radius_max),
    )
    rule = QuadratureRule.from_settings(settings)

    rows = []
    for index, phi in enumerate(battery):
        residual = weak_residual(family, phi, rule)
        rows.append(
            {
                "bump": index,
                "cx": phi.center[0],
                "cy": phi.center[1],
                "rx": phi.radii[0],
                "ry": phi.radii[1],
                **residual.as_dict(),
            }
        )
    frame = pd.DataFrame(rows)

    worst = float(frame["max_abs"].max())
    summary = {
        "max_abs": worst,
        "tol": settings.weak_tol,
        "parallel_residual": family.parallel_residual(),
        "passed": worst < settings.weak_tol,
    }
    cli_common.emit_table(ctx, frame, fmt, out, extra={"summary": summary})

    if not summary["passed"]:
        ctx.obj["logger"].error(
            f"Weak residual {worst:.3e} exceeds tolerance {settings.weak_tol:.3e}"
        )
        cli_common.emit_error(
            RuntimeError("weak residual exceeds tolerance"), **summary
        )
        ctx.exit(cli_common.EXIT_NUMERICAL)

    ctx.obj["logger"].info(f"Weak residual {worst:.3e} over {len(battery)} bump(s)")


@main.command()
@click.pass_context
@cli_common.angle_options
@cli_common.ladder_option
@cli_common.battery_options
@click.option(
    "--min-order",
    type=click.FLOAT,
    help="Smallest accepted fitted order. Taken from the settings if not given.",
)
@cli_common.tolerance_options
@cli_common.output_options
@cli_common.svg_option
def converge(
    ctx,
    theta,
    theta_rad,
    e0prime,
    ladder,
    seed,
    bumps,
    min_order,
    rh_tol,
    quadrature_tol,
    fmt,
    out,
    svg,
):
    """Pairs the shock solutions with wedge bumps along a ladder of `eps`."""

    settings = cli_common.override_settings(
        ctx,
        convergence_seed=seed,
        convergence_count=bumps,
        min_order=min_order,
        rh_tol=rh_tol,
        quadrature_tol=quadrature_tol,
    )
    params = cli_common.resolve_params(theta, theta_rad, e0prime, require_state=False)

    if ladder is None:
        ladder = list(settings.ladder)

    phis = wedge_bumps(
        params,
        count=settings.convergence_count,
        seed=settings.convergence_seed,
        radius_range=(settings.convergence_radius_min, settings.convergence_radius_max),
        tip_range=(settings.convergence_tip_min, settings.convergence_tip_max),
        offset_range=(settings.convergence_offset_min, settings.convergence_offset_max),
    )

    try:
        report = vague_convergence(
            params, phis, ladder, QuadratureRule.from_settings(settings), settings
        )
    except ShockDetached as err:
        _detached(ctx, err, params=params)
    except RootBracketFailure as err:
        _numerical(ctx, err, params=params)

    cli_common.emit_table(
        ctx, report.to_frame(), fmt, out, extra={"report": report.to_dict()}
    )

    if svg is not None:
        plotting.plot_convergence(report, svg)

    order = report.min_order()
    if not math.isnan(order) and order < settings.min_order:
        ctx.obj["logger"].error(
            f"Fitted order {order:.3f} is below {settings.min_order:.3f}"
        )
        cli_common.emit_error(
            RuntimeError("fitted order below the required minimum"),
            min_order=order,
            required=settings.min_order,
        )
        ctx.exit(cli_common.EXIT_NUMERICAL)


@main.command()
@click.pass_context
@cli_common.angle_options
@cli_common.state_options
@click.option(
    "--points",
    type=click.IntRange(min=2),
    default=201,
    help="Number of samples, endpoints included.",
)
@click.option(
    "--circle",
    is_flag=True,
    default=False,
    help="Overlays the limiting circle of `E0' -> 0` on the plot.",
)
@cli_common.output_options
@cli_common.svg_option
def polar(ctx, theta, theta_rad, e0prime, eps, gamma, m0, points, circle, fmt, out, svg):
    """Samples the shock polar."""

    params = cli_common.resolve_params(theta, theta_rad, e0prime, eps, gamma, m0)
    if params.eps == 0:
        raise click.UsageError("the polar of the limit state is degenerate; give `eps > 0`")

    try:
        samples = sample_polar(params, points)
    except EmptyPolar as err:
        _detached(ctx, err, params=params)

    frame = pd.DataFrame([{"u": p.u, "v": p.v} for p in samples], columns=["u", "v"])

    overlay = limiting_polar_circle(params.eps) if circle else None
    extra = {}
    if overlay is not None:
        extra["circle"] = {"center": overlay[0], "radius": overlay[1]}

    cli_common.emit_table(ctx, frame, fmt, out, extra=extra)

    if svg is not None:
        plotting.plot_polar(samples, svg, circle=overlay, wedge_slope=params.a)


if __name__ == "__main__":
    main()
