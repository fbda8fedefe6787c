"""Command-line front end.

Exit codes: 0 success, 1 a residual above its tolerance, 2 usage or
configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence

from app.checks import (
    grid_from_config,
    kepler_system_from_config,
    run_residual_suite,
    summarize,
)
from app.config_store import ConfigError, load_run_config
from app.logger import setup_logger
from app.plotting import write_rotation_svg
from app.report import render_mapping, render_table, write_output
from scale_dynamics.errors import ScaleDynamicsError
from scale_dynamics.exp_integral import exp_integral
from scale_dynamics.kepler import (
    ground_state_energy,
    orbital_speed,
    rotation_curve,
    sqrtP_linear,
    sqrtP_nonlinear,
    virial_balance,
)
from shared import defaults as DEFAULTS
from shared.config import RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2
EXIT_IO = 3

ROTATION_COLUMNS = ("r", "v_kepler", "v_scale", "u_over_m", "uadd_over_m", "vsq_total")
VIRIAL_COLUMNS = ("r", "two_kinetic", "gamma_u", "scale_term", "residual")
EI_COLUMNS = ("x", "ei")

_CONFIG_FIELDS = (
    "gm",
    "mass",
    "lambda_scale",
    "kconst",
    "eta",
    "r_min",
    "r_max",
    "samples",
    "grid",
    "format",
    "output",
    "plot",
    "c1",
    "c2",
    "energy_factor",
    "fd_step",
)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("run configuration")
    group.add_argument("--gm", type=float, help="product G*M")
    group.add_argument("--mass", type=float, help="orbiting mass m")
    group.add_argument("--lambda", dest="lambda_scale", type=float, help="scale constant")
    group.add_argument("--kconst", help="K, or 'auto' for m*Lambda")
    group.add_argument("--eta", help="+1 or -1")
    group.add_argument("--rmin", dest="r_min", type=float)
    group.add_argument("--rmax", dest="r_max", type=float)
    group.add_argument("--samples", type=int)
    group.add_argument("--grid", choices=("linear", "log"))
    group.add_argument("--format", choices=("csv", "json"))
    group.add_argument("--output", help="output file (default: standard output)")
    group.add_argument("--plot", help="SVG path for the rotation-curve figure")
    group.add_argument("--c1", type=float, help="ground-state constant C1")
    group.add_argument("--c2", type=float, help="ground-state constant C2")
    group.add_argument("--energy-factor", dest="energy_factor", type=float)
    group.add_argument("--fd-step", dest="fd_step", type=float)
    group.add_argument(
        "--config",
        help=f"key=value config file (default: ${DEFAULTS.CONFIG_PATH_ENV_VAR})",
    )
    group.add_argument("--verbose", action="store_true", help="debug logging")
    group.add_argument("--log-file", dest="log_file", help="also log to this file")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="scale-dynamics",
        description="Kepler ground states, rotation curves and residual checks "
        "in the fractional scale regime.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser(
        "rotation-curve", parents=[common], help="speed decomposition over a radial grid"
    )
    commands.add_parser(
        "ground-state", parents=[common], help="ground-state energies and domains"
    )
    commands.add_parser(
        "residuals", parents=[common], help="residual suite as a JSON report"
    )
    commands.add_parser("virial", parents=[common], help="virial balance per radius")
    ei = commands.add_parser("ei", parents=[common], help="exponential integral Ei(x)")
    ei.add_argument("x", nargs="+", type=float)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING
    for name in ("scale_dynamics", "app"):
        setup_logger(name, args.log_file, level)


def cmd_rotation_curve(config: RunConfig) -> int:
    system = kepler_system_from_config(config)
    rows = rotation_curve(system, grid_from_config(config))
    table = [
        (row.r, row.v_kepler, row.v_scale, row.u_over_m, row.uadd_over_m, row.vsq_total)
        for row in rows
    ]
    write_output(render_table(ROTATION_COLUMNS, table, config.format), config.output)
    if config.plot is not None:
        title = f"GM={config.gm:g}, Lambda={config.lambda_scale:g}"
        write_rotation_svg(rows, config.plot, config.grid == "log", title)
    return EXIT_OK


def cmd_ground_state(config: RunConfig) -> int:
    system = kepler_system_from_config(config)
    energy = ground_state_energy(system)
    linear = sqrtP_linear(system, config.c1, config.c2)
    nonlinear = sqrtP_nonlinear(system, config.c1, config.c2)
    assert linear.amplitude is not None
    report: Dict[str, Any] = {
        "E0_paper": energy.paper,
        "E0_oracle": energy.oracle,
        "E0_ratio": energy.ratio,
        "r0": system.r0,
        "beta": system.beta,
        "K": system.K,
        "nonlinear_exponent": system.nonlinear_exponent,
        "orbital_speed": orbital_speed(system),
        "linear_amplitude": linear.amplitude,
        "nonlinear_r_max": nonlinear.r_max,
    }
    write_output(render_mapping(report, config.format), config.output)
    return EXIT_OK


def cmd_residuals(config: RunConfig) -> int:
    results = run_residual_suite(config)
    write_output(render_mapping(summarize(results), "json"), config.output)
    return EXIT_OK if all(result.passed for result in results) else EXIT_TOLERANCE


def cmd_virial(config: RunConfig) -> int:
    system = kepler_system_from_config(config)
    rows = [virial_balance(system, r) for r in grid_from_config(config)]
    table = [
        (row.r, row.two_kinetic, row.gamma_u, row.scale_term, row.residual)
        for row in rows
    ]
    write_output(render_table(VIRIAL_COLUMNS, table, config.format), config.output)
    worst = max((abs(row.residual) for row in rows), default=0.0)
    if worst >= DEFAULTS.TOLERANCE_VIRIAL:
        logger.warning(
            "virial residual above tolerance",
            extra={"value": worst, "tolerance": DEFAULTS.TOLERANCE_VIRIAL},
        )
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_ei(config: RunConfig, xs: Sequence[float]) -> int:
    table = [(x, exp_integral(x)) for x in xs]
    write_output(render_table(EI_COLUMNS, table, config.format), config.output)
    return EXIT_OK


_COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "rotation-curve": cmd_rotation_curve,
    "ground-state": cmd_ground_state,
    "residuals": cmd_residuals,
    "virial": cmd_virial,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_CONFIG
    _configure_logging(args)

    flags = {name: getattr(args, name) for name in _CONFIG_FIELDS}
    try:
        config = load_run_config(args.config, flags)
        if args.command == "ei":
            return cmd_ei(config, args.x)
        return _COMMANDS[args.command](config)
    except (ConfigError, ScaleDynamicsError) as exc:
        logger.error(
            "invalid configuration", extra={"command": args.command, "error": str(exc)}
        )
        return EXIT_CONFIG
    except OSError as exc:
        logger.error("I/O failure", extra={"command": args.command, "error": str(exc)})
        return EXIT_IO
    except ArithmeticError as exc:
        logger.error(
            "numerical failure", extra={"command": args.command, "error": repr(exc)}
        )
        return EXIT_CONFIG
