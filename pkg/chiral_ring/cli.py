"""
Command-Line Interface
Subcommands: validate, point, sweep, plot-script, compare

Exit codes:
    0  success (validate may print hierarchy warnings)
    2  configuration or input error
    3  solver error
"""
import argparse
import json
import logging
import math
import sys
from dataclasses import replace
from typing import List, Optional

from colorama import Fore, Style, just_fix_windows_console

from chiral_ring import __version__
from chiral_ring.comparison import compare_sweeps
from chiral_ring.config_loader import ConfigLoader
from chiral_ring.config_validator import ConfigValidator
from chiral_ring.errors import (
    AxisMismatch, ChiralRingError, ConfigError, IndexOutOfRange, InvalidParameter,
)
from chiral_ring.model import validate
from chiral_ring.plot_script import write_plot_script
from chiral_ring.sim_logger import logger
from chiral_ring.sweep import SOLVERS, run_sweep, solve_point
from chiral_ring.sweep_io import read_sweep, write_sweep_csv, write_sweep_json

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3

_INPUT_ERRORS = (ConfigError, InvalidParameter, IndexOutOfRange, AxisMismatch)

_STATUS_COLOURS = {'pass': Fore.GREEN, 'warn': Fore.YELLOW, 'skipped': Fore.CYAN}


def _fail(exc: Exception) -> int:
    code = EXIT_INPUT if isinstance(exc, _INPUT_ERRORS) else EXIT_SOLVER
    print(f"{Fore.RED}error:{Style.RESET_ALL} {type(exc).__name__}: {exc}", file=sys.stderr)
    return code


# ============================================
# Subcommands
# ============================================

def cmd_validate(args) -> int:
    """Check the configuration and grade the frequency hierarchy."""
    try:
        run = ConfigLoader(args.config).get_run_config()
        report = validate(run.device)
    except ChiralRingError as exc:
        return _fail(exc)

    print(f"Configuration: {args.config}")
    for check in report.checks:
        colour = _STATUS_COLOURS[check.status]
        ratio = 'n/a' if check.ratio is None else f"{check.ratio:.3g}"
        print(f"  {colour}{check.status.upper():<8}{Style.RESET_ALL}"
              f"{check.name:<32} {ratio:>10}  (>= {check.threshold:g})")
    if report.passed:
        print(f"{Fore.GREEN}Hierarchy satisfied{Style.RESET_ALL}")
    else:
        print(f"{Fore.YELLOW}{len(report.warnings)} hierarchy warning(s){Style.RESET_ALL}")
    return EXIT_OK


def cmd_point(args) -> int:
    """Solve one (ω_d, φ) point and print the result plus JSON."""
    try:
        run = ConfigLoader(args.config).get_run_config()
        validate(run.device)
        drive = run.drive
        drive = drive.with_point(args.omega_d if args.omega_d is not None else drive.omega_d,
                                 args.phi if args.phi is not None else drive.phi)
        point = solve_point(run.device, drive, args.solver or run.sweep.solver)
    except ChiralRingError as exc:
        return _fail(exc)

    scale = 2.0 * run.device.j0 / run.device.n_sites
    print(f"omega_d = {point.omega_d:.10g}, phi = {point.phi:.10g}, solver = {point.solver}")
    print(f"current = {point.current_natural:.6e} (2pi GHz) = {point.current_per_sec:.6e} /s "
          f"({point.current_natural / scale:+.4f} x 2J0/N)")
    print(f"n_ground = {point.n_ground:.6f}")
    for k, value in enumerate(point.n_k):
        print(f"n_k{k} = {value:.6f}")
    print(f"trace_err = {point.trace_err:.2e}, residual = {point.residual:.2e}")

    payload = point.to_dict()
    payload['current_tolerance'] = 1e-3 * scale
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def cmd_sweep(args) -> int:
    """Run a grid sweep and write CSV or JSON."""
    try:
        loader = ConfigLoader(args.config)
        run = loader.get_run_config()
        validate(run.device)
        overrides = {}
        if args.solver:
            overrides['solver'] = args.solver
        if args.threads is not None:
            overrides['workers'] = args.threads
        if args.omega_steps is not None:
            overrides['omega_d_steps'] = args.omega_steps
        if args.phi_steps is not None:
            overrides['phi_steps'] = args.phi_steps
        spec = run.sweep
        if overrides:
            spec = replace(spec, **overrides).validate()
        result = run_sweep(spec)
    except ChiralRingError as exc:
        return _fail(exc)

    out_format = args.format or run.output.format
    out_path = args.out or run.output.path
    try:
        if out_format == 'json':
            written = write_sweep_json(result, out_path)
        else:
            written = write_sweep_csv(result, out_path, precision=run.output.precision)
    except OSError as exc:
        return _fail(ConfigError(f"cannot write sweep file '{out_path}': {exc.strerror or exc}"))
    logger.info(f"Wrote {written}")

    failed = len(result.failed_cells)
    if failed and args.strict:
        print(f"{Fore.RED}error:{Style.RESET_ALL} {failed} cell(s) failed", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_plot_script(args) -> int:
    """Write a matplotlib script for a sweep CSV, optionally with n_k panels."""
    try:
        device, eps_d = None, 0.05
        if args.config:
            run = ConfigLoader(args.config).get_run_config()
            device, eps_d = run.device, run.drive.eps_d
        written = write_plot_script(args.sweep_file, args.out, device, eps_d, args.populations)
    except ChiralRingError as exc:
        return _fail(exc)
    except OSError as exc:
        return _fail(ConfigError(f"cannot write plot script '{args.out}': {exc.strerror or exc}"))
    logger.info(f"Wrote {written}")
    return EXIT_OK


def cmd_compare(args) -> int:
    """Compare the current maps of two sweep files."""
    try:
        first = read_sweep(args.first)
        second = read_sweep(args.second)
        floor = args.floor
        if floor is None and args.config:
            device = ConfigLoader(args.config).get_run_config().device
            floor = 0.01 * 2.0 * device.j0 / device.n_sites
        report = compare_sweeps(first, second, floor=floor)
    except ChiralRingError as exc:
        return _fail(exc)
    summary = report.get_summary()
    summary['clusters'] = [{k: v for k, v in c.items() if k != 'cells'} for c in summary['clusters']]
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


# ============================================
# Parser
# ============================================

def _floor(value: str) -> float:
    number = float(value)
    if math.isnan(number) or number < 0:
        raise argparse.ArgumentTypeError("floor must be >= 0 (inf allowed)")
    return number


def build_parser() -> argparse.ArgumentParser:
    epilog = "configuration keys (YAML sections device, drive, sweep, output):\n" + \
             "\n".join(ConfigValidator().describe())
    parser = argparse.ArgumentParser(
        prog='chiral_ring',
        description='Steady-state chiral current of a driven-dissipative qubit ring.',
        epilog=epilog,
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--verbose', action='store_true', help='debug logging')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('validate', help='validate a configuration file',
                       epilog=epilog, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument('config', help='YAML configuration')
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser('point', help='solve a single (omega_d, phi) point')
    p.add_argument('config', nargs='?', default=None, help='YAML configuration (defaults if omitted)')
    p.add_argument('--omega-d', type=float, default=None, help='drive frequency [2pi GHz]')
    p.add_argument('--phi', type=float, default=None, help='coupler phase [rad]')
    p.add_argument('--solver', choices=SOLVERS, default=None)
    p.set_defaults(handler=cmd_point)

    p = sub.add_parser('sweep', help='sweep the (omega_d, phi) grid')
    p.add_argument('config', nargs='?', default=None, help='YAML configuration (defaults if omitted)')
    p.add_argument('--out', default=None, help='output file (default output.path)')
    p.add_argument('--format', choices=('csv', 'json'), default=None)
    p.add_argument('--solver', choices=SOLVERS, default=None)
    p.add_argument('--threads', type=int, default=None, help='worker processes')
    p.add_argument('--omega-steps', type=int, default=None, help='override sweep.omega_d_steps')
    p.add_argument('--phi-steps', type=int, default=None, help='override sweep.phi_steps')
    p.add_argument('--strict', action='store_true', help='exit 3 if any cell fails')
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser('plot-script', help='write a matplotlib script for a sweep CSV')
    p.add_argument('sweep_file', help='sweep CSV')
    p.add_argument('--out', required=True, help='script path')
    p.add_argument('--config', default=None, help='configuration used for the sweep')
    p.add_argument('--populations', action='store_true',
                   help='add one n_k panel per quasi-momentum')
    p.set_defaults(handler=cmd_plot_script)

    p = sub.add_parser('compare', help='compare the current maps of two sweeps')
    p.add_argument('first', help='sweep file (CSV or JSON)')
    p.add_argument('second', help='sweep file (CSV or JSON)')
    p.add_argument('--floor', type=_floor, default=None,
                   help='minimum |current| counted [2pi GHz] (default 1%% of 2J0/N)')
    p.add_argument('--config', default=None, help='configuration giving J0 for the default floor')
    p.set_defaults(handler=cmd_compare)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    just_fix_windows_console()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    if args.verbose:
        logger.set_level(logging.DEBUG)
    return args.handler(args)
