"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 numerical or grid error,
4 I/O error.
"""
from __future__ import annotations

import argparse
import sys

from . import calibration as cal
from .elements import chirp_factor, collimation_gdd
from .errors import ConfigError, DomainError, NumericalError
from .scenario import parse_scenario, preset_names, run, with_overrides, write_outputs
from .units import ghz

EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 2, 3, 4


def _common(suppress):
    # subcommands repeat the global flags; SUPPRESS keeps their defaults from
    # overwriting values given before the subcommand
    common = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    common.add_argument("--seed", type=int, default=d(None),
                        help="override every seed in the scenario")
    common.add_argument("--out-dir", default=d(None), help="directory for CSV spectra and reports")
    common.add_argument("--grid-points", type=int, default=d(None),
                        help="override the number of time samples")
    common.add_argument("--plot", action="store_true", default=d(False),
                        help="also write spectra.svg")
    common.add_argument("--ideal-lens", action="store_true", default=d(False),
                        help="replace sinusoidal modulators by their quadratic limit")
    common.add_argument("--workers", type=int, default=d(1),
                        help="threads for Monte Carlo blocks (results do not depend on it)")
    return common


def _parser():
    top, common = _common(False), _common(True)
    parser = argparse.ArgumentParser(prog="timelens", parents=[top],
                                     description="Electro-optic time-lens bandwidth compression.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="run a scenario file or preset")
    p.add_argument("config", help="path to a scenario TOML file or a preset name")

    p = sub.add_parser("presets", parents=[common], help="shipped presets")
    p.add_argument("action", choices=["list"])

    p = sub.add_parser("calibrate", parents=[common], help="hardware calibration helpers")
    cal_sub = p.add_subparsers(dest="what", required=True)
    s = cal_sub.add_parser("shear", parents=[common],
                           help="modulation depth from a measured spectral shift")
    s.add_argument("--dlambda", type=float, required=True, help="wavelength shift [nm]")
    s.add_argument("--lambda0", type=float, required=True, help="centre wavelength [nm]")
    s.add_argument("--frf", type=float, required=True, help="RF frequency [GHz]")
    s.add_argument("--beta2", type=float, default=cal.DEFAULT_BETA2,
                   help="fibre dispersion [ps^2/km] for the length estimate")

    p = sub.add_parser("budget", parents=[common], help="transmission of a component chain")
    p.add_argument("catalog", help="catalog TOML file, or 'builtin'")
    p.add_argument("chain", help="e.g. HI-780=256,PM-EOM-830,FC/PC*2")
    return parser


def _cmd_run(args):
    scenario = parse_scenario(args.config)
    scenario = with_overrides(scenario, seed=args.seed, grid_points=args.grid_points,
                              ideal_lens=True if args.ideal_lens else None)
    reports = run(scenario, workers=args.workers)
    for r in reports:
        sys.stdout.write(r.to_text())
    if args.out_dir:
        for path in write_outputs(reports, args.out_dir, plot=args.plot):
            print(f"wrote {path}")
    elif args.plot:
        raise ConfigError("--plot needs --out-dir")


def _cmd_calibrate(args):
    a = cal.modulation_depth_from_shift(args.dlambda, args.lambda0, float(ghz(args.frf)))
    k = chirp_factor(float(ghz(args.frf)), a)
    phi = collimation_gdd(k)
    print(f"modulation depth A     {a:.4f} rad")
    print(f"chirp factor K         {k:.5f} ps^-2")
    print(f"collimation GDD        {phi:.4f} ps^2")
    print(f"fibre length           {cal.fiber_length_for_gdd(phi, args.beta2):.2f} m "
          f"(beta2 = {args.beta2:g} ps^2/km)")


def _cmd_budget(args):
    catalog = cal.load_catalog(None if args.catalog == "builtin" else args.catalog)
    budget = cal.parse_budget_chain(args.chain, catalog)
    for f in budget.fibers:
        print(f"fibre     {f.label:<20}{f.length_m:8.1f} m  {10 ** (-f.loss_db / 10):.4f}")
    for d in budget.devices:
        print(f"device    {d.label:<20}{'':10}{d.transmission:.4f} +- {d.uncertainty:.4f}")
    for c in budget.connectors:
        print(f"connector {c.label:<20}{c.count:8d} x  {10 ** (-c.count * c.loss_db / 10):.4f}")
    eta = cal.total_transmission(budget)
    print(f"total transmission  {eta:.4f} +- {cal.transmission_uncertainty(budget):.4f}")


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            _cmd_run(args)
        elif args.command == "presets":
            for name in preset_names():
                print(name)
        elif args.command == "calibrate":
            _cmd_calibrate(args)
        elif args.command == "budget":
            _cmd_budget(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"invalid parameter: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
