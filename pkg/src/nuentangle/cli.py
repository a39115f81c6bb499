"""Command line entry point: ``nuentangle {measures,sweep,map,experiments}``.

Exit codes: 0 success, 2 configuration or parse error, 3 out-of-range parameter.
"""

import argparse
import logging
import sys
from importlib import resources
from pathlib import Path

from .errors import ConfigError, DomainError, EmptyResultError, StructureError
from .measures import MEASURE_COLUMNS
from .sweep import (
    SweepConfig,
    emit_csv,
    emit_json,
    evaluate,
    load_experiments,
    parse_grid,
    parse_number,
    resolve_state,
    run_density_map,
    run_sweep,
)

log = logging.getLogger("nuentangle")

DEFAULT_CONFIG = "experiments.conf"
EXIT_CONFIG = 2
EXIT_DOMAIN = 3


def _number(text):
    try:
        return parse_number(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _state_args(p):
    g = p.add_argument_group("oscillation state")
    g.add_argument("--experiment", help="name of a registry entry")
    g.add_argument("--theta", type=_number, help="mixing angle [rad]")
    g.add_argument("--dm2", type=_number, help="mass-squared splitting [eV^2]")
    g.add_argument("--baseline", type=_number, help="baseline [km]")
    g.add_argument("--energy", type=_number, help="neutrino energy [GeV]")
    g.add_argument("--phi", type=_number, help="oscillation phase [rad], overrides the kinematics")
    g.add_argument("--config", default=DEFAULT_CONFIG, help="experiment registry file")


def _noise_args(p):
    g = p.add_argument_group("noise")
    g.add_argument("--channel", choices=["ad", "pf", "pd"], type=str.lower)
    g.add_argument("--tau", type=_number, help="channel strength in [0, 1]")
    g.add_argument("--t", type=_number, help="dephasing time")
    g.add_argument("--chi", type=_number, help="environmental correlation time")
    g.add_argument("--mu", type=_number, help="classical correlation of the two dephasing channels")


def _output_args(p):
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=["csv", "json"], default="csv")
    g.add_argument("--output", "-o", help="output file (default: stdout)")
    g.add_argument(
        "--measures",
        default=",".join(MEASURE_COLUMNS),
        help="comma-separated measure columns",
    )
    g.add_argument("--workers", type=int, default=1, help="threads for grid evaluation")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nuentangle",
        description="Quantum resources of two-flavor neutrino oscillations under noise.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measures", help="resource measures at a single point")
    _state_args(p)
    _noise_args(p)
    _output_args(p)

    p = sub.add_parser("sweep", help="1-D sweep over phi, tau or t")
    _state_args(p)
    _noise_args(p)
    _output_args(p)
    p.add_argument("--variable", choices=["phi", "tau", "t"], help="swept variable")
    p.add_argument(
        "--grid",
        required=True,
        help="start:stop:count, optionally prefixed with the variable (tau=0:1:101)",
    )

    p = sub.add_parser("map", help="2-D density map over t and tau")
    _state_args(p)
    _noise_args(p)
    _output_args(p)
    p.add_argument(
        "--grid",
        action="append",
        required=True,
        help="t=start:stop:count and tau=start:stop:count (give both)",
    )

    p = sub.add_parser("experiments", help="registry operations")
    esub = p.add_subparsers(dest="action", required=True)
    p = esub.add_parser("list", help="list registry entries")
    p.add_argument("--config", default=DEFAULT_CONFIG)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", "-o")
    return parser


def read_registry(path):
    """Load the registry; the default name falls back to the bundled file."""
    p = Path(path)
    if p.exists():
        text = p.read_text()
    elif path == DEFAULT_CONFIG:
        text = resources.files("nuentangle").joinpath("data").joinpath(DEFAULT_CONFIG).read_text()
    else:
        raise ConfigError(f"config file not found: {path}")
    return load_experiments(text)


def _config_from_args(args, registry):
    cfg = SweepConfig(
        experiment=args.experiment,
        theta=args.theta,
        phi=args.phi,
        delta_m_squared=args.dm2,
        baseline=args.baseline,
        energy=args.energy,
        channel=args.channel,
        tau=args.tau,
        t=args.t,
        chi=args.chi,
        mu=args.mu,
        measures=tuple(m.strip() for m in args.measures.split(",") if m.strip()),
    )
    cfg.columns()
    return cfg


def _split_grid(text):
    if "=" in text:
        name, spec = text.split("=", 1)
        return name.strip(), parse_grid(spec)
    return None, parse_grid(text)


def cmd_measures(args, registry):
    cfg = _config_from_args(args, registry)
    cfg.variable = "tau"  # state must be fully specified
    if (cfg.chi is None) != (cfg.mu is None):
        raise ConfigError("chi and mu must be given together")
    theta, phi = resolve_state(cfg, registry)
    tau = 0.0 if cfg.tau is None else cfg.tau
    t = 0.0 if cfg.t is None else cfg.t
    table = evaluate(theta, phi, cfg.channel, tau, t, cfg.dephasing(), cfg.columns())
    row = {"theta": theta, "phi": phi}
    if cfg.channel is not None:
        row["tau"] = tau
    if cfg.chi is not None:
        row["t"] = t
    row.update({k: float(v) for k, v in table.items()})
    return [row]


def cmd_sweep(args, registry):
    cfg = _config_from_args(args, registry)
    name, grid = _split_grid(args.grid)
    variable = args.variable or name or "phi"
    if name is not None and args.variable is not None and name != args.variable:
        raise ConfigError(f"--grid names {name!r} but --variable is {args.variable!r}")
    cfg.variable = variable
    cfg.grid = grid
    return run_sweep(cfg, registry, workers=args.workers)


def cmd_map(args, registry):
    cfg = _config_from_args(args, registry)
    grids = dict(_split_grid(g) for g in args.grid)
    if set(grids) != {"t", "tau"}:
        raise ConfigError("map needs --grid t=start:stop:count and --grid tau=start:stop:count")
    return run_density_map(cfg, grids["t"], grids["tau"], registry, workers=args.workers)


def cmd_experiments(args, registry):
    rows = []
    for rec in registry.values():
        rows.append(
            {
                "name": rec.name,
                "theta": rec.theta,
                "delta_m_squared": rec.delta_m_squared,
                "baseline": rec.baseline,
                "energy": rec.energy,
                "phi": rec.phi,
            }
        )
    return rows


COMMANDS = {
    "measures": cmd_measures,
    "sweep": cmd_sweep,
    "map": cmd_map,
    "experiments": cmd_experiments,
}


def _write(text, output):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        registry = read_registry(args.config)
        rows = COMMANDS[args.command](args, registry)
        if args.command == "experiments" and not rows:
            log.warning("registry %s has no entries", args.config)
            header = "name,theta,delta_m_squared,baseline,energy,phi\n"
            _write(header if args.format == "csv" else "[]\n", args.output)
            return 0
        emit = emit_json if args.format == "json" else emit_csv
        _write(emit(rows), args.output)
    except (ConfigError, EmptyResultError) as exc:
        print(f"nuentangle: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, StructureError) as exc:
        print(f"nuentangle: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":
    sys.exit(main())
