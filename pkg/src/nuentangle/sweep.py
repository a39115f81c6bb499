"""Experiment registry, parameter sweeps and table emitters.

A sweep varies one of ``phi``, ``tau`` or ``t``; a density map varies ``t``
and ``tau`` together.  Grids are split into fixed-size chunks whose layout
does not depend on the number of workers, so serial and threaded runs give
bit-identical tables.
"""

import configparser
import csv
import io
import json
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channels import ChannelKind, apply_channel, check_tau
from .dephasing import DephasingParams, apply_correlated_dephasing
from .errors import ConfigError, DomainError, EmptyResultError
from .measures import MEASURE_ALIASES, MEASURE_COLUMNS, measure_table
from .state import (
    OscillationKinematics,
    build_density_matrix,
    check_mixing_angle,
    check_phase,
    oscillation_phase,
)

CHUNK_SIZE = 64
SIGNIFICANT_DIGITS = 12
SWEEP_VARIABLES = ("phi", "tau", "t")

_KINEMATIC_KEYS = ("delta_m_squared", "baseline", "energy")
_KNOWN_KEYS = {"theta", "phi_override", *_KINEMATIC_KEYS}


@dataclass(frozen=True)
class ExperimentRecord:
    name: str
    theta: float
    delta_m_squared: float | None = None
    baseline: float | None = None
    energy: float | None = None
    phi_override: float | None = None

    @property
    def phi(self):
        if self.phi_override is not None:
            return self.phi_override
        kin = OscillationKinematics(self.delta_m_squared, self.baseline, self.energy)
        return oscillation_phase(kin)


def _locate(text, section, key=None):
    """1-based line number of ``[section]`` or of ``key`` inside it."""
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if key is None and current == section:
                return lineno
        elif current == section and key is not None:
            name = re.split(r"[=:]", line, maxsplit=1)[0].strip().lower()
            if name == key:
                return lineno
    return None


def load_experiments(config_text):
    """Parse an INI-style registry into ``{name: ExperimentRecord}``.

    Each section is one experiment with keys ``theta`` [rad],
    ``delta_m_squared`` [eV^2], ``baseline`` [km], ``energy`` [GeV] and an
    optional ``phi_override`` [rad] that replaces the computed phase.  The
    kinematic keys may be left out when ``phi_override`` is given.
    """
    parser = configparser.ConfigParser(
        interpolation=None, strict=True, inline_comment_prefixes=("#", ";")
    )
    try:
        parser.read_string(config_text)
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate experiment {exc.section!r}", exc.lineno) from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(
            f"duplicate key {exc.option!r} in experiment {exc.section!r}", exc.lineno
        ) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("key outside of an [experiment] section", exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError("malformed line", lineno) from None

    registry = {}
    for name in parser.sections():
        if not name.strip():
            raise ConfigError("experiment name must be non-empty", _locate(config_text, name))
        section = parser[name]
        unknown = set(section) - _KNOWN_KEYS
        if unknown:
            key = sorted(unknown)[0]
            raise ConfigError(f"unknown key {key!r} in {name!r}", _locate(config_text, name, key))

        values = {}
        for key in section:
            try:
                values[key] = parse_number(section[key])
            except ConfigError:
                raise ConfigError(
                    f"malformed number {section[key]!r} for {key!r} in {name!r}",
                    _locate(config_text, name, key),
                ) from None

        required = ["theta"]
        if "phi_override" not in values:
            required += list(_KINEMATIC_KEYS)
        for key in required:
            if key not in values:
                raise ConfigError(
                    f"experiment {name!r} is missing required field {key!r}",
                    _locate(config_text, name),
                )

        record = ExperimentRecord(name=name, **values)
        try:
            check_mixing_angle(record.theta)
            if record.phi_override is not None:
                check_phase(record.phi_override)
            if "baseline" in values or "energy" in values or "delta_m_squared" in values:
                OscillationKinematics(
                    record.delta_m_squared if record.delta_m_squared is not None else 0.0,
                    record.baseline if record.baseline is not None else 1.0,
                    record.energy if record.energy is not None else 1.0,
                )
        except DomainError as exc:
            raise ConfigError(f"experiment {name!r}: {exc}", _locate(config_text, name)) from None
        registry[name] = record
    return registry


def parse_number(text):
    """Float, optionally written with ``pi`` (``pi``, ``pi/2``, ``3*pi/4``, ``-pi``)."""
    text = text.strip().replace(" ", "")
    try:
        return float(text)
    except ValueError:
        pass
    m = re.fullmatch(r"([+-]?[0-9.eE+-]*?)\*?pi(?:/([0-9.eE+-]+))?", text)
    if not m:
        raise ConfigError(f"cannot parse number {text!r}")
    coef, denom = m.groups()
    try:
        c = {"": 1.0, "+": 1.0, "-": -1.0}.get(coef)
        c = float(coef) if c is None else c
        d = float(denom) if denom else 1.0
    except ValueError:
        raise ConfigError(f"cannot parse number {text!r}") from None
    return c * math.pi / d


def parse_grid(text):
    """``start:stop:count`` -> ``(start, stop, count)``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must look like start:stop:count, got {text!r}")
    start, stop = parse_number(parts[0]), parse_number(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise ConfigError(f"grid count must be an integer, got {parts[2]!r}") from None
    return check_grid((start, stop, count))


def check_grid(grid):
    start, stop, count = grid
    if count < 2:
        raise ConfigError(f"grid needs at least 2 points, got {count}")
    if not start < stop:
        raise ConfigError(f"grid start must be below stop, got {start} >= {stop}")
    return float(start), float(stop), int(count)


def grid_values(grid):
    start, stop, count = check_grid(grid)
    return np.linspace(start, stop, count)


@dataclass
class SweepConfig:
    """What to sweep and at which fixed parameters.

    The oscillation state comes from a registry ``experiment`` or from inline
    ``theta`` plus either ``phi`` or the three kinematic values; an explicit
    ``phi`` wins over the experiment's phase.
    """

    variable: str = "phi"
    grid: tuple = (0.0, math.pi, 101)
    experiment: str | None = None
    theta: float | None = None
    phi: float | None = None
    delta_m_squared: float | None = None
    baseline: float | None = None
    energy: float | None = None
    channel: str | None = None
    tau: float | None = None
    t: float | None = None
    chi: float | None = None
    mu: float | None = None
    measures: tuple = field(default=MEASURE_COLUMNS)

    def validate(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(f"variable must be one of {SWEEP_VARIABLES}, got {self.variable!r}")
        check_grid(self.grid)
        if self.variable in ("tau", "t") and self.channel is None:
            raise ConfigError(f"a channel is required when sweeping {self.variable}")
        if self.channel is not None:
            ChannelKind.parse(self.channel)
        if self.variable == "t" and (self.chi is None or self.mu is None):
            raise ConfigError("sweeping t needs both chi and mu")
        if (self.chi is None) != (self.mu is None):
            raise ConfigError("chi and mu must be given together")
        return self

    def columns(self):
        try:
            return tuple(dict.fromkeys(MEASURE_ALIASES[m] for m in self.measures))
        except KeyError as exc:
            raise ConfigError(f"unknown measure {exc.args[0]!r}") from None

    def dephasing(self):
        if self.chi is None:
            return None
        return DephasingParams(self.chi, self.mu)


def resolve_state(cfg, registry=None):
    """Mixing angle and oscillation phase for a sweep configuration."""
    theta, phi = cfg.theta, cfg.phi
    if cfg.experiment is not None:
        if not registry or cfg.experiment not in registry:
            raise ConfigError(f"unknown experiment {cfg.experiment!r}")
        record = registry[cfg.experiment]
        theta = record.theta if theta is None else theta
        phi = record.phi if phi is None else phi
    if theta is None:
        raise ConfigError("no mixing angle: give an experiment or theta")
    if phi is None:
        kin = (cfg.delta_m_squared, cfg.baseline, cfg.energy)
        if any(v is None for v in kin):
            if cfg.variable == "phi":
                phi = 0.0  # replaced by the grid
            else:
                raise ConfigError("no phase: give phi, an experiment, or dm2/baseline/energy")
        else:
            phi = oscillation_phase(OscillationKinematics(*kin))
    check_mixing_angle(theta)
    check_phase(phi)
    return float(theta), float(phi)


def evaluate(theta, phi, channel=None, tau=0.0, t=0.0, params=None, columns=MEASURE_COLUMNS):
    """Measures for broadcastable arrays of ``theta, phi, tau, t``."""
    rho = build_density_matrix(theta, phi)
    if channel is not None:
        rho = apply_channel(rho, channel, tau)
    if params is not None:
        rho = apply_correlated_dephasing(rho, t, params)
    return measure_table(rho, columns)


def _chunks(n):
    return [slice(i, min(i + CHUNK_SIZE, n)) for i in range(0, n, CHUNK_SIZE)]


def _run_ordered(func, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]


def run_sweep(cfg, registry=None, workers=1):
    """Rows ``{variable: value, measure: value, ...}`` in ascending grid order."""
    cfg.validate()
    theta, phi = resolve_state(cfg, registry)
    columns = cfg.columns()
    params = cfg.dephasing()
    values = grid_values(cfg.grid)
    if cfg.variable == "tau":
        check_tau(values)
    elif np.any(values < 0):
        raise DomainError(f"{cfg.variable} grid must be non-negative")

    fixed = {
        "phi": phi,
        "tau": 0.0 if cfg.tau is None else cfg.tau,
        "t": 0.0 if cfg.t is None else cfg.t,
    }
    check_tau(fixed["tau"])

    def work(sl):
        args = dict(fixed)
        args[cfg.variable] = values[sl]
        return evaluate(theta, args["phi"], cfg.channel, args["tau"], args["t"], params, columns)

    parts = _run_ordered(work, _chunks(len(values)), workers)
    rows = []
    for sl, table in zip(_chunks(len(values)), parts):
        for k, v in enumerate(values[sl]):
            row = {cfg.variable: float(v)}
            row.update({c: float(table[c][k]) for c in columns})
            rows.append(row)
    return rows


def run_density_map(cfg, t_grid, tau_grid, registry=None, workers=1):
    """Rows over the ``t x tau`` grid, ``t`` outer and ``tau`` inner."""
    if cfg.channel is None:
        raise ConfigError("a density map needs a channel")
    if cfg.chi is None or cfg.mu is None:
        raise ConfigError("a density map needs chi and mu")
    ChannelKind.parse(cfg.channel)
    theta, phi = resolve_state(SweepConfig(**{**cfg.__dict__, "variable": "tau"}), registry)
    columns = cfg.columns()
    params = cfg.dephasing()
    t_values = grid_values(t_grid)
    tau_values = check_tau(grid_values(tau_grid))

    def work(t):
        return evaluate(theta, phi, cfg.channel, tau_values, t, params, columns)

    parts = _run_ordered(work, list(t_values), workers)
    rows = []
    for t, table in zip(t_values, parts):
        for k, tau in enumerate(tau_values):
            row = {"t": float(t), "tau": float(tau)}
            row.update({c: float(table[c][k]) for c in columns})
            rows.append(row)
    return rows


def _fmt(value):
    if isinstance(value, str):
        return value
    if value is None:
        return ""
    return format(float(value) + 0.0, f".{SIGNIFICANT_DIGITS}g")


def emit_csv(rows):
    if not rows:
        raise EmptyResultError("no rows to emit")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0])
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in header])
    return buf.getvalue()


def emit_json(rows):
    if not rows:
        raise EmptyResultError("no rows to emit")

    def convert(value):
        if isinstance(value, str) or value is None:
            return value
        return float(_fmt(value))

    payload = [{k: convert(v) for k, v in row.items()} for row in rows]
    return json.dumps(payload, indent=2) + "\n"
