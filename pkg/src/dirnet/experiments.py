"""Experiment specifications, grid runs and CSV emission.

An experiment is a Cartesian grid over named axes. Every grid point fixes a
full set of system parameters, antenna patterns and a tagged link, and
produces an analytic value, a Monte Carlo estimate, or both. Grid points that
differ only in the tagged link share the same simulated realizations.

Configuration files are YAML::

    kind: connection-vs-distance
    output: aligned.csv
    params: {gamma: 0.3, eta: 4}
    antenna: {d: 1, n: 2}
    link: {phi: 180deg}
    simulation: {trials: 30000, seed: 7}
    sweep:
      d: [0, 0.5, 1]
      t: {start: 0.02, stop: 1.0, step: 0.02}

Angles are radians unless written with a ``deg`` suffix.
"""
from __future__ import annotations

import copy
import csv
import itertools
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import analytic, kernels, montecarlo
from .errors import ConfigError, DomainError
from .model import AntennaPattern, LinkGeometry, SystemParams
from .montecarlo import SimulationConfig

log = logging.getLogger(__name__)

KIND_METRIC = {
    "wp-curve": "wp",
    "connection-vs-distance": "connection",
    "connection-vs-orientation": "connection",
    "rate-vs-distance": "rate",
    "rate-vs-orientation": "rate",
    "degree-vs-density": "degree",
    "sweep": None,
}
KIND_AXIS = {
    "wp-curve": "d",
    "connection-vs-distance": "t",
    "connection-vs-orientation": "phi",
    "rate-vs-distance": "t",
    "rate-vs-orientation": "phi",
    "degree-vs-density": "density",
}
METRICS = ("wp", "connection", "rate", "degree")

PARAM_KEYS = tuple(SystemParams.__dataclass_fields__)
LINK_KEYS = ("t", "theta", "phi")
ANGLE_KEYS = ("theta", "phi")
AXES = PARAM_KEYS + ("d", "n", "rx_d", "rx_n") + LINK_KEYS
METRIC_AXES = {
    "wp": ("eta", "d"),
    "connection": AXES,
    "rate": AXES,
    "degree": PARAM_KEYS + ("d", "n", "rx_d", "rx_n"),
}
SIM_KEYS = ("radius", "trials", "seed", "workers", "fading")
TOP_KEYS = ("kind", "output", "metric", "analytic", "monte_carlo", "tolerance_k",
            "params", "antenna", "rx_antenna", "link", "simulation", "sweep")
SECTION_KEYS = {
    "params": PARAM_KEYS,
    "antenna": ("d", "n"),
    "rx_antenna": ("d", "n"),
    "link": LINK_KEYS,
    "simulation": SIM_KEYS,
}
# Floor added to the comparison tolerance so exact agreement with zero spread passes.
_ABS_FLOOR = 1e-9


def default_params() -> SystemParams:
    """Reference operating point: unit power, noise, density and threshold."""
    return SystemParams(power=1.0, noise=1.0, threshold=1.0, gamma=0.3,
                        eta=4.0, epsilon=0.0, density=1.0)


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    output: str
    sweep_axes: tuple = ()
    simulation: SimulationConfig = field(default_factory=lambda: SimulationConfig(default_params()))
    link: LinkGeometry = field(default_factory=lambda: LinkGeometry(0.4))
    include_analytic: bool = True
    include_monte_carlo: bool = True
    metric: str | None = None
    tolerance_k: float = 4.0

    def __post_init__(self):
        if self.kind not in KIND_METRIC:
            raise ConfigError(f"kind must be one of {sorted(KIND_METRIC)}", "kind")
        if self.metric is None:
            object.__setattr__(self, "metric", KIND_METRIC[self.kind] or "connection")
        if self.metric not in METRICS:
            raise ConfigError(f"metric must be one of {list(METRICS)}", "metric")
        if KIND_METRIC[self.kind] not in (None, self.metric):
            raise ConfigError(f"kind {self.kind} implies metric {KIND_METRIC[self.kind]}", "metric")
        if not (self.include_analytic or self.include_monte_carlo):
            raise ConfigError("at least one of analytic and monte_carlo must be true", "analytic")
        if self.metric == "wp" and self.include_monte_carlo:
            raise ConfigError("the gain integral has no Monte Carlo estimator", "monte_carlo")
        if not (math.isfinite(self.tolerance_k) and self.tolerance_k > 0):
            raise ConfigError("tolerance_k must be positive", "tolerance_k")
        names = [name for name, _ in self.sweep_axes]
        if len(set(names)) != len(names):
            raise ConfigError("sweep axes must be distinct", "sweep")
        for name, values in self.sweep_axes:
            if name not in METRIC_AXES[self.metric]:
                raise ConfigError(f"axis {name} cannot be swept for metric {self.metric}",
                                  f"sweep.{name}")
            if not values:
                raise ConfigError(f"sweep axis {name} is empty", f"sweep.{name}")
            if not all(math.isfinite(v) for v in values):
                raise ConfigError(f"sweep axis {name} has non-finite values", f"sweep.{name}")
        required = KIND_AXIS.get(self.kind)
        if required and required not in names:
            raise ConfigError(f"kind {self.kind} requires a sweep over {required}", "sweep")

    @property
    def axis_names(self) -> tuple:
        return tuple(name for name, _ in self.sweep_axes)

    def grid(self) -> list[dict]:
        names = self.axis_names
        values = [vals for _, vals in self.sweep_axes]
        return [dict(zip(names, combo)) for combo in itertools.product(*values)]

    def resolve(self, point: dict):
        """Parameters, patterns and link of one grid point."""
        sim = self.simulation
        param_changes = {k: v for k, v in point.items() if k in PARAM_KEYS}
        params = sim.params.replace(**param_changes) if param_changes else sim.params
        tx = sim.tx_pattern
        if "d" in point or "n" in point:
            tx = AntennaPattern(point.get("d", tx.d), _as_int(point.get("n", tx.n), "n"))
        rx = sim.rx_pattern
        if "rx_d" in point or "rx_n" in point:
            base = rx if rx is not None else tx
            rx = AntennaPattern(point.get("rx_d", base.d), _as_int(point.get("rx_n", base.n), "rx_n"))
        link = self.link
        if any(k in point for k in LINK_KEYS):
            link = LinkGeometry(point.get("t", link.distance), point.get("theta", link.angle),
                                point.get("phi", link.orientation))
        return params, tx, rx, link


def _as_int(value, name):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return int(value)
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise DomainError(f"{name} must be a positive integer", name)


# ---------------------------------------------------------------- parsing

def _line_map(node, path=(), out=None):
    out = {} if out is None else out
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            sub = path + (str(key.value),)
            out[sub] = key.start_mark.line + 1
            _line_map(value, sub, out)
    elif isinstance(node, yaml.SequenceNode):
        for i, value in enumerate(node.value):
            out[path + (i,)] = value.start_mark.line + 1
    return out


def _parse_angle(value, where, line):
    if isinstance(value, str):
        text = value.strip()
        if text.endswith("deg"):
            try:
                return math.radians(float(text[:-3]))
            except ValueError:
                pass
        raise ConfigError(f"{where} must be a number (radians) or '<number>deg'", where, line)
    return _number(value, where, line)


def _number(value, where, line):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number", where, line)
    if not math.isfinite(value):
        raise ConfigError(f"{where} must be finite", where, line)
    return value


def _axis_value(name, value, where, line):
    if name in ANGLE_KEYS:
        return float(_parse_angle(value, where, line))
    value = _number(value, where, line)
    if name in ("n", "rx_n"):
        if not float(value).is_integer():
            raise ConfigError(f"{where} must be an integer", where, line)
        return int(value)
    return float(value)


def _axis_values(name, raw, lines):
    where = f"sweep.{name}"
    line = lines.get(("sweep", name))
    if isinstance(raw, dict):
        unknown = set(raw) - {"start", "stop", "step"}
        if unknown or set(raw) != {"start", "stop", "step"}:
            raise ConfigError(f"{where} range needs exactly start, stop and step", where, line)
        start, stop, step = (_axis_value(name, raw[k], f"{where}.{k}",
                                         lines.get(("sweep", name, k), line))
                             for k in ("start", "stop", "step"))
        if not step > 0 or stop < start:
            raise ConfigError(f"{where} needs step > 0 and stop >= start", where, line)
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = [round(start + k * step, 12) for k in range(count)]
        if name in ("n", "rx_n"):
            values = [int(v) for v in values]
        return tuple(values)
    if not isinstance(raw, list):
        raw = [raw]
    return tuple(_axis_value(name, v, f"{where}[{i}]", lines.get(("sweep", name, i), line))
                 for i, v in enumerate(raw))


def _section(data, name, lines):
    raw = data.get(name, {})
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{name} must be a mapping", name, lines.get((name,)))
    allowed = SECTION_KEYS[name]
    for key in raw:
        if key not in allowed:
            raise ConfigError(f"unknown key {name}.{key}", f"{name}.{key}",
                              lines.get((name, str(key))))
    return raw


def _bool(data, key, default, lines):
    value = data.get(key, default)
    if not isinstance(value, bool):
        raise ConfigError(f"{key} must be true or false", key, lines.get((key,)))
    return value


def spec_from_mapping(data, lines=None) -> ExperimentSpec:
    """Validate a configuration mapping; ``lines`` maps key paths to line numbers."""
    lines = lines or {}
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping", None, 1)
    for key in data:
        if key not in TOP_KEYS:
            raise ConfigError(f"unknown key {key}", str(key), lines.get((str(key),)))
    for key in ("kind", "output"):
        if key not in data:
            raise ConfigError(f"missing required key {key}", key)
        if not isinstance(data[key], str) or not data[key]:
            raise ConfigError(f"{key} must be a non-empty string", key, lines.get((key,)))

    def fail(exc, section, key_map=None):
        name = exc.field if exc.field else None
        if key_map and name in key_map:
            name = key_map[name]
        where = f"{section}.{name}" if name else section
        return ConfigError(str(exc), where, lines.get((section, name), lines.get((section,))))

    params_raw = _section(data, "params", lines)
    values = {}
    for k, v in params_raw.items():
        values[k] = _number(v, f"params.{k}", lines.get(("params", k)))
    try:
        params = default_params().replace(**values)
    except DomainError as exc:
        raise fail(exc, "params") from None

    def pattern(section):
        raw = _section(data, section, lines)
        for k, v in raw.items():
            _number(v, f"{section}.{k}", lines.get((section, k)))
        try:
            return AntennaPattern(raw.get("d", 0.0), _as_int(raw.get("n", 1), "n"))
        except DomainError as exc:
            raise fail(exc, section) from None

    tx = pattern("antenna")
    rx = pattern("rx_antenna") if "rx_antenna" in data else None

    link_raw = _section(data, "link", lines)
    t = _number(link_raw.get("t", 0.4), "link.t", lines.get(("link", "t")))
    theta = _parse_angle(link_raw.get("theta", 0.0), "link.theta", lines.get(("link", "theta")))
    phi = _parse_angle(link_raw.get("phi", math.pi), "link.phi", lines.get(("link", "phi")))
    try:
        link = LinkGeometry(float(t), float(theta), float(phi))
    except DomainError as exc:
        raise fail(exc, "link", {"distance": "t", "angle": "theta"}) from None

    sim_raw = _section(data, "simulation", lines)
    sim_values = {}
    for k, v in sim_raw.items():
        line = lines.get(("simulation", k))
        if k == "fading":
            if not isinstance(v, str):
                raise ConfigError("simulation.fading must be a string", "simulation.fading", line)
            sim_values[k] = v
        elif k == "workers" and v is None:
            sim_values[k] = None
        else:
            v = _number(v, f"simulation.{k}", line)
            if k in ("trials", "seed", "workers"):
                if not float(v).is_integer():
                    raise ConfigError(f"simulation.{k} must be an integer", f"simulation.{k}", line)
                v = int(v)
            else:
                v = float(v)
            sim_values[k] = v
    try:
        sim = SimulationConfig(params=params, tx_pattern=tx, rx_pattern=rx, **sim_values)
    except DomainError as exc:
        raise fail(exc, "simulation") from None

    sweep_raw = data.get("sweep", {}) or {}
    if not isinstance(sweep_raw, dict):
        raise ConfigError("sweep must be a mapping of axis to values", "sweep", lines.get(("sweep",)))
    axes = []
    for name, raw in sweep_raw.items():
        if name not in AXES:
            raise ConfigError(f"unknown sweep axis {name}", f"sweep.{name}",
                              lines.get(("sweep", str(name))))
        axes.append((name, _axis_values(name, raw, lines)))

    metric = data.get("metric")
    if metric is not None and not isinstance(metric, str):
        raise ConfigError("metric must be a string", "metric", lines.get(("metric",)))
    k = _number(data.get("tolerance_k", 4.0), "tolerance_k", lines.get(("tolerance_k",)))
    try:
        spec = ExperimentSpec(
            kind=data["kind"], output=data["output"], sweep_axes=tuple(axes),
            simulation=sim, link=link,
            include_analytic=_bool(data, "analytic", True, lines),
            include_monte_carlo=_bool(data, "monte_carlo", data["kind"] != "wp-curve", lines),
            metric=metric, tolerance_k=float(k))
    except ConfigError as exc:
        exc.line = exc.line or lines.get(tuple(str(exc.field).split(".")[:2]))
        raise
    validate_grid(spec, lines)
    return spec


def validate_grid(spec: ExperimentSpec, lines=None):
    """Resolve every grid point so invalid combinations fail before any work."""
    lines = lines or {}
    for point in spec.grid():
        try:
            params, tx, rx, link = spec.resolve(point)
        except DomainError as exc:
            name = exc.field or ""
            key = {"distance": "t", "angle": "theta"}.get(name, name)
            where = f"sweep.{key}" if key in point else key
            raise ConfigError(str(exc), where, lines.get(("sweep", key))) from None
        if spec.metric in ("connection", "rate"):
            where = "sweep.t" if "t" in point else "link.t"
            if spec.include_monte_carlo and link.distance >= spec.simulation.radius:
                raise ConfigError("t must be smaller than simulation.radius", where)
            if link.distance == 0 and params.epsilon == 0:
                raise ConfigError("t = 0 with epsilon = 0 is singular", where)


def parse_text(text: str) -> ExperimentSpec:
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError(f"YAML parse error: {getattr(exc, 'problem', exc)}", None, line) from None
    if data is None:
        raise ConfigError("configuration is empty", None, 1)
    return spec_from_mapping(data, _line_map(node))


def parse_config(path) -> ExperimentSpec:
    """Read and validate a YAML experiment configuration."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}", "config") from None
    return parse_text(text)


def spec_to_mapping(spec: ExperimentSpec) -> dict:
    sim = spec.simulation
    out = {
        "kind": spec.kind,
        "output": spec.output,
        "metric": spec.metric,
        "analytic": spec.include_analytic,
        "monte_carlo": spec.include_monte_carlo,
        "tolerance_k": spec.tolerance_k,
        "params": {k: float(getattr(sim.params, k)) for k in PARAM_KEYS},
        "antenna": {"d": float(sim.tx_pattern.d), "n": int(sim.tx_pattern.n)},
        "link": {"t": float(spec.link.distance), "theta": float(spec.link.angle),
                 "phi": float(spec.link.orientation)},
        "simulation": {"radius": float(sim.radius), "trials": sim.trials, "seed": sim.seed,
                       "workers": sim.workers, "fading": sim.fading},
        "sweep": {name: list(values) for name, values in spec.sweep_axes},
    }
    if sim.rx_pattern is not None:
        out["rx_antenna"] = {"d": float(sim.rx_pattern.d), "n": int(sim.rx_pattern.n)}
    return out


def serialize(spec: ExperimentSpec) -> str:
    """YAML text that parses back to an identical spec."""
    return yaml.safe_dump(spec_to_mapping(spec), sort_keys=False, default_flow_style=None)


# ---------------------------------------------------------------- running

@dataclass(frozen=True)
class AgreementSummary:
    k: float
    compared: int
    violations: tuple

    @property
    def passed(self) -> bool:
        return not self.violations

    def footer(self) -> str:
        if not self.compared:
            return "agreement: no rows with both analytic and Monte Carlo values"
        text = (f"agreement: {self.compared - len(self.violations)}/{self.compared} rows "
                f"within {self.k:g} std_error")
        if self.violations:
            text += "; violations at rows " + ", ".join(str(i) for i in self.violations)
        return text


@dataclass(frozen=True, eq=False)
class ResultTable:
    columns: tuple
    rows: list
    summary: AgreementSummary

    def column(self, name) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def _analytic_value(metric, params, tx, rx, link):
    if metric == "wp":
        return analytic.wp(params.eta, tx.d)
    if metric == "connection":
        return analytic.connection_probability(params, link, tx, rx)
    if metric == "rate":
        return analytic.data_rate(params, link, tx, rx)
    rx_d = None if rx is None else rx.d
    if params.eta == 4 and params.epsilon == 0 and params.gamma > 0:
        return analytic.mean_degree_closed_form(params, tx.d, rx_d)
    return analytic.mean_degree_numeric(params, tx, rx)


def _monte_carlo(spec, resolved):
    """Estimates per grid point, simulating once per distinct network setup."""
    groups = {}
    for i, (params, tx, rx, link) in enumerate(resolved):
        groups.setdefault((params, tx, rx), []).append(i)
    out = [None] * len(resolved)
    for (params, tx, rx), members in groups.items():
        config = spec.simulation.replace(params=params, tx_pattern=tx, rx_pattern=rx)
        log.info("simulating %d trials for %s", config.trials, params)
        if spec.metric == "degree":
            stats = montecarlo.degree_statistics(config)
            for i in members:
                out[i] = (stats.count, stats.fraction)
            continue
        samples = montecarlo.sample_interference(config)
        links = [resolved[i][3] for i in members]
        estimator = (montecarlo.connection_from_samples if spec.metric == "connection"
                     else montecarlo.rate_from_samples)
        for i, est in zip(members, estimator(samples, config, links)):
            out[i] = (est, None)
    return out


def _comparison_se(metric, value, est):
    se = est.std_error
    if metric == "connection":
        # binomial spread at the predicted value, so a degenerate 0 or 1 estimate is not exempt
        p = min(max(value, 0.0), 1.0)
        se = max(se, math.sqrt(p * (1.0 - p) / est.trials_used))
    return se


def run_experiment(spec: ExperimentSpec, write: bool = True) -> ResultTable:
    """Evaluate every grid point; optionally write the CSV and metadata files."""
    points = spec.grid()
    resolved = [spec.resolve(p) for p in points]
    analytic_values = ([_analytic_value(spec.metric, *r) for r in resolved]
                       if spec.include_analytic else None)
    mc_values = _monte_carlo(spec, resolved) if spec.include_monte_carlo else None

    columns = list(spec.axis_names)
    if spec.include_analytic:
        columns.append("analytic")
    if spec.include_monte_carlo:
        columns += ["mc", "std_error", "trials"]
        if spec.metric == "degree":
            columns += ["mc_fraction", "mc_fraction_std_error"]
    both = spec.include_analytic and spec.include_monte_carlo
    if both:
        columns.append("within_k")

    rows, violations = [], []
    for i, point in enumerate(points):
        row = [point[name] for name in spec.axis_names]
        if spec.include_analytic:
            row.append(float(analytic_values[i]))
        if spec.include_monte_carlo:
            est, frac = mc_values[i]
            row += [est.estimate, est.std_error, est.trials_used]
            if spec.metric == "degree":
                row += [frac.estimate, frac.std_error]
        if both:
            se = _comparison_se(spec.metric, analytic_values[i], est)
            ok = abs(analytic_values[i] - est.estimate) <= spec.tolerance_k * se + _ABS_FLOOR
            row.append(ok)
            if not ok:
                violations.append(i)
        rows.append(tuple(row))
    summary = AgreementSummary(spec.tolerance_k, len(rows) if both else 0, tuple(violations))
    table = ResultTable(tuple(columns), rows, summary)
    if write:
        write_csv(table, spec.output)
        write_metadata(spec, table, metadata_path(spec.output))
    return table


def _cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(table: ResultTable, path):
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_cell(v) for v in row])


def metadata_path(output) -> Path:
    return Path(output).with_suffix(".meta.yaml")


def write_metadata(spec: ExperimentSpec, table: ResultTable, path):
    from . import __version__
    meta = {
        "spec": spec_to_mapping(spec),
        "package_version": __version__,
        "kernel_backend": kernels.BACKEND,
        "columns": list(table.columns),
        "rows": len(table.rows),
        "agreement": {
            "k": table.summary.k,
            "compared": table.summary.compared,
            "violations": list(table.summary.violations),
            "summary": table.summary.footer(),
        },
    }
    Path(path).write_text(yaml.safe_dump(meta, sort_keys=False, default_flow_style=None))


# ---------------------------------------------------------------- recipes

_T_GRID = {"start": 0.02, "stop": 1.0, "step": 0.02}
_PHI_GRID = {"start": "0deg", "stop": "355deg", "step": "5deg"}

RECIPES = {
    "gain-integral": {
        "kind": "wp-curve", "analytic": True, "monte_carlo": False,
        "sweep": {"eta": [2.5, 3, 4, 6], "d": {"start": 0.0, "stop": 1.0, "step": 0.05}},
    },
    "connection-aligned": {
        "kind": "connection-vs-distance", "link": {"phi": "180deg"},
        "sweep": {"d": [0, 0.5, 1], "t": _T_GRID},
    },
    "connection-misaligned": {
        "kind": "connection-vs-distance",
        "sweep": {"d": [0, 0.5, 1], "t": _T_GRID},
    },
    "connection-orientation-directivity": {
        "kind": "connection-vs-orientation", "antenna": {"n": 1}, "link": {"t": 0.4},
        "sweep": {"d": [0, 0.5, 1], "phi": _PHI_GRID},
    },
    "connection-orientation-lobes": {
        "kind": "connection-vs-orientation", "antenna": {"d": 1}, "link": {"t": 0.4},
        "sweep": {"n": [1, 2, 3, 4], "phi": _PHI_GRID},
    },
    "rate-orientation": {
        "kind": "rate-vs-orientation", "antenna": {"d": 1}, "link": {"t": 0.4},
        "sweep": {"n": [1, 2, 3, 4], "phi": _PHI_GRID},
    },
    "rate-distance": {
        "kind": "rate-vs-distance", "link": {"phi": "180deg"},
        "sweep": {"d": [0, 0.5, 1], "t": _T_GRID},
    },
    "degree-density": {
        "kind": "degree-vs-density",
        "sweep": {"d": [0, 1], "density": [0.1, 0.25, 0.5, 1, 2, 3, 4, 5]},
    },
}
# Recipes whose tagged orientation is a free choice and must be given explicitly.
RECIPE_REQUIRED = {"connection-misaligned": ("phi",)}


def recipe_mapping(name: str, output: str) -> dict:
    """Raw configuration mapping of a named recipe."""
    if name not in RECIPES:
        raise ConfigError(f"unknown recipe {name}; choose from {sorted(RECIPES)}", "recipe")
    data = copy.deepcopy(RECIPES[name])
    data["output"] = output
    data.setdefault("simulation", {}).update({"radius": 8.0, "trials": 30_000})
    return data


def recipe(name: str, output: str, **overrides) -> ExperimentSpec:
    """Spec of a named recipe; ``overrides`` set link, simulation or params keys."""
    data = recipe_mapping(name, output)
    apply_overrides(data, overrides)
    for key in RECIPE_REQUIRED.get(name, ()):
        if key not in data.get("link", {}):
            raise ConfigError(f"recipe {name} requires {key}", f"link.{key}")
    return spec_from_mapping(data)


def apply_overrides(data: dict, overrides: dict):
    """Set scalar keys by bare name into the section that owns them."""
    for key, value in overrides.items():
        if value is None:
            continue
        if key in SIM_KEYS:
            section = "simulation"
        elif key in PARAM_KEYS:
            section = "params"
        elif key in LINK_KEYS:
            section = "link"
        elif key in ("d", "n"):
            section = "antenna"
        elif key in ("rx_d", "rx_n"):
            data.setdefault("rx_antenna", {})[key[3:]] = value
            continue
        elif key in TOP_KEYS:
            data[key] = value
            continue
        else:
            raise ConfigError(f"unknown key {key}", key)
        data.setdefault(section, {})
        if not isinstance(data[section], dict):
            raise ConfigError(f"{section} must be a mapping", section)
        data[section][key] = value
    return data
