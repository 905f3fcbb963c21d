"""Command-line entry point.

Examples::

    dirnet recipe connection-aligned --output aligned.csv --seed 3
    dirnet run experiment.yaml --trials 5000
    dirnet connection-vs-orientation --output phi.csv --set t=0.4 --set d=1 \\
        --sweep n=1,2,3,4 --sweep phi=0deg:355deg:5deg

Failures print one JSON object on stderr and exit with a nonzero status.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

import yaml

from . import experiments
from .errors import ConfigError, DomainError, QuadratureError

EXIT_CONFIG = 2
EXIT_RUNTIME = 1


def _common(parser):
    parser.add_argument("--output", "-o", help="CSV path (metadata goes next to it)")
    parser.add_argument("--seed", type=int, help="master RNG seed")
    parser.add_argument("--trials", type=int, help="Monte Carlo realizations per setup")
    parser.add_argument("--radius", type=float, help="simulation disk radius")
    parser.add_argument("--workers", type=int, help="worker processes (default: env or CPU count)")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="fix a parameter, e.g. eta=4, d=1, phi=90deg")
    parser.add_argument("--sweep", action="append", default=[], metavar="AXIS=VALUES",
                        help="grid as a,b,c or start:stop:step")
    parser.add_argument("--no-mc", action="store_true", help="skip Monte Carlo columns")
    parser.add_argument("--no-analytic", action="store_true", help="skip analytic column")
    parser.add_argument("--tolerance-k", type=float, help="agreement threshold in std errors")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dirnet", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a YAML experiment file")
    p.add_argument("config")
    _common(p)

    p = sub.add_parser("recipe", help="run a named reproduction recipe")
    p.add_argument("name", nargs="?", choices=sorted(experiments.RECIPES))
    p.add_argument("--list", action="store_true", help="list recipes and exit")
    _common(p)

    for kind in experiments.KIND_METRIC:
        p = sub.add_parser(kind, help=f"{kind} experiment")
        p.add_argument("--config", help="YAML file providing defaults")
        if kind == "sweep":
            p.add_argument("--metric", choices=experiments.METRICS)
        _common(p)
    return parser


def _scalar(text):
    value = yaml.safe_load(text)
    return text if value is None else value


def _split_assignment(text, flag):
    if "=" not in text:
        raise ConfigError(f"{flag} expects KEY=VALUE, got {text!r}", flag)
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


def _sweep_value(text):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range {text!r} must be start:stop:step", "sweep")
        return dict(zip(("start", "stop", "step"), (_scalar(p) for p in parts)))
    return [_scalar(p) for p in text.split(",")]


def _load_mapping(path):
    try:
        text = open(path).read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}", "config") from None
    experiments.parse_text(text)  # reports errors with line numbers
    return yaml.safe_load(text)


def _build_spec(args):
    if args.command == "run":
        data = _load_mapping(args.config)
    elif args.command == "recipe":
        if args.name is None:
            raise ConfigError("recipe name required", "recipe")
        data = experiments.recipe_mapping(args.name, args.output or f"{args.name}.csv")
    else:
        data = _load_mapping(args.config) if args.config else {}
        data["kind"] = args.command
        if getattr(args, "metric", None):
            data["metric"] = args.metric
    if args.output:
        data["output"] = args.output
    data.setdefault("output", f"{data.get('kind', 'experiment')}.csv")

    overrides = {"seed": args.seed, "trials": args.trials, "radius": args.radius,
                 "workers": args.workers, "tolerance_k": args.tolerance_k}
    if args.no_mc:
        overrides["monte_carlo"] = False
    if args.no_analytic:
        overrides["analytic"] = False
    for item in args.set:
        key, value = _split_assignment(item, "--set")
        overrides[key] = _scalar(value)
    experiments.apply_overrides(data, overrides)
    if args.sweep:
        sweep = data.get("sweep") or {}
        for item in args.sweep:
            axis, values = _split_assignment(item, "--sweep")
            sweep[axis] = _sweep_value(values)
        data["sweep"] = sweep
    if args.command == "recipe":
        for key in experiments.RECIPE_REQUIRED.get(args.name, ()):
            if key not in data.get("link", {}):
                raise ConfigError(f"recipe {args.name} requires --set {key}=VALUE", f"link.{key}")
    return experiments.spec_from_mapping(data)


def _fail(exc, status):
    if isinstance(exc, ConfigError):
        payload = exc.as_dict()
    else:
        payload = {"type": type(exc).__name__, "field": getattr(exc, "field", None),
                   "line": None, "message": str(exc)}
    print(json.dumps({"error": payload}), file=sys.stderr)
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "recipe" and args.list:
        for name in sorted(experiments.RECIPES):
            print(f"{name}\t{experiments.RECIPES[name]['kind']}")
        return 0
    try:
        spec = _build_spec(args)
        table = experiments.run_experiment(spec)
    except (ConfigError, DomainError) as exc:
        return _fail(exc, EXIT_CONFIG)
    except (OSError, QuadratureError) as exc:
        return _fail(exc, EXIT_RUNTIME)
    print(f"wrote {len(table.rows)} rows to {spec.output}")
    print(table.summary.footer())
    return 0


if __name__ == "__main__":
    sys.exit(main())
