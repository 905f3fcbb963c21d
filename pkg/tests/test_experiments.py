import json
import math

import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from dirnet import cli
from dirnet.errors import ConfigError
from dirnet.experiments import (RECIPES, ExperimentSpec, default_params, metadata_path,
                                parse_config, parse_text, recipe, run_experiment, serialize)


def test_default_params():
    p = default_params()
    assert (p.power, p.noise, p.density, p.threshold) == (1.0, 1.0, 1.0, 1.0)
    assert p.gamma == 0.3 and p.epsilon == 0.0 and p.eta == 4.0


def test_minimal_config_fills_defaults(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("kind: sweep\noutput: out.csv\n")
    spec = parse_config(path)
    assert spec.simulation.params == default_params()
    assert spec.metric == "connection"
    assert spec.grid() == [{}]


def test_sweep_metric_is_configurable():
    spec = parse_text("kind: sweep\noutput: out.csv\nmetric: rate\n")
    assert spec.metric == "rate" and spec.grid() == [{}]


@pytest.mark.parametrize("body,field,line", [
    ("params:\n  eta: 2\n", "params.eta", 4),
    ("params:\n  gamma: 1.5\n", "params.gamma", 4),
    ("parms: {}\n", "parms", 3),
    ("params:\n  eta: 4\n  etta: 3\n", "params.etta", 5),
    ("simulation:\n  trials: 0\n", "simulation.trials", 4),
    ("sweep:\n  t: [0.1, 9.0]\n", "sweep.t", None),
    ("sweep:\n  eta: [4, 2]\n", "sweep.eta", 4),
    ("sweep:\n  bogus: [1]\n", "sweep.bogus", 4),
    ("link:\n  phi: ninety\n", "link.phi", 4),
    ("analytic: false\nmonte_carlo: false\n", "analytic", None),
])
def test_config_errors_name_field(body, field, line):
    with pytest.raises(ConfigError) as info:
        parse_text("kind: sweep\noutput: x.csv\n" + body)
    assert info.value.field == field
    if line is not None:
        assert info.value.line == line


def test_eta_message():
    with pytest.raises(ConfigError, match="eta must exceed 2"):
        parse_text("kind: sweep\noutput: x.csv\nparams: {eta: 2}\n")


def test_parse_error_has_line():
    with pytest.raises(ConfigError) as info:
        parse_text("kind: sweep\noutput: x.csv\nparams: {eta: [\n")
    assert info.value.line is not None
    assert "YAML" in str(info.value)


def test_kind_requires_axis():
    with pytest.raises(ConfigError, match="requires a sweep over t"):
        parse_text("kind: connection-vs-distance\noutput: x.csv\n")


def test_degrees_and_ranges():
    spec = parse_text("kind: connection-vs-orientation\noutput: x.csv\n"
                      "sweep:\n  phi: {start: 0deg, stop: 90deg, step: 45deg}\n  n: [1, 2]\n")
    phis = dict(spec.sweep_axes)["phi"]
    assert phis == pytest.approx((0.0, math.pi / 4, math.pi / 2))
    assert dict(spec.sweep_axes)["n"] == (1, 2)
    assert len(spec.grid()) == 6


def test_range_endpoints_inclusive():
    spec = parse_text("kind: connection-vs-distance\noutput: x.csv\n"
                      "sweep: {t: {start: 0.02, stop: 1.0, step: 0.02}}\n")
    t = dict(spec.sweep_axes)["t"]
    assert len(t) == 50 and t[0] == 0.02 and t[-1] == 1.0 and t[2] == 0.06


_specs = st.builds(
    dict,
    eta=st.floats(2.1, 8.0), gamma=st.floats(0, 1), d=st.floats(0, 1), n=st.integers(1, 5),
    t=st.floats(0.01, 5.0), phi=st.floats(-7, 7), trials=st.integers(1, 10 ** 6),
    seed=st.integers(0, 2 ** 64 - 1), k=st.floats(0.5, 10),
    ts=st.lists(st.floats(0.01, 7.9), min_size=1, max_size=4),
    rx=st.one_of(st.none(), st.floats(0, 1)),
)


@settings(max_examples=50, deadline=None)
@given(v=_specs)
def test_round_trip(v):
    text = yaml.safe_dump({
        "kind": "rate-vs-distance", "output": "r.csv", "tolerance_k": v["k"],
        "params": {"eta": v["eta"], "gamma": v["gamma"]},
        "antenna": {"d": v["d"], "n": v["n"]},
        **({"rx_antenna": {"d": v["rx"]}} if v["rx"] is not None else {}),
        "link": {"t": v["t"], "phi": v["phi"]},
        "simulation": {"trials": v["trials"], "seed": v["seed"]},
        "sweep": {"t": v["ts"], "phi": ["10deg", 2.0]},
    })
    spec = parse_text(text)
    again = parse_text(serialize(spec))
    assert again == spec
    assert serialize(again) == serialize(spec)


def test_recipe_round_trip():
    for name in RECIPES:
        if name == "connection-misaligned":
            spec = recipe(name, "x.csv", phi=2.0)
        else:
            spec = recipe(name, "x.csv")
        assert parse_text(serialize(spec)) == spec


def test_misaligned_recipe_requires_phi():
    with pytest.raises(ConfigError, match="phi"):
        recipe("connection-misaligned", "x.csv")


def test_spec_rejects_monte_carlo_for_gain_curve():
    with pytest.raises(ConfigError):
        ExperimentSpec(kind="wp-curve", output="x.csv", sweep_axes=(("d", (0.5,)),))


def _small(tmp_path, name="conn", trials=400):
    return parse_text(
        f"kind: connection-vs-distance\noutput: {tmp_path / (name + '.csv')}\n"
        f"simulation: {{trials: {trials}, seed: 3}}\n"
        "sweep:\n  d: [0, 1]\n  t: [0.2, 0.6]\n")


def test_run_writes_table_and_metadata(tmp_path):
    spec = _small(tmp_path)
    table = run_experiment(spec)
    lines = (tmp_path / "conn.csv").read_text().splitlines()
    assert lines[0] == "d,t,analytic,mc,std_error,trials,within_k"
    assert len(lines) == 5 and len(table.rows) == 4
    meta = yaml.safe_load(metadata_path(spec.output).read_text())
    assert parse_text(yaml.safe_dump(meta["spec"])) == spec
    assert meta["agreement"]["compared"] == 4
    assert meta["agreement"]["summary"] == table.summary.footer()


def test_csv_is_byte_identical(tmp_path):
    a = _small(tmp_path, "a")
    b = _small(tmp_path, "b")
    run_experiment(a)
    run_experiment(b)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_violations_reported_in_footer(tmp_path):
    # a handful of trials with an absurdly tight k must flag rows
    spec = parse_text(
        f"kind: connection-vs-distance\noutput: {tmp_path / 'v.csv'}\ntolerance_k: 0.001\n"
        "simulation: {trials: 50, seed: 1}\nsweep: {t: [0.3, 0.5, 0.7]}\n")
    table = run_experiment(spec)
    assert table.summary.violations
    assert "violations at rows" in table.summary.footer()
    assert "false" in (tmp_path / "v.csv").read_text()


def test_degree_table_columns(tmp_path):
    spec = parse_text(
        f"kind: degree-vs-density\noutput: {tmp_path / 'deg.csv'}\n"
        "simulation: {trials: 200}\nsweep: {density: [0.5, 1]}\n")
    table = run_experiment(spec)
    assert table.columns == ("density", "analytic", "mc", "std_error", "trials",
                             "mc_fraction", "mc_fraction_std_error", "within_k")


def test_degree_analytic_for_general_eta(tmp_path):
    spec = parse_text(
        f"kind: degree-vs-density\noutput: {tmp_path / 'deg.csv'}\nmonte_carlo: false\n"
        "params: {eta: 3}\nsweep: {density: [1]}\n")
    value = run_experiment(spec, write=False).rows[0][1]
    assert 0 < value < 1.5


def test_gain_curve_recipe(tmp_path):
    spec = recipe("gain-integral", str(tmp_path / "g.csv"))
    table = run_experiment(spec)
    assert table.columns == ("eta", "d", "analytic")
    assert table.rows[0] == (2.5, 0.0, 2 * math.pi)


def test_cli_run_and_footer(tmp_path, capsys):
    path = tmp_path / "c.yaml"
    path.write_text("kind: rate-vs-distance\noutput: r.csv\nsweep: {t: [0.3, 0.5]}\n")
    out = tmp_path / "out.csv"
    assert cli.main(["run", str(path), "--trials", "300", "--seed", "2", "-o", str(out)]) == 0
    text = capsys.readouterr().out
    assert "agreement:" in text and out.exists()
    meta = yaml.safe_load(metadata_path(out).read_text())
    assert meta["spec"]["simulation"]["trials"] == 300


def test_cli_kind_subcommand_with_flags(tmp_path, capsys):
    out = tmp_path / "phi.csv"
    code = cli.main(["connection-vs-orientation", "-o", str(out), "--trials", "200",
                     "--set", "d=1", "--set", "t=0.4", "--sweep", "n=1,2",
                     "--sweep", "phi=0deg:90deg:45deg", "--radius", "6"])
    assert code == 0
    rows = out.read_text().splitlines()
    assert rows[0].startswith("n,phi,analytic") and len(rows) == 7


def test_cli_error_is_json(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text("kind: sweep\noutput: x.csv\nparams:\n  gamma: 1.5\n")
    assert cli.main(["run", str(path)]) == cli.EXIT_CONFIG
    err = json.loads(capsys.readouterr().err.strip())["error"]
    assert err["field"] == "params.gamma" and err["line"] == 4


def test_cli_missing_file(capsys):
    assert cli.main(["run", "/nonexistent/c.yaml"]) != 0
    assert json.loads(capsys.readouterr().err)["error"]["field"] == "config"


def test_cli_recipe_requires_phi(capsys):
    assert cli.main(["recipe", "connection-misaligned"]) == cli.EXIT_CONFIG
    assert "phi" in capsys.readouterr().err


def test_cli_recipe_list(capsys):
    assert cli.main(["recipe", "--list"]) == 0
    assert "degree-density" in capsys.readouterr().out
