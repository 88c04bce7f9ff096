import json

import numpy as np
import pytest

from finitekey.harness import (CSV_FIELDS, ConfigError, ResultRow, SweepConfig, ambiguity_table,
                               format_channel, load_config, parse_channel, parse_config,
                               rows_to_csv, rows_to_json, run_sweep, trial_seed, with_overrides)
from finitekey.quantum import AmplitudeDamping, Depolarizing, Explicit, choi_of

CONVENTIONAL = ("variational", "relative", "chernoff", "moment", "klar")


@pytest.fixture(scope="module")
def small_sweep():
    config = SweepConfig(Depolarizing(0.1), (10**4, 10**5), methods=CONVENTIONAL + ("accurate",),
                         seed=42, trials_per_point=2)
    return config, run_sweep(config)


def test_rows_and_order(small_sweep):
    config, rows = small_sweep
    assert len(rows) == 2 * (5 + 2)
    assert rows == sorted(rows, key=ResultRow.sort_key)
    acc = [r for r in rows if r.method == "accurate"]
    assert [r.trial for r in acc] == [0, 1, 0, 1]
    assert all(r.status == "converged" for r in acc)
    conv = [r for r in rows if r.method != "accurate"]
    assert all(r.phase_error_estimate >= 0.05 and r.trial is None for r in conv)


def test_byte_identical_reruns(small_sweep):
    config, rows = small_sweep
    assert rows_to_csv(run_sweep(config)) == rows_to_csv(rows)


def test_parallel_equals_serial(small_sweep):
    config, rows = small_sweep
    assert rows_to_csv(run_sweep(config, workers=3)) == rows_to_csv(rows)


def test_seed_changes_accurate_rows(small_sweep):
    config, rows = small_sweep
    other = run_sweep(with_overrides(config, seed=43))
    assert [r.ambiguity for r in other if r.method == "accurate"] != \
        [r.ambiguity for r in rows if r.method == "accurate"]
    assert [r for r in other if r.method != "accurate"] == [r for r in rows if r.method != "accurate"]


def test_trial_seeds_distinct():
    seeds = {tuple(trial_seed(5, p, t).generate_state(2)) for p in range(4) for t in range(4)}
    assert len(seeds) == 16


@pytest.mark.parametrize("channel", [Depolarizing(0.1), AmplitudeDamping(0.1)])
def test_conventional_curves_monotone_and_ordered(channel):
    sizes = tuple(int(10**e) for e in np.arange(3, 9.5, 0.5))
    rows = run_sweep(SweepConfig(channel, sizes, methods=CONVENTIONAL))
    table = ambiguity_table(rows)
    for method in CONVENTIONAL:
        curve = [table[method][m] for m in sizes]
        assert all(b >= a - 1e-12 for a, b in zip(curve, curve[1:])), method
    for m in sizes:
        col = [table[k][m] for k in ("variational", "relative", "chernoff", "moment")]
        assert all(b >= a - 1e-9 for a, b in zip(col, col[1:])), m


def test_conventional_fraction():
    cfg = SweepConfig(Depolarizing(0.1), (10**4,), methods=("klar",))
    assert cfg.conventional_m(10**4) == 2500
    full = with_overrides(cfg, conventional_fraction=1.0)
    quarter, whole = run_sweep(cfg)[0], run_sweep(full)[0]
    assert whole.ambiguity > quarter.ambiguity


def test_infeasible_accurate_row_gives_zero(monkeypatch):
    import finitekey.harness as h
    from finitekey.optimizer import OptimizationResult, Status

    def fake(lam, xi):
        rho = choi_of(Depolarizing(1.0))
        return OptimizationResult(rho, float("nan"), 3, Status.INFEASIBLE, np.zeros(7), 1.0, xi)

    monkeypatch.setattr(h, "min_ambiguity_accurate", fake)
    rows = run_sweep(SweepConfig(Depolarizing(0.1), (100,), methods=("accurate",), trials_per_point=1))
    assert rows[0].ambiguity == 0.0 and rows[0].status == "infeasible"


# ---------------------------------------------------------------- config

@pytest.mark.parametrize("kwargs, message", [
    (dict(sample_sizes=()), "empty"),
    (dict(sample_sizes=(10, 10)), "increasing"),
    (dict(sample_sizes=(0, 10)), "positive"),
    (dict(sample_sizes=(10,), methods=("nope",)), "unknown method"),
    (dict(sample_sizes=(10,), trials_per_point=0), "trials"),
    (dict(sample_sizes=(10,), eps_pe=1.0), "eps_pe"),
    (dict(sample_sizes=(10,), conventional_fraction=0.0), "conventional_fraction"),
])
def test_config_validation(kwargs, message):
    with pytest.raises(ConfigError, match=message):
        SweepConfig(Depolarizing(0.1), **kwargs)


def test_methods_canonical_order():
    cfg = SweepConfig(Depolarizing(0.1), (10,), methods=("Klar", "factorial_moment", "variational"))
    assert cfg.methods == ("variational", "moment", "klar")


def test_parse_config_text():
    text = """
    # depolarizing comparison sweep
    channel = depolarizing:0.1
    sample_sizes = 1e4, 1e5 1e6
    eps_pe = 1e-5
    methods = variational klar accurate   # inline comment
    seed = 7
    trials = 3
    """
    kw = parse_config(text)
    assert kw["sample_sizes"] == (10**4, 10**5, 10**6)
    assert kw["channel"] == Depolarizing(0.1)
    cfg = SweepConfig(**kw)
    assert cfg.methods == ("variational", "klar", "accurate") and cfg.seed == 7


@pytest.mark.parametrize("text, message", [
    ("channel depolarizing", "expected key = value"),
    ("colour = red", "unknown key"),
    ("sample_sizes = 1.5", "bad value"),
    ("channel = warp:0.1", "unknown channel"),
    ("channel = depolarizing:2", "bad channel"),
])
def test_parse_config_errors(text, message):
    with pytest.raises(ConfigError, match=message):
        parse_config(text)


def test_load_config_and_overrides(tmp_path):
    path = tmp_path / "fig1.cfg"
    path.write_text("channel = amplitude_damping:0.1\nsample_sizes = 100 1000\n")
    cfg = load_config(path, seed=9, methods=None)
    assert cfg.channel == AmplitudeDamping(0.1) and cfg.seed == 9
    assert cfg.methods[-1] == "accurate"
    with pytest.raises(ConfigError, match="config not found"):
        load_config(tmp_path / "missing.cfg")
    (tmp_path / "bad.cfg").write_text("seed = 1\n")
    with pytest.raises(ConfigError, match="missing channel, sample_sizes"):
        load_config(tmp_path / "bad.cfg")


def test_explicit_channel_file(tmp_path, ad01):
    path = tmp_path / "ad.txt"
    path.write_text(ad01.to_text())
    spec = parse_channel(f"explicit:{path}")
    assert isinstance(spec, Explicit) and spec.choi == ad01
    with pytest.raises(ConfigError, match="cannot read"):
        parse_channel(f"explicit:{tmp_path / 'nope.txt'}")


def test_format_channel_round_trip():
    for spec in (Depolarizing(0.1), AmplitudeDamping(0.25)):
        assert parse_channel(format_channel(spec)) == spec


# ---------------------------------------------------------------- output

def test_csv_schema(small_sweep):
    _, rows = small_sweep
    text = rows_to_csv(rows)
    lines = text.split("\n")
    assert lines[0] == ",".join(CSV_FIELDS)
    assert "\r" not in text and text.endswith("\n")
    first = lines[1].split(",")
    assert first[0] == "variational" and first[1] == "10000"
    assert len(first[2].replace(".", "").lstrip("0")) <= 10


def test_json_output(small_sweep):
    _, rows = small_sweep
    data = json.loads(rows_to_json(rows))
    assert len(data) == len(rows)
    assert set(data[0]) == set(CSV_FIELDS)
    assert data[-1]["method"] == "accurate" and data[-1]["trial"] == 1


def test_result_row_range():
    with pytest.raises(ValueError):
        ResultRow("klar", 10, 1.5)
