import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randiv.lab.cli import main
from randiv.lab.config import ConfigError, ExperimentConfig
from randiv.lab.experiments import (exit_status, experiment_seed, resummarize, run_experiment,
                                    summarize_divergence)
from randiv.lab.record import (CSV_FIELDS, ReportError, Row, RunRecord, format_value, load_run,
                               parse_value, report, rows_from_csv, svg_scatter)
from randiv.lab.stats import Estimate, tail_fit
from randiv.lab.verify import run_all

P4_DOC = {"type": "raag", "vertices": ["a", "b", "c", "d"],
          "edges": [["a", "b"], ["b", "c"], ["c", "d"]]}


def cfg(**kw):
    base = dict(experiment="ht_growth", n_values=[20, 40], trials=30, base_seed=1)
    base.update(kw)
    return ExperimentConfig.from_dict(base)


# --- config ---------------------------------------------------------------------------

def test_config_validation():
    with pytest.raises(ConfigError):
        cfg(experiment="nope")
    with pytest.raises(ConfigError):
        cfg(delta="3/4", delta0="1/2")
    with pytest.raises(ConfigError):
        cfg(delta="0")
    with pytest.raises(ConfigError):
        cfg(tail="lt")
    with pytest.raises(ConfigError):
        cfg(C="-1")
    with pytest.raises(ConfigError):
        cfg(trials=-1)
    with pytest.raises(ConfigError):
        cfg(colour="red")


def test_config_digest_and_round_trip(tmp_path):
    c = cfg(delta="0.5")
    assert c.delta == "1/2"
    assert ExperimentConfig.from_dict(json.loads(c.canonical_json())).digest == c.digest
    assert c.replace(base_seed=2).digest != c.digest
    p = tmp_path / "c.json"
    p.write_text(json.dumps(c.to_dict()))
    assert ExperimentConfig.load(p) == c


def test_threshold():
    c = cfg(C="3", profile={"family": "linear", "slope": 1})
    assert c.threshold(12) == pytest.approx(16)
    assert c.threshold(0) == 0


# --- statistics --------------------------------------------------------------------------

def test_wilson_edges():
    e = Estimate.from_counts(0, 50)
    assert e.wilson_low == 0 and e.p_hat == 0 and 0 < e.wilson_high < 0.1
    e = Estimate.from_counts(50, 50)
    assert e.wilson_high == 1 and e.p_hat == 1
    with pytest.raises(ValueError):
        Estimate.from_counts(0, 0)
    with pytest.raises(ValueError):
        Estimate.from_counts(5, 4)


def test_wilson_matches_closed_form():
    # independent evaluation of the Wilson score interval
    k, n, z = 37, 120, 1.959963984540054
    p = k / n
    centre = (p + z * z / (2 * n)) / (1 + z * z / n)
    half = z / (1 + z * z / n) * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n))
    e = Estimate.from_counts(k, n)
    assert e.wilson_low == pytest.approx(centre - half, abs=1e-9)
    assert e.wilson_high == pytest.approx(centre + half, abs=1e-9)


@given(st.integers(1, 500).flatmap(lambda n: st.tuples(st.integers(0, n), st.just(n))))
def test_wilson_brackets_estimate(kn):
    e = Estimate.from_counts(*kn)
    assert 0 <= e.wilson_low <= e.p_hat <= e.wilson_high <= 1


def test_tail_fit_examples():
    assert tail_fit([0] * 50).freq == (0.0, 0.0)
    fit = tail_fit([0, 1, 2, 3])
    assert fit.freq[-1] == 0 and fit.monotone
    ge = tail_fit([0, 0, 1, 1, 1], strict=False)
    assert ge.freq[:2] == (1.0, 0.6)
    assert tail_fit([]).slope is None


def test_tail_fit_recovers_geometric_slope():
    rng = np.random.default_rng(0)
    vals = rng.geometric(0.3, size=20000) - 1  # P[X > t] = 0.7^(t+1)
    fit = tail_fit(vals)
    assert fit.monotone
    assert fit.slope == pytest.approx(math.log(0.7), abs=0.03)


# --- records -------------------------------------------------------------------------------

def test_value_format_round_trip():
    for v in (0, 7, 2.5, math.inf, 1e-3):
        assert parse_value(format_value(v)) == v
    assert format_value(3.0) == "3"
    assert math.isnan(parse_value(format_value(math.nan)))


def test_empty_record_has_header_only_csv(tmp_path):
    run = run_experiment(cfg(trials=0))
    assert run.rows == ()
    assert run.to_csv() == ",".join(CSV_FIELDS) + "\n"
    report(run, str(tmp_path), ["csv", "json", "svg"])
    assert (tmp_path / "rows.csv").read_text() == ",".join(CSV_FIELDS) + "\n"
    assert run.summary["per_n"]["20"]["mean"] is None


def test_rows_sorted_and_serialization_deterministic(tmp_path):
    rows = [Row(20, 1, 5, "q", 1, "ok"), Row(10, 3, 6, "q", math.inf, "disconnected"),
            Row(10, 0, 7, "q", 2.5, "ok")]
    run = RunRecord(cfg(), tuple(rows), {"x": math.inf})
    assert [(r.n, r.trial) for r in run.rows] == [(10, 0), (10, 3), (20, 1)]
    a, b = tmp_path / "a", tmp_path / "b"
    report(run, str(a), ["csv", "json", "svg"])
    report(run, str(b), ["csv", "json", "svg"])
    for name in ("rows.csv", "manifest.json", "scatter.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert rows_from_csv(run.to_csv()) == list(run.rows)
    assert svg_scatter(run) == svg_scatter(run)


def test_manifest_round_trip(tmp_path):
    run = run_experiment(cfg(trials=5))
    report(run, str(tmp_path))
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert ExperimentConfig.from_dict(man["config"]).digest == man["config_digest"] == run.digest
    back = load_run(str(tmp_path))
    assert back.rows == run.rows and back.config == run.config
    man["config"]["base_seed"] = 99
    (tmp_path / "manifest.json").write_text(json.dumps(man))
    with pytest.raises(ValueError):
        load_run(str(tmp_path))


def test_report_errors(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    run = RunRecord(cfg(), ())
    with pytest.raises(ReportError) as info:
        report(run, str(blocker / "sub"))
    assert str(blocker) in str(info.value)
    with pytest.raises(ValueError):
        report(run, str(tmp_path), ["pdf"])
    with pytest.raises(ReportError):
        load_run(str(tmp_path / "missing"))


# --- experiments -----------------------------------------------------------------------------

def test_seeds_depend_only_on_base_n_trial():
    assert experiment_seed(1, 10, 3) == experiment_seed(1, 10, 3)
    assert len({experiment_seed(1, n, t) for n in (10, 20) for t in range(50)}) == 100


def test_ht_growth_trivial_cases():
    run = run_experiment(cfg(n_values=[0, 6], T=13, trials=20))
    assert all(r.value == 0 for r in run.rows)


def test_threads_do_not_change_rows():
    c = cfg(experiment="random_divergence", group=P4_DOC, n_values=[4, 6], trials=12, budget=5000)
    r1 = run_experiment(c, threads=1)
    r2 = run_experiment(c, threads=2)
    assert r1.to_csv() == r2.to_csv()


def test_divergence_tree_counts_disconnected_as_success():
    run = run_experiment(cfg(experiment="random_divergence", n_values=[30], trials=40))
    s = run.summary["per_n"]["30"]
    assert s["successes"] == s["disconnected"] + sum(
        1 for r in run.rows if r.verdict == "finite" and r.value > s["threshold"])
    assert s["disconnected"] > 0
    assert s["trials"] == 40 and s["degenerate"] == sum(1 for r in run.rows if r.verdict == "degenerate")


def test_inconclusive_accounting():
    c = cfg(experiment="random_divergence", n_values=[10], trials=4)
    rows = [Row(10, 0, 1, "div", 30, "finite"), Row(10, 1, 2, "div", 5, "budget_exceeded"),
            Row(10, 2, 3, "div", 20, "budget_exceeded"), Row(10, 3, 4, "div", math.nan, "degenerate")]
    s = summarize_divergence(c, rows)["per_n"]["10"]
    assert s["threshold"] == pytest.approx(100 / 9)
    assert (s["successes"], s["inconclusive"], s["degenerate"]) == (2, 1, 1)
    assert s["flagged"]  # 1 of 3 is above the 10% limit
    assert s["estimate"]["trials"] == 3
    ok = summarize_divergence(c.replace(inconclusive_limit=0.5), rows)["per_n"]["10"]
    assert not ok["flagged"] and ok["estimate"]["trials"] == 2


def test_z2_negative_control_below_raag():
    common = dict(experiment="random_divergence", n_values=[12], trials=40, budget=20_000,
                  base_seed=4)
    z2 = run_experiment(cfg(group={"type": "raag", "vertices": ["a", "b"], "edges": [["a", "b"]]},
                            **common))
    p4 = run_experiment(cfg(group=P4_DOC, **common))
    rate = lambda run: run.summary["per_n"]["12"]["estimate"]["p_hat"]
    assert rate(z2) < rate(p4)


def test_a_set_subset_law():
    run = run_experiment(cfg(experiment="a_set_growth", n_values=[40, 80], trials=30))
    assert run.summary["subset_law_holds"]
    by = {}
    for r in run.rows:
        by.setdefault((r.n, r.trial), {})[r.quantity] = r.value
    assert all(d["a_set"] <= d["ht_size"] for d in by.values())
    zero = run_experiment(cfg(experiment="a_set_growth", n_values=[40], trials=10, eps0=0.0))
    assert exit_status(zero) == 0


def test_gromov_tail_examples():
    run = run_experiment(cfg(experiment="gromov_tail", o="1", n_values=[30], trials=30))
    assert all(r.value == 0 for r in run.rows)
    run = run_experiment(cfg(experiment="gromov_tail", o="a^10", n_values=[30], trials=200))
    assert all(0 <= r.value <= 10 for r in run.rows)
    fit = run.summary["per_n"]["30"]
    assert fit["monotone"] and fit["freq"][-1] == 0
    assert all(f == 0 for t, f in zip(fit["t"], fit["freq"]) if t >= 10)


def test_intersection_with_o_equal_p():
    run = run_experiment(cfg(experiment="ht_intersection", o="1", n_values=[30], trials=20))
    assert run.summary["ht_o_size"] == 0
    assert run.summary["per_n"]["30"]["freq"][0] == 0


def test_resummarize_matches():
    run = run_experiment(cfg(trials=10))
    assert resummarize(run) == run.summary


# --- verify suites and CLI --------------------------------------------------------------------

def test_verify_suites_pass():
    results = run_all(0)
    assert results and all(r.passed for r in results), [r.line() for r in results]


def test_cli_walk_and_ht(capsys):
    assert main(["walk", "--group", "f2", "--n", "5", "--seed", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 6 and out[0] == "0\t1"
    assert main(["ht", "--y", "(ab)^5", "--T", "4"]) == 0
    assert "|H_T| = 1" in capsys.readouterr().out


def test_cli_div(tmp_path, capsys):
    wit = tmp_path / "w.txt"
    assert main(["div", "--group", "z2", "--a", "a^4", "--b", "a^-4", "--witness", str(wit)]) == 0
    out = capsys.readouterr().out
    assert "verdict=finite" in out and "value=12" in out
    assert len(wit.read_text().splitlines()) == 13
    assert main(["div", "--group", "f2", "--a", "abab", "--b", "BABA"]) == 0
    assert "disconnected" in capsys.readouterr().out
    assert main(["div", "--group", "p4", "--a", "adad", "--b", "DADA", "--budget", "50"]) == 3
    assert main(["div", "--group", "f2", "--a", "az", "--b", "b"]) == 1


def test_cli_experiment_and_report(tmp_path, capsys):
    cpath = tmp_path / "c.json"
    cpath.write_text(json.dumps(cfg(trials=8).to_dict()))
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["experiment", "--config", str(cpath), "--out", str(out1), "--format", "csv,json"]) == 0
    assert main(["experiment", "--config", str(cpath), "--out", str(out2), "--threads", "2",
                 "--format", "csv"]) == 0
    assert (out1 / "rows.csv").read_bytes() == (out2 / "rows.csv").read_bytes()
    out3 = tmp_path / "o3"
    assert main(["report", "--run", str(out1), "--out", str(out3)]) == 0
    assert (out3 / "rows.csv").read_bytes() == (out1 / "rows.csv").read_bytes()
    assert (out3 / "scatter.svg").exists()
    capsys.readouterr()
    assert main(["experiment", "--config", str(cpath)]) == 0
    assert capsys.readouterr().out.startswith(",".join(CSV_FIELDS))
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"experiment": "ht_growth", "delta": "2"}))
    assert main(["experiment", "--config", str(bad)]) == 1
    assert main(["report", "--run", str(tmp_path / "nope"), "--out", str(out3)]) == 1
    with pytest.raises(SystemExit):
        main(["experiment", "--config", str(cpath), "--format", "pdf"])


def test_cli_exit_codes_for_flags(tmp_path):
    # a tiny budget on Raag(P4) leaves most trials inconclusive: exit 3
    c = cfg(experiment="random_divergence", group=P4_DOC, n_values=[12], trials=10, budget=20)
    p = tmp_path / "c.json"
    p.write_text(json.dumps(c.to_dict()))
    assert main(["experiment", "--config", str(p), "--out", str(tmp_path / "o")]) == 3
