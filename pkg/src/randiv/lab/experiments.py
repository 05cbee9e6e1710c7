"""Monte Carlo experiments.  Each trial is an independent task with its own seed.

Trial functions return lists of Rows; ``run_trials`` fans them out over
worker processes and the RunRecord sorts them, so the output does not depend
on scheduling.
"""
from __future__ import annotations

import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..divergence import BUDGET_EXCEEDED, DISCONNECTED, FINITE, DivergenceQuery, divergence
from ..groups import IDENTITY, invert, multiply, normal_form
from ..projections import a_set, enumerate_HT
from ..stochastic import sample_endpoint, trial_seed
from .config import ExperimentConfig
from .record import Row, RunRecord
from .stats import Estimate, tail_fit

DEGENERATE = "degenerate"
OK = "ok"


def experiment_seed(base_seed: int, n: int, trial: int) -> int:
    ss = np.random.SeedSequence(entropy=int(base_seed), spawn_key=(int(n), int(trial)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _endpoint(cfg: ExperimentConfig, n: int, seed: int, stream: int):
    return sample_endpoint(cfg.kernel_obj, IDENTITY, n, trial_seed(seed, 0, stream), cfg.spec)


# --- per-trial work --------------------------------------------------------

def _trial_divergence(cfg, n, trial, seed, extra):
    w = _endpoint(cfg, n, seed, 0)
    z = _endpoint(cfg, n, seed, 1)
    if not w or not z:  # a walk back at the basepoint has r = 0
        return [Row(n, trial, seed, "div", math.nan, DEGENERATE)]
    res = divergence(DivergenceQuery(w, z, IDENTITY, cfg.delta_frac, cfg.budget,
                                     method=cfg.method), cfg.spec)
    return [Row(n, trial, seed, "div", res.certified_value, res.verdict)]


def _trial_ht(cfg, n, trial, seed, extra):
    w = _endpoint(cfg, n, seed, 0)
    ht = enumerate_HT(IDENTITY, w, cfg.T, cfg.g0_word, cfg.spec)
    return [Row(n, trial, seed, "ht_size", len(ht), OK)]


_O_CACHE: dict = {}


def _ht_from_o(cfg):
    key = (cfg.digest,)
    if key not in _O_CACHE:
        _O_CACHE[key] = frozenset(enumerate_HT(cfg.o_word, IDENTITY, cfg.T, cfg.g0_word, cfg.spec))
    return _O_CACHE[key]


def _trial_intersection(cfg, n, trial, seed, extra):
    w = _endpoint(cfg, n, seed, 0)
    first = _ht_from_o(cfg)
    if not first:
        return [Row(n, trial, seed, "intersection", 0, OK)]
    second = enumerate_HT(IDENTITY, w, cfg.T, cfg.g0_word, cfg.spec)
    return [Row(n, trial, seed, "intersection", len(first & set(second.cosets)), OK)]


def _trial_a_set(cfg, n, trial, seed, extra):
    w = _endpoint(cfg, n, seed, 0)
    ht = enumerate_HT(IDENTITY, w, cfg.T, cfg.g0_word, cfg.spec)
    S = extra["eps0"] * n / 2
    A = a_set(IDENTITY, w, cfg.T, S, cfg.g0_word, cfg.spec, ht=ht)
    return [Row(n, trial, seed, "a_set", len(A), OK), Row(n, trial, seed, "ht_size", len(ht), OK)]


def _trial_gromov(cfg, n, trial, seed, extra):
    w = _endpoint(cfg, n, seed, 0)
    o = normal_form(cfg.o_word, cfg.spec)
    d_ow = len(multiply(normal_form(invert(o), cfg.spec), w, cfg.spec))
    # (o, w)_1 is an integer in a bipartite Cayley graph; halve exactly anyway
    twice = len(o) + len(w) - d_ow
    val = twice // 2 if twice % 2 == 0 else twice / 2
    return [Row(n, trial, seed, "gromov_product", val, OK)]


TRIALS = {
    "random_divergence": _trial_divergence,
    "ht_growth": _trial_ht,
    "ht_intersection": _trial_intersection,
    "a_set_growth": _trial_a_set,
    "gromov_tail": _trial_gromov,
}

_CFG_CACHE: dict = {}


def _run_task(task):
    cfg_json, kind, n, trial, extra = task
    cfg = _CFG_CACHE.get(cfg_json)
    if cfg is None:
        import json
        cfg = _CFG_CACHE[cfg_json] = ExperimentConfig.from_dict(json.loads(cfg_json))
    seed = experiment_seed(cfg.base_seed, n, trial)
    return TRIALS[kind](cfg, n, trial, seed, extra)


def run_trials(cfg: ExperimentConfig, kind: str, n_values, threads: int = 1,
               extra: dict | None = None) -> list:
    cfg_json = cfg.canonical_json()
    tasks = [(cfg_json, kind, n, t, extra or {}) for n in n_values for t in range(cfg.trials)]
    if not tasks:
        return []
    if threads <= 1:
        out = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            out = list(ex.map(_run_task, tasks, chunksize=max(1, len(tasks) // (8 * threads))))
    return [row for rows in out for row in rows]


# --- summaries -------------------------------------------------------------

def _finite_median(vals):
    return statistics.median(vals) if vals else None


def summarize_divergence(cfg: ExperimentConfig, rows) -> dict:
    out = {}
    for n in cfg.n_values:
        rs = [r for r in rows if r.n == n and r.quantity == "div"]
        valid = [r for r in rs if r.verdict != DEGENERATE]
        thr = cfg.threshold(n)
        success = sum(1 for r in valid if r.value > thr)
        inconclusive = sum(1 for r in valid if r.verdict == BUDGET_EXCEEDED and r.value <= thr)
        counts = {v: sum(1 for r in valid if r.verdict == v)
                  for v in (FINITE, DISCONNECTED, BUDGET_EXCEEDED)}
        frac = inconclusive / len(valid) if valid else 0.0
        flagged = frac > cfg.inconclusive_limit
        denom = len(valid) if flagged else len(valid) - inconclusive
        est = Estimate.from_counts(success, denom).to_dict() if denom > 0 else None
        med = _finite_median([r.value for r in valid])
        out[str(n)] = {
            "trials": len(rs), "degenerate": len(rs) - len(valid), **counts,
            "threshold": thr, "successes": success, "inconclusive": inconclusive,
            "inconclusive_fraction": frac, "flagged": flagged, "estimate": est,
            "median_certified_div": med,
            "median_certified_div_over_n": (med / n if med is not None and n else None),
            "disconnected_fraction": counts[DISCONNECTED] / len(valid) if valid else None,
        }
    return {"per_n": out, "inconclusive_flag": any(v["flagged"] for v in out.values())}


def _mean_over_n(vals, n):
    return float(np.mean(vals)) / n if vals and n else 0.0


def pilot_eps0(cfg: ExperimentConfig, rows) -> float | None:
    """Half the mean slope of |H_T| at the smallest positive n (unless frozen in the config)."""
    if cfg.eps0 is not None:
        return cfg.eps0
    ns = sorted(n for n in cfg.n_values if n > 0)
    if not ns:
        return None
    vals = [r.value for r in rows if r.n == ns[0] and r.quantity == "ht_size"]
    return _mean_over_n(vals, ns[0]) / 2 if vals else None


def summarize_ht(cfg: ExperimentConfig, rows) -> dict:
    eps0 = pilot_eps0(cfg, rows)
    out = {}
    for n in cfg.n_values:
        vals = [r.value for r in rows if r.n == n and r.quantity == "ht_size"]
        entry = {"trials": len(vals), "mean": float(np.mean(vals)) if vals else None,
                 "mean_over_n": _mean_over_n(vals, n) if n else None}
        if vals and eps0 is not None:
            hits = sum(1 for v in vals if v >= eps0 * n)
            entry["estimate_ge_eps0_n"] = Estimate.from_counts(hits, len(vals)).to_dict()
        out[str(n)] = entry
    slopes = [v["mean_over_n"] for v in out.values() if v["mean_over_n"]]
    spread = (max(slopes) - min(slopes)) / min(slopes) if slopes and min(slopes) > 0 else None
    return {"per_n": out, "eps0": eps0, "relative_spread": spread}


def summarize_tail(cfg: ExperimentConfig, rows, quantity: str) -> dict:
    out = {}
    for n in cfg.n_values:
        vals = [r.value for r in rows if r.n == n and r.quantity == quantity]
        out[str(n)] = tail_fit(vals, strict=cfg.tail == "gt").to_dict()
    return {"per_n": out, "tail": cfg.tail}


def summarize_a_set(cfg: ExperimentConfig, rows, eps0) -> dict:
    out = {}
    subset_ok = True
    by_key: dict = {}
    for r in rows:
        by_key.setdefault((r.n, r.trial), {})[r.quantity] = r.value
    for (n, t), d in by_key.items():
        if d.get("a_set", 0) > d.get("ht_size", 0):
            subset_ok = False
    for n in cfg.n_values:
        a = [r.value for r in rows if r.n == n and r.quantity == "a_set"]
        h = [r.value for r in rows if r.n == n and r.quantity == "ht_size"]
        ma, mh = _mean_over_n(a, n), _mean_over_n(h, n)
        out[str(n)] = {"trials": len(a), "a_set_mean_over_n": ma, "ht_mean_over_n": mh,
                       "ratio": ma / mh if mh else None}
    return {"per_n": out, "eps0": eps0, "subset_law_holds": subset_ok}


# --- experiments -----------------------------------------------------------

def _record(cfg, rows, summary, t0):
    return RunRecord(cfg, tuple(rows), summary, time.perf_counter() - t0)


def exp_random_divergence(cfg: ExperimentConfig, threads: int = 1) -> RunRecord:
    t0 = time.perf_counter()
    rows = run_trials(cfg, "random_divergence", cfg.n_values, threads)
    return _record(cfg, rows, summarize_divergence(cfg, rows), t0)


def exp_ht_growth(cfg: ExperimentConfig, threads: int = 1) -> RunRecord:
    t0 = time.perf_counter()
    rows = run_trials(cfg, "ht_growth", cfg.n_values, threads)
    return _record(cfg, rows, summarize_ht(cfg, rows), t0)


def exp_ht_intersection(cfg: ExperimentConfig, threads: int = 1) -> RunRecord:
    t0 = time.perf_counter()
    rows = run_trials(cfg, "ht_intersection", cfg.n_values, threads)
    summary = summarize_tail(cfg, rows, "intersection")
    summary["ht_o_size"] = len(_ht_from_o(cfg))
    return _record(cfg, rows, summary, t0)


def exp_a_set_growth(cfg: ExperimentConfig, threads: int = 1) -> RunRecord:
    t0 = time.perf_counter()
    eps0 = cfg.eps0
    if eps0 is None:
        ns = sorted(n for n in cfg.n_values if n > 0)
        pilot = run_trials(cfg, "ht_growth", ns[:1], threads) if ns else []
        eps0 = pilot_eps0(cfg, pilot) or 0.0
    rows = run_trials(cfg, "a_set_growth", cfg.n_values, threads, {"eps0": eps0})
    return _record(cfg, rows, summarize_a_set(cfg, rows, eps0), t0)


def exp_gromov_tail(cfg: ExperimentConfig, threads: int = 1) -> RunRecord:
    t0 = time.perf_counter()
    rows = run_trials(cfg, "gromov_tail", cfg.n_values, threads)
    return _record(cfg, rows, summarize_tail(cfg, rows, "gromov_product"), t0)


EXPERIMENT_FUNCS = {
    "random_divergence": exp_random_divergence,
    "ht_growth": exp_ht_growth,
    "ht_intersection": exp_ht_intersection,
    "a_set_growth": exp_a_set_growth,
    "gromov_tail": exp_gromov_tail,
}


def run_experiment(cfg: ExperimentConfig, threads: int = 1) -> RunRecord:
    return EXPERIMENT_FUNCS[cfg.experiment](cfg, threads)


def resummarize(run: RunRecord) -> dict:
    """Recompute a summary from rows alone (used when re-rendering a stored run)."""
    cfg, rows = run.config, run.rows
    if cfg.experiment == "random_divergence":
        return summarize_divergence(cfg, rows)
    if cfg.experiment == "ht_growth":
        return summarize_ht(cfg, rows)
    if cfg.experiment == "ht_intersection":
        return {**summarize_tail(cfg, rows, "intersection"), **{
            k: v for k, v in run.summary.items() if k == "ht_o_size"}}
    if cfg.experiment == "a_set_growth":
        return summarize_a_set(cfg, rows, run.summary.get("eps0"))
    return summarize_tail(cfg, rows, "gromov_product")


def exit_status(run: RunRecord) -> int:
    """0 ok, 2 invariant violation, 3 too many inconclusive trials."""
    s = run.summary
    if s.get("subset_law_holds") is False:
        return 2
    if any(not v.get("monotone", True) for v in s.get("per_n", {}).values()):
        return 2
    if s.get("inconclusive_flag"):
        return 3
    return 0
