"""Run records and their on-disk forms: CSV rows, JSON manifest, SVG scatter."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import platform
from dataclasses import dataclass, field

from .. import __version__
from .config import ExperimentConfig

CSV_FIELDS = ("n", "trial", "seed", "quantity", "value", "verdict")
ROWS_FILE = "rows.csv"
MANIFEST_FILE = "manifest.json"
SVG_FILE = "scatter.svg"
FORMATS = ("csv", "json", "svg")

CONVENTIONS = {
    "forbidden_ball": "open: p is forbidden iff d(c, p) < delta * r, r = min(d(c, a), d(c, b))",
    "words": "shortlex-least geodesic normal forms; uppercase letter = inverse",
    "seeds": "per-trial 64-bit seeds from numpy SeedSequence(base_seed, spawn_key=(n, trial))",
}


class ReportError(OSError):
    pass


@dataclass(frozen=True, order=True)
class Row:
    n: int
    trial: int
    seed: int
    quantity: str
    value: float
    verdict: str


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if float(v).is_integer():
        return str(int(v))
    return repr(float(v))


def parse_value(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


@dataclass
class RunRecord:
    config: ExperimentConfig
    rows: tuple
    summary: dict = field(default_factory=dict)
    wall_clock: float = 0.0
    version: str = __version__

    def __post_init__(self):
        self.rows = tuple(sorted(self.rows, key=lambda r: (r.n, r.trial)))

    @property
    def digest(self) -> str:
        return self.config.digest

    def quantities(self) -> list:
        return list(dict.fromkeys(r.quantity for r in self.rows))

    def values(self, n: int, quantity: str) -> list:
        return [r.value for r in self.rows if r.n == n and r.quantity == quantity]

    # -- serialization ----------------------------------------------------
    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in self.rows:
            w.writerow((r.n, r.trial, r.seed, r.quantity, format_value(r.value), r.verdict))
        return buf.getvalue()

    def manifest(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "config_digest": self.digest,
            "version": self.version,
            "wall_clock_s": round(self.wall_clock, 3),
            "environment": environment(),
            "conventions": CONVENTIONS,
            "summary": _jsonable(self.summary),
            "rows_file": ROWS_FILE,
        }

    def manifest_json(self) -> str:
        return json.dumps(self.manifest(), sort_keys=True, indent=2) + "\n"


def environment() -> dict:
    import numpy
    import scipy
    return {"python": platform.python_version(), "numpy": numpy.__version__,
            "scipy": scipy.__version__, "machine": platform.machine()}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return format_value(obj) if not math.isnan(obj) else "nan"
    return obj


def rows_from_csv(text: str) -> list:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [Row(int(d["n"]), int(d["trial"]), int(d["seed"]), d["quantity"],
                parse_value(d["value"]), d["verdict"]) for d in reader]


def svg_scatter(run: RunRecord, quantity: str | None = None) -> str:
    """Minimal scatter of n against the measured value, as SVG text."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    quantity = quantity or (run.quantities() or ["value"])[0]
    pts = [(r.n, r.value) for r in run.rows if r.quantity == quantity]
    finite = [(n, v) for n, v in pts if math.isfinite(v)]
    with matplotlib.rc_context({"svg.hashsalt": "randiv", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        if finite:
            xs, ys = zip(*finite)
            ax.scatter(xs, ys, s=8, alpha=0.5)
        ax.set_xlabel("n")
        ax.set_ylabel(quantity)
        dropped = len(pts) - len(finite)
        ax.set_title(f"{run.config.experiment}" + (f" ({dropped} infinite not shown)" if dropped else ""))
        fig.tight_layout()
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()


def _write(path: str, text: str) -> str:
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise ReportError(f"{path}: {e.strerror or e}") from e
    return path


def report(run: RunRecord, out_dir: str, formats=("csv", "json")) -> list:
    """Write the requested formats into ``out_dir``; returns the written paths."""
    formats = [f.strip() for f in formats if f.strip()]
    bad = set(formats) - set(FORMATS)
    if bad:
        raise ValueError(f"unknown formats {sorted(bad)}")
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as e:
        raise ReportError(f"{out_dir}: {e.strerror or e}") from e
    written = []
    if "csv" in formats:
        written.append(_write(os.path.join(out_dir, ROWS_FILE), run.to_csv()))
    if "json" in formats:
        written.append(_write(os.path.join(out_dir, MANIFEST_FILE), run.manifest_json()))
    if "svg" in formats:
        written.append(_write(os.path.join(out_dir, SVG_FILE), svg_scatter(run)))
    return written


def load_run(run_dir: str) -> RunRecord:
    """Rebuild a record from a directory holding a manifest and its rows file."""
    mpath = os.path.join(run_dir, MANIFEST_FILE)
    try:
        with open(mpath) as fh:
            man = json.load(fh)
        rpath = os.path.join(run_dir, man.get("rows_file", ROWS_FILE))
        with open(rpath) as fh:
            rows = rows_from_csv(fh.read())
    except OSError as e:
        raise ReportError(f"{e.filename}: {e.strerror}") from e
    cfg = ExperimentConfig.from_dict(man["config"])
    if cfg.digest != man["config_digest"]:
        raise ValueError("manifest digest does not match its config")
    return RunRecord(cfg, tuple(rows), man.get("summary", {}), man.get("wall_clock_s", 0.0),
                     man.get("version", __version__))
