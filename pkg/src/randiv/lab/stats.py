"""Binomial intervals and tail fits."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binomtest

MIN_BIN_COUNT = 20


@dataclass(frozen=True)
class Estimate:
    successes: int
    trials: int
    p_hat: float
    wilson_low: float
    wilson_high: float

    @classmethod
    def from_counts(cls, successes: int, trials: int, level: float = 0.95) -> "Estimate":
        if trials <= 0:
            raise ValueError("an estimate needs at least one trial")
        if not 0 <= successes <= trials:
            raise ValueError("successes must lie in [0, trials]")
        ci = binomtest(successes, trials).proportion_ci(confidence_level=level, method="wilson")
        p = successes / trials
        # clamp float round-off so that low <= p_hat <= high holds exactly
        return cls(successes, trials, p, min(max(ci.low, 0.0), p), max(min(ci.high, 1.0), p))

    def to_dict(self) -> dict:
        return {"successes": self.successes, "trials": self.trials, "p_hat": self.p_hat,
                "wilson_low": self.wilson_low, "wilson_high": self.wilson_high}


@dataclass(frozen=True)
class TailFit:
    t: tuple
    counts: tuple  # number of observations with value > t
    freq: tuple
    slope: float | None  # None when fewer than two bins qualify
    intercept: float | None
    bins_used: int

    @property
    def monotone(self) -> bool:
        return all(b <= a for a, b in zip(self.freq, self.freq[1:]))

    def to_dict(self) -> dict:
        return {"t": list(self.t), "counts": list(self.counts), "freq": list(self.freq),
                "slope": self.slope, "intercept": self.intercept, "bins_used": self.bins_used,
                "monotone": self.monotone}


def tail_fit(values, strict: bool = True, min_count: int = MIN_BIN_COUNT) -> TailFit:
    """Empirical tail ``P[X > t]`` (or ``P[X >= t]`` with ``strict=False``) and its log-linear fit.

    Only bins with at least ``min_count`` observations enter the fit; the
    weights are ``sqrt(count)``, the inverse standard error of a log
    frequency.
    """
    vals = np.asarray(list(values), dtype=float)
    N = len(vals)
    if N == 0:
        return TailFit((), (), (), None, None, 0)
    top = int(math.floor(vals.max())) + 1 if np.isfinite(vals).all() else 0
    ts = np.arange(0, max(top, 0) + 1)
    counts = np.array([(vals > t).sum() if strict else (vals >= t).sum() for t in ts])
    freq = counts / N
    use = counts >= min_count
    slope = intercept = None
    if use.sum() >= 2:
        slope, intercept = np.polyfit(ts[use], np.log(freq[use]), 1, w=np.sqrt(counts[use]))
        slope, intercept = float(slope), float(intercept)
    return TailFit(tuple(int(t) for t in ts), tuple(int(c) for c in counts),
                   tuple(float(f) for f in freq), slope, intercept, int(use.sum()))
