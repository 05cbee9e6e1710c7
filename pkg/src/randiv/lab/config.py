"""Declarative experiment configuration, loaded from JSON."""
from __future__ import annotations

import hashlib
import json
from functools import cached_property
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction

from ..groups import GroupSpec, parse_word, spec_from_config
from ..projections import ConstantsProfile, FProfile
from ..stochastic import Kernel, kernel_from_config

EXPERIMENTS = ("random_divergence", "ht_growth", "ht_intersection", "a_set_growth", "gromov_tail")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    group: dict = field(default_factory=lambda: {"type": "free", "rank": 2})
    kernel: dict = field(default_factory=lambda: {"type": "srw"})
    g0: str = "ab"
    constants: dict = field(default_factory=dict)
    profile: dict = field(default_factory=lambda: {"family": "linear", "slope": 1})
    delta: str = "1/2"
    delta0: str = "1/2"
    C: str = "3"
    n_values: tuple = (10,)
    trials: int = 100
    base_seed: int = 0
    budget: int = 200_000
    method: str = "astar"
    T: int = 4
    o: str = "1"
    # frozen pilot values; None means "derive from the smallest n of this run"
    eps0: float | None = None
    inconclusive_limit: float = 0.10
    # tail convention for the tail experiments: "gt" is P[X > t], "ge" is P[X >= t]
    tail: str = "gt"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENTS}")
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if any(n < 0 for n in self.n_values):
            raise ConfigError("n values must be non-negative")
        if self.trials < 0:
            raise ConfigError("trials must be non-negative")
        d, d0 = Fraction(self.delta), Fraction(self.delta0)
        if not (0 < d <= d0 < 1):
            raise ConfigError(f"need 0 < delta <= delta0 < 1, got {d}, {d0}")
        if self.tail not in ("gt", "ge"):
            raise ConfigError("tail must be 'gt' or 'ge'")
        if Fraction(self.C) <= 0:
            raise ConfigError("C must be positive")

    # -- derived objects --------------------------------------------------
    @cached_property
    def spec(self) -> GroupSpec:
        return spec_from_config({"group": self.group, **({"order": self.group["order"]}
                                                         if "order" in self.group else {})})

    @cached_property
    def kernel_obj(self) -> Kernel:
        return kernel_from_config(self.kernel, self.spec)

    @property
    def g0_word(self):
        return parse_word(self.g0, self.spec)

    @property
    def o_word(self):
        return parse_word(self.o, self.spec)

    @property
    def delta_frac(self) -> Fraction:
        return Fraction(self.delta)

    @property
    def C_frac(self) -> Fraction:
        return Fraction(self.C)

    @property
    def constants_obj(self) -> ConstantsProfile:
        return ConstantsProfile(**self.constants)

    @cached_property
    def profile_obj(self) -> FProfile:
        return FProfile.from_config(self.profile)

    def threshold(self, n: int) -> float:
        """``n f(n / C) / C``."""
        C = float(self.C_frac)
        return n * self.profile_obj(n / C) / C

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        d = asdict(self)
        d["n_values"] = list(self.n_values)
        return d

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(doc) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        doc = dict(doc)
        for key in ("delta", "delta0", "C"):
            if key in doc:
                doc[key] = str(Fraction(str(doc[key])))
        return cls(**doc)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def replace(self, **changes) -> "ExperimentConfig":
        return ExperimentConfig.from_dict({**self.to_dict(), **changes})
