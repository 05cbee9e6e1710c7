"""Divergence of a pair of points with respect to a basepoint.

``div(a, b, c; delta)`` is the length of a shortest path from ``a`` to ``b``
avoiding the open ball ``{p : d(c, p) < delta * r}`` with
``r = min(d(c, a), d(c, b))``, or infinity when no such path exists.
Comparisons against ``delta * r`` are exact rationals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .cayley import distance, geodesic
from .groups import GroupSpec, Word, invert, multiply, normal_form, power
from .projections import (ConstantsProfile, CosetId, FProfile, HTSet, _proj_interval,
                          distance_to_subgroup)
from .search import SearchOutcome, astar_search, bidirectional_search, check_path

SEARCHES = {"astar": astar_search, "bfs": bidirectional_search}

DEFAULT_BUDGET = 2_000_000


class MalformedQueryError(ValueError):
    pass


FINITE = "finite"
DISCONNECTED = "disconnected"
BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class DivergenceQuery:
    a: Word
    b: Word
    c: Word = ()
    delta: Fraction = Fraction(1, 2)
    budget: int = DEFAULT_BUDGET
    length_cap: int | None = None
    method: str = "astar"

    def __post_init__(self):
        if self.method not in SEARCHES:
            raise MalformedQueryError(f"unknown search method {self.method!r}")
        d = Fraction(self.delta)
        object.__setattr__(self, "delta", d)
        if not 0 < d < 1:
            raise MalformedQueryError("delta must lie in (0, 1)")


@dataclass(frozen=True)
class DivergenceResult:
    verdict: str
    r: int
    length: int | None = None
    witness: tuple | None = None
    explored: int = 0
    frontier_size: int = 0
    best_lower_bound: int = 0
    certificate: str = ""

    @property
    def certified_value(self) -> float:
        """Length, infinity, or the certified lower bound, by verdict."""
        if self.verdict == FINITE:
            return self.length
        if self.verdict == DISCONNECTED:
            return math.inf
        return self.best_lower_bound


def forbidden_predicate(c: Word, delta: Fraction, r: int, spec: GroupSpec):
    """``p -> True`` when ``d(c, p) < delta * r`` (exact)."""
    num, den = delta.numerator, delta.denominator
    c = normal_form(c, spec)
    c_inv = normal_form(invert(c), spec)
    if not c:
        return lambda p: len(p) * den < num * r
    return lambda p: len(multiply(c_inv, p, spec)) * den < num * r


def divergence(q: DivergenceQuery, spec: GroupSpec) -> DivergenceResult:
    """Exact ball-avoiding distance, or a certified lower bound on budget exhaustion.

    In a free group any path from ``a`` to ``b`` visits every vertex of the
    geodesic, so a forbidden geodesic vertex certifies disconnection and
    otherwise the geodesic itself is optimal.
    """
    a, b, c = (normal_form(w, spec) for w in (q.a, q.b, q.c))
    if a == c or b == c:
        raise MalformedQueryError("a and b must differ from the basepoint c")
    r = min(distance(c, a, spec), distance(c, b, spec))
    forbidden = forbidden_predicate(c, q.delta, r, spec)
    if forbidden(a) or forbidden(b):  # pragma: no cover - impossible for delta < 1
        raise MalformedQueryError("an endpoint lies in the forbidden ball")

    def allowed(p):
        return not forbidden(p)

    if spec.is_free:
        path = geodesic(a, b, spec)
        for v in path:
            if forbidden(v):
                return DivergenceResult(DISCONNECTED, r, explored=0, certificate="tree-cut-vertex")
        return DivergenceResult(FINITE, r, len(path) - 1, tuple(path), certificate="tree-geodesic",
                                best_lower_bound=len(path) - 1)
    res = SEARCHES[q.method](a, b, allowed, spec, q.budget, q.length_cap)
    if res.outcome == SearchOutcome.FOUND:
        if not check_path(res.path, a, b, allowed, spec):  # pragma: no cover
            raise AssertionError("search returned an invalid witness")
        return DivergenceResult(FINITE, r, res.length, res.path, res.expanded,
                                best_lower_bound=res.length, certificate=q.method)
    if res.outcome == SearchOutcome.EXHAUSTED:
        return DivergenceResult(DISCONNECTED, r, explored=res.expanded,
                                certificate="exhausted-component")
    return DivergenceResult(BUDGET_EXCEEDED, r, explored=res.expanded,
                            frontier_size=res.frontier_size,
                            best_lower_bound=res.lower_bound, certificate="budget")


def write_witness(path, spec: GroupSpec) -> str:
    """One normal-form word per line."""
    from .groups import format_word
    return "".join(format_word(v, spec) + "\n" for v in path)


def read_witness(text: str, spec: GroupSpec) -> list:
    from .groups import parse_word
    return [parse_word(line, spec) for line in text.split("\n") if line.strip()]


# --- path length lower bounds ----------------------------------------------

@dataclass
class PathBoundReport:
    hypothesis_holds: bool
    length: int
    bound: float
    offending: list = field(default_factory=list)

    @property
    def margin(self) -> float | None:
        return self.length - self.bound if self.hypothesis_holds else None

    @property
    def passed(self) -> bool | None:
        return self.length > self.bound if self.hypothesis_holds else None


def path_length(alpha, spec: GroupSpec) -> int:
    return sum(distance(u, v, spec) for u, v in zip(alpha, alpha[1:]))


def path_bound_check(alpha, x: Word, y: Word, F: HTSet, s: int, profile: FProfile,
                     constants: ConstantsProfile, spec: GroupSpec) -> PathBoundReport:
    """Test ``length(alpha) > |F| f(s)`` when its hypothesis holds pointwise.

    Hypothesis: every ``p`` on ``alpha`` whose projection to a coset of ``F``
    is within ``theta + B + 2L`` of that of ``x`` stays at distance at least
    ``s`` from the coset.
    """
    alpha = [normal_form(p, spec) for p in alpha]
    if alpha[0] != normal_form(x, spec) or alpha[-1] != normal_form(y, spec):
        raise ValueError("alpha must run from x to y")
    K = max((distance(u, v, spec) for u, v in zip(alpha, alpha[1:])), default=0)
    if K > max(constants.K, 1):
        raise ValueError(f"alpha has a jump of {K} > K = {constants.K}")
    reach = constants.theta + constants.B + 2 * constants.L
    offending = []
    for c in F.cosets:
        lx, hx, _ = _proj_interval(normal_form(x, spec), c, spec)
        for p in alpha:
            lp, hp, _ = _proj_interval(p, c, spec)
            if max(hx, hp) - min(lx, lp) <= reach:
                if distance_to_subgroup(p, c.g0, spec, c.rep) < s:
                    offending.append((p, c))
    length = path_length(alpha, spec)
    bound = len(F) * profile(s)
    return PathBoundReport(not offending, length, bound, offending)


def worst_case_probe(n: int, g0: Word, delta, profile: FProfile | None, spec: GroupSpec,
                     budget: int = DEFAULT_BUDGET) -> DivergenceResult:
    """Divergence of ``g0^m`` and ``g0^-m`` around the identity, ``m = ceil(n / |g0|)``."""
    g0 = normal_form(g0, spec)
    m = -(-n // len(g0))
    a = power(g0, m, spec)
    b = power(g0, -m, spec)
    return divergence(DivergenceQuery(a, b, (), Fraction(delta), budget), spec)
