"""Projections onto cosets of a cyclic subgroup and the sets built from them.

Two geometries are supported, chosen by whether the group has commuting
generators:

* free groups: the Cayley graph is a tree and ``h<g0>`` is represented by its
  axis, the bi-infinite line through ``h`` labelled by ``g0``.  Projections are
  exact nearest points on that line and are single vertices.
* RAAGs: ``h<g0>`` is the orbit ``{h g0^k}`` and the projection of ``x`` is
  the set of orbit points nearest to ``x`` in the word metric.

In both cases points of a coset are addressed by an integer coordinate ``t``
(axis position, or ``k * |g0|`` for orbit points) so that the distance
between two points of the same coset is ``|t1 - t2|``.  In a RAAG the
elementary closure of ``g0`` may be larger than ``<g0>``; everything here
works with ``<g0>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .cayley import ball, geodesic, neighbors
from .groups import (GroupSpec, Word, invert, is_cyclically_reduced, is_proper_power,
                     multiply, normal_form, power, push_letter, shortlex_key)


class InconclusiveProjectionError(RuntimeError):
    pass


class PreconditionError(ValueError):
    pass


# --- constants and profiles ------------------------------------------------

@dataclass(frozen=True)
class ConstantsProfile:
    B: int = 0
    theta: int = 0
    L: int = 1
    D: int = 0
    T: int = 4
    K: int = 1

    @property
    def order_sensitive_ok(self) -> bool:
        return self.T >= 100 * (self.theta + self.B + self.L)


@dataclass(frozen=True)
class FProfile:
    """Nondecreasing diverging function used as the f of an f-divergent element."""

    family: str  # "linear" | "exponential" | "table"
    params: tuple = ()
    description: str = ""

    @classmethod
    def linear(cls, slope: float, offset: float = 0.0) -> "FProfile":
        if slope <= 0:
            raise ValueError("a linear profile needs positive slope")
        return cls("linear", (slope, offset), f"{slope}*d + {offset}")

    @classmethod
    def exponential(cls, base: float, scale: float = 1.0) -> "FProfile":
        if base <= 1 or scale <= 0:
            raise ValueError("an exponential profile needs base > 1 and scale > 0")
        return cls("exponential", (base, scale), f"{scale}*{base}^d")

    @classmethod
    def table(cls, pairs) -> "FProfile":
        pairs = tuple(sorted((float(d), float(v)) for d, v in pairs))
        vals = [v for _, v in pairs]
        if not pairs or any(b < a for a, b in zip(vals, vals[1:])):
            raise ValueError("a table profile must be nonempty and nondecreasing")
        return cls("table", pairs, "table")

    def __call__(self, d: float) -> float:
        if self.family == "linear":
            slope, offset = self.params
            return slope * d + offset
        if self.family == "exponential":
            base, scale = self.params
            return scale * base ** d
        # step function: value at the largest tabulated point <= d
        val = 0.0
        for x, v in self.params:
            if x <= d:
                val = v
        return val

    def describe(self) -> dict:
        return {"family": self.family, "params": list(self.params), "description": self.description}

    @classmethod
    def from_config(cls, doc: dict) -> "FProfile":
        fam = doc.get("family", "linear")
        if fam == "linear":
            return cls.linear(float(doc.get("slope", 1)), float(doc.get("offset", 0)))
        if fam == "exponential":
            return cls.exponential(float(doc["base"]), float(doc.get("scale", 1)))
        if fam == "table":
            return cls.table(doc["pairs"])
        raise ValueError(f"unknown profile family {fam!r}")


# --- cosets ----------------------------------------------------------------

@dataclass(frozen=True, order=False)
class CosetId:
    g0: Word
    rep: Word

    def translate(self, g: Word, spec: GroupSpec) -> "CosetId":
        return coset_of(multiply(g, self.rep, spec), self.g0, spec)


def check_g0(g0: Word, spec: GroupSpec) -> Word:
    g0 = normal_form(g0, spec)
    if not g0:
        raise PreconditionError("g0 must be nontrivial")
    if not is_cyclically_reduced(g0, spec):
        raise PreconditionError("g0 must be cyclically reduced")
    if is_proper_power(g0, spec):
        raise PreconditionError("g0 must not be a proper power")
    return g0


@lru_cache(maxsize=64)
def _patterns(g0: Word, spec: GroupSpec):
    return g0, normal_form(invert(g0), spec)


def coset_of(h: Word, g0: Word, spec: GroupSpec) -> CosetId:
    """Coset ``h<g0>`` with its shortlex-least element as representative.

    The search over ``h g0^k`` walks outward in both directions and stops once
    ``|k| |g0| - |h|`` (a lower bound on ``|h g0^k|``) exceeds the best length.
    """
    h = normal_form(h, spec)
    fwd, bwd = _patterns(g0, spec)
    p = len(fwd)
    best = h
    bkey = shortlex_key(h, spec)
    for step in (fwd, bwd):
        cur = list(h)
        k = 0
        while True:
            k += 1
            if k * p - len(h) > len(best):
                break
            for x in step:
                push_letter(cur, x, spec)
            if len(cur) > len(best):
                continue
            key = shortlex_key(cur, spec)
            if key < bkey:
                best, bkey = tuple(cur), key
    return CosetId(g0, best)


def same_coset(h1: Word, h2: Word, g0: Word, spec: GroupSpec) -> bool:
    return coset_of(h1, g0, spec) == coset_of(h2, g0, spec)


# --- points and projections ------------------------------------------------

@dataclass(frozen=True)
class ProjImage:
    coords: tuple  # sorted coordinates on the target coset
    points: tuple  # the corresponding words
    dist: int  # distance from the projected point to the image

    @property
    def diameter(self) -> int:
        return self.coords[-1] - self.coords[0]

    @property
    def lo(self) -> int:
        return self.coords[0]

    @property
    def hi(self) -> int:
        return self.coords[-1]


def coset_point(coset: CosetId, t: int, spec: GroupSpec) -> Word:
    """Point at coordinate ``t`` of the coset (axis vertex or orbit point)."""
    fwd, bwd = _patterns(coset.g0, spec)
    if not spec.is_free and t % len(fwd):
        raise ValueError("RAAG coset coordinates are multiples of |g0|")
    pat = fwd if t >= 0 else bwd
    cur = list(coset.rep)
    for i in range(abs(t)):
        push_letter(cur, pat[i % len(pat)], spec)
    return tuple(cur)


def _tree_coord(x: Word, coset: CosetId, spec: GroupSpec):
    """Axis coordinate of the nearest axis vertex and the distance to it."""
    fwd, bwd = _patterns(coset.g0, spec)
    u = multiply(normal_form(invert(coset.rep), spec), x, spec)
    if not u:
        return 0, 0
    if u[0] == fwd[0]:
        pat, sign = fwd, 1
    elif u[0] == bwd[0]:
        pat, sign = bwd, -1
    else:
        return 0, len(u)
    p = len(pat)
    k = 0
    while k < len(u) and u[k] == pat[k % p]:
        k += 1
    return sign * k, len(u) - k


def _orbit_coords(x: Word, coset: CosetId, spec: GroupSpec):
    """Coordinates of the orbit points nearest to ``x`` and their distance."""
    fwd, bwd = _patterns(coset.g0, spec)
    p = len(fwd)
    v = multiply(normal_form(invert(x), spec), coset.rep, spec)
    best = len(v)
    found = [0]
    for step, sign in ((fwd, 1), (bwd, -1)):
        cur = list(v)
        k = 0
        while True:
            k += 1
            if k * p - len(v) > best:
                break
            for s in step:
                push_letter(cur, s, spec)
            d = len(cur)
            if d < best:
                best, found = d, [sign * k * p]
            elif d == best:
                found.append(sign * k * p)
    return sorted(found), best


def _proj_interval(x: Word, coset: CosetId, spec: GroupSpec):
    if spec.is_free:
        t, d = _tree_coord(x, coset, spec)
        return t, t, d
    ts, d = _orbit_coords(x, coset, spec)
    return ts[0], ts[-1], d


def project(x: Word, coset: CosetId, spec: GroupSpec, search_radius: int | None = None) -> ProjImage:
    """Closest-point projection of ``x`` onto a coset.

    Free groups: minimizes over axis vertices with coordinates in
    ``[-W, W]``, where ``W`` is ``search_radius`` (default: large enough to be
    conclusive); a minimizer on the window boundary raises
    :class:`InconclusiveProjectionError`.  RAAGs: exact nearest orbit points.
    """
    x = normal_form(x, spec)
    if not spec.is_free:
        ts, d = _orbit_coords(x, coset, spec)
        if search_radius is not None and d > search_radius:
            raise InconclusiveProjectionError(
                f"no coset point within {search_radius} of the projected element")
        return ProjImage(tuple(ts), tuple(coset_point(coset, t, spec) for t in ts), d)
    fwd, bwd = _patterns(coset.g0, spec)
    u = multiply(normal_form(invert(coset.rep), spec), x, spec)
    W = search_radius if search_radius is not None else len(u) + len(fwd)
    inv_u = normal_form(invert(u), spec)
    best_d, best_t = len(inv_u), 0
    for pat, sign in ((fwd, 1), (bwd, -1)):
        cur = list(inv_u)  # u^-1 * (axis point)
        for i in range(W):
            push_letter(cur, pat[i % len(pat)], spec)
            if len(cur) < best_d:
                best_d, best_t = len(cur), sign * (i + 1)
    if W > 0 and abs(best_t) == W or W == 0:
        raise InconclusiveProjectionError(
            f"nearest axis point sits on the search window boundary (W={W})")
    return ProjImage((best_t,), (coset_point(coset, best_t, spec),), best_d)


def proj_distance(x: Word, y: Word, coset: CosetId, spec: GroupSpec) -> int:
    """``diam(pi(x) u pi(y))`` on the coset."""
    lx, hx, _ = _proj_interval(normal_form(x, spec), coset, spec)
    ly, hy, _ = _proj_interval(normal_form(y, spec), coset, spec)
    return max(hx, hy) - min(lx, ly)


def distance_to_subgroup(p: Word, g0: Word, spec: GroupSpec, rep: Word = ()) -> int:
    """Exact word-metric distance from ``p`` to the orbit ``rep <g0>``."""
    _, d = _orbit_coords(normal_form(p, spec), CosetId(g0, normal_form(rep, spec)), spec)
    return d


def project_coset(source: CosetId, target: CosetId, spec: GroupSpec):
    """Projection of a whole coset onto another, as a coordinate interval.

    Tree only: the image of a line under nearest-point projection is the
    segment between the images of its two ends, which stabilize once the
    sampled points are past the bridge.
    """
    if not spec.is_free:
        raise NotImplementedError("coset-to-coset projections are implemented for free groups only")
    if source == target:
        raise PreconditionError("source and target cosets coincide")
    fwd, bwd = _patterns(source.g0, spec)
    p = len(fwd)
    sep = len(multiply(normal_form(invert(target.rep), spec), source.rep, spec))
    M = sep // p + 3
    ends = []
    for k in (M, -M):
        far = multiply(source.rep, power(source.g0, k, spec), spec)
        t, _ = _tree_coord(far, target, spec)
        farther = multiply(far, power(source.g0, 1 if k > 0 else -1, spec), spec)
        t2, _ = _tree_coord(farther, target, spec)
        if t != t2:  # pragma: no cover - M is past the bridge by construction
            raise InconclusiveProjectionError("coset projection did not stabilize")
        ends.append(t)
    return min(ends), max(ends)


def coset_proj_distance(x_or_coset, other: CosetId, target: CosetId, spec: GroupSpec) -> int:
    """``d_target(a, other)`` where ``a`` is a point or a coset."""
    if isinstance(x_or_coset, CosetId):
        lo1, hi1 = project_coset(x_or_coset, target, spec)
    else:
        lo1, hi1, _ = _proj_interval(normal_form(x_or_coset, spec), target, spec)
    lo2, hi2 = project_coset(other, target, spec)
    return max(hi1, hi2) - min(lo1, lo2)


def _interval(a, target: CosetId, spec: GroupSpec):
    if isinstance(a, CosetId):
        return project_coset(a, target, spec)
    lo, hi, _ = _proj_interval(normal_form(a, spec), target, spec)
    return lo, hi


def d_on(target: CosetId, a, b, spec: GroupSpec) -> int:
    """Projection distance on ``target`` between points and/or cosets ``a``, ``b``."""
    lo1, hi1 = _interval(a, target, spec)
    lo2, hi2 = _interval(b, target, spec)
    return max(hi1, hi2) - min(lo1, lo2)


def same_projection(target: CosetId, a, b, spec: GroupSpec) -> bool:
    """Set equality of the projections of ``a`` and ``b`` onto ``target``."""
    return _interval(a, target, spec) == _interval(b, target, spec)


# --- H_T -------------------------------------------------------------------

@dataclass(frozen=True)
class HTSet:
    threshold: int
    x: Word
    y: Word
    cosets: tuple
    distances: tuple  # d_{h gamma}(x, y) for each coset, same order
    mode: str = "tree"
    census_radius: int | None = None

    def __len__(self):
        return len(self.cosets)

    def __iter__(self):
        return iter(self.cosets)

    def __contains__(self, c):
        return c in self.cosets

    @property
    def reps(self) -> frozenset:
        return frozenset(c.rep for c in self.cosets)


def tree_runs(x: Word, y: Word, g0: Word, spec: GroupSpec, min_len: int = 1):
    """Maximal segments of the geodesic ``[x, y]`` lying on translates of the g0 axis.

    Yields ``(start, end, coset)`` with ``end - start`` the overlap length;
    segments shorter than ``min_len`` are dropped.
    """
    fwd, bwd = _patterns(g0, spec)
    p = len(fwd)
    x = normal_form(x, spec)
    u = multiply(normal_form(invert(x), spec), y, spec)
    n = len(u)
    runs = []
    for pat in (fwd, bwd):
        for a in range(p):
            i = 0
            while i < n:
                if u[i] != pat[(i + a) % p]:
                    i += 1
                    continue
                j = i
                while j < n and u[j] == pat[(j + a) % p]:
                    j += 1
                runs.append((i, j, pat, (i + a) % p))
                i = j
    out = []
    for i, j, pat, phase in runs:
        if j - i < min_len:
            continue
        v = multiply(x, u[:i], spec)
        h = multiply(v, normal_form(invert(pat[:phase]), spec), spec)
        out.append((i, j, coset_of(h, g0, spec)))
    return out


def enumerate_HT(x: Word, y: Word, T: int, g0: Word, spec: GroupSpec,
                 mode: str = "tree", radius: int | None = None, node_cap: int = 200_000) -> HTSet:
    """Cosets ``h<g0>`` with ``d_{h<g0>}(x, y) >= T``.

    ``mode="tree"`` (free groups) is exact: the projection distance equals
    the length of the overlap between ``[x, y]`` and the coset's axis.
    ``mode="census"`` checks every coset meeting ``ball(midpoint, radius)``
    and is only a lower bound on the true set.
    """
    if T < 1:
        raise PreconditionError("T must be >= 1")
    x = normal_form(x, spec)
    y = normal_form(y, spec)
    g0 = normal_form(g0, spec)
    if mode == "tree":
        if not spec.is_free:
            raise PreconditionError("tree mode needs a free group")
        best: dict = {}
        for i, j, c in tree_runs(x, y, g0, spec, T):
            if j - i >= T and (c not in best or best[c][1] - best[c][0] < j - i):
                best[c] = (i, j)
        ordered = sorted(best.items(), key=lambda kv: (kv[1][0], kv[1][1]))
        return HTSet(T, x, y, tuple(c for c, _ in ordered),
                     tuple(j - i for _, (i, j) in ordered), "tree")
    if mode != "census":
        raise ValueError(f"unknown mode {mode!r}")
    if radius is None:
        raise PreconditionError("census mode needs a radius")
    path = geodesic(x, y, spec)
    mid = path[len(path) // 2]
    found = {}
    for h in ball(mid, radius, spec, node_cap=node_cap).members:
        c = coset_of(h, g0, spec)
        if c in found:
            continue
        found[c] = proj_distance(x, y, c, spec)
    hits = [(c, d) for c, d in found.items() if d >= T]
    hits.sort(key=lambda cd: (_proj_interval(x, cd[0], spec)[2], shortlex_key(cd[0].rep, spec)))
    return HTSet(T, x, y, tuple(c for c, _ in hits), tuple(d for _, d in hits),
                 "census", radius)


def brute_force_HT(x: Word, y: Word, T: int, g0: Word, spec: GroupSpec, tube: int | None = None) -> set:
    """Independent H_T oracle for free groups.

    Candidates are all cosets through elements within ``tube`` (default
    ``|g0|``) of a vertex of ``[x, y]``; each is tested with :func:`project`
    (window minimization) rather than axis matching.
    """
    g0 = normal_form(g0, spec)
    tube = len(g0) if tube is None else tube
    elems = set()
    for v in geodesic(x, y, spec):
        elems.update(ball(v, tube, spec).members)
    cosets = {coset_of(h, g0, spec) for h in elems}
    out = set()
    for c in cosets:
        px = project(x, c, spec)
        py = project(y, c, spec)
        if abs(px.coords[0] - py.coords[0]) >= T:
            out.add(c)
    return out


@dataclass
class OrderReport:
    pairs_checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.violations


def order_check(ht: HTSet, spec: GroupSpec, B: int = 0) -> OrderReport:
    """Check the four equivalent order conditions on every ordered pair of ``ht``."""
    rep = OrderReport()
    cs = ht.cosets
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            h, k = cs[i], cs[j]
            conds = (
                d_on(h, ht.x, k, spec) > B,
                same_projection(k, ht.x, h, spec),
                d_on(k, ht.y, h, spec) > B,
                same_projection(h, ht.y, k, spec),
            )
            rep.pairs_checked += 1
            if not all(conds):
                rep.violations.append((i, j, conds))
    return rep


def exceptional_count(x, y, z, T: int, g0: Word, spec: GroupSpec, B: int = 0) -> int:
    """Cosets of H_T(x, y) on which z projects more than B away from both x and y."""
    ht = enumerate_HT(x, y, T, g0, spec)
    return sum(1 for c in ht.cosets
               if proj_distance(z, x, c, spec) > B and proj_distance(z, y, c, spec) > B)


def triangle_defect(x, y, z, T: int, g0: Word, spec: GroupSpec) -> int:
    """``|H_T(x,z)| - |H_T(x,y)| - |H_T(y,z)|``; bounded by 2 on the lemma's hypotheses."""
    return (len(enumerate_HT(x, z, T, g0, spec)) - len(enumerate_HT(x, y, T, g0, spec))
            - len(enumerate_HT(y, z, T, g0, spec)))


@dataclass(frozen=True)
class BehrstockReport:
    antecedent: bool
    consequent: bool
    margin: int  # d_{c1}(x, c2) - B

    @property
    def passed(self) -> bool:
        return (not self.antecedent) or self.consequent


def behrstock_check(x: Word, c1: CosetId, c2: CosetId, B: int, spec: GroupSpec) -> BehrstockReport:
    if c1 == c2:
        raise PreconditionError("behrstock_check needs distinct cosets")
    d = d_on(c1, x, c2, spec)
    return BehrstockReport(d > B, same_projection(c2, x, c1, spec), d - B)


@dataclass(frozen=True)
class BehrstockCensus:
    B_hat: int
    instances: int
    failures_at_zero: int


def behrstock_census(g0: Word, spec: GroupSpec, coset_radius: int = 4, x_radius: int = 6,
                     fix_first: bool = True) -> BehrstockCensus:
    """Smallest B with no strong-Behrstock failure over a finite domain.

    With ``fix_first`` the first coset is ``<g0>`` itself (the other cosets
    and points range over balls), which covers every configuration up to
    translation by equivariance.
    """
    g0 = check_g0(g0, spec)
    reps = {coset_of(h, g0, spec) for h in ball((), coset_radius, spec).members}
    firsts = [CosetId(g0, ())] if fix_first else sorted(reps, key=lambda c: shortlex_key(c.rep, spec))
    xs = list(ball((), x_radius, spec).members)
    B_hat = 0
    n = fails = 0
    for c1 in firsts:
        others = [c for c in reps if c != c1]
        proj_c1 = {c2: project_coset(c2, c1, spec) for c2 in others}
        proj_c2 = {c2: project_coset(c1, c2, spec) for c2 in others}
        xp1 = {x: _tree_coord(x, c1, spec)[0] for x in xs}
        for c2 in others:
            lo, hi = proj_c1[c2]
            target = proj_c2[c2]
            for x in xs:
                t = xp1[x]
                d = max(hi, t) - min(lo, t)
                n += 1
                t2, _ = _tree_coord(x, c2, spec)
                if (t2, t2) != target:
                    if d > 0:
                        fails += 1
                    B_hat = max(B_hat, d)
    return BehrstockCensus(B_hat, n, fails)


def a_set(x, y, T: int, S: float, g0: Word, spec: GroupSpec, ht: HTSet | None = None) -> HTSet:
    """Cosets of H_T(x, y) whose projection of ``x`` lies in the closed ball B(x, S)."""
    ht = ht or enumerate_HT(x, y, T, g0, spec)
    keep = [(c, d) for c, d in zip(ht.cosets, ht.distances)
            if _proj_interval(ht.x, c, spec)[2] <= S]
    return HTSet(ht.threshold, ht.x, ht.y, tuple(c for c, _ in keep),
                 tuple(d for _, d in keep), ht.mode, ht.census_radius)


@dataclass(frozen=True)
class LipschitzCensus:
    L_hat: int
    D_hat: int
    D_mult: int
    points: int


def lipschitz_and_comparability_census(g0: Word, spec: GroupSpec, radius: int) -> LipschitzCensus:
    g0 = check_g0(g0, spec)
    gamma = CosetId(g0, ())
    L_hat = 0
    D_raw = -math.inf
    pts = ball((), radius, spec).members
    cache = {}

    def interval(p):
        if p not in cache:
            cache[p] = _proj_interval(p, gamma, spec)
        return cache[p]

    for p in pts:
        lo, hi, dp = interval(p)
        for q in neighbors(p, spec):
            lo2, hi2, _ = interval(q)
            L_hat = max(L_hat, max(hi, hi2) - min(lo, lo2))
        D_raw = max(D_raw, dp - distance_to_subgroup(p, g0, spec))
    return LipschitzCensus(L_hat, max(0, int(D_raw)), 1, len(pts))


def wpd_census(g0: Word, kappa: int, N: int, spec: GroupSpec, radius: int) -> int:
    """Count ``h`` in ball(1, radius) with ``|h| < kappa`` and ``d(g0^N, h g0^N) < kappa``."""
    if radius < kappa:
        raise PreconditionError("radius must be >= kappa")
    if kappa <= 0:
        return 0
    g0 = normal_form(g0, spec)
    gN = power(g0, N, spec)
    gN_inv = normal_form(invert(gN), spec)
    count = 0
    for h in ball((), min(radius, kappa - 1), spec).members:
        if len(multiply(gN_inv, multiply(h, gN, spec), spec)) < kappa:
            count += 1
    return count


# --- f-divergence and contraction ------------------------------------------

@dataclass(frozen=True)
class FDivergenceWitness:
    verdict: str  # "no_path" | "path" | "budget_exceeded"
    length: int | None
    bound: float
    certificate: str
    expanded: int

    @property
    def bound_holds(self) -> bool | None:
        if self.verdict != "path":
            return None
        return self.length >= self.bound


def f_divergence_witness(g0: Word, x: Word, y: Word, d: int, profile: FProfile, spec: GroupSpec,
                         budget: int = 200_000, theta: int = 0) -> FDivergenceWitness:
    """Shortest path from x to y avoiding ``{p : d(p, <g0>) < d}``, within a budget.

    An endpoint inside the neighbourhood already rules out an avoiding path.
    In a free group a forbidden vertex on ``[x, y]`` is a cut vertex, which
    certifies that no path exists.
    """
    from .search import SearchOutcome, astar_search

    g0 = check_g0(g0, spec)
    x = normal_form(x, spec)
    y = normal_form(y, spec)
    gamma = CosetId(g0, ())
    if proj_distance(x, y, gamma, spec) < theta:
        raise PreconditionError("projections of x and y are closer than theta")
    bound = profile(d)

    def allowed(p):
        return distance_to_subgroup(p, g0, spec) >= d

    if not allowed(x) or not allowed(y):
        return FDivergenceWitness("no_path", None, bound, "endpoint-in-neighbourhood", 0)
    if spec.is_free:
        for v in geodesic(x, y, spec):
            if not allowed(v):
                return FDivergenceWitness("no_path", None, bound, "tree-cut-vertex", 0)
        return FDivergenceWitness("path", len(geodesic(x, y, spec)) - 1, bound, "tree-geodesic", 0)
    res = astar_search(x, y, allowed, spec, budget)
    if res.outcome == SearchOutcome.FOUND:
        return FDivergenceWitness("path", res.length, bound, "astar", res.expanded)
    if res.outcome == SearchOutcome.EXHAUSTED:
        return FDivergenceWitness("no_path", None, bound, "exhausted-component", res.expanded)
    return FDivergenceWitness("budget_exceeded", None, bound, f"lower-bound {res.lower_bound}",
                              res.expanded)


@dataclass(frozen=True)
class ContractionRow:
    d: int
    x: Word
    diameter: int | None
    skipped: bool


def contraction_census(g0: Word, spec: GroupSpec, d_values, sample_x) -> list:
    """Diameter of the projection of ``ball(x, d // 2)`` onto ``<g0>``.

    Samples with ``d(x, <g0>) <= d`` violate the precondition and are
    returned as skipped rows.
    """
    g0 = check_g0(g0, spec)
    gamma = CosetId(g0, ())
    rows = []
    for d in d_values:
        for x in sample_x:
            x = normal_form(x, spec)
            if distance_to_subgroup(x, g0, spec) <= d:
                rows.append(ContractionRow(d, x, None, True))
                continue
            lo, hi = math.inf, -math.inf
            for p in ball(x, d // 2, spec).members:
                a, b, _ = _proj_interval(p, gamma, spec)
                lo, hi = min(lo, a), max(hi, b)
            rows.append(ContractionRow(d, x, int(hi - lo), False))
    return rows
