"""Finite approximation of the projection complex over a family of cosets.

Edges use raw coset-to-coset projection distances: ``A ~ B`` iff every other
coset ``K`` of the family has ``d_K(A, B) < U``.  The family is a truncation
(cosets meeting a tube around a geodesic), so every distance below is a
distance in the truncated graph, labelled "approximate".
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .cayley import ball, geodesic
from .groups import GroupSpec, Word, format_word, normal_form, shortlex_key
from .projections import CosetId, coset_of, enumerate_HT, project_coset

UNREACHABLE = None


@dataclass(frozen=True)
class YGraph:
    vertices: tuple  # of CosetId
    U: int
    # max over third cosets K of d_K(A, B); -1 when no third coset exists
    max_third: np.ndarray
    radius: int | None = None
    label: str = "approximate Y_U"

    def __post_init__(self):
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    def index(self, v: CosetId) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise KeyError(f"coset {v} is not in the family") from None

    @property
    def adjacency(self) -> np.ndarray:
        adj = self.max_third < self.U
        np.fill_diagonal(adj, False)
        return adj

    @property
    def edges(self) -> frozenset:
        ii, jj = np.nonzero(np.triu(self.adjacency, 1))
        return frozenset((self.vertices[i], self.vertices[j]) for i, j in zip(ii, jj))

    def with_threshold(self, U: int) -> "YGraph":
        """Same family, different U; the distance matrix is reused."""
        return YGraph(self.vertices, U, self.max_third, self.radius, self.label)

    def dump(self, spec: GroupSpec) -> str:
        """Edge list, one ``repA repB`` pair per line, in index order."""
        adj = np.triu(self.adjacency, 1)
        lines = []
        for i, j in zip(*np.nonzero(adj)):
            lines.append(f"{format_word(self.vertices[i].rep, spec)} "
                         f"{format_word(self.vertices[j].rep, spec)}\n")
        return "".join(lines)


def _dedupe(family) -> list:
    seen = {}
    for c in family:
        seen.setdefault(c, None)
    return list(seen)


def build_ygraph(family, U: int, spec: GroupSpec, radius: int | None = None) -> YGraph:
    """Adjacency from the matrix of coset-to-coset projections.

    ``lo[k, a], hi[k, a]`` bound the projection of coset ``a`` onto coset
    ``k``; then ``d_k(a, b) = max(hi) - min(lo)`` for every pair at once.
    """
    family = _dedupe(family)
    if not family:
        raise ValueError("empty family")
    n = len(family)
    lo = np.zeros((n, n), dtype=np.int64)
    hi = np.zeros((n, n), dtype=np.int64)
    for k, target in enumerate(family):
        for a, source in enumerate(family):
            if a != k:
                lo[k, a], hi[k, a] = project_coset(source, target, spec)
    max_third = np.full((n, n), -1, dtype=np.int64)
    for a in range(n):
        d = np.maximum(hi[:, a, None], hi) - np.minimum(lo[:, a, None], lo)  # d[k, b]
        d[a, :] = -1
        d[np.arange(n), np.arange(n)] = -1  # k == b
        max_third[a] = d.max(axis=0) if n > 2 else -1
    np.fill_diagonal(max_third, -1)
    return YGraph(tuple(family), U, max_third, radius)


def y_distance(yg: YGraph, v1: CosetId, v2: CosetId):
    """Graph distance, or ``None`` when ``v2`` is unreachable from ``v1``."""
    i, j = yg.index(v1), yg.index(v2)
    if i == j:
        return 0
    adj = yg.adjacency
    dist = {i: 0}
    queue = deque([i])
    while queue:
        u = queue.popleft()
        for w in np.flatnonzero(adj[u]):
            w = int(w)
            if w not in dist:
                dist[w] = dist[u] + 1
                if w == j:
                    return dist[w]
                queue.append(w)
    return UNREACHABLE


def is_connected(yg: YGraph) -> bool:
    return all(y_distance(yg, yg.vertices[0], v) is not None for v in yg.vertices)


def tube_family(x: Word, y: Word, g0: Word, radius: int, spec: GroupSpec) -> list:
    """Cosets meeting the ``radius``-neighbourhood of the geodesic ``[x, y]``, plus those of x, y."""
    x, y = normal_form(x, spec), normal_form(y, spec)
    seen = {coset_of(x, g0, spec): None, coset_of(y, g0, spec): None}
    for p in geodesic(x, y, spec):
        for h in ball(p, radius, spec).members:
            seen.setdefault(coset_of(h, g0, spec), None)
    return list(seen)


@dataclass(frozen=True)
class BBFReport:
    distance: int | None
    ht_size: int
    slack: int
    family_size: int
    radius: int

    @property
    def bound(self) -> int:
        return self.ht_size + 1 + self.slack

    @property
    def passed(self) -> bool:
        return self.distance is not None and self.distance <= self.bound


def bbf_bound_check(x: Word, y: Word, U: int, g0: Word, spec: GroupSpec, radius: int = 1,
                    slack: int = 2) -> BBFReport:
    """``d_Y(x<g0>, y<g0>) <= |H_U(x, y)| + 1 + slack`` on the tube family."""
    family = tube_family(x, y, g0, radius, spec)
    yg = build_ygraph(family, U, spec, radius)
    cx, cy = coset_of(x, g0, spec), coset_of(y, g0, spec)
    ht = enumerate_HT(x, y, U, g0, spec)
    return BBFReport(y_distance(yg, cx, cy), len(ht), slack, len(family), radius)


@dataclass(frozen=True)
class GromovReport:
    product: float | None  # None when some pair is unreachable
    h_size: int
    delta_hat: float

    @property
    def bound(self) -> float:
        return self.h_size / 2 - self.delta_hat

    @property
    def margin(self) -> float | None:
        return None if self.product is None else self.product - self.bound

    @property
    def violation(self) -> float:
        """How much ``delta_hat`` would have to grow for the bound to hold strictly."""
        if self.product is None:
            return 0.0
        return max(0.0, self.bound - self.product)


def shared_large_projections(yg: YGraph, v1: CosetId, v2: CosetId, v3: CosetId,
                             spec: GroupSpec) -> list:
    """Family cosets K (other than the three) with ``d_K(v1, v3) >= U`` and ``d_K(v2, v3) >= U``."""
    out = []
    for k in yg.vertices:
        if k in (v1, v2, v3):
            continue
        ok = True
        for a in (v1, v2):
            lo1, hi1 = project_coset(a, k, spec)
            lo2, hi2 = project_coset(v3, k, spec)
            if max(hi1, hi2) - min(lo1, lo2) < yg.U:
                ok = False
                break
        if ok:
            out.append(k)
    return sorted(out, key=lambda c: shortlex_key(c.rep, spec))


def gromov_product_check(yg: YGraph, v1: CosetId, v2: CosetId, v3: CosetId, spec: GroupSpec,
                         delta_hat: float = 0.0) -> GromovReport:
    """Gromov product ``(v1, v2)_{v3}`` in the graph metric against ``|H|/2 - delta_hat``."""
    if len({v1, v2, v3}) < 3:
        raise ValueError("need three distinct vertices")
    d13 = y_distance(yg, v1, v3)
    d23 = y_distance(yg, v2, v3)
    d12 = y_distance(yg, v1, v2)
    H = shared_large_projections(yg, v1, v2, v3, spec)
    if None in (d12, d13, d23):
        return GromovReport(None, len(H), delta_hat)
    return GromovReport((d13 + d23 - d12) / 2, len(H), delta_hat)


def fit_delta(reports) -> float:
    """Smallest ``delta_hat >= 0`` making every report satisfy its bound (non-strictly)."""
    return max((r.violation for r in reports), default=0.0)
