"""Shortest allowed paths on the implicit Cayley graph: bidirectional BFS and A*."""
from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass

from .cayley import distance, neighbors
from .groups import GroupSpec, Word, invert, multiply, normal_form, push_letter


class SearchOutcome(enum.Enum):
    FOUND = "found"
    EXHAUSTED = "exhausted"
    BUDGET = "budget"


@dataclass(frozen=True)
class SearchResult:
    outcome: SearchOutcome
    length: int | None
    path: tuple | None
    expanded: int
    lower_bound: int  # certified: every allowed path has at least this length
    frontier_size: int


def _trace(parents: dict, node) -> list:
    out = []
    while node is not None:
        out.append(node)
        node = parents[node][0]
    return out


def bidirectional_search(a: Word, b: Word, allowed, spec: GroupSpec, budget: int,
                         length_cap: int | None = None) -> SearchResult:
    """Shortest path from ``a`` to ``b`` through vertices where ``allowed`` holds.

    Whole layers are expanded on the side with the smaller frontier, and a
    meeting is only accepted at the end of a layer, which keeps the returned
    length minimal.  When the budget (expanded nodes) runs out, both sides
    have fully discovered their balls of radius ``da`` and ``db`` without
    meeting, so every path has length at least ``da + db + 1``.
    """
    if a == b:
        return SearchResult(SearchOutcome.FOUND, 0, (a,), 0, 0, 0)
    ok_cache: dict = {}

    def ok(h):
        v = ok_cache.get(h)
        if v is None:
            v = ok_cache[h] = bool(allowed(h))
        return v

    sides = [{a: (None, 0)}, {b: (None, 0)}]
    frontiers = [[a], [b]]
    depth = [0, 0]
    expanded = 0
    while True:
        if not frontiers[0] or not frontiers[1]:
            return SearchResult(SearchOutcome.EXHAUSTED, None, None, expanded,
                                depth[0] + depth[1] + 1, 0)
        if length_cap is not None and depth[0] + depth[1] + 1 > length_cap:
            return SearchResult(SearchOutcome.BUDGET, None, None, expanded,
                                depth[0] + depth[1] + 1, len(frontiers[0]) + len(frontiers[1]))
        s = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        own, other = sides[s], sides[1 - s]
        nd = depth[s] + 1
        nxt = []
        best = None
        for g in frontiers[s]:
            if expanded >= budget:
                return SearchResult(SearchOutcome.BUDGET, None, None, expanded,
                                    depth[0] + depth[1] + 1,
                                    len(frontiers[0]) + len(frontiers[1]))
            expanded += 1
            for h in neighbors(g, spec):
                if h in own or not ok(h):
                    continue
                own[h] = (g, nd)
                nxt.append(h)
                if h in other:
                    total = nd + other[h][1]
                    if best is None or total < best[0]:
                        best = (total, h)
        frontiers[s] = nxt
        depth[s] = nd
        if best is not None:
            total, h = best
            half_a = _trace(sides[0], h)[::-1]
            half_b = _trace(sides[1], h)
            path = tuple(half_a + half_b[1:])
            return SearchResult(SearchOutcome.FOUND, total, path, expanded, total, 0)


def check_path(path, a: Word, b: Word, allowed, spec: GroupSpec) -> bool:
    """Adjacency, endpoints and avoidance of a vertex path."""
    if not path or path[0] != a or path[-1] != b:
        return False
    if any(distance(u, v, spec) != 1 for u, v in zip(path, path[1:])):
        return False
    return all(allowed(p) for p in path)


def astar_search(a: Word, b: Word, allowed, spec: GroupSpec, budget: int,
                 length_cap: int | None = None) -> SearchResult:
    """A* from ``a`` to ``b`` with the exact word-metric distance to ``b`` as heuristic.

    The heuristic is consistent (it changes by at most one per edge), so the
    first time ``b`` is popped its distance is optimal, and on budget
    exhaustion the smallest key left in the queue bounds every allowed path
    from below.  Each node carries ``b^-1 p`` so the heuristic costs one
    letter push per edge.
    """
    if a == b:
        return SearchResult(SearchOutcome.FOUND, 0, (a,), 0, 0, 0)
    b_inv = normal_form(invert(b), spec)
    rel_a = multiply(b_inv, a, spec)
    # per letter: (letter, inverse, commuting set, order key)
    key = spec._order_key
    steps = [(x, -x, spec._commuting[x], key[x]) for x in spec.letters]

    def push(w, x, ix, comm, kx):
        i = len(w) - 1
        while i >= 0:
            y = w[i]
            if y == ix:
                return w[:i] + w[i + 1:]
            if y in comm:
                i -= 1
                continue
            break
        j = i + 1
        n = len(w)
        while j < n and key[w[j]] < kx:
            j += 1
        return w[:j] + (x,) + w[j:]

    best_g = {a: 0}
    parent = {a: None}
    rel = {a: rel_a}
    heap = [(len(rel_a), 0, 0, a)]
    tick = 0
    expanded = 0
    closed = set()
    heappush, heappop = heapq.heappush, heapq.heappop
    while heap:
        f, neg_g, _, p = heappop(heap)
        if p in closed:
            continue
        g = -neg_g
        if p == b:
            path = []
            node = p
            while node is not None:
                path.append(node)
                node = parent[node]
            return SearchResult(SearchOutcome.FOUND, g, tuple(reversed(path)), expanded, g,
                                len(heap))
        if expanded >= budget or (length_cap is not None and f > length_cap):
            return SearchResult(SearchOutcome.BUDGET, None, None, expanded, f, len(heap) + 1)
        closed.add(p)
        expanded += 1
        rp = rel.pop(p)
        ng = g + 1
        for x, ix, comm, kx in steps:
            h = push(p, x, ix, comm, kx)
            if h in closed:
                continue
            old = best_g.get(h)
            if old is None:
                if not allowed(h):
                    closed.add(h)
                    continue
            elif old <= ng:
                continue
            rh = push(rp, x, ix, comm, kx)
            best_g[h] = ng
            parent[h] = p
            rel[h] = rh
            tick += 1
            heappush(heap, (ng + len(rh), -ng, tick, h))
    return SearchResult(SearchOutcome.EXHAUSTED, None, None, expanded, 0, 0)
