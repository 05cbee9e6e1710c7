"""Deterministic lemma suites, small enough to run from the command line."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..cayley import ball
from ..divergence import DISCONNECTED, FINITE, DivergenceQuery, divergence
from ..groups import GroupSpec, parse_word, power, word_length
from ..projcomplex import build_ygraph, tube_family
from ..projections import (behrstock_census, behrstock_check, enumerate_HT, exceptional_count,
                           order_check, triangle_defect)
from .samplers import axis_mixture_word


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"; first failure: {self.failures[0]}" if self.failures else ""
        return f"{status} {self.name}: {self.checked} checks, {len(self.failures)} failures{extra}"


def suite_normal_forms(radius: int = 4) -> SuiteResult:
    res = SuiteResult(f"normal form length = BFS distance (radius {radius})")
    for spec in (GroupSpec.free(2), GroupSpec.p4()):
        for w, d in ball((), radius, spec).members.items():
            res.checked += 1
            if word_length(w, spec) != d:
                res.failures.append(w)
    return res


def suite_tree_disconnection(ms=range(2, 6)) -> SuiteResult:
    F2 = GroupSpec.free(2)
    g0 = parse_word("ab", F2)
    res = SuiteResult("free group pairs on an axis are separated by the ball")
    for m in ms:
        r = divergence(DivergenceQuery(power(g0, m, F2), power(g0, -m, F2)), F2)
        res.checked += 1
        if r.verdict != DISCONNECTED:
            res.failures.append((m, r.verdict))
    return res


def suite_z2(rs=(4, 6, 8)) -> SuiteResult:
    Z2 = GroupSpec.z2()
    res = SuiteResult("Z^2 divergence of a^r, a^-r is 3r")
    for r in rs:
        q = divergence(DivergenceQuery((1,) * r, (-1,) * r, (), Fraction(1, 2)), Z2)
        res.checked += 1
        if q.verdict != FINITE or q.length != 3 * r:
            res.failures.append((r, q.verdict, q.length))
    return res


def suite_lemmas(seed: int = 0, triples: int = 100, max_len: int = 40) -> list:
    """Two-coset, triangle, order and Behrstock checks on F2 with g0 = ab."""
    F2 = GroupSpec.free(2)
    g0 = parse_word("ab", F2)
    census = behrstock_census(g0, F2, coset_radius=3, x_radius=4)
    B = census.B_hat
    T = 4 * B + 10
    rng = np.random.default_rng(seed)
    exc = SuiteResult(f"exceptional_count <= 2 (T = {T})")
    tri = SuiteResult(f"triangle_defect <= 2 (T = {T})")
    order = SuiteResult("order_check consistent")
    beh = SuiteResult(f"strong Behrstock at census B_hat = {B}", census.instances)
    for _ in range(triples):
        x, y, z = (axis_mixture_word(rng, g0, F2, max_len) for _ in range(3))
        exc.checked += 1
        if exceptional_count(x, y, z, T, g0, F2, B) > 2:
            exc.failures.append((x, y, z))
        tri.checked += 1
        if triangle_defect(x, y, z, T, g0, F2) > 2:
            tri.failures.append((x, y, z))
        ht = enumerate_HT(x, y, T, g0, F2)
        rep = order_check(ht, F2, B)
        order.checked += rep.pairs_checked
        order.failures += rep.violations
        for c1 in ht.cosets:
            for c2 in ht.cosets:
                if c1 != c2:
                    beh.checked += 1
                    if not behrstock_check(z, c1, c2, B, F2).passed:
                        beh.failures.append((z, c1, c2))
    return [exc, tri, order, beh]


def suite_ygraph_monotone(seed: int = 0) -> SuiteResult:
    F2 = GroupSpec.free(2)
    g0 = parse_word("ab", F2)
    rng = np.random.default_rng(seed)
    res = SuiteResult("projection complex edges grow with U")
    x, y = axis_mixture_word(rng, g0, F2, 20), axis_mixture_word(rng, g0, F2, 20)
    yg = build_ygraph(tube_family(x, y, g0, 1, F2), 2, F2)
    prev = None
    for U in range(2, 16):
        edges = yg.with_threshold(U).edges
        res.checked += 1
        if prev is not None and not prev <= edges:
            res.failures.append(U)
        prev = edges
    return res


def run_all(seed: int = 0) -> list:
    return [suite_normal_forms(), suite_tree_disconnection(), suite_z2(),
            *suite_lemmas(seed), suite_ygraph_monotone(seed)]
