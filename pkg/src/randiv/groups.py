"""Words, group specifications and shortlex normal forms.

Free groups and right-angled Artin groups (RAAGs) share one code path: a free
group of rank k is the RAAG on k vertices with no edges.

A word is a tuple of nonzero ints.  Letter ``i + 1`` is the i-th generator and
``-(i + 1)`` its inverse, so inverting a letter is negation.  Generator indices
follow the declared letter order, and the shortlex order on letters is
``a < a^-1 < b < b^-1 < ...``.
"""
from __future__ import annotations

import itertools
import re
import string
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

Word = tuple  # tuple[int, ...] of signed letter codes

IDENTITY: Word = ()


class MalformedWordError(ValueError):
    pass


class UnsupportedVariantError(ValueError):
    pass


class Letter(NamedTuple):
    generator_index: int
    sign: int

    @property
    def code(self) -> int:
        return self.sign * (self.generator_index + 1)

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        return cls(abs(code) - 1, 1 if code > 0 else -1)


@dataclass(frozen=True)
class GroupSpec:
    """A free group or RAAG with a fixed generator order.

    ``edges`` holds unordered pairs of generator indices that commute.  Use
    :meth:`free` and :meth:`raag` rather than the raw constructor.
    """

    names: tuple
    edges: frozenset = field(default_factory=frozenset)
    variant: str = "raag"

    def __post_init__(self):
        if len(self.names) == 0:
            raise ValueError("a group needs at least one generator")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate generator names: {self.names}")
        if self.variant not in ("free", "raag"):
            raise ValueError(f"unknown variant {self.variant!r}")
        k = len(self.names)
        for e in self.edges:
            i, j = tuple(e) if len(e) == 2 else (None, None)
            if i is None or i == j:
                raise ValueError(f"self-loop or malformed edge {set(e)}")
            if not (0 <= i < k and 0 <= j < k):
                raise ValueError(f"edge {set(e)} out of range for rank {k}")
        if self.variant == "free" and self.edges:
            raise ValueError("a free group has no commuting pairs")

    @classmethod
    def free(cls, rank: int, names: Sequence[str] | None = None) -> "GroupSpec":
        if rank < 1:
            raise ValueError("rank must be positive")
        return cls(tuple(names or default_names(rank)), frozenset(), "free")

    @classmethod
    def raag(cls, vertices: Sequence[str], edges: Iterable[Sequence[str]] = (),
             order: Sequence[str] | None = None) -> "GroupSpec":
        """RAAG on named vertices; ``order`` fixes the shortlex letter order."""
        order = list(order) if order is not None else list(vertices)
        if sorted(order) != sorted(vertices):
            raise ValueError("order must be a permutation of the vertices")
        pos = {v: i for i, v in enumerate(order)}
        es = set()
        for u, v in edges:
            if u not in pos or v not in pos:
                raise ValueError(f"edge ({u}, {v}) names an unknown vertex")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            es.add(frozenset((pos[u], pos[v])))
        return cls(tuple(order), frozenset(es), "raag")

    @property
    def rank(self) -> int:
        return len(self.names)

    @property
    def is_free(self) -> bool:
        return not self.edges

    def commute(self, i: int, j: int) -> bool:
        return frozenset((i, j)) in self.edges

    @cached_property
    def letters(self) -> tuple:
        """All 2k letters in shortlex order."""
        return tuple(s for i in range(1, self.rank + 1) for s in (i, -i))

    @cached_property
    def _commuting(self) -> list:
        # indexable by signed letter code thanks to negative list indexing
        k = self.rank
        table = [frozenset()] * (2 * k + 1)
        for x in self.letters:
            gx = abs(x) - 1
            table[x] = frozenset(y for y in self.letters
                                 if abs(y) - 1 != gx and self.commute(gx, abs(y) - 1))
        return table

    @cached_property
    def _order_key(self) -> list:
        k = self.rank
        table = [0] * (2 * k + 1)
        for x in self.letters:
            table[x] = 2 * abs(x) + (x < 0)
        return table

    def describe(self) -> dict:
        """Config-document form of the group (round-trips through :func:`spec_from_config`)."""
        if self.is_free and self.variant == "free":
            return {"group": {"type": "free", "rank": self.rank}, "order": list(self.names)}
        edges = sorted(sorted(self.names[i] for i in e) for e in self.edges)
        return {"group": {"type": "raag", "vertices": list(self.names), "edges": edges},
                "order": list(self.names)}

    # canonical small examples
    @classmethod
    def p4(cls) -> "GroupSpec":
        return cls.raag("abcd", [("a", "b"), ("b", "c"), ("c", "d")])

    @classmethod
    def z2(cls) -> "GroupSpec":
        return cls.raag("ab", [("a", "b")])


def default_names(rank: int) -> list:
    if rank <= 26:
        return list(string.ascii_lowercase[:rank])
    return [f"x{i}" for i in range(rank)]


def spec_from_config(doc: dict) -> GroupSpec:
    """Build a GroupSpec from ``{"group": {...}, "order": [...]}``."""
    g = doc["group"]
    kind = g.get("type")
    order = doc.get("order")
    if kind == "free":
        rank = int(g["rank"])
        names = order or default_names(rank)
        if len(names) != rank:
            raise ValueError("order length must equal the free rank")
        return GroupSpec.free(rank, names)
    if kind == "raag":
        return GroupSpec.raag(g["vertices"], g.get("edges", []), order)
    raise ValueError(f"unknown group type {kind!r}")


# --- word arithmetic -------------------------------------------------------

def check_word(w: Iterable[int], spec: GroupSpec) -> None:
    k = spec.rank
    for x in w:
        if not isinstance(x, int) or x == 0 or abs(x) > k:
            raise MalformedWordError(f"letter {x!r} invalid for rank {k}")


def push_letter(w: list, x: int, spec: GroupSpec) -> None:
    """Right-multiply a normal-form word (as a list, in place) by one letter.

    Scans back over letters commuting with ``x``: meeting ``x^-1`` cancels it,
    otherwise ``x`` is inserted at the first position after the last letter
    that blocks it where it sorts before the next letter.  Both steps keep a
    shortlex-least geodesic word shortlex-least.
    """
    comm = spec._commuting[x]
    i = len(w) - 1
    while i >= 0:
        y = w[i]
        if y == -x:
            del w[i]
            return
        if y in comm:
            i -= 1
            continue
        break
    key = spec._order_key
    kx = key[x]
    j = i + 1
    n = len(w)
    while j < n and key[w[j]] < kx:
        j += 1
    w.insert(j, x)


def normal_form(w: Iterable[int], spec: GroupSpec) -> Word:
    """Shortlex-least geodesic representative of ``w``."""
    w = tuple(w)
    check_word(w, spec)
    out: list = []
    for x in w:
        push_letter(out, x, spec)
    return tuple(out)


def multiply(u: Word, v: Word, spec: GroupSpec) -> Word:
    """Product of two normal-form words (``u`` is assumed normalized)."""
    out = list(u)
    for x in v:
        push_letter(out, x, spec)
    return tuple(out)


def invert(u: Word) -> Word:
    """Formal inverse; re-normalize in a RAAG if a normal form is needed."""
    return tuple(-x for x in reversed(u))


def inverse(u: Word, spec: GroupSpec) -> Word:
    return normal_form(invert(u), spec)


def word_length(w: Word, spec: GroupSpec) -> int:
    return len(normal_form(w, spec))


def equals(u: Word, v: Word, spec: GroupSpec) -> bool:
    return normal_form(invert(u) + tuple(v), spec) == ()


def power(u: Word, k: int, spec: GroupSpec) -> Word:
    base = u if k >= 0 else invert(u)
    out: list = []
    for _ in range(abs(k)):
        for x in base:
            push_letter(out, x, spec)
    return tuple(out)


def shortlex_key(w: Word, spec: GroupSpec) -> tuple:
    key = spec._order_key
    return (len(w), tuple(key[x] for x in w))


def is_cyclically_reduced(w: Word, spec: GroupSpec) -> bool:
    """No letter of ``w`` can be cancelled against a cyclic conjugate.

    Checked via ``|w^2| == 2|w|``, which characterizes cyclic reduction in
    free groups and RAAGs.
    """
    w = normal_form(w, spec)
    return len(multiply(w, w, spec)) == 2 * len(w)


def is_proper_power(w: Word, spec: GroupSpec) -> bool:
    """True when ``w = v^m`` for some ``m >= 2`` with ``v`` of length ``|w|/m``.

    Only meaningful for cyclically reduced ``w``; roots are searched among
    words of the divisor lengths built from the trace of ``w`` itself.
    """
    w = normal_form(w, spec)
    n = len(w)
    for m in range(2, n + 1):
        if n % m:
            continue
        for cand in _subwords_of_length(w, n // m, spec):
            if power(cand, m, spec) == w:
                return True
    return False


def _subwords_of_length(w: Word, ell: int, spec: GroupSpec):
    seen = set()
    for combo in itertools.combinations(range(len(w)), ell):
        cand = normal_form([w[i] for i in combo], spec)
        if cand not in seen:
            seen.add(cand)
            yield cand


# --- defining graph --------------------------------------------------------

@dataclass(frozen=True)
class GraphReport:
    connected: bool
    is_join: bool


def analyze_graph(spec: GroupSpec) -> GraphReport:
    """Connectivity and join decomposition of the defining graph.

    Exhaustive over bipartitions; fine for the ~12 vertex graphs used here.
    """
    if spec.variant == "free":
        raise UnsupportedVariantError("analyze_graph needs a RAAG specification")
    k = spec.rank
    adj = [{j for j in range(k) if j != i and spec.commute(i, j)} for i in range(k)]
    seen = {0}
    stack = [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    connected = len(seen) == k
    is_join = False
    # vertex 0 is pinned to side A so each bipartition is visited once
    for mask in range(1 << (k - 1)):
        side_b = [i for i in range(1, k) if mask >> (i - 1) & 1]
        if not side_b:
            continue
        side_a = [0] + [i for i in range(1, k) if not mask >> (i - 1) & 1]
        if all(b in adj[a] for a in side_a for b in side_b):
            is_join = True
            break
    return GraphReport(connected, is_join)


# --- text form -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(\(|\)|\^\s*-?\d+|[A-Za-z_][A-Za-z_0-9]*|1)")


def parse_word(text: str, spec: GroupSpec) -> Word:
    """Parse ``"abAB"``, ``"(ab)^5 b"``, ``"x0 x1^-1"`` or ``"1"`` into a normal form.

    With single-letter lowercase generator names, an uppercase letter is the
    inverse and adjacent letters need no separator.
    """
    single = all(len(n) == 1 and n.islower() for n in spec.names)
    index = {n: i + 1 for i, n in enumerate(spec.names)}
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise MalformedWordError(f"cannot parse {text[pos:]!r}")
        tok = m.group(1)
        pos = m.end()
        if single and tok[0].isalpha():
            for ch in tok:
                if ch in index:
                    tokens.append([index[ch]])
                elif ch.lower() in index:
                    tokens.append([-index[ch.lower()]])
                else:
                    raise MalformedWordError(f"unknown generator {ch!r}")
        elif tok[0].isalpha() or tok[0] == "_":
            if tok not in index:
                raise MalformedWordError(f"unknown generator {tok!r}")
            tokens.append([index[tok]])
        else:
            tokens.append(tok.replace(" ", ""))
    letters, rest = _parse_seq(tokens, 0)
    if rest != len(tokens):
        raise MalformedWordError(f"unbalanced parentheses in {text!r}")
    return normal_form(letters, spec)


def _parse_seq(tokens, i):
    out: list = []
    while i < len(tokens):
        tok = tokens[i]
        if tok == ")":
            return out, i
        if tok == "(":
            inner, i = _parse_seq(tokens, i + 1)
            if i >= len(tokens) or tokens[i] != ")":
                raise MalformedWordError("missing ')'")
            item = inner
            i += 1
        elif tok == "1":
            item = []
            i += 1
        elif isinstance(tok, list):
            item = tok
            i += 1
        else:
            raise MalformedWordError(f"dangling exponent {tok}")
        if i < len(tokens) and isinstance(tokens[i], str) and tokens[i].startswith("^"):
            k = int(tokens[i][1:])
            item = item * k if k >= 0 else list(invert(tuple(item))) * (-k)
            i += 1
        out.extend(item)
    return out, i


def format_word(w: Word, spec: GroupSpec) -> str:
    if not w:
        return "1"
    single = all(len(n) == 1 and n.islower() for n in spec.names)
    if single:
        return "".join(spec.names[x - 1] if x > 0 else spec.names[-x - 1].upper() for x in w)
    return " ".join(spec.names[x - 1] if x > 0 else f"{spec.names[-x - 1]}^-1" for x in w)
