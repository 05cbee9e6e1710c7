"""Implicit Cayley graph: neighbours, balls, distances and geodesics."""
from __future__ import annotations

from dataclasses import dataclass

from .groups import GroupSpec, Word, invert, multiply, normal_form, push_letter

DEFAULT_NODE_CAP = 5_000_000


class CapExceededError(RuntimeError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"ball enumeration exceeded node cap {cap} ({count} nodes seen)")
        self.count = count
        self.cap = cap


def neighbors(g: Word, spec: GroupSpec) -> list:
    out = []
    for s in spec.letters:
        w = list(g)
        push_letter(w, s, spec)
        out.append(tuple(w))
    return out


@dataclass(frozen=True)
class BallIndex:
    center: Word
    radius: int
    members: dict  # normal form -> distance from center

    def __len__(self):
        return len(self.members)

    def __contains__(self, w):
        return w in self.members

    def sphere(self, r: int) -> list:
        return [w for w, d in self.members.items() if d == r]

    def sphere_sizes(self) -> list:
        sizes = [0] * (self.radius + 1)
        for d in self.members.values():
            sizes[d] += 1
        return sizes


def ball(center: Word, radius: int, spec: GroupSpec, node_cap: int = DEFAULT_NODE_CAP) -> BallIndex:
    """Breadth-first closed ball; dict insertion order is BFS order."""
    if node_cap <= 0:
        raise ValueError("node_cap must be positive")
    center = normal_form(center, spec)
    members = {center: 0}
    layer = [center]
    for r in range(1, radius + 1):
        nxt = []
        for g in layer:
            for h in neighbors(g, spec):
                if h not in members:
                    members[h] = r
                    nxt.append(h)
                    if len(members) > node_cap:
                        raise CapExceededError(len(members), node_cap)
        layer = nxt
    return BallIndex(center, radius, members)


def distance(x: Word, y: Word, spec: GroupSpec) -> int:
    return len(multiply(normal_form(invert(x), spec), y, spec))


def geodesic(x: Word, y: Word, spec: GroupSpec) -> list:
    """Vertices ``x = v_0, ..., v_d = y`` read off the normal form of ``x^-1 y``."""
    u = multiply(normal_form(invert(x), spec), y, spec)
    path = [tuple(x)]
    cur = list(x)
    for s in u:
        push_letter(cur, s, spec)
        path.append(tuple(cur))
    return path
