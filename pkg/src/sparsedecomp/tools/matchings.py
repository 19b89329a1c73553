#!/usr/bin/env python3
"""
Matchings
Misra–Gries proper edge colouring with at most Δ+1 colours, returned as matchings.
"""

import logging
from collections.abc import Iterable, Sequence

from ..exceptions import InvariantViolation
from .graph_core import Edge, normalize_edge

logger = logging.getLogger(__name__)


class _Colouring:
    def __init__(self) -> None:
        self.colour: dict[Edge, int] = {}
        self.at: dict[int, dict[int, int]] = {}

    def get(self, x: int, y: int) -> int | None:
        return self.colour.get(normalize_edge(x, y))

    def free(self, x: int, c: int) -> bool:
        return c not in self.at.get(x, {})

    def set(self, x: int, y: int, c: int) -> None:
        self.colour[normalize_edge(x, y)] = c
        self.at.setdefault(x, {})[c] = y
        self.at.setdefault(y, {})[c] = x

    def unset(self, x: int, y: int) -> None:
        c = self.colour.pop(normalize_edge(x, y))
        del self.at[x][c]
        del self.at[y][c]


def _maximal_fan(col: _Colouring, adj: dict[int, list[int]], u: int, v: int) -> list[int]:
    fan = [v]
    members = {v}
    extended = True
    while extended:
        extended = False
        for x in adj[u]:
            c = col.get(u, x)
            if x not in members and c is not None and col.free(fan[-1], c):
                fan.append(x)
                members.add(x)
                extended = True
                break
    return fan


def _invert_path(col: _Colouring, start: int, c: int, d: int) -> None:
    """Swap colours along the maximal c/d-alternating path leaving start by colour d."""
    path: list[tuple[int, int, int]] = []
    x, current = start, d
    while current in col.at.get(x, {}):
        y = col.at[x][current]
        path.append((x, y, current))
        x, current = y, (c if current == d else d)
    for x, y, _ in path:
        col.unset(x, y)
    for x, y, old in path:
        col.set(x, y, c if old == d else d)


def _is_fan(col: _Colouring, u: int, fan: Sequence[int]) -> bool:
    for a, b in zip(fan, fan[1:]):
        c = col.get(u, b)
        if c is None or not col.free(a, c):
            return False
    return True


def misra_gries(edges: Iterable[Sequence[int]]) -> list[list[Edge]]:
    """Partition the edges of a simple graph into at most Δ+1 nonempty matchings."""
    chosen = sorted({normalize_edge(int(a), int(b)) for a, b in edges})
    if not chosen:
        return []
    adj: dict[int, list[int]] = {}
    for a, b in chosen:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    for nbrs in adj.values():
        nbrs.sort()
    palette = range(max(len(nbrs) for nbrs in adj.values()) + 1)

    col = _Colouring()
    for u, v in chosen:
        fan = _maximal_fan(col, adj, u, v)
        c = next(x for x in palette if col.free(u, x))
        d = next(x for x in palette if col.free(fan[-1], x))
        _invert_path(col, u, c, d)
        for i, w in enumerate(fan):
            prefix = fan[: i + 1]
            if col.free(w, d) and _is_fan(col, u, prefix):
                break
        else:
            raise InvariantViolation(f"no rotatable fan prefix at vertex {u}")
        for a, b in zip(prefix, prefix[1:]):
            shifted = col.get(u, b)
            assert shifted is not None
            col.unset(u, b)
            col.set(u, a, shifted)
        col.set(u, prefix[-1], d)

    classes: dict[int, list[Edge]] = {}
    for e, c in col.colour.items():
        classes.setdefault(c, []).append(e)
    matchings = [sorted(classes[c]) for c in sorted(classes)]
    for m in matchings:
        ends = [x for e in m for x in e]
        if len(ends) != len(set(ends)):
            raise InvariantViolation("edge colouring produced a non-matching class")
    if sum(len(m) for m in matchings) != len(chosen):
        raise InvariantViolation("edge colouring lost edges")
    logger.debug(f"Coloured {len(chosen)} edges with {len(matchings)} matchings (palette {len(palette)})")
    return matchings
