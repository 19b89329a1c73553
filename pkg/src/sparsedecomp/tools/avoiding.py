#!/usr/bin/env python3
"""
Avoiding Sets
Exceptional-vertex counting against challenge sets, the built-in challenge suite
and the shrinking step that makes a candidate set avoiding.
"""

import itertools
import logging
import math
import random
from collections.abc import Iterable, Sequence
from fractions import Fraction

from ..utils.config import DecompParams
from .dense_spots import SpotFamily
from .graph_core import Graph, VertexSet

logger = logging.getLogger(__name__)


def exceptional_vertices(
    fam: SpotFamily, avoiding: Iterable[int], challenge: Iterable[int], gamma: Fraction, k: int
) -> VertexSet:
    """Vertices of 𝔼 lacking a spot that contains them and meets U in at most γ²k vertices."""
    u = frozenset(challenge)
    cap = Fraction(gamma) ** 2 * k
    light = [len(u & spot.vertices) <= cap for spot in fam.spots]
    return frozenset(v for v in avoiding if not any(light[i] for i in fam.containing(v)))


def _greedy_adversary(fam: SpotFamily, avoiding: VertexSet, budget: int, gamma: Fraction, k: int) -> VertexSet:
    """Challenge built by killing every spot of the least-covered vertices of 𝔼 while the budget lasts."""
    need = math.floor(Fraction(gamma) ** 2 * k) + 1
    chosen: set[int] = set()
    for v in sorted(avoiding, key=lambda x: (len(fam.containing(x)), x)):
        extra: set[int] = set()
        for i in fam.containing(v):
            spot_vertices = fam.spots[i].vertices
            missing = need - len((chosen | extra) & spot_vertices)
            if missing > 0:
                extra.update(sorted(spot_vertices - chosen - extra)[:missing])
        if len(chosen) + len(extra) <= budget:
            chosen |= extra
    return frozenset(chosen)


def challenge_suite(
    g: Graph, fam: SpotFamily, avoiding: Iterable[int], params: DecompParams
) -> list[VertexSet]:
    """∅, V(G) when small enough, seeded random Λk-sets, the greedy adversary, and
    every maximum-size subset of the spot vertices when that enumeration is small."""
    members = frozenset(avoiding)
    budget = math.floor(params.lambda_ * params.k)
    suite: list[VertexSet] = [frozenset()]
    if g.order <= budget:
        suite.append(g.vertices)
    pool = sorted(g.vertices)
    rng = random.Random(params.seed)
    for _ in range(params.challenge_count):
        suite.append(frozenset(rng.sample(pool, min(budget, len(pool)))))
    suite.append(_greedy_adversary(fam, members, budget, params.gamma, params.k))

    relevant = sorted({x for v in members for i in fam.containing(v) for x in fam.spots[i].vertices})
    if budget <= 6 and len(relevant) <= params.exhaustive_avoiding_cap:
        size = min(budget, len(relevant))
        suite.extend(frozenset(c) for c in itertools.combinations(relevant, size))
    return suite


def shrink_to_avoiding(
    g: Graph, fam: SpotFamily, candidate: Iterable[int], params: DecompParams
) -> tuple[VertexSet, VertexSet]:
    """Drop exceptional vertices of any over-budget challenge until every challenge passes.

    Subsets of avoiding sets stay avoiding, so removal only ever helps. Returns
    the shrunken set and the removed vertices.
    """
    current = frozenset(candidate)
    removed: set[int] = set()
    limit = params.eps * params.k
    changed = True
    while changed and current:
        changed = False
        for challenge in challenge_suite(g, fam, current, params):
            bad = exceptional_vertices(fam, current, challenge, params.gamma, params.k)
            if len(bad) > limit:
                current -= bad
                removed |= bad
                changed = True
                break
    if removed:
        logger.info(f"Removed {len(removed)} vertices from the avoiding set")
    return current, frozenset(removed)


def worst_exceptional(
    fam: SpotFamily, avoiding: Iterable[int], challenges: Sequence[Iterable[int]], gamma: Fraction, k: int
) -> tuple[int, int]:
    """(largest exceptional count, index of the challenge attaining it)."""
    members = frozenset(avoiding)
    worst, where = 0, -1
    for i, challenge in enumerate(challenges):
        count = len(exceptional_vertices(fam, members, challenge, gamma, k))
        if count > worst:
            worst, where = count, i
    return worst, where
