"""
Shared graph builders, parameter sets and hypothesis strategies
"""

import itertools
from fractions import Fraction
from typing import Any

from hypothesis import strategies as st

from sparsedecomp.tools.generators import complete_bipartite, union
from sparsedecomp.tools.graph_core import Graph
from sparsedecomp.utils.config import DecompParams


def desk_params(**overrides: Any) -> DecompParams:
    """k = 8, γ = ε = 1/4, ν = 1/8, ρ = 1/10, Λ = 2, Ω* = 3, Ω** = 4."""
    data: dict[str, Any] = {
        "k": 8,
        "gamma": "1/4",
        "eps": "1/4",
        "nu": "1/8",
        "rho": "1/10",
        "lambda": 2,
        "omega_star": 3,
        "omega_star2": 4,
    }
    data.update(overrides)
    return DecompParams.model_validate(data)


def two_bicliques(side: int = 8) -> Graph:
    return union([complete_bipartite(side, side), complete_bipartite(side, side)])


def graph_json(g: Graph) -> dict[str, Any]:
    return g.to_dict()


@st.composite
def graphs(draw: st.DrawFn, min_n: int = 0, max_n: int = 9) -> Graph:
    """Random simple graphs on 0..n-1."""
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


@st.composite
def vertex_subsets(draw: st.DrawFn, g: Graph) -> frozenset[int]:
    members = sorted(g.vertices)
    if not members:
        return frozenset()
    return frozenset(draw(st.lists(st.sampled_from(members), unique=True)))


rationals = st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=100)
