#!/usr/bin/env python3
"""
Regularity
ε-regular pairs, the index of a pair partition, index pumping and the regularity
lemma for locally dense graphs driven by an edge colouring of the pattern graph.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from ..exceptions import (
    ExactCapExceeded,
    InputError,
    NoWitnessError,
    PreconditionError,
    PumpingStalled,
    RoundBudgetExceeded,
)
from ..utils.config import RegularityConfig
from .graph_core import Edge, Graph, Partition, VertexSet, density, normalize_edge
from .matchings import misra_gries
from .reports import ClauseResult, generate_report

logger = logging.getLogger(__name__)

Number = int | Fraction
Witness = tuple[VertexSet, VertexSet]

_BATCH = 4096


# -- domain types ------------------------------------------------------


@dataclass(frozen=True)
class GarbagePartition:
    """Partition of ``ground`` into a garbage set and equal-size clusters."""

    ground: VertexSet
    garbage: VertexSet
    clusters: tuple[VertexSet, ...]

    def __post_init__(self) -> None:
        seen: set[int] = set(self.garbage)
        for cluster in self.clusters:
            if not cluster:
                raise InputError("clusters must be nonempty")
            if seen & cluster:
                raise InputError("clusters and garbage must be pairwise disjoint")
            seen |= cluster
        if seen != self.ground:
            raise InputError("garbage and clusters must cover the ground set exactly")
        if len({len(c) for c in self.clusters}) > 1:
            raise InputError("non-garbage clusters must have equal size")

    @classmethod
    def build(cls, ground: Iterable[int], clusters: Iterable[Iterable[int]]) -> "GarbagePartition":
        """Clusters as given, everything else of ``ground`` is garbage."""
        members = frozenset(ground)
        parts = tuple(sorted((frozenset(c) for c in clusters), key=min))
        covered = frozenset().union(*parts) if parts else frozenset()
        return cls(members, members - covered, parts)

    @classmethod
    def trivial(cls, ground: Iterable[int]) -> "GarbagePartition":
        members = frozenset(ground)
        return cls(members, frozenset(), (members,) if members else ())

    @property
    def cluster_size(self) -> int:
        return len(self.clusters[0]) if self.clusters else 0

    def broken(self) -> list[VertexSet]:
        """The ∘ view: clusters plus the garbage broken into singletons."""
        return list(self.clusters) + [frozenset({v}) for v in sorted(self.garbage)]

    def refines_up_to_garbage(self, other: "GarbagePartition") -> bool:
        if self.ground != other.ground:
            return False
        blocks = Partition(other.broken())
        return all(len({blocks.block_of(v) for v in c}) == 1 for c in self.clusters)

    def to_dict(self) -> dict[str, Any]:
        return {"garbage": sorted(self.garbage), "clusters": [sorted(c) for c in self.clusters]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GarbagePartition":
        try:
            garbage = frozenset(int(v) for v in data["garbage"])
            clusters = tuple(frozenset(int(v) for v in c) for c in data["clusters"])
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed garbage partition: {e}") from e
        ground = garbage.union(*clusters) if clusters else garbage
        if sum(len(c) for c in clusters) + len(garbage) != len(ground):
            raise InputError("garbage partition blocks overlap")
        return cls(ground, garbage, clusters)


@dataclass(frozen=True)
class PairPartitionState:
    a_side: GarbagePartition
    b_side: GarbagePartition
    host: Graph

    def __post_init__(self) -> None:
        if self.a_side.ground & self.b_side.ground:
            raise InputError("the two sides of a pair partition must be disjoint")


@dataclass(frozen=True)
class PatternGraph:
    """Pattern F on [ℓ] (0-based here) with maximum degree at most ``m``."""

    ell: int
    edges: tuple[Edge, ...]
    m: int

    def __post_init__(self) -> None:
        for a, b in self.edges:
            if a == b or not (0 <= a < self.ell and 0 <= b < self.ell):
                raise InputError(f"pattern edge ({a}, {b}) invalid for ell={self.ell}")
        if self.maxdeg > self.m:
            raise InputError(f"pattern max degree {self.maxdeg} exceeds bound {self.m}")

    @classmethod
    def from_edges(cls, ell: int, edges: Iterable[Sequence[int]], m: int | None = None) -> "PatternGraph":
        chosen = tuple(sorted({normalize_edge(int(a), int(b)) for a, b in edges}))
        degrees = [0] * ell
        for a, b in chosen:
            if 0 <= a < ell and 0 <= b < ell:
                degrees[a] += 1
                degrees[b] += 1
        return cls(ell, chosen, max(degrees, default=0) if m is None else m)

    @classmethod
    def complete(cls, ell: int) -> "PatternGraph":
        return cls.from_edges(ell, ((i, j) for i in range(ell) for j in range(i + 1, ell)))

    @property
    def maxdeg(self) -> int:
        degrees = [0] * self.ell
        for a, b in self.edges:
            degrees[a] += 1
            degrees[b] += 1
        return max(degrees, default=0)

    def to_dict(self) -> dict[str, Any]:
        return {"ell": self.ell, "m": self.m, "edges": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class RegularityVerdict:
    regular: bool
    witness: Witness | None = None
    exact: bool = True
    subpair_density: Fraction | None = None

    def __bool__(self) -> bool:
        return self.regular


# -- the ε-regularity oracle -------------------------------------------


def _adjacency(g: Graph, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    index = {v: j for j, v in enumerate(cols)}
    adj = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for i, v in enumerate(rows):
        for u in g.neighbors(v):
            j = index.get(u)
            if j is not None:
                adj[i, j] = 1
    return adj


def _scan(adj: np.ndarray, bits: np.ndarray, p: int, q: int) -> tuple[np.ndarray, np.ndarray, Fraction] | None:
    """First row subset (and best column subset) whose density deviates by ≥ p/q.

    For a fixed row subset and column count t, the extreme subpair densities come
    from the t columns of largest or smallest degree, so only those are tested.
    """
    a, b = adj.shape
    total = int(adj.sum())
    s = bits.sum(axis=1)
    keep = s * q >= p * a
    if not keep.any():
        return None
    bits, s = bits[keep], s[keep]
    t = np.arange(1, b + 1, dtype=np.int64)
    t = t[t * q >= p * b]
    deg = bits @ adj
    order = np.argsort(deg, axis=1, kind="stable")
    sorted_deg = np.take_along_axis(deg, order, axis=1)
    prefix = np.concatenate([np.zeros((len(bits), 1), dtype=np.int64), np.cumsum(sorted_deg, axis=1)], axis=1)
    st = s[:, None] * t[None, :]
    bound = p * a * b * st
    for take_top in (True, False):
        sums = prefix[:, [b]] - prefix[:, b - t] if take_top else prefix[:, t]
        hits = np.argwhere(np.abs(sums * (a * b) - total * st) * q >= bound)
        if hits.size:
            r, j = (int(x) for x in hits[0])
            width = int(t[j])
            cols = order[r, b - width :] if take_top else order[r, :width]
            return np.flatnonzero(bits[r]), cols, Fraction(int(sums[r, j]), int(s[r]) * width)
    return None


def _subset_bits(a: int, start: int, stop: int) -> np.ndarray:
    masks = np.arange(start, stop, dtype=np.int64)
    return (masks[:, None] >> np.arange(a, dtype=np.int64)) & 1


def _exact_witness(adj: np.ndarray, p: int, q: int) -> tuple[np.ndarray, np.ndarray, Fraction] | None:
    a = adj.shape[0]
    for start in range(1, 2**a, _BATCH):
        found = _scan(adj, _subset_bits(a, start, min(start + _BATCH, 2**a)), p, q)
        if found is not None:
            return found
    return None


def _candidate_bits(adj: np.ndarray) -> np.ndarray:
    """Neighbourhoods, their complements and degree-ordered prefixes of the row side."""
    a = adj.shape[0]
    rows: list[np.ndarray] = [adj[:, j] for j in range(adj.shape[1])]
    rows += [1 - r for r in list(rows)]
    by_degree = np.argsort(adj.sum(axis=1), kind="stable")
    for size in range(1, a + 1):
        for chosen in (by_degree[:size], by_degree[a - size :]):
            r = np.zeros(a, dtype=np.int64)
            r[chosen] = 1
            rows.append(r)
    return np.unique(np.array(rows, dtype=np.int64), axis=0)


def is_regular_pair(
    g: Graph,
    u: Iterable[int],
    w: Iterable[int],
    eps: Number,
    exact: bool | None = None,
    config: RegularityConfig | None = None,
) -> RegularityVerdict:
    """Decide ε-regularity of (U, W), returning a witness (U', W') when irregular.

    Exact mode enumerates the subsets of the smaller side, which must not exceed
    the configured cap. Heuristic witnesses are always genuine; heuristic
    "regular" verdicts are advisory and carry ``exact=False``.
    """
    config = config or RegularityConfig()
    us, ws = sorted(g.check_subset(u, "u")), sorted(g.check_subset(w, "w"))
    if not us or not ws or set(us) & set(ws):
        raise InputError("regularity needs two disjoint nonempty sets")
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError(f"eps must be positive, got {eps}")
    flipped = len(ws) < len(us)
    rows, cols = (ws, us) if flipped else (us, ws)
    adj = _adjacency(g, rows, cols)
    total = int(adj.sum())
    small_enough = len(rows) <= config.exact_cap
    if exact and not small_enough:
        raise ExactCapExceeded(f"exact regularity test on {len(rows)}-vertex side exceeds cap {config.exact_cap}")
    use_exact = small_enough if exact is None else exact
    if total in (0, adj.size):
        return RegularityVerdict(True, exact=True)

    if use_exact:
        found = _exact_witness(adj, eps.numerator, eps.denominator)
    else:
        found = _scan(adj, _candidate_bits(adj), eps.numerator, eps.denominator)
        if found is None:
            flipped_found = _scan(adj.T.copy(), _candidate_bits(adj.T.copy()), eps.numerator, eps.denominator)
            if flipped_found is not None:
                r_idx, c_idx, d = flipped_found
                found = (c_idx, r_idx, d)
    if found is None:
        return RegularityVerdict(True, exact=use_exact)
    r_idx, c_idx, sub_density = found
    row_set = frozenset(rows[i] for i in r_idx)
    col_set = frozenset(cols[j] for j in c_idx)
    witness = (col_set, row_set) if flipped else (row_set, col_set)
    return RegularityVerdict(False, witness, exact=True, subpair_density=sub_density)


class PairOracle:
    """Memoized regularity checks against one host graph."""

    def __init__(self, host: Graph, eps: Number, exact: bool | None, config: RegularityConfig):
        self.host = host
        self.eps = Fraction(eps)
        self.exact = exact
        self.config = config
        self._cache: dict[tuple[VertexSet, VertexSet], RegularityVerdict] = {}

    def check(self, x: VertexSet, y: VertexSet) -> RegularityVerdict:
        key = (x, y)
        if key not in self._cache:
            self._cache[key] = is_regular_pair(self.host, x, y, self.eps, self.exact, self.config)
        return self._cache[key]

    def check_many(self, pairs: Sequence[tuple[VertexSet, VertexSet]]) -> list[RegularityVerdict]:
        if self.config.jobs > 1 and len(pairs) > 1:
            with ThreadPoolExecutor(max_workers=self.config.jobs) as pool:
                return list(pool.map(lambda xy: self.check(*xy), pairs))
        return [self.check(x, y) for x, y in pairs]


# -- index and pumping -------------------------------------------------


def _pair_index_sum(host: Graph, a_blocks: Sequence[VertexSet], b_blocks: Sequence[VertexSet]) -> Fraction:
    owner = {v: j for j, block in enumerate(b_blocks) for v in block}
    acc = Fraction(0)
    for x in a_blocks:
        counts: dict[int, int] = {}
        for v in x:
            for u in host.neighbors(v):
                j = owner.get(u)
                if j is not None:
                    counts[j] = counts.get(j, 0) + 1
        for j, c in counts.items():
            acc += Fraction(c * c, len(x) * len(b_blocks[j]))
    return acc


def index(state: PairPartitionState) -> Fraction:
    """ind(𝒜, ℬ) with both garbage sets broken into singletons."""
    total = len(state.a_side.ground) + len(state.b_side.ground)
    if total == 0:
        return Fraction(0)
    return _pair_index_sum(state.host, state.a_side.broken(), state.b_side.broken()) / total**2


def irregular_cluster_pairs(
    state: PairPartitionState, oracle: PairOracle
) -> tuple[list[tuple[int, int, Witness]], int]:
    """Irregular (A_i, B_j) cluster pairs with witnesses, and the number of pairs examined."""
    pairs = [(x, y) for x in state.a_side.clusters for y in state.b_side.clusters]
    verdicts = oracle.check_many(pairs)
    width = len(state.b_side.clusters)
    found = [
        (i // width, i % width, v.witness)
        for i, v in enumerate(verdicts)
        if not v.regular and v.witness is not None
    ]
    return found, len(pairs)


def is_irregular_partition(state: PairPartitionState, oracle: PairOracle) -> bool:
    """More than ε·s·t of the s·t cluster pairs are ε-irregular."""
    found, examined = irregular_cluster_pairs(state, oracle)
    return examined > 0 and len(found) > oracle.eps * examined


def _check_pump_hypotheses(
    pairs: Sequence[PairPartitionState], spectators: Sequence[GarbagePartition], eps: Fraction, p: int, q: int
) -> None:
    if not 0 < eps < Fraction(1, 4):
        raise PreconditionError("eps_range", f"pumping needs eps in (0, 1/4), got {eps}")
    sides = [s for pair in pairs for s in (pair.a_side, pair.b_side)] + list(spectators)
    for side in sides:
        if not p <= len(side.clusters) <= q:
            raise PreconditionError("cluster_count", f"{len(side.clusters)} clusters outside [{p}, {q}]")
        if len(side.garbage) >= eps * len(side.ground):
            raise PreconditionError("garbage", f"garbage {len(side.garbage)} not below eps*{len(side.ground)}")
    for pair in pairs:
        a, b = len(pair.a_side.ground), len(pair.b_side.ground)
        if not (a <= 2 * b and b <= 2 * a):
            raise PreconditionError("size_compatibility", f"pair sides {a} and {b} differ by more than 2x")
        for c in spectators:
            size = len(c.ground)
            if not (max(a, b) <= 2 * size and size <= 2 * min(a, b)):
                raise PreconditionError("size_compatibility", f"spectator of size {size} incompatible with ({a}, {b})")


def _common_size(parts: Sequence[GarbagePartition]) -> int:
    sizes = {part.cluster_size for part in parts if part.clusters}
    if len(sizes) > 1:
        raise PreconditionError("equal_sizes", f"non-garbage clusters have different sizes {sorted(sizes)}")
    return sizes.pop() if sizes else 0


def _atoms(cluster: VertexSet, cuts: Iterable[VertexSet]) -> list[VertexSet]:
    atoms = [cluster]
    for cut in cuts:
        atoms = [piece for atom in atoms for piece in (atom & cut, atom - cut) if piece]
    return sorted(atoms, key=min)


def _equalize(
    parts: Sequence[GarbagePartition],
    cuts: dict[tuple[int, int], list[VertexSet]],
    p: int,
    min_cluster_size: int,
) -> tuple[list[GarbagePartition], int]:
    """Split clusters into Venn atoms of the witness sets, then chop atoms to a common size."""
    size = _common_size(parts)
    atoms = {
        (pi, ci): _atoms(cluster, cuts.get((pi, ci), []))
        for pi, part in enumerate(parts)
        for ci, cluster in enumerate(part.clusters)
    }
    most = max((len(a) for a in atoms.values()), default=1)
    chunk = size // (2**p * most)
    if chunk < max(1, min_cluster_size):
        raise PumpingStalled(f"cluster size {size} with {most} atoms and p={p} leaves chunks of size {chunk}")
    refined = []
    for pi, part in enumerate(parts):
        clusters: list[list[int]] = []
        for ci in range(len(part.clusters)):
            for atom in atoms[(pi, ci)]:
                members = sorted(atom)
                whole = len(members) // chunk * chunk
                clusters.extend(members[i : i + chunk] for i in range(0, whole, chunk))
        refined.append(GarbagePartition.build(part.ground, clusters))
    return refined, chunk


def pump_simultaneous(
    pairs: Sequence[PairPartitionState],
    spectators: Sequence[GarbagePartition],
    eps: Number,
    p: int,
    q: int,
    strict: bool = True,
    exact: bool | None = None,
    config: RegularityConfig | None = None,
    oracle: PairOracle | None = None,
) -> tuple[list[PairPartitionState], list[GarbagePartition]]:
    """Refine several ε-irregular pair partitions and spectator sets to one common cluster size.

    Each irregular cluster pair cuts its two clusters along its witness; the
    resulting atoms are chopped into chunks of size ⌊a/(2^p·M)⌋ (M the largest
    atom count) and remainders join the garbage, so garbage grows by at most a
    2^-p fraction of each set.
    """
    config = config or RegularityConfig()
    eps = Fraction(eps)
    grounds = [s.ground for pair in pairs for s in (pair.a_side, pair.b_side)] + [c.ground for c in spectators]
    if grounds and sum(len(x) for x in grounds) != len(frozenset().union(*grounds)):
        raise InputError("pair sides and spectators must be mutually disjoint")
    if oracle is not None and oracle.eps != eps:
        raise InputError("shared oracle was built for a different eps")
    if strict:
        _check_pump_hypotheses(pairs, spectators, eps, p, q)

    parts: list[GarbagePartition] = []
    cuts: dict[tuple[int, int], list[VertexSet]] = {}
    for pair in pairs:
        checker = (
            oracle
            if oracle is not None and oracle.host is pair.host
            else PairOracle(pair.host, eps, exact, config)
        )
        found, examined = irregular_cluster_pairs(pair, checker)
        if examined == 0 or len(found) <= eps * examined:
            raise NoWitnessError(f"pair partition has {len(found)} of {examined} irregular pairs; nothing to pump")
        a_pos, b_pos = len(parts), len(parts) + 1
        for i, j, (wa, wb) in found:
            cuts.setdefault((a_pos, i), []).append(wa)
            cuts.setdefault((b_pos, j), []).append(wb)
        parts.extend((pair.a_side, pair.b_side))
    parts.extend(spectators)

    refined, chunk = _equalize(parts, cuts, p, config.min_cluster_size)
    new_pairs = [
        PairPartitionState(refined[2 * i], refined[2 * i + 1], pair.host) for i, pair in enumerate(pairs)
    ]
    logger.debug(f"Pumped {len(pairs)} pairs and {len(spectators)} spectators to cluster size {chunk} (p={p})")
    return new_pairs, refined[2 * len(pairs) :]


def pump(
    state: PairPartitionState,
    eps: Number,
    p: int,
    q: int,
    strict: bool = True,
    exact: bool | None = None,
    config: RegularityConfig | None = None,
) -> PairPartitionState:
    """Pump a single ε-irregular pair partition.

    ``strict`` checks the formal hypotheses first, including the open range
    ε ∈ (0, 1/4); runs at ε = 1/4 itself need ``strict=False``.
    """
    return pump_simultaneous([state], [], eps, p, q, strict, exact, config)[0][0]


# -- regularization of locally dense graphs ----------------------------


def vizing_matchings(f: PatternGraph) -> list[list[Edge]]:
    return misra_gries(f.edges)


@dataclass
class RegularizationResult:
    parts: list[GarbagePartition]
    eps: Fraction
    eps_tilde: Fraction
    initial_cluster_size: int
    rounds: int = 0
    stalled: bool = False
    history: list[dict[str, Any]] = field(default_factory=list)

    def cluster_size(self) -> int:
        return _common_size(self.parts)

    def to_dict(self) -> dict[str, Any]:
        return {
            "sets": [part.to_dict() for part in self.parts],
            "rounds": self.rounds,
            "stalled": self.stalled,
            "eps_tilde": str(self.eps_tilde),
            "initial_cluster_size": self.initial_cluster_size,
            "history": self.history,
        }


def _validate_ensemble(h: Graph, f: PatternGraph, ensemble: Sequence[VertexSet]) -> None:
    if f.ell != len(ensemble):
        raise InputError(f"pattern has {f.ell} vertices but the ensemble has {len(ensemble)} sets")
    seen: set[int] = set()
    for w in ensemble:
        h.check_subset(w, "ensemble set")
        if not w:
            raise InputError("ensemble sets must be nonempty")
        if seen & w:
            raise InputError("ensemble sets must be pairwise disjoint")
        seen |= w
    if ensemble:
        small, large = min(len(w) for w in ensemble), max(len(w) for w in ensemble)
        if 2 * small < large:
            raise PreconditionError("samesize", f"ensemble sizes {small} and {large} violate 2|W_i| >= |W_j|")


def _chop(ensemble: Sequence[VertexSet], prepartition: Partition, size: int) -> list[GarbagePartition]:
    result = []
    for w in ensemble:
        clusters: list[list[int]] = []
        for zone in prepartition.blocks:
            members = sorted(w & zone)
            whole = len(members) // size * size
            clusters.extend(members[i : i + size] for i in range(0, whole, size))
        result.append(GarbagePartition.build(w, clusters))
    return result


def initial_partition(
    ensemble: Sequence[VertexSet],
    prepartition: Partition,
    eps: Fraction,
    eps_tilde: Fraction,
    config: RegularityConfig,
) -> tuple[list[GarbagePartition], int]:
    """Equal-size clusters inside the prepartition classes.

    Picks the largest size that leaves at most ε̃|W_i| garbage in every set and
    still allows ⌈1+1/ε⌉ clusters in the smallest set; falls back to the size with
    the least garbage.
    """
    wanted = config.initial_min_clusters or math.ceil(1 + 1 / eps)
    smallest = min(len(w) for w in ensemble)
    largest = max(1, smallest // wanted)
    floor_size = min(config.min_cluster_size, largest)
    best: tuple[int, int] | None = None
    for size in range(largest, floor_size - 1, -1):
        parts = _chop(ensemble, prepartition, size)
        garbage = [len(part.garbage) for part in parts]
        if all(g <= eps_tilde * len(w) for g, w in zip(garbage, ensemble)):
            return parts, size
        if best is None or sum(garbage) < best[0]:
            best = (sum(garbage), size)
    assert best is not None
    logger.warning(f"No initial cluster size keeps garbage below eps~; using size {best[1]}")
    return _chop(ensemble, prepartition, best[1]), best[1]


def q_maxcl_exceeds(m: int, z: int, eps: Number, bound: int) -> bool:
    """Whether the formal cluster-count bound q_MAXCL exceeds ``bound``.

    The bound iterates q -> 2q·16^q from ⌈4z/ε̃⌉ a huge number of times, so it is
    never materialized; iteration stops as soon as ``bound`` is passed.
    """
    eps_tilde = Fraction(eps) / 8
    q = math.ceil(4 * z / eps_tilde)
    steps = math.ceil(3691 * (m + 1) / eps_tilde**6)
    for _ in range(steps):
        if q > bound:
            return True
        q = 2 * q * 16**q
    return q > bound


def _matching_index(parts: Sequence[GarbagePartition], host: Graph, matching: Sequence[Edge]) -> Fraction:
    if not matching:
        return Fraction(0)
    total = sum(
        (index(PairPartitionState(parts[x], parts[y], host)) for x, y in matching), Fraction(0)
    )
    return total / len(matching)


def regularize_locally_dense(
    h: Graph,
    f: PatternGraph,
    ensemble: Sequence[Iterable[int]],
    prepartition: Partition,
    eps: Number,
    config: RegularityConfig | None = None,
    exact: bool | None = None,
) -> RegularizationResult:
    """Regularize H along the edges of F simultaneously for all ensemble sets.

    Matchings of an edge colouring of F are scanned in order; whenever at least
    an ε̃-fraction of a matching's pairs are ε̃-irregularly partitioned, all of
    them are pumped together with every other set as a spectator. Pumping
    stalls (and the run stops, flagged) when clusters would drop below the
    configured minimum size.
    """
    config = config or RegularityConfig()
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise InputError(f"eps must lie in (0,1), got {eps}")
    sets = [frozenset(w) for w in ensemble]
    _validate_ensemble(h, f, sets)
    union = frozenset().union(*sets) if sets else frozenset()
    missing = union - prepartition.ground
    if missing:
        raise InputError(f"prepartition misses ensemble vertices {sorted(missing)[:5]}")
    zones = prepartition.restrict(union) if union else prepartition
    eps_tilde = eps / config.eps_tilde_divisor
    if not sets:
        return RegularizationResult([], eps, eps_tilde, 0)

    parts, size = initial_partition(sets, zones, eps, eps_tilde, config)
    result = RegularizationResult(parts, eps, eps_tilde, size)
    logger.info(f"Initial partition: {len(sets)} sets, cluster size {size}")
    matchings = vizing_matchings(f)
    oracle = PairOracle(h, eps_tilde, exact, config)
    p_start = config.p_start or math.ceil(1 / eps)

    while True:
        pumped = False
        for qi, matching in enumerate(matchings):
            irregular = [
                (x, y)
                for x, y in matching
                if is_irregular_partition(PairPartitionState(parts[x], parts[y], h), oracle)
            ]
            if not irregular or len(irregular) < eps_tilde * len(matching):
                continue
            if result.rounds >= config.max_rounds:
                raise RoundBudgetExceeded(f"regularization exceeded {config.max_rounds} rounds")
            result.rounds += 1
            p = p_start + result.rounds
            in_pairs = {v for e in irregular for v in e}
            before = _matching_index(parts, h, matching)
            try:
                new_pairs, new_specs = pump_simultaneous(
                    [PairPartitionState(parts[x], parts[y], h) for x, y in irregular],
                    [parts[v] for v in range(len(parts)) if v not in in_pairs],
                    eps_tilde,
                    p,
                    q=0,
                    strict=False,
                    config=config,
                    oracle=oracle,
                )
            except PumpingStalled as e:
                logger.warning(f"Regularization stalled in round {result.rounds}: {e}")
                result.rounds -= 1
                result.stalled = True
                result.parts = parts
                return result
            updated = list(parts)
            for (x, y), state in zip(irregular, new_pairs):
                updated[x], updated[y] = state.a_side, state.b_side
            spectator_ids = [v for v in range(len(parts)) if v not in in_pairs]
            for v, part in zip(spectator_ids, new_specs):
                updated[v] = part
            parts = updated
            after = _matching_index(parts, h, matching)
            result.history.append(
                {
                    "round": result.rounds,
                    "matching": qi,
                    "irregular_edges": len(irregular),
                    "p": p,
                    "cluster_size": _common_size(parts),
                    "index_before": str(before),
                    "index_after": str(after),
                }
            )
            logger.debug(f"Round {result.rounds}: matching {qi}, {len(irregular)} pairs pumped")
            pumped = True
            break
        if not pumped:
            break
    result.parts = parts
    logger.info(f"Regularization finished after {result.rounds} rounds")
    return result


def classical_regularity(
    g: Graph,
    ground: Iterable[int],
    eps: Number,
    parts: int = 2,
    config: RegularityConfig | None = None,
    exact: bool | None = None,
) -> RegularizationResult:
    """Dense special case: split ``ground`` into nearly equal parts joined by a complete pattern."""
    members = sorted(g.check_subset(ground, "ground"))
    if parts < 2 or len(members) < parts:
        raise InputError(f"cannot split {len(members)} vertices into {parts} parts")
    chunks = [frozenset(members[i::parts]) for i in range(parts)]
    return regularize_locally_dense(
        g, PatternGraph.complete(parts), chunks, Partition.trivial(members), eps, config, exact
    )


# -- verification ------------------------------------------------------


def verify_regularization(
    h: Graph,
    f: PatternGraph,
    ensemble: Sequence[Iterable[int]],
    prepartition: Partition,
    parts: Sequence[GarbagePartition],
    eps: Number,
    exact: bool | None = None,
    config: RegularityConfig | None = None,
) -> dict[str, Any]:
    """Check the five conclusions of locally dense regularization on a computed output."""
    config = config or RegularityConfig()
    eps = Fraction(eps)
    sets = [frozenset(w) for w in ensemble]
    results: dict[str, ClauseResult] = {}

    counts = [len(part.clusters) for part in parts]
    low = [i for i, c in enumerate(counts) if c < 1 / eps]
    most = max(counts, default=0)
    within_formal = most == 0 or q_maxcl_exceeds(f.m, len(prepartition), eps, most - 1)
    results["a_cluster_counts"] = ClauseResult(
        not low and within_formal,
        {"min": min(counts, default=0), "max": most, "lower_bound": str(1 / eps)},
        [f"set {i} has {counts[i]} clusters" for i in low],
    )

    sizes = sorted({part.cluster_size for part in parts if part.clusters})
    results["b_uniform_size"] = ClauseResult(len(sizes) <= 1, {"sizes": sizes})

    zone_issues = [
        f"cluster {sorted(c)[:4]} of set {i} spans several classes"
        for i, part in enumerate(parts)
        for c in part.clusters
        if len({prepartition.block_of(v) for v in c}) != 1
    ]
    results["c_prepartition"] = ClauseResult(not zone_issues, {"classes": len(prepartition)}, zone_issues)

    garbage = sum(len(part.garbage) for part in parts)
    total = sum(len(w) for w in sets)
    results["d_garbage"] = ClauseResult(
        garbage < eps * total, {"garbage": garbage, "bound": str(eps * total)}
    )

    oracle = PairOracle(h, eps, exact, config)
    pairs = [
        (x, y) for i, j in f.edges for x in parts[i].clusters for y in parts[j].clusters
    ]
    verdicts = oracle.check_many(pairs)
    irregular = sum(1 for v in verdicts if not v.regular)
    advisory = any(v.regular and not v.exact for v in verdicts)
    results["e_irregular_pairs"] = ClauseResult(
        irregular <= eps * len(pairs),
        {"irregular": irregular, "pairs": len(pairs), "bound": str(eps * len(pairs)), "advisory": advisory},
    )
    return generate_report(results, sets=len(parts))



def account_uncaptured(
    h: Graph,
    f: PatternGraph,
    ensemble: Sequence[Iterable[int]],
    parts: Sequence[GarbagePartition],
    gamma: Number,
    eps: Number,
    omega: Number,
    k: int,
    exact: bool | None = None,
    config: RegularityConfig | None = None,
) -> dict[str, Any]:
    """Split E(H) into garbage, irregular, sparse and good edges and compare with the bounds."""
    config = config or RegularityConfig()
    gamma, eps, omega = Fraction(gamma), Fraction(eps), Fraction(omega)
    sets = [frozenset(w) for w in ensemble]
    n = h.order
    if h.maxdeg() > omega * k:
        raise PreconditionError("maxdeg", f"maxdeg {h.maxdeg()} exceeds Omega*k = {omega * k}")
    if h.e > k * n:
        raise PreconditionError("edge_count", f"e(H) = {h.e} exceeds k*n = {k * n}")
    owner = {v: i for i, w in enumerate(sets) for v in w}
    pattern = set(f.edges)
    for x, y in h.edges:
        if x not in owner or y not in owner or normalize_edge(owner[x], owner[y]) not in pattern:
            raise PreconditionError("captured", f"edge ({x}, {y}) is not captured by a pattern edge")
    for i, j in f.edges:
        if density(h, sets[i], sets[j]) < gamma:
            raise PreconditionError("pattern_density", f"d(W_{i}, W_{j}) is below gamma")

    cluster_of: dict[int, VertexSet] = {v: c for part in parts for c in part.clusters for v in c}
    oracle = PairOracle(h, eps, exact, config)
    counts = {"garbage": 0, "irregular": 0, "sparse": 0, "good": 0}
    for x, y in h.edges:
        if x not in cluster_of or y not in cluster_of:
            counts["garbage"] += 1
            continue
        cx, cy = cluster_of[x], cluster_of[y]
        if not oracle.check(cx, cy).regular:
            counts["irregular"] += 1
        elif density(h, cx, cy) <= gamma**2:
            counts["sparse"] += 1
        else:
            counts["good"] += 1

    nk = n * k
    bounds = {
        "irregular": 4 * eps * nk / gamma,
        "garbage": eps * omega * nk,
        "sparse": gamma * nk,
    }
    uncaptured = counts["garbage"] + counts["irregular"] + counts["sparse"]
    total_bound = sum(bounds.values(), Fraction(0))
    results = {
        name: ClauseResult(counts[name] <= bound, {"edges": counts[name], "bound": str(bound)})
        for name, bound in bounds.items()
    }
    results["total"] = ClauseResult(uncaptured <= total_bound, {"edges": uncaptured, "bound": str(total_bound)})
    report = generate_report(results, edges=h.e, good=counts["good"], uncaptured=uncaptured)
    report["counts"] = counts
    return report


# -- subpair facts -----------------------------------------------------


def check_regular_subpair(
    g: Graph,
    u: Iterable[int],
    w: Iterable[int],
    u_sub: Iterable[int],
    w_sub: Iterable[int],
    eps: Number,
    alpha: Number,
    config: RegularityConfig | None = None,
) -> dict[str, Any]:
    """Large subpairs of an ε-regular pair are (2ε/α)-regular with density at least d-ε."""
    eps, alpha = Fraction(eps), Fraction(alpha)
    us, ws = frozenset(u), frozenset(w)
    u2, w2 = frozenset(u_sub), frozenset(w_sub)
    applicable = (
        alpha > eps
        and u2 <= us
        and w2 <= ws
        and bool(u2)
        and bool(w2)
        and len(u2) >= alpha * len(us)
        and len(w2) >= alpha * len(ws)
        and is_regular_pair(g, us, ws, eps, True, config).regular
    )
    if not applicable:
        return {"applicable": False}
    d = density(g, us, ws)
    d_sub = density(g, u2, w2)
    sub_eps = 2 * eps / alpha
    sub_regular = sub_eps >= 1 or is_regular_pair(g, u2, w2, sub_eps, True, config).regular
    return {
        "applicable": True,
        "density": str(d),
        "subpair_density": str(d_sub),
        "density_ok": d_sub >= d - eps,
        "subpair_eps": str(sub_eps),
        "regular_ok": sub_regular,
    }


def sparse_subpair_mass(
    g: Graph, u_parts: Sequence[Iterable[int]], w_parts: Sequence[Iterable[int]], beta: Number
) -> dict[str, Any]:
    """Edges of (U, W) lying in subpairs of density ≤ β, against the bound β·e(H)/d(U,W)."""
    beta = Fraction(beta)
    ups = [frozenset(x) for x in u_parts]
    wps = [frozenset(y) for y in w_parts]
    us = frozenset().union(*ups)
    ws = frozenset().union(*wps)
    d = density(g, us, ws)
    edges = len(g.edges_between(us, ws))
    mass = sum(
        len(g.edges_between(x, y)) for x in ups for y in wps if density(g, x, y) <= beta
    )
    bound = beta * edges / d if d else Fraction(0)
    return {"mass": mass, "bound": str(bound), "holds": d == 0 or mass <= bound, "density": str(d)}
