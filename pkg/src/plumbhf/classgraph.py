"""Equivalence classes of U-states and their successor structure.

For one sector the states ``U^m (x) K`` are explored breadth-first from
the seed chains above each leaf vector, restricted to a bounded region
(a padded coordinate box and a U-power cap), and partitioned by the move
relation with union-find.  On the resulting classes the U-successor map
is a function; torsion sectors grade it by levels and merge into a single
stem, non-torsion sectors flow into a unique cycle.

The region is a truncation of an infinite model, so every build is
re-checked: constructing the graph again with a strictly larger region
must reproduce the same merge structure, heights and relations, else
``RegionUnstable`` is raised.  The desk-scale brute-force model in
:mod:`plumbhf.oracle` independently validates the whole scheme.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .charvec import CharVector, SpinCClass, UState, lattice_context, level
from .config import DEFAULT_EXPANSION, max_states
from .errors import (
    NotRelatedWithinDepth,
    RegionUnstable,
    StateCountExceeded,
    UnstableInput,
)
from .graphs import PlumbingGraph
from .walk import WalkKind, ensure_supported, iter_nontorsion_box, run_walk
from .charvec import spinc_of


@dataclass(frozen=True)
class MinimalRelation:
    """Lexicographically minimal (n, m) with U^n K1 ~ U^m K2."""

    k1: CharVector
    k2: CharVector
    n: int
    m: int


@dataclass
class ClassGraph:
    """Explored class structure of one sector.

    ``chains[K][j]`` is the class id of ``U^j (x) K`` for each seed leaf
    K, for j up to ``depth``.  Torsion sectors carry exact levels per
    class; non-torsion sectors carry the cycle and per-leaf tail lengths.
    """

    g: PlumbingGraph
    sector: SpinCClass
    leaves: tuple[CharVector, ...]
    torsion: bool
    depth: int
    expansion: int
    n_states: int
    chains: dict[CharVector, tuple[int, ...]]
    u_map: dict[int, int]
    region_stable: bool = False
    single_stem: bool = False
    class_level: dict[int, Fraction] = field(default_factory=dict)
    classes_per_level: dict[Fraction, int] = field(default_factory=dict)
    cycle_ids: frozenset[int] = frozenset()
    cycle_length: int = 0
    heights: dict[CharVector, int] = field(default_factory=dict)
    # per-leaf elder data; see torsion_merge_summary / nontorsion_merge_summary
    merge_summary: tuple = ()

    def leaf_height(self, K: CharVector) -> int:
        """Tail length from the zero-power class of K to the cycle."""
        if self.torsion:
            raise ValueError("torsion sectors have no cycle")
        return self.heights[tuple(K)]

    def relation(self, k1: CharVector, k2: CharVector) -> MinimalRelation:
        """Scan the chains for the lexicographically minimal relation."""
        k1, k2 = tuple(k1), tuple(k2)
        c1, c2 = self.chains[k1], self.chains[k2]
        for n in range(len(c1)):
            for m in range(len(c2)):
                if c1[n] == c2[m]:
                    return MinimalRelation(k1=k1, k2=k2, n=n, m=m)
        raise NotRelatedWithinDepth(
            f"no relation between {k1} and {k2} within depth {self.depth}"
        )


def _default_depth_cap(g: PlumbingGraph) -> int:
    return max(8, 2 * sum(abs(w) for w in g.weights))


def _explore(g, seeds, depth, expansion, m_cap):
    """Breadth-first closure of the seed states under both move directions.

    Returns (state->index map, union-find parent array, chains).
    """
    n = g.n
    weights = g.weights
    rows = g.matrix
    box = [abs(w) + 2 * expansion for w in weights]
    cap = max_states()

    index: dict[tuple[int, CharVector], int] = {}
    parent: list[int] = []

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    queue: deque = deque()
    for K in seeds:
        for m in range(depth + 1):
            st = (m, K)
            if st not in index:
                index[st] = len(parent)
                parent.append(index[st])
                queue.append(st)
    while queue:
        st = queue.popleft()
        m, K = st
        i = index[st]
        for v in range(n):
            row = rows[v]
            w = weights[v]
            # forward: add twice the dual class; backward: subtract it
            for sign in (1, -1):
                if sign == 1:
                    m2 = m + (K[v] + w) // 2
                else:
                    m2 = m - (K[v] - w) // 2
                if m2 < 0 or m2 > m_cap:
                    continue
                K2 = tuple(k + sign * 2 * r for k, r in zip(K, row))
                if any(abs(k) > b for k, b in zip(K2, box)):
                    continue
                st2 = (m2, K2)
                j = index.get(st2)
                if j is None:
                    j = len(parent)
                    index[st2] = j
                    parent.append(j)
                    queue.append(st2)
                    if j > cap:
                        raise StateCountExceeded(
                            f"class-graph exploration exceeded {cap} states"
                        )
                union(i, j)
    chains = {
        K: tuple(find(index[(m, K)]) for m in range(depth + 1)) for K in seeds
    }
    return index, parent, find, chains


def _check_u_map(index, find, depth) -> dict[int, int]:
    """Induce the U-successor map on classes and verify it is a function."""
    u_map: dict[int, int] = {}
    for (m, K), i in index.items():
        j = index.get((m + 1, K))
        if j is None:
            continue
        src, dst = find(i), find(j)
        prev = u_map.get(src)
        if prev is None:
            u_map[src] = dst
        elif prev != dst:
            raise RegionUnstable(
                "U-successor map is not well defined on the explored region"
            )
    return u_map


def _build_once(g, sector, seeds, depth, expansion, m_cap) -> ClassGraph:
    index, parent, find, chains = _explore(g, seeds, depth, expansion, m_cap)
    u_map = _check_u_map(index, find, depth)
    cg = ClassGraph(
        g=g,
        sector=sector,
        leaves=tuple(seeds),
        torsion=sector.torsion,
        depth=depth,
        expansion=expansion,
        n_states=len(parent),
        chains=chains,
        u_map=u_map,
    )
    if sector.torsion:
        _finish_torsion(cg, index, find)
    else:
        _finish_nontorsion(cg)
    return cg


def _finish_torsion(cg: ClassGraph, index, find) -> None:
    g = cg.g
    ctx = lattice_context(g)
    base: dict[CharVector, Fraction] = {}
    levels: dict[int, Fraction] = {}
    for (m, K), i in index.items():
        b = base.get(K)
        if b is None:
            b = level(g, UState(0, K))
            base[K] = b
        lv = b + 2 * m
        root = find(i)
        prev = levels.get(root)
        if prev is None:
            levels[root] = lv
        elif prev != lv:
            raise RegionUnstable(
                f"states of different levels ({prev} vs {lv}) were identified; "
                "the exploration region is inconsistent"
            )
    cg.class_level = levels
    per_level: dict[Fraction, int] = {}
    for root in {find(i) for i in range(cg.n_states)}:
        lv = levels[root]
        per_level[lv] = per_level.get(lv, 0) + 1
    cg.classes_per_level = per_level


def _finish_nontorsion(cg: ClassGraph) -> None:
    if not cg.leaves:
        return
    seq = cg.chains[cg.leaves[0]]
    first_seen: dict[int, int] = {}
    entry = cyclen = None
    for j, c in enumerate(seq):
        if c in first_seen:
            entry, cyclen = first_seen[c], j - first_seen[c]
            break
        first_seen[c] = j
    if entry is None:
        return  # unresolved at this depth; caller deepens
    cycle_ids = frozenset(seq[entry : entry + cyclen])
    heights: dict[CharVector, int] = {}
    for K in cg.leaves:
        h = next((m for m, c in enumerate(cg.chains[K]) if c in cycle_ids), None)
        if h is None:
            return  # some leaf has not reached the cycle yet
        heights[K] = h
    cg.cycle_ids = cycle_ids
    cg.cycle_length = cyclen
    cg.heights = heights


def _torsion_resolved(cg: ClassGraph) -> bool:
    if not cg.leaves:
        return True
    births = {K: cg.class_level[cg.chains[K][0]] for K in cg.leaves}
    top = min(b + 2 * cg.depth for b in births.values())
    # demand a merged stem with two spare levels at the top
    target = top - 4
    classes = set()
    for K, b in births.items():
        j = (target - b) / 2
        if j.denominator != 1 or j < 0:
            return False
        classes.add(cg.chains[K][int(j)])
    return len(classes) == 1


def _nontorsion_resolved(cg: ClassGraph) -> bool:
    if not cg.leaves:
        return True
    if not cg.cycle_ids:
        return False
    return all(
        h + cg.cycle_length + 1 <= cg.depth for h in cg.heights.values()
    )


def torsion_merge_summary(cg: ClassGraph):
    """Elder pairing of the leaves of a torsion sector.

    Returns ``(principal, tower_bottom, pairs)`` where ``pairs`` holds one
    ``(leaf, birth_level, death_level)`` triple for every non-principal
    leaf: walking up the stem, whenever the branch of a younger leaf first
    shares a class with an elder branch, the younger one dies there.
    """
    births = {K: cg.class_level[cg.chains[K][0]] for K in cg.leaves}
    visitors: dict[int, list[CharVector]] = {}
    for K in cg.leaves:
        for c in cg.chains[K]:
            visitors.setdefault(c, []).append(K)
    cluster: dict[CharVector, CharVector] = {K: K for K in cg.leaves}

    def rep(K: CharVector) -> CharVector:
        while cluster[K] != K:
            cluster[K] = cluster[cluster[K]]
            K = cluster[K]
        return K

    deaths: dict[CharVector, Fraction] = {}
    shared = sorted(
        (c for c, vs in visitors.items() if len(vs) > 1),
        key=lambda c: cg.class_level[c],
    )
    for c in shared:
        reps = sorted({rep(K) for K in visitors[c]}, key=lambda K: (births[K], K))
        if len(reps) < 2:
            continue
        lv = cg.class_level[c]
        survivor = reps[0]
        for other in reps[1:]:
            if lv <= births[other]:
                raise UnstableInput(
                    "two leaves were identified at their birth level; "
                    "the leaf set is not a set of distinct basic classes"
                )
            deaths[other] = lv
            cluster[other] = survivor
    live = {rep(K) for K in cg.leaves}
    if len(live) != 1:
        raise UnstableInput(
            "torsion sector did not merge into a single stem within depth "
            f"{cg.depth}"
        )
    principal = live.pop()
    pairs = tuple(
        sorted((K, births[K], deaths[K]) for K in cg.leaves if K != principal)
    )
    return principal, births[principal], pairs


def nontorsion_merge_summary(cg: ClassGraph):
    """Elder pairing for a non-torsion sector.

    Every leaf dies exactly once, either by merging into a branch with a
    longer remaining tail or by entering the cycle; the number of U-steps
    it has taken by then is the length of its cyclic summand.  Returns a
    tuple of ``(leaf, length)`` pairs covering every leaf.
    """
    heights = cg.heights
    dist: dict[int, int] = {}  # class -> steps remaining to the cycle
    visitors: dict[int, list[CharVector]] = {}
    for K in cg.leaves:
        chain = cg.chains[K]
        for m in range(heights[K] + 1):
            c = chain[m]
            d = heights[K] - m
            if dist.setdefault(c, d) != d:
                raise UnstableInput("inconsistent cycle distances between branches")
            visitors.setdefault(c, []).append(K)
    cluster: dict[CharVector, CharVector] = {K: K for K in cg.leaves}

    def rep(K: CharVector) -> CharVector:
        while cluster[K] != K:
            cluster[K] = cluster[cluster[K]]
            K = cluster[K]
        return K

    lengths: dict[CharVector, int] = {}
    # off-cycle merge classes, furthest from the cycle first
    shared = sorted(
        (c for c, vs in visitors.items() if len(vs) > 1 and c not in cg.cycle_ids),
        key=lambda c: -dist[c],
    )
    for c in shared:
        reps = sorted(
            {rep(K) for K in visitors[c]},
            key=lambda K: (-(heights[K] - dist[c]), K),
        )
        if len(reps) < 2:
            continue
        for other in reps[1:]:
            pos = heights[other] - dist[c]
            if pos <= 0:
                raise UnstableInput(
                    "two leaves were identified at power zero; the leaf set "
                    "is not a set of distinct basic classes"
                )
            lengths[other] = pos
            cluster[other] = reps[0]
    for K in cg.leaves:
        if rep(K) == K:
            lengths[K] = heights[K]
    return tuple(sorted(lengths.items()))


def _summary(cg: ClassGraph):
    if cg.torsion:
        return ("torsion",) + torsion_merge_summary(cg)
    return (
        "nontorsion",
        nontorsion_merge_summary(cg),
        tuple(sorted(cg.heights.items())),
        cg.cycle_length,
    )


def _build_stable(g, sector, seeds, depth, expansion) -> ClassGraph:
    m_cap = depth + 2 * expansion + 2
    cg = _build_once(g, sector, seeds, depth, expansion, m_cap)
    if sector.torsion:
        if not _torsion_resolved(cg):
            return cg  # caller deepens
    else:
        if not _nontorsion_resolved(cg):
            return cg
    check = _build_once(g, sector, seeds, depth, expansion + 1, m_cap + 2)
    if _summary(cg) != _summary(check):
        raise RegionUnstable(
            f"expansion {expansion} and {expansion + 1} disagree on sector "
            f"{sector.label}; retry with a larger expansion"
        )
    cg.region_stable = True
    cg.merge_summary = _summary(cg)
    if sector.torsion:
        cg.single_stem = True
    return cg


@lru_cache(maxsize=64)
def _sector_graph_cached(g, sector, seeds, depth, expansion):
    if depth is not None:
        cg = _build_stable(g, sector, seeds, depth, expansion)
        if not cg.region_stable:
            raise NotRelatedWithinDepth(
                f"sector {sector.label}: structure unresolved at depth {depth}"
            )
        return cg
    cap = _default_depth_cap(g)
    d = 8
    while True:
        cg = _build_stable(g, sector, seeds, d, expansion)
        if cg.region_stable:
            return cg
        if d >= cap:
            raise StateCountExceeded(
                f"sector {sector.label}: structure unresolved at the depth cap "
                f"{cap}; the sector may fall outside the supported theory"
            )
        d = min(2 * d, cap)


def sector_graph(
    g: PlumbingGraph,
    sector: SpinCClass,
    leaves,
    depth: Optional[int] = None,
    expansion: int = DEFAULT_EXPANSION,
) -> ClassGraph:
    """Stable class graph for the given sector and seed leaves.

    With ``depth=None`` the exploration deepens adaptively until the merge
    structure resolves (single stem, or cycle plus all tails), then the
    mandatory stability re-check runs at ``expansion + 1``.
    """
    return _sector_graph_cached(g, sector, tuple(sorted(tuple(K) for K in leaves)), depth, expansion)


def build_class_graph(
    g: PlumbingGraph,
    sector: SpinCClass,
    depth: Optional[int] = None,
    expansion: int = DEFAULT_EXPANSION,
) -> ClassGraph:
    """Class graph of a sector, seeding every box candidate of the sector.

    Torsion sectors seed their basic vectors; non-torsion sectors seed all
    box vectors with in-box walk termination, so that the graph itself can
    decide which of them are leaves (the on-cycle ones are not).
    """
    ensure_supported(g)
    ctx = lattice_context(g)
    if sector.torsion:
        from .walk import enumerate_basic_torsion

        seeds = [K for K in enumerate_basic_torsion(g) if spinc_of(g, K) == sector]
    else:
        seeds = [
            K
            for K in iter_nontorsion_box(g)
            if not ctx.is_torsion(K)
            and spinc_of(g, K) == sector
            and run_walk(g, K).kind is WalkKind.TERMINATED_IN_BOX
        ]
    if not seeds:
        raise ValueError(f"sector {sector.label} has no candidate leaves")
    return sector_graph(g, sector, seeds, depth=depth, expansion=expansion)


# -- convenience operations -------------------------------------------------

def height(g: PlumbingGraph, K, depth: Optional[int] = None) -> int:
    """Tail length of a non-torsion basic vector before its U-cycle."""
    K = tuple(K)
    sector = spinc_of(g, K)
    if sector.torsion:
        raise ValueError("height is defined for non-torsion vectors only")
    cg = build_class_graph(g, sector, depth=depth)
    return cg.leaf_height(K)


def self_relation_exists(g: PlumbingGraph, K, bound: Optional[int] = None) -> bool:
    """Whether U^0 K is equivalent to some U^l K with l > 0.

    True exactly when the zero-power class sits on the sector's cycle.
    Torsion vectors return False: their sectors carry no cycle.
    """
    K = tuple(K)
    sector = spinc_of(g, K)
    if sector.torsion:
        return False
    cg = build_class_graph(g, sector, depth=bound)
    return cg.leaf_height(K) == 0


def minimal_relation(
    g: PlumbingGraph, k1, k2, depth: Optional[int] = None
) -> MinimalRelation:
    """Minimal relation between two basic vectors of one sector."""
    k1, k2 = tuple(k1), tuple(k2)
    s1, s2 = spinc_of(g, k1), spinc_of(g, k2)
    if s1 != s2:
        raise ValueError("vectors lie in different sectors")
    cg = build_class_graph(g, s1, depth=depth)
    return cg.relation(k1, k2)
