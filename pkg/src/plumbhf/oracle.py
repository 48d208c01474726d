"""Independent brute-force model of the state equivalence, for verification.

This module re-derives the class structure with none of the walk theory:
it enumerates every state over a padded coordinate box up to a U-power
cap, applies the defining move relation exhaustively, and partitions with
its own union-find.  Classes that could interact with states outside the
enumerated region are flagged unreliable and excluded from comparisons;
a class without any escaping move is a complete equivalence class of the
full model, so agreement on the reliable part is exact evidence.

Shared code with the main pipeline is limited to the characteristic
vector primitives, which is the point: the two sides implement the same
definition twice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

from .charvec import (
    CharVector,
    SpinCClass,
    UState,
    lattice_context,
    level,
    spinc_of,
)
from .config import max_states
from .errors import StateCountExceeded
from .graphs import PlumbingGraph

State = tuple[int, CharVector]


@dataclass
class TruncatedStateModel:
    g: PlumbingGraph
    sector: SpinCClass
    m_cap: int
    box_pad: int
    class_of: dict[State, int]
    class_states: dict[int, list[State]]
    reliable: frozenset[int]  # no escaping moves at all: complete classes
    in_box: frozenset[int]  # may escape the U-power cap but not the box
    u_edges: dict[int, int]  # induced successor map where defined

    def basic_classes(self) -> list[list[CharVector]]:
        """Reliable classes without any positive-power state."""
        out = []
        for cid, states in sorted(self.class_states.items()):
            if cid not in self.reliable:
                continue
            if all(m == 0 for m, _ in states):
                out.append(sorted(K for _, K in states))
        return out

    def height_of(self, K: CharVector) -> Optional[int]:
        """Tail length of the zero-power class of K, if the cycle closes
        inside the model."""
        K = tuple(K)
        seq = []
        for m in range(self.m_cap + 1):
            cid = self.class_of.get((m, K))
            if cid is None:
                return None
            seq.append(cid)
        seen: dict[int, int] = {}
        for j, cid in enumerate(seq):
            if cid in seen:
                return seen[cid]
            seen[cid] = j
        return None

    def minimal_relation_of(self, k1: CharVector, k2: CharVector) -> Optional[tuple[int, int]]:
        k1, k2 = tuple(k1), tuple(k2)
        for n in range(self.m_cap + 1):
            c1 = self.class_of.get((n, k1))
            if c1 is None:
                return None
            for m in range(self.m_cap + 1):
                if self.class_of.get((m, k2)) == c1:
                    return (n, m)
        return None


def _sector_box(g: PlumbingGraph, sector: SpinCClass, box_pad: int) -> list[CharVector]:
    ctx = lattice_context(g)
    cap = max_states()
    ranges = []
    total = 1
    for w in g.weights:
        lo, hi = w - 2 * box_pad, -w + 2 * box_pad
        r = range(lo, hi + 1, 2)
        ranges.append(r)
        total *= len(r)
        if total > cap:
            raise StateCountExceeded(f"oracle box exceeds {cap} vectors")
    out = []
    for K in product(*ranges):
        if spinc_of(g, K) == sector:
            out.append(tuple(K))
    return out


def brute_classes(
    g: PlumbingGraph, sector: SpinCClass, m_cap: int = 4, box_pad: int = 1
) -> TruncatedStateModel:
    """Exhaustive partition of the boxed states of one sector."""
    vectors = _sector_box(g, sector, box_pad)
    cap = max_states()
    if len(vectors) * (m_cap + 1) > cap:
        raise StateCountExceeded(
            f"oracle model would hold {len(vectors) * (m_cap + 1)} states (cap {cap})"
        )
    states: dict[State, int] = {}
    for K in vectors:
        for m in range(m_cap + 1):
            states[(m, K)] = len(states)
    parent = list(range(len(states)))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    box_escape = [False] * len(states)
    cap_escape = [False] * len(states)
    n = g.n
    weights = g.weights
    rows = g.matrix
    for (m, K), i in states.items():
        for v in range(n):
            row = rows[v]
            w = weights[v]
            for sign in (1, -1):
                if sign == 1:
                    m2 = m + (K[v] + w) // 2
                else:
                    m2 = m - (K[v] - w) // 2
                if m2 < 0:
                    continue
                K2 = tuple(k + sign * 2 * r for k, r in zip(K, row))
                if (m2, K2) not in states:
                    if m2 > m_cap:
                        cap_escape[i] = True
                    else:
                        box_escape[i] = True
                    continue
                j = states[(m2, K2)]
                ra, rb = find(i), find(j)
                if ra != rb:
                    parent[ra] = rb

    class_states: dict[int, list[State]] = {}
    class_box_esc: dict[int, bool] = {}
    class_cap_esc: dict[int, bool] = {}
    class_of: dict[State, int] = {}
    for st, i in states.items():
        root = find(i)
        class_states.setdefault(root, []).append(st)
        class_box_esc[root] = class_box_esc.get(root, False) or box_escape[i]
        class_cap_esc[root] = class_cap_esc.get(root, False) or cap_escape[i]
        class_of[st] = root
    u_edges: dict[int, int] = {}
    for (m, K), i in states.items():
        j = states.get((m + 1, K))
        if j is None:
            continue
        src, dst = find(i), find(j)
        if u_edges.setdefault(src, dst) != dst:
            raise AssertionError("oracle successor map is not well defined")
    reliable = frozenset(
        c for c in class_states if not class_box_esc[c] and not class_cap_esc[c]
    )
    in_box = frozenset(c for c in class_states if not class_box_esc[c])
    return TruncatedStateModel(
        g=g,
        sector=sector,
        m_cap=m_cap,
        box_pad=box_pad,
        class_of=class_of,
        class_states=class_states,
        reliable=reliable,
        in_box=in_box,
        u_edges=u_edges,
    )


def truncated_rank_profile(
    g: PlumbingGraph, sector: SpinCClass, model: TruncatedStateModel
):
    """Per-degree (torsion) or per-depth (non-torsion) ranks of the model.

    Torsion: the rank in degree d is the number of classes at level d; the
    profile stops below the first unreliable class.  Non-torsion: the rank
    increment at depth r counts off-cycle classes whose longest incoming
    chain is shorter than r; requires the whole model reliable.
    """
    if sector.torsion:
        levels: dict[int, Fraction] = {}
        for cid, sts in model.class_states.items():
            vals = {level(g, UState(m, K)) for m, K in sts}
            if len(vals) != 1:
                raise AssertionError("oracle identified states of different levels")
            levels[cid] = vals.pop()
        cutoff = min(
            (levels[c] for c in model.class_states if c not in model.reliable),
            default=None,
        )
        counts: dict[Fraction, int] = {}
        for cid, lv in levels.items():
            if cid not in model.reliable:
                continue
            if cutoff is not None and lv >= cutoff:
                continue
            counts[lv] = counts.get(lv, 0) + 1
        return {"kind": "torsion", "counts": counts, "cutoff": cutoff}

    # non-torsion: cycle classes escape the U-power cap by nature, so only
    # the coordinate box must be airtight for the tail structure to count
    if any(c not in model.in_box for c in model.class_states):
        return {"kind": "nontorsion", "profile": None, "off_cycle": None}
    classes = set(model.class_states)
    on_cycle: set[int] = set()
    for start in classes:
        seen: dict[int, int] = {}
        c: Optional[int] = start
        k = 0
        while c is not None and c not in seen:
            seen[c] = k
            c = model.u_edges.get(c)
            k += 1
        if c is not None:
            entry = seen[c]
            path = sorted(seen, key=seen.get)
            on_cycle.update(path[entry:])
    off = [c for c in classes if c not in on_cycle]
    preds: dict[int, list[int]] = {}
    for src, dst in model.u_edges.items():
        preds.setdefault(dst, []).append(src)
    depth_in: dict[int, int] = {}

    def depth(c: int) -> int:
        if c in depth_in:
            return depth_in[c]
        best = 0
        for p in preds.get(c, []):
            if p in on_cycle:
                continue
            best = max(best, depth(p) + 1)
        depth_in[c] = best
        return best

    for c in off:
        depth(c)
    max_r = max(depth_in.values(), default=0) + 1
    profile = {r: sum(1 for c in off if depth_in[c] < r) for r in range(1, max_r + 2)}
    return {"kind": "nontorsion", "profile": profile, "off_cycle": len(off)}


@dataclass
class CrossCheck:
    graph_name: Optional[str]
    mismatches: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches


def cross_check(
    g: PlumbingGraph,
    m_cap: int = 4,
    box_pad: int = 1,
    max_pairs: int = 12,
) -> CrossCheck:
    """Compare the main pipeline against the brute-force model.

    Covers basic-vector sets, heights, minimal relations, and rank
    profiles, sector by sector.  Only reliable oracle data participates;
    anything the truncated model cannot certify is listed as skipped.
    """
    from .assembly import assemble_nontorsion, assemble_torsion
    from .classgraph import sector_graph
    from .walk import enumerate_basic_nontorsion, enumerate_basic_torsion

    report = CrossCheck(graph_name=g.name)
    basics = enumerate_basic_torsion(g) + enumerate_basic_nontorsion(g)
    by_sector: dict[SpinCClass, list[CharVector]] = {}
    for K in basics:
        by_sector.setdefault(spinc_of(g, K), []).append(K)

    for sector in sorted(by_sector, key=lambda s: s.sort_key()):
        leaves = sorted(by_sector[sector])
        model = brute_classes(g, sector, m_cap=m_cap, box_pad=box_pad)
        report.checked += 1
        tag = f"sector {sector.label if sector.label is not None else sector.representative}"

        oracle_basics = model.basic_classes()
        pipeline_set = set(leaves)
        matched: set[CharVector] = set()
        for members in oracle_basics:
            hits = [K for K in members if K in pipeline_set]
            if len(hits) != 1:
                report.mismatches.append(
                    f"{tag}: oracle basic class {members} matches pipeline vectors {hits}"
                )
            else:
                matched.add(hits[0])
        for K in pipeline_set - matched:
            cid = model.class_of.get((0, K))
            if cid is None or cid not in model.reliable:
                report.skipped.append(f"{tag}: basic vector {K} outside reliable region")
            else:
                report.mismatches.append(
                    f"{tag}: pipeline basic vector {K} is not basic in the oracle"
                )

        cg = sector_graph(g, sector, leaves)
        if sector.torsion:
            dec = assemble_torsion(g, cg)
            prof = truncated_rank_profile(g, sector, model)
            for lv, count in sorted(prof["counts"].items()):
                want = _torsion_rank(dec, lv)
                if count != want:
                    report.mismatches.append(
                        f"{tag}: rank {count} at level {lv}, pipeline predicts {want}"
                    )
        else:
            dec = assemble_nontorsion(g, cg)
            lengths = sorted(
                s.length for s in dec.summands if s.length is not None
            )
            for K in leaves:
                oh = model.height_of(K)
                if oh is None:
                    report.skipped.append(f"{tag}: height of {K} beyond oracle cap")
                    continue
                ph = cg.leaf_height(K)
                if oh != ph:
                    report.mismatches.append(
                        f"{tag}: height of {K}: oracle {oh}, pipeline {ph}"
                    )
            prof = truncated_rank_profile(g, sector, model)
            tails_fit = max(cg.heights.values(), default=0) + cg.cycle_length < m_cap
            if prof["profile"] is None or not tails_fit:
                report.skipped.append(f"{tag}: depth profile beyond oracle region")
            else:
                for r, count in sorted(prof["profile"].items()):
                    if r > m_cap:
                        continue
                    want = sum(min(l, r) for l in lengths)
                    if count != want:
                        report.mismatches.append(
                            f"{tag}: depth-{r} rank {count}, pipeline predicts {want}"
                        )
        # minimal relations between the first few pairs of leaves
        pairs = [
            (leaves[i], leaves[j])
            for i in range(len(leaves))
            for j in range(i + 1, len(leaves))
        ][:max_pairs]
        for k1, k2 in pairs:
            orel = model.minimal_relation_of(k1, k2)
            if orel is None:
                report.skipped.append(f"{tag}: relation {k1} ~ {k2} beyond oracle cap")
                continue
            prel = cg.relation(k1, k2)
            if orel != (prel.n, prel.m):
                report.mismatches.append(
                    f"{tag}: minimal relation of {k1}, {k2}: oracle {orel}, "
                    f"pipeline {(prel.n, prel.m)}"
                )
    return report


def _torsion_rank(dec, lv: Fraction) -> int:
    from .assembly import SummandKind

    rank = 0
    for s in dec.summands:
        if s.kind is SummandKind.TOWER:
            if lv >= s.bottom and (lv - s.bottom) % 2 == 0:
                rank += 1
        elif s.kind is SummandKind.CYCLIC and s.bottom is not None:
            if s.bottom <= lv <= s.bottom + 2 * (s.length - 1) and (lv - s.bottom) % 2 == 0:
                rank += 1
    return rank
