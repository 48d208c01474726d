"""The box-and-walk search for basic vectors.

Starting from a characteristic vector inside the coordinate box
``m(v) <= <K,v> <= -m(v)``, repeatedly pick a vertex whose pairing sits at
the top of the box and push it down by adding twice the dual class.  The
walk either stops inside the shrunken box (top margin 2), escapes above
the box at some vertex, or revisits a vector and is declared periodic.
Which of these happens, together with the bottom-of-box test, decides
whether the starting vector generates a leaf of the state model.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterator, Optional, Sequence

from .charvec import CharVector, is_characteristic, lattice_context, spinc_of
from .config import max_states, walk_cap
from .errors import StateCountExceeded, UnsupportedGraphError, VisitCapExceeded
from .graphs import FormKind, PlumbingGraph

_TRACE_CAP = 256


class WalkKind(Enum):
    TERMINATED_IN_BOX = "terminated-in-box"
    OVERFLOW = "overflow"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class WalkOutcome:
    kind: WalkKind
    final: Optional[CharVector] = None
    overflow_vertex: Optional[str] = None
    step: Optional[int] = None
    period_start: Optional[int] = None
    period_length: Optional[int] = None
    trace: tuple[tuple[str, CharVector], ...] = ()
    trace_truncated: bool = False


def ensure_supported(g: PlumbingGraph, require_semidefinite: bool = False) -> None:
    """Reject graphs outside the supported class or with two bad vertices."""
    ctx = lattice_context(g)
    if ctx.form.kind is FormKind.UNSUPPORTED:
        raise UnsupportedGraphError(
            f"intersection form has inertia {ctx.form.inertia}; "
            "need negative definite or negative semidefinite of corank 1"
        )
    if require_semidefinite and ctx.form.kind is not FormKind.NEGATIVE_SEMIDEFINITE_CORANK1:
        raise UnsupportedGraphError("operation requires a corank-1 semidefinite graph")
    if len(ctx.form.bad_vertices) > 1:
        raise UnsupportedGraphError(
            f"more than one bad vertex: {list(ctx.form.bad_vertices)}"
        )


def run_walk(
    g: PlumbingGraph,
    K,
    ordering: Optional[Sequence[str]] = None,
    cap: Optional[int] = None,
) -> WalkOutcome:
    """Run the deterministic walk from K.

    At every step the first vertex in ``ordering`` (canonical order by
    default) whose pairing equals ``-m(v)`` is pushed down.  Termination
    against the shrunken box, escape above the box, or a repeated vector
    classify the outcome.
    """
    K = tuple(K)
    if not is_characteristic(g, K):
        raise ValueError("walk must start at a characteristic vector")
    w = g.weights
    if any(k < wv for k, wv in zip(K, w)):
        raise ValueError("walk must not start below the bottom of the box")
    order = list(range(g.n)) if ordering is None else [g.index(v) for v in ordering]
    if sorted(order) != list(range(g.n)):
        raise ValueError("ordering must list every vertex exactly once")
    cap = walk_cap() if cap is None else cap
    rows = g.matrix
    ids = g.ids
    cur = K
    visited = {cur: 0}
    trace: list[tuple[str, CharVector]] = []
    step = 0
    while True:
        v = next((u for u in order if cur[u] == -w[u]), None)
        if v is None:
            if all(wv <= k <= -wv - 2 for k, wv in zip(cur, w)):
                return WalkOutcome(
                    kind=WalkKind.TERMINATED_IN_BOX,
                    final=cur,
                    step=step,
                    trace=tuple(trace),
                    trace_truncated=step > len(trace),
                )
            over = next(u for u in range(g.n) if cur[u] > -w[u])
            return WalkOutcome(
                kind=WalkKind.OVERFLOW,
                final=cur,
                overflow_vertex=ids[over],
                step=step,
                trace=tuple(trace),
                trace_truncated=step > len(trace),
            )
        row = rows[v]
        cur = tuple(k + 2 * r for k, r in zip(cur, row))
        step += 1
        if len(trace) < _TRACE_CAP:
            trace.append((ids[v], cur))
        prev = visited.get(cur)
        if prev is not None:
            return WalkOutcome(
                kind=WalkKind.PERIODIC,
                period_start=prev,
                period_length=step - prev,
                step=step,
                trace=tuple(trace),
                trace_truncated=step > len(trace),
            )
        visited[cur] = step
        if len(visited) > cap:
            raise VisitCapExceeded(f"walk from {K} visited more than {cap} vectors")


def in_full_box(g: PlumbingGraph, K) -> bool:
    return all(w <= k <= -w for k, w in zip(K, g.weights))


def iter_full_box(g: PlumbingGraph, pad: int = 0, cap: Optional[int] = None) -> Iterator[CharVector]:
    """Characteristic vectors with |<K,v>| <= |m(v)| + 2*pad, odometer order."""
    return _iter_box(g, [(w - 2 * pad, -w + 2 * pad) for w in g.weights], cap)


def iter_nontorsion_box(g: PlumbingGraph, cap: Optional[int] = None) -> Iterator[CharVector]:
    """Characteristic vectors with m(v)+2 <= <K,v> <= -m(v)."""
    return _iter_box(g, [(w + 2, -w) for w in g.weights], cap)


def _iter_box(g, bounds, cap):
    cap = max_states() if cap is None else cap
    total = 1
    ranges = []
    for (lo, hi), w in zip(bounds, g.weights):
        # snap the bounds onto the characteristic parity
        lo += (w - lo) % 2
        r = range(lo, hi + 1, 2)
        ranges.append(r)
        total *= len(r)
        if total > cap:
            raise StateCountExceeded(
                f"coordinate box holds more than {cap} vectors; "
                "raise PLUMBHF_MAX_STATES to override"
            )
    return (tuple(k) for k in product(*ranges))


def is_good_torsion(g: PlumbingGraph, K) -> bool:
    """Leaf test for a torsion box vector.

    Vectors clear of the bottom of the box must walk to a vector in the
    shrunken box; vectors touching the bottom must walk periodically.
    """
    K = tuple(K)
    ctx = lattice_context(g)
    if not is_characteristic(g, K):
        raise ValueError("not a characteristic vector")
    if not ctx.is_torsion(K):
        raise ValueError("not a torsion vector")
    if not in_full_box(g, K):
        raise ValueError("vector outside the coordinate box")
    outcome = run_walk(g, K)
    if any(k == w for k, w in zip(K, g.weights)):
        return outcome.kind is WalkKind.PERIODIC
    return outcome.kind is WalkKind.TERMINATED_IN_BOX


def enumerate_basic_torsion(g: PlumbingGraph) -> list[CharVector]:
    """All torsion basic vectors, in canonical coordinate order."""
    ensure_supported(g)
    ctx = lattice_context(g)
    out = [K for K in iter_full_box(g) if ctx.is_torsion(K) and is_good_torsion(g, K)]
    out.sort()
    return out


def enumerate_basic_nontorsion(g: PlumbingGraph) -> list[CharVector]:
    """All non-torsion basic vectors.

    Box vectors whose walk terminates in the shrunken box are candidates;
    a candidate is dropped when its zero-power state already sits on the
    U-cycle of its sector (it then carries a positive-power representative
    and is not a leaf).
    """
    ensure_supported(g)
    ctx = lattice_context(g)
    if ctx.form.kind is FormKind.NEGATIVE_DEFINITE:
        return []
    candidates = [
        K
        for K in iter_nontorsion_box(g)
        if not ctx.is_torsion(K)
        and run_walk(g, K).kind is WalkKind.TERMINATED_IN_BOX
    ]
    by_sector: dict = {}
    for K in candidates:
        by_sector.setdefault(spinc_of(g, K), []).append(K)
    from .classgraph import sector_graph  # deferred: classgraph builds on this module's output

    out = []
    for sector in sorted(by_sector, key=lambda s: s.sort_key()):
        leaves = sorted(by_sector[sector])
        cg = sector_graph(g, sector, leaves)
        for K in leaves:
            if cg.leaf_height(K) > 0:
                out.append(K)
    out.sort()
    return out


def enumerate_basic(g: PlumbingGraph) -> list[CharVector]:
    """Torsion and non-torsion basic vectors together."""
    return sorted(enumerate_basic_torsion(g) + enumerate_basic_nontorsion(g))
