"""Random supported plumbing trees, for fuzzing and the oracle-check CLI."""

from __future__ import annotations

import random
from typing import Optional

from .errors import UnsupportedGraphError
from .graphs import PlumbingGraph
from .walk import ensure_supported


def random_supported_tree(
    rng: random.Random,
    max_vertices: int = 5,
    weight_range: tuple[int, int] = (-6, 0),
    attempts: int = 2000,
) -> PlumbingGraph:
    """A random tree in the supported class with at most one bad vertex."""
    for _ in range(attempts):
        n = rng.randint(1, max_vertices)
        verts = [(f"v{i:02d}", rng.randint(*weight_range)) for i in range(n)]
        ids = [v for v, _ in verts]
        edges = [(ids[rng.randrange(i)], ids[i]) for i in range(1, n)]
        g = PlumbingGraph.build(verts, edges, name=f"random-{rng.random():.6f}")
        try:
            ensure_supported(g)
        except UnsupportedGraphError:
            continue
        return g
    raise RuntimeError("could not sample a supported tree; widen the parameters")


def random_characteristic_in_box(
    rng: random.Random, g: PlumbingGraph, pad: int = 0
) -> Optional[tuple[int, ...]]:
    """A random characteristic vector of the padded coordinate box."""
    out = []
    for w in g.weights:
        lo, hi = w - 2 * pad, -w + 2 * pad
        count = (hi - lo) // 2 + 1
        out.append(lo + 2 * rng.randrange(count))
    return tuple(out)
