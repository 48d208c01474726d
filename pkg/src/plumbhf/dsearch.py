"""Pruned minimization of the grading over a torsion sector.

The sector is the integer family K = K0 + 2 w M, so maximizing the square
means maximizing the concave integer quadratic

    g(w) = w M w^T + K0 . w,        K^2 = K0^2 + 4 g(w).

Completing the square around the continuous optimum w* (a rational solve
of 2 M w = -K0, which exists exactly because K0 is torsion) turns this
into maximizing x M x^T over the shifted lattice x = w - w*, whose optimum
sits near zero.  On a forest that objective is tree-structured and solved
by dynamic programming with a small integer window per vertex, centered
on w*.  The kernel direction is flat (g(w + z) = g(w)), which pins the
root of the semidefinite component to one period of its kernel entry.

Windows are a truncation, so the search runs at two widths and must
agree.  The *reported* value is unconditionally exact: the maximizing
vector is reconstructed and its square recomputed through the rational
solver; window adequacy is the only heuristic, and the test suite
cross-validates it against the enumeration route on small graphs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .charvec import CharVector, SpinCClass, lattice_context, spinc_of, square
from .errors import RegionUnstable, UnsupportedGraphError
from .graphs import FormKind, PlumbingGraph
from .linalg import solve_linear


def min_level_search(
    g: PlumbingGraph, sector: SpinCClass, window: int = 8
) -> tuple[Fraction, CharVector]:
    """Minimum grading over a torsion sector, with a minimizing vector.

    Runs the windowed tree optimization at ``window`` and ``window + 4``
    and raises :class:`RegionUnstable` if they disagree.
    """
    ctx = lattice_context(g)
    if not sector.torsion:
        raise ValueError("grading minimization needs a torsion sector")
    k2a, ka = _max_square(g, sector, window)
    k2b, _ = _max_square(g, sector, window + 4)
    if k2a != k2b:
        raise RegionUnstable(
            f"window {window} and {window + 4} disagree on the maximal square"
        )
    if spinc_of(g, ka) != sector:
        raise AssertionError("search left the sector; this is a bug")
    if ctx.form.kind is FormKind.NEGATIVE_SEMIDEFINITE_CORANK1:
        lvl = -(k2a + g.n - 3) / 4
    elif ctx.form.kind is FormKind.NEGATIVE_DEFINITE:
        lvl = -(k2a + g.n) / 4
    else:
        raise UnsupportedGraphError("unsupported form class")
    return lvl, ka


def _components(g: PlumbingGraph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for v in g.neighbors[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def _max_square(g: PlumbingGraph, sector: SpinCClass, B: int):
    K0 = sector.representative
    n = g.n
    w_opt = [0] * n
    total = 0
    for comp in _components(g):
        val, assign = _component_max(g, K0, comp, B)
        total += val
        for v, x in assign.items():
            w_opt[v] = x
    k2 = square(g, K0) + 4 * total
    rows = g.matrix
    K_star = tuple(
        K0[i] + 2 * sum(w_opt[j] * rows[j][i] for j in range(n)) for i in range(n)
    )
    if square(g, K_star) != k2:
        raise AssertionError("reconstructed maximizer mismatch; this is a bug")
    return k2, K_star


def _component_max(g: PlumbingGraph, K0: CharVector, comp: list[int], B: int):
    """Maximize the component's part of g(w) over integer assignments.

    Every vertex gets a window of integers centered on the continuous
    optimum, wide enough to cover one flat period at the root plus the
    interpolation toward the center.
    """
    ctx = lattice_context(g)
    weights = g.weights
    z = ctx.kernel

    # continuous optimum of the component: 2 M_c w = -K0_c
    mat = [[2 * g.matrix[u][v] for v in comp] for u in comp]
    rhs = [-K0[u] for u in comp]
    sol = solve_linear(mat, rhs)
    if sol is None:
        raise UnsupportedGraphError(
            "no continuous optimum: the representative is not torsion"
        )
    center = {v: round(sol[i]) for i, v in enumerate(comp)}

    support = [v for v in comp if z is not None and z[v] != 0]
    if support:
        root = support[0]
        span = abs(z[root])
        offsets = range(-(span // 2) - B, span - span // 2 + B)
        root_offsets = range(-(span // 2), span - span // 2)
    else:
        root = comp[0]
        offsets = range(-B, B + 1)
        root_offsets = offsets

    def window(v: int) -> range:
        c = center[v]
        return range(c + offsets.start, c + offsets.stop)

    children: dict[int, list[int]] = {v: [] for v in comp}
    order = [root]
    seen = {root}
    for u in order:
        for v in g.neighbors[u]:
            if v not in seen:
                seen.add(v)
                children[u].append(v)
                order.append(v)
    parent = {}
    for u in order:
        for c in children[u]:
            parent[c] = u

    # f[v][p] = best subtree value given the parent takes value p, plus the
    # maximizing value of v for reconstruction
    f: dict[int, dict[int, tuple[int, int]]] = {}
    for v in reversed(order[1:]):
        mv = weights[v]
        kv = K0[v]
        child_tables = [f[c] for c in children[v]]
        base = {
            x: mv * x * x + kv * x + sum(t[x][0] for t in child_tables)
            for x in window(v)
        }
        table: dict[int, tuple[int, int]] = {}
        for p in window(parent[v]):
            best = None
            best_x = 0
            for x, bx in base.items():
                val = bx + 2 * p * x
                if best is None or val > best:
                    best, best_x = val, x
            table[p] = (best, best_x)
        f[v] = table

    mr = weights[root]
    kr = K0[root]
    best = None
    best_root = 0
    for off in root_offsets:
        x = center[root] + off
        val = mr * x * x + kr * x + sum(f[c][x][0] for c in children[root])
        if best is None or val > best:
            best, best_root = val, x
    assign = {root: best_root}
    stack = [root]
    while stack:
        u = stack.pop()
        for c in children[u]:
            assign[c] = f[c][assign[u]][1]
            stack.append(c)
    return best, assign
