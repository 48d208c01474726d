"""Weighted plumbing forests and their intersection forms.

A plumbing graph is a forest of weighted vertices.  The vertex order is
canonicalized (lexicographic by id) at construction time, so every
downstream computation is independent of input order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

from .errors import GraphFormatError, UnknownVertexError
from .linalg import inertia


class FormKind(Enum):
    NEGATIVE_DEFINITE = "negative-definite"
    NEGATIVE_SEMIDEFINITE_CORANK1 = "negative-semidefinite-corank-1"
    UNSUPPORTED = "unsupported"


@dataclass(frozen=True)
class FormClass:
    """Classification of the intersection form."""

    kind: FormKind
    inertia: tuple[int, int, int]  # (n_plus, n_zero, n_minus)
    bad_vertices: tuple[str, ...]


@dataclass(frozen=True)
class PlumbingGraph:
    """A weighted forest: vertices carry integer weights, edges are simple.

    ``vertices`` is sorted by id and ``edges`` holds index pairs into it;
    two graphs compare equal iff they have the same canonical form.
    """

    vertices: tuple[tuple[str, int], ...]
    edges: tuple[tuple[int, int], ...]
    name: str | None = field(default=None, compare=False)

    @staticmethod
    def build(
        vertices: list[tuple[str, int]],
        edges: list[tuple[str, str]],
        name: str | None = None,
    ) -> "PlumbingGraph":
        """Validate and canonicalize raw vertex/edge data."""
        ids = [v for v, _ in vertices]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise GraphFormatError(f"duplicate vertex ids: {dup}")
        for vid, w in vertices:
            if not isinstance(vid, str) or not vid:
                raise GraphFormatError(f"vertex id must be a non-empty string, got {vid!r}")
            if not isinstance(w, int) or isinstance(w, bool):
                raise GraphFormatError(f"weight of {vid!r} must be an integer, got {w!r}")
        order = sorted(range(len(vertices)), key=lambda k: vertices[k][0])
        vs = tuple(vertices[k] for k in order)
        index = {vid: i for i, (vid, _) in enumerate(vs)}
        es = []
        for a, b in edges:
            if a not in index or b not in index:
                raise GraphFormatError(f"edge ({a!r}, {b!r}) has a dangling endpoint")
            if a == b:
                raise GraphFormatError(f"self-loop at {a!r}")
            i, j = sorted((index[a], index[b]))
            es.append((i, j))
        es.sort()
        for e1, e2 in zip(es, es[1:]):
            if e1 == e2:
                a, b = e1
                raise GraphFormatError(
                    f"repeated edge between {vs[a][0]!r} and {vs[b][0]!r}"
                )
        g = PlumbingGraph(vertices=vs, edges=tuple(es), name=name)
        g._check_forest()
        return g

    def _check_forest(self) -> None:
        parent = list(range(self.n))
        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for i, j in self.edges:
            ri, rj = find(i), find(j)
            if ri == rj:
                raise GraphFormatError("cycle detected; plumbing graphs must be forests")
            parent[ri] = rj

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.vertices)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(w for _, w in self.vertices)

    def index(self, vid: str) -> int:
        try:
            return self._index[vid]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex {vid!r}") from None

    @cached_property
    def _index(self) -> dict[str, int]:
        return {vid: i for i, (vid, _) in enumerate(self.vertices)}

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    def degree(self, i: int) -> int:
        return len(self.neighbors[i])

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        """Intersection form: weights on the diagonal, 1 per edge."""
        m = [[0] * self.n for _ in range(self.n)]
        for i, (_, w) in enumerate(self.vertices):
            m[i][i] = w
        for i, j in self.edges:
            m[i][j] = 1
            m[j][i] = 1
        return tuple(tuple(row) for row in m)

    def row(self, i: int) -> tuple[int, ...]:
        return self.matrix[i]

    def pairing_map(self, K) -> dict[str, int]:
        """Present a pairing vector as an id-keyed mapping."""
        return {vid: k for (vid, _), k in zip(self.vertices, K)}

    # -- transforms ------------------------------------------------------

    def blow_up(self, vid: str) -> "PlumbingGraph":
        """Attach a fresh weight -1 vertex to ``vid``."""
        self.index(vid)
        base = "e"
        k = 0
        while f"{base}{k}" in self._index:
            k += 1
        new_id = f"{base}{k}"
        verts = list(self.vertices) + [(new_id, -1)]
        edges = [(self.ids[i], self.ids[j]) for i, j in self.edges] + [(vid, new_id)]
        return PlumbingGraph.build(verts, edges, name=self.name)

    def increment_weight(self, vid: str) -> "PlumbingGraph":
        """Raise the weight at ``vid`` by one."""
        i = self.index(vid)
        verts = [
            (v, w + 1 if k == i else w) for k, (v, w) in enumerate(self.vertices)
        ]
        edges = [(self.ids[a], self.ids[b]) for a, b in self.edges]
        return PlumbingGraph.build(verts, edges, name=self.name)


@dataclass(frozen=True)
class IntersectionForm:
    matrix: tuple[tuple[int, ...], ...]


def intersection_form(g: PlumbingGraph) -> IntersectionForm:
    return IntersectionForm(matrix=g.matrix)


def classify_form(g: PlumbingGraph) -> FormClass:
    """Inertia (by exact congruence) plus the bad-vertex list."""
    n_plus, n_zero, n_minus = inertia(g.matrix)
    if (n_plus, n_zero, n_minus) == (0, 0, g.n):
        kind = FormKind.NEGATIVE_DEFINITE
    elif (n_plus, n_zero, n_minus) == (0, 1, g.n - 1):
        kind = FormKind.NEGATIVE_SEMIDEFINITE_CORANK1
    else:
        kind = FormKind.UNSUPPORTED
    bad = tuple(
        vid for i, (vid, w) in enumerate(g.vertices) if w > -g.degree(i)
    )
    return FormClass(kind=kind, inertia=(n_plus, n_zero, n_minus), bad_vertices=bad)


# -- file format ---------------------------------------------------------

def parse_plumbing(text: str) -> PlumbingGraph:
    """Parse the JSON graph format.

    The format is an object with optional ``name``, a ``vertices`` array
    of ``{"id": str, "weight": int}``, and an ``edges`` array of
    two-element id arrays.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise GraphFormatError("top-level value must be an object")
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise GraphFormatError("name must be a string")
    raw_vs = obj.get("vertices")
    raw_es = obj.get("edges", [])
    if not isinstance(raw_vs, list):
        raise GraphFormatError("missing or invalid 'vertices' array")
    if not isinstance(raw_es, list):
        raise GraphFormatError("invalid 'edges' array")
    verts = []
    for item in raw_vs:
        if not isinstance(item, dict) or "id" not in item or "weight" not in item:
            raise GraphFormatError(f"vertex entries need 'id' and 'weight': {item!r}")
        verts.append((item["id"], item["weight"]))
    edges = []
    for item in raw_es:
        if not isinstance(item, list) or len(item) != 2:
            raise GraphFormatError(f"edges must be two-element arrays: {item!r}")
        edges.append((item[0], item[1]))
    return PlumbingGraph.build(verts, edges, name=name)


def serialize_plumbing(g: PlumbingGraph) -> str:
    """Canonical JSON text; ``parse_plumbing`` round-trips it exactly."""
    obj: dict = {}
    if g.name is not None:
        obj["name"] = g.name
    obj["vertices"] = [{"id": vid, "weight": w} for vid, w in g.vertices]
    obj["edges"] = [[g.ids[i], g.ids[j]] for i, j in g.edges]
    return json.dumps(obj, indent=2) + "\n"
