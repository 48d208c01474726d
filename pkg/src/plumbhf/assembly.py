"""From class graphs to graded module decompositions and correction terms.

The homology of a sector is read off the merge structure of its class
graph by the elder rule: in a torsion sector the oldest branch carries an
infinite tower and every other leaf contributes a finite cyclic piece up
to its merge point; in a non-torsion sector every leaf contributes the
cyclic piece cut off by its merge or by the U-cycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from .charvec import (
    CharVector,
    SpinCClass,
    UState,
    lattice_context,
    level,
    some_torsion_char,
    spinc_of,
    torsion_sector_count,
)
from .classgraph import (
    ClassGraph,
    nontorsion_merge_summary,
    sector_graph,
    torsion_merge_summary,
)
from .config import DEFAULT_EXPANSION
from .errors import AmbiguousSectorMatching, UnstableInput, UnsupportedGraphError
from .graphs import FormKind, PlumbingGraph
from .walk import (
    enumerate_basic_nontorsion,
    enumerate_basic_torsion,
    ensure_supported,
)

_ENUMERATION_BOX_CAP = 200_000


class SummandKind(Enum):
    TOWER = "tower"
    CYCLIC = "cyclic"
    EVEN_TOWER = "even-tower"


def parity_of(bottom: Optional[Fraction]) -> Optional[str]:
    """Mod-2 parity class of a grading; half-integers 1/2 and 3/2 split
    into odd and even respectively, matching the integer convention."""
    if bottom is None:
        return None
    r = bottom % 2
    if r == Fraction(1, 2) or r == 1:
        return "odd"
    if r == Fraction(3, 2) or r == 0:
        return "even"
    raise ValueError(f"grading {bottom} is neither integral nor half-integral")


@dataclass(frozen=True, order=True)
class Summand:
    # ordering and equality go through sort_index, which encodes all fields
    sort_index: tuple = field(repr=False)
    kind: SummandKind = field(compare=False)
    bottom: Optional[Fraction] = field(default=None, compare=False)
    length: Optional[int] = field(default=None, compare=False)

    @staticmethod
    def tower(bottom: Fraction) -> "Summand":
        return Summand(
            sort_index=(0, False, bottom, 0), kind=SummandKind.TOWER, bottom=bottom
        )

    @staticmethod
    def even_tower(bottom: Optional[Fraction]) -> "Summand":
        return Summand(
            sort_index=(1, bottom is None, bottom or Fraction(0), 0),
            kind=SummandKind.EVEN_TOWER,
            bottom=bottom,
        )

    @staticmethod
    def cyclic(length: int, bottom: Optional[Fraction] = None) -> "Summand":
        return Summand(
            sort_index=(2, bottom is None, bottom or Fraction(0), length),
            kind=SummandKind.CYCLIC,
            bottom=bottom,
            length=length,
        )

    @property
    def parity(self) -> Optional[str]:
        if self.kind is SummandKind.EVEN_TOWER:
            return "even"
        if self.bottom is None:
            return "odd"  # non-torsion pieces live in odd degree
        return parity_of(self.bottom)


@dataclass(frozen=True)
class ModuleDecomposition:
    sector: SpinCClass
    summands: tuple[Summand, ...]
    notes: tuple[str, ...] = ()

    def without_even(self) -> tuple[Summand, ...]:
        return tuple(s for s in self.summands if s.kind is not SummandKind.EVEN_TOWER)


def assemble_torsion(g: PlumbingGraph, cg: ClassGraph) -> ModuleDecomposition:
    """Tower plus finite pieces of a torsion sector (even part not included)."""
    if not cg.region_stable or not cg.single_stem:
        raise UnstableInput("class graph failed its stability or stem checks")
    if not cg.torsion:
        raise ValueError("expected a torsion-sector class graph")
    principal, bottom, pairs = torsion_merge_summary(cg)
    summands = [Summand.tower(bottom)]
    for _leaf, birth, death in pairs:
        length = (death - birth) / 2
        if length.denominator != 1 or length <= 0:
            raise UnstableInput(f"merge at level {death} does not sit above {birth}")
        summands.append(Summand.cyclic(int(length), bottom=birth))
    return ModuleDecomposition(sector=cg.sector, summands=tuple(sorted(summands)))


def assemble_nontorsion(g: PlumbingGraph, cg: ClassGraph) -> ModuleDecomposition:
    """Cyclic pieces of a non-torsion sector, one per leaf."""
    if not cg.region_stable:
        raise UnstableInput("class graph failed its stability check")
    if cg.torsion:
        raise ValueError("expected a non-torsion-sector class graph")
    lengths = nontorsion_merge_summary(cg)
    summands = tuple(sorted(Summand.cyclic(length) for _leaf, length in lengths))
    return ModuleDecomposition(sector=cg.sector, summands=summands)


# -- correction terms -------------------------------------------------------

def d_half(
    g: PlumbingGraph, sector: SpinCClass, method: str = "auto"
) -> Fraction:
    """Minimal grading over a torsion sector.

    ``method`` selects between enumerating the sector's basic vectors
    (complete at desk scale) and the windowed lattice search that also
    handles graphs whose coordinate box is astronomically large; ``auto``
    switches on the box size.  Both routes are exact.
    """
    ensure_supported(g)
    if not sector.torsion:
        raise ValueError("correction terms require a torsion sector")
    if method == "auto":
        box = 1
        for w in g.weights:
            box *= abs(w) + 1
        method = "enumerate" if box <= _ENUMERATION_BOX_CAP else "search"
    if method == "enumerate":
        basics = [K for K in enumerate_basic_torsion(g) if spinc_of(g, K) == sector]
        if not basics:
            raise UnsupportedGraphError(
                f"torsion sector {sector.label} has no basic vectors"
            )
        return min(level(g, UState(0, K)) for K in basics)
    if method == "search":
        from .dsearch import min_level_search

        lvl, _ = min_level_search(g, sector)
        return lvl
    raise ValueError(f"unknown method {method!r}")


def d_minus_half_via_dual(
    g: PlumbingGraph,
    h: PlumbingGraph,
    sector: Optional[SpinCClass] = None,
    h_sector: Optional[SpinCClass] = None,
) -> Fraction:
    """Even correction term of a torsion sector, through the reversed graph.

    ``h`` must describe the orientation reverse of the manifold of ``g``
    (the caller's responsibility); duality then turns the minimal grading
    on ``h`` into the even tower bottom on ``g``.  Unless both graphs have
    a single torsion sector, an explicit ``h_sector`` must be supplied.
    """
    ensure_supported(g)
    ensure_supported(h)
    if h_sector is None:
        if torsion_sector_count(g) != 1 or torsion_sector_count(h) != 1:
            raise AmbiguousSectorMatching(
                "several torsion sectors; supply the matching sector on the dual"
            )
        h_sector = spinc_of(h, some_torsion_char(h))
    return -d_half(h, h_sector)


# -- torus-knot family helpers ----------------------------------------------

@dataclass(frozen=True)
class AlexanderData:
    """Symmetrized Alexander coefficients a_0..a_d and torsion sums t_i."""

    coeffs: tuple[int, ...]
    t: dict[int, int] = field(compare=False)

    def t_at(self, i: int) -> int:
        return self.t.get(abs(i), 0)


def alexander_t(coeffs) -> AlexanderData:
    """Torsion sums t_i = sum_j j*a_(|i|+j) of an Alexander polynomial."""
    coeffs = tuple(int(c) for c in coeffs)
    if not coeffs:
        raise ValueError("need at least the constant Alexander coefficient")
    d = len(coeffs) - 1
    t = {}
    for i in range(d + 1):
        t[i] = sum(j * coeffs[i + j] for j in range(1, d - i + 1))
    return AlexanderData(coeffs=coeffs, t=t)


def torus_knot_alexander(n: int) -> tuple[int, ...]:
    """Symmetrized Alexander coefficients of the (2, 2n+1) torus knot.

    The polynomial is the alternating sum of the powers T^n down to T^-n,
    so a_j = (-1)^(n-j).
    """
    if n < 1:
        raise ValueError("torus knot parameter must be a positive integer")
    return tuple((-1) ** (n - j) for j in range(n + 1))


def even_bottom_from_alexander(coeffs) -> Fraction:
    """Even tower bottom of a torus-knot zero-surgery: 2*t_0 - 1/2."""
    data = alexander_t(coeffs)
    return 2 * data.t_at(0) - Fraction(1, 2)


# -- the full pipeline -------------------------------------------------------

@dataclass(frozen=True)
class SectorResult:
    sector: SpinCClass
    decomposition: ModuleDecomposition
    d_half: Optional[Fraction] = None
    even_bottom: Optional[Fraction] = None
    even_provenance: str = "unknown"
    notes: tuple[str, ...] = ()

    @property
    def summands(self) -> tuple[Summand, ...]:
        return self.decomposition.summands


@dataclass(frozen=True)
class FullReport:
    graph_name: Optional[str]
    semidefinite: bool
    sectors: tuple[SectorResult, ...]
    depth: Optional[int]
    expansion: int
    notes: tuple[str, ...] = ()


def _sector_result(args) -> SectorResult:
    (g, sector, leaves, depth, expansion, even_value, even_prov, alexander) = args
    cg = sector_graph(g, sector, leaves, depth=depth, expansion=expansion)
    notes: list[str] = []
    if sector.torsion:
        dec = assemble_torsion(g, cg)
        bottom = min(level(g, UState(0, K)) for K in leaves)
        summands = dec.summands
        if even_value is not None:
            summands = tuple(sorted(summands + (Summand.even_tower(even_value),)))
        elif lattice_context(g).form.kind is FormKind.NEGATIVE_SEMIDEFINITE_CORANK1:
            summands = tuple(sorted(summands + (Summand.even_tower(None),)))
            notes.append("even tower bottom unknown: no dual graph or user value")
        dec = ModuleDecomposition(sector=sector, summands=summands, notes=tuple(notes))
        return SectorResult(
            sector=sector,
            decomposition=dec,
            d_half=bottom,
            even_bottom=even_value,
            even_provenance=even_prov,
            notes=tuple(notes),
        )
    dec = assemble_nontorsion(g, cg)
    if alexander is not None and sector.label is not None:
        expect = alexander.t_at(sector.label)
        got = sorted(s.length for s in dec.summands)
        want = [expect] if expect > 0 else []
        if got != want:
            notes.append(
                f"torus-knot model predicts cyclic lengths {want} in sector "
                f"{sector.label}, computed {got}"
            )
    return SectorResult(
        sector=sector,
        decomposition=dec,
        notes=tuple(notes),
    )


def full_report(
    g: PlumbingGraph,
    dual: Optional[PlumbingGraph] = None,
    even_bottoms: Optional[dict[int, Fraction]] = None,
    alexander=None,
    depth: Optional[int] = None,
    expansion: int = DEFAULT_EXPANSION,
    jobs: int = 1,
) -> FullReport:
    """Per-sector homology of the supported graph.

    The even tower bottom of a torsion sector is never guessed: it comes
    from an explicit user value, from a dual graph, or (for torus-knot
    zero-surgeries) from Alexander data, in that order of precedence;
    otherwise it is reported unknown.
    """
    ensure_supported(g)
    ctx = lattice_context(g)
    semidef = ctx.form.kind is FormKind.NEGATIVE_SEMIDEFINITE_CORANK1
    alex = alexander_t(alexander) if alexander is not None else None

    basics_t = enumerate_basic_torsion(g)
    basics_n = enumerate_basic_nontorsion(g)
    by_sector: dict[SpinCClass, list[CharVector]] = {}
    for K in basics_t + basics_n:
        by_sector.setdefault(spinc_of(g, K), []).append(K)
    sectors = sorted(by_sector, key=lambda s: s.sort_key())

    notes: list[str] = ["sectors not listed carry no homology"]

    tasks = []
    for sector in sectors:
        even_value = None
        even_prov = "unknown"
        if sector.torsion and semidef:
            if even_bottoms and sector.label in even_bottoms:
                even_value = Fraction(even_bottoms[sector.label])
                even_prov = "user"
            elif dual is not None:
                even_value = d_minus_half_via_dual(g, dual)
                even_prov = "dual"
            elif alex is not None:
                even_value = 2 * alex.t_at(0) - Fraction(1, 2)
                even_prov = "alexander"
        tasks.append(
            (
                g,
                sector,
                tuple(sorted(by_sector[sector])),
                depth,
                expansion,
                even_value,
                even_prov,
                alex,
            )
        )

    if jobs > 1 and len(tasks) > 1:
        import multiprocessing

        with multiprocessing.Pool(jobs) as pool:
            results = pool.map(_sector_result, tasks)
    else:
        results = [_sector_result(t) for t in tasks]

    return FullReport(
        graph_name=g.name,
        semidefinite=semidef,
        sectors=tuple(results),
        depth=depth,
        expansion=expansion,
        notes=tuple(notes),
    )
