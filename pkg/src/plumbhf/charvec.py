"""Characteristic vectors, their moves, squares, gradings and sectors.

A characteristic vector K is stored as its pairing vector: the tuple of
values ``<K, v>`` over the canonical vertex order.  Adding twice the
cohomology class dual to a vertex then means adding twice that vertex's
row of the intersection matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional

from .errors import NonTorsionError, UnsupportedGraphError
from .graphs import FormClass, FormKind, PlumbingGraph, classify_form
from .linalg import hermite_basis, hermite_reduce, kernel_basis, solve_linear, determinant

CharVector = tuple[int, ...]


class UState(NamedTuple):
    """A pair U^m (x) K in the dual state model; m is the U-exponent."""

    m: int
    K: CharVector


@dataclass(frozen=True)
class SpinCClass:
    """A sector: coset of characteristic vectors modulo twice the row lattice.

    ``representative`` is the canonical coset form.  For corank-one graphs
    ``label`` is the integer position along the free cohomology direction
    (0 for the torsion sector, negated by conjugation); for definite
    graphs it is None and the representative alone identifies the sector.
    """

    representative: CharVector
    torsion: bool
    label: Optional[int]

    def sort_key(self):
        lab = self.label if self.label is not None else 0
        return (not self.torsion, abs(lab), 0 if lab >= 0 else 1, self.representative)


class _LatticeContext:
    """Per-graph precomputation shared by all operations."""

    def __init__(self, g: PlumbingGraph):
        self.g = g
        self.n = g.n
        self.weights = g.weights
        self.rows = g.matrix
        self.form: FormClass = classify_form(g)
        self.coset_basis = hermite_basis([[2 * x for x in row] for row in self.rows])
        self.kernel: Optional[tuple[int, ...]] = None
        if self.form.kind is FormKind.NEGATIVE_SEMIDEFINITE_CORANK1:
            self.kernel = _primitive_integer_kernel(self.rows)
        self._squares: dict[CharVector, Fraction] = {}

    def square(self, K: CharVector) -> Fraction:
        try:
            return self._squares[K]
        except KeyError:
            pass
        a = solve_linear(self.rows, list(K))
        if a is None:
            raise NonTorsionError(f"vector {K} is outside the column span of the form")
        value = sum((Fraction(k) * ai for k, ai in zip(K, a)), Fraction(0))
        self._squares[K] = value
        return value

    def is_torsion(self, K: CharVector) -> bool:
        if self.kernel is None:
            return True
        return _dot(K, self.kernel) == 0

    def label_of(self, K: CharVector) -> Optional[int]:
        if self.kernel is None:
            return None
        d = _dot(K, self.kernel)
        # d is even for every characteristic vector once a torsion one
        # exists, which the corank-1 class guarantees
        if d % 2 != 0:
            raise UnsupportedGraphError(
                "sector labels are undefined: no torsion characteristic vector"
            )
        return d // 2


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _primitive_integer_kernel(rows) -> tuple[int, ...]:
    """The integer kernel generator, scaled primitive, first nonzero > 0."""
    basis = kernel_basis(rows)
    if len(basis) != 1:
        raise UnsupportedGraphError(f"kernel rank {len(basis)}, expected 1")
    vec = basis[0]
    denom = 1
    for x in vec:
        denom = denom * x.denominator // _gcd(denom, x.denominator)
    ints = [int(x * denom) for x in vec]
    g = 0
    for x in ints:
        g = _gcd(g, x)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x != 0)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


@lru_cache(maxsize=256)
def lattice_context(g: PlumbingGraph) -> _LatticeContext:
    return _LatticeContext(g)


# -- elementary operations ------------------------------------------------

def is_characteristic(g: PlumbingGraph, K) -> bool:
    """Parity test: <K, v> = m(v) mod 2 at every vertex."""
    if len(K) != g.n:
        raise ValueError("vector length does not match the graph")
    return all((k - w) % 2 == 0 for k, w in zip(K, g.weights))


def move_coefficient(g: PlumbingGraph, K: CharVector, v: int) -> int:
    """U-exponent picked up when adding twice the dual class at vertex v."""
    return (K[v] + g.weights[v]) // 2


def apply_move(g: PlumbingGraph, s: UState, v: int) -> Optional[UState]:
    """Add twice the dual class at v; None if the U-power would go negative."""
    n = move_coefficient(g, s.K, v)
    m2 = s.m + n
    if m2 < 0:
        return None
    row = g.row(v)
    return UState(m2, tuple(k + 2 * r for k, r in zip(s.K, row)))


def apply_reverse_move(g: PlumbingGraph, s: UState, v: int) -> Optional[UState]:
    """Subtract twice the dual class at v (inverse of :func:`apply_move`)."""
    p = (s.K[v] - g.weights[v]) // 2
    m2 = s.m - p
    if m2 < 0:
        return None
    row = g.row(v)
    return UState(m2, tuple(k - 2 * r for k, r in zip(s.K, row)))


def conjugate(K: CharVector) -> CharVector:
    return tuple(-k for k in K)


def square(g: PlumbingGraph, K: CharVector) -> Fraction:
    """K^2 = K . a for any a solving M a = K^T (well defined for torsion K)."""
    return lattice_context(g).square(tuple(K))


def level(g: PlumbingGraph, s: UState) -> Fraction:
    """Absolute grading carried by a dual state in a torsion sector.

    Each U-power raises the grading by two; the base value comes from the
    square of the vector, with the semidefinite formula offset by the
    extra -3 that accounts for the circle direction.
    """
    ctx = lattice_context(g)
    k2 = ctx.square(s.K)
    if ctx.form.kind is FormKind.NEGATIVE_SEMIDEFINITE_CORANK1:
        base = -(k2 + ctx.n - 3) / 4
    elif ctx.form.kind is FormKind.NEGATIVE_DEFINITE:
        base = -(k2 + ctx.n) / 4
    else:
        raise UnsupportedGraphError("grading needs a supported form class")
    return base + 2 * s.m


def spinc_of(g: PlumbingGraph, K) -> SpinCClass:
    """Canonical sector of a characteristic vector."""
    ctx = lattice_context(g)
    K = tuple(K)
    rep = hermite_reduce(ctx.coset_basis, K)
    return SpinCClass(
        representative=rep,
        torsion=ctx.is_torsion(K),
        label=ctx.label_of(K),
    )


def is_torsion(g: PlumbingGraph, K) -> bool:
    return lattice_context(g).is_torsion(tuple(K))


# -- sector bookkeeping ----------------------------------------------------

def some_torsion_char(g: PlumbingGraph) -> CharVector:
    """A torsion characteristic vector, built without any enumeration.

    Start from the weights themselves (always characteristic) and correct
    the kernel pairing with an even multiple of a Bezout combination: the
    kernel generator is primitive, so every even value is reachable.
    """
    ctx = lattice_context(g)
    K = list(g.weights)
    if ctx.kernel is None:
        return tuple(K)
    z = ctx.kernel
    s = _dot(K, z)
    if s % 2 != 0:
        raise UnsupportedGraphError("no torsion characteristic vector exists")
    coeffs = _bezout_combination(z)
    t = -s // 2
    return tuple(k + 2 * t * c for k, c in zip(K, coeffs))


def _bezout_combination(z) -> list[int]:
    """Integer coefficients c with c . z = 1 (z must be primitive)."""
    coeffs = [0] * len(z)
    g = 0
    for i, x in enumerate(z):
        if x == 0:
            continue
        if g == 0:
            g, coeffs[i] = abs(x), (1 if x > 0 else -1)
            continue
        gg, a, b = _ext_gcd(g, x)
        coeffs = [c * a for c in coeffs]
        coeffs[i] = b
        g = gg
    if g != 1:
        raise ValueError("kernel generator is not primitive")
    return coeffs


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def torsion_sector_count(g: PlumbingGraph) -> int:
    """Number of torsion sectors.

    For a definite form every sector is torsion and the count is |det M|.
    For corank one it is the index of the row lattice inside its
    saturation (the integer vectors orthogonal to the kernel generator).
    """
    ctx = lattice_context(g)
    if ctx.kernel is None:
        return abs(determinant(ctx.rows))
    z = ctx.kernel
    sat = _orthogonal_complement_basis(z)
    lam = hermite_basis([list(r) for r in ctx.rows])
    if len(lam) != len(sat):
        raise UnsupportedGraphError("row lattice rank does not match corank one")
    coeff_rows = []
    for row in lam:
        sol = solve_linear([[sat[j][i] for j in range(len(sat))] for i in range(len(z))], row)
        if sol is None or any(x.denominator != 1 for x in sol):
            raise UnsupportedGraphError("row lattice does not embed in the saturation")
        coeff_rows.append([int(x) for x in sol])
    return abs(determinant(coeff_rows))


def _orthogonal_complement_basis(z) -> list[list[int]]:
    """Basis of the integer vectors orthogonal to z (z primitive)."""
    n = len(z)
    cols = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    vals = list(z)
    lead = None
    for k in range(n):
        if vals[k] == 0:
            continue
        if lead is None:
            lead = k
            continue
        gg, a, b = _ext_gcd(vals[lead], vals[k])
        q_lead, q_k = vals[lead] // gg, vals[k] // gg
        new_lead = [a * x + b * y for x, y in zip(cols[lead], cols[k])]
        new_k = [-q_k * x + q_lead * y for x, y in zip(cols[lead], cols[k])]
        cols[lead], cols[k] = new_lead, new_k
        vals[lead], vals[k] = gg, 0
    assert lead is not None and abs(vals[lead]) == 1
    return [cols[k] for k in range(n) if k != lead]
