"""Exact integer/rational linear algebra.

Everything here is arbitrary-precision and exact: integer matrices go
through fraction-free (Bareiss) elimination to keep intermediate entries
integral, and back-substitution happens over ``fractions.Fraction``.
There is no floating point anywhere in this package.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

Vec = Sequence[int]
Mat = Sequence[Sequence[int]]


def _as_int_matrix(mat: Sequence[Sequence[int | Fraction]]) -> tuple[list[list[int]], int]:
    """Clear denominators; returns (integer matrix, common scale factor)."""
    scale = 1
    for row in mat:
        for x in row:
            if isinstance(x, Fraction):
                d = x.denominator
                g = _gcd(scale, d)
                scale = scale // g * d
    out = [[int(x * scale) if isinstance(x, Fraction) else x * scale for x in row] for row in mat]
    return out, scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def bareiss_echelon(mat: Mat) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of an integer matrix.

    Returns ``(echelon, pivot_cols)``.  All intermediate divisions are
    exact (Bareiss), so entries stay integral and of moderate size.
    """
    a = [list(row) for row in mat]
    if not a:
        return a, []
    n_rows, n_cols = len(a), len(a[0])
    pivot_cols: list[int] = []
    prev = 1
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pr = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if pr is None:
            continue
        if pr != r:
            a[r], a[pr] = a[pr], a[r]
        piv = a[r][c]
        for i in range(r + 1, n_rows):
            row_i, row_r = a[i], a[r]
            f = row_i[c]
            for j in range(n_cols):
                row_i[j] = (row_i[j] * piv - f * row_r[j]) // prev
        prev = piv
        pivot_cols.append(c)
        r += 1
    return a, pivot_cols


def solve_linear(
    mat: Sequence[Sequence[int | Fraction]], rhs: Sequence[int | Fraction]
) -> Optional[list[Fraction]]:
    """One exact solution of ``mat @ x = rhs``, or None when inconsistent.

    The matrix may be singular; any particular solution is returned (free
    variables are set to zero).
    """
    if len(mat) != len(rhs):
        raise ValueError("dimension mismatch between matrix and right-hand side")
    for row in mat:
        if len(row) != len(mat[0]):
            raise ValueError("ragged matrix")
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    iaug, _ = _as_int_matrix(aug)
    ech, piv = bareiss_echelon(iaug)
    n_cols = len(mat[0]) if mat else 0
    if piv and piv[-1] == n_cols:
        return None  # pivot in the augmented column: inconsistent
    # rows below the last pivot are zero rows by construction
    x = [Fraction(0)] * n_cols
    for r in range(len(piv) - 1, -1, -1):
        c = piv[r]
        s = Fraction(ech[r][n_cols])
        for j in range(c + 1, n_cols):
            if ech[r][j]:
                s -= ech[r][j] * x[j]
        x[c] = s / ech[r][c]
    return x


def kernel_basis(mat: Sequence[Sequence[int | Fraction]]) -> list[list[Fraction]]:
    """Basis of the null space; empty iff the matrix has full column rank."""
    if not mat:
        return []
    imat, _ = _as_int_matrix(mat)
    ech, piv = bareiss_echelon(imat)
    n_cols = len(mat[0])
    free = [c for c in range(n_cols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for r in range(len(piv) - 1, -1, -1):
            c = piv[r]
            s = Fraction(0)
            for j in range(c + 1, n_cols):
                if ech[r][j]:
                    s -= ech[r][j] * v[j]
            v[c] = s / ech[r][c]
        basis.append(v)
    return basis


def determinant(mat: Mat) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    n = len(mat)
    if n == 0:
        return 1
    a = [list(row) for row in mat]
    sign = 1
    prev = 1
    for k in range(n):
        pr = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pr is None:
            return 0
        if pr != k:
            a[k], a[pr] = a[pr], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k]
            for j in range(n):
                a[i][j] = (a[i][j] * piv - f * a[k][j]) // prev
        prev = piv
    return sign * a[n - 1][n - 1]


def inertia(mat: Sequence[Sequence[int | Fraction]]) -> tuple[int, int, int]:
    """Signature ``(n_plus, n_zero, n_minus)`` of a symmetric matrix.

    Exact symmetric congruence diagonalization over the rationals.  A zero
    pivot with a nonzero off-diagonal partner is repaired by adding that
    row and column (the usual 2x2 trick), which leaves the congruence
    class unchanged.
    """
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    for i in range(n):
        for j in range(n):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    n_plus = n_minus = n_zero = 0
    for k in range(n):
        if a[k][k] == 0:
            swap = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if swap is not None:
                a[k], a[swap] = a[swap], a[k]
                for row in a:
                    row[k], row[swap] = row[swap], row[k]
            else:
                partner = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if partner is None:
                    n_zero += 1
                    continue
                # remaining diagonal is zero, so this makes a[k][k] = 2*a[k][partner]
                for j in range(n):
                    a[k][j] += a[partner][j]
                for i in range(n):
                    a[i][k] += a[i][partner]
        piv = a[k][k]
        if piv > 0:
            n_plus += 1
        else:
            n_minus += 1
        for i in range(k + 1, n):
            if a[i][k] == 0:
                continue
            f = a[i][k] / piv
            for j in range(n):
                a[i][j] -= f * a[k][j]
            for j in range(n):
                a[j][i] -= f * a[j][k]
    return n_plus, n_zero, n_minus


def hermite_basis(rows: Sequence[Vec]) -> list[list[int]]:
    """Hermite-form basis (positive pivots, echelon) of an integer row lattice."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        return []
    n_cols = len(work[0])
    basis: list[list[int]] = []
    col = 0
    while work and col < n_cols:
        live = [r for r in work if r[col] != 0]
        if not live:
            col += 1
            continue
        # gcd-reduce all rows with a nonzero entry in this column
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            small = live[0]
            for r in live[1:]:
                q = r[col] // small[col]
                for j in range(n_cols):
                    r[j] -= q * small[j]
            live = [r for r in live if r[col] != 0]
        pivot_row = live[0]
        if pivot_row[col] < 0:
            pivot_row[:] = [-x for x in pivot_row]
        basis.append(pivot_row)
        work = [r for r in work if r is not pivot_row and any(r)]
        col += 1
    # normalize entries above each pivot into [0, pivot)
    for i, row in enumerate(basis):
        c = next(j for j, x in enumerate(row) if x != 0)
        p = row[c]
        for other in basis[:i]:
            q = other[c] // p
            if q:
                for j in range(len(row)):
                    other[j] -= q * row[j]
    return basis


def hermite_reduce(basis: Sequence[Vec], vec: Vec) -> tuple[int, ...]:
    """Canonical representative of ``vec`` modulo the row lattice.

    ``basis`` must be echelon (as produced by :func:`hermite_basis`); the
    output has each pivot coordinate reduced into ``[0, pivot)``, which is
    constant on cosets and idempotent.
    """
    v = list(vec)
    for row in basis:
        c = next(j for j, x in enumerate(row) if x != 0)
        if len(v) != len(row):
            raise ValueError("dimension mismatch in coset reduction")
        q = v[c] // row[c]
        if q:
            for j in range(len(v)):
                v[j] -= q * row[j]
    return tuple(v)
