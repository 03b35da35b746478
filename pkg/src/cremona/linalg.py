"""Exact linear algebra over QQ via fraction-free row reduction.

Rows are scaled to primitive integer vectors before elimination, and every
combination ``a*R - b*P`` is followed by division by the row content, so
entries stay integral and small.  Nullspace vectors come back as primitive
integer vectors (as Fractions), ordered by free column.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence

Matrix = list  # list[list[Fraction]]


def _primitive(row: list[int]) -> list[int]:
    g = reduce(gcd, row, 0)
    if g > 1:
        row = [x // g for x in row]
    return row


def _integer_row(row: Sequence) -> list[int]:
    den = 1
    for x in row:
        x = Fraction(x)
        if x.denominator != 1:
            den = lcm(den, x.denominator)
    return _primitive([int(Fraction(x) * den) for x in row])


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form with integer rows (pivots not normalized to 1).

    Returns ``(rows, pivot_columns)``; zero rows are dropped.
    """
    m = [_integer_row(r) for r in rows]
    m = [r for r in m if any(r)]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    top = 0
    for c in range(ncols):
        if top == len(m):
            break
        p = next((i for i in range(top, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[top], m[p] = m[p], m[top]
        prow = m[top]
        pv = prow[c]
        for i in range(len(m)):
            if i != top and m[i][c]:
                a = m[i][c]
                g = gcd(a, pv)
                s, t = pv // g, a // g
                m[i] = _primitive([s * x - t * y for x, y in zip(m[i], prow)])
        pivots.append(c)
        top += 1
    return m[:top], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : A v = 0}`` as primitive integer vectors."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            if row[f]:
                v[pc] = Fraction(-row[f], row[pc])
        basis.append([Fraction(x) for x in _integer_row(v)])
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``A x = b`` (free variables set to zero), or ``None``."""
    n = len(a[0]) if a else 0
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(red, pivots):
        x[pc] = Fraction(row[n], row[pc])
    return x


def det(m: Sequence[Sequence]) -> Fraction:
    """Determinant by Bareiss elimination on the integer-scaled matrix."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    rows = []
    for r in m:
        den = reduce(lcm, (Fraction(x).denominator for x in r), 1)
        scale /= den
        rows.append([int(Fraction(x) * den) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            p = next((i for i in range(k + 1, n) if rows[i][k]), None)
            if p is None:
                return Fraction(0)
            rows[k], rows[p] = rows[p], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
        prev = rows[k][k]
    return sign * rows[n - 1][n - 1] * scale


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [[Fraction(x, row[i]) for x in row[n:]] for i, row in enumerate(red)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    bt = list(zip(*b))
    return [[sum((Fraction(x) * y for x, y in zip(r, c)), Fraction(0)) for c in bt] for r in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((Fraction(x) * y for x, y in zip(r, v)), Fraction(0)) for r in a]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*a)]
