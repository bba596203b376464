"""Exact rational matrices, backed by sympy.Matrix.

Matrices travel through the package as tuples of tuples of Fraction; sympy is only used for
rank, inversion and column spaces.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import sympy

from opcoact.utils.errors import InputError

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]


def to_rational(x: Fraction | int) -> sympy.Rational:
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


def to_fraction(x: sympy.Expr) -> Fraction:
    r = sympy.Rational(x)
    return Fraction(int(r.p), int(r.q))


def as_matrix(rows: Sequence[Sequence[Fraction | int]]) -> Matrix:
    """Freeze nested sequences into a Matrix, checking that the rows are rectangular."""
    out = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if out and len({len(row) for row in out}) != 1:
        raise InputError("Matrix rows have different lengths.")
    return out


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def to_sympy(m: Matrix, cols: int | None = None) -> sympy.Matrix:
    rows, width = shape(m)
    if not rows:
        return sympy.zeros(0, cols or 0)
    return sympy.Matrix(rows, width, [to_rational(x) for row in m for x in row])


def from_sympy(m: sympy.Matrix) -> Matrix:
    return tuple(tuple(to_fraction(m[r, c]) for c in range(m.cols)) for r in range(m.rows))


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(r == c)) for c in range(n)) for r in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Product a·b.

    Raises:
        InputError: If the inner sizes differ.
    """
    ar, ac = shape(a)
    br, bc = shape(b)
    if ac != br and ar and br:
        raise InputError(f"Cannot multiply a {ar}x{ac} matrix by a {br}x{bc} matrix.")
    return tuple(tuple(sum((a[r][k] * b[k][c] for k in range(ac)), Fraction(0)) for c in range(bc)) for r in range(ar))


def add(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise InputError(f"Cannot add matrices of shapes {shape(a)} and {shape(b)}.")
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def is_zero(m: Matrix) -> bool:
    return all(not x for row in m for x in row)


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    return int(to_sympy(m).rank())


def inverse(m: Matrix) -> Matrix | None:
    """The inverse of a square matrix, or None when it is singular."""
    rows, cols = shape(m)
    if rows != cols:
        raise InputError(f"Only square matrices can be inverted, got {rows}x{cols}.")
    if rows == 0:
        return ()
    sm = to_sympy(m)
    if sm.det() == 0:
        return None
    return from_sympy(sm.inv())


def columns(vectors: Sequence[Vector], n: int) -> Matrix:
    """The n×len(vectors) matrix whose columns are the given vectors."""
    return tuple(tuple(v[r] for v in vectors) for r in range(n))


def column_space(m: Matrix) -> list[Vector]:
    """A basis of the column space, in sympy's pivot order."""
    rows, cols = shape(m)
    if not rows or not cols:
        return []
    return [tuple(to_fraction(x) for x in col) for col in to_sympy(m).columnspace()]


def in_span(v: Vector, vectors: Sequence[Vector]) -> bool:
    """Whether v is a linear combination of the given vectors."""
    if not any(v):
        return True
    if not vectors:
        return False
    n = len(v)
    base = columns(vectors, n)
    extended = columns([*vectors, v], n)
    return rank(extended) == rank(base)


def same_span(a: Sequence[Vector], b: Sequence[Vector], n: int) -> bool:
    """Subspace equality through ranks."""
    ra = rank(columns(a, n)) if a else 0
    rb = rank(columns(b, n)) if b else 0
    both = rank(columns([*a, *b], n)) if (a or b) else 0
    return ra == rb == both


def apply(m: Matrix, v: Vector) -> Vector:
    return tuple(sum((row[c] * v[c] for c in range(len(v))), Fraction(0)) for row in m)
