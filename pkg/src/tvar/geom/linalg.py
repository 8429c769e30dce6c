"""Exact linear algebra over the rationals.

Everything here works on lists of ``Fraction`` (or ``int``) rows.  Sizes are
tiny (rank <= 8 in practice) so plain Gaussian elimination is fine.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Vec = tuple  # tuple[Fraction, ...]


def as_vec(x: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in x)


def dot(a: Sequence, b: Sequence) -> Fraction:
    # int start: integer inputs stay in fast int arithmetic
    return sum((x * y for x, y in zip(a, b)), 0)


def add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def is_integral(a: Iterable) -> bool:
    return all(Fraction(x).denominator == 1 for x in a)


def primitive_multiple(v: Sequence) -> tuple[int, tuple[int, ...]]:
    """Smallest positive ``mu`` with ``mu * v`` integral, together with ``mu * v``."""
    v = as_vec(v)
    mu = reduce(lcm, (c.denominator for c in v), 1)
    return mu, tuple(int(c * mu) for c in v)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector on the ray through ``v`` (``v`` nonzero)."""
    _, w = primitive_multiple(v)
    g = reduce(gcd, (abs(c) for c in w), 0)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return tuple(c // g for c in w)


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : row . x = 0 for every row}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence, ncols: int):
    """Solve ``a x = b``.

    Returns ``(x0, kernel)`` with ``x0`` a particular solution and ``kernel`` a
    basis of the homogeneous solutions, or ``None`` when inconsistent.
    """
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    if not aug:
        return tuple(Fraction(0) for _ in range(ncols)), nullspace([], ncols)
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return tuple(x), nullspace(a, ncols)


def solve_unique(a: Sequence[Sequence], b: Sequence, ncols: int):
    """Unique solution of ``a x = b``; ``None`` if inconsistent.

    Raises ``ValueError`` when the system is underdetermined.
    """
    res = solve(a, b, ncols)
    if res is None:
        return None
    x, ker = res
    if ker:
        raise ValueError("underdetermined system")
    return x


def integer_rows(rows: Iterable[Sequence]) -> list[tuple[int, ...]]:
    """Scale each row by the lcm of its denominators (sign preserved)."""
    out = []
    for r in rows:
        mu = reduce(lcm, (Fraction(c).denominator for c in r), 1)
        out.append(tuple(int(Fraction(c) * mu) for c in r))
    return out
