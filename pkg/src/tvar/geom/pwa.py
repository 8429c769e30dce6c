"""Concave piecewise-affine functions stored as a minimum of affine pieces."""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .linalg import as_vec, dot
from .polyhedron import Polyhedron

Piece = tuple  # (slope: tuple[Fraction, ...], const: Fraction)


class PWAConcave:
    """``x -> min_i (<slope_i, x> + const_i)`` on ``domain``.

    ``domain=None`` means the whole ambient space.  Pieces that are never the
    minimum on a full-dimensional region of the domain are pruned lazily by
    :meth:`cells`; ``pieces`` keeps what the caller passed (deduplicated).
    """

    def __init__(self, pieces: Iterable[tuple[Sequence, object]], domain: Polyhedron | None = None,
                 ambient: int | None = None):
        ps = sorted({(as_vec(s), Fraction(c)) for s, c in pieces})
        if not ps:
            raise ValueError("a concave function needs at least one affine piece")
        self.pieces: tuple[Piece, ...] = tuple(ps)
        self.ambient = ambient if ambient is not None else len(ps[0][0])
        self.domain = domain
        if domain is not None and domain.ambient != self.ambient:
            raise ValueError("domain rank mismatch")

    def __repr__(self) -> str:
        body = ", ".join(f"<{','.join(map(str, s))}>+{c}" for s, c in self.pieces)
        return f"PWAConcave(min[{body}])"

    def __call__(self, x: Sequence) -> Fraction:
        x = as_vec(x)
        return min(dot(s, x) + c for s, c in self.pieces)

    value = __call__

    @classmethod
    def zero(cls, ambient: int, domain: Polyhedron | None = None) -> "PWAConcave":
        return cls([((0,) * ambient, 0)], domain, ambient)

    def _region(self, i: int) -> Polyhedron:
        s, c = self.pieces[i]
        cons = []
        for j, (t, e) in enumerate(self.pieces):
            if j == i:
                continue
            # <t,x>+e >= <s,x>+c
            cons.append((tuple(a - b for a, b in zip(t, s)), c - e))
        if self.domain is None:
            if not cons:
                raise ValueError("unbounded region of linearity (affine on the whole space)")
            return Polyhedron.from_inequalities(cons, (), self.ambient)
        return self.domain.with_constraints(cons)

    @cached_property
    def _cells(self) -> tuple[tuple[Polyhedron, Piece], ...]:
        if self.domain is not None and self.domain.is_empty:
            return ()
        target = self.ambient if self.domain is None else self.domain.dim
        out = []
        for i, p in enumerate(self.pieces):
            reg = self._region(i)
            if reg.dim == target:
                out.append((reg, p))
        return tuple(out)

    def cells(self) -> list[tuple[Polyhedron, Piece]]:
        """Regions of linearity (maximal) with the affine piece active there."""
        return list(self._cells)

    def essential(self) -> "PWAConcave":
        return PWAConcave([p for _, p in self._cells], self.domain, self.ambient)

    def is_affine(self) -> bool:
        return len(self._cells) <= 1

    def graph_vertices(self) -> list[tuple[tuple[Fraction, ...], Fraction]]:
        """Vertices ``(x, f(x))`` of the graph, lexicographic in ``x``."""
        pts = sorted({v for reg, _ in self._cells for v in reg.vertices})
        return [(v, self(v)) for v in pts]

    def piece_at(self, x: Sequence) -> Piece:
        """An affine piece attaining the minimum at ``x`` (first in order)."""
        x = as_vec(x)
        val = self(x)
        return next(p for p in self.pieces if dot(p[0], x) + p[1] == val)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "PWAConcave") -> "PWAConcave":
        dom = self.domain
        if other.domain is not None:
            dom = other.domain if dom is None else dom.intersection(other.domain)
        a = self.essential().pieces
        b = other.essential().pieces
        pieces = [(tuple(x + y for x, y in zip(s, t)), c + e) for s, c in a for t, e in b]
        return PWAConcave(pieces, dom, self.ambient).essential()

    def shift(self, c) -> "PWAConcave":
        c = Fraction(c)
        return PWAConcave([(s, e + c) for s, e in self.pieces], self.domain, self.ambient)

    def scale(self, m) -> "PWAConcave":
        """``x -> m f(x)``, ``m >= 0``."""
        m = Fraction(m)
        if m < 0:
            raise ValueError("negative scaling breaks concavity")
        return PWAConcave([(tuple(m * a for a in s), m * e) for s, e in self.pieces], self.domain,
                          self.ambient)

    def dilate(self, m) -> "PWAConcave":
        """``x -> m f(x / m)`` on ``m * domain``."""
        m = Fraction(m)
        dom = None if self.domain is None else self.domain.dilate(m)
        return PWAConcave([(s, m * e) for s, e in self.pieces], dom, self.ambient)

    def same_function(self, other: "PWAConcave") -> bool:
        """Equality as functions on the (common) domain."""
        if self.domain != other.domain:
            return False
        a = {p for _, p in self._cells}
        b = {p for _, p in other._cells}
        return a == b


def conjugate_from_points(points: Iterable[tuple[Sequence, object]], domain: Polyhedron | None,
                          ambient: int) -> PWAConcave:
    """``u -> min_v (<v,u> - value_v)`` over the given (vertex, value) pairs."""
    pts = [(as_vec(v), Fraction(val)) for v, val in points]
    if not pts:
        raise ValueError("unbounded conjugate")
    return PWAConcave([(v, -val) for v, val in pts], domain, ambient)


def concave_conjugate(f: PWAConcave, box: Polyhedron | None, complex=None) -> PWAConcave:
    """Concave conjugate over a vertex set.

    ``u -> min_{v in V} (<v,u> - f(v))`` on ``box``.  ``V`` is the vertex set
    of ``complex`` when given (a :class:`PolyComplex` on which ``f`` is
    piecewise affine), otherwise the vertices of the regions of linearity of
    ``f``.
    """
    if complex is not None:
        verts = [(v, f(v)) for v in complex.vertices()]
    else:
        verts = f.graph_vertices()
    if not verts:
        raise ValueError("unbounded conjugate")
    ambient = f.ambient
    return conjugate_from_points(verts, box, ambient)
