"""Exact rational polyhedra in V-representation with derived H-representation."""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property
from math import ceil, floor
from typing import Iterable, Sequence

from .. import _kernels
from .linalg import as_vec, dot, integer_rows, nullspace, primitive, rank

__all__ = [
    "Polyhedron",
    "cone_hrep",
    "minkowski_sum",
    "lattice_points",
]


def cone_hrep(gens: Sequence[Sequence], d: int):
    """Equations and facets of the cone generated by ``gens`` in Q^d.

    Returns ``(equations, facets)``: primitive integer vectors ``e`` with
    ``e . g = 0`` on the cone (a basis of its orthogonal complement) and
    primitive integer inner normals ``a`` with ``a . g >= 0``, one per facet.
    Facets are found by testing every hyperplane spanned (inside the linear
    span) by ``dim - 1`` generators.
    """
    G = [tuple(primitive(g)) for g in gens if any(c != 0 for c in g)]
    G = sorted(set(G))
    if not G:
        return [primitive(e) for e in nullspace([], d)], []
    eqs = [primitive(e) for e in nullspace(G, d)]
    k = d - len(eqs)
    facets: set[tuple[int, ...]] = set()
    if k == 1:
        # a ray or a full line
        signs = {dot(G[0], g) > 0 for g in G}
        if len(signs) == 1:
            facets.add(G[0])
        return eqs, sorted(facets)
    for combo in itertools.combinations(G, k - 1):
        if d == 2 and not eqs:
            a = (-combo[0][1], combo[0][0])
        elif d == 3 and not eqs:
            a = _cross(*combo)
            if a == (0, 0, 0):
                continue
        else:
            ns = nullspace(list(combo) + eqs, d)
            if len(ns) != 1:
                continue
            a = primitive(ns[0])
        vals = [dot(a, g) for g in G]
        if all(v >= 0 for v in vals):
            facets.add(primitive(a))
        elif all(v <= 0 for v in vals):
            facets.add(primitive([-c for c in a]))
    return eqs, sorted(facets)


def _cross(p, q) -> tuple[int, int, int]:
    return (p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0])


def _homogenize(vertices, rays):
    return [(Fraction(1),) + tuple(v) for v in vertices] + [(Fraction(0),) + tuple(map(Fraction, r)) for r in rays]


class Polyhedron:
    """``conv(vertices) + cone(rays)`` in Q^ambient, pointed.

    The generator lists are reduced to an irredundant, lexicographically
    sorted V-representation on construction.  Instances are immutable.
    """

    def __init__(self, vertices: Iterable[Sequence] = (), rays: Iterable[Sequence] = (),
                 ambient: int | None = None, *, _clean: bool = False):
        verts = [as_vec(v) for v in vertices]
        rs = [primitive(r) for r in rays if any(Fraction(c) != 0 for c in r)]
        if ambient is None:
            if verts:
                ambient = len(verts[0])
            elif rs:
                ambient = len(rs[0])
            else:
                raise ValueError("ambient dimension required for an empty polyhedron")
        self.ambient = ambient
        if not verts:
            if rs:
                raise ValueError("a nonempty polyhedron needs at least one vertex")
            self.vertices: tuple = ()
            self.rays: tuple = ()
            return
        verts = sorted(set(verts))
        rs = sorted(set(rs))
        if not _clean:
            verts, rs = self._irredundant(verts, rs)
        self.vertices = tuple(verts)
        self.rays = tuple(rs)

    # -- construction helpers ------------------------------------------------

    def _irredundant(self, verts, rs):
        d = self.ambient + 1
        gens = _homogenize(verts, rs)
        eqs, facets = cone_hrep(gens, d)
        if len(verts) + len(rs) == 1:
            return verts, rs
        span_dim = d - len(eqs)
        if span_dim == 1:
            return verts[:1], []
        if rank(list(facets) + list(eqs), d) < d:
            raise ValueError("polyhedron is not pointed")
        keep_v, keep_r = [], []
        for g, orig, is_ray in [(g, o, False) for g, o in zip(gens[:len(verts)], verts)] + \
                               [(g, o, True) for g, o in zip(gens[len(verts):], rs)]:
            tight = [a for a in facets if dot(a, g) == 0]
            if rank(tight + list(eqs), d) == d - 1:
                (keep_r if is_ray else keep_v).append(orig)
        return keep_v, keep_r

    @classmethod
    def from_inequalities(cls, ineqs: Iterable[tuple[Sequence, object]] = (),
                          eqs: Iterable[tuple[Sequence, object]] = (),
                          ambient: int | None = None) -> "Polyhedron":
        """``{x : a.x >= b for (a,b) in ineqs, a.x == b for (a,b) in eqs}``."""
        ineqs = [(as_vec(a), Fraction(b)) for a, b in ineqs]
        eqs = [(as_vec(a), Fraction(b)) for a, b in eqs]
        if ambient is None:
            ambient = len((ineqs + eqs)[0][0])
        d = ambient + 1
        rows = [(-b,) + a for a, b in ineqs]
        for a, b in eqs:
            rows.append((-b,) + a)
            rows.append((b,) + tuple(-c for c in a))
        rows.append((Fraction(1),) + (Fraction(0),) * ambient)
        deq, dfacets = cone_hrep(rows, d)
        if deq:
            raise ValueError("polyhedron is not pointed")
        verts, rs = [], []
        for y in dfacets:
            if y[0] > 0:
                verts.append(tuple(Fraction(c, y[0]) for c in y[1:]))
            else:
                rs.append(y[1:])
        if not verts:
            return cls((), (), ambient)
        return cls(verts, rs, ambient, _clean=True)

    @classmethod
    def empty(cls, ambient: int) -> "Polyhedron":
        return cls((), (), ambient)

    @classmethod
    def point(cls, x: Sequence) -> "Polyhedron":
        return cls([x])

    @classmethod
    def cone(cls, rays: Iterable[Sequence], ambient: int | None = None) -> "Polyhedron":
        rays = list(rays)
        if ambient is None:
            ambient = len(rays[0])
        return cls([(0,) * ambient], rays, ambient)

    # -- basic queries --------------------------------------------------------

    def __repr__(self) -> str:
        fmt = lambda v: "(" + ",".join(str(c) for c in v) + ")"
        vs = " ".join(fmt(v) for v in self.vertices)
        rs = " ".join(fmt(r) for r in self.rays)
        return f"Polyhedron[{self.ambient}](V: {vs}; R: {rs})"

    def _key(self):
        return (self.ambient, self.vertices, self.rays)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polyhedron) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __lt__(self, other: "Polyhedron") -> bool:
        return (self.vertices, self.rays) < (other.vertices, other.rays)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_bounded(self) -> bool:
        return not self.rays

    @cached_property
    def dim(self) -> int:
        if self.is_empty:
            return -1
        return rank(_homogenize(self.vertices, self.rays), self.ambient + 1) - 1

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient

    @cached_property
    def hrep(self):
        """``(equations, inequalities)`` as lists of ``(a, b)``: ``a.x == b`` / ``a.x >= b``."""
        n = self.ambient
        if self.is_empty:
            return [], [((Fraction(0),) * n, Fraction(1))]
        eqs, facets = cone_hrep(_homogenize(self.vertices, self.rays), n + 1)
        E = [(as_vec(e[1:]), Fraction(-e[0])) for e in eqs]
        I = [(as_vec(a[1:]), Fraction(-a[0])) for a in facets if any(c != 0 for c in a[1:])]
        return E, I

    @property
    def equations(self):
        return self.hrep[0]

    @property
    def inequalities(self):
        return self.hrep[1]

    def contains(self, x: Sequence) -> bool:
        x = as_vec(x)
        eqs, ineqs = self.hrep
        return all(dot(a, x) == b for a, b in eqs) and all(dot(a, x) >= b for a, b in ineqs)

    __contains__ = contains

    def relative_interior_contains(self, x: Sequence) -> bool:
        x = as_vec(x)
        eqs, ineqs = self.hrep
        return all(dot(a, x) == b for a, b in eqs) and all(dot(a, x) > b for a, b in ineqs)

    def interior_contains(self, x: Sequence) -> bool:
        return self.is_full_dimensional and self.relative_interior_contains(x)

    def recession_cone(self) -> "Polyhedron":
        return Polyhedron([(0,) * self.ambient], self.rays, self.ambient, _clean=True)

    def barycenter(self) -> tuple[Fraction, ...]:
        """A relative-interior point: vertex average plus the ray sum."""
        n = len(self.vertices)
        c = [sum((v[i] for v in self.vertices), Fraction(0)) / n for i in range(self.ambient)]
        for r in self.rays:
            c = [ci + ri for ci, ri in zip(c, r)]
        return tuple(c)

    # -- operations -----------------------------------------------------------

    def intersection(self, other: "Polyhedron") -> "Polyhedron":
        if self.is_empty or other.is_empty:
            return Polyhedron.empty(self.ambient)
        e1, i1 = self.hrep
        e2, i2 = other.hrep
        return Polyhedron.from_inequalities(i1 + i2, e1 + e2, self.ambient)

    def __and__(self, other):
        return self.intersection(other)

    def with_constraints(self, ineqs=(), eqs=()) -> "Polyhedron":
        if self.is_empty:
            return self
        e, i = self.hrep
        return Polyhedron.from_inequalities(list(i) + list(ineqs), list(e) + list(eqs), self.ambient)

    def translate(self, t: Sequence) -> "Polyhedron":
        t = as_vec(t)
        return Polyhedron([tuple(a + b for a, b in zip(v, t)) for v in self.vertices], self.rays,
                          self.ambient, _clean=True)

    def dilate(self, m) -> "Polyhedron":
        m = Fraction(m)
        if m <= 0:
            raise ValueError("dilation factor must be positive")
        return Polyhedron([tuple(m * c for c in v) for v in self.vertices], self.rays,
                          self.ambient, _clean=True)

    def faces(self) -> list["Polyhedron"]:
        """All nonempty faces (including the polyhedron), by dimension then lex."""
        if self.is_empty:
            return []
        gens = [(v, False) for v in self.vertices] + [(r, True) for r in self.rays]
        ineqs = self.inequalities

        def tight(idx, a, b):
            out = []
            for i in idx:
                g, is_ray = gens[i]
                val = dot(a, g) if is_ray else dot(a, g) - b
                if val == 0:
                    out.append(i)
            return frozenset(out)

        def mk(idx):
            vs = [gens[i][0] for i in sorted(idx) if not gens[i][1]]
            rs = [gens[i][0] for i in sorted(idx) if gens[i][1]]
            return Polyhedron(vs, rs, self.ambient, _clean=True)

        top = frozenset(range(len(gens)))
        seen = {top: self}
        frontier = [top]
        while frontier:
            nxt = []
            for f in frontier:
                pf = seen[f]
                if pf.dim <= 0:
                    continue
                for a, b in ineqs:
                    sub = tight(f, a, b)
                    if not sub or sub == f or sub in seen:
                        continue
                    if not any(not gens[i][1] for i in sub):
                        continue
                    face = mk(sub)
                    if face.dim == pf.dim - 1:
                        seen[sub] = face
                        nxt.append(sub)
            frontier = nxt
        return sorted(seen.values(), key=lambda p: (p.dim, p.vertices, p.rays))

    def facets(self) -> list["Polyhedron"]:
        return [f for f in self.faces() if f.dim == self.dim - 1]

    def is_face_of(self, other: "Polyhedron") -> bool:
        return any(f == self for f in other.faces())

    def bounding_box(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        if not self.is_bounded:
            raise ValueError("unbounded enumeration")
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.ambient))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.ambient))
        return lo, hi


def minkowski_sum(ps: Sequence[Polyhedron]) -> Polyhedron:
    """Exact Minkowski sum; recession cone is the sum of recession cones."""
    ps = list(ps)
    if not ps:
        raise ValueError("minkowski_sum of an empty list")
    n = ps[0].ambient
    if any(p.ambient != n for p in ps):
        raise ValueError("summands live in different ranks")
    if any(p.is_empty for p in ps):
        return Polyhedron.empty(n)
    acc = ps[0]
    for p in ps[1:]:
        verts = [tuple(a + b for a, b in zip(v, w)) for v in acc.vertices for w in p.vertices]
        acc = Polyhedron(verts, list(acc.rays) + list(p.rays), n)
    return acc


def lattice_points(p: Polyhedron, backend: str | None = None) -> list[tuple[int, ...]]:
    """Integer points of a bounded polyhedron in lexicographic order."""
    if p.is_empty:
        return []
    if not p.is_bounded:
        raise ValueError("unbounded enumeration")
    lo, hi = p.bounding_box()
    lo = [ceil(c) for c in lo]
    hi = [floor(c) for c in hi]
    eqs, ineqs = p.hrep
    rows = [(tuple(a) + (-b,)) for a, b in ineqs]
    for a, b in eqs:
        rows.append(tuple(a) + (-b,))
        rows.append(tuple(-c for c in a) + (b,))
    irows = integer_rows(rows)
    A = [r[:-1] for r in irows]
    b = [-r[-1] for r in irows]
    return _kernels.scan_halfspaces(A, b, lo, hi, backend=backend)
