"""The realization polytope ``Inc(Psi)`` over a divisorial polytope.

Points are ``(u, x)`` with ``u`` in the box, ``x`` in the sum-zero hyperplane of
Q^r and ``x_P <= Psi_P(u)``.  A lattice point ``x`` of a fiber stands for the
divisor ``F = -x`` on the base curve, which satisfies ``F + Psi(u) >= 0``.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Sequence

from . import _kernels
from .geom import Polyhedron, common_refinement, lattice_points
from .geom.linalg import as_vec, dot, primitive
from .positivity import DivisorialPolytope

DEFAULT_FACE_CAP = 1 << 12


class FaceEnumerationTooLarge(ValueError):
    pass


def face_cap() -> int:
    raw = os.environ.get("TVAR_FACE_CAP", "").strip()
    return int(raw) if raw else DEFAULT_FACE_CAP


@dataclass(frozen=True)
class FiberSimplex:
    u: tuple
    bounds: tuple[Fraction, ...]  # Psi_P(u) in point order
    dilation: Fraction

    @property
    def vertices(self) -> list[tuple[Fraction, ...]]:
        """Vertex ``Q`` sits at ``x_P = Psi_P(u)`` for ``P != Q``."""
        out = []
        for q in range(len(self.bounds)):
            x = list(self.bounds)
            x[q] -= self.dilation
            out.append(tuple(x))
        return sorted(set(out))

    @property
    def is_point(self) -> bool:
        return self.dilation == 0


class RealizationPolytope:
    def __init__(self, dp: DivisorialPolytope, points: Sequence[str]):
        pts = tuple(points)
        if len(pts) < 2:
            raise ValueError("a realization needs at least two points")
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate points")
        missing = [p for p in dp.nontrivial() if p not in pts]
        if missing:
            raise ValueError(f"point set misses {missing[0]}, where Psi is nontrivial")
        self.dp = dp
        self.points = pts
        self.box = dp.box

    def __repr__(self) -> str:
        return f"RealizationPolytope(points={list(self.points)}, box={self.box})"

    @property
    def rank(self) -> int:
        return self.box.ambient

    @property
    def r(self) -> int:
        return len(self.points)

    def psi(self, p: str):
        return self.dp.psi_of(p)

    def values(self, u) -> tuple[Fraction, ...]:
        u = as_vec(u)
        return tuple(self.psi(p)(u) for p in self.points)

    def deg(self, u) -> Fraction:
        return sum(self.values(u), Fraction(0))

    def halfspaces(self) -> tuple[list, list]:
        """``(equations, inequalities)`` on ``(u, x)`` as ``(a, b)`` with ``a.y >= b``."""
        n, r = self.rank, self.r
        ineqs = [(tuple(a) + (0,) * r, b) for a, b in self.box.inequalities]
        eqs = [(tuple(a) + (0,) * r, b) for a, b in self.box.equations]
        for k, p in enumerate(self.points):
            for s, c in self.psi(p).essential().pieces:
                e = [0] * r
                e[k] = -1
                ineqs.append((tuple(s) + tuple(e), -c))
        eqs.append(((0,) * n + (1,) * r, 0))
        return eqs, ineqs

    def reduced_halfspaces(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Inequalities after eliminating the last ``x`` coordinate, normalised."""
        _, ineqs = self.halfspaces()
        return sorted({_reduce(a, b, self.rank) for a, b in ineqs})

    def as_polyhedron(self, reduced: bool = True) -> Polyhedron:
        """Explicit polytope; only sensible for small ``rank + r``."""
        eqs, ineqs = self.halfspaces()
        if not reduced:
            return Polyhedron.from_inequalities(ineqs, eqs, self.rank + self.r)
        red = [(a, b) for a, b in self.reduced_halfspaces()]
        return Polyhedron.from_inequalities(red, (), self.rank + self.r - 1)


def _reduce(a, b, n: int):
    """Substitute ``x_last = -sum(other x)``; scale the normal to a primitive vector."""
    a = as_vec(a)
    last = a[-1]
    red = tuple(a[:n]) + tuple(c - last for c in a[n:-1])
    if all(c == 0 for c in red):
        return red, Fraction(b)
    prim = primitive(red)
    k = next(i for i, c in enumerate(red) if c != 0)
    scale = Fraction(prim[k]) / red[k]
    return prim, scale * Fraction(b)


def build(dp: DivisorialPolytope, points: Sequence[str] | None = None) -> RealizationPolytope:
    return RealizationPolytope(dp, points if points is not None else dp.points)


def fiber(rp: RealizationPolytope, u) -> FiberSimplex:
    u = as_vec(u)
    if not rp.box.contains(u):
        raise ValueError(f"u = ({','.join(map(str, u))}) is outside the box")
    vals = rp.values(u)
    return FiberSimplex(u, vals, sum(vals, Fraction(0)))


def _bounds(rp: RealizationPolytope, u, interior: bool) -> list[int]:
    vals = rp.values(u)
    return [ceil(v) - 1 if interior else floor(v) for v in vals]


def fiber_lattice_points(rp: RealizationPolytope, u, interior: bool = False,
                         backend: str | None = None) -> list[tuple[int, ...]]:
    """Integer ``x`` with ``sum x = 0`` and ``x_P <= floor Psi_P(u)`` (or ``< Psi_P(u)``).

    Ordered lexicographically increasing.
    """
    u = as_vec(u)
    if not rp.box.contains(u):
        raise ValueError("u outside the box")
    bnd = _bounds(rp, u, interior)
    total = sum(bnd)
    if total < 0:
        return []
    ys = _kernels.compositions(total, rp.r, backend=backend)
    return [tuple(b - int(y) for b, y in zip(bnd, row)) for row in ys]


def fiber_lattice_count(rp: RealizationPolytope, u, interior: bool = False) -> int:
    from math import comb
    bnd = _bounds(rp, as_vec(u), interior)
    total = sum(bnd)
    return comb(total + rp.r - 1, rp.r - 1) if total >= 0 else 0


def interior_point(rp: RealizationPolytope, u) -> tuple[int, ...] | None:
    """One interior lattice point of the fiber (surplus taken from the first point)."""
    bnd = _bounds(rp, as_vec(u), True)
    surplus = sum(bnd)
    if surplus < 0:
        return None
    x = list(bnd)
    x[0] -= surplus
    return tuple(x)


def divisor_of(rp: RealizationPolytope, x: Sequence[int]) -> dict[str, int]:
    """The divisor ``F = -x`` attached to a fiber lattice point."""
    return {p: -int(c) for p, c in zip(rp.points, x) if c}


def point_of(rp: RealizationPolytope, divisor: dict[str, int]) -> tuple[int, ...]:
    return tuple(-int(divisor.get(p, 0)) for p in rp.points)


def lattice_point_total(rp: RealizationPolytope) -> int:
    return sum(fiber_lattice_count(rp, u) for u in lattice_points(rp.box))


# ---------------------------------------------------------------------------
# faces


@dataclass(frozen=True)
class FacePair:
    """Face ``{(u, x) : u in A, x_P = Psi_P(u) for P in I}``."""

    I: tuple[str, ...]
    A: Polyhedron
    dim: int
    deg_zero: bool

    def is_subface_of(self, other: "FacePair") -> bool:
        if not all(other.A.contains(v) for v in self.A.vertices):
            return False
        return self.deg_zero or set(other.I) <= set(self.I)


def _deg_zero_on(rp: RealizationPolytope, A: Polyhedron) -> bool:
    return rp.deg(A.barycenter()) == 0


def faces(rp: RealizationPolytope, cap: int | None = None) -> list[FacePair]:
    """All faces, by dimension, then ``I`` (as point indices), then ``A``."""
    cap = face_cap() if cap is None else cap
    r = rp.r
    if (1 << r) > cap:
        raise FaceEnumerationTooLarge(f"face enumeration too large: 2^{r} exceeds the cap {cap}")
    idx = {p: k for k, p in enumerate(rp.points)}
    found: dict[tuple, FacePair] = {}
    for size in range(r):
        for I in itertools.combinations(rp.points, size):
            cx = common_refinement([rp.psi(p) for p in I], rp.box)
            for A in cx.faces():
                zero = _deg_zero_on(rp, A)
                if zero:
                    key = ("zero", A)
                    dim = A.dim
                else:
                    key = (tuple(idx[p] for p in I), A)
                    dim = A.dim + r - 1 - len(I)
                prev = found.get(key)
                cand = FacePair(I, A, dim, zero)
                if prev is None or tuple(idx[p] for p in I) < tuple(idx[p] for p in prev.I):
                    found[key] = cand
    return sorted(found.values(), key=lambda f: (f.dim, tuple(idx[p] for p in f.I), f.A.vertices))


def facets(rp: RealizationPolytope, cap: int | None = None) -> list[FacePair]:
    top = rp.rank + rp.r - 1
    return [f for f in faces(rp, cap) if f.dim == top - 1]


def facet_census(rp: RealizationPolytope) -> dict[str, int]:
    """Facets from box facets (``I`` empty) and from graph facets over each point."""
    out = {"box": sum(1 for A in rp.box.facets() if not _deg_zero_on(rp, A))}
    for p in rp.points:
        out[p] = len(rp.psi(p).cells())
    return out


def facet_halfspace(rp: RealizationPolytope, f: FacePair):
    """The inequality of the build H-description supporting a facet (reduced form)."""
    n, r = rp.rank, rp.r
    if not f.I:
        for a, b in rp.box.inequalities:
            if all(dot(a, v) == b for v in f.A.vertices):
                return _reduce(tuple(a) + (0,) * r, b, n)
        raise ValueError("no box inequality supports the face")
    (p,) = f.I
    k = rp.points.index(p)
    s, c = rp.psi(p).piece_at(f.A.barycenter())
    e = [0] * r
    e[k] = -1
    return _reduce(tuple(s) + tuple(e), -c, n)
