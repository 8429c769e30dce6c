"""Boxes, conjugates, divisorial polytopes, sections and positivity decisions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Mapping, Sequence

from .geom import PolyComplex, Polyhedron, PWAConcave, conjugate_from_points, lattice_points
from .geom.linalg import as_vec, dot, is_integral
from .model import (GENERIC, CartierSupportFunction, CurveBase, FansyDivisor, FixedPoint,
                    SemiInvariant, contraction_data, fixed_points, fmt, fmt_vec)


class GenusRefused(ValueError):
    """Exact section computations need a rational base curve."""


# ---------------------------------------------------------------------------
# divisorial polytopes


class DivisorialPolytope:
    """A box with concave piecewise affine ``Psi_P`` on it (zero where absent)."""

    def __init__(self, box: Polyhedron, psi: Mapping[str, PWAConcave], base: CurveBase | None = None):
        self.box = box
        for p, f in psi.items():
            if f.domain != box:
                raise ValueError(f"Psi over {p} lives on a different box")
        named = [p for p in psi if p != GENERIC]
        if base is None:
            base = CurveBase.rational(named)
        else:
            missing = [p for p in named if p not in base.points]
            if missing:
                base = base.with_points(missing)
        self.base = base
        # a ``GENERIC`` entry stands for one extra general point of the curve
        self.psi = {p: psi[p] for p in base.points + (GENERIC,) if p in psi}

    def __repr__(self) -> str:
        return f"DivisorialPolytope(box={self.box}, points={list(self.psi)})"

    @property
    def ambient(self) -> int:
        return self.box.ambient

    @property
    def points(self) -> tuple[str, ...]:
        return self.base.points + ((GENERIC,) if GENERIC in self.psi else ())

    def psi_of(self, p: str) -> PWAConcave:
        f = self.psi.get(p)
        return f if f is not None else PWAConcave.zero(self.ambient, self.box)

    def value(self, u: Sequence) -> dict[str, Fraction]:
        u = as_vec(u)
        return {p: self.psi_of(p)(u) for p in self.points}

    def deg(self, u: Sequence) -> Fraction:
        return sum(self.value(u).values(), Fraction(0))

    def floor_deg(self, u: Sequence) -> int:
        return sum(floor(c) for c in self.value(u).values())

    def dilate(self, m: int) -> "DivisorialPolytope":
        return DivisorialPolytope(self.box.dilate(m), {p: f.dilate(m) for p, f in self.psi.items()},
                                  self.base)

    def nontrivial(self) -> list[str]:
        z = PWAConcave.zero(self.ambient, self.box)
        return [p for p, f in self.psi.items() if not f.same_function(z)]

    def problems(self) -> list[str]:
        """Violated divisorial-polytope conditions (empty when valid)."""
        out = []
        box = self.box
        if box.is_empty or not box.is_full_dimensional:
            return ["box is not a full-dimensional polytope"]
        if not box.is_bounded:
            return ["box is unbounded"]
        if not all(is_integral(v) for v in box.vertices):
            out.append("box is not a lattice polytope")
        for p, f in self.psi.items():
            for x, y in f.graph_vertices():
                if not (is_integral(x) and y.denominator == 1):
                    out.append(f"graph of Psi over {p} has the non-integral vertex {fmt_vec(x)} -> {fmt(y)}")
                    break
        for v in box.vertices:
            d = self.deg(v)
            if d < 0:
                out.append(f"deg Psi({fmt_vec(v)}) = {fmt(d)} < 0")
        if self.deg(box.barycenter()) <= 0:
            out.append("deg Psi vanishes on the interior of the box")
        return out

    def is_valid(self) -> bool:
        return not self.problems()


def box_of(h: CartierSupportFunction) -> Polyhedron:
    """``{u : <rho, u> >= h_lin(rho) for every ray rho of the fan}``."""
    fd = h.fd
    ineqs = [(r, h.lin(r)) for r in fd.fan.rays()]
    return Polyhedron.from_inequalities(ineqs, (), fd.rank)


@lru_cache(maxsize=64)
def dual(h: CartierSupportFunction) -> DivisorialPolytope:
    """Conjugates ``h_P^*(u) = min_v (<v,u> - h_P(v))`` over slice vertices, on the box.

    Cached: support functions are immutable and the witness pipeline asks often.
    """
    fd = h.fd
    box = box_of(h)
    psi = {}
    for p in fd.points:
        pts = [(v, h.value(p, v)) for v in fd.slice(p).vertices()]
        psi[p] = conjugate_from_points(pts, box, fd.rank)
    return DivisorialPolytope(box, psi, fd.base)


def normal_fan(box: Polyhedron) -> dict[tuple, Polyhedron]:
    """Vertex -> inner normal cone ``{v : <v,u> <= <v,u'> for all vertices u'}``."""
    n = box.ambient
    out = {}
    for u in box.vertices:
        cons = [(tuple(a - b for a, b in zip(w, u)), 0) for w in box.vertices if w != u]
        out[u] = Polyhedron.from_inequalities(cons, (), n)
    return out


def to_support(dp: DivisorialPolytope, base: CurveBase | None = None
               ) -> tuple[FansyDivisor, CartierSupportFunction]:
    """Fansy divisor and support function with ``dual(h) == dp``."""
    probs = dp.problems()
    if probs:
        raise ValueError("invalid divisorial polytope: " + "; ".join(probs))
    n = dp.ambient
    base = base.with_points(dp.base.points) if base is not None else dp.base
    cones = normal_fan(dp.box)
    fan = PolyComplex(cones.values(), n)
    by_cone = {c: u for u, c in cones.items()}
    linear = [tuple(int(x) for x in by_cone[c]) for c in fan.cells]
    slices: dict[str, PolyComplex] = {}
    cells: dict[str, list] = {}
    for p in base.points:
        f = dp.psi_of(p)
        gv = f.graph_vertices()
        hp = PWAConcave([(x, -y) for x, y in gv], None, n)
        regions = {reg: piece for reg, piece in hp.cells()}
        sl = PolyComplex(regions.keys(), n)
        slices[p] = sl
        cells[p] = [(tuple(int(x) for x in regions[c][0]), int(regions[c][1])) for c in sl.cells]
    fd0 = FansyDivisor(base, {p: s for p, s in slices.items() if s != fan}, fan, ())
    marked = set()
    for u, sigma in cones.items():
        if dp.deg(u) == 0:
            marked.add(sigma)
    for sigma in list(marked):
        deg = fd0.deg_slice(sigma)
        for tau in sigma.faces():
            if tau != sigma and not deg.intersection(tau).is_empty:
                marked.add(tau)
    fd = FansyDivisor(base, {p: s for p, s in slices.items() if s != fan}, fan, marked)
    return fd, CartierSupportFunction(fd, linear, cells)


# ---------------------------------------------------------------------------
# sections


@dataclass(frozen=True)
class SectionSpace:
    u: tuple[int, ...]
    in_box: bool
    divisor: tuple[tuple[str, int], ...]  # floor(h^*(u)) over the listed points
    degree: int | None
    dimension: int | None  # None when only degree information is available
    genus: int = 0

    def contains(self, s: SemiInvariant, h: CartierSupportFunction) -> bool:
        """``f chi^u`` is a section iff ``u`` in the box and ``-ord_P f <= h_P^*(u)``."""
        if tuple(s.u) != tuple(self.u) or not self.in_box:
            return False
        dp = dual(h)
        return all(-s.ord(p) <= dp.psi_of(p)(self.u) for p in dp.points)


def sections(h: CartierSupportFunction, u: Sequence[int]) -> SectionSpace:
    u = tuple(int(x) for x in u)
    dp = dual(h)
    g = dp.base.genus
    if not dp.box.contains(u):
        return SectionSpace(u, False, (), None, 0, g)
    div = tuple((p, floor(c)) for p, c in dp.value(u).items())
    deg = sum(c for _, c in div)
    if g > 0:
        return SectionSpace(u, True, div, deg, None, g)
    return SectionSpace(u, True, div, deg, max(deg + 1, 0), g)


# ---------------------------------------------------------------------------
# concavity


def _concavity_issues(h: CartierSupportFunction, p: str, strict: bool) -> list[str]:
    fd = h.fd
    sl = fd.slice(p)
    data = h.data(p)
    out = []
    for j, cell in enumerate(sl.cells):
        uj, aj = data[j]
        for i, (ui, ai) in enumerate(data):
            if i == j:
                continue
            # piece i must dominate piece j on cell j
            for v in cell.vertices:
                if dot(ui, v) + ai < dot(uj, v) + aj:
                    out.append(f"over {p}: not concave (piece of cell {i} below cell {j} at {fmt_vec(v)})")
                    break
            else:
                for r in cell.rays:
                    if dot(ui, r) < dot(uj, r):
                        out.append(f"over {p}: not concave (piece of cell {i} below cell {j} along {fmt_vec(r)})")
                        break
    if strict:
        for i in range(len(sl.cells)):
            for j in range(i + 1, len(sl.cells)):
                shared = sl.cells[i].intersection(sl.cells[j])
                if shared.dim == fd.rank - 1 and data[i] == data[j]:
                    out.append(f"over {p}: cells {i} and {j} share a facet and the same affine function")
    return out


def _all_concavity(h: CartierSupportFunction, strict: bool) -> list[str]:
    out = []
    for p in list(h.fd.points) + [GENERIC]:
        out += _concavity_issues(h, p, strict)
    return out


@dataclass
class AmpleReport:
    ok: bool
    status: str
    diagnostics: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def is_ample(h: CartierSupportFunction) -> AmpleReport:
    fd = h.fd
    diag = _all_concavity(h, strict=True)
    dp = dual(h)
    diag += dp.problems()
    if not diag:
        zero_vertices = {v for v in dp.box.vertices if dp.deg(v) == 0}
        slopes = {c: as_vec(u) for c, u in zip(fd.fan.cells, h.linear)}
        marked_max = {c for c in fd.marking if c.dim == fd.rank}
        for c, u in slopes.items():
            if u not in dp.box.vertices:
                diag.append(f"slope {fmt_vec(u)} of cone {c} is not a vertex of the box")
            elif (u in zero_vertices) != (c in marked_max):
                state = "vanishes" if u in zero_vertices else "is positive"
                diag.append(f"deg h^* {state} at box vertex {fmt_vec(u)} but the cone is "
                            f"{'un' if c not in marked_max else ''}marked")
    if diag:
        return AmpleReport(False, "not ample", diag)
    if fd.base.genus > 0:
        return AmpleReport(True, "ample-modulo-principality",
                           ["principality of h^* at degree-zero vertices is not decided for genus > 0"])
    return AmpleReport(True, "ample", [])


@dataclass
class NefReport:
    ok: bool
    diagnostics: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def nef_certificate(h: CartierSupportFunction) -> NefReport:
    """Concavity of every ``h_P`` and ``deg h^*(u) >= 0`` on the lattice points of the box."""
    diag = _all_concavity(h, strict=False)
    dp = dual(h)
    if dp.box.is_empty:
        diag.append("box is empty")
    else:
        for u in lattice_points(dp.box):
            d = dp.deg(u)
            if d < 0:
                diag.append(f"deg h^*({fmt_vec(u)}) = {fmt(d)} < 0")
                break
    return NefReport(not diag, diag)


# ---------------------------------------------------------------------------
# basepoints


@dataclass(frozen=True)
class BasepointCheck:
    point: FixedPoint
    u: tuple[int, ...]
    in_box: bool
    exact_order: bool
    obstruction: int | None  # -a + sum_{Q != P} floor h_Q^*(u); for contraction points the deg
    is_basepoint: bool


@dataclass
class BasepointReport:
    free: bool
    checks: list[BasepointCheck]

    @property
    def basepoints(self) -> list[BasepointCheck]:
        return [c for c in self.checks if c.is_basepoint]

    def __bool__(self) -> bool:
        return self.free


def check_fixed_point(h: CartierSupportFunction, dp: DivisorialPolytope, x: FixedPoint) -> BasepointCheck:
    if x.kind == "contraction":
        u, tup = contraction_data(h, x)
        inb = dp.box.contains(u)
        exact = inb and all(dp.psi_of(p)(u) == -a for p, a in tup.items()) and sum(tup.values()) == 0
        obstruction = dp.floor_deg(u) if inb else None
        return BasepointCheck(x, u, inb, exact, obstruction, not exact)
    u, a = h.data(x.point)[x.cell]
    inb = dp.box.contains(u)
    if not inb:
        return BasepointCheck(x, u, False, False, None, True)
    vals = dp.value(u)
    own = Fraction(0) if x.point == GENERIC else vals[x.point]
    exact = own == -a
    rest = sum(floor(c) for p, c in vals.items() if p != x.point)
    obstruction = -a + rest
    return BasepointCheck(x, u, True, exact, obstruction, not (exact and obstruction >= 0))


def basepoint_free(h: CartierSupportFunction) -> BasepointReport:
    """Decide freeness of ``D_h`` by testing every torus fixed point."""
    fd = h.fd
    if fd.base.genus > 0:
        raise GenusRefused("basepoint decisions need genus 0")
    nef = nef_certificate(h)
    if not nef.ok:
        raise ValueError("refused: support function is not nef-certified (" + nef.diagnostics[0] + ")")
    dp = dual(h)
    checks = [check_fixed_point(h, dp, x) for x in fixed_points(fd)]
    return BasepointReport(not any(c.is_basepoint for c in checks), checks)


__all__ = [
    "DivisorialPolytope", "box_of", "dual", "normal_fan", "to_support", "SectionSpace", "sections",
    "AmpleReport", "is_ample", "NefReport", "nef_certificate", "BasepointCheck", "BasepointReport",
    "check_fixed_point", "basepoint_free", "GenusRefused",
]
