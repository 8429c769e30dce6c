"""Fansy divisors, markings, fixed points, Weil and Cartier divisors.

Points of the base curve are string labels.  The symbolic label ``"*"``
stands for a general point, whose slice is the recession fan.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .geom import ComplexError, PolyComplex, Polyhedron, minkowski_sum, recession_fan
from .geom.linalg import as_vec, dot, primitive_multiple, solve

GENERIC = "*"


class NotCartier(ValueError):
    """A Weil divisor that no Cartier support function represents."""


def mu(v: Sequence) -> int:
    """Smallest positive integer taking ``v`` into the lattice."""
    return primitive_multiple(v)[0]


def fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vec(v) -> str:
    return "(" + ",".join(fmt(c) for c in v) + ")"


# ---------------------------------------------------------------------------
# base curve


@dataclass(frozen=True)
class CurveBase:
    """Genus, labelled special points and a canonical divisor ``sum a_P P``."""

    genus: int
    points: tuple[str, ...]
    canonical: tuple[tuple[str, int], ...] = ()
    coords: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        if len(set(self.points)) != len(self.points):
            raise ValueError("duplicate point labels")
        if GENERIC in self.points:
            raise ValueError(f"{GENERIC!r} is reserved for the general point")
        labels = set(self.points)
        for p, _ in self.canonical:
            if p not in labels:
                raise ValueError(f"canonical divisor supported at unknown point {p}")
        if sum(a for _, a in self.canonical) != 2 * self.genus - 2:
            raise ValueError("canonical coefficients must sum to 2g - 2")

    @classmethod
    def rational(cls, points: Iterable[str], canonical: Mapping[str, int] | None = None,
                 coords: Mapping[str, str] | None = None) -> "CurveBase":
        """P^1 with the given points; K_Y defaults to -2 times the last point."""
        pts = tuple(points)
        if canonical is None:
            if not pts:
                raise ValueError("a default canonical divisor needs at least one point")
            canonical = {pts[-1]: -2}
        canon = tuple((p, int(canonical[p])) for p in pts if canonical.get(p, 0))
        return cls(0, pts, canon, tuple(sorted((coords or {}).items())))

    def a(self, p: str) -> int:
        return dict(self.canonical).get(p, 0)

    def b(self, p: str) -> int:
        return self.a(p) + 1

    def with_points(self, extra: Iterable[str]) -> "CurveBase":
        pts = self.points + tuple(p for p in extra if p not in self.points)
        return CurveBase(self.genus, pts, self.canonical, self.coords)


# ---------------------------------------------------------------------------
# fansy divisors


class FansyDivisor:
    """Slices ``S_P`` over the special points, recession fan and marking."""

    def __init__(self, base: CurveBase, slices: Mapping[str, PolyComplex],
                 fan: PolyComplex | None = None, marking: Iterable[Polyhedron] = ()):
        self.base = base
        for p in slices:
            if p not in base.points:
                raise ValueError(f"slice given for unknown point {p}")
        if fan is None:
            if not slices:
                raise ValueError("recession fan required when no slice is given")
            fan = recession_fan(next(iter(slices.values())))
        self.fan = fan
        self.rank = fan.ambient
        self._slices = {p: slices.get(p, fan) for p in base.points}
        self.marking = frozenset(marking)

    def __repr__(self) -> str:
        return f"FansyDivisor(rank={self.rank}, points={list(self.base.points)}, marked={len(self.marking)})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, FansyDivisor) and self.base == other.base and self.fan == other.fan
                and self._slices == other._slices and self.marking == other.marking)

    def __hash__(self) -> int:
        return hash((self.base, self.fan, self.marking))

    @property
    def points(self) -> tuple[str, ...]:
        return self.base.points

    def slice(self, p: str) -> PolyComplex:
        if p == GENERIC:
            return self.fan
        return self._slices.get(p, self.fan)

    def stored(self) -> list[str]:
        """Points whose slice differs from the recession fan."""
        return [p for p in self.points if self._slices[p] != self.fan]

    def is_marked(self, cone: Polyhedron) -> bool:
        return cone in self.marking

    def unmarked_rays(self) -> list[tuple[int, ...]]:
        return [r for r in self.fan.rays() if Polyhedron.cone([r], self.rank) not in self.marking]

    def maximal_marked(self) -> list[Polyhedron]:
        ms = sorted(self.marking, key=lambda c: (-c.dim, c.vertices, c.rays))
        out = []
        for c in ms:
            if not any(c != d and c.is_face_of(d) for d in self.marking):
                out.append(c)
        return sorted(out)

    def cell_over(self, p: str, sigma: Polyhedron) -> int:
        """Index of the cell of ``S_P`` whose recession cone is the full cone ``sigma``."""
        sl = self.slice(p)
        for i, c in enumerate(sl.cells):
            if c.recession_cone() == sigma:
                return i
        raise ValueError(f"no cell of the slice over {p} has tail {sigma}")

    def deg_slice(self, sigma: Polyhedron) -> Polyhedron:
        """``deg S^sigma``: Minkowski sum of the cells with tail ``sigma``."""
        parts = [self.slice(p).cells[self.cell_over(p, sigma)] for p in self.points]
        parts.append(sigma)
        return minkowski_sum(parts)

    def vertices(self) -> list[tuple[str, tuple]]:
        return [(p, v) for p in self.points for v in self.slice(p).vertices()]

    def with_points(self, extra: Iterable[str]) -> "FansyDivisor":
        base = self.base.with_points(extra)
        return FansyDivisor(base, {p: self._slices[p] for p in self.stored()}, self.fan, self.marking)

    def with_canonical(self, canonical: Mapping[str, int]) -> "FansyDivisor":
        base = CurveBase(self.base.genus, self.base.points,
                         tuple((p, int(canonical[p])) for p in self.points if canonical.get(p, 0)),
                         self.base.coords)
        return FansyDivisor(base, {p: self._slices[p] for p in self.stored()}, self.fan, self.marking)


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def cone_name(c: Polyhedron) -> str:
    """``cone(r1, r2, ...)`` by rays, or ``{0}`` for the zero cone."""
    if not c.rays:
        return "{0}"
    return "cone(" + ", ".join(fmt_vec(r) for r in sorted(c.rays)) + ")"


def validate(fd: FansyDivisor) -> ValidationReport:
    """Structural checks on slices, tails and the marking conditions (1)-(3)."""
    bad: list[str] = []
    notes: list[str] = []
    try:
        fd.fan.check(complete=True)
        if not fd.fan.is_fan():
            bad.append("recession fan has a cell that is not a cone")
    except ComplexError as exc:
        bad.append(f"recession fan: {exc}")
    for p in fd.points:
        sl = fd.slice(p)
        if sl.ambient != fd.rank:
            bad.append(f"slice over {p}: rank {sl.ambient} differs from {fd.rank}")
            continue
        try:
            sl.check(complete=True)
        except ComplexError as exc:
            bad.append(f"slice over {p}: {exc}")
            continue
        try:
            if recession_fan(sl) != fd.fan:
                bad.append(f"slice over {p}: recession fan differs from the common fan")
        except ComplexError as exc:
            bad.append(f"slice over {p}: {exc}")
    if bad:
        return ValidationReport(False, bad, notes)
    cones = set(fd.fan.faces())
    for c in sorted(fd.marking):
        if c not in cones:
            bad.append(f"marked cone {cone_name(c)} is not a cone of the fan")
    if bad:
        return ValidationReport(False, bad, notes)
    # (1) upward closure
    for tau in sorted(fd.marking):
        for sigma in sorted(cones):
            if sigma != tau and tau.is_face_of(sigma) and sigma not in fd.marking:
                bad.append(f"marking condition (1): {cone_name(tau)} marked but {cone_name(sigma)} is not")
    # (2) and (3) for marked full-dimensional cones
    for sigma in sorted(c for c in fd.marking if c.dim == fd.rank):
        deg = fd.deg_slice(sigma)
        inside = all(sigma.contains(v) for v in deg.vertices) and all(sigma.contains(r) for r in deg.rays)
        if not inside or deg == sigma:
            bad.append(f"marking condition (2): deg S^sigma is not a proper subset of sigma = {cone_name(sigma)}")
            continue
        for tau in sigma.faces():
            if tau == sigma or tau.is_empty:
                continue
            meets = not deg.intersection(tau).is_empty
            if meets != (tau in fd.marking):
                bad.append(f"marking condition (3): face {cone_name(tau)} of {cone_name(sigma)}: "
                           f"{'meets' if meets else 'misses'} deg S^sigma but is "
                           f"{'un' if meets else ''}marked")
    if fd.base.genus > 0:
        notes.append("genus > 0: the extra marking condition for higher genus is not checked")
    return ValidationReport(not bad, bad, notes)


# ---------------------------------------------------------------------------
# fixed points


@dataclass(frozen=True)
class FixedPoint:
    """A torus fixed point.

    ``kind`` is ``"contraction"`` (``cone`` is a maximal marked cone) or
    ``"free"`` (``point`` and ``cell`` index a maximal cell of ``S_P``; for the
    general point ``cell`` indexes a cone of the fan).
    """

    kind: str
    point: str | None = None
    cell: int | None = None
    cone: Polyhedron | None = None

    def label(self, fd: FansyDivisor | None = None) -> str:
        if self.kind == "contraction":
            return f"contraction[{','.join(fmt_vec(r) for r in self.cone.rays)}]"
        if fd is not None:
            c = fd.slice(self.point).cells[self.cell]
            tag = ",".join(fmt_vec(v) for v in c.vertices)
            return f"{self.point}:{self.cell}[{tag}]"
        return f"{self.point}:{self.cell}"


def fixed_points(fd: FansyDivisor) -> list[FixedPoint]:
    """Contraction fixed points first, then cells over each point, general point last."""
    out = [FixedPoint("contraction", cone=c) for c in fd.maximal_marked()]
    for p in list(fd.points) + [GENERIC]:
        for i, c in enumerate(fd.slice(p).cells):
            if c.dim == fd.rank and c.recession_cone() not in fd.marking:
                out.append(FixedPoint("free", p, i))
    return out


# ---------------------------------------------------------------------------
# divisors


class WeilDivisor:
    """Rational combination of vertical ``D_{P,v}`` and horizontal ``D_rho``."""

    def __init__(self, vertical: Mapping[tuple[str, Sequence], object] | None = None,
                 horizontal: Mapping[Sequence, object] | None = None):
        self.vertical = {(p, as_vec(v)): Fraction(c) for (p, v), c in (vertical or {}).items()
                         if Fraction(c) != 0}
        self.horizontal = {tuple(int(x) for x in r): Fraction(c) for r, c in (horizontal or {}).items()
                           if Fraction(c) != 0}

    def __repr__(self) -> str:
        return f"WeilDivisor({len(self.vertical)} vertical, {len(self.horizontal)} horizontal)"

    def __eq__(self, other) -> bool:
        return (isinstance(other, WeilDivisor) and self.vertical == other.vertical
                and self.horizontal == other.horizontal)

    def __add__(self, other: "WeilDivisor") -> "WeilDivisor":
        v = dict(self.vertical)
        for k, c in other.vertical.items():
            v[k] = v.get(k, 0) + c
        h = dict(self.horizontal)
        for k, c in other.horizontal.items():
            h[k] = h.get(k, 0) + c
        return WeilDivisor(v, h)

    def __rmul__(self, m) -> "WeilDivisor":
        m = Fraction(m)
        return WeilDivisor({k: m * c for k, c in self.vertical.items()},
                           {k: m * c for k, c in self.horizontal.items()})

    def __neg__(self) -> "WeilDivisor":
        return (-1) * self

    def __sub__(self, other: "WeilDivisor") -> "WeilDivisor":
        return self + (-other)

    def vcoeff(self, p: str, v: Sequence) -> Fraction:
        return self.vertical.get((p, as_vec(v)), Fraction(0))

    def hcoeff(self, rho: Sequence) -> Fraction:
        return self.horizontal.get(tuple(int(x) for x in rho), Fraction(0))

    def is_zero(self) -> bool:
        return not self.vertical and not self.horizontal

    def check_keys(self, fd: FansyDivisor) -> None:
        verts = {(p, v) for p, v in fd.vertices()}
        for k in self.vertical:
            if k not in verts:
                raise ValueError(f"no vertex {fmt_vec(k[1])} in the slice over {k[0]}")
        rays = set(fd.unmarked_rays())
        for r in self.horizontal:
            if r not in rays:
                raise ValueError(f"{fmt_vec(r)} is not an unmarked ray of the fan")


@dataclass(frozen=True)
class SemiInvariant:
    """``f chi^u`` with ``f`` recorded by its divisor ``sum ord_P f P``."""

    u: tuple[int, ...]
    fdiv: tuple[tuple[str, int], ...] = ()

    @classmethod
    def make(cls, u: Sequence[int], fdiv: Mapping[str, int] | None = None) -> "SemiInvariant":
        items = tuple(sorted((p, int(c)) for p, c in (fdiv or {}).items() if c))
        return cls(tuple(int(x) for x in u), items)

    def ord(self, p: str) -> int:
        return dict(self.fdiv).get(p, 0)

    def __mul__(self, other: "SemiInvariant") -> "SemiInvariant":
        d = dict(self.fdiv)
        for p, c in other.fdiv:
            d[p] = d.get(p, 0) + c
        return SemiInvariant.make(tuple(a + b for a, b in zip(self.u, other.u)), d)

    def degree(self) -> int:
        return sum(c for _, c in self.fdiv)


def principal_divisor(s: SemiInvariant, fd: FansyDivisor) -> WeilDivisor:
    for p, _ in s.fdiv:
        if p not in fd.points:
            raise ValueError(f"f has a zero or pole at {p}, which is not a listed point")
    hor = {r: dot(r, s.u) for r in fd.unmarked_rays()}
    ver = {(p, v): mu(v) * (dot(s.u, v) + s.ord(p)) for p, v in fd.vertices()}
    return WeilDivisor(ver, hor)


def canonical_weil(fd: FansyDivisor) -> WeilDivisor:
    """``-sum D_rho + sum (mu(v) b_P - 1) D_{P,v}``."""
    hor = {r: -1 for r in fd.unmarked_rays()}
    ver = {(p, v): mu(v) * fd.base.b(p) - 1 for p, v in fd.vertices()}
    return WeilDivisor(ver, hor)


# ---------------------------------------------------------------------------
# Cartier support functions


Affine = tuple  # (u: tuple[int, ...], a: int)


class CartierSupportFunction:
    """Piecewise affine data ``(u, a)`` per maximal cell of every slice.

    ``linear[i]`` is the slope on ``fd.fan.cells[i]``; ``cells[P][j]`` is the
    affine function on ``fd.slice(P).cells[j]``.  Points without an entry use
    ``(u_sigma, 0)`` on the fan.
    """

    def __init__(self, fd: FansyDivisor, linear: Sequence[Sequence[int]],
                 cells: Mapping[str, Sequence[tuple[Sequence[int], int]]] | None = None):
        self.fd = fd
        self.linear: tuple[tuple[int, ...], ...] = tuple(tuple(int(x) for x in u) for u in linear)
        if len(self.linear) != len(fd.fan.cells):
            raise ValueError("one linear slope per maximal cone is required")
        data = {}
        for p in fd.points:
            if cells is not None and p in cells:
                rows = tuple((tuple(int(x) for x in u), int(a)) for u, a in cells[p])
                if len(rows) != len(fd.slice(p).cells):
                    raise ValueError(f"support data over {p} does not match the slice")
                data[p] = rows
            else:
                if fd.slice(p) != fd.fan:
                    raise ValueError(f"support data missing over {p}")
                data[p] = tuple((u, 0) for u in self.linear)
        if cells is not None:
            for p in cells:
                if p not in fd.points:
                    raise ValueError(f"support data for unknown point {p}")
        self.cells = data

    def __repr__(self) -> str:
        return f"CartierSupportFunction({self.fd!r})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, CartierSupportFunction) and self.fd == other.fd
                and self.linear == other.linear and self.cells == other.cells)

    def __hash__(self) -> int:
        return hash((self.linear, tuple(sorted(self.cells.items()))))

    def data(self, p: str) -> tuple[Affine, ...]:
        if p == GENERIC:
            return tuple((u, 0) for u in self.linear)
        return self.cells[p]

    def value(self, p: str, v: Sequence) -> Fraction:
        v = as_vec(v)
        sl = self.fd.slice(p)
        for (u, a), c in zip(self.data(p), sl.cells):
            if c.contains(v):
                return dot(u, v) + a
        raise ValueError(f"{fmt_vec(v)} not covered by the slice over {p}")

    def lin(self, v: Sequence) -> Fraction:
        v = as_vec(v)
        for u, c in zip(self.linear, self.fd.fan.cells):
            if c.contains(v):
                return dot(u, v)
        raise ValueError(f"{fmt_vec(v)} not covered by the fan")

    def scale(self, m: int) -> "CartierSupportFunction":
        m = int(m)
        return CartierSupportFunction(
            self.fd, [tuple(m * x for x in u) for u in self.linear],
            {p: [(tuple(m * x for x in u), m * a) for u, a in rows] for p, rows in self.cells.items()})

    def __add__(self, other: "CartierSupportFunction") -> "CartierSupportFunction":
        if other.fd != self.fd:
            raise ValueError("support functions on different fansy divisors")
        lin = [tuple(a + b for a, b in zip(u, w)) for u, w in zip(self.linear, other.linear)]
        cells = {}
        for p in self.fd.points:
            cells[p] = [(tuple(a + b for a, b in zip(u, w)), x + y)
                        for (u, x), (w, y) in zip(self.cells[p], other.cells[p])]
        return CartierSupportFunction(self.fd, lin, cells)

    def __neg__(self) -> "CartierSupportFunction":
        return CartierSupportFunction(
            self.fd, [tuple(-x for x in u) for u in self.linear],
            {p: [(tuple(-x for x in u), -a) for u, a in rows] for p, rows in self.cells.items()})

    def twist(self, s: SemiInvariant) -> "CartierSupportFunction":
        """Support function of ``D_h + div(f chi^u)``."""
        lin = [tuple(a - b for a, b in zip(u, s.u)) for u in self.linear]
        cells = {p: [(tuple(a - b for a, b in zip(u, s.u)), x - s.ord(p)) for u, x in rows]
                 for p, rows in self.cells.items()}
        return CartierSupportFunction(self.fd, lin, cells)

    @classmethod
    def zero(cls, fd: FansyDivisor) -> "CartierSupportFunction":
        z = (0,) * fd.rank
        return cls(fd, [z] * len(fd.fan.cells),
                   {p: [(z, 0)] * len(fd.slice(p).cells) for p in fd.points})


def multiple(h: CartierSupportFunction, m: int) -> CartierSupportFunction:
    if int(m) < 1:
        raise ValueError("multiple needs m >= 1")
    return h.scale(m)


def support_to_weil(h: CartierSupportFunction, fd: FansyDivisor | None = None) -> WeilDivisor:
    """``-sum h_lin(rho) D_rho - sum mu(v) h_P(v) D_{P,v}``."""
    fd = fd or h.fd
    hor = {r: -h.lin(r) for r in fd.unmarked_rays()}
    ver = {(p, v): -mu(v) * h.value(p, v) for p, v in fd.vertices()}
    return WeilDivisor(ver, hor)


def _integral_affine(x, n, where) -> Affine:
    if any(c.denominator != 1 for c in x):
        raise NotCartier(f"{where}: solution {fmt_vec(x)} is not integral")
    return tuple(int(c) for c in x[:n]), int(x[n])


def weil_to_support(D: WeilDivisor, fd: FansyDivisor) -> CartierSupportFunction:
    """Recover ``h`` with ``D_h = D``; raises :class:`NotCartier` otherwise."""
    D.check_keys(fd)
    n = fd.rank
    fan = fd.fan
    unmarked = set(fd.unmarked_rays())

    def target(p, v):
        return -D.vcoeff(p, v) / mu(v)

    # slopes on the maximal cones
    linear: list[tuple[int, ...]] = []
    joint: dict[int, dict[str, int]] = {}
    for i, sigma in enumerate(fan.cells):
        if sigma not in fd.marking:
            rows = [tuple(r) for r in sigma.rays]
            rhs = [-D.hcoeff(r) for r in sigma.rays]
            res = solve(rows, rhs, n)
            where = f"cone {i} {sigma}"
            if res is None:
                raise NotCartier(f"{where}: ray coefficients are not linear")
            x, ker = res
            if ker:
                raise NotCartier(f"{where}: slope underdetermined")
            if any(c.denominator != 1 for c in x):
                raise NotCartier(f"{where}: slope {fmt_vec(x)} is not integral")
            linear.append(tuple(int(c) for c in x))
            continue
        # marked full cone: one slope, a principal tuple (a_P)
        pts = list(fd.points)
        k = len(pts)
        rows, rhs = [], []
        for j, p in enumerate(pts):
            cell = fd.slice(p).cells[fd.cell_over(p, sigma)]
            for v in cell.vertices:
                row = list(v) + [0] * k
                row[n + j] = 1
                rows.append(row)
                rhs.append(target(p, v))
        for r in sigma.rays:
            if r in unmarked:
                rows.append(list(r) + [0] * k)
                rhs.append(-D.hcoeff(r))
        if fd.base.genus == 0:
            rows.append([0] * n + [1] * k)
            rhs.append(0)
        where = f"marked cone {i} {sigma}"
        res = solve(rows, rhs, n + k)
        if res is None:
            raise NotCartier(f"{where}: no common slope with a principal tuple")
        x, ker = res
        if ker:
            raise NotCartier(f"{where}: local generator underdetermined")
        if any(c.denominator != 1 for c in x):
            raise NotCartier(f"{where}: local generator {fmt_vec(x)} is not integral")
        linear.append(tuple(int(c) for c in x[:n]))
        joint[i] = {p: int(x[n + j]) for j, p in enumerate(pts)}

    # h_lin must be well defined on every ray
    ray_val: dict[tuple[int, ...], Fraction] = {}
    for u, sigma in zip(linear, fan.cells):
        for r in sigma.rays:
            val = dot(u, r)
            if ray_val.setdefault(r, val) != val:
                raise NotCartier(f"linear part is not continuous across the ray {fmt_vec(r)}")

    cells: dict[str, list[Affine]] = {}
    for p in fd.points:
        sl = fd.slice(p)
        rows_p = []
        for j, cell in enumerate(sl.cells):
            where = f"cell {j} over {p}"
            tail = cell.recession_cone()
            if tail.dim == n and tail in fd.marking:
                i = fan.cell_index(tail)
                rows_p.append((linear[i], joint[i][p]))
                continue
            rows = [list(v) + [1] for v in cell.vertices]
            rhs = [target(p, v) for v in cell.vertices]
            rows += [list(r) + [0] for r in cell.rays]
            rhs += [ray_val[r] for r in cell.rays]
            res = solve(rows, rhs, n + 1)
            if res is None:
                raise NotCartier(f"{where}: coefficients are not affine on the cell")
            x, ker = res
            if ker:
                raise NotCartier(f"{where}: affine function underdetermined")
            rows_p.append(_integral_affine(x, n, where))
        cells[p] = rows_p
    try:
        h = CartierSupportFunction(fd, linear, cells)
    except ValueError as exc:  # pragma: no cover - shapes are built above
        raise NotCartier(str(exc)) from exc
    # continuity and the round trip
    for p in fd.points:
        for v in fd.slice(p).vertices():
            vals = {dot(u, v) + a for (u, a), c in zip(h.data(p), fd.slice(p).cells) if c.contains(v)}
            if len(vals) > 1:
                raise NotCartier(f"not continuous at vertex {fmt_vec(v)} over {p}")
    if support_to_weil(h, fd) != D:
        raise NotCartier("round trip through the support function does not reproduce the divisor")
    return h


def is_cartier(D: WeilDivisor, fd: FansyDivisor) -> bool:
    try:
        weil_to_support(D, fd)
    except NotCartier:
        return False
    return True


@dataclass
class GorensteinReport:
    ok: bool
    canonical: CartierSupportFunction | None
    generators: dict = field(default_factory=dict)  # FixedPoint -> GorensteinData
    failures: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def is_gorenstein(fd: FansyDivisor) -> GorensteinReport:
    """K_X Cartier, and an integral Gorenstein generator at every free fixed point."""
    from .local import NotGorenstein, cell_cone, gorenstein_generator

    failures: list[str] = []
    try:
        k = weil_to_support(canonical_weil(fd), fd)
    except NotCartier as exc:
        k = None
        failures.append(f"canonical divisor is not Cartier: {exc}")
    gens = {}
    for x in fixed_points(fd):
        if x.kind != "free":
            continue
        cell = fd.slice(x.point).cells[x.cell]
        try:
            gens[x] = gorenstein_generator(cell_cone(cell))
        except NotGorenstein as exc:
            failures.append(f"fixed point {x.label(fd)}: {exc}")
    return GorensteinReport(not failures, k, gens, failures)


def fixed_point_data(h: CartierSupportFunction, x: FixedPoint) -> Affine:
    """``(u, a)`` of ``h`` on the cell of a contraction-free fixed point."""
    if x.kind != "free":
        raise ValueError("contraction fixed points carry a tuple, not a single a")
    return h.data(x.point)[x.cell]


def contraction_data(h: CartierSupportFunction, x: FixedPoint) -> tuple[tuple[int, ...], dict[str, int]]:
    fd = h.fd
    sigma = x.cone
    if sigma.dim != fd.rank:
        raise ValueError("contraction fixed point without a full-dimensional cone")
    u = h.linear[fd.fan.cell_index(sigma)]
    tup = {p: h.data(p)[fd.cell_over(p, sigma)][1] for p in fd.points}
    return u, tup


__all__ = [
    "GENERIC", "CurveBase", "FansyDivisor", "ValidationReport", "validate", "FixedPoint",
    "fixed_points", "WeilDivisor", "SemiInvariant", "principal_divisor", "canonical_weil",
    "CartierSupportFunction", "multiple", "support_to_weil", "weil_to_support", "is_cartier",
    "NotCartier", "GorensteinReport", "is_gorenstein", "fixed_point_data", "contraction_data", "mu",
]
