"""Built-in instances: the singular threefold with seven special points."""
from __future__ import annotations

from fractions import Fraction

from .geom import PolyComplex, Polyhedron
from .model import CartierSupportFunction, CurveBase, FansyDivisor

# rays of the diagonal fan, and its four maximal cones
_UR, _UL, _DL, _DR = (1, 1), (-1, 1), (-1, -1), (1, -1)
_CONES = {
    "top": (_UL, _UR),
    "bottom": (_DL, _DR),
    "left": (_UL, _DL),
    "right": (_UR, _DR),
}
# slope of the polarization on each cone
_SLOPE = {"top": (0, -1), "bottom": (0, 1), "left": (1, 0), "right": (-1, 0)}


def diagonal_fan() -> PolyComplex:
    return PolyComplex([Polyhedron.cone(rs, 2) for rs in _CONES.values()], 2)


def _apex_slice(apex) -> PolyComplex:
    return PolyComplex([Polyhedron([apex], rs, 2) for rs in _CONES.values()], 2)


def _square_slice() -> PolyComplex:
    sq = Polyhedron([(-1, -1), (-1, 1), (1, -1), (1, 1)], (), 2)
    cells = [sq]
    for r1, r2 in _CONES.values():
        cells.append(Polyhedron([r1, r2], [r1, r2], 2))
    return PolyComplex(cells, 2)


POINTS = tuple(f"P{i}" for i in range(7))


def threefold(canonical=None) -> FansyDivisor:
    """Square over P0, apex (1/2,1/2) over P1..P3, apex (-1/2,-1/2) over P4..P6; no marking."""
    base = CurveBase.rational(POINTS, canonical)
    up = _apex_slice((Fraction(1, 2), Fraction(1, 2)))
    down = _apex_slice((Fraction(-1, 2), Fraction(-1, 2)))
    slices = {"P0": _square_slice()}
    for p in POINTS[1:4]:
        slices[p] = up
    for p in POINTS[4:]:
        slices[p] = down
    return FansyDivisor(base, slices, diagonal_fan(), ())


def _cone_name(cell: Polyhedron) -> str:
    tail = set(cell.recession_cone().rays)
    for name, rs in _CONES.items():
        if tail == set(rs):
            return name
    return "compact"


def polarization(fd: FansyDivisor | None = None) -> CartierSupportFunction:
    """The ample support function H: a = -5 on the square, -4 on its neighbours,
    a = 1 on the upper/right cells over P1..P3 and on the lower/left cells over P4..P6."""
    fd = fd or threefold()
    linear = [_SLOPE[_cone_name(c)] for c in fd.fan.cells]
    cells = {}
    for p in fd.points:
        rows = []
        for c in fd.slice(p).cells:
            name = _cone_name(c)
            if p == "P0":
                rows.append(((0, 0), -5) if name == "compact" else (_SLOPE[name], -4))
            elif p in POINTS[1:4]:
                rows.append((_SLOPE[name], 1 if name in ("top", "right") else 0))
            else:
                rows.append((_SLOPE[name], 1 if name in ("bottom", "left") else 0))
        cells[p] = rows
    return CartierSupportFunction(fd, linear, cells)
