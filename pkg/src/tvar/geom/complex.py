"""Polyhedral complexes, fans, recession fans and common refinements."""
from __future__ import annotations

import itertools
from collections import Counter
from functools import cached_property
from typing import Iterable, Sequence

from .linalg import as_vec
from .polyhedron import Polyhedron
from .pwa import PWAConcave


class ComplexError(ValueError):
    pass


class PolyComplex:
    """A polyhedral complex given by its maximal cells (sorted, deduplicated)."""

    def __init__(self, cells: Iterable[Polyhedron], ambient: int | None = None):
        cells = sorted(set(cells))
        if ambient is None:
            if not cells:
                raise ValueError("ambient dimension required for an empty complex")
            ambient = cells[0].ambient
        self.ambient = ambient
        self.cells: tuple[Polyhedron, ...] = tuple(cells)

    def __repr__(self) -> str:
        return f"PolyComplex[{self.ambient}]({len(self.cells)} cells)"

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyComplex) and self.cells == other.cells

    def __hash__(self) -> int:
        return hash(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    @cached_property
    def _vertices(self):
        return tuple(sorted({v for c in self.cells for v in c.vertices}))

    def vertices(self) -> list[tuple]:
        return list(self._vertices)

    def rays(self) -> list[tuple[int, ...]]:
        return sorted({r for c in self.cells for r in c.rays})

    @cached_property
    def _faces(self):
        return tuple(sorted({f for c in self.cells for f in c.faces()},
                            key=lambda p: (p.dim, p.vertices, p.rays)))

    def faces(self) -> list[Polyhedron]:
        """All cells of the complex (every face of every maximal cell)."""
        return list(self._faces)

    def is_fan(self) -> bool:
        zero = tuple(0 for _ in range(self.ambient))
        return all(c.vertices == (as_vec(zero),) for c in self.cells)

    def cell_index(self, cell: Polyhedron) -> int:
        return self.cells.index(cell)

    def cells_containing(self, x: Sequence) -> list[int]:
        return [i for i, c in enumerate(self.cells) if c.contains(x)]

    def check(self, complete: bool = True) -> None:
        """Raise :class:`ComplexError` unless this is a complex (and complete).

        Completeness is tested as "every facet of a full-dimensional cell is a
        facet of exactly one other cell", which for a complex of
        full-dimensional cells is equivalent to covering the whole space.
        """
        n = self.ambient
        if not self.cells:
            raise ComplexError("empty complex")
        for a, b in itertools.combinations(self.cells, 2):
            inter = a.intersection(b)
            if inter.is_empty:
                continue
            if not (inter.is_face_of(a) and inter.is_face_of(b)):
                raise ComplexError(f"cells {a} and {b} do not meet in a common face")
        if complete:
            if any(c.dim != n for c in self.cells):
                raise ComplexError("support is all of N_Q requires full-dimensional maximal cells")
            counts = Counter(f for c in self.cells for f in c.facets())
            bad = [f for f, k in counts.items() if k != 2]
            if bad:
                raise ComplexError(f"support is not all of N_Q (boundary facet {bad[0]})")

    def recession_fan(self) -> "PolyComplex":
        return recession_fan(self)

    def translate(self, t) -> "PolyComplex":
        return PolyComplex([c.translate(t) for c in self.cells], self.ambient)


def recession_fan(c: PolyComplex) -> PolyComplex:
    """Fan of recession cones of the cells of a complete complex."""
    n = c.ambient
    cones = {cell.recession_cone() for cell in c.cells}
    maximal = sorted(k for k in cones if k.dim == n)
    fan = PolyComplex(maximal, n)
    try:
        fan.check(complete=True)
    except ComplexError as exc:
        raise ComplexError(f"inconsistent tailfan: {exc}") from exc
    faces = set(fan.faces())
    for k in cones:
        if k not in faces:
            raise ComplexError(f"inconsistent tailfan: {k} is not a cone of the fan")
    return fan


def common_refinement(fs: Sequence[PWAConcave], box: Polyhedron | None = None) -> PolyComplex:
    """Coarsest subdivision of the shared box on which ``sum(fs)`` is affine per cell.

    With an empty list the result is the box itself (whose faces are its face
    lattice).  ``box`` must be given when ``fs`` is empty.
    """
    fs = list(fs)
    if box is None:
        if not fs:
            raise ValueError("box required for an empty family")
        box = fs[0].domain
    for f in fs:
        if f.domain != box:
            raise ValueError("functions live on different boxes")
    cells = [box]
    for f in fs:
        regions = [r for r, _ in f.cells()]
        nxt = []
        for c in cells:
            for r in regions:
                inter = c.intersection(r)
                if inter.dim == box.dim:
                    nxt.append(inter)
        cells = nxt
    return PolyComplex(cells, box.ambient)
