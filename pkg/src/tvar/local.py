"""Local cones at contraction-free fixed points and Gorenstein generators."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .geom.linalg import as_vec, dot, rank, solve
from .geom.polyhedron import Polyhedron, cone_hrep


class NotGorenstein(ValueError):
    """No integral point pairs to 1 with every primitive facet normal."""

    def __init__(self, message: str, normal=None):
        super().__init__(message)
        self.normal = normal


@dataclass(frozen=True)
class LocalCone:
    """A full-dimensional pointed cone in M_Q x Q.

    ``rays`` are primitive generators ``(w, alpha)``; ``normals`` are the
    primitive inner facet normals in N x Z.  ``apex`` records the graph vertex
    the cone was built at, when known.
    """

    rays: tuple[tuple[int, ...], ...]
    normals: tuple[tuple[int, ...], ...]
    apex: tuple | None = None

    @property
    def dim(self) -> int:
        return len(self.rays[0]) if self.rays else len(self.normals[0])

    @classmethod
    def from_constraints(cls, candidates: Sequence[Sequence], apex=None) -> "LocalCone":
        """Cone ``{y : c . y >= 0}`` over possibly redundant candidate normals."""
        d = len(candidates[0])
        eqs, rays = cone_hrep(candidates, d)
        if eqs:
            raise ValueError("local cone is not pointed (the given point is not a vertex)")
        _, normals = cone_hrep(rays, d)
        if rank(rays, d) < d:
            raise ValueError("local cone is not full-dimensional")
        return cls(tuple(rays), tuple(normals), apex)

    def contains(self, y: Sequence) -> bool:
        return all(dot(n, y) >= 0 for n in self.normals)

    def interior_contains(self, y: Sequence) -> bool:
        return all(dot(n, y) > 0 for n in self.normals)

    def is_smooth(self) -> bool:
        if len(self.rays) != self.dim:
            return False
        return abs(_det(self.rays)) == 1


def _det(rows) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def cell_cone(cell: Polyhedron) -> LocalCone:
    """Local cone of the fixed point attached to a full-dimensional cell.

    It is ``{(w, j) : <v, w> >= j for vertices v, <rho, w> >= 0 for rays rho}``,
    i.e. the dual of the cone over ``cell x {-1}``.
    """
    cands = [tuple(v) + (Fraction(-1),) for v in cell.vertices]
    cands += [tuple(r) + (0,) for r in cell.rays]
    return LocalCone.from_constraints(cands)


def local_cone(h, point: str, vertex: Sequence) -> LocalCone:
    """Tangent cone at ``(vertex, Psi_P(vertex))`` of the region under the graph of ``Psi_P``.

    ``h`` is a support function (``Psi = h^*``) or a divisorial polytope.
    """
    from .positivity import DivisorialPolytope, dual

    dp = h if isinstance(h, DivisorialPolytope) else dual(h)
    psi = dp.psi_of(point)
    u0 = as_vec(vertex)
    if not dp.box.contains(u0):
        raise ValueError("vertex outside the box")
    if dp.deg(u0) <= 0:
        raise ValueError("local cones are defined only where deg h^*(v) > 0")
    val = psi(u0)
    cands = [tuple(s) + (Fraction(-1),) for s, c in psi.pieces if dot(s, u0) + c == val]
    cands += [tuple(a) + (Fraction(0),) for a, b in dp.box.inequalities if dot(a, u0) == b]
    try:
        return LocalCone.from_constraints(cands, apex=(u0, val))
    except ValueError as exc:
        raise ValueError(f"{tuple(map(str, u0))} is not a vertex of the graph over {point}") from exc


@dataclass(frozen=True)
class GorensteinData:
    u: tuple[int, ...]
    alpha: int
    lambdas: tuple[tuple[int, Fraction], ...]  # (ray index, coefficient)

    @property
    def vector(self) -> tuple[int, ...]:
        return self.u + (self.alpha,)

    @property
    def lambda_sum(self) -> Fraction:
        return sum((l for _, l in self.lambdas), Fraction(0))


def gorenstein_generator(c: LocalCone) -> GorensteinData:
    """The lattice point pairing to 1 with every primitive facet normal.

    Raises :class:`NotGorenstein` when no integral such point exists.
    """
    d = c.dim
    res = solve(list(c.normals), [1] * len(c.normals), d)
    if res is None:
        # find a normal that cannot be met together with the others
        for i in range(len(c.normals)):
            sub = [n for j, n in enumerate(c.normals) if j != i]
            if solve(sub, [1] * len(sub), d) is not None:
                raise NotGorenstein("no point pairs to 1 with all facet normals", c.normals[i])
        raise NotGorenstein("no point pairs to 1 with all facet normals", c.normals[0])
    x, ker = res
    if ker:
        raise ValueError("cone is not full-dimensional/pointed")
    if any(v.denominator != 1 for v in x):
        raise NotGorenstein(f"generator {tuple(map(str, x))} is not integral", c.normals[0])
    uvec = tuple(int(v) for v in x)
    lambdas = _decompose(uvec, c.rays)
    if lambdas is None:
        raise AssertionError("no 0<=lambda<=1 decomposition over independent rays")
    u, alpha = uvec[:-1], uvec[-1]
    if not c.interior_contains(uvec):
        raise AssertionError("generator is not interior")
    # cones under a graph contain the downward direction; there alpha is maximal
    down = (0,) * (d - 1) + (-1,)
    if c.contains(down) and c.interior_contains(u + (alpha + 1,)):
        raise AssertionError("alpha is not the largest integer with (u, alpha) interior")
    return GorensteinData(u, alpha, lambdas)


def _decompose(target, rays):
    d = len(target)
    for size in range(1, d + 1):
        for idx in itertools.combinations(range(len(rays)), size):
            sub = [rays[i] for i in idx]
            if rank(sub, d) < size:
                continue
            cols = [[sub[k][row] for k in range(size)] for row in range(d)]
            res = solve(cols, list(target), size)
            if res is None:
                continue
            lam, _ = res
            if all(0 < l <= 1 for l in lam):
                return tuple(zip(idx, lam))
    return None


def is_gorenstein_cone(c: LocalCone) -> bool:
    try:
        gorenstein_generator(c)
    except NotGorenstein:
        return False
    return True
