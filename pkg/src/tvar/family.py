"""Ample divisors on K*-surfaces whose first multiples all have basepoints.

The divisorial polytope is ``Psi = f (x) P0 + g (x) (P1 + ... + Pl)`` on the
interval ``[0, L]`` with ``L = 1 + alpha*lam + lam*(lam-1)/2``:

* ``f`` has slope 1 up to ``(2, 2)`` and slope 1/2 after;
* ``g`` is 0 on ``[0, 1]``, has slope ``-1/lam`` up to ``1 + alpha*lam``, then
  drops by one over widths ``lam-1, lam-2, ..., 1``.

At ``u = 2m`` the m-th multiple has ``deg floor Psi^m(2m) = 2m + l*floor(-m/lam)``,
negative for ``l > 2m`` and ``lam > m``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .geom import Polyhedron, PWAConcave
from .model import CurveBase, fmt
from .positivity import DivisorialPolytope, basepoint_free, to_support


class InvalidFamily(ValueError):
    pass


@dataclass(frozen=True)
class FamilyParams:
    ell: int
    lam: int
    alpha: int
    k: int = 1

    @property
    def length(self) -> int:
        return 1 + self.alpha * self.lam + self.lam * (self.lam - 1) // 2

    @property
    def validity_lhs(self) -> Fraction:
        return 1 + Fraction(self.lam * (self.alpha + self.lam - 1), 2)

    @property
    def validity_rhs(self) -> int:
        return self.ell * (self.alpha + self.lam - 1)

    @property
    def validity(self) -> bool:
        return self.validity_lhs > self.validity_rhs

    @property
    def points(self) -> tuple[str, ...]:
        return tuple(f"P{i}" for i in range(self.ell + 1))

    def problems(self) -> list[str]:
        out = []
        if self.ell < 3:
            out.append(f"l = {self.ell} < 3: no multiple can have a negative vertex degree")
        if self.lam < 1 or self.alpha < 1:
            out.append("lambda and alpha must be positive")
        if out:
            return out
        if not self.validity:
            out.append(f"validity inequality fails: {fmt(self.validity_lhs)} <= {self.validity_rhs}")
        if self.length % 2:
            out.append(f"L = {self.length} is odd, so f(L) = 1 + L/2 is not integral")
        return out


def f_breakpoints(params: FamilyParams) -> list[tuple[int, Fraction]]:
    L = params.length
    return [(0, Fraction(0)), (2, Fraction(2)), (L, 1 + Fraction(L, 2))]


def g_breakpoints(params: FamilyParams) -> list[tuple[int, Fraction]]:
    lam, alpha = params.lam, params.alpha
    pts = [(0, Fraction(0)), (1, Fraction(0)), (1 + alpha * lam, Fraction(-alpha))]
    x, y = pts[-1]
    for w in range(lam - 1, 0, -1):
        x, y = x + w, y - 1
        pts.append((x, y))
    return pts


def _concave(bps, box: Polyhedron) -> PWAConcave:
    pieces = []
    for (x0, y0), (x1, y1) in zip(bps, bps[1:]):
        s = Fraction(y1 - y0, x1 - x0)
        pieces.append(((s,), y0 - s * x0))
    return PWAConcave(pieces, box, 1)


def build_family(params: FamilyParams) -> DivisorialPolytope:
    probs = params.problems()
    if probs:
        raise InvalidFamily("; ".join(probs))
    L = params.length
    box = Polyhedron([(0,), (L,)], (), 1)
    f = _concave(f_breakpoints(params), box)
    g = _concave(g_breakpoints(params), box)
    pts = params.points
    psi = {pts[0]: f}
    for p in pts[1:]:
        psi[p] = g
    dp = DivisorialPolytope(box, psi, CurveBase.rational(pts))
    # deg Psi is concave, so positivity on (0, L) reduces to the endpoints
    bad = dp.problems()
    if dp.deg((0,)) != 0:
        bad.append("deg Psi(0) != 0")
    if any(c.denominator != 1 for c in dp.value((0,)).values()):
        bad.append("Psi(0) is not integral")
    if dp.deg((L,)) <= 0:
        bad.append(f"deg Psi(L) = {fmt(dp.deg((L,)))} <= 0")
    if bad:
        raise InvalidFamily("; ".join(bad))
    return dp


def choose_parameters(k: int) -> FamilyParams:
    """``l = 2k+1 > 2k`` and ``lam = 4l+1 > 2l``; ``alpha = 1`` already suffices."""
    if k < 1:
        raise ValueError("k must be at least 1")
    ell = 2 * k + 1
    return FamilyParams(ell, 4 * ell + 1, 1, k)


@dataclass(frozen=True)
class MultipleRow:
    m: int
    degree: int
    expected: int
    basepoint_at_vertex: bool
    free: bool

    @property
    def consistent(self) -> bool:
        return self.degree == self.expected and (self.degree >= 0 or self.basepoint_at_vertex)


def nonfree_multiples(psi: DivisorialPolytope, k: int, ell: int | None = None,
                      lam: int | None = None) -> list[MultipleRow]:
    """For ``m = 1..k``: ``deg floor Psi^m(2m)`` and the basepoint verdict of ``mH``.

    ``ell`` and ``lam`` are read off ``psi`` when omitted.
    """
    p0 = psi.base.points[0]
    if ell is None:
        ell = len(psi.base.points) - 1
    if lam is None:
        g = psi.psi_of(psi.base.points[1])
        lam = int(1 / -g((2,)))
    fd, h = to_support(psi)
    rows = []
    for m in range(1, k + 1):
        pm = psi.dilate(m)
        u = (2 * m,)
        degree = pm.floor_deg(u)
        report = basepoint_free(h.scale(m))
        at_vertex = any(c.point.point == p0 and tuple(c.u) == u for c in report.basepoints)
        rows.append(MultipleRow(m, degree, 2 * m + ell * floor(Fraction(-m, lam)),
                                at_vertex, report.free))
    return rows
