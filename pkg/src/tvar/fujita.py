"""Freeness of adjoint divisors ``K_X + mH`` and explicit per-fixed-point witnesses.

For a contraction-free fixed point with graph vertex ``(v, h_P^*(v))`` and
Gorenstein data ``(u, alpha)`` the witness is a section ``f chi^(u + m v)`` of
``K_X + mH`` whose order at ``P`` makes it a local generator there.  On the
rational curve, ``f`` exists as soon as its divisor has degree zero, so ``f``
is stored by its divisor.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import ceil
from typing import Mapping

from .geom.linalg import as_vec
from .local import GorensteinData, gorenstein_generator, local_cone
from .model import (GENERIC, CartierSupportFunction, FansyDivisor, FixedPoint, GorensteinReport,
                    NotCartier, SemiInvariant, canonical_weil, contraction_data, fixed_points,
                    fmt, fmt_vec, is_gorenstein, support_to_weil, weil_to_support)
from .positivity import (BasepointReport, DivisorialPolytope, GenusRefused, NefReport,
                         basepoint_free, check_fixed_point, dual, is_ample, nef_certificate)
from .realization import RealizationPolytope, interior_point


class TheoremViolation(RuntimeError):
    """A step that the freeness argument guarantees did not hold."""

    def __init__(self, message: str, step: str = ""):
        super().__init__(f"theorem-machinery violation: {message}")
        self.step = step


class BelowBound(UserWarning):
    pass


@dataclass
class FujitaContext:
    fd: FansyDivisor
    h: CartierSupportFunction
    m: int
    points: tuple[str, ...]  # the listed points plus one general point
    b: dict[str, int]  # b'_P = a_P + 1 - e_P
    gorenstein: GorensteinReport
    dual_m: DivisorialPolytope  # (mh)^*
    psi: DivisorialPolytope  # (mh)^* + sum b'_P P
    rational_singularities: bool = False
    dim: int = 0

    @classmethod
    def create(cls, fd: FansyDivisor, h: CartierSupportFunction, m: int,
               E: Mapping[str, int] | None = None, rational_singularities: bool = False,
               gorenstein: GorensteinReport | None = None) -> "FujitaContext":
        if fd.base.genus > 0:
            raise GenusRefused("freeness verification needs genus 0")
        if h.fd != fd:
            raise ValueError("support function lives on a different fansy divisor")
        m = int(m)
        if m < 1:
            raise ValueError("m must be positive")
        E = dict(E or {})
        if sum(E.values()) != 2 * fd.base.genus:
            raise ValueError("E must have degree 2g")
        points = fd.points + (GENERIC,)
        b = {p: fd.base.b(p) - E.get(p, 0) for p in fd.points}
        b[GENERIC] = 1
        if sum(b.values()) != len(points) - 2:
            raise TheoremViolation("sum of b'_P differs from r - 2", "context")
        gor = gorenstein if gorenstein is not None else is_gorenstein(fd)
        dm = dual(h.scale(m))
        psi = DivisorialPolytope(dm.box, {p: dm.psi_of(p).shift(b[p]) for p in points}, fd.base)
        return cls(fd, h, m, points, b, gor, dm, psi, rational_singularities, fd.rank + 1)

    def realization(self) -> RealizationPolytope:
        return RealizationPolytope(self.psi, self.points)


# ---------------------------------------------------------------------------
# single checks


def adjoint_section_test(ctx: FujitaContext, s: SemiInvariant) -> bool:
    """Sufficient test for ``f chi^u`` in ``H^0(K_X + mH)``: ``u`` interior and
    ``-ord_P f < (mh)_P^*(u) + b_P`` everywhere."""
    u = as_vec(s.u)
    if not ctx.dual_m.box.interior_contains(u):
        return False
    for p, c in s.fdiv:
        if p not in ctx.points:
            return False
    return all(-s.ord(p) < ctx.dual_m.psi_of(p)(u) + ctx.b[p] for p in ctx.points)


def graph_vertex(ctx: FujitaContext, x: FixedPoint) -> tuple[tuple[int, ...], int]:
    """``(v, h_P^*(v))`` for the cell of ``x``; ample ``h`` makes it a graph vertex."""
    u, a = ctx.h.data(x.point)[x.cell]
    val = dual(ctx.h).psi_of(x.point)(u)
    if val != -a:
        raise TheoremViolation(f"h_P^*({fmt_vec(u)}) = {fmt(val)} differs from -a = {-a}", "vertex")
    return u, -a


def gorenstein_data(ctx: FujitaContext, x: FixedPoint) -> GorensteinData:
    v, _ = graph_vertex(ctx, x)
    return gorenstein_generator(local_cone(ctx.h, x.point, v))


@dataclass(frozen=True)
class SectionCheck:
    degree: tuple[int, ...]  # u + m v
    interior: bool
    fiber_point: tuple[int, ...] | None


def prop_section_check(ctx: FujitaContext, x: FixedPoint, gd: GorensteinData | None = None) -> SectionCheck:
    """``u + m v`` lies inside ``m box`` and its fiber in ``Inc(Psi)`` has an interior lattice point."""
    gd = gd or gorenstein_data(ctx, x)
    v, _ = graph_vertex(ctx, x)
    w = tuple(a + ctx.m * c for a, c in zip(gd.u, v))
    inside = ctx.dual_m.box.interior_contains(w)
    if not inside:
        raise TheoremViolation(f"{fmt_vec(w)} is not interior to {ctx.m} times the box", "item 1")
    rp = ctx.realization()
    pt = interior_point(rp, w)
    if pt is None:
        raise TheoremViolation(f"fiber over {fmt_vec(w)} has no interior lattice point", "item 2")
    return SectionCheck(w, inside, pt)


def adjoint_degree(ctx: FujitaContext, x: FixedPoint, w=None) -> tuple[dict[str, int], int]:
    """``A = sum (ceil (mh)_Q^*(u + m v) + b_Q - 1) Q`` and its degree (at least 2g)."""
    if w is None:
        w = prop_section_check(ctx, x).degree
    A = {p: ceil(ctx.dual_m.psi_of(p)(w)) + ctx.b[p] - 1 for p in ctx.points}
    deg = sum(A.values())
    if deg < 2 * ctx.fd.base.genus:
        raise TheoremViolation(f"adjoint degree {deg} is below 2g", "degree")
    return A, deg


@dataclass(frozen=True)
class FreenessWitness:
    point: FixedPoint
    degree: tuple[int, ...]
    fdiv: tuple[tuple[str, int], ...]  # divisor of f (orders), sums to zero
    gorenstein: GorensteinData | None
    adjoint_degree: int | None
    checks: tuple[tuple[str, bool], ...]

    @property
    def ok(self) -> bool:
        return all(v for _, v in self.checks)

    def section(self) -> SemiInvariant:
        return SemiInvariant.make(self.degree, dict(self.fdiv))


def _spread(A: Mapping[str, int], p: str, order: tuple[str, ...]) -> dict[str, int]:
    """Orders ``F_P = -A_P`` and ``F_Q >= -A_Q``, the surplus dealt out in turn to ``Q != P``."""
    F = {q: -A[q] for q in order}
    surplus = sum(A.values())
    others = [q for q in order if q != p]
    k, rem = divmod(surplus, len(others))
    for i, q in enumerate(others):
        F[q] += k + (1 if i < rem else 0)
    return F


def freeness_witness(ctx: FujitaContext, x: FixedPoint, adjoint: CartierSupportFunction | None = None
                     ) -> FreenessWitness:
    if x.kind == "contraction":
        return _contraction_witness(ctx, x, adjoint)
    gd = gorenstein_data(ctx, x)
    v, hv = graph_vertex(ctx, x)
    sc = prop_section_check(ctx, x, gd)
    w = sc.degree
    A, deg = adjoint_degree(ctx, x, w)
    F = _spread(A, x.point, ctx.points)
    P = x.point
    mv = tuple(ctx.m * c for c in v)
    at_mv = ctx.dual_m.psi_of(P)(mv)
    expected = -gd.alpha - ctx.b[P] - at_mv
    gap = ctx.dual_m.psi_of(P)(w) - at_mv
    s_full = SemiInvariant.make(w, F)
    checks = [
        ("item1_interior", sc.interior),
        ("item2_fiber_point", sc.fiber_point is not None),
        ("degree_bound", deg >= 0),
        ("principal", sum(F.values()) == 0),
        ("adjoint_section", adjoint_section_test(ctx, s_full)),
        ("order_match", F[P] == expected),
        ("alpha_maximal", gd.alpha < gap <= gd.alpha + 1),
    ]
    if adjoint is not None:
        ua, aa = adjoint.data(P)[x.cell]
        checks.append(("local_generator", tuple(ua) == w and aa == F[P]))
    if ctx.m >= ctx.dim + 1 and not all(v for _, v in checks):
        bad = next(n for n, v in checks if not v)
        raise TheoremViolation(f"witness at {x.label(ctx.fd)} fails {bad}", bad)
    return FreenessWitness(x, w, tuple(sorted(F.items())), gd, deg, tuple(checks))


def _contraction_witness(ctx: FujitaContext, x: FixedPoint, adjoint: CartierSupportFunction | None
                         ) -> FreenessWitness:
    adj = adjoint if adjoint is not None else adjoint_support(ctx)
    u, tup = contraction_data(adj, x)
    c = check_fixed_point(adj, dual(adj), x)
    checks = (("principal", sum(tup.values()) == 0), ("exact_section", c.exact_order))
    return FreenessWitness(x, tuple(u), tuple(sorted(tup.items())), None, None, checks)


def adjoint_support(ctx: FujitaContext) -> CartierSupportFunction:
    D = canonical_weil(ctx.fd) + ctx.m * support_to_weil(ctx.h)
    try:
        return weil_to_support(D, ctx.fd)
    except NotCartier as exc:
        raise TheoremViolation(f"K_X + mH is not Cartier ({exc})", "cartier") from exc


# ---------------------------------------------------------------------------
# the full decision


@dataclass
class FujitaReport:
    free: bool
    m: int
    dim: int
    direct: BasepointReport | None
    nef: NefReport
    witnesses: list[FreenessWitness]
    agree: bool
    warnings: list[str] = field(default_factory=list)
    rational_singularities: bool = False

    def __bool__(self) -> bool:
        return self.free


def verify_freeness(fd: FansyDivisor, h: CartierSupportFunction, m: int,
                    rational_singularities: bool = False) -> FujitaReport:
    """Decide freeness of ``K_X + mH`` directly and via per-fixed-point witnesses."""
    notes: list[str] = []
    gor = is_gorenstein(fd)
    if not gor.ok:
        raise ValueError("not Gorenstein: " + gor.failures[0])
    amp = is_ample(h)
    if not amp.ok:
        raise ValueError("H is not ample: " + amp.diagnostics[0])
    ctx = FujitaContext.create(fd, h, m, rational_singularities=rational_singularities, gorenstein=gor)
    if ctx.m < ctx.dim + 1:
        msg = f"m = {ctx.m} is below d+1 = {ctx.dim + 1}; freeness is not guaranteed"
        notes.append(msg)
        warnings.warn(msg, BelowBound, stacklevel=2)
    if not rational_singularities:
        notes.append("rational singularities not asserted; the verdict below is computed, not implied")
    adj = adjoint_support(ctx)
    nef = nef_certificate(adj)
    direct = basepoint_free(adj) if nef.ok else None
    if direct is None:
        notes.append("K_X + mH is not nef-certified; no direct decision")
    wits = []
    for x in fixed_points(fd):
        try:
            wits.append(freeness_witness(ctx, x, adj))
        except TheoremViolation as exc:
            if ctx.m >= ctx.dim + 1:
                raise
            notes.append(f"{x.label(fd)}: {exc}")
    witness_free = len(wits) == len(fixed_points(fd)) and all(w.ok for w in wits)
    direct_free = direct is not None and direct.free
    # witnesses certify freeness; above the bound both routes must say free
    agree = witness_free == direct_free if ctx.m >= ctx.dim + 1 else (direct_free or not witness_free)
    if not agree:
        raise TheoremViolation("witness pipeline and direct decision disagree", "agreement")
    return FujitaReport(direct_free, ctx.m, ctx.dim, direct, nef, wits, agree, notes,
                        rational_singularities)


__all__ = [
    "TheoremViolation", "BelowBound", "FujitaContext", "adjoint_section_test", "graph_vertex",
    "gorenstein_data", "SectionCheck", "prop_section_check", "adjoint_degree", "FreenessWitness",
    "freeness_witness", "adjoint_support", "FujitaReport", "verify_freeness",
]
