"""Random instance generators shared by the property suites."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import ceil, floor

from tvar._kernels import shift_mismatches
from tvar.geom import Polyhedron, PWAConcave, concave_conjugate, conjugate_from_points, lattice_points
from tvar.local import LocalCone
from tvar.model import CurveBase
from tvar.positivity import DivisorialPolytope


def random_box(rng: random.Random, rank: int, size: int = 3) -> Polyhedron:
    while True:
        if rank == 1:
            a = rng.randint(-size, size - 1)
            b = rng.randint(a + 1, a + size + 1)
            return Polyhedron([(a,), (b,)], (), 1)
        pts = [tuple(rng.randint(-size // 2 - 1, size // 2 + 1) for _ in range(rank)) for _ in range(rank + 3)]
        box = Polyhedron(pts, (), rank)
        if box.is_full_dimensional:
            return box


def upper_hull(points, box: Polyhedron) -> PWAConcave:
    """Concave function whose graph is the upper hull of ``points`` over ``box``."""
    n = box.ambient
    hull = Polyhedron(points, [(0,) * n + (-1,)], n + 1)
    pieces = []
    for a, b in hull.inequalities:
        ay = a[-1]
        if ay < 0:
            pieces.append((tuple(-c / ay for c in a[:-1]), b / ay))
    if not pieces:
        pieces = [((0,) * n, max(p[-1] for p in points))]
    return PWAConcave(pieces, box, n)


def random_concave(rng: random.Random, box: Polyhedron, spread: int = 3, extra: int = 2) -> PWAConcave:
    """Upper hull of integer heights at the box vertices and a few lattice points."""
    lat = lattice_points(box)
    chosen = set(tuple(int(c) for c in v) for v in box.vertices)
    for _ in range(extra):
        chosen.add(rng.choice(lat))
    pts = [tuple(u) + (rng.randint(-spread, spread),) for u in sorted(chosen)]
    return upper_hull(pts, box)


def random_polytope(rng: random.Random, rank: int, r: int, size: int = 3, max_deg: int | None = None,
                    spread: int = 2) -> DivisorialPolytope:
    """A valid divisorial polytope on ``r`` points (the first one absorbs the degree fix)."""
    box = random_box(rng, rank, size)
    names = tuple(f"Q{i}" for i in range(r))
    while True:
        psi = {p: random_concave(rng, box, spread) for p in names}
        verts = box.vertices
        degs = [sum((f(v) for f in psi.values()), Fraction(0)) for v in verts]
        shift = -min(degs) + rng.randint(0, 1)
        psi[names[0]] = psi[names[0]].shift(shift)
        dp = DivisorialPolytope(box, psi, CurveBase.rational(names))
        if not dp.is_valid():
            continue
        if max_deg is not None and max(dp.deg(u) for u in lattice_points(box)) > max_deg:
            continue
        return dp


def involution_instance(rng):
    rank_ = 1 if rng.random() < 0.7 else 2
    box = random_box(rng, rank_)
    f = random_concave(rng, box, spread=4, extra=rng.randint(0, 3))
    # conjugate to the whole space, then back onto the box
    h = conjugate_from_points(f.graph_vertices(), None, rank_)
    if len(h.pieces) == 1:
        return f, None
    return f, concave_conjugate(h, box)


def random_cones(seed: int, count: int):
    """Pointed full-dimensional cones with small normals (rank 2: |c| <= 2, rank 3: |c| <= 1)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = rng.choice((2, 3))
        e = 2 if d == 2 else 1
        cands = [tuple(rng.randint(-e, e) for _ in range(d)) for _ in range(rng.randint(d, d + 2))]
        try:
            out.append(LocalCone.from_constraints(cands))
        except ValueError:
            continue
    return out


def brute_generators(c: LocalCone, radius: int = 6):
    """Lattice u in the cube with: z interior  <=>  z - u in the closed cone, on the cube."""
    cube = list(itertools.product(range(-radius, radius + 1), repeat=c.dim))
    bad = shift_mismatches(c.normals, cube, radius)
    return [u for u, b in zip(cube, bad) if b == 0]


def brute_divisors(rp, u, strict):
    """Degree-zero F on the points with F_P + Psi_P(u) >= 0 (or > 0), as x = -F."""
    vals = rp.values(u)
    lows = [floor(-v) + 1 if strict else ceil(-v) for v in vals]
    top = sum(floor(v) for v in vals) + 1
    out = []
    for head in itertools.product(*[range(lo, lo + top + 1) for lo in lows[:-1]]):
        last = -sum(head)
        ok = last + vals[-1] > 0 if strict else last + vals[-1] >= 0
        if last >= lows[-1] and ok:
            out.append(tuple(-c for c in head + (last,)))
    return sorted(out)
