import random
from collections import Counter

import pytest

from helpers import brute_divisors, random_polytope
from tvar.geom import lattice_points
from tvar.positivity import dual
from tvar.realization import (FaceEnumerationTooLarge, build, divisor_of, faces, facet_census, facets,
                              fiber, fiber_lattice_count, fiber_lattice_points, interior_point,
                              lattice_point_total, point_of)


def test_example_fiber_at_origin(ex1):
    _, h = ex1
    rp = build(dual(h))
    fb = fiber(rp, (0, 0))
    assert fb.dilation == 2 and not fb.is_point
    assert fiber_lattice_points(rp, (0, 0)) == []
    assert fiber_lattice_count(rp, (0, 0)) == 0


def test_example_double_fiber(ex1):
    _, h = ex1
    rp = build(dual(h.scale(2)))
    pts = fiber_lattice_points(rp, (0, 0))
    assert len(pts) == 210 and pts[0] == (6, -1, -1, -1, -1, -1, -1)
    assert pts == sorted(pts)


def test_example_facet_census(ex1):
    _, h = ex1
    rp = build(dual(h))
    census = facet_census(rp)
    assert census["box"] == 4 and census["P0"] == 4
    assert sum(census.values()) == 14


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_random_fibers(backend):
    rng = random.Random(77)
    for _ in range(20):
        rank = rng.choice((1, 2))
        dp = random_polytope(rng, rank, rng.randint(2, 4), max_deg=6)
        rp = build(dp)
        for u in lattice_points(dp.box):
            fb = fiber(rp, u)
            assert fb.dilation == dp.deg(u)
            for strict in (False, True):
                got = fiber_lattice_points(rp, u, interior=strict, backend=backend)
                assert got == brute_divisors(rp, u, strict)
                assert len(got) == fiber_lattice_count(rp, u, interior=strict)
            ip = interior_point(rp, u)
            if ip is not None:
                assert ip in fiber_lattice_points(rp, u, interior=True)
            for x in fiber_lattice_points(rp, u):
                F = divisor_of(rp, x)
                assert sum(F.values()) == 0 and point_of(rp, F) == x


def test_polytope_lattice_points_are_fibers():
    rng = random.Random(4)
    for _ in range(6):
        dp = random_polytope(rng, 1, 3, max_deg=4)
        rp = build(dp)
        P = rp.as_polyhedron(reduced=True)
        pts = lattice_points(P)
        assert len(pts) == lattice_point_total(rp)
        for p in pts:
            u, xs = p[:1], p[1:]
            assert tuple(xs) + (-sum(xs),) in fiber_lattice_points(rp, u)


def test_face_lattice_matches_explicit_polytope():
    rng = random.Random(21)
    for i in range(8):
        rank, r = (1, rng.choice((2, 3))) if i % 2 else (2, 2)
        dp = random_polytope(rng, rank, r, max_deg=6)
        rp = build(dp)
        fs = faces(rp)
        fv = Counter(f.dim for f in fs)
        P = rp.as_polyhedron()
        pv = Counter(f.dim for f in P.faces() if not f.is_empty)
        assert fv == pv
        assert sum((-1) ** k * n for k, n in fv.items()) == 1
        assert len(facets(rp)) == sum(facet_census(rp).values())


def test_face_cap(monkeypatch, ex1):
    _, h = ex1
    rp = build(dual(h))
    monkeypatch.setenv("TVAR_FACE_CAP", "64")
    with pytest.raises(FaceEnumerationTooLarge):
        faces(rp)


def test_points_must_cover_support(ex1):
    _, h = ex1
    with pytest.raises(ValueError):
        build(dual(h), ["P0", "P1"])
    with pytest.raises(ValueError):
        fiber(build(dual(h)), (2, 2))
