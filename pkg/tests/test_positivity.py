import random
from fractions import Fraction

import pytest

from helpers import random_polytope
from tvar.examples import POINTS, threefold
from tvar.geom import Polyhedron, lattice_points
from tvar.model import CurveBase, SemiInvariant, fixed_points
from tvar.positivity import (DivisorialPolytope, GenusRefused, basepoint_free, box_of, dual, is_ample,
                             nef_certificate, sections, to_support)

DIAMOND = [(-1, 0), (0, -1), (0, 1), (1, 0)]


def test_box_is_diamond(ex1):
    _, h = ex1
    assert box_of(h) == Polyhedron(DIAMOND, (), 2)


def test_conjugate_values(ex1):
    _, h = ex1
    dp = dual(h)
    assert dp.psi_of("P0")((0, 0)) == 5
    assert [dp.psi_of("P0")(v) for v in DIAMOND] == [4, 4, 4, 4]
    order = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    assert [dp.psi_of("P1")(v) for v in order] == [0, 0, -1, -1]
    assert [dp.psi_of("P4")(v) for v in order] == [-1, -1, 0, 0]
    at0 = dp.value((0, 0))
    assert at0["P0"] == 5 and all(at0[p] == Fraction(-1, 2) for p in POINTS[1:])
    assert dp.deg((0, 0)) == 2


def test_example_positivity(ex1):
    _, h = ex1
    assert is_ample(h).ok
    assert nef_certificate(h).ok
    rep = basepoint_free(h)
    assert not rep.free
    (bp,) = rep.basepoints
    assert bp.point.point == "P0" and bp.u == (0, 0) and bp.obstruction == -1
    assert basepoint_free(h.scale(2)).free


def test_sections_of_double(ex1):
    _, h = ex1
    s = sections(h.scale(2), (0, 0))
    assert s.degree == 4 and s.dimension == 5
    assert dict(s.divisor) == {"P0": 10, **{p: -1 for p in POINTS[1:]}}
    f = SemiInvariant.make((0, 0), {"P0": -10, **{p: 1 for p in POINTS[1:4]}, "P4": 2, "P5": 2, "P6": 2})
    assert s.contains(f, h.scale(2))
    g = SemiInvariant.make((0, 0), {"P0": -11, **{p: 1 for p in POINTS[1:6]}, "P6": 6})
    assert not s.contains(g, h.scale(2))
    assert sections(h, (3, 3)).dimension == 0


def test_to_support_recovers_example(ex1):
    fd, h = ex1
    fd2, h2 = to_support(dual(h))
    assert fd2.fan == fd.fan and not fd2.marking
    for p in fd.points:
        assert fd2.slice(p) == fd.slice(p)
    assert h2 == h.__class__(fd2, h.linear, {p: h.data(p) for p in fd.points})


def test_negative_twist_is_not_ample(ex1):
    _, h = ex1
    assert not is_ample(-h).ok


def test_dual_to_support_round_trip_random():
    rng = random.Random(11)
    for i in range(25):
        dp = random_polytope(rng, 1 if i % 4 else 2, rng.randint(2, 4))
        fd, h = to_support(dp)
        back = dual(h)
        assert back.box == dp.box
        for p in dp.base.points:
            assert back.psi_of(p).same_function(dp.psi_of(p))
        assert is_ample(h).ok


def test_two_point_instances_are_free():
    """With two nontrivial points the variety is toric; ample implies free."""
    rng = random.Random(5)
    for i in range(20):
        dp = random_polytope(rng, 1 if i % 2 else 2, 2)
        fd, h = to_support(dp)
        assert is_ample(h).ok
        assert basepoint_free(h).free


def test_bpf_implies_nonnegative_floor_degree_at_vertices():
    rng = random.Random(8)
    for _ in range(15):
        dp = random_polytope(rng, 1, rng.randint(3, 4))
        fd, h = to_support(dp)
        rep = basepoint_free(h)
        if rep.free:
            for v in dp.box.vertices:
                assert dp.floor_deg(v) >= 0 or dp.deg(v) == 0
        # every free fixed point is decided at its own u
        assert len(rep.checks) == len(fixed_points(fd))


def test_sections_dimension_is_degree_plus_one():
    rng = random.Random(9)
    dp = random_polytope(rng, 1, 3)
    fd, h = to_support(dp)
    for u in lattice_points(dp.box):
        s = sections(h, u)
        assert s.dimension == max(dp.floor_deg(u) + 1, 0)


def test_invalid_polytope_problems():
    box = Polyhedron([(0,), (2,)], (), 1)
    from tvar.geom import PWAConcave
    f = PWAConcave([((0,), -1)], box, 1)
    dp = DivisorialPolytope(box, {"A": f}, CurveBase.rational(["A", "B"]))
    assert any("< 0" in p for p in dp.problems())
    with pytest.raises(ValueError):
        to_support(dp)


def test_genus_refused(ex1):
    fd, h = ex1
    base = CurveBase(1, fd.base.points, (), ())
    fd1 = fd.__class__(base, {p: fd.slice(p) for p in fd.stored()}, fd.fan, fd.marking)
    h1 = h.__class__(fd1, h.linear, {p: h.data(p) for p in fd.points})
    with pytest.raises(GenusRefused):
        basepoint_free(h1)
    assert sections(h1, (0, 0)).dimension is None


def test_threefold_canonical_variant_keeps_verdicts():
    fd = threefold(canonical={"P0": -2})
    from tvar.examples import polarization
    h = polarization(fd)
    assert not basepoint_free(h).free
