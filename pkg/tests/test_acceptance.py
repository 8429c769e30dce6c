"""Acceptance criteria 1-8, each reported as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are printed even
under output capture.
"""
import random
from contextlib import contextmanager
from fractions import Fraction
from importlib import resources

import pytest

from helpers import (brute_divisors, brute_generators, involution_instance, random_cones,
                     random_polytope)
from tvar import io
from tvar.family import build_family, choose_parameters, nonfree_multiples
from tvar.fujita import verify_freeness
from tvar.geom import Polyhedron, lattice_points
from tvar.local import NotGorenstein, gorenstein_generator
from tvar.model import canonical_weil, fixed_points, is_cartier, is_gorenstein, support_to_weil, weil_to_support
from tvar.positivity import basepoint_free, box_of, dual, is_ample, sections, to_support
from tvar.realization import (build, divisor_of, facet_census, fiber, fiber_lattice_count,
                              fiber_lattice_points, point_of)

DATA = resources.files("tvar") / "data"
H = Fraction(1, 2)
UP, DOWN = (H, H), (-H, -H)
SQUARE = [(-1, -1), (-1, 1), (1, -1), (1, 1)]
RAYS = [(1, 1), (-1, 1), (-1, -1), (1, -1)]


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(n, title):
        try:
            yield
        except BaseException as exc:
            with capsys.disabled():
                print(f"\ncriterion {n}: FAIL  {title}  [{type(exc).__name__}: {exc}]")
            raise
        with capsys.disabled():
            print(f"\ncriterion {n}: PASS  {title}")
    return run


@pytest.fixture(scope="module")
def example():
    inst = io.load(str(DATA / "example1.json"))
    return inst.fd, inst.support


def test_criterion_1_weil_round_trip(criterion, example):
    with criterion(1, "Weil coefficients of H and the inverse map"):
        fd, h = example
        D = support_to_weil(h)
        assert [D.vcoeff("P0", v) for v in SQUARE] == [5, 5, 5, 5]
        assert [D.vcoeff(p, UP) for p in ("P1", "P2", "P3")] == [-1, -1, -1]
        assert [D.vcoeff(p, DOWN) for p in ("P4", "P5", "P6")] == [-1, -1, -1]
        assert [D.hcoeff(r) for r in RAYS] == [1, 1, 1, 1]
        assert len(D.vertical) == 10 and len(D.horizontal) == 4
        assert weil_to_support(D, fd) == h


def test_criterion_2_conjugate_values(criterion, example):
    with criterion(2, "box and conjugate values"):
        fd, h = example
        diamond = [(1, 0), (0, 1), (-1, 0), (0, -1)]
        assert box_of(h) == Polyhedron(diamond, (), 2)
        dp = dual(h)
        assert dp.psi_of("P0")((0, 0)) == 5
        assert [dp.psi_of("P0")(v) for v in diamond] == [4, 4, 4, 4]
        for p in ("P1", "P2", "P3"):
            assert [dp.psi_of(p)(v) for v in diamond] == [0, 0, -1, -1]
        for p in ("P4", "P5", "P6"):
            assert [dp.psi_of(p)(v) for v in diamond] == [-1, -1, 0, 0]
        at0 = dp.value((0, 0))
        assert at0 == {"P0": 5, **{f"P{i}": -H for i in range(1, 7)}}


def test_criterion_3_positivity(criterion, example):
    with criterion(3, "ample, one basepoint at ((0,0), P0), 2H free, h0 = 5"):
        fd, h = example
        assert is_ample(h).ok
        rep = basepoint_free(h)
        assert not rep.free
        (bp,) = rep.basepoints
        assert bp.point.point == "P0" and bp.u == (0, 0)
        assert bp.obstruction == 5 + 6 * (-1) == -1
        assert basepoint_free(h.scale(2)).free
        s = sections(h.scale(2), (0, 0))
        assert s.degree == 4 and s.dimension == 5


def test_criterion_4_gorenstein(criterion, example):
    with criterion(4, "Gorenstein: K_X Cartier and a generator at every fixed point"):
        fd, _ = example
        K = canonical_weil(fd)
        assert is_cartier(K, fd)
        rep = is_gorenstein(fd)
        assert rep.ok, rep.failures
        assert rep.canonical == weil_to_support(K, fd)
        free = [x for x in fixed_points(fd) if x.kind == "free"]
        assert len(free) == 33 and set(rep.generators) == set(free)


def test_criterion_5_fujita(criterion, example):
    with criterion(5, "K_X + 4H free with witnesses at all 33 fixed points"):
        fd, h = example
        rep = verify_freeness(fd, h, 4)
        assert rep.free and rep.agree and rep.dim == 3
        assert len(rep.witnesses) == 33 and all(w.ok for w in rep.witnesses)
        for w in rep.witnesses:
            checks = dict(w.checks)
            for name in ("item1_interior", "item2_fiber_point", "degree_bound", "order_match",
                         "local_generator"):
                assert checks[name], (w.point, name)


def test_criterion_6_family(criterion):
    with criterion(6, "family (5,21,1): ample, degrees -3, -1 with basepoints, free at m = 3"):
        params = choose_parameters(2)
        assert (params.ell, params.lam, params.alpha) == (5, 21, 1)
        assert params.validity_lhs == Fraction(443, 2) and params.validity_rhs == 105
        assert params.validity_lhs > params.validity_rhs
        dp = build_family(params)
        fd, h = to_support(dp)
        assert is_ample(h).ok
        rows = nonfree_multiples(dp, 2)
        assert [r.degree for r in rows] == [-3, -1]
        assert all(r.basepoint_at_vertex and not r.free for r in rows)
        rep = verify_freeness(fd, h, 3)
        assert rep.free and rep.agree and all(w.ok for w in rep.witnesses)


def test_criterion_7_realization(criterion, example):
    with criterion(7, "fibers on 50 random instances, divisor bijection, 14 facets"):
        rng = random.Random(7007)
        for i in range(50):
            rank = 1 if i % 2 else 2
            dp = random_polytope(rng, rank, rng.randint(2, 4), max_deg=6)
            assert max(dp.deg(u) for u in lattice_points(dp.box)) <= 6
            rp = build(dp)
            for u in lattice_points(dp.box):
                assert fiber(rp, u).dilation == dp.deg(u)
                for strict in (False, True):
                    got = fiber_lattice_points(rp, u, interior=strict)
                    assert got == brute_divisors(rp, u, strict)
                    assert len(got) == fiber_lattice_count(rp, u, interior=strict)
                for x in fiber_lattice_points(rp, u):
                    F = divisor_of(rp, x)
                    assert sum(F.values()) == 0 and point_of(rp, F) == x
                    vals = dict(zip(rp.points, rp.values(u)))
                    assert all(F.get(p, 0) + vals[p] >= 0 for p in rp.points)
        _, h = example
        assert sum(facet_census(build(dual(h))).values()) == 14


def test_criterion_8_oracles(criterion):
    with criterion(8, "200 conjugate involutions, 100 round trips, 50 cones against the lattice scan"):
        rng = random.Random(8008)
        n = 0
        while n < 200:
            f, back = involution_instance(rng)
            if back is None:
                continue
            assert back.same_function(f)
            n += 1
        for i in range(100):
            dp = random_polytope(rng, 1 if i % 3 else 2, rng.randint(2, 4))
            fd, h = to_support(dp)
            assert weil_to_support(support_to_weil(h), fd) == h
        cones = random_cones(8008, 50)
        assert {c.dim for c in cones} == {2, 3}
        verdicts = []
        for c in cones:
            found = brute_generators(c)
            try:
                g = gorenstein_generator(c)
            except NotGorenstein:
                assert found == []
                verdicts.append(False)
            else:
                assert found == [g.vector]
                verdicts.append(True)
        assert any(verdicts) and not all(verdicts)
