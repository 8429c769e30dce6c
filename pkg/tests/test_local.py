from fractions import Fraction

import pytest

from helpers import brute_generators, random_cones
from tvar.geom import Polyhedron, PWAConcave
from tvar.geom.linalg import dot, rank
from tvar.local import (LocalCone, NotGorenstein, cell_cone, gorenstein_generator,
                        is_gorenstein_cone, local_cone)
from tvar.model import CurveBase
from tvar.positivity import DivisorialPolytope, dual


def _interval_polytope():
    box = Polyhedron([(0,), (4,)], (), 1)
    f = PWAConcave([((1,), 1), ((0,), 2), ((-1,), 4), ((-2,), 7)], box, 1)
    assert [y for _, y in f.graph_vertices()] == [1, 2, 2, 1, -1]
    return DivisorialPolytope(box, {"A": f}, CurveBase.rational(["A", "B"]))


def test_local_cone_at_interval_vertex():
    dp = _interval_polytope()
    c = local_cone(dp, "A", (2,))
    assert set(c.rays) == {(-1, 0), (1, -1)}
    g = gorenstein_generator(c)
    assert g.u == (0,) and g.alpha == -1
    assert sorted(l for _, l in g.lambdas) == [1, 1]


def test_local_cone_rejects_non_vertex():
    dp = _interval_polytope()
    with pytest.raises(ValueError):
        local_cone(dp, "A", (Fraction(5, 2),))


def test_compact_cell_cone_matches_local_cone(ex1):
    fd, h = ex1
    dp = dual(h)
    cell = next(c for c in fd.slice("P0").cells if c.is_bounded)
    assert set(local_cone(dp, "P0", (0, 0)).normals) == set(cell_cone(cell).normals)


def test_generator_invariants_on_example(ex1):
    fd, _ = ex1
    for p in fd.points:
        for cell in fd.slice(p).cells:
            c = cell_cone(cell)
            g = gorenstein_generator(c)
            assert all(dot(g.vector, n) == 1 for n in c.normals)
            assert all(0 < l <= 1 for _, l in g.lambdas)
            if len(c.rays) == c.dim:
                assert g.lambda_sum < c.dim
            recon = [sum(l * c.rays[i][k] for i, l in g.lambdas) for k in range(c.dim)]
            assert tuple(recon) == g.vector
            assert c.interior_contains(g.vector)
            assert not c.interior_contains(g.u + (g.alpha + 1,))


def test_not_gorenstein_cone():
    c = LocalCone.from_constraints([(1, 0), (-1, 3)])
    with pytest.raises(NotGorenstein):
        gorenstein_generator(c)
    assert not is_gorenstein_cone(c)


def test_smoothness():
    assert LocalCone.from_constraints([(1, 0), (0, 1)]).is_smooth()
    assert not LocalCone.from_constraints([(1, 0), (-1, 2)]).is_smooth()


def test_generator_matches_lattice_scan():
    for c in random_cones(1234, 20):
        found = brute_generators(c)
        try:
            g = gorenstein_generator(c)
        except NotGorenstein:
            assert found == []
        else:
            assert found == [g.vector]
            assert rank(c.rays, c.dim) == c.dim
