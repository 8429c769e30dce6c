import warnings

import pytest

from tvar.fujita import (BelowBound, FujitaContext, TheoremViolation, adjoint_section_test,
                         adjoint_support, freeness_witness, verify_freeness)
from tvar.model import CurveBase, fixed_points
from tvar.positivity import GenusRefused, basepoint_free, nef_certificate


def test_example_free_at_four(ex1):
    fd, h = ex1
    rep = verify_freeness(fd, h, 4)
    assert rep.free and rep.agree and rep.dim == 3
    assert len(rep.witnesses) == 33 and all(w.ok for w in rep.witnesses)
    names = {n for w in rep.witnesses for n, _ in w.checks}
    assert {"item1_interior", "item2_fiber_point", "degree_bound", "order_match", "local_generator"} <= names


def test_compact_cell_witness(ex1):
    fd, h = ex1
    ctx = FujitaContext.create(fd, h, 4)
    x = next(x for x in fixed_points(fd) if x.point == "P0" and fd.slice("P0").cells[x.cell].is_bounded)
    w = freeness_witness(ctx, x, adjoint_support(ctx))
    assert w.degree == (0, 0)
    assert dict(w.fdiv)["P0"] == -20
    assert w.adjoint_degree == 6
    assert adjoint_section_test(ctx, w.section())


def test_witness_sections_are_adjoint_sections(ex1):
    fd, h = ex1
    ctx = FujitaContext.create(fd, h, 5)
    adj = adjoint_support(ctx)
    for x in fixed_points(fd)[:8]:
        w = freeness_witness(ctx, x, adj)
        assert w.ok
        assert sum(c for _, c in w.fdiv) == 0


def test_below_bound_warns(ex1):
    fd, h = ex1
    with pytest.warns(BelowBound):
        rep = verify_freeness(fd, h, 1)
    assert any("below d+1" in n for n in rep.warnings)


def test_adjoint_is_nef_and_direct_route_agrees(ex1):
    fd, h = ex1
    ctx = FujitaContext.create(fd, h, 4)
    adj = adjoint_support(ctx)
    assert nef_certificate(adj).ok
    assert basepoint_free(adj).free


def test_family_surface_free_at_three(fam):
    _, _, fd, h = fam
    rep = verify_freeness(fd, h, 3)
    assert rep.free and rep.dim == 2 and all(w.ok for w in rep.witnesses)
    assert rep.witnesses[0].point.kind == "contraction"


def test_refusals(ex1):
    fd, h = ex1
    with pytest.raises(ValueError):
        verify_freeness(fd, -h, 4)
    base = CurveBase(1, fd.base.points, (), ())
    fd1 = fd.__class__(base, {p: fd.slice(p) for p in fd.stored()}, fd.fan, fd.marking)
    h1 = h.__class__(fd1, h.linear, {p: h.data(p) for p in fd.points})
    with pytest.raises(GenusRefused):
        FujitaContext.create(fd1, h1, 4)
    with pytest.raises(ValueError):
        FujitaContext.create(fd, h, 0)


def test_violation_message():
    err = TheoremViolation("boom", "item 1")
    assert str(err).startswith("theorem-machinery violation: ") and err.step == "item 1"


def test_context_shift(ex1):
    fd, h = ex1
    ctx = FujitaContext.create(fd, h, 4)
    assert ctx.b["*"] == 1 and sum(ctx.b.values()) == len(ctx.points) - 2
    assert ctx.psi.psi_of("P6")((0, 0)) == ctx.dual_m.psi_of("P6")((0, 0)) - 1
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ctx.realization()
