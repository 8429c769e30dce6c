import json
from importlib import resources
from pathlib import Path

import pytest

from tvar import cli, io
from tvar.positivity import dual
from tvar.realization import build, facet_census, faces

DATA = resources.files("tvar") / "data"
EX1 = str(DATA / "example1.json")
FAM = str(DATA / "family-l5-lam21-a1.json")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out)


def trivial_line(tmp_path, marking):
    """Rank-1 instance with every slice equal to the fan, so deg S^sigma = sigma."""
    sl = {"vertices": [[0]], "rays": [[-1], [1]], "cells": [{"v": [0], "r": [0]}, {"v": [0], "r": [1]}]}
    doc = {"format": "tvar-instance", "version": 1, "rank": 1, "genus": 0,
           "points": [{"label": "P0", "canonical": 0}, {"label": "P1", "canonical": -2}],
           "fan": {"rays": [[-1], [1]], "cones": [[0], [1]]},
           "slices": {"P0": sl, "P1": sl}, "marking": marking}
    path = tmp_path / "line.json"
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.mark.parametrize("fixture", sorted(p.name for p in DATA.iterdir() if p.name.endswith(".json")))
def test_every_fixture_validates(capsys, fixture):
    code, rep = run_json(capsys, "validate", str(DATA / fixture))
    assert code == 0 and rep["valid"], rep


def test_fixtures_round_trip_byte_identical():
    for p in DATA.iterdir():
        if p.name.endswith(".json"):
            text = p.read_text()
            inst = io.loads(text)
            assert io.dumps(io.dump_instance(inst.fd, inst.support, inst.polytope)) == text


def test_truncated_file_reports_location(capsys, tmp_path):
    text = Path(EX1).read_text()
    bad = tmp_path / "cut.json"
    bad.write_text(text[: len(text) // 2])
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 1
    assert "line" in err and "column" in err


def test_bad_field_reports_path(capsys, tmp_path):
    doc = json.loads(Path(EX1).read_text())
    doc["fan"]["rays"][0] = ["x", 1]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 1 and "$.fan.rays[0]" in err


def test_marking_condition_two_names_the_cone(capsys, tmp_path):
    code, rep = run_json(capsys, "validate", trivial_line(tmp_path, [[1]]))
    assert code == 2
    assert any("condition (2)" in v and "cone((1))" in v for v in rep["violations"])
    code, rep = run_json(capsys, "validate", trivial_line(tmp_path, []))
    assert code == 0


def test_ample_and_bpf(capsys):
    code, rep = run_json(capsys, "ample", EX1)
    assert code == 0 and rep["ample"]
    code, rep = run_json(capsys, "bpf", EX1)
    assert code == 2 and not rep["free"]
    assert [(b["point"], b["u"], b["obstruction"]) for b in rep["basepoints"]] == [("P0", [0, 0], -1)]
    code, rep = run_json(capsys, "bpf", EX1, "--m", "2")
    assert code == 0 and rep["free"]


@pytest.mark.parametrize("cmd", ["ample", "bpf", "fujita"])
def test_zero_multiple_rejected(capsys, cmd):
    code, out, err = run(capsys, cmd, EX1, "--m", "0")
    assert code == 1 and "--m" in err


def test_fujita_example(capsys):
    code, rep = run_json(capsys, "fujita", EX1, "--m", "4")
    assert code == 0 and rep["free"] and rep["agree"]
    assert len(rep["witnesses"]) == 33 and all(w["ok"] for w in rep["witnesses"])
    code, rep = run_json(capsys, "fujita", EX1, "--m", "1")
    assert rep["below_bound"] and any("d+1" in w for w in rep["warnings"])


def test_fujita_family_fixture(capsys):
    code, rep = run_json(capsys, "fujita", FAM, "--m", "3")
    assert code == 0 and rep["free"]


def test_inc_fiber_and_census(capsys):
    code, rep = run_json(capsys, "inc", EX1, "--u", "0,0")
    assert code == 0 and rep["facets"] == 14
    assert rep["fiber"]["dilation"] == 2 and rep["fiber"]["lattice_points"] == 0
    inst = io.load(EX1)
    fs = faces(build(inst.polytope))
    facets = [f for f in fs if f.dim == max(g.dim for g in fs) - 1]
    assert len(facets) == sum(facet_census(build(inst.polytope)).values())


def test_inc_outside_box(capsys):
    code, out, err = run(capsys, "inc", EX1, "--u", "3,3")
    assert code == 1 and "outside" in err


def test_inc_from_support_matches_polytope(capsys, ex1):
    fd, h = ex1
    assert facet_census(build(dual(h))) == facet_census(build(io.load(EX1).polytope))


def test_sections(capsys):
    code, rep = run_json(capsys, "sections", EX1, "--m", "2", "--u", "0,0")
    assert rep["dimension"] == 5 and rep["degree"] == 4


def test_family_table_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    code, rep = run_json(capsys, "family", "--k", "2", "--out", str(a))
    assert code == 0
    assert rep["params"] == {"l": 5, "lambda": 21, "alpha": 1, "k": 2}
    assert [r["degree"] for r in rep["multiples"]] == [-3, -1]
    assert all(r["basepoint"] and not r["free"] for r in rep["multiples"])
    run_json(capsys, "family", "--k", "2", "--out", str(b))
    name = rep["instance_file"]
    assert (a / name).read_bytes() == (b / name).read_bytes()
    assert (a / "family-report.json").read_bytes() == (b / "family-report.json").read_bytes()
    assert (a / name).read_text() == Path(FAM).read_text()


def test_family_refuses_small_l(capsys):
    code, out, err = run(capsys, "family", "--l", "2")
    assert code == 1 and "l >= 3" in err


def test_reports_are_deterministic_and_parse(capsys, tmp_path):
    for d in ("x", "y"):
        run(capsys, "bpf", EX1, "--out", str(tmp_path / d))
    x = (tmp_path / "x" / "bpf-report.json").read_text()
    assert x == (tmp_path / "y" / "bpf-report.json").read_text()
    rep = json.loads(x)
    assert rep["schema"] == "tvar-report/1" and rep["command"] == "bpf"
    assert rep["instance"] == io.digest(json.loads(Path(EX1).read_text()))


def test_table_output(capsys):
    code, out, err = run(capsys, "bpf", EX1)
    assert out.startswith("bpf: no") and "basepoint P0" in out
