"""JSON instance files and reports.  Rationals are written as ``"p/q"`` strings.

Instance layout::

    {"format": "tvar-instance", "version": 1, "rank": 2, "genus": 0,
     "points": [{"label": "P0", "canonical": 0, "coord": "0"}, ...],
     "fan": {"rays": [[1, 1], ...], "cones": [[0, 1], ...]},
     "slices": {"P0": {"vertices": [...], "rays": [...],
                       "cells": [{"v": [0, 1], "r": []}, ...]}},
     "marking": [[0], [0, 1], ...],                # ray index sets into fan.rays
     "support": {"linear": [[0, -1], ...],         # one per fan cone
                 "cells": {"P0": [{"u": [0, 0], "a": -5}, ...]}},
     "polytope": {"box": [[1, 0], ...],
                  "psi": {"P0": [[0, 0, 5], ...]}}}  # graph vertices (u, Psi(u))

``support`` and ``polytope`` are optional.  Slice cells are listed in the
library's canonical order when written; on reading any order is accepted.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .geom import PolyComplex, Polyhedron, PWAConcave
from .model import GENERIC, CartierSupportFunction, CurveBase, FansyDivisor, fmt
from .positivity import DivisorialPolytope

FORMAT = "tvar-instance"
VERSION = 1
REPORT_SCHEMA = "tvar-report/1"


class ParseError(ValueError):
    """Malformed instance; the message starts with the offending location."""


class Instance:
    def __init__(self, fd: FansyDivisor, support: CartierSupportFunction | None = None,
                 polytope: DivisorialPolytope | None = None):
        self.fd = fd
        self.support = support
        self.polytope = polytope

    def __repr__(self) -> str:
        return f"Instance({self.fd!r}, support={self.support is not None}, polytope={self.polytope is not None})"


# ---------------------------------------------------------------------------
# scalars


def rat(x, where: str) -> Fraction:
    if isinstance(x, bool):
        raise ParseError(f"{where}: expected a number, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ParseError(f"{where}: expected an integer or a \"p/q\" string, got {x!r}")


def integer(x, where: str) -> int:
    q = rat(x, where)
    if q.denominator != 1:
        raise ParseError(f"{where}: expected an integer, got {fmt(q)}")
    return int(q)


def enc(x) -> int | str:
    x = Fraction(x)
    return int(x) if x.denominator == 1 else fmt(x)


def enc_vec(v) -> list:
    return [enc(c) for c in v]


def _vec(raw, n: int, where: str, kind=rat) -> tuple:
    if not isinstance(raw, list) or len(raw) != n:
        raise ParseError(f"{where}: expected a list of {n} numbers")
    return tuple(kind(c, f"{where}[{i}]") for i, c in enumerate(raw))


def _field(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _idx(raw, size: int, where: str) -> list[int]:
    if not isinstance(raw, list):
        raise ParseError(f"{where}: expected a list of indices")
    out = []
    for i, c in enumerate(raw):
        k = integer(c, f"{where}[{i}]")
        if not 0 <= k < size:
            raise ParseError(f"{where}[{i}]: index {k} out of range")
        out.append(k)
    return out


# ---------------------------------------------------------------------------
# reading


def _cells(raw, n: int, where: str, fan: bool = False) -> tuple[list[Polyhedron], list[tuple]]:
    """Maximal cells in file order, and the ray table."""
    if fan:
        rays = [_vec(r, n, f"{where}.rays[{i}]", integer) for i, r in enumerate(_field(raw, "rays", where))]
        cones = _field(raw, "cones", where)
        return [Polyhedron.cone([rays[k] for k in _idx(c, len(rays), f"{where}.cones[{i}]")], n)
                for i, c in enumerate(cones)], rays
    verts = [_vec(v, n, f"{where}.vertices[{i}]") for i, v in enumerate(_field(raw, "vertices", where))]
    rays = [_vec(r, n, f"{where}.rays[{i}]", integer) for i, r in enumerate(raw.get("rays", []))]
    cells = []
    for i, c in enumerate(_field(raw, "cells", where)):
        w = f"{where}.cells[{i}]"
        vs = [verts[k] for k in _idx(_field(c, "v", w), len(verts), w + ".v")]
        rs = [rays[k] for k in _idx(c.get("r", []), len(rays), w + ".r")]
        if not vs:
            raise ParseError(f"{w}: a cell needs at least one vertex")
        cells.append(Polyhedron(vs, rs, n))
    return cells, rays


def _concave_from_graph(raw, box: Polyhedron, n: int, where: str) -> PWAConcave:
    """Upper hull of the listed graph vertices over ``box``."""
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{where}: expected a nonempty list of graph vertices")
    pts = [_vec(v, n + 1, f"{where}[{i}]") for i, v in enumerate(raw)]
    down = (0,) * n + (-1,)
    hull = Polyhedron(pts, [down], n + 1)
    pieces = []
    for a, b in hull.inequalities:
        ay = a[-1]
        if ay == 0:
            continue
        if ay > 0:
            raise ParseError(f"{where}: graph vertices do not bound a concave function")
        # a_u.u + a_y y >= b  <=>  y <= (b - a_u.u) / a_y
        pieces.append((tuple(-c / ay for c in a[:-1]), b / ay))
    if not pieces:
        pieces = [((0,) * n, max(p[-1] for p in pts))]
    f = PWAConcave(pieces, box, n)
    for p in pts:
        if f(p[:-1]) != p[-1]:
            raise ParseError(f"{where}: {list(map(fmt, p))} is not on the upper hull")
    return f


def parse_instance(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise ParseError("$: expected a JSON object")
    fmt_name = data.get("format", FORMAT)
    if fmt_name != FORMAT:
        raise ParseError(f"$.format: unknown format {fmt_name!r}")
    version = integer(data.get("version", VERSION), "$.version")
    if version != VERSION:
        raise ParseError(f"$.version: unsupported version {version}")
    n = integer(_field(data, "rank", "$"), "$.rank")
    if n < 1:
        raise ParseError("$.rank: must be positive")
    genus = integer(data.get("genus", 0), "$.genus")
    labels, canon, coords = [], {}, {}
    for i, p in enumerate(_field(data, "points", "$")):
        w = f"$.points[{i}]"
        lab = _field(p, "label", w)
        if not isinstance(lab, str) or not lab:
            raise ParseError(f"{w}.label: expected a nonempty string")
        labels.append(lab)
        if "canonical" in p:
            canon[lab] = integer(p["canonical"], w + ".canonical")
        if "coord" in p:
            coords[lab] = str(p["coord"])
    try:
        if genus == 0 and not canon:
            base = CurveBase.rational(labels, None, coords)
        else:
            cz = tuple((p, canon[p]) for p in labels if canon.get(p, 0))
            base = CurveBase(genus, tuple(labels), cz, tuple(sorted(coords.items())))
    except ValueError as exc:
        raise ParseError(f"$.points: {exc}") from None

    file_cones, fan_rays = _cells(_field(data, "fan", "$"), n, "$.fan", fan=True)
    fan = PolyComplex(file_cones, n)
    file_cells, slices = {}, {}
    for p, raw in (data.get("slices") or {}).items():
        if p not in labels:
            raise ParseError(f"$.slices.{p}: unknown point")
        file_cells[p], _ = _cells(raw, n, f"$.slices.{p}")
        slices[p] = PolyComplex(file_cells[p], n)
    marking = []
    for i, c in enumerate(data.get("marking", [])):
        ks = _idx(c, len(fan_rays), f"$.marking[{i}]")
        marking.append(Polyhedron.cone([fan_rays[k] for k in ks], n))
    try:
        fd = FansyDivisor(base, slices, fan, marking)
    except ValueError as exc:
        raise ParseError(f"$.slices: {exc}") from None

    support = None
    if "support" in data:
        raw = data["support"]
        lin_raw = _field(raw, "linear", "$.support")
        if not isinstance(lin_raw, list) or len(lin_raw) != len(file_cones):
            raise ParseError("$.support.linear: one slope per fan cone is required")
        lin_by = {c: _vec(u, n, f"$.support.linear[{i}]", integer)
                  for i, (c, u) in enumerate(zip(file_cones, lin_raw))}
        linear = [lin_by[c] for c in fan.cells]
        cells = {}
        for p, rows in (raw.get("cells") or {}).items():
            w = f"$.support.cells.{p}"
            if p not in labels:
                raise ParseError(f"{w}: unknown point")
            listed = file_cells.get(p, file_cones)
            if not isinstance(rows, list) or len(rows) != len(listed):
                raise ParseError(f"{w}: one (u, a) per slice cell is required")
            by = {}
            for j, (c, row) in enumerate(zip(listed, rows)):
                by[c] = (_vec(_field(row, "u", f"{w}[{j}]"), n, f"{w}[{j}].u", integer),
                         integer(_field(row, "a", f"{w}[{j}]"), f"{w}[{j}].a"))
            cells[p] = [by[c] for c in fd.slice(p).cells]
        try:
            support = CartierSupportFunction(fd, linear, cells)
        except ValueError as exc:
            raise ParseError(f"$.support: {exc}") from None

    polytope = None
    if "polytope" in data:
        raw = data["polytope"]
        box_v = [_vec(v, n, f"$.polytope.box[{i}]") for i, v in enumerate(_field(raw, "box", "$.polytope"))]
        box = Polyhedron(box_v, (), n)
        psi = {}
        for p, g in (raw.get("psi") or {}).items():
            if p not in labels and p != GENERIC:
                raise ParseError(f"$.polytope.psi.{p}: unknown point")
            psi[p] = _concave_from_graph(g, box, n, f"$.polytope.psi.{p}")
        polytope = DivisorialPolytope(box, psi, base)
    return Instance(fd, support, polytope)


def loads(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_instance(data)


def load(path: str | Path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return loads(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# writing


def _complex_json(cx: PolyComplex) -> dict:
    verts = cx.vertices()
    rays = cx.rays()
    cells = []
    for c in cx.cells:
        cells.append({"v": [verts.index(v) for v in c.vertices], "r": [rays.index(r) for r in c.rays]})
    return {"vertices": [enc_vec(v) for v in verts], "rays": [list(r) for r in rays], "cells": cells}


def dump_instance(fd: FansyDivisor, support: CartierSupportFunction | None = None,
                  polytope: DivisorialPolytope | None = None) -> dict:
    base = fd.base
    points = []
    for p in base.points:
        row: dict[str, Any] = {"label": p, "canonical": base.a(p)}
        if p in dict(base.coords):
            row["coord"] = dict(base.coords)[p]
        points.append(row)
    fan_rays = fd.fan.rays()
    fan = {"rays": [list(r) for r in fan_rays],
           "cones": [[fan_rays.index(r) for r in c.rays] for c in fd.fan.cells]}
    marking = sorted(sorted(fan_rays.index(r) for r in c.rays) for c in fd.marking)
    marking.sort(key=lambda s: (len(s), s))
    out: dict[str, Any] = {
        "format": FORMAT, "version": VERSION, "rank": fd.rank, "genus": base.genus,
        "points": points, "fan": fan,
        "slices": {p: _complex_json(fd.slice(p)) for p in fd.stored()},
        "marking": marking,
    }
    if support is not None:
        out["support"] = {
            "linear": [list(u) for u in support.linear],
            "cells": {p: [{"u": list(u), "a": a} for u, a in support.data(p)] for p in fd.stored()},
        }
    if polytope is not None:
        out["polytope"] = dump_polytope(polytope)
    return out


def dump_polytope(dp: DivisorialPolytope) -> dict:
    return {"box": [enc_vec(v) for v in dp.box.vertices],
            "psi": {p: [enc_vec(tuple(x) + (y,)) for x, y in f.graph_vertices()]
                    for p, f in dp.psi.items()}}


def dumps(obj: dict) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def digest(obj: dict) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()[:16]


def report(command: str, instance: dict | None, verdict: Any, **details) -> dict:
    out = {"schema": REPORT_SCHEMA, "command": command, "verdict": verdict}
    if instance is not None:
        out["instance"] = digest(instance)
    out.update(details)
    return out


__all__ = ["Instance", "ParseError", "parse_instance", "loads", "load", "dump_instance", "dump_polytope",
           "dumps", "digest", "report", "enc", "enc_vec", "rat"]
