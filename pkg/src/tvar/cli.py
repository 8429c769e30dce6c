"""Command line front end.

Exit status: 0 for a valid instance or an affirmative verdict, 2 for a
negative verdict, 1 for errors (unreadable input, refused parameters).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from pathlib import Path

from . import io
from .model import fmt, fmt_vec, is_cartier, support_to_weil, validate


class CliError(Exception):
    pass


def _support(inst: io.Instance):
    if inst.support is not None:
        return inst.fd, inst.support
    if inst.polytope is not None:
        from .positivity import to_support
        return to_support(inst.polytope, inst.fd.base)
    raise CliError("instance carries neither a support function nor a divisorial polytope")


def _multiple(h, m: int):
    if m < 1:
        raise CliError(f"--m must be at least 1 (got {m})")
    return h if m == 1 else h.scale(m)


def _parse_u(text: str | None, n: int) -> tuple[int, ...]:
    if text is None:
        raise CliError("--u is required")
    try:
        u = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise CliError(f"--u: expected comma separated integers, got {text!r}") from None
    if len(u) != n:
        raise CliError(f"--u: expected {n} coordinates")
    return u


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, report dict, table lines)


def cmd_validate(args):
    inst = io.load(args.file)
    rep = validate(inst.fd)
    problems = list(rep.violations)
    if inst.support is not None and rep.ok:
        if not is_cartier(support_to_weil(inst.support), inst.fd):
            problems.append("support function does not come from a Cartier divisor")
    if inst.polytope is not None:
        problems += [f"divisorial polytope: {p}" for p in inst.polytope.problems()]
    ok = not problems
    lines = ["valid" if ok else "invalid"] + [f"  {p}" for p in problems] + [f"  note: {n}" for n in rep.notes]
    return (0 if ok else 2), {"valid": ok, "violations": problems, "notes": rep.notes}, lines


def cmd_ample(args):
    from .positivity import is_ample
    inst = io.load(args.file)
    fd, h = _support(inst)
    rep = is_ample(_multiple(h, args.m))
    lines = [f"ample: {'yes' if rep.ok else 'no'} ({rep.status})"] + [f"  {d}" for d in rep.diagnostics]
    return (0 if rep.ok else 2), {"ample": rep.ok, "m": args.m, "status": rep.status,
                                  "diagnostics": rep.diagnostics}, lines


def cmd_bpf(args):
    from .positivity import basepoint_free
    inst = io.load(args.file)
    fd, h = _support(inst)
    try:
        rep = basepoint_free(_multiple(h, args.m))
    except ValueError as exc:
        raise CliError(str(exc)) from None
    bps = [{"fixed_point": c.point.label(fd), "u": list(c.u), "point": c.point.point,
            "obstruction": c.obstruction} for c in rep.basepoints]
    lines = [f"bpf: {'yes' if rep.free else 'no'} (m = {args.m}, {len(rep.checks)} fixed points)"]
    for b in bps:
        lines.append(f"  basepoint {b['fixed_point']} u={fmt_vec(b['u'])} obstruction={b['obstruction']}")
    return (0 if rep.free else 2), {"free": rep.free, "m": args.m, "fixed_points": len(rep.checks),
                                    "basepoints": bps}, lines


def cmd_fujita(args):
    from .fujita import BelowBound, TheoremViolation, verify_freeness
    inst = io.load(args.file)
    fd, h = _support(inst)
    if args.m < 1:
        raise CliError(f"--m must be at least 1 (got {args.m})")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BelowBound)
        try:
            rep = verify_freeness(fd, h, args.m)
        except TheoremViolation as exc:
            raise CliError(str(exc)) from None
        except ValueError as exc:
            raise CliError(str(exc)) from None
    wits = []
    for w in rep.witnesses:
        wits.append({"fixed_point": w.point.label(fd), "degree": list(w.degree),
                     "divisor": {p: c for p, c in w.fdiv if c},
                     "alpha": w.gorenstein.alpha if w.gorenstein else None,
                     "adjoint_degree": w.adjoint_degree,
                     "checks": dict(w.checks), "ok": w.ok})
    lines = [f"K_X + {args.m}H free: {'yes' if rep.free else 'no'} (d = {rep.dim}, "
             f"{len(wits)} witnesses, agree = {rep.agree})"]
    lines += [f"  warning: {n}" for n in rep.warnings]
    for w in wits:
        lines.append(f"  {w['fixed_point']}: u={fmt_vec(w['degree'])} "
                     f"{'ok' if w['ok'] else 'FAILED ' + ','.join(k for k, v in w['checks'].items() if not v)}")
    below = args.m < rep.dim + 1
    return (0 if rep.free else 2), {"free": rep.free, "m": args.m, "dim": rep.dim, "below_bound": below,
                                    "agree": rep.agree, "warnings": rep.warnings,
                                    "witnesses": wits}, lines


def cmd_inc(args):
    from .positivity import dual
    from .realization import (FaceEnumerationTooLarge, build, facet_census, faces, fiber,
                              fiber_lattice_count)
    inst = io.load(args.file)
    if inst.polytope is not None and args.m == 1:
        dp = inst.polytope
    else:
        _, h = _support(inst)
        dp = dual(_multiple(h, args.m))
    rp = build(dp)
    census = facet_census(rp)
    out = {"points": list(rp.points), "census": census, "facets": sum(census.values())}
    lines = [f"Inc: {rp.r} points, rank {rp.rank}, {out['facets']} facets "
             f"({', '.join(f'{k}: {v}' for k, v in census.items())})"]
    if args.faces:
        try:
            fs = faces(rp)
        except FaceEnumerationTooLarge as exc:
            raise CliError(str(exc)) from None
        top = rp.rank + rp.r - 1
        fv = [sum(1 for f in fs if f.dim == k) for k in range(top + 1)]
        out["f_vector"] = fv
        lines.append(f"  f-vector {fv}")
    if args.u is not None:
        u = _parse_u(args.u, rp.rank)
        if not rp.box.contains(u):
            raise CliError(f"u = {fmt_vec(u)} is outside the box")
        fb = fiber(rp, u)
        out["fiber"] = {"u": list(u), "bounds": io.enc_vec(fb.bounds), "dilation": io.enc(fb.dilation),
                        "lattice_points": fiber_lattice_count(rp, u),
                        "interior_lattice_points": fiber_lattice_count(rp, u, interior=True)}
        f = out["fiber"]
        lines.append(f"  fiber at {fmt_vec(u)}: dilation {fmt(fb.dilation)}, {f['lattice_points']} lattice "
                     f"points, {f['interior_lattice_points']} interior")
    return 0, out, lines


def cmd_family(args):
    from .family import FamilyParams, InvalidFamily, build_family, choose_parameters, nonfree_multiples
    from .positivity import is_ample, to_support
    if args.l is not None:
        ell = args.l
        if ell < 3:
            raise CliError(f"refused: l = {ell}; the construction needs l >= 3")
        k = args.k if args.k is not None else (ell - 1) // 2
        params = FamilyParams(ell, 4 * ell + 1, 1, k)
    else:
        k = args.k if args.k is not None else 1
        if k < 1:
            raise CliError("--k must be at least 1")
        params = choose_parameters(k)
    try:
        dp = build_family(params)
    except InvalidFamily as exc:
        raise CliError(f"refused: {exc}") from None
    fd, h = to_support(dp)
    amp = is_ample(h)
    rows = nonfree_multiples(dp, params.k, params.ell, params.lam)
    instance = io.dump_instance(fd, h, dp)
    name = f"family-l{params.ell}-lam{params.lam}-a{params.alpha}.json"
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / name).write_text(io.dumps(instance))
    table = [{"m": r.m, "degree": r.degree, "expected": r.expected, "basepoint": r.basepoint_at_vertex,
              "free": r.free} for r in rows]
    out = {"params": {"l": params.ell, "lambda": params.lam, "alpha": params.alpha, "k": params.k},
           "length": params.length, "validity": [io.enc(params.validity_lhs), params.validity_rhs],
           "ample": amp.ok, "instance_file": name, "multiples": table}
    lines = [f"family (l, lambda, alpha) = ({params.ell}, {params.lam}, {params.alpha}), box [0, {params.length}], "
             f"validity {fmt(params.validity_lhs)} > {params.validity_rhs}, ample: {'yes' if amp.ok else 'no'}"]
    lines += [f"  m={r['m']}: deg floor Psi^m(2m) = {r['degree']}, "
              f"{'basepoint at (2m, P0)' if r['basepoint'] else 'no basepoint there'}, "
              f"{'free' if r['free'] else 'not free'}" for r in table]
    ok = amp.ok and all(r.consistent for r in rows)
    return (0 if ok else 2), out, lines, instance


def cmd_sections(args):
    from .positivity import sections
    inst = io.load(args.file)
    fd, h = _support(inst)
    u = _parse_u(args.u, fd.rank)
    s = sections(_multiple(h, args.m), u)
    out = {"m": args.m, "u": list(u), "in_box": s.in_box, "divisor": {p: c for p, c in s.divisor if c},
           "degree": s.degree, "dimension": s.dimension}
    lines = [f"H^0 weight {fmt_vec(u)} of {args.m}H: dimension {s.dimension}"
             + (f" (degree {s.degree})" if s.degree is not None else " (outside the box)")]
    return 0, out, lines


COMMANDS = {
    "validate": cmd_validate, "ample": cmd_ample, "bpf": cmd_bpf, "fujita": cmd_fujita,
    "inc": cmd_inc, "family": cmd_family, "sections": cmd_sections,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tvar", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, file=True, m=True, u=False):
        if file:
            p.add_argument("file", help="instance JSON")
        if m:
            p.add_argument("--m", type=int, default=1, help="multiple of the polarization (default 1)")
        if u:
            p.add_argument("--u", help="weight as comma separated integers")
        fmt_group = p.add_mutually_exclusive_group()
        fmt_group.add_argument("--json", dest="style", action="store_const", const="json")
        fmt_group.add_argument("--table", dest="style", action="store_const", const="table")
        p.add_argument("--out", help="directory for the report (and generated files)")
        p.add_argument("--timing", action="store_true", help="add wall time to the report")

    common(sub.add_parser("validate", help="check fansy divisor, marking and support data"), m=False)
    common(sub.add_parser("ample", help="ampleness of mH"))
    common(sub.add_parser("bpf", help="basepoint freeness of mH"))
    common(sub.add_parser("fujita", help="freeness of K_X + mH with witnesses"))
    p = sub.add_parser("inc", help="realization polytope census and fibers")
    common(p, u=True)
    p.add_argument("--faces", action="store_true", help="enumerate all faces (bounded by TVAR_FACE_CAP)")
    p = sub.add_parser("family", help="generate an ample divisor with non-free multiples")
    common(p, file=False, m=False)
    p.add_argument("--k", type=int, help="all multiples m <= k should have basepoints")
    p.add_argument("--l", type=int, help="number of points carrying g")
    common(sub.add_parser("sections", help="weight space of global sections"), u=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    instance = None
    try:
        res = COMMANDS[args.command](args)
        if args.command == "family":
            code, body, lines, instance = res
        else:
            code, body, lines = res
            instance = json.loads(Path(args.file).read_text())
    except (io.ParseError, CliError) as exc:
        print(f"tvar {args.command}: {exc}", file=sys.stderr)
        return 1
    rep = io.report(args.command, instance, code == 0, **body)
    if args.timing:
        rep["timing"] = round(time.perf_counter() - t0, 3)
    text = io.dumps(rep)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"{args.command}-report.json").write_text(text)
    if args.style == "json":
        sys.stdout.write(text)
    else:
        print("\n".join(lines))
        if args.timing:
            print(f"  time {rep['timing']} s")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
