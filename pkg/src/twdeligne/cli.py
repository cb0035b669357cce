"""
Command-line front end.

    twdeligne compute  --input F [--twist NAME] --ring {z|q|fp:P|rz} [--degree K]
    twdeligne deligne  --input F [--twist NAME] --n N [--k K]
    twdeligne verify   {mv|diamond|trivial|oracle|all} --input F [--twist NAME]
    twdeligne generate {point|circle:M|annulus3|rp2|rp3|sphere2|...} --out F
    twdeligne twists   --input F

Human-readable text goes to stdout; ``--json`` prints the machine-readable
report instead. Exit status is 0 when every requested check passes, 1 when
some check fails and 2 on errors, which are written to stderr as a single
JSON line.
"""

from __future__ import annotations

import argparse
import json
import sys

from twdeligne import nerve
from twdeligne.deligne import ZeroDegreeRequest, deligne_group, deligne_sheaf_cohomology
from twdeligne.fileformat import (
    ComplexFile,
    ParseError,
    ValidationError,
    compute_expected,
    compute_groups,
    dumps_complex,
    parse_complex_file,
    render_value,
)
from twdeligne.report import Check, Report
from twdeligne.twisted_cochain import Ring, twisted_cohomology
from twdeligne.verify import (
    MvDecomposition,
    ball_split,
    check_diamond,
    check_mv,
    check_trivial_twist,
    oracle_suite,
    split_top_cells,
    two_arc_split,
)

MV_RINGS = ("z", "q", "fp:2", "fp:3")
DIAMOND_DEGREES = (1, 2, 3)

DESCRIPTIONS = {
    "point": "a single point; a contractible model",
    "annulus3": "nerve of a three-set good cover of the punctured plane",
    "rp2": "six-vertex triangulation of the real projective plane",
    "rp3": "real projective 3-space as the antipodal quotient of the octahedral sphere",
    "sphere2": "boundary of the tetrahedron",
}


class CliError(Exception):
    pass


def _subject(cf: ComplexFile, twist: str | None) -> dict:
    K = cf.complex
    return {"complex": cf.name or K.name, "twist": twist,
            "degrees": [0, K.dimension], "cells": [K.ncells(k) for k in range(K.dimension + 1)]}


def _twist_names(cf: ComplexFile, twist: str | None) -> list[str]:
    if twist is None:
        return cf.twist_names()
    try:
        cf.twist(twist)
    except KeyError as e:
        raise CliError(e.args[0]) from None
    return [twist]


# ---------------------------------------------------------------------------
# generate


def default_decompositions(K: nerve.DeltaSet, spec: str) -> dict[str, MvDecomposition]:
    if spec.startswith("circle") or spec == "annulus3":
        return {"two-arcs": two_arc_split(K)}
    if spec == "rp2":
        return {"ball-mobius": ball_split(K, "1")}
    if spec == "point":
        return {}
    return {"alternate": default_split(K)}


def default_split(K: nerve.DeltaSet) -> MvDecomposition:
    return split_top_cells(K, lambda i, t: i % 2 == 0)


def generate(spec: str) -> ComplexFile:
    try:
        K = nerve.build(spec)
    except (KeyError, ValueError) as e:
        raise CliError(f"cannot build {spec!r}: {e}") from None
    twists = {}
    if spec == "annulus3":
        twists["mobius"] = nerve.mobius_twist()
    elif spec.startswith("circle"):
        twists["mobius"] = nerve.TwistCocycle({e: -1 for e in K.cells_of(1)})
    else:
        for i, eta in enumerate(nerve.twist_classes_mod2(K)[1:], start=1):
            twists["w1" if i == 1 else f"class{i}"] = eta
    cf = ComplexFile(K, twists, default_decompositions(K, spec), name=spec.replace(":", ""),
                     description=DESCRIPTIONS.get(spec.split(":")[0], spec))
    cf.expected = {t: compute_expected(K, cf.twist(t)) for t in cf.twist_names()}
    return cf


# ---------------------------------------------------------------------------
# subcommands


def cmd_compute(args) -> tuple[Report, list[str]]:
    cf = parse_complex_file(args.input)
    ring = _ring(args.ring)
    name = args.twist or "trivial"
    eta = _twist(cf, name)
    K = cf.complex
    if args.degree is not None:
        text = [f"H{args.degree}={render_value(ring, twisted_cohomology(K, eta, ring, args.degree))}"]
        groups = {name: {ring.token: [text[0].split("=", 1)[1]]}}
    else:
        gs = compute_groups(K, eta, ring)
        text = [" ".join(f"H{k}={g}" for k, g in enumerate(gs))]
        groups = {name: {ring.token: gs}}
    return Report(_subject(cf, name), groups=groups), text


def cmd_deligne(args) -> tuple[Report, list[str]]:
    cf = parse_complex_file(args.input)
    name = args.twist or "trivial"
    eta = _twist(cf, name)
    if args.n < 0:
        raise CliError("--n must be >= 0")
    report = Report(_subject(cf, name))
    if args.k is None or args.k == 0:
        d = deligne_group(cf.complex, eta, args.n)
        report.deligne[name] = [str(d)]
        lines = [str(d)]
        if d.note:
            report.notes.append(d.note)
            if args.n == 0:
                lines.append(f"note: {d.note}")
        return report, lines
    try:
        v = deligne_sheaf_cohomology(cf.complex, eta, args.n, args.k)
    except ZeroDegreeRequest as e:  # pragma: no cover - guarded above
        raise CliError(str(e)) from None
    report.notes.append(f"H^{args.k}(D({args.n}))")
    report.deligne[name] = [str(v)]
    return report, [str(v)]


def _verify_checks(cf: ComplexFile, what: str, names: list[str]) -> tuple[list[Check], dict]:
    K = cf.complex
    checks, groups = [], {}
    for name in names:
        eta = cf.twist(name)
        tag = f"[{name}] "
        if what in ("mv", "all"):
            decomps = dict(cf.decompositions) or ({"alternate": default_split(K)} if K.dimension else {})
            for dname, M in decomps.items():
                for r in MV_RINGS:
                    checks += [Check(f"{tag}{dname} {c.name}", c.passed, c.detail)
                               for c in check_mv(M, eta, Ring.parse(r))]
        if what in ("diamond", "all"):
            for n in DIAMOND_DEGREES:
                checks += [Check(tag + c.name, c.passed, c.detail) for c in check_diamond(K, eta, n)]
        if what in ("oracle", "all"):
            checks += [Check(tag + c.name, c.passed, c.detail) for c in oracle_suite(K, eta)]
        if what == "all":
            got = compute_expected(K, eta)
            groups[name] = got
            for key, want in cf.expected.get(name, {}).items():
                have = got.get(key)
                checks.append(Check(f"{tag}recorded groups [{key}]", have == want,
                                    "" if have == want else f"recorded {want}, computed {have}"))
    if what in ("trivial", "all"):
        checks += check_trivial_twist(K)
    return checks, groups


def cmd_verify(args) -> tuple[Report, list[str]]:
    cf = parse_complex_file(args.input)
    names = _twist_names(cf, args.twist)
    checks, groups = _verify_checks(cf, args.what, names)
    report = Report(_subject(cf, args.twist), groups={n: {k: v for k, v in g.items() if k != "deligne"}
                                                      for n, g in groups.items()},
                    deligne={n: g["deligne"] for n, g in groups.items()}, checks=checks)
    failed = sum(not c.passed for c in checks)
    lines = [c.line() for c in checks]
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    return report, lines


def cmd_generate(args) -> tuple[Report, list[str]]:
    cf = generate(args.spec)
    text = dumps_complex(cf)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    report = Report(_subject(cf, None), groups={t: {k: v for k, v in e.items() if k != "deligne"}
                                                for t, e in cf.expected.items()},
                    deligne={t: e["deligne"] for t, e in cf.expected.items()})
    return report, [] if args.out == "-" else [f"wrote {args.out}"]


def cmd_twists(args) -> tuple[Report, list[str]]:
    cf = parse_complex_file(args.input)
    K = cf.complex
    reps = nerve.twist_classes_mod2(K)
    lines, notes = [], []
    for i, rep in enumerate(reps):
        members = [n for n in cf.twist_names() if nerve.cohomologous(K, cf.twist(n), rep)]
        bits = "".join(str(b) for b in rep.bits(K))
        label = ", ".join(members) if members else "-"
        lines.append(f"class {i}: bits {bits or '(no edges)'} named {label}")
        notes.append(lines[-1])
    return Report(_subject(cf, None), notes=notes), lines


# ---------------------------------------------------------------------------


def _ring(text: str) -> Ring:
    try:
        return Ring.parse(text)
    except ValueError as e:
        raise CliError(str(e)) from None


def _twist(cf: ComplexFile, name: str):
    try:
        return cf.twist(name)
    except KeyError as e:
        raise CliError(e.args[0]) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twdeligne",
                                description="Twisted cohomology and Deligne groups of finite Delta-sets.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, twist=True):
        sp.add_argument("--input", required=True, help="complex file (JSON); shipped fixtures by basename")
        if twist:
            sp.add_argument("--twist", help="named twist in the file (default: trivial)")
        sp.add_argument("--json", action="store_true", help="print the machine-readable report")

    c = sub.add_parser("compute", help="twisted cohomology groups")
    common(c)
    c.add_argument("--ring", required=True, help="z, q, fp:P or rz")
    c.add_argument("--degree", type=int)
    c.set_defaults(func=cmd_compute)

    d = sub.add_parser("deligne", help="Deligne group or sheaf cohomology of D(n)")
    common(d)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--k", type=int)
    d.set_defaults(func=cmd_deligne)

    v = sub.add_parser("verify", help="run the check harness")
    v.add_argument("what", choices=("mv", "diamond", "trivial", "oracle", "all"))
    common(v)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("generate", help="write a fixture file for a builder")
    g.add_argument("spec", help="point, circle:M, annulus3, rp2, rp3, sphere2, simplex:N or rp:N")
    g.add_argument("--out", required=True, help="output path, or - for stdout")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser("twists", help="list mod-2 twist class representatives")
    common(t, twist=False)
    t.set_defaults(func=cmd_twists)
    return p


def _error(kind: str, message: str, **extra) -> int:
    rec = {"error": kind, "message": message}
    rec.update({k: v for k, v in extra.items() if v is not None})
    sys.stderr.write(json.dumps(rec, sort_keys=True) + "\n")
    return 2


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # --help
        return 0 if e.code == 0 else 2
    except CliError as e:
        return _error("UsageError", str(e))
    try:
        report, lines = args.func(args)
    except ParseError as e:
        return _error("ParseError", str(e), line=e.line, field=e.field)
    except ValidationError as e:
        return _error("ValidationError", str(e))
    except CliError as e:
        return _error("UsageError", str(e))
    except (ValueError, OSError) as e:
        return _error(type(e).__name__, str(e))
    if getattr(args, "json", False):
        sys.stdout.write(report.to_json())
    else:
        for line in lines:
            print(line)
    return 0 if report.passed else 1


def main() -> None:
    sys.exit(run())
