"""
On-disk format for complexes, twists and decompositions.

A complex file is a JSON object::

    {
      "format": "twdeligne-complex",
      "version": 1,
      "name": "annulus3",
      "description": "...",
      "cells": {"0": ["U", "V", "W"], "1": ["UV", "UW", "VW"]},
      "faces": {"1": {"UV": ["V", "U"], "UW": ["W", "U"], "VW": ["W", "V"]}},
      "twists": {"mobius": {"UV": -1, "UW": -1, "VW": -1}},
      "decompositions": {"two-arcs": {"U": {"1": ["UV", "UW"]}, "V": {"1": ["VW"]}}},
      "expected": {"mobius": {"z": ["0", "Z/2"], "deligne": ["0", "Z/2 (+) Forms(0)"]}}
    }

Cell identifiers are strings, kept in file order. Face lists are ordered
``d_0`` first. Decomposition pieces list generating cells per degree; the
piece is their face closure. ``twists``, ``decompositions`` and
``expected`` are optional. The twist ``trivial`` always exists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from twdeligne.deligne import deligne_group
from twdeligne.nerve import (
    DeltaSet,
    DeltaSetError,
    SubComplex,
    TwistCocycle,
    validate,
    validate_twist,
)
from twdeligne.twisted_cochain import Ring, twisted_cohomology
from twdeligne.verify import MvDecomposition

FORMAT = "twdeligne-complex"
VERSION = 1
EXPECTED_RINGS = ("z", "q", "fp:2", "fp:3", "rz")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        super().__init__(message)
        self.line, self.field = line, field


class ValidationError(ValueError):
    pass


@dataclass
class ComplexFile:
    complex: DeltaSet
    twists: dict[str, TwistCocycle] = field(default_factory=dict)
    decompositions: dict[str, MvDecomposition] = field(default_factory=dict)
    expected: dict[str, dict[str, list[str]]] = field(default_factory=dict)
    name: str = ""
    description: str = ""

    def twist(self, name: str) -> TwistCocycle:
        if name in self.twists:
            return self.twists[name]
        if name == "trivial":
            return TwistCocycle.trivial(self.complex)
        raise KeyError(f"no twist named {name!r}; available: {', '.join(self.twist_names())}")

    def twist_names(self) -> list[str]:
        names = list(self.twists)
        return names if "trivial" in names else ["trivial"] + names


def render_value(ring: Ring, value) -> str:
    if ring.kind in ("Z", "RZ"):
        return str(value)
    if value == 0:
        return "0"
    return f"{ring}" if value == 1 else f"{ring}^{value}"


def compute_groups(K: DeltaSet, eta: TwistCocycle, ring: Ring) -> list[str]:
    return [render_value(ring, twisted_cohomology(K, eta, ring, k)) for k in range(K.dimension + 1)]


def compute_expected(K: DeltaSet, eta: TwistCocycle) -> dict[str, list[str]]:
    out = {r: compute_groups(K, eta, Ring.parse(r)) for r in EXPECTED_RINGS}
    out["deligne"] = [str(deligne_group(K, eta, n)) for n in range(K.dimension + 1)]
    return out


def _field(d: dict, key: str, kind, where: str, required: bool = True):
    if key not in d:
        if required:
            raise ParseError(f"missing field {where}{key!r}", field=f"{where}{key}")
        return None
    v = d[key]
    if not isinstance(v, kind):
        raise ParseError(f"field {where}{key!r} should be {getattr(kind, '__name__', kind)}",
                         field=f"{where}{key}")
    return v


def loads_complex(text: str) -> ComplexFile:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno) from e
    if not isinstance(d, dict):
        raise ParseError("top level must be an object")
    if d.get("format", FORMAT) != FORMAT:
        raise ParseError(f"unknown format {d.get('format')!r}", field="format")
    version = _field(d, "version", int, "")
    if version != VERSION:
        raise ParseError(f"unsupported version {version}", field="version")
    cells_d = _field(d, "cells", dict, "")
    faces_d = _field(d, "faces", dict, "", required=False) or {}
    try:
        degrees = sorted(int(k) for k in cells_d)
    except ValueError as e:
        raise ParseError("cell degrees must be integers", field="cells") from e
    if degrees != list(range(len(degrees))):
        raise ParseError("cell degrees must be 0, 1, ..., n without gaps", field="cells")
    cells, faces = [], []
    for k in degrees:
        ids = cells_d[str(k)]
        if not isinstance(ids, list) or not all(isinstance(c, str) for c in ids):
            raise ParseError(f"cells of degree {k} must be a list of strings", field=f"cells.{k}")
        cells.append(ids)
        fk = faces_d.get(str(k), {}) if k else {}
        if not isinstance(fk, dict):
            raise ParseError(f"faces of degree {k} must be an object", field=f"faces.{k}")
        for c, fs in fk.items():
            if not isinstance(fs, list) or not all(isinstance(x, str) for x in fs):
                raise ParseError(f"faces of {c!r} must be a list of strings", field=f"faces.{k}.{c}")
        faces.append(fk)
    K = DeltaSet(cells, faces, name=d.get("name", ""))
    try:
        validate(K)
    except DeltaSetError as e:
        raise ValidationError(f"{type(e).__name__}: {e}") from e

    twists = {}
    for name, vals in (_field(d, "twists", dict, "", required=False) or {}).items():
        if not isinstance(vals, dict):
            raise ParseError(f"twist {name!r} must be an object", field=f"twists.{name}")
        unknown = [e for e in vals if not K.has(1, e)]
        if unknown:
            raise ValidationError(f"twist {name!r} names unknown 1-cells {unknown}")
        try:
            eta = TwistCocycle(vals)
            ok = validate_twist(K, eta)
        except (DeltaSetError, ValueError) as e:
            raise ValidationError(f"twist {name!r}: {e}") from e
        if not ok:
            raise ValidationError(f"twist {name!r} breaks the cocycle law on a 2-cell")
        twists[name] = eta

    decomps = {}
    for name, pieces in (_field(d, "decompositions", dict, "", required=False) or {}).items():
        try:
            subs = []
            for part in ("U", "V"):
                gens = [(int(k), c) for k, ids in pieces[part].items() for c in ids]
                subs.append(SubComplex.closure(K, gens))
            decomps[name] = MvDecomposition(K, *subs)
        except (KeyError, TypeError, AttributeError) as e:
            raise ParseError(f"malformed decomposition {name!r}", field=f"decompositions.{name}") from e
        except DeltaSetError as e:
            raise ValidationError(f"decomposition {name!r}: {e}") from e

    expected = _field(d, "expected", dict, "", required=False) or {}
    return ComplexFile(K, twists, decomps, expected, d.get("name", ""), d.get("description", ""))


def shipped_fixture(name: str) -> Path | None:
    p = resources.files("twdeligne") / "fixtures" / name
    return Path(str(p)) if p.is_file() else None


def resolve_input(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    shipped = shipped_fixture(p.name)
    if shipped is not None:
        return shipped
    raise ParseError(f"no such file: {path}")


def parse_complex_file(path: str | Path) -> ComplexFile:
    p = resolve_input(str(path))
    try:
        text = p.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"{p} is not UTF-8") from e
    return loads_complex(text)


def dumps_complex(cf: ComplexFile) -> str:
    K = cf.complex
    d = {
        "format": FORMAT,
        "version": VERSION,
        "name": cf.name or K.name,
        "description": cf.description,
        "cells": {str(k): list(cs) for k, cs in enumerate(K.cells)},
        "faces": {str(k): {c: list(K.faces[k][c]) for c in K.cells[k]}
                  for k in range(1, K.dimension + 1)},
    }
    if cf.twists:
        d["twists"] = {n: {e: eta[e] for e in K.cells_of(1)} for n, eta in cf.twists.items()}
    if cf.decompositions:
        d["decompositions"] = {
            n: {part: {str(k): [c for c in K.cells[k] if c in S.cells[k]]
                       for k in range(K.dimension + 1) if S.cells[k]}
                for part, S in (("U", M.U), ("V", M.V))}
            for n, M in cf.decompositions.items()}
    if cf.expected:
        d["expected"] = cf.expected
    return json.dumps(d, indent=1, ensure_ascii=False) + "\n"
