"""
Delta-sets (semi-simplicial sets) as finite models of spaces, sign twists
on them, subcomplexes, and builders for the standard example spaces.

A k-cell ``c`` (k >= 1) has an ordered tuple of k+1 faces
``(d_0 c, ..., d_k c)``; ``d_i`` drops vertex ``i``. A nerve of a good cover
fits this shape with k-cells the components of (k+1)-fold overlaps.

>>> K = circle_nerve(3)
>>> validate(K).counts
(3, 3)
>>> len(twist_classes_mod2(K))
2
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from twdeligne.abelian import FieldCohomology, IntMatrix
from twdeligne.linalg import GF, field_solve


class DeltaSetError(ValueError):
    pass


class BrokenFaceReference(DeltaSetError):
    pass


class SimplicialIdentityViolation(DeltaSetError):
    pass


class MissingEdgeValue(DeltaSetError):
    pass


class NotFaceClosed(DeltaSetError):
    pass


class DeltaSet:
    """Cells per degree (file order is kept) and ordered face tuples.

    Construction does not check consistency; call :func:`validate`.
    Trailing empty degrees are dropped, so ``dimension`` is the top degree
    that actually has cells (-1 for the empty complex).
    """

    __slots__ = ("name", "cells", "faces", "_index")

    def __init__(self, cells: Sequence[Sequence[str]],
                 faces: Sequence[Mapping[str, Sequence[str]]] = (), name: str = ""):
        cells = [tuple(c) for c in cells]
        while cells and not cells[-1]:
            cells.pop()
        faces = list(faces) + [{}] * (len(cells) - len(faces))
        self.name = name
        self.cells: tuple[tuple[str, ...], ...] = tuple(cells)
        self.faces = tuple(MappingProxyType({c: tuple(faces[k].get(c, ())) for c in cells[k]})
                           if k else MappingProxyType({}) for k in range(len(cells)))
        self._index = tuple({c: i for i, c in enumerate(cs)} for cs in self.cells)

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def ncells(self, k: int) -> int:
        return len(self.cells[k]) if 0 <= k < len(self.cells) else 0

    def cells_of(self, k: int) -> tuple[str, ...]:
        return self.cells[k] if 0 <= k < len(self.cells) else ()

    def index(self, k: int, cell: str) -> int:
        return self._index[k][cell]

    def has(self, k: int, cell: str) -> bool:
        return 0 <= k < len(self.cells) and cell in self._index[k]

    def face(self, k: int, cell: str, i: int) -> str:
        return self.faces[k][cell][i]

    def edge01(self, k: int, cell: str) -> str:
        """The 1-cell ``d_2 d_3 ... d_k cell`` joining vertices 0 and 1."""
        c = cell
        for j in range(k, 1, -1):
            c = self.faces[j][c][j]
        return c

    def vertex(self, k: int, cell: str, i: int) -> str:
        c = cell
        while k > 0:
            if i < k:
                c = self.faces[k][c][k]
            else:
                c = self.faces[k][c][0]
                i -= 1
            k -= 1
        return c

    def vertices(self, k: int, cell: str) -> tuple[str, ...]:
        return tuple(self.vertex(k, cell, i) for i in range(k + 1))

    def total_cells(self) -> int:
        return sum(len(c) for c in self.cells)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(c) for k, c in enumerate(self.cells))

    def __eq__(self, other):
        return isinstance(other, DeltaSet) and self.cells == other.cells and \
            all(dict(a) == dict(b) for a, b in zip(self.faces, other.faces))

    def __hash__(self):
        return hash(self.cells)

    def __repr__(self):
        counts = ", ".join(str(len(c)) for c in self.cells)
        return f"DeltaSet({self.name or '?'}: {counts})"


@dataclass(frozen=True)
class ValidationReport:
    counts: tuple[int, ...]
    euler_characteristic: int


def validate(K: DeltaSet) -> ValidationReport:
    for k, cs in enumerate(K.cells):
        if len(set(cs)) != len(cs):
            raise BrokenFaceReference(f"duplicate {k}-cell identifiers")
        for c in cs:
            if k == 0:
                continue
            fs = K.faces[k][c]
            if len(fs) != k + 1:
                raise BrokenFaceReference(f"{k}-cell {c!r} has {len(fs)} faces, expected {k + 1}")
            for f in fs:
                if not K.has(k - 1, f):
                    raise BrokenFaceReference(f"{k}-cell {c!r} refers to missing {k - 1}-cell {f!r}")
    for k in range(2, len(K.cells)):
        for c in K.cells[k]:
            fs = K.faces[k][c]
            for j in range(k + 1):
                for i in range(j):
                    # d_i d_j = d_{j-1} d_i
                    if K.faces[k - 1][fs[j]][i] != K.faces[k - 1][fs[i]][j - 1]:
                        raise SimplicialIdentityViolation(
                            f"{k}-cell {c!r}: d_{i} d_{j} != d_{j - 1} d_{i}")
    return ValidationReport(tuple(len(c) for c in K.cells), K.euler_characteristic())


# ---------------------------------------------------------------------------
# Twists


class TwistCocycle:
    """A sign on each 1-cell: the transition data of a rank-one local system."""

    __slots__ = ("values",)

    def __init__(self, values: Mapping[str, int]):
        for e, s in values.items():
            if s not in (1, -1) or isinstance(s, bool):
                raise ValueError(f"twist value on {e!r} must be +1 or -1, got {s!r}")
        self.values = MappingProxyType(dict(values))

    @classmethod
    def trivial(cls, K: DeltaSet) -> "TwistCocycle":
        return cls({e: 1 for e in K.cells_of(1)})

    @classmethod
    def from_bits(cls, K: DeltaSet, bits: Sequence[int]) -> "TwistCocycle":
        return cls({e: -1 if b % 2 else 1 for e, b in zip(K.cells_of(1), bits)})

    def __getitem__(self, edge: str) -> int:
        return self.values[edge]

    def bits(self, K: DeltaSet) -> tuple[int, ...]:
        return tuple(int(self.values[e] == -1) for e in K.cells_of(1))

    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.values.values())

    def gauge(self, K: DeltaSet, s: Mapping[str, int]) -> "TwistCocycle":
        """Conjugate by a sign ``s`` on vertices: ``s(d_1 e) * eta(e) * s(d_0 e)``."""
        return TwistCocycle({e: s[K.face(1, e, 1)] * self.values[e] * s[K.face(1, e, 0)]
                             for e in K.cells_of(1)})

    def restrict(self, edges: Iterable[str]) -> "TwistCocycle":
        return TwistCocycle({e: self.values[e] for e in edges})

    def __eq__(self, other):
        return isinstance(other, TwistCocycle) and dict(self.values) == dict(other.values)

    def __hash__(self):
        return hash(tuple(sorted(self.values.items())))

    def __repr__(self):
        return f"TwistCocycle({dict(self.values)})"


def validate_twist(K: DeltaSet, eta: TwistCocycle) -> bool:
    for e in K.cells_of(1):
        if e not in eta.values:
            raise MissingEdgeValue(f"no twist value on 1-cell {e!r}")
    for c in K.cells_of(2):
        d0, d1, d2 = K.faces[2][c]
        if eta[d2] * eta[d0] != eta[d1]:
            return False
    return True


def _incidence_mod2(K: DeltaSet, k: int) -> IntMatrix:
    """Untwisted coboundary C^k -> C^{k+1} reduced mod 2."""
    rows = []
    for c in K.cells_of(k + 1):
        row = [0] * K.ncells(k)
        for f in K.faces[k + 1][c]:
            row[K.index(k, f)] += 1
        rows.append([x % 2 for x in row])
    return IntMatrix.from_rows(rows, K.ncells(k))


def twist_classes_mod2(K: DeltaSet) -> list[TwistCocycle]:
    """One representative per class in ``H^1(K; Z/2)``; the trivial class first."""
    H = FieldCohomology(_incidence_mod2(K, 1), _incidence_mod2(K, 0), GF(2))
    reps = []
    for mask in itertools.product((0, 1), repeat=len(H.generators)):
        bits = [0] * K.ncells(1)
        for m, g in zip(reversed(mask), H.generators):
            if m:
                bits = [(b + x) % 2 for b, x in zip(bits, g)]
        reps.append(TwistCocycle.from_bits(K, bits))
    return reps


def gauge_between(K: DeltaSet, eta1: TwistCocycle, eta2: TwistCocycle) -> dict[str, int] | None:
    """A vertex sign ``s`` with ``eta1.gauge(K, s) == eta2``, or None if the
    two twists are not cohomologous."""
    F = GF(2)
    d0 = _incidence_mod2(K, 0)
    target = [(a + b) % 2 for a, b in zip(eta1.bits(K), eta2.bits(K))]
    x = field_solve(F, d0.tolist(), target, K.ncells(0))
    if x is None:
        return None
    return {v: -1 if xi else 1 for v, xi in zip(K.cells_of(0), x)}


def cohomologous(K: DeltaSet, eta1: TwistCocycle, eta2: TwistCocycle) -> bool:
    return gauge_between(K, eta1, eta2) is not None


# ---------------------------------------------------------------------------
# Subcomplexes


@dataclass(frozen=True)
class SubComplex:
    parent: DeltaSet
    cells: tuple[frozenset[str], ...]

    @classmethod
    def of(cls, parent: DeltaSet, cells: Sequence[Iterable[str]]) -> "SubComplex":
        cs = [frozenset(c) for c in cells]
        cs += [frozenset()] * (parent.dimension + 1 - len(cs))
        return cls(parent, tuple(cs))

    @classmethod
    def closure(cls, parent: DeltaSet, generators: Iterable[tuple[int, str]]) -> "SubComplex":
        """Smallest face-closed subcomplex containing the given ``(k, cell)`` pairs."""
        cs = [set() for _ in range(parent.dimension + 1)]
        stack = list(generators)
        while stack:
            k, c = stack.pop()
            if c in cs[k]:
                continue
            if not parent.has(k, c):
                raise BrokenFaceReference(f"no {k}-cell {c!r} in {parent!r}")
            cs[k].add(c)
            if k:
                stack.extend((k - 1, f) for f in parent.faces[k][c])
        return cls(parent, tuple(frozenset(c) for c in cs))

    @classmethod
    def full(cls, parent: DeltaSet) -> "SubComplex":
        return cls(parent, tuple(frozenset(c) for c in parent.cells))

    def has(self, k: int, cell: str) -> bool:
        return 0 <= k < len(self.cells) and cell in self.cells[k]

    def is_face_closed(self) -> bool:
        return all(f in self.cells[k - 1]
                   for k in range(1, len(self.cells)) for c in self.cells[k]
                   for f in self.parent.faces[k][c])

    def __and__(self, other: "SubComplex") -> "SubComplex":
        return SubComplex(self.parent, tuple(a & b for a, b in zip(self.cells, other.cells)))

    def __or__(self, other: "SubComplex") -> "SubComplex":
        return SubComplex(self.parent, tuple(a | b for a, b in zip(self.cells, other.cells)))

    def count(self) -> int:
        return sum(len(c) for c in self.cells)


def star(K: DeltaSet, vertex: str) -> SubComplex:
    """Closed star: closure of every cell having ``vertex`` as a vertex."""
    return SubComplex.closure(K, [(k, c) for k in range(K.dimension + 1) for c in K.cells[k]
                                  if vertex in K.vertices(k, c)])


def restrict(K: DeltaSet, S: SubComplex, eta: TwistCocycle | None = None):
    """The sub-Delta-set on ``S`` (parent cell order kept) and the restricted twist."""
    if S.parent != K:
        raise ValueError("subcomplex belongs to a different Delta-set")
    if not S.is_face_closed():
        raise NotFaceClosed("subcomplex is not closed under faces")
    cells = [[c for c in K.cells[k] if c in S.cells[k]] for k in range(K.dimension + 1)]
    faces = [{c: K.faces[k][c] for c in cells[k]} if k else {} for k in range(len(cells))]
    sub = DeltaSet(cells, faces, name=K.name and f"{K.name}|sub")
    if eta is None:
        return sub, None
    return sub, eta.restrict(sub.cells_of(1))


def disjoint_union(K1: DeltaSet, K2: DeltaSet, tags: tuple[str, str] = ("U", "V")) -> DeltaSet:
    """``K1 + K2`` with cell ids prefixed by ``tag:``."""
    dim = max(K1.dimension, K2.dimension)
    cells, faces = [], []
    for k in range(dim + 1):
        cs, fs = [], {}
        for tag, K in zip(tags, (K1, K2)):
            for c in K.cells_of(k):
                cs.append(f"{tag}:{c}")
                if k:
                    fs[f"{tag}:{c}"] = tuple(f"{tag}:{f}" for f in K.faces[k][c])
        cells.append(cs)
        faces.append(fs)
    return DeltaSet(cells, faces, name=f"{K1.name}+{K2.name}")


def union_twist(eta1: TwistCocycle, eta2: TwistCocycle, tags=("U", "V")) -> TwistCocycle:
    vals = {f"{tags[0]}:{e}": s for e, s in eta1.values.items()}
    vals.update({f"{tags[1]}:{e}": s for e, s in eta2.values.items()})
    return TwistCocycle(vals)


# ---------------------------------------------------------------------------
# Builders


def from_facets(facets: Iterable[Sequence], name: str = "") -> DeltaSet:
    """Delta-set of an ordered simplicial complex given by its facets.

    Vertices are ordered by sorting; a simplex ``a < b < c`` gets id
    ``"a-b-c"``.
    """
    simplices: set[tuple] = set()
    for f in facets:
        f = tuple(sorted(f))
        for r in range(1, len(f) + 1):
            simplices.update(itertools.combinations(f, r))
    dim = max(len(s) for s in simplices) - 1
    key = lambda s: tuple((0, v) if isinstance(v, int) else (1, str(v)) for v in s)
    by_dim = [sorted((s for s in simplices if len(s) == k + 1), key=key) for k in range(dim + 1)]
    sid = lambda s: "-".join(str(v) for v in s)
    cells = [[sid(s) for s in ss] for ss in by_dim]
    faces = [{} if k == 0 else
              {sid(s): tuple(sid(s[:i] + s[i + 1:]) for i in range(k + 1)) for s in by_dim[k]}
              for k in range(dim + 1)]
    return DeltaSet(cells, faces, name=name)


def point() -> DeltaSet:
    return DeltaSet([["p"]], name="point")


def simplex(n: int) -> DeltaSet:
    """The full n-simplex; a contractible model of R^n."""
    return from_facets([range(n + 1)], name=f"simplex{n}")


def circle_nerve(m: int = 3) -> DeltaSet:
    """Nerve of a cover of the circle by ``m`` arcs, consecutive ones overlapping."""
    if m < 3:
        raise ValueError("a good cover of the circle needs at least 3 arcs")
    verts = [f"U{i}" for i in range(m)]
    edges = [f"U{i}U{(i + 1) % m}" for i in range(m)]
    faces = {f"U{i}U{(i + 1) % m}": (f"U{(i + 1) % m}", f"U{i}") for i in range(m)}
    return DeltaSet([verts, edges], [{}, faces], name=f"circle{m}")


def annulus3() -> DeltaSet:
    """Three wedge-shaped patches U, V, W of the punctured plane; no triple overlaps."""
    faces = {"UV": ("V", "U"), "UW": ("W", "U"), "VW": ("W", "V")}
    return DeltaSet([["U", "V", "W"], ["UV", "UW", "VW"]], [{}, faces], name="annulus3")


def mobius_twist() -> TwistCocycle:
    """The (-1, -1, -1) representative on :func:`annulus3`."""
    return TwistCocycle({"UV": -1, "UW": -1, "VW": -1})


def sphere2() -> DeltaSet:
    """Boundary of the tetrahedron."""
    return from_facets(itertools.combinations(range(4), 3), name="sphere2")


RP2_FACETS = ((1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 6), (1, 5, 6),
              (2, 3, 6), (2, 4, 5), (2, 5, 6), (3, 4, 5), (3, 4, 6))


def rp2() -> DeltaSet:
    """Six-vertex triangulation of the projective plane (hemi-icosahedron)."""
    return from_facets(RP2_FACETS, name="rp2")


def rp(n: int) -> DeltaSet:
    """Projective n-space as the antipodal quotient of the octahedral n-sphere.

    Simplices of the sphere are sign patterns on a set of coordinates; the
    quotient identifies a pattern with its negative. Ordering vertices by
    coordinate index is preserved by the antipodal map, so the quotient is
    a Delta-set with ``C(n+1, k+1) * 2^k`` k-cells. A cell id lists
    ``sign+index`` with the leading sign normalized to ``+``.
    """
    if n < 1:
        raise ValueError("rp(n) needs n >= 1")

    def cid(pattern):
        if pattern[0][0] < 0:
            pattern = tuple((-s, i) for s, i in pattern)
        return "".join(("+" if s > 0 else "-") + str(i) for s, i in pattern), pattern

    cells, faces = [], []
    for k in range(n + 1):
        cs, fs = [], {}
        for idx in itertools.combinations(range(n + 1), k + 1):
            for signs in itertools.product((1, -1), repeat=k):
                name, pat = cid(tuple(zip((1,) + signs, idx)))
                cs.append(name)
                if k:
                    fs[name] = tuple(cid(pat[:i] + pat[i + 1:])[0] for i in range(k + 1))
        cells.append(cs)
        faces.append(fs)
    return DeltaSet(cells, faces, name=f"rp{n}")


def rp3() -> DeltaSet:
    return rp(3)


BUILDERS = {
    "point": point,
    "annulus3": annulus3,
    "rp2": rp2,
    "rp3": rp3,
    "sphere2": sphere2,
}


def build(spec: str) -> DeltaSet:
    """Builder by name: ``point``, ``circle:M``, ``annulus3``, ``rp2``, ``rp3``,
    ``sphere2``, ``simplex:N``, ``rp:N``."""
    name, _, arg = spec.partition(":")
    if name == "circle":
        return circle_nerve(int(arg or 3))
    if name == "simplex":
        return simplex(int(arg or 1))
    if name == "rp" and arg:
        return rp(int(arg))
    if name in BUILDERS and not arg:
        return BUILDERS[name]()
    raise ValueError(f"unknown builder {spec!r}")
