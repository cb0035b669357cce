"""
Executable checks for the exact sequences around twisted cohomology.

* :func:`check_mv` builds the Mayer-Vietoris long exact sequence of a
  decomposition ``K = U cup V`` at cochain level and tests exactness at
  every slot.
* :func:`check_diamond` runs the diamond checks in one degree.
* :func:`check_trivial_twist` compares the all-(+1) twist with cohomology
  computed from plain simplicial coboundaries.
* :func:`oracle_suite` cross-checks integral answers against F_p ranks,
  the Euler characteristic and random gauge transforms.

Every check returns a list of :class:`~twdeligne.report.Check`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from twdeligne.abelian import FgAbGroup, GroupHom, IntMatrix, exactness_defect, induced_map
from twdeligne.deligne import deligne_group, diamond
from twdeligne.nerve import (
    DeltaSet,
    DeltaSetError,
    NotFaceClosed,
    SubComplex,
    TwistCocycle,
    disjoint_union,
    restrict,
    star,
    union_twist,
)
from twdeligne.report import Check
from twdeligne.twisted_cochain import (
    Q,
    RZ,
    Z,
    CochainComplex,
    DivisibleDescriptor,
    Fp,
    Ring,
    coboundary_matrices,
    gauge_complex_iso,
    rz_cohomology,
    twisted_cohomology,
    untwisted_coboundary,
)

ORACLE_PRIMES = (2, 3, 5)
MAX_ORACLE_CELLS = 10_000


class NotACover(DeltaSetError):
    pass


@dataclass(frozen=True)
class MvDecomposition:
    K: DeltaSet
    U: SubComplex
    V: SubComplex

    def __post_init__(self):
        for S in (self.U, self.V):
            if S.parent != self.K:
                raise ValueError("subcomplex of a different Delta-set")
            if not S.is_face_closed():
                raise NotFaceClosed("decomposition piece is not face-closed")
        for k, cs in enumerate(self.K.cells):
            missing = [c for c in cs if not (self.U.has(k, c) or self.V.has(k, c))]
            if missing:
                raise NotACover(f"{k}-cells {missing[:3]} lie in neither piece")

    @property
    def W(self) -> SubComplex:
        return self.U & self.V


def top_cells(K: DeltaSet) -> list[tuple[int, str]]:
    """Cells that are not a face of any other cell."""
    used = [set() for _ in K.cells]
    for k in range(1, K.dimension + 1):
        for c in K.cells[k]:
            used[k - 1].update(K.faces[k][c])
    return [(k, c) for k in range(K.dimension + 1) for c in K.cells[k] if c not in used[k]]


def split_top_cells(K: DeltaSet, in_u) -> MvDecomposition:
    """Closure of the top cells selected by ``in_u`` versus the closure of the rest."""
    tops = top_cells(K)
    side = [bool(in_u(i, t)) for i, t in enumerate(tops)]
    u = [t for t, x in zip(tops, side) if x]
    v = [t for t, x in zip(tops, side) if not x]
    return MvDecomposition(K, SubComplex.closure(K, u), SubComplex.closure(K, v))


def random_decomposition(K: DeltaSet, rng: random.Random) -> MvDecomposition:
    return split_top_cells(K, lambda i, t: rng.random() < 0.5)


def two_arc_split(K: DeltaSet) -> MvDecomposition:
    """For a circle nerve: first ``m-1`` edges against the last one."""
    edges = K.cells[1]
    return MvDecomposition(K, SubComplex.closure(K, [(1, e) for e in edges[:-1]]),
                           SubComplex.closure(K, [(1, edges[-1])]))


def ball_split(K: DeltaSet, vertex: str) -> MvDecomposition:
    """Closed star of ``vertex`` (a ball) against the closure of the top cells
    missing it. For the six-vertex projective plane this is a disk, a Mobius
    band (a thickened projective line) and their common boundary circle."""
    U = star(K, vertex)
    rest = [(k, c) for k, c in top_cells(K) if vertex not in K.vertices(k, c)]
    return MvDecomposition(K, U, SubComplex.closure(K, rest))


# ---------------------------------------------------------------------------
# Mayer-Vietoris


@dataclass(frozen=True)
class MvSequence:
    """The long exact sequence, slot by slot: ``H^k(K) -r-> H^k(U)+H^k(V) -s-> H^k(W) -d->``."""

    ring: Ring
    restriction: tuple[GroupHom, ...]
    difference: tuple[GroupHom, ...]
    connecting: tuple[GroupHom, ...]


def mv_sequence(M: MvDecomposition, eta: TwistCocycle, ring: Ring = Z) -> MvSequence:
    K = M.K
    KU, eU = restrict(K, M.U, eta)
    KV, eV = restrict(K, M.V, eta)
    KW, eW = restrict(K, M.W, eta)
    D = disjoint_union(KU, KV)
    cK = coboundary_matrices(K, eta, ring)
    cU = coboundary_matrices(KU, eU, ring)
    cD = coboundary_matrices(D, union_twist(eU, eV), ring)
    cW = coboundary_matrices(KW, eW, ring)

    def r(k):
        rows = []
        for c in D.cells_of(k):
            row = [0] * K.ncells(k)
            row[K.index(k, c[2:])] = 1
            rows.append(row)
        return IntMatrix.from_rows(rows, K.ncells(k))

    def s(k):
        rows = []
        for c in KW.cells_of(k):
            row = [0] * D.ncells(k)
            row[D.index(k, "U:" + c)] = 1
            row[D.index(k, "V:" + c)] = -1
            rows.append(row)
        return IntMatrix.from_rows(rows, D.ncells(k))

    N = K.dimension
    R = tuple(induced_map(r, cK, cD, k) for k in range(N + 1))
    S = tuple(induced_map(s, cD, cW, k) for k in range(N + 1))
    conn = []
    for k in range(N + 1):
        HW, HK = cW.cohomology(k), cK.cohomology(k + 1)
        cols = []
        for w in HW.generators:
            # extend by zero to U, apply delta there, glue with 0 on V
            a = [0] * KU.ncells(k)
            for c, x in zip(KW.cells_of(k), w):
                a[KU.index(k, c)] = x
            da = cU.delta(k).apply(a)
            glued = [0] * K.ncells(k + 1)
            for c, x in zip(KU.cells_of(k + 1), da):
                glued[K.index(k + 1, c)] = x
            cols.append(HK.coordinates(glued))
        conn.append(GroupHom(HW.group, HK.group,
                             tuple(tuple(c[i] for c in cols) for i in range(HK.group.ngens)),
                             cK.field))
    return MvSequence(ring, R, S, tuple(conn))


def check_mv(M: MvDecomposition, eta: TwistCocycle, ring: Ring = Z) -> list[Check]:
    if ring.kind == "RZ":
        raise ValueError("the R/Z model sequence is not finitely generated; check Z and Q instead")
    seq = mv_sequence(M, eta, ring)
    F = seq.restriction[0].field
    checks = []

    def slot(name, f, g):
        d = exactness_defect(f, g)
        detail = "" if d.exact else \
            f"ker/im = {d.homology}; im spanned by {list(d.image)}, ker by {list(d.kernel)}"
        checks.append(Check(f"MV[{ring}] at {name}", d.exact, detail))

    first = seq.restriction[0]
    slot("H^0(K)", GroupHom.zero(FgAbGroup(), first.source, F), first)
    for k in range(len(seq.restriction)):
        slot(f"H^{k}(U)+H^{k}(V)", seq.restriction[k], seq.difference[k])
        slot(f"H^{k}(W)", seq.difference[k], seq.connecting[k])
        if k + 1 < len(seq.restriction):
            slot(f"H^{k + 1}(K)", seq.connecting[k], seq.restriction[k + 1])
    return checks


# ---------------------------------------------------------------------------
# Diamond, trivial twist, oracles


def check_diamond(K: DeltaSet, eta: TwistCocycle, n: int) -> list[Check]:
    return list(diamond(K, eta, n).checks)


def _rings():
    return [Z, Q] + [Fp(p) for p in ORACLE_PRIMES]


def check_trivial_twist(K: DeltaSet, n_max: int | None = None) -> list[Check]:
    n_max = K.dimension if n_max is None else n_max
    eta = TwistCocycle.trivial(K)
    plain = [untwisted_coboundary(K, k) for k in range(K.dimension + 1)]
    checks = []
    for ring in _rings():
        tw = coboundary_matrices(K, eta, ring)
        un = CochainComplex.from_matrices(plain, ring)
        for k in range(n_max + 1):
            a, b = tw.group(k), un.group(k)
            checks.append(Check(f"trivial twist [{ring}] H^{k}", a == b, "" if a == b else
                                f"twisted {a} vs untwisted {b}"))
    unZ = CochainComplex.from_matrices(plain, Z)
    unQ = CochainComplex.from_matrices(plain, Q)
    for k in range(n_max + 1):
        a = rz_cohomology(K, eta, k)
        b = DivisibleDescriptor(unQ.group(k).free_rank, unZ.group(k + 1).torsion_subgroup())
        checks.append(Check(f"trivial twist [{RZ}] H^{k}", a == b, "" if a == b else f"{a} vs {b}"))
        d = deligne_group(K, eta, k).topological
        checks.append(Check(f"trivial twist Deligne^{k} topological part", d == unZ.group(k),
                            "" if d == unZ.group(k) else f"{d} vs {unZ.group(k)}"))
    return checks


def oracle_suite(K: DeltaSet, eta: TwistCocycle, seed: int = 0, gauges: int = 10) -> list[Check]:
    if K.total_cells() > MAX_ORACLE_CELLS:
        raise ValueError(f"{K.total_cells()} cells is too many for dense oracles")
    N = K.dimension
    HZ = [twisted_cohomology(K, eta, Z, k) for k in range(N + 2)]
    checks = []
    for p in ORACLE_PRIMES:
        got = tuple(twisted_cohomology(K, eta, Fp(p), k) for k in range(N + 1))
        want = tuple(HZ[k].free_rank + HZ[k].p_rank(p) + HZ[k + 1].p_rank(p) for k in range(N + 1))
        checks.append(Check(f"F{p} dimensions vs universal coefficients", got == want,
                            "" if got == want else f"F{p}: {got}, from Z: {want}"))
    bq = [twisted_cohomology(K, eta, Q, k) for k in range(N + 1)]
    chi = sum((-1) ** k * b for k, b in enumerate(bq))
    ok = chi == K.euler_characteristic()
    checks.append(Check("Euler characteristic", ok,
                        "" if ok else f"{chi} vs {K.euler_characteristic()}"))
    ranks = tuple(HZ[k].free_rank for k in range(N + 1))
    ok = ranks == tuple(bq)
    checks.append(Check("rank over Z = dimension over Q", ok, "" if ok else f"{ranks} vs {bq}"))
    rng = random.Random(seed)
    for i in range(gauges):
        s = {v: rng.choice((1, -1)) for v in K.cells_of(0)}
        eta2 = eta.gauge(K, s)
        bad = [f"[{ring}] H^{k}" for ring in _rings() for k in range(N + 1)
               if twisted_cohomology(K, eta, ring, k) != twisted_cohomology(K, eta2, ring, k)]
        iso = gauge_complex_iso(K, s)
        c1, c2 = coboundary_matrices(K, eta, Z), coboundary_matrices(K, eta2, Z)
        bad += [f"intertwiner in degree {k}" for k in range(N)
                if iso[k + 1] @ c1.delta(k) != c2.delta(k) @ iso[k]]
        checks.append(Check(f"gauge transform #{i}", not bad, ", ".join(bad)))
    return checks
