"""
Cochains on a Delta-set with coefficients in a sign-twisted local system.

For a k-cochain ``a`` and a (k+1)-cell ``s`` the differential is

    (delta a)(s) = eta(e01(s)) * a(d_0 s) + sum_{i >= 1} (-1)^i a(d_i s)

where ``e01(s) = d_2 ... d_{k+1} s`` is the edge between the first two
vertices: the value on the face opposite vertex 0 is transported back to
vertex 0 before the alternating sum. With ``eta = +1`` this is the usual
simplicial coboundary.

Coefficients are Z, Q, F_p (exact), or the R/Z model, which is reported
as a :class:`DivisibleDescriptor` assembled from the Z and Q answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from twdeligne.abelian import (
    FgAbGroup,
    GroupHom,
    IntegralCohomology,
    IntMatrix,
    cohomology_basis,
    induced_map,
    render_group,
    smith_normal_form,
)
from twdeligne.linalg import GF, QQ, Field
from twdeligne.nerve import DeltaSet, MissingEdgeValue, TwistCocycle, validate_twist


class TwistInvalid(ValueError):
    pass


class InternalDeltaSquaredNonzero(AssertionError):
    pass


class LiftFailure(ValueError):
    """The cochain does not lift to a torsion class (its coboundary is not integral)."""


@dataclass(frozen=True)
class Ring:
    kind: str  # "Z", "Q", "Fp" or "RZ"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp", "RZ"):
            raise ValueError(f"unknown coefficient ring {self.kind!r}")
        if self.kind == "Fp":
            GF(self.p)  # raises unless p is prime

    @classmethod
    def parse(cls, text: str) -> "Ring":
        t = text.strip().lower()
        if t == "z":
            return Z
        if t == "q":
            return Q
        if t == "rz":
            return RZ
        if t.startswith("fp:"):
            return cls("Fp", int(t[3:]))
        raise ValueError(f"unknown ring {text!r}; expected z, q, fp:P or rz")

    @property
    def field(self) -> Field | None:
        if self.kind == "Z":
            return None
        if self.kind == "Q":
            return QQ
        if self.kind == "Fp":
            return GF(self.p)
        raise ValueError("the R/Z model has no cochain-level field")

    @property
    def token(self) -> str:
        return {"Z": "z", "Q": "q", "RZ": "rz"}.get(self.kind, f"fp:{self.p}")

    def __str__(self):
        return {"Z": "Z", "Q": "Q", "RZ": "R/Z"}.get(self.kind, f"F{self.p}")


Z = Ring("Z")
Q = Ring("Q")
RZ = Ring("RZ")


def Fp(p: int) -> Ring:
    return Ring("Fp", p)


@dataclass(frozen=True)
class CoefficientSystem:
    ring: Ring
    twist: TwistCocycle


@dataclass(frozen=True)
class DivisibleDescriptor:
    """``(R/Z)^torus_rank (+) torsion``."""

    torus_rank: int = 0
    torsion: FgAbGroup = FgAbGroup()

    def __post_init__(self):
        if self.torsion.free_rank:
            raise ValueError("torsion part must have free rank 0")
        if self.torus_rank < 0:
            raise ValueError("negative torus rank")

    def is_trivial(self) -> bool:
        return self.torus_rank == 0 and self.torsion.is_trivial()

    def __str__(self):
        extra = []
        if self.torus_rank == 1:
            extra.append("R/Z")
        elif self.torus_rank > 1:
            extra.append(f"(R/Z)^{self.torus_rank}")
        return render_group(self.torsion, extra)

    @classmethod
    def parse(cls, text: str) -> "DivisibleDescriptor":
        torus, rest = 0, []
        for part in text.split("(+)"):
            part = part.strip()
            if part == "R/Z":
                torus += 1
            elif part.startswith("(R/Z)^"):
                torus += int(part[6:])
            elif part != "0":
                rest.append(part)
        tors = FgAbGroup.parse(" (+) ".join(rest)) if rest else FgAbGroup()
        return cls(torus, tors)


def twisted_coboundary(K: DeltaSet, eta: TwistCocycle, k: int) -> IntMatrix:
    """Matrix of ``delta: C^k -> C^{k+1}`` (rows: (k+1)-cells, cols: k-cells)."""
    rows = []
    for s in K.cells_of(k + 1):
        row = [0] * K.ncells(k)
        fs = K.faces[k + 1][s]
        row[K.index(k, fs[0])] += eta[K.edge01(k + 1, s)]
        for i in range(1, k + 2):
            row[K.index(k, fs[i])] += (-1) ** i
        rows.append(row)
    return IntMatrix.from_rows(rows, K.ncells(k))


def untwisted_coboundary(K: DeltaSet, k: int) -> IntMatrix:
    """Plain simplicial coboundary, built without any twist bookkeeping."""
    m = [[0] * K.ncells(k) for _ in range(K.ncells(k + 1))]
    for r, s in enumerate(K.cells_of(k + 1)):
        for i, f in enumerate(K.faces[k + 1][s]):
            m[r][K.index(k, f)] += (-1) ** i
    return IntMatrix.from_rows(m, K.ncells(k))


class CochainComplex:
    """Cochain complex ``C^0 -> ... -> C^n`` with cohomology bases per degree.

    Built either from ``(K, eta, ring)`` or, via :meth:`from_matrices`, from
    explicit integer differentials. Out-of-range degrees are zero.
    """

    def __init__(self, K: DeltaSet | None, eta: TwistCocycle | None, ring: Ring,
                 deltas: Sequence[IntMatrix] | None = None, ncells: Sequence[int] | None = None):
        if ring.kind == "RZ":
            raise ValueError("build Z and Q complexes for the R/Z model instead")
        self.K, self.eta, self.ring = K, eta, ring
        self.field = ring.field
        if deltas is None:
            ncells = [K.ncells(k) for k in range(K.dimension + 1)]
            deltas = [twisted_coboundary(K, eta, k) for k in range(K.dimension + 1)]
        self._ncells = tuple(ncells)
        self._deltas = tuple(deltas)
        for k in range(len(self._deltas) - 1):
            sq = self._deltas[k + 1] @ self._deltas[k]
            if not sq.is_zero():
                raise InternalDeltaSquaredNonzero(f"delta^2 != 0 in degree {k}")
        self._bases = tuple(cohomology_basis(self.delta(k), self.delta(k - 1), self.field)
                            for k in range(self.top + 1))

    @classmethod
    def from_matrices(cls, deltas: Sequence[IntMatrix], ring: Ring = None) -> "CochainComplex":
        ncells = [d.cols for d in deltas]
        if deltas and deltas[-1].rows:
            ncells.append(deltas[-1].rows)
        return cls(None, None, ring or Z, deltas=deltas, ncells=ncells)

    @property
    def top(self) -> int:
        return len(self._ncells) - 1

    def ncells(self, k: int) -> int:
        return self._ncells[k] if 0 <= k < len(self._ncells) else 0

    def delta(self, k: int) -> IntMatrix:
        if 0 <= k < len(self._deltas):
            return self._deltas[k]
        return IntMatrix.zeros(self.ncells(k + 1), self.ncells(k))

    def cohomology(self, k: int):
        if 0 <= k <= self.top:
            return self._bases[k]
        return cohomology_basis(IntMatrix.zeros(0, 0), IntMatrix.zeros(0, 0), self.field)

    def group(self, k: int) -> FgAbGroup:
        return self.cohomology(k).group

    def dims(self) -> tuple[int, ...]:
        return tuple(self.group(k).ngens for k in range(self.top + 1))


def coboundary_matrices(K: DeltaSet, eta: TwistCocycle, ring: Ring = None) -> CochainComplex:
    ring = ring or Z
    try:
        ok = validate_twist(K, eta)
    except MissingEdgeValue as e:
        raise TwistInvalid(str(e)) from e
    if not ok:
        raise TwistInvalid("twist violates the cocycle law on some 2-cell")
    return _complex(K, eta, ring)


@lru_cache(maxsize=256)
def _complex(K: DeltaSet, eta: TwistCocycle, ring: Ring) -> CochainComplex:
    return CochainComplex(K, eta, ring)


def twisted_cohomology(K: DeltaSet, eta: TwistCocycle, ring: Ring, k: int):
    """``H^k`` as an :class:`FgAbGroup` (Z), a dimension (Q, F_p) or a
    :class:`DivisibleDescriptor` (R/Z). Degrees outside ``[0, dim K]`` give 0."""
    if ring.kind == "RZ":
        return rz_cohomology(K, eta, k)
    if not 0 <= k <= K.dimension:
        coboundary_matrices(K, eta, ring)
        return FgAbGroup() if ring.kind == "Z" else 0
    G = coboundary_matrices(K, eta, ring).group(k)
    return G if ring.kind == "Z" else G.free_rank


def rz_cohomology(K: DeltaSet, eta: TwistCocycle, k: int) -> DivisibleDescriptor:
    """``(R/Z)^{dim_Q H^k} (+) Tor H^{k+1}(Z_eta)``."""
    b = twisted_cohomology(K, eta, Q, k)
    tors = twisted_cohomology(K, eta, Z, k + 1).torsion_subgroup()
    return DivisibleDescriptor(b, tors)


def coefficient_map(K: DeltaSet, eta: TwistCocycle, k: int, target: Ring) -> GroupHom:
    """``H^k(Z_eta) -> H^k(target_eta)`` induced by the identity on cochains."""
    src = coboundary_matrices(K, eta, Z)
    tgt = coboundary_matrices(K, eta, target)
    return induced_map(lambda j: IntMatrix.identity(K.ncells(j)), src, tgt, k)


@dataclass(frozen=True)
class BocksteinSource:
    """Torsion part of ``H^k`` of the R/Z model, generated by rational cochains."""

    group: FgAbGroup
    lifts: tuple[tuple[Fraction, ...], ...]


def bockstein_source(K: DeltaSet, eta: TwistCocycle, k: int) -> BocksteinSource:
    """Rational k-cochains ``c`` with ``delta c`` integral, modulo integral cochains
    and rational cocycles. From ``delta_k = U S V`` they are the cochains
    ``V^-1 e_i / s_i`` for the invariant factors ``s_i > 1``."""
    cx = coboundary_matrices(K, eta, Z)
    if not 0 <= k <= K.dimension:
        return BocksteinSource(FgAbGroup(), ())
    snf = smith_normal_form(cx.delta(k))
    lifts, orders = [], []
    for i, s in enumerate(snf.diagonal):
        if s > 1:
            orders.append(s)
            lifts.append(tuple(Fraction(x, s) for x in snf.V_inv.column(i)))
    return BocksteinSource(FgAbGroup(0, tuple(orders)), tuple(lifts))


def bockstein_lift(cx: CochainComplex, k: int, cochain: Sequence[Fraction]) -> tuple[int, ...]:
    """Class of ``delta(cochain)`` in ``H^{k+1}(Z_eta)`` for a rational cochain
    whose coboundary is integral."""
    image = cx.delta(k).apply(cochain)
    if any(Fraction(x).denominator != 1 for x in image):
        raise LiftFailure("coboundary of the rational lift is not integral")
    return cx.cohomology(k + 1).coordinates(tuple(int(x) for x in image))


def bockstein(K: DeltaSet, eta: TwistCocycle, k: int) -> GroupHom:
    """Connecting map from the torsion of ``H^k(R/Z model)`` to ``H^{k+1}(Z_eta)``."""
    cx = coboundary_matrices(K, eta, Z)
    src = bockstein_source(K, eta, k)
    target = cx.group(k + 1)
    cols = [bockstein_lift(cx, k, c) for c in src.lifts]
    matrix = tuple(tuple(c[i] for c in cols) for i in range(target.ngens))
    return GroupHom(src.group, target, matrix)


def gauge_complex_iso(K: DeltaSet, s) -> dict[int, IntMatrix]:
    """Diagonal sign change on cochains intertwining a twist and its gauge
    transform by ``s``: a k-cochain is multiplied by ``s`` at vertex 0."""
    out = {}
    for k in range(K.dimension + 1):
        n = K.ncells(k)
        out[k] = IntMatrix.diag([s[K.vertex(k, c, 0)] for c in K.cells_of(k)], n, n)
    return out
