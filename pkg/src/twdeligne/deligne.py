"""
Twisted Deligne cohomology at the finitely generated level.

The degree-n group is an extension of ``H^n(M; Z_eta)`` by a divisible
quotient of twisted (n-1)-forms. Divisible groups are injective, so the
extension splits, and a group is reported as

    H^n(Z_eta) (+) Forms(n-1)

where ``Forms(k)`` is a token standing for k-forms with values in the
line bundle modulo the image of the connection (and the period lattice).
The forms part carries no numbers.

Other sheaf cohomology of the twisted Deligne complex ``D(n)`` comes from
the integral and R/Z-model groups, shifted in degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from twdeligne.abelian import FgAbGroup, GroupHom, exactness_defect, render_group
from twdeligne.nerve import DeltaSet, TwistCocycle
from twdeligne.report import Check
from twdeligne.twisted_cochain import (
    Q,
    Z,
    DivisibleDescriptor,
    bockstein,
    coefficient_map,
    rz_cohomology,
    twisted_cohomology,
)


class ZeroDegreeRequest(ValueError):
    pass


@dataclass(frozen=True)
class FormsSummand:
    degree: int
    label: str = "Forms"

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("forms degree must be >= 0")

    def __str__(self):
        return f"{self.label}({self.degree})"


@dataclass(frozen=True)
class DeligneDescriptor:
    degree: int
    topological: FgAbGroup
    forms: FormsSummand | None = None
    note: str = field(default="", compare=False)

    def __post_init__(self):
        if self.degree == 0 and self.forms is not None:
            raise ValueError("degree 0 has no forms summand")

    def __str__(self):
        return render_group(self.topological, [str(self.forms)] if self.forms else [])

    @classmethod
    def parse(cls, degree: int, text: str) -> "DeligneDescriptor":
        parts = [p.strip() for p in text.split("(+)")]
        forms = None
        if parts and parts[-1].startswith("Forms("):
            forms = FormsSummand(int(parts.pop()[6:-1]))
        top = FgAbGroup.parse(" (+) ".join(parts)) if parts else FgAbGroup()
        return cls(degree, top, forms)


_DEGREE0_NOTE = (
    "degree 0: global sections of the integral local system. They vanish as soon as "
    "the monodromy acts by -1 on some loop; reading the degree-0 corner of the untwisted "
    "diamond would instead give Z, which does not hold for a nontrivial twist.")


def deligne_group(K: DeltaSet, eta: TwistCocycle, n: int) -> DeligneDescriptor:
    if n < 0:
        raise ValueError("Deligne degree must be >= 0")
    top = twisted_cohomology(K, eta, Z, n)
    if n == 0:
        note = "bare local system"
        if top.is_trivial():
            note = _DEGREE0_NOTE
        return DeligneDescriptor(0, top, None, note)
    return DeligneDescriptor(
        n, top, FormsSummand(n - 1),
        f"split diagonal sequence H^{n - 1}(Z) -> Forms({n - 1}) -> H^{n} -> H^{n}(Z) -> 0")


def deligne_sheaf_cohomology(K: DeltaSet, eta: TwistCocycle, n: int, k: int):
    """``H^k(M; D(n))`` for ``k != 0``: ``H^{n+k}(Z_eta)`` when ``k > 0`` and
    ``H^{n+k-1}`` of the R/Z model when ``k < 0``."""
    if k == 0:
        raise ZeroDegreeRequest("degree 0 is the Deligne group itself; use deligne_group")
    if k > 0:
        return twisted_cohomology(K, eta, Z, n + k)
    d = n + k - 1
    if d < 0 or d > K.dimension:
        return DivisibleDescriptor()
    return rz_cohomology(K, eta, d)


@dataclass(frozen=True)
class DiamondReport:
    n: int
    corners: dict
    bockstein: GroupHom
    projection: GroupHom
    coefficient: GroupHom
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def diamond(K: DeltaSet, eta: TwistCocycle, n: int) -> DiamondReport:
    """The computable corners of the diamond in degree ``n`` and its checks."""
    if n < 1:
        raise ValueError("the diamond needs n >= 1")
    hdr_prev = twisted_cohomology(K, eta, Q, n - 1)
    hdr = twisted_cohomology(K, eta, Q, n)
    rz_prev = rz_cohomology(K, eta, n - 1)
    hz = twisted_cohomology(K, eta, Z, n)
    desc = deligne_group(K, eta, n)
    beta = bockstein(K, eta, n - 1)
    proj = GroupHom.identity(desc.topological)
    j = coefficient_map(K, eta, n, Q)

    checks = []

    def add(name, ok, detail=""):
        checks.append(Check(f"n={n} {name}", bool(ok), "" if ok else detail))

    add("topological part is H^n(Z_eta)", desc.topological == hz,
        f"descriptor {desc.topological} vs H^{n} = {hz}")
    inj = exactness_defect(GroupHom.zero(FgAbGroup(), beta.source), beta)
    add("bockstein injective on torsion", inj.exact, f"kernel {inj.homology}")
    img = exactness_defect(beta, j.integral())
    add("bockstein image = Tor H^n(Z_eta)", img.exact,
        f"ker(j)/im(beta) = {img.homology}; im {img.image}, ker {img.kernel}")
    add("bockstein source = torsion of R/Z corner", beta.source == rz_prev.torsion,
        f"{beta.source} vs {rz_prev.torsion}")
    add("rank H^n(Z_eta) = dim H^n(Q_eta)", hz.free_rank == hdr, f"{hz.free_rank} vs {hdr}")
    add("torus rank of R/Z corner = dim H^{n-1}(Q_eta)", rz_prev.torus_rank == hdr_prev,
        f"{rz_prev.torus_rank} vs {hdr_prev}")
    add("rank of j o I = dim H^n(Q_eta)", j.compose(proj).rank() == hdr,
        f"{j.compose(proj).rank()} vs {hdr}")

    corners = {
        f"H^{n - 1}(Q_eta)": hdr_prev,
        f"H^{n - 1}(R/Z model)": str(rz_prev),
        f"H^{n}(Z_eta)": str(hz),
        f"H^{n}(Q_eta)": hdr,
        f"Deligne^{n}": str(desc),
        f"Forms({n - 1})": "symbolic",
    }
    return DiamondReport(n, corners, beta, proj, j, tuple(checks))
