"""
Exact integer linear algebra for cohomology computations.

Everything here works with Python integers (arbitrary precision). The
central pieces are

* :class:`IntMatrix`, an immutable integer matrix that remembers its
  shape even when it has no entries (a 0x3 matrix is not a 3x0 matrix),
* :func:`smith_normal_form`, returning ``A = U S V`` with ``U``, ``V``
  unimodular,
* :class:`FgAbGroup`, the invariant-factor normal form of a finitely
  generated abelian group, and :class:`GroupHom`, a homomorphism written
  against explicit generators,
* :func:`cohomology_at`, :func:`induced_map` and :func:`exactness_check`.

>>> cohomology_at(IntMatrix.zeros(0, 1), IntMatrix.from_rows([[2]]))
FgAbGroup(free_rank=0, invariant_factors=(2,))
>>> print(_)
Z/2

Generators of a group are laid out torsion first (in invariant factor
order), then the free generators. Over a field (see :mod:`twdeligne.linalg`)
a "group" is a vector space and is stored as ``FgAbGroup(free_rank=dim)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm, prod
from typing import Iterable, Sequence

from twdeligne.linalg import Field, field_rank, field_rref, field_solve


class CompositionNotZero(ValueError):
    """Two maps that should compose to zero do not."""


class NotAChainMap(ValueError):
    """A cochain map fails to commute with the differentials."""


class NotACocycle(ValueError):
    pass


def _check_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"integer matrix entries must be int, got {type(x).__name__}")
    return x


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix with an explicit shape."""

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.data) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.data)}")
        for r in self.data:
            if len(r) != self.cols:
                raise ValueError(f"expected rows of length {self.cols}, got {len(r)}")
            for x in r:
                _check_int(x)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(r) for r in rows)
        if cols is None:
            if not data:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        cols = len(columns)
        data = tuple(tuple(columns[j][i] for j in range(cols)) for i in range(rows))
        return cls(rows, cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, entries: Sequence[int], rows: int | None = None,
             cols: int | None = None) -> "IntMatrix":
        k = len(entries)
        rows = k if rows is None else rows
        cols = k if cols is None else cols
        return cls(rows, cols, tuple(
            tuple(entries[i] if i == j and i < k else 0 for j in range(cols))
            for i in range(rows)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(tuple(self.data[i][j] for i in range(self.rows))
                               for j in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        return IntMatrix(self.rows, other.cols, tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in ocols) for r in self.data))

    def apply(self, vec: Sequence) -> tuple:
        """Matrix-vector product; ``vec`` may hold ints, Fractions or residues."""
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} for {self.shape} matrix")
        return tuple(sum((a * v for a, v in zip(r, vec) if a), 0) for r in self.data)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.data))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.data for a in r)

    def is_zero_mod(self, p: int) -> bool:
        return all(a % p == 0 for r in self.data for a in r)

    def take(self, row_idx: Iterable[int] | None = None,
             col_idx: Iterable[int] | None = None) -> "IntMatrix":
        ri = range(self.rows) if row_idx is None else list(row_idx)
        ci = range(self.cols) if col_idx is None else list(col_idx)
        return IntMatrix(len(ri), len(ci), tuple(tuple(self.data[i][j] for j in ci) for i in ri))

    @staticmethod
    def hstack(blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        rows = blocks[0].rows
        if any(b.rows != rows for b in blocks):
            raise ValueError("hstack needs equal row counts")
        return IntMatrix(rows, sum(b.cols for b in blocks), tuple(
            sum((b.data[i] for b in blocks), ()) for i in range(rows)))

    @staticmethod
    def vstack(blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise ValueError("vstack needs equal column counts")
        return IntMatrix(sum(b.rows for b in blocks), cols,
                         sum((b.data for b in blocks), ()))

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def __str__(self) -> str:
        if not self.rows or not self.cols:
            return f"<empty {self.rows}x{self.cols}>"
        w = max(len(str(a)) for r in self.data for a in r)
        return "\n".join("[" + " ".join(str(a).rjust(w) for a in r) + "]" for r in self.data)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``A = U @ S @ V`` with ``U``, ``V`` unimodular and ``S`` in Smith form.

    ``U_inv`` and ``V_inv`` are carried along because every consumer needs
    them and they come for free from the elimination.
    """

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def shape(self) -> tuple[int, int]:
        return self.S.shape

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.rows, self.S.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    m, n = A.rows, A.cols
    a = A.tolist()
    L = [[int(i == j) for j in range(m)] for i in range(m)]
    Li = [[int(i == j) for j in range(m)] for i in range(m)]
    R = [[int(i == j) for j in range(n)] for i in range(n)]
    Ri = [[int(i == j) for j in range(n)] for i in range(n)]

    # Row ops act on a and L from the left and on Li from the right with the
    # inverse; column ops act on a and R from the right, on Ri from the left.
    def row_add(i, j, c):  # row i += c * row j
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        L[i] = [x + c * y for x, y in zip(L[i], L[j])]
        for r in Li:
            r[j] -= c * r[i]

    def row_swap(i, j):
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        L[i], L[j] = L[j], L[i]
        for r in Li:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        L[i] = [-x for x in L[i]]
        for r in Li:
            r[i] = -r[i]

    def col_add(j, i, c):  # col j += c * col i
        for r in a:
            r[j] += c * r[i]
        for r in R:
            r[j] += c * r[i]
        Ri[i] = [x - c * y for x, y in zip(Ri[i], Ri[j])]

    def col_swap(i, j):
        if i == j:
            return
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in R:
            r[i], r[j] = r[j], r[i]
        Ri[i], Ri[j] = Ri[j], Ri[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // a[t][t]))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // a[t][t]))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                # a remainder is smaller than the pivot; promote the smallest
                cand = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
                _, i, j = min(cand)
                row_swap(t, i)
                col_swap(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if a[t][t] < 0:
            row_neg(t)
        t += 1

    def mk(rows, c):
        return IntMatrix(len(rows), c, tuple(tuple(r) for r in rows))

    return SmithDecomposition(U=mk(Li, m), S=mk(a, n), V=mk(Ri, n), U_inv=mk(L, m), V_inv=mk(R, n))


def kernel_basis(A: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the (saturated) integer kernel of ``A``."""
    snf = smith_normal_form(A)
    return [snf.V_inv.column(j) for j in range(snf.rank, A.cols)]


def solve_integer(A: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """An integer solution of ``A x = b``, or None when there is none."""
    snf = smith_normal_form(A)
    c = snf.U_inv.apply(b)
    y = [0] * A.cols
    for i, ci in enumerate(c):
        d = snf.S[i, i] if i < min(A.rows, A.cols) else 0
        if d == 0:
            if ci:
                return None
        elif ci % d:
            return None
        else:
            y[i] = ci // d
    return snf.V_inv.apply(y)


# ---------------------------------------------------------------------------
# Finitely generated abelian groups


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^free_rank (+) Z/d1 (+) ... (+) Z/dk`` with ``2 <= d1 | d2 | ... | dk``.

    The normal form is unique, so isomorphism is field equality.
    """

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(self.invariant_factors))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        prev = None
        for d in self.invariant_factors:
            if _check_int(d) < 2:
                raise ValueError(f"invariant factor {d} < 2")
            if prev is not None and d % prev:
                raise ValueError(f"invariant factors {self.invariant_factors} do not form a chain")
            prev = d

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FgAbGroup":
        """Normal form of ``(+) Z/o_i`` (``o_i = 0`` meaning ``Z``)."""
        orders = [abs(o) for o in orders]
        snf = smith_normal_form(IntMatrix.diag(orders))
        return cls._from_diagonal(snf.diagonal)

    @classmethod
    def from_relations(cls, relations: IntMatrix) -> "FgAbGroup":
        """Cokernel of ``relations`` (columns are relations among ``rows`` generators)."""
        snf = smith_normal_form(relations)
        diag = list(snf.diagonal) + [0] * (relations.rows - min(relations.shape))
        return cls._from_diagonal(diag)

    @classmethod
    def _from_diagonal(cls, diag) -> "FgAbGroup":
        return cls(free_rank=sum(1 for d in diag if d == 0),
                   invariant_factors=tuple(d for d in diag if d > 1))

    @property
    def torsion_order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def orders(self) -> tuple[int, ...]:
        """Generator orders in generator order (0 for a free generator)."""
        return self.invariant_factors + (0,) * self.free_rank

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors) + self.free_rank

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def torsion_subgroup(self) -> "FgAbGroup":
        return FgAbGroup(0, self.invariant_factors)

    def p_rank(self, p: int) -> int:
        """Number of invariant factors divisible by ``p``."""
        return sum(1 for d in self.invariant_factors if d % p == 0)

    def __add__(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup.from_orders(self.orders + other.orders)

    def __str__(self) -> str:
        return render_group(self)

    @classmethod
    def parse(cls, text: str) -> "FgAbGroup":
        """Inverse of ``str``: ``"Z^2 (+) Z/2 (+) Z/4"``, ``"0"``."""
        text = text.strip()
        if text == "0":
            return cls()
        free, tors = 0, []
        for part in text.split("(+)"):
            part = part.strip()
            if part == "Z":
                free += 1
            elif part.startswith("Z^"):
                free += int(part[2:])
            elif part.startswith("Z/"):
                tors.append(int(part[2:]))
            else:
                raise ValueError(f"cannot parse group summand {part!r}")
        return cls.from_orders([0] * free + tors)


def render_group(G: FgAbGroup, extra: Sequence[str] = ()) -> str:
    parts = []
    if G.free_rank == 1:
        parts.append("Z")
    elif G.free_rank > 1:
        parts.append(f"Z^{G.free_rank}")
    parts += [f"Z/{d}" for d in G.invariant_factors]
    parts += list(extra)
    return " (+) ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Cohomology with explicit generators


class IntegralCohomology:
    """``ker(d_out) / im(d_in)`` over Z with chosen generators.

    ``generators[i]`` is an integer cocycle; ``coordinates(c)`` expresses a
    cocycle in those generators (torsion coordinates reduced mod their order).
    Generator signs are normalized so the first nonzero entry is positive.
    """

    field = None

    def __init__(self, d_out: IntMatrix, d_in: IntMatrix):
        if d_out.cols != d_in.rows:
            raise ValueError(f"incompatible differentials {d_out.shape} and {d_in.shape}")
        if not (d_out @ d_in).is_zero():
            raise CompositionNotZero("d_out @ d_in is not the zero matrix")
        self.d_out, self.d_in = d_out, d_in
        n = d_out.cols
        snf1 = smith_normal_form(d_out)
        r1 = snf1.rank
        self._V1 = snf1.V
        self._r1 = r1
        kernel = snf1.V_inv.take(col_idx=range(r1, n))
        z = n - r1
        Y = snf1.V @ d_in
        assert Y.take(row_idx=range(r1)).is_zero()
        X = Y.take(row_idx=range(r1, n))
        snf2 = smith_normal_form(X)
        diag = list(snf2.diagonal) + [0] * (z - min(X.shape))
        keep = [i for i in range(z) if diag[i] != 1]
        gens = kernel @ snf2.U
        self.orders = tuple(diag[i] for i in keep)
        self.group = FgAbGroup(free_rank=self.orders.count(0),
                               invariant_factors=tuple(d for d in self.orders if d))
        self.generators: list[tuple[int, ...]] = []
        coord_rows = []
        for i in keep:
            g = gens.column(i)
            row = snf2.U_inv.row(i)
            lead = next((x for x in g if x), 0)
            if lead < 0:
                g = tuple(-x for x in g)
                row = tuple(-x for x in row)
            self.generators.append(g)
            coord_rows.append(row)
        self._coord = IntMatrix(len(keep), z, tuple(coord_rows))

    def coordinates(self, cocycle: Sequence[int]) -> tuple[int, ...]:
        if any(self.d_out.apply(cocycle)):
            raise NotACocycle("vector is not a cocycle")
        y = self._V1.apply(cocycle)[self._r1:]
        w = self._coord.apply(y)
        return tuple(x % d if d else x for x, d in zip(w, self.orders))

    def is_coboundary(self, cocycle: Sequence[int]) -> bool:
        return not any(self.coordinates(cocycle))


class FieldCohomology:
    """``ker(d_out) / im(d_in)`` over a field, with a basis of cocycles."""

    def __init__(self, d_out: IntMatrix, d_in: IntMatrix, F: Field):
        if d_out.cols != d_in.rows:
            raise ValueError(f"incompatible differentials {d_out.shape} and {d_in.shape}")
        self.field = F
        sq = d_out @ d_in
        if not (sq.is_zero_mod(F.characteristic) if F.characteristic else sq.is_zero()):
            raise CompositionNotZero(f"d_out @ d_in is nonzero over {F}")
        self.d_out = F.matrix(d_out.tolist(), d_out.cols)
        d_in_f = F.matrix(d_in.tolist(), d_in.cols)
        n = d_out.cols
        kernel = F.nullspace(self.d_out, n)
        image = [tuple(r[j] for r in d_in_f) for j in range(d_in.cols)]
        # pivots falling in the kernel block pick a complement of the image
        cols = image + kernel
        _, pivots = field_rref(F, [[c[i] for c in cols] for i in range(n)], len(cols))
        self._image = image
        self.generators = [kernel[p - len(image)] for p in pivots if p >= len(image)]
        self.orders = (0,) * len(self.generators)
        self.group = FgAbGroup(free_rank=len(self.generators))
        self.dim = len(self.generators)
        self._n = n

    def coordinates(self, cocycle: Sequence) -> tuple:
        F = self.field
        c = tuple(F(x) for x in cocycle)
        if any(F.dot(r, c) for r in self.d_out):
            raise NotACocycle("vector is not a cocycle")
        cols = self._image + self.generators
        A = [[col[i] for col in cols] for i in range(self._n)]
        x = field_solve(F, A, c, len(cols))
        if x is None:
            raise NotACocycle("cocycle outside the span of image and generators")
        return tuple(x[len(self._image):])

    def is_coboundary(self, cocycle: Sequence) -> bool:
        return not any(self.coordinates(cocycle))


def cohomology_basis(d_out: IntMatrix, d_in: IntMatrix, F: Field | None = None):
    if F is None:
        return IntegralCohomology(d_out, d_in)
    return FieldCohomology(d_out, d_in, F)


def cohomology_at(d_out: IntMatrix, d_in: IntMatrix) -> FgAbGroup:
    """Normal form of ``ker(d_out) / im(d_in)`` over Z."""
    return IntegralCohomology(d_out, d_in).group


# ---------------------------------------------------------------------------
# Homomorphisms


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism against the generators of ``source`` and ``target``.

    Column ``j`` of ``matrix`` is the image of source generator ``j``. Over Z
    (``field is None``) torsion rows are reduced mod the generator order.
    Over a field the entries are field elements and both groups are
    ``FgAbGroup(free_rank=dim)``; the source may still be a Z-module, as for a
    change of coefficients ``Z -> Q``.
    """

    source: FgAbGroup
    target: FgAbGroup
    matrix: tuple[tuple, ...]
    field: Field | None = field(default=None, compare=True)

    def __post_init__(self):
        m = tuple(tuple(r) for r in self.matrix)
        if len(m) != self.target.ngens or any(len(r) != self.source.ngens for r in m):
            raise ValueError(f"matrix shape does not match {self.target.ngens}x{self.source.ngens}")
        if self.field is None:
            t_ord = self.target.orders
            m = tuple(tuple(_check_int(x) % o if o else _check_int(x) for x in r)
                      for r, o in zip(m, t_ord))
            for j, d in enumerate(self.source.orders):
                if d and any((d * m[i][j]) % o if o else d * m[i][j]
                             for i, o in enumerate(t_ord)):
                    raise ValueError(f"image of an order-{d} generator is not killed by {d}")
        else:
            m = tuple(tuple(self.field(x) for x in r) for r in m)
            for j, d in enumerate(self.source.orders):
                if d and self.field(d) and any(m[i][j] for i in range(len(m))):
                    raise ValueError(f"image of an order-{d} generator is not killed by {d}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup, field: Field | None = None) -> "GroupHom":
        return cls(source, target, tuple((0,) * source.ngens for _ in range(target.ngens)), field)

    @classmethod
    def identity(cls, G: FgAbGroup, field: Field | None = None) -> "GroupHom":
        n = G.ngens
        return cls(G, G, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), field)

    def __call__(self, x: Sequence) -> tuple:
        out = tuple(sum((a * b for a, b in zip(r, x)), 0) for r in self.matrix)
        if self.field is None:
            return tuple(v % o if o else v for v, o in zip(out, self.target.orders))
        return tuple(self.field(v) for v in out)

    def compose(self, other: "GroupHom") -> "GroupHom":
        """``self o other``."""
        if other.target != self.source:
            raise ValueError("cannot compose: groups do not match")
        cols = [self(c) for c in zip(*other.matrix)] if other.matrix else \
            [self((0,) * self.source.ngens) for _ in range(other.source.ngens)]
        return GroupHom(other.source, self.target,
                        tuple(tuple(c[i] for c in cols) for i in range(self.target.ngens)),
                        self.field)

    def is_zero(self) -> bool:
        return not any(x for r in self.matrix for x in r)

    def rank(self) -> int:
        """Rank after tensoring with Q (or over the field)."""
        if self.field is None:
            free = [i for i, o in enumerate(self.target.orders) if o == 0]
            return smith_normal_form(IntMatrix(len(free), self.source.ngens, tuple(
                self.matrix[i] for i in free))).rank if free else 0
        return field_rank(self.field, [list(r) for r in self.matrix], self.source.ngens)

    def image_columns(self) -> list[tuple]:
        return [tuple(r[j] for r in self.matrix) for j in range(self.source.ngens)]

    def integral(self) -> "GroupHom":
        """A Q-valued map out of a Z-module, rescaled to land in ``Z^dim``.

        Clearing denominators does not change the kernel, which is what the
        exactness tests look at.
        """
        if self.field is None:
            return self
        if self.field.characteristic:
            raise ValueError("only rational maps can be made integral")
        den = lcm(*(x.denominator for r in self.matrix for x in r)) if self.matrix else 1
        m = tuple(tuple(int(x * den) for x in r) for r in self.matrix)
        return GroupHom(self.source, FgAbGroup(free_rank=self.target.ngens), m)


def induced_map(f_cochain, source_complex, target_complex, k: int) -> GroupHom:
    """Map on ``H^k`` induced by a cochain map.

    ``f_cochain`` maps a degree to an :class:`IntMatrix` (rows: target cells,
    cols: source cells), either as a dict or as a callable. The complexes
    need ``delta(j)``, ``ncells(j)``, ``cohomology(j)`` and ``field``.
    Commutation is checked at the two squares touching degree ``k``; over
    ``F_p`` targets it is checked mod ``p``.
    """
    get = f_cochain if callable(f_cochain) else (
        lambda j: f_cochain.get(j, IntMatrix.zeros(target_complex.ncells(j),
                                                   source_complex.ncells(j))))
    F = target_complex.field
    for j in (k - 1, k):
        lhs = get(j + 1) @ source_complex.delta(j)
        rhs = target_complex.delta(j) @ get(j)
        diff = lhs - rhs
        ok = diff.is_zero() if F is None or F.characteristic == 0 else \
            diff.is_zero_mod(F.characteristic)
        if not ok:
            raise NotAChainMap(f"cochain map does not commute with the differential in degree {j}")
    fk = get(k)
    Hs, Ht = source_complex.cohomology(k), target_complex.cohomology(k)
    if source_complex.field is not None and F is None:
        raise ValueError("no map from field coefficients back to Z")
    cols = [Ht.coordinates(fk.apply(g)) for g in Hs.generators]
    matrix = tuple(tuple(c[i] for c in cols) for i in range(Ht.group.ngens))
    return GroupHom(Hs.group, Ht.group, matrix, F)


# ---------------------------------------------------------------------------
# Exactness


@dataclass(frozen=True)
class ExactnessDefect:
    """``ker(g) / im(f)`` at the middle group, with lattice generators of both.

    Over Z the lattices live in ``Z^n`` (n = generators of the middle group)
    and contain the torsion relations; over a field they are subspaces.
    """

    homology: FgAbGroup
    image: tuple[tuple, ...]
    kernel: tuple[tuple, ...]

    @property
    def exact(self) -> bool:
        return self.homology.is_trivial()


def _require_composable(f: GroupHom, g: GroupHom):
    if f.target != g.source:
        raise ValueError(f"f lands in {f.target}, g starts at {g.source}")
    if (f.field is None) != (g.field is None) or (
            f.field is not None and f.field.characteristic != g.field.characteristic):
        raise ValueError("f and g are over different coefficient rings")
    if not g.compose(f).is_zero():
        raise CompositionNotZero("g o f is not zero")


def exactness_defect(f: GroupHom, g: GroupHom) -> ExactnessDefect:
    _require_composable(f, g)
    B, C = f.target, g.target
    n = B.ngens
    if f.field is not None:
        F = f.field
        rf = field_rank(F, [list(r) for r in f.matrix], f.source.ngens)
        G = [list(r) for r in g.matrix]
        kernel = F.nullspace(G, n) if G else [tuple(F(int(i == j)) for j in range(n))
                                              for i in range(n)]
        rk = n - field_rank(F, G, n) if G else n
        return ExactnessDefect(FgAbGroup(free_rank=rk - rf),
                               tuple(f.image_columns()), tuple(kernel))
    rel_B = [tuple(o if i == j else 0 for i in range(n)) for j, o in enumerate(B.orders) if o]
    image = [c for c in f.image_columns() + rel_B if any(c)]
    # x is in ker g iff g(x) = sum_t y_t * ord_t * e_t for torsion rows t of C
    tors_C = [(t, o) for t, o in enumerate(C.orders) if o]
    Gm = IntMatrix(C.ngens, n, g.matrix)
    D = IntMatrix(C.ngens, len(tors_C), tuple(
        tuple(-o if t == i else 0 for t, o in tors_C) for i in range(C.ngens)))
    big = IntMatrix.hstack([Gm, D]) if tors_C else Gm
    kernel = [tuple(v[:n]) for v in kernel_basis(big)]
    kernel = _lattice_basis(kernel, n)
    if not kernel:
        return ExactnessDefect(FgAbGroup(), tuple(image), ())
    K = IntMatrix.from_columns(kernel, n)
    coords = []
    for c in image:
        x = solve_integer(K, c)
        if x is None:  # image not inside kernel; g o f = 0 rules this out
            raise CompositionNotZero("image of f escapes the kernel of g")
        coords.append(x)
    rel = IntMatrix.from_columns(coords, len(kernel)) if coords else \
        IntMatrix.zeros(len(kernel), 0)
    return ExactnessDefect(FgAbGroup.from_relations(rel), tuple(image), tuple(kernel))


def _lattice_basis(vectors: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    """Z-basis of the lattice spanned by ``vectors``."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return []
    M = IntMatrix.from_columns(vectors, n)
    snf = smith_normal_form(M)
    basis = snf.U @ snf.S
    return [basis.column(j) for j in range(snf.rank)]


def exactness_check(f: GroupHom, g: GroupHom) -> bool:
    """True iff ``im f == ker g`` in ``f.target``."""
    return exactness_defect(f, g).exact
