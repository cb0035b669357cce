"""Gaussian elimination over Q (``fractions.Fraction``) and over F_p."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


class Field:
    characteristic: int

    def __call__(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def matrix(self, rows: Sequence[Sequence], ncols: int) -> list[list]:
        return [[self(x) for x in r] for r in rows]

    def dot(self, a: Sequence, b: Sequence):
        return self(sum((x * y for x, y in zip(a, b)), 0))

    def matmul(self, A: list[list], B: list[list], bcols: int) -> list[list]:
        return [[self.dot(r, [B[k][j] for k in range(len(B))]) for j in range(bcols)] for r in A]

    def nullspace(self, A: list[list], ncols: int) -> list[tuple]:
        R, pivots = field_rref(self, A, ncols)
        free = [j for j in range(ncols) if j not in pivots]
        basis = []
        for fj in free:
            v = [self(0)] * ncols
            v[fj] = self(1)
            for r, pj in enumerate(pivots):
                v[pj] = self(-R[r][fj])
            basis.append(tuple(v))
        return basis

    def __eq__(self, other):
        return isinstance(other, Field) and type(self) is type(other) and \
            self.characteristic == other.characteristic

    def __hash__(self):
        return hash((type(self).__name__, self.characteristic))


class Rationals(Field):
    characteristic = 0

    def __call__(self, x):
        return Fraction(x)

    def inv(self, x):
        return 1 / Fraction(x)

    def __repr__(self):
        return "QQ"

    def __str__(self):
        return "Q"


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p

    def __call__(self, x):
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.characteristic)) % self.characteristic
        return int(x) % self.characteristic

    def inv(self, x):
        return pow(int(x), -1, self.characteristic)

    def __repr__(self):
        return f"GF({self.characteristic})"

    def __str__(self):
        return f"F{self.characteristic}"


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def _rref_rational(rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    # Fraction-free Gauss-Jordan on integer rows; divide out at the very end.
    a = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        den = lcm(*(x.denominator for x in fr)) if fr else 1
        a.append([int(x * den) for x in fr])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                row = [p * x - f * y for x, y in zip(a[i], a[r])]
                g = gcd(*row)
                a[i] = [x // g for x in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return [[Fraction(x, row[pc]) for x in row] for row, pc in zip(a, pivots)], pivots


def field_rref(F: Field, rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    if F.characteristic == 0:
        return _rref_rational(rows, ncols)
    p = F.characteristic
    a = [[F(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def field_rank(F: Field, rows: Sequence[Sequence], ncols: int) -> int:
    return len(field_rref(F, rows, ncols)[1])


def field_solve(F: Field, A: Sequence[Sequence], b: Sequence, ncols: int) -> list | None:
    """One solution of ``A x = b`` or None."""
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, pivots = field_rref(F, aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [F(0)] * ncols
    for r, pj in enumerate(pivots):
        x[pj] = R[r][ncols]
    return x
