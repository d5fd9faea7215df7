"""Exact matrices over the integers and the rationals.

`IntMatrix` is an immutable square matrix with arbitrary-precision integer
entries.  Everything here is exact: determinants use fraction-free Bareiss
elimination, characteristic polynomials use the Faddeev-LeVerrier recurrence
(all divisions are integer-exact and asserted), inverses are computed over
`fractions.Fraction` and demanded to be integral.

Module-level helpers operate on plain lists of lists of `Fraction` for the
rational workhorses (rref, rank, nullspace, inverse) shared by the form and
monodromy machinery.
"""

from __future__ import annotations

import operator
from fractions import Fraction
from typing import Iterable, Sequence

from .polynomials import IntPoly


class IntMatrix:
    """Immutable n x n matrix with Python-int entries."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Iterable[Iterable[int]]):
        rows = tuple(tuple(operator.index(x) for x in row) for row in rows)
        n = len(rows)
        if n == 0:
            raise ValueError("empty matrix")
        if any(len(row) != n for row in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "IntMatrix":
        return cls(tuple((0,) * n for _ in range(n)))

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(map(str, row)) + "]" for row in self.rows)
        return f"IntMatrix([{body}])"

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.rows[i][j]

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.rows]

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_dim(other)
        return IntMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_dim(other)
        return IntMatrix(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(-a for a in row) for row in self.rows))

    def __rmul__(self, c: int) -> "IntMatrix":
        c = operator.index(c)
        return IntMatrix(tuple(tuple(c * a for a in row) for row in self.rows))

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_dim(other)
        cols = tuple(zip(*other.rows))
        return IntMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.rows
            )
        )

    def __pow__(self, k: int) -> "IntMatrix":
        k = operator.index(k)
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = IntMatrix.identity(self.n)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def _check_dim(self, other: "IntMatrix") -> None:
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n))

    @property
    def is_identity(self) -> bool:
        return all(
            self.rows[i][j] == (1 if i == j else 0)
            for i in range(self.n)
            for j in range(self.n)
        )

    def max_norm(self) -> int:
        return max(abs(a) for row in self.rows for a in row)

    def det(self) -> int:
        """Exact determinant by fraction-free Bareiss elimination."""
        n = self.n
        a = [list(row) for row in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            pivot = a[k][k]
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    # exact by the Bareiss identity
                    a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = pivot
        return sign * a[n - 1][n - 1]

    def inverse(self) -> "IntMatrix":
        """Inverse over the integers; requires det = +-1."""
        inv = frac_inverse([[Fraction(x) for x in row] for row in self.rows])
        if inv is None:
            raise ValueError("matrix is singular")
        out = []
        for row in inv:
            out_row = []
            for x in row:
                if x.denominator != 1:
                    raise ValueError("matrix is not invertible over the integers")
                out_row.append(x.numerator)
            out.append(tuple(out_row))
        return IntMatrix(tuple(out))

    def charpoly(self) -> IntPoly:
        """det(tI - M), monic, by the Faddeev-LeVerrier recurrence.

        All intermediate divisions are integer-exact (asserted).
        """
        n = self.n
        ident = IntMatrix.identity(n)
        cs = [1]  # descending: t^n coefficient first
        mk = self
        for k in range(1, n + 1):
            tr = mk.trace()
            ck, rem = divmod(-tr, k)
            assert rem == 0, "Faddeev-LeVerrier division must be exact"
            cs.append(ck)
            if k < n:
                mk = self * (mk + ck * ident)
        return IntPoly(reversed(cs))


# ---------------------------------------------------------------------------
# Rational (Fraction) matrix helpers on plain lists of lists.
# ---------------------------------------------------------------------------

FracMatrix = list


def frac_matrix(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def frac_matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def frac_rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rref, pivot column indices)."""
    m = [list(row) for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def frac_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    _, pivots = frac_rref(rows)
    return len(pivots)


def frac_nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right nullspace, one vector per free column of the rref.

    The basis is canonical: free variable set to 1, pivot variables solved.
    """
    rref, pivots = frac_rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rref[r][fc]
        basis.append(vec)
    return basis


def frac_inverse(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]] | None:
    """Inverse over Q, or None if singular."""
    n = len(rows)
    aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(rows)]
    rref, pivots = frac_rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in rref]
