"""Invariant bilinear forms and exact signatures.

`fixed_form_space` computes the space of bilinear forms F with g^T F g = F
for every generator g, by solving the exact rational linear system on the
n^2 matrix entries.  The space is split into symmetric and antisymmetric
parts and the designated symmetric element (first symmetric basis vector)
gets an exact signature.

`symmetric_signature` is an exact LDL^T with symmetric pivoting: a nonzero
diagonal entry is used as a 1x1 pivot; when every active diagonal entry
vanishes, a nonzero off-diagonal entry spans a hyperbolic 2x2 block which
contributes (1, 1) to the signature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .matrices import IntMatrix, frac_nullspace

FormMatrix = tuple  # tuple of tuples of Fraction


def _as_frac_rows(form: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in form]


def symmetric_signature(form: Sequence[Sequence]) -> tuple[int, int, int]:
    """Exact signature (positives, negatives, zeros) of a symmetric matrix."""
    a = _as_frac_rows(form)
    n = len(a)
    for i in range(n):
        if len(a[i]) != n:
            raise ValueError("form must be square")
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ValueError("form must be symmetric")
    active = list(range(n))
    pos = neg = zero = 0
    while active:
        pivot = next((i for i in active if a[i][i] != 0), None)
        if pivot is not None:
            d = a[pivot][pivot]
            if d > 0:
                pos += 1
            else:
                neg += 1
            active.remove(pivot)
            for i in active:
                f = a[i][pivot] / d
                if f == 0:
                    continue
                for j in active:
                    a[i][j] -= f * a[pivot][j]
            for i in active:
                a[i][pivot] = a[pivot][i] = Fraction(0)
            continue
        # all active diagonals vanish; look for a hyperbolic 2x2 block
        block = None
        for ii, i in enumerate(active):
            for j in active[ii + 1:]:
                if a[i][j] != 0:
                    block = (i, j)
                    break
            if block:
                break
        if block is None:
            zero += len(active)
            break
        i, j = block
        b = a[i][j]
        pos += 1
        neg += 1
        active.remove(i)
        active.remove(j)
        for k in active:
            for l in active:
                # Schur complement of the [[0, b], [b, 0]] block
                a[k][l] -= (a[k][i] * a[j][l] + a[k][j] * a[i][l]) / b
        for k in active:
            a[k][i] = a[i][k] = Fraction(0)
            a[k][j] = a[j][k] = Fraction(0)
    return pos, neg, zero


@dataclass(frozen=True)
class FormSpace:
    """Joint fixed space {F : g^T F g = F for all g}."""

    n: int
    basis: tuple[FormMatrix, ...]
    symmetric_part: tuple[FormMatrix, ...]
    antisymmetric_part: tuple[FormMatrix, ...]
    signature: tuple[int, int, int] | None  # of the first symmetric element

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _transpose(rows: tuple) -> tuple:
    return tuple(zip(*rows))


def _is_symmetric(rows: tuple) -> bool:
    return rows == _transpose(rows)


def _is_antisymmetric(rows: tuple) -> bool:
    return all(rows[i][j] == -rows[j][i] for i in range(len(rows)) for j in range(len(rows)))


def primitive_integer_form(rows: Sequence[Sequence[Fraction]]) -> tuple[tuple[int, ...], ...]:
    """Scale a rational matrix to primitive integer entries.

    Sign convention: first nonzero entry (row-major) positive.
    """
    flat = [x for row in rows for x in row]
    den = 1
    for x in flat:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in flat]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        raise ValueError("zero form")
    first = next(v for v in ints if v != 0)
    if first < 0:
        g = -g
    n = len(rows)
    scaled = [v // g for v in ints]
    return tuple(tuple(scaled[i * n:(i + 1) * n]) for i in range(n))


def _invariance_rows(gens: Sequence[IntMatrix], n: int) -> list[list[Fraction]]:
    rows: list[list[Fraction]] = []
    for g in gens:
        for i in range(n):
            for j in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    gki = g.rows[k][i]
                    if gki == 0:
                        continue
                    for l in range(n):
                        # coefficient of F_kl in (g^T F g)_ij
                        row[k * n + l] += Fraction(gki * g.rows[l][j])
                row[i * n + j] -= 1
                rows.append(row)
    return rows


def _vec_to_form(vec: Sequence[Fraction], n: int) -> FormMatrix:
    return tuple(tuple(vec[i * n + j] for j in range(n)) for i in range(n))


def fixed_form_space(gens: Sequence[IntMatrix]) -> FormSpace:
    """Solve g^T F g = F for all g exactly over Q.

    Transposition preserves the fixed space, so it splits into symmetric
    and antisymmetric parts; the two parts are computed by adding the
    (anti)symmetry constraints to the same exact system.  Basis matrices
    are scaled to primitive integer entries for readability.
    """
    if not gens:
        raise ValueError("need at least one matrix")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise ValueError("matrices must share a dimension")
    rows = _invariance_rows(gens, n)
    basis = tuple(
        primitive_integer_form(_vec_to_form(vec, n))
        for vec in frac_nullspace(rows, n * n)
    )
    sym: list[FormMatrix] = []
    antisym: list[FormMatrix] = []
    for sign, out in ((1, sym), (-1, antisym)):
        extra = list(rows)
        for i in range(n):
            for j in range(i + 1, n):
                row = [Fraction(0)] * (n * n)
                row[i * n + j] = Fraction(1)
                row[j * n + i] = Fraction(-sign)
                extra.append(row)
            if sign == -1:
                row = [Fraction(0)] * (n * n)
                row[i * n + i] = Fraction(1)
                extra.append(row)
        for vec in frac_nullspace(extra, n * n):
            out.append(primitive_integer_form(_vec_to_form(vec, n)))
    if len(sym) + len(antisym) != len(basis):
        raise AssertionError("symmetric/antisymmetric split must exhaust the space")
    signature = symmetric_signature(sym[0]) if sym else None
    return FormSpace(
        n=n,
        basis=basis,
        symmetric_part=tuple(sym),
        antisymmetric_part=tuple(antisym),
        signature=signature,
    )


def is_invariant_form(g: IntMatrix, form: Sequence[Sequence]) -> bool:
    """Check g^T F g = F exactly."""
    n = g.n
    f = _as_frac_rows(form)
    gt = [[Fraction(g.rows[j][i]) for j in range(n)] for i in range(n)]
    gf = [[sum(gt[i][k] * f[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    gfg = [
        [sum(gf[i][k] * g.rows[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]
    return all(gfg[i][j] == f[i][j] for i in range(n) for j in range(n))
