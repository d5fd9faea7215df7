"""Exact integer matrix arithmetic against independent oracles."""

import random
from fractions import Fraction

import pytest

from matgrouplab.matrices import (
    IntMatrix,
    frac_inverse,
    frac_matmul,
    frac_matrix,
    frac_nullspace,
    frac_rank,
    frac_rref,
)
from matgrouplab.polynomials import IntPoly


def random_matrix(rng: random.Random, n: int, lo: int = -5, hi: int = 5) -> IntMatrix:
    return IntMatrix([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])


def det_by_expansion(rows: list[list[int]]) -> int:
    # Cofactor expansion, exponential but independent of Bareiss.
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        sign = -1 if j % 2 else 1
        total += sign * rows[0][j] * det_by_expansion(minor)
    return total


def test_constructors_and_validation():
    m = IntMatrix([[1, 2], [3, 4]])
    assert m.n == 2 and m[0, 1] == 2
    assert IntMatrix.identity(3).is_identity
    assert IntMatrix.zero(2).rows == ((0, 0), (0, 0))
    with pytest.raises(ValueError):
        IntMatrix([[1, 2], [3]])
    with pytest.raises(TypeError):
        IntMatrix([[1.5, 0], [0, 1]])


def test_arithmetic_basics():
    rng = random.Random(11)
    a = random_matrix(rng, 3)
    b = random_matrix(rng, 3)
    assert (a + b) - b == a
    assert -a + a == IntMatrix.zero(3)
    assert 2 * a == a + a
    assert (a * b).transpose() == b.transpose() * a.transpose()
    assert a.trace() == a.transpose().trace()


def test_det_matches_cofactor_expansion():
    rng = random.Random(23)
    for n in (1, 2, 3, 4):
        for _ in range(30):
            m = random_matrix(rng, n)
            assert m.det() == det_by_expansion([list(r) for r in m.rows])


def test_det_multiplicative():
    rng = random.Random(5)
    for _ in range(25):
        a = random_matrix(rng, 3)
        b = random_matrix(rng, 3)
        assert (a * b).det() == a.det() * b.det()


def test_charpoly_matches_point_evaluation():
    # p(x) = det(xI - M) at integer points is an independent oracle.
    rng = random.Random(7)
    for n in (1, 2, 3, 4, 5):
        m = random_matrix(rng, n)
        p = m.charpoly()
        assert p.is_monic and p.degree == n
        for x in range(-2, n + 2):
            shifted = x * IntMatrix.identity(n) - m
            assert p(x) == shifted.det()


def test_charpoly_trace_and_det_coefficients():
    rng = random.Random(13)
    m = random_matrix(rng, 4)
    p = m.charpoly()
    assert p.coeffs[3] == -m.trace()
    assert p.coeffs[0] == m.det()  # (-1)^n det(M) with n = 4


def test_cayley_hamilton():
    rng = random.Random(29)
    for n in (2, 3, 4):
        m = random_matrix(rng, n, -3, 3)
        p = m.charpoly()
        acc = IntMatrix.zero(n)
        power = IntMatrix.identity(n)
        for c in p.coeffs:
            acc = acc + c * power
            power = power * m
        assert acc == IntMatrix.zero(n)


def test_pow_and_inverse():
    m = IntMatrix([[1, 1], [0, 1]])
    assert m**5 == IntMatrix([[1, 5], [0, 1]])
    assert m**0 == IntMatrix.identity(2)
    assert m**-3 == IntMatrix([[1, -3], [0, 1]])
    assert m.inverse() * m == IntMatrix.identity(2)
    with pytest.raises(ValueError):
        IntMatrix([[2, 0], [0, 1]]).inverse()


def test_inverse_of_unimodular_products():
    rng = random.Random(37)
    e12 = IntMatrix([[1, 1], [0, 1]])
    e21 = IntMatrix([[1, 0], [1, 1]])
    m = IntMatrix.identity(2)
    for _ in range(12):
        m = m * (e12 if rng.random() < 0.5 else e21) ** rng.randint(-3, 3)
    assert m.det() in (1, -1)
    assert m * m.inverse() == IntMatrix.identity(2)


def test_frac_rref_and_rank():
    rows = frac_matrix([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    reduced, pivots = frac_rref(rows)
    assert pivots == [0, 1]
    assert frac_rank(rows) == 2
    # Nullspace vector must be killed by every row.
    null = frac_nullspace(rows, 3)
    assert len(null) == 1
    v = null[0]
    for row in frac_matrix([[1, 2, 3], [2, 4, 6], [0, 1, 1]]):
        assert sum(a * b for a, b in zip(row, v)) == 0


def test_frac_inverse_roundtrip():
    rng = random.Random(41)
    m = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)] for _ in range(3)]
    inv = frac_inverse(m)
    if inv is not None:
        prod = frac_matmul(m, inv)
        ident = [[Fraction(1 if i == j else 0) for j in range(3)] for i in range(3)]
        assert prod == ident
    singular = frac_matrix([[1, 2], [2, 4]])
    assert frac_inverse(singular) is None


def test_hash_and_equality():
    a = IntMatrix([[1, 0], [0, 1]])
    b = IntMatrix.identity(2)
    assert a == b and hash(a) == hash(b)
    assert a != IntMatrix([[1, 0], [0, -1]])


def test_companion_charpoly_roundtrip():
    # charpoly(companion(p)) == p ties the two exact routines together.
    from matgrouplab.monodromy import companion

    p = IntPoly([3, -2, 0, 1, 1])  # t^4 + t^3 - 2t + 3
    assert companion(p).charpoly() == p
