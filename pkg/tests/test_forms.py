"""Exact signatures and invariant bilinear forms."""

import random
from fractions import Fraction

import pytest

from matgrouplab.forms import (
    fixed_form_space,
    is_invariant_form,
    primitive_integer_form,
    symmetric_signature,
)
from matgrouplab.matrices import IntMatrix, frac_matrix


def test_signature_diagonal_cases():
    assert symmetric_signature(frac_matrix([[2, 0], [0, 3]])) == (2, 0, 0)
    assert symmetric_signature(frac_matrix([[-1, 0], [0, -5]])) == (0, 2, 0)
    assert symmetric_signature(frac_matrix([[1, 0], [0, -1]])) == (1, 1, 0)
    assert symmetric_signature(frac_matrix([[1, 0], [0, 0]])) == (1, 0, 1)
    assert symmetric_signature(frac_matrix([[0]])) == (0, 0, 1)


def test_signature_hyperbolic_block():
    # Zero diagonal forces the 2x2 hyperbolic block path.
    assert symmetric_signature(frac_matrix([[0, 1], [1, 0]])) == (1, 1, 0)
    g = frac_matrix([[0, 0, 1], [0, 2, 0], [1, 0, 0]])
    assert symmetric_signature(g) == (2, 1, 0)


def test_signature_congruence_invariant():
    # Signature is invariant under G -> S^T G S for invertible S.
    rng = random.Random(31)
    base = [[2, 1, 0], [1, -3, 1], [0, 1, 0]]
    g = frac_matrix(base)
    sig = symmetric_signature(g)
    e12 = IntMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    e23 = IntMatrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    for _ in range(10):
        s = IntMatrix.identity(3)
        for _ in range(6):
            s = s * (e12 if rng.random() < 0.5 else e23) ** rng.randint(-2, 2)
        srows = [[Fraction(x) for x in row] for row in s.rows]
        transformed = [
            [
                sum(srows[k][i] * g[k][l] * srows[l][j] for k in range(3) for l in range(3))
                for j in range(3)
            ]
            for i in range(3)
        ]
        assert symmetric_signature(transformed) == sig


def test_signature_rejects_asymmetric():
    with pytest.raises(ValueError):
        symmetric_signature(frac_matrix([[0, 1], [2, 0]]))


def test_fixed_form_space_rotation():
    # A quarter turn in the plane fixes multiples of I and of the
    # area form, nothing else.
    r = IntMatrix([[0, -1], [1, 0]])
    space = fixed_form_space([r])
    assert space.dimension == 2
    assert len(space.symmetric_part) == 1
    assert len(space.antisymmetric_part) == 1
    sym = space.symmetric_part[0]
    assert sym[0][0] == sym[1][1] != 0
    assert sym[0][1] == sym[1][0] == 0
    assert is_invariant_form(r, sym)
    assert space.signature in ((2, 0, 0), (0, 2, 0))


def test_fixed_form_space_symplectic_pair():
    # The elementary pair generates SL2(Z): it fixes the standard
    # antisymmetric form and no nonzero symmetric one.
    a = IntMatrix([[1, 1], [0, 1]])
    b = IntMatrix([[1, 0], [1, 1]])
    space = fixed_form_space([a, b])
    assert space.dimension == 1
    assert space.symmetric_part == ()
    assert space.signature is None
    anti = space.antisymmetric_part[0]
    assert anti[0][1] == -anti[1][0] != 0
    assert is_invariant_form(a, anti) and is_invariant_form(b, anti)


def test_fixed_form_space_basis_is_invariant():
    # Every basis element must satisfy the defining equations for every
    # generator; checked through the independent entrywise routine.
    gens = [IntMatrix([[2, 1], [1, 1]]), IntMatrix([[1, 1], [0, 1]])]
    space = fixed_form_space(gens)
    assert space.dimension >= 1
    for form in space.basis:
        for g in gens:
            assert is_invariant_form(g, form)


def test_is_invariant_form_examples():
    # Axis swap preserves diag(1,1) but not diag(1,-1).
    refl = IntMatrix([[0, 1], [1, 0]])
    assert is_invariant_form(refl, frac_matrix([[1, 0], [0, 1]]))
    assert not is_invariant_form(refl, frac_matrix([[1, 0], [0, -1]]))
    # Any det-1 matrix preserves the area form in dimension 2.
    m = IntMatrix([[2, 1], [1, 1]])
    assert is_invariant_form(m, frac_matrix([[0, 1], [-1, 0]]))


def test_primitive_integer_form_scaling():
    rows = [[Fraction(2, 3), Fraction(0)], [Fraction(0), Fraction(-4, 3)]]
    assert primitive_integer_form(rows) == ((1, 0), (0, -2))
    neg = [[Fraction(-1, 2), Fraction(0)], [Fraction(0), Fraction(-3, 2)]]
    assert primitive_integer_form(neg) == ((1, 0), (0, 3))
    with pytest.raises(ValueError):
        primitive_integer_form([[Fraction(0)]])
