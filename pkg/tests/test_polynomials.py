"""Integer polynomials, cyclotomic factorization, and reducibility verdicts."""

import math
import random

import pytest

from matgrouplab.polynomials import (
    IntPoly,
    cyclotomic,
    cyclotomic_factor,
    integer_roots,
    is_irreducible_mod,
    poly_gcd,
    poly_t,
    reducibility_verdict,
)


def test_poly_basics():
    p = IntPoly([1, 2, 1])  # t^2 + 2t + 1
    assert p.degree == 2 and p.is_monic
    assert p(3) == 16
    assert p * IntPoly([1]) == p
    assert IntPoly([0]).degree == -1 and IntPoly([0]).is_zero
    assert p + IntPoly([-1, 1]) == IntPoly([0, 3, 1])
    assert p - p == IntPoly([0])
    assert poly_t() ** 3 == IntPoly([0, 0, 0, 1])
    assert IntPoly([0, 2, 3]).derivative() == IntPoly([2, 6])


def test_cyclotomic_product_identity():
    # prod over d | n of Phi_d(t) = t^n - 1 pins down every Phi_d exactly.
    for n in range(1, 31):
        prod = IntPoly([1])
        for d in range(1, n + 1):
            if n % d == 0:
                prod = prod * cyclotomic(d)
        target = IntPoly([-1] + [0] * (n - 1) + [1])
        assert prod == target


def test_cyclotomic_degrees_are_totients():
    def totient(n: int) -> int:
        return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)

    for d in range(1, 25):
        assert cyclotomic(d).degree == totient(d)


def test_cyclotomic_known_small():
    assert cyclotomic(1) == IntPoly([-1, 1])
    assert cyclotomic(2) == IntPoly([1, 1])
    assert cyclotomic(4) == IntPoly([1, 0, 1])
    assert cyclotomic(5) == IntPoly([1, 1, 1, 1, 1])
    assert cyclotomic(6) == IntPoly([1, -1, 1])
    assert cyclotomic(12) == IntPoly([1, 0, -1, 0, 1])


def test_cyclotomic_factor_roundtrip():
    rng = random.Random(3)
    for _ in range(20):
        ds = [rng.randint(1, 12) for _ in range(rng.randint(1, 3))]
        p = IntPoly([1])
        for d in ds:
            p = p * cyclotomic(d)
        factors = cyclotomic_factor(p)
        assert factors is not None
        rebuilt = IntPoly([1])
        for d, mult in factors:
            rebuilt = rebuilt * cyclotomic(d) ** mult
        assert rebuilt == p


def test_cyclotomic_factor_rejects_non_cyclotomic():
    # t^2 - t - 1 has golden-ratio roots off the unit circle.
    assert cyclotomic_factor(IntPoly([-1, -1, 1])) is None
    assert cyclotomic_factor(IntPoly([2, 0, 1])) is None
    mixed = IntPoly([-1, -1, 1]) * cyclotomic(5)
    assert cyclotomic_factor(mixed) is None


def test_divmod_monic():
    rng = random.Random(17)
    for _ in range(25):
        p = IntPoly([rng.randint(-5, 5) for _ in range(rng.randint(1, 7))])
        d = IntPoly([rng.randint(-4, 4) for _ in range(rng.randint(1, 4))] + [1])
        q, r = p.divmod_monic(d)
        assert q * d + r == p
        assert r.degree < d.degree
    with pytest.raises(ValueError):
        IntPoly([1, 1]).divmod_monic(IntPoly([1, 2]))


def test_integer_roots():
    # (t - 2)(t + 3)(t^2 + 1) has integer roots exactly {-3, 2}.
    p = IntPoly([-2, 1]) * IntPoly([3, 1]) * IntPoly([1, 0, 1])
    assert integer_roots(p) == [-3, 2]
    assert integer_roots(IntPoly([1, 0, 1])) == []
    assert integer_roots(IntPoly([0, 0, 1])) == [0]
    assert integer_roots(IntPoly([0, -4, 0, 1])) == [-2, 0, 2]


def test_poly_gcd():
    a = IntPoly([-1, 1]) ** 2 * IntPoly([2, 1])
    b = IntPoly([-1, 1]) * IntPoly([5, 1])
    assert poly_gcd(a, b) == IntPoly([-1, 1])
    assert poly_gcd(a, IntPoly([1])).degree == 0
    # gcd with the derivative detects the square factor
    g = poly_gcd(a, a.derivative())
    assert g == IntPoly([-1, 1])


def test_is_irreducible_mod_known_cases():
    # t^2 + 1 is irreducible mod 3 (no square root of -1) but splits mod 5.
    p = IntPoly([1, 0, 1])
    assert is_irreducible_mod(p, 3) is True
    assert is_irreducible_mod(p, 5) is False
    # t^3 - t - 1 mod 2: no roots and degree 3, hence irreducible.
    assert is_irreducible_mod(IntPoly([-1, -1, 0, 1]), 2) is True
    # t^4 + t + 1 is the classic primitive quartic mod 2.
    assert is_irreducible_mod(IntPoly([1, 1, 0, 0, 1]), 2) is True


def brute_force_reducible_mod(p: IntPoly, q: int) -> bool:
    # Try every monic divisor of degree 1..deg/2 over Z/q, q prime.
    deg = p.degree
    coeffs = [c % q for c in p.coeffs]

    def poly_mod_divides(d: list[int]) -> bool:
        rem = list(coeffs)
        dd = len(d) - 1
        while len(rem) - 1 >= dd:
            lead = rem[-1]
            if lead:
                shift = len(rem) - 1 - dd
                for i, c in enumerate(d):
                    rem[shift + i] = (rem[shift + i] - lead * c) % q
            rem.pop()
        return all(c == 0 for c in rem)

    for d_deg in range(1, deg // 2 + 1):
        for code in range(q**d_deg):
            divisor = []
            c = code
            for _ in range(d_deg):
                divisor.append(c % q)
                c //= q
            divisor.append(1)
            if poly_mod_divides(divisor):
                return True
    return False


def test_is_irreducible_mod_vs_brute_force():
    rng = random.Random(19)
    for q in (2, 3, 5):
        for _ in range(20):
            deg = rng.randint(2, 4)
            p = IntPoly([rng.randint(0, q - 1) for _ in range(deg)] + [1])
            assert is_irreducible_mod(p, q) == (not brute_force_reducible_mod(p, q))


def test_reducibility_verdicts():
    verdict, cert = reducibility_verdict(IntPoly([-2, 1]) * IntPoly([-3, 1]))
    assert verdict == "reducible" and "root" in cert
    verdict, cert = reducibility_verdict(cyclotomic(5))
    assert verdict == "irreducible" and "cyclotomic" in cert
    verdict, cert = reducibility_verdict(cyclotomic(5) * cyclotomic(7))
    assert verdict == "reducible" and "cyclotomic" in cert
    # (t^2 - t - 1)^2: no integer root, not cyclotomic, repeated factor.
    verdict, cert = reducibility_verdict(IntPoly([-1, -1, 1]) ** 2)
    assert verdict == "reducible" and "repeated" in cert
    verdict, cert = reducibility_verdict(IntPoly([-1, -1, 0, 1]))
    assert verdict == "irreducible"
    verdict, cert = reducibility_verdict(IntPoly([1, 1, 0, 0, 1]))
    assert verdict == "irreducible" and "mod" in cert
    verdict, cert = reducibility_verdict(IntPoly([7, 1]))
    assert verdict == "irreducible"


def test_reducibility_undetermined_bucket():
    # (t^2 - t - 1)(t^2 - t + 3) is reducible over Z but squarefree, has no
    # integer root, is not cyclotomic, and is reducible mod every prime, so
    # no sound certificate exists on either side.
    p = IntPoly([-1, -1, 1]) * IntPoly([3, -1, 1])
    verdict, cert = reducibility_verdict(p)
    assert verdict == "undetermined"


def test_reducibility_verdict_consistency():
    # A claimed irreducible verdict must never coexist with a visible
    # factorization witness.
    rng = random.Random(23)
    for _ in range(30):
        p = IntPoly([rng.randint(-3, 3) for _ in range(rng.randint(2, 5))] + [1])
        verdict, cert = reducibility_verdict(p)
        factors = cyclotomic_factor(p)
        if factors is not None and sum(e for _, e in factors) > 1:
            assert verdict == "reducible"
        if verdict == "irreducible":
            assert integer_roots(p) == [] or p.degree == 1
