"""Exact integer polynomials: cyclotomic factorization and irreducibility.

`IntPoly` stores coefficients ascending (constant first) with no trailing
zeros; the zero polynomial is the empty tuple.  Division is provided for
monic divisors, where long division stays in the integers.

`cyclotomic_factor` decides whether a monic polynomial is a product of
cyclotomic polynomials and returns the multiset of (d, multiplicity) factors;
`reducibility_verdict` classifies a monic integer polynomial as reducible,
irreducible, or undetermined using only sound certificates.
"""

from __future__ import annotations

import math
import operator
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

DEFAULT_RABIN_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                        47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


class IntPoly:
    """Immutable integer polynomial, coefficients ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        cs = [operator.index(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def leading(self) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if self.is_zero:
            return "IntPoly(0)"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                terms.append(f"{c:+d}")
            else:
                mono = "t" if k == 1 else f"t^{k}"
                if c == 1:
                    terms.append(f"+{mono}")
                elif c == -1:
                    terms.append(f"-{mono}")
                else:
                    terms.append(f"{c:+d}*{mono}")
        s = " ".join(terms).lstrip("+")
        return f"IntPoly({s})"

    def __call__(self, x):
        # Horner; works for int and Fraction arguments
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPoly(tuple(x + y for x, y in zip(a, b)) + a[len(b):])

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + IntPoly(tuple(-c for c in other.coeffs))

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if self.is_zero or other.is_zero:
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    def __pow__(self, k: int) -> "IntPoly":
        k = operator.index(k)
        if k < 0:
            raise ValueError("negative power")
        result = IntPoly((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(k * c for k, c in enumerate(self.coeffs))[1:])

    def divmod_monic(self, divisor: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        """Long division by a monic divisor; stays in the integers."""
        if not divisor.is_monic:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        d = divisor.degree
        if len(rem) - 1 < d:
            return IntPoly(()), self
        quot = [0] * (len(rem) - d)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            quot[k - d] = c
            for j, b in enumerate(divisor.coeffs):
                rem[k - d + j] -= c * b
        return IntPoly(quot), IntPoly(rem)


def poly_t() -> IntPoly:
    return IntPoly((0, 1))


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> IntPoly:
    """The d-th cyclotomic polynomial, by exact division of t^d - 1."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if d == 1:
        return IntPoly((-1, 1))
    num = IntPoly([-1] + [0] * (d - 1) + [1])
    for e in range(1, d):
        if d % e == 0:
            q, r = num.divmod_monic(cyclotomic(e))
            assert r.is_zero, "cyclotomic division must be exact"
            num = q
    return num


def _totient(d: int) -> int:
    result = d
    m = d
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def cyclotomic_factor(p: IntPoly) -> list[tuple[int, int]] | None:
    """Factor p as a product of cyclotomics, or None if it is not one.

    Returns sorted [(d, multiplicity), ...] with prod Phi_d^mult = p.
    Candidate indices d are bounded by phi(d) <= deg p, and phi(d) >=
    sqrt(d/2) gives d <= 2*deg^2, so the scan is finite.
    """
    if not p.is_monic:
        raise ValueError("input must be monic")
    deg = p.degree
    if deg == 0:
        return []
    # every root of a cyclotomic product is a root of unity, so the
    # constant coefficient is +-1
    if abs(p.constant) != 1:
        return None
    factors: list[tuple[int, int]] = []
    rem = p
    for d in range(1, 2 * deg * deg + 2):
        if rem.degree == 0:
            break
        if _totient(d) > rem.degree:
            continue
        phi = cyclotomic(d)
        mult = 0
        while rem.degree >= phi.degree:
            q, r = rem.divmod_monic(phi)
            if not r.is_zero:
                break
            rem = q
            mult += 1
        if mult:
            factors.append((d, mult))
    if rem.degree != 0:
        return None
    return factors


def integer_roots(p: IntPoly) -> list[int]:
    """All integer roots of a monic integer polynomial.

    Rational roots of a monic polynomial are integers dividing the constant
    term (or 0 when the constant term vanishes).
    """
    if not p.is_monic:
        raise ValueError("input must be monic")
    roots = []
    if p.constant == 0:
        roots.append(0)
        c0 = next(c for c in p.coeffs if c != 0)
    else:
        c0 = p.constant
    bound = abs(c0)
    for d in range(1, bound + 1):
        if bound % d == 0:
            for cand in (d, -d):
                if p(cand) == 0:
                    roots.append(cand)
    return sorted(roots)


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Monic gcd over Q, returned with integer primitive coefficients scaled monic-free.

    The result is primitive with positive leading coefficient.
    """
    fa = [Fraction(c) for c in a.coeffs]
    fb = [Fraction(c) for c in b.coeffs]

    def deg(v):
        return len(v) - 1

    def strip(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    fa, fb = strip(fa), strip(fb)
    while fb:
        # fa mod fb over Q
        while fa and deg(fa) >= deg(fb):
            f = fa[-1] / fb[-1]
            shift = deg(fa) - deg(fb)
            for i, c in enumerate(fb):
                fa[i + shift] -= f * c
            strip(fa)
        fa, fb = fb, fa
    if not fa:
        return IntPoly(())
    lcm_den = 1
    for c in fa:
        lcm_den = lcm_den * c.denominator // math.gcd(lcm_den, c.denominator)
    ints = [int(c * lcm_den) for c in fa]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return IntPoly(ints)


# ---------------------------------------------------------------------------
# Irreducibility over F_p (Rabin's test) and the reducibility verdict.
# ---------------------------------------------------------------------------


def _gf_strip(v: list[int]) -> list[int]:
    while v and v[-1] == 0:
        v.pop()
    return v


def _gf_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    # reduce mod monic f
    df = len(f) - 1
    for k in range(len(out) - 1, df - 1, -1):
        c = out[k]
        if c:
            out[k] = 0
            for j in range(df):
                out[k - df + j] = (out[k - df + j] - c * f[j]) % p
    return _gf_strip(out[:df])


def _gf_powmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    b = list(base)
    while e:
        if e & 1:
            result = _gf_mulmod(result, b, f, p)
        b = _gf_mulmod(b, b, f, p)
        e >>= 1
    return result


def _gf_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _gf_strip(list(a)), _gf_strip(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        while len(a) >= len(b):
            c = (a[-1] * inv) % p
            shift = len(a) - len(b)
            for i, y in enumerate(b):
                a[i + shift] = (a[i + shift] - c * y) % p
            _gf_strip(a)
            if not a:
                break
        a, b = b, a
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def is_irreducible_mod(poly: IntPoly, p: int) -> bool:
    """Rabin's deterministic irreducibility test for poly mod p.

    Sound only when the reduction keeps the degree, so the leading
    coefficient must not vanish mod p (monic input guarantees this).
    """
    if not poly.is_monic:
        raise ValueError("input must be monic")
    n = poly.degree
    if n < 1:
        return False
    if n == 1:
        return True
    f = [c % p for c in poly.coeffs]
    x = [0, 1]

    def minus_x(v: list[int]) -> list[int]:
        out = list(v) + [0] * (2 - len(v))
        out[1] = (out[1] - 1) % p
        return _gf_strip(out)

    # x^(p^n) == x mod f, and for each prime r | n the power x^(p^(n/r))
    # must be coprime to f
    if minus_x(_gf_powmod(x, p ** n, f, p)):
        return False
    for r in _prime_factors(n):
        g = _gf_gcd(minus_x(_gf_powmod(x, p ** (n // r), f, p)), f, p)
        if len(g) - 1 != 0:
            return False
    return True


def reducibility_verdict(p: IntPoly, primes: tuple[int, ...] = DEFAULT_RABIN_PRIMES) -> tuple[str, str]:
    """Classify a monic integer polynomial with sound certificates only.

    Returns (verdict, certificate) with verdict one of "irreducible",
    "reducible", "undetermined".  Certificates never guess: a polynomial
    is called reducible only with an exhibited witness (integer root,
    repeated factor, or a cyclotomic factorization with at least two
    factors) and irreducible only with a proof (degree <= 3 and no
    integer root, a single cyclotomic factor, or irreducibility mod a
    prime).  Everything else lands in the explicit undetermined bucket.
    """
    if not p.is_monic:
        raise ValueError("input must be monic")
    deg = p.degree
    if deg <= 1:
        return "irreducible", "degree <= 1"
    roots = integer_roots(p)
    if roots:
        return "reducible", f"integer root {roots[0]}"
    cyc = cyclotomic_factor(p)
    if cyc is not None:
        nfactors = sum(e for _, e in cyc)
        if nfactors == 1:
            d = cyc[0][0]
            return "irreducible", f"equals cyclotomic index {d}"
        return "reducible", "product of {} cyclotomic factors".format(nfactors)
    if deg <= 3:
        # monic cubic/quadratic with no integer root has no rational root
        return "irreducible", "degree <= 3 with no integer root"
    g = poly_gcd(p, p.derivative())
    if g.degree >= 1:
        return "reducible", "repeated factor (gcd with derivative)"
    for q in primes:
        if is_irreducible_mod(p, q):
            return "irreducible", f"irreducible mod {q}"
    return "undetermined", "no certificate found"
