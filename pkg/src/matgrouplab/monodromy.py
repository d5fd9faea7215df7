"""Integral hypergeometric monodromy: construction and classification.

Exponent tuples (alpha, beta) with entries in [0,1) define two monic
integer polynomials when (and only when) each tuple, grouped by reduced
denominator d, covers the full primitive residue class {k/d : gcd(k,d)=1}
with uniform multiplicity; the polynomial is the matching product of
cyclotomics.  The monodromy matrices are A = companion(beta-polynomial),
B = companion(alpha-polynomial), C = A^-1 B; C - I has rank exactly one
(C is a pseudo-reflection), which is asserted exactly.

`classify_closure` computes the joint invariant bilinear forms of {A, B}
and reads the classification off the unique invariant form: antisymmetric
nondegenerate gives the symplectic case, symmetric definite the finite
case, and symmetric signature (n-1, 1) the hyperbolic orthogonal case.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .forms import fixed_form_space, symmetric_signature
from .matrices import IntMatrix, frac_rank
from .polynomials import IntPoly, cyclotomic


class NotIntegralError(ValueError):
    """The exponents do not define matrices over the integers."""


class MonodromyError(RuntimeError):
    """Internal structure violated (companion/pseudo-reflection checks)."""


def _normalize_exponent(x) -> Fraction:
    f = Fraction(x)
    return f - (f.numerator // f.denominator)


@dataclass(frozen=True)
class HGParams:
    """Hypergeometric exponent data, reduced into [0,1) and sorted."""

    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]

    @classmethod
    def of(cls, alpha: Sequence, beta: Sequence) -> "HGParams":
        a = tuple(sorted(_normalize_exponent(x) for x in alpha))
        b = tuple(sorted(_normalize_exponent(x) for x in beta))
        if not a or len(a) != len(b):
            raise ValueError("alpha and beta must be nonempty and of equal length")
        if set(a) & set(b):
            clash = sorted(set(a) & set(b))[0]
            raise ValueError(f"alpha and beta must be disjoint; both contain {clash}")
        return cls(alpha=a, beta=b)

    @property
    def n(self) -> int:
        return len(self.alpha)

    def label(self) -> str:
        fa = ",".join(str(x) for x in self.alpha)
        fb = ",".join(str(x) for x in self.beta)
        return f"alpha=({fa}) beta=({fb})"


def exponent_cyclotomic_profile(exps: Sequence[Fraction]) -> list[tuple[int, int]]:
    """Group exponents into complete primitive residue classes.

    Returns sorted [(d, multiplicity)] such that the exponents are exactly
    the union of {k/d : gcd(k, d) = 1} repeated multiplicity times; raises
    NotIntegralError when the grouping fails.
    """
    counts = Counter(_normalize_exponent(x) for x in exps)
    profile: list[tuple[int, int]] = []
    while counts:
        x = next(iter(counts))
        d = x.denominator
        if d == 1:
            klass = [Fraction(0)]
        else:
            klass = [Fraction(k, d) for k in range(1, d + 1) if gcd(k, d) == 1]
        mult = counts[x]
        for f in klass:
            if counts.get(f, 0) != mult:
                raise NotIntegralError(
                    f"exponents are not integral: class of denominator {d} is "
                    f"incomplete or has nonuniform multiplicity"
                )
            del counts[f]
        profile.append((d, mult))
    return sorted(profile)


def exponent_poly(exps: Sequence[Fraction]) -> IntPoly:
    """The monic integer polynomial with roots e^(2 pi i x) for x in exps."""
    poly = IntPoly((1,))
    for d, mult in exponent_cyclotomic_profile(exps):
        poly = poly * cyclotomic(d) ** mult
    return poly


def companion(p: IntPoly) -> IntMatrix:
    """Companion matrix: ones on the subdiagonal, last column -coefficients."""
    if not p.is_monic or p.degree < 1:
        raise ValueError("need a monic polynomial of degree >= 1")
    n = p.degree
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        rows[i][n - 1] = -p.coeffs[i]
    return IntMatrix(rows)


@dataclass(frozen=True)
class MonodromyTriple:
    """A = companion(beta-poly), B = companion(alpha-poly), C = A^-1 B."""

    params: HGParams
    A: IntMatrix
    B: IntMatrix
    C: IntMatrix

    @property
    def n(self) -> int:
        return self.A.n


def build_monodromy(params: HGParams) -> MonodromyTriple:
    """Integral monodromy matrices for the exponent data.

    Raises NotIntegralError when either exponent tuple fails the complete
    residue class test, and MonodromyError if C - I does not have rank
    exactly one (it always should: B - A is supported on one column).
    """
    poly_b = exponent_poly(params.beta)
    poly_a = exponent_poly(params.alpha)
    A = companion(poly_b)
    B = companion(poly_a)
    C = A.inverse() * B
    n = A.n
    diff = [[Fraction(C.rows[i][j] - (1 if i == j else 0)) for j in range(n)] for i in range(n)]
    if frac_rank(diff) != 1:
        raise MonodromyError("C - I must be a rank-one pseudo-reflection")
    return MonodromyTriple(params=params, A=A, B=B, C=C)


@dataclass(frozen=True)
class ClosureClass:
    """Classification read off the unique invariant bilinear form."""

    kind: str  # "symplectic" | "finite" | "orthogonal" | "degenerate" | "undetermined"
    form: tuple[tuple[int, ...], ...] | None
    symmetric: bool | None
    signature: tuple[int, int, int] | None
    hyperbolic: bool

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "form": [list(r) for r in self.form] if self.form else None,
            "symmetric": self.symmetric,
            "signature": list(self.signature) if self.signature else None,
            "hyperbolic": self.hyperbolic,
        }


def classify_closure(source: HGParams | MonodromyTriple) -> ClosureClass:
    """Classify via the joint fixed bilinear form of {A, B}.

    Requires the fixed space to be exactly one-dimensional (anything else
    is reported as "undetermined" rather than guessed).  The line is
    stable under transposition, so its generator is symmetric or
    antisymmetric.
    """
    triple = source if isinstance(source, MonodromyTriple) else build_monodromy(source)
    n = triple.n
    space = fixed_form_space([triple.A, triple.B])
    if space.dimension != 1:
        return ClosureClass(
            kind="undetermined", form=None, symmetric=None,
            signature=None, hyperbolic=False,
        )
    form = space.basis[0]
    if space.antisymmetric_part:
        nondegenerate = frac_rank([[Fraction(x) for x in row] for row in form]) == n
        kind = "symplectic" if nondegenerate else "degenerate"
        return ClosureClass(
            kind=kind, form=form, symmetric=False, signature=None, hyperbolic=False,
        )
    pos, neg, zero = symmetric_signature(form)
    if zero > 0:
        kind = "degenerate"
        hyperbolic = False
    elif pos == 0 or neg == 0:
        kind = "finite"
        hyperbolic = False
    else:
        kind = "orthogonal"
        hyperbolic = {pos, neg} == {n - 1, 1}
    return ClosureClass(
        kind=kind, form=form, symmetric=True,
        signature=(pos, neg, zero), hyperbolic=hyperbolic,
    )


# ---------------------------------------------------------------------------
# Family catalog and atlas
# ---------------------------------------------------------------------------

FAMILY_KEYS = ("3.3", "3.4", "3.6", "3.7")
_ALIASES = {"dwork": "3.4"}


def family_catalog(name: str, n: int) -> HGParams:
    """Exponent data for the four catalog families.

    "3.4" (alias "dwork"), n even >= 4:
        alpha = (0, ..., 0), beta = (k/(n+1), k = 1..n).
    "3.3", n even >= 4:
        alpha = (1/2 + k/(n+1), k = 1..n),
        beta = (0, then 1/2 + k/n, k = 1..n-1), entries reduced mod 1.
    "3.6", n odd >= 3:
        alpha = (k/(n+1), k = 0..n, skipping k = (n+1)/2),
        beta = (1/2, then k/n, k = 1..n-1).
    "3.7", n odd >= 3:
        alpha = (1/2, then (2k-1)/(2n-2), k = 1..n-1),
        beta = (0, 0, 0, then k/(n-2), k = 1..n-3).
    """
    key = _ALIASES.get(name, name)
    if key not in FAMILY_KEYS:
        raise ValueError(f"unknown family {name!r}; choose from {FAMILY_KEYS}")
    if key in ("3.3", "3.4"):
        if n < 4 or n % 2:
            raise ValueError(f"family {key} needs even n >= 4, got {n}")
    else:
        if n < 3 or n % 2 == 0:
            raise ValueError(f"family {key} needs odd n >= 3, got {n}")
    if key == "3.4":
        alpha = [Fraction(0)] * n
        beta = [Fraction(k, n + 1) for k in range(1, n + 1)]
    elif key == "3.3":
        alpha = [Fraction(1, 2) + Fraction(k, n + 1) for k in range(1, n + 1)]
        beta = [Fraction(0)] + [Fraction(1, 2) + Fraction(k, n) for k in range(1, n)]
    elif key == "3.6":
        alpha = [Fraction(k, n + 1) for k in range(n + 1) if 2 * k != n + 1]
        beta = [Fraction(1, 2)] + [Fraction(k, n) for k in range(1, n)]
    else:  # "3.7"
        alpha = [Fraction(1, 2)] + [Fraction(2 * k - 1, 2 * n - 2) for k in range(1, n)]
        beta = [Fraction(0)] * 3 + [Fraction(k, n - 2) for k in range(1, n - 2)]
    return HGParams.of(alpha, beta)


def known_status(name: str, n: int) -> str:
    """Curated literature status for the catalog families."""
    key = _ALIASES.get(name, name)
    if key == "3.3":
        return "arithmetic"
    if key == "3.4":
        return "thin" if n == 4 else "open (conjectured thin)"
    if key in ("3.6", "3.7"):
        return "arithmetic" if n == 3 else "thin"
    raise ValueError(f"unknown family {name!r}")


# Degree-4 Calabi-Yau type exponent list: alpha = (0,0,0,0), beta as below.
# Statuses are curated: three cases are known arithmetic, the quintic case
# (1/5,2/5,3/5,4/5) is known thin, and the remaining ten are known to split
# 7 thin / 4 open without an individual attribution in the source used.
_CY_STATUS_ARITHMETIC = "arithmetic"
_CY_STATUS_THIN = "thin"
_CY_STATUS_UNRESOLVED = "thin-or-open (7 thin / 4 open, not identified individually)"

CURATED_CY14: tuple[tuple[tuple[Fraction, ...], str], ...] = tuple(
    (tuple(Fraction(a, b) for a, b in entry), status)
    for entry, status in [
        ([(1, 2), (1, 2), (1, 2), (1, 2)], _CY_STATUS_UNRESOLVED),
        ([(1, 3), (1, 2), (1, 2), (2, 3)], _CY_STATUS_UNRESOLVED),
        ([(1, 3), (1, 3), (2, 3), (2, 3)], _CY_STATUS_UNRESOLVED),
        ([(1, 4), (1, 2), (1, 2), (3, 4)], _CY_STATUS_UNRESOLVED),
        ([(1, 4), (1, 3), (2, 3), (3, 4)], _CY_STATUS_UNRESOLVED),
        ([(1, 4), (1, 4), (3, 4), (3, 4)], _CY_STATUS_UNRESOLVED),
        ([(1, 5), (2, 5), (3, 5), (4, 5)], _CY_STATUS_THIN),
        ([(1, 6), (1, 2), (1, 2), (5, 6)], _CY_STATUS_UNRESOLVED),
        ([(1, 6), (1, 3), (2, 3), (5, 6)], _CY_STATUS_UNRESOLVED),
        ([(1, 6), (1, 4), (3, 4), (5, 6)], _CY_STATUS_ARITHMETIC),
        ([(1, 6), (1, 6), (5, 6), (5, 6)], _CY_STATUS_ARITHMETIC),
        ([(1, 8), (3, 8), (5, 8), (7, 8)], _CY_STATUS_UNRESOLVED),
        ([(1, 10), (3, 10), (7, 10), (9, 10)], _CY_STATUS_ARITHMETIC),
        ([(1, 12), (5, 12), (7, 12), (11, 12)], _CY_STATUS_UNRESOLVED),
    ]
)


def _atlas_record(params: HGParams, source: str, status: str) -> dict:
    triple = build_monodromy(params)
    klass = classify_closure(triple)
    return {
        "source": source,
        "n": params.n,
        "alpha": [str(x) for x in params.alpha],
        "beta": [str(x) for x in params.beta],
        "A": triple.A.to_lists(),
        "B": triple.B.to_lists(),
        "C": triple.C.to_lists(),
        "closure": klass.kind,
        "symmetric_form": klass.symmetric,
        "signature": list(klass.signature) if klass.signature else None,
        "hyperbolic": klass.hyperbolic,
        "known_status": status,
    }


def monodromy_atlas(
    families: Sequence[str] = FAMILY_KEYS,
    n_max: int = 9,
    include_curated: bool = True,
) -> list[dict]:
    """Atlas of catalog families up to n_max plus the curated degree-4 list."""
    records = []
    for name in families:
        key = _ALIASES.get(name, name)
        start, step = ((4, 2) if key in ("3.3", "3.4") else (3, 2))
        for n in range(start, n_max + 1, step):
            params = family_catalog(key, n)
            records.append(
                _atlas_record(params, source=f"family-{key}", status=known_status(key, n))
            )
    if include_curated:
        for beta, status in CURATED_CY14:
            params = HGParams.of([Fraction(0)] * 4, beta)
            records.append(_atlas_record(params, source="curated-degree4", status=status))
    return records
