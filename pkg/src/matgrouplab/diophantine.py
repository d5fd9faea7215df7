"""Diophantine experiments: bounded continued fractions and curvature orbits.

Two independent computations live here.

Zaremba scan: for each denominator q, decide whether some numerator b
coprime to q has all continued fraction quotients bounded by A.  The
expansion b/q = [0; a_1, ..., a_k] is taken canonically (last quotient
at least 2); since [.., a_k] = [.., a_k - 1, 1], the bounded test
accepts when every quotient except the last is <= A and the last is
<= A + 1.  The scan is vectorized over numerators; a forward generator
over continuant states provides an independent oracle.

Apollonian orbits: starting from an integer Descartes quadruple, apply
the four swap operators and collect every curvature up to a bound.
Children are enqueued only while the newly created curvature is within
the bound, which terminates and still reaches every curvature <= bound:
each circle is created from a quadruple whose other three curvatures
are at most its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "cf_quotients",
    "is_bounded_fraction",
    "zaremba_witness",
    "zaremba_scan",
    "zaremba_forward_denominators",
    "ZarembaRow",
    "ZarembaReport",
    "descartes_value",
    "is_descartes_quadruple",
    "swap_curvature",
    "apollonian_orbit",
    "CurvatureReport",
]


# ---------------------------------------------------------------------------
# Continued fractions.


def cf_quotients(b: int, q: int) -> list[int]:
    """Canonical continued fraction quotients of b/q with 0 < b < q.

    Returns [a_1, ..., a_k] with b/q = 1/(a_1 + 1/(a_2 + ...)) and
    a_k >= 2 unless the expansion is the single quotient [1] (b/q = 1
    never happens here since b < q, so a_k >= 2 always holds except for
    the empty expansion, which cannot occur for 0 < b < q).
    """
    if not 0 < b < q:
        raise ValueError("cf_quotients requires 0 < b < q")
    if math.gcd(b, q) != 1:
        raise ValueError("cf_quotients requires gcd(b, q) = 1")
    quotients: list[int] = []
    num, den = q, b
    while den:
        a, num, den = num // den, den, num % den
        quotients.append(a)
    return quotients


def is_bounded_fraction(b: int, q: int, bound: int) -> bool:
    """True when b/q has quotients <= bound in some expansion.

    Tests the canonical expansion, allowing the final quotient to reach
    bound + 1 because [.., a_k] = [.., a_k - 1, 1] trades the excess
    into a trailing quotient of 1.
    """
    qs = cf_quotients(b, q)
    if any(a > bound for a in qs[:-1]):
        return False
    return qs[-1] <= bound + 1


def zaremba_witness(q: int, bound: int) -> int | None:
    """Smallest numerator witnessing q, or None when q has none."""
    if q == 1:
        return 0
    for b in range(1, q):
        if math.gcd(b, q) == 1 and is_bounded_fraction(b, q, bound):
            return b
    return None


def _bounded_numerators(q: int, bound: int) -> np.ndarray:
    """Boolean mask over b = 0..q-1 marking bounded coprime numerators.

    Runs the Euclid loop on every numerator at once.  A numerator stays
    alive while its quotients so far are <= bound; when its remainder
    hits zero it is accepted if the final quotient was <= bound + 1 and
    the previous divisor was 1 (which is exactly gcd(b, q) = 1).
    """
    num = np.full(q, q, dtype=np.int64)
    den = np.arange(q, dtype=np.int64)
    accepted = np.zeros(q, dtype=bool)
    alive = den > 0
    while alive.any():
        n_a = num[alive]
        d_a = den[alive]
        quot = n_a // d_a
        rem = n_a - quot * d_a
        done = rem == 0
        # Final quotient: allow bound + 1, and require the divisor to be
        # 1 so the fraction was in lowest terms.
        ok_final = done & (quot <= bound + 1) & (d_a == 1)
        idx = np.flatnonzero(alive)
        accepted[idx[ok_final]] = True
        keep = (~done) & (quot <= bound)
        num[idx] = d_a
        den[idx] = rem
        alive[idx] = keep
    return accepted


def _known_exceptions(bound: int, limit: int) -> list[int]:
    """Brute-force denominators <= limit with no bounded numerator."""
    out = []
    for q in range(2, limit + 1):
        if not _bounded_numerators(q, bound).any():
            out.append(q)
    return out


@dataclass(frozen=True)
class ZarembaRow:
    q: int
    achieved: bool
    witness: int | None

    def to_dict(self) -> dict:
        return {"q": self.q, "achieved": self.achieved, "witness": self.witness}


@dataclass(frozen=True)
class ZarembaReport:
    bound: int
    q_max: int
    achieved_count: int
    density: float
    exceptions: list[int]
    rows: list[ZarembaRow] = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "q_max": self.q_max,
            "achieved_count": self.achieved_count,
            "density": self.density,
            "exceptions": list(self.exceptions),
        }


def zaremba_scan(q_max: int, bound: int, *, keep_witnesses: bool = True) -> ZarembaReport:
    """Scan denominators 1..q_max for numerators with quotients <= bound.

    q = 1 counts as achieved by convention (the empty expansion).  The
    report lists every missed denominator as an exception and the
    achieved density over 1..q_max.
    """
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    if bound < 1:
        raise ValueError("bound must be at least 1")
    rows: list[ZarembaRow] = [ZarembaRow(1, True, 0)]
    exceptions: list[int] = []
    achieved = 1
    for q in range(2, q_max + 1):
        mask = _bounded_numerators(q, bound)
        hit = bool(mask.any())
        witness: int | None = None
        if hit:
            achieved += 1
            if keep_witnesses:
                witness = int(np.flatnonzero(mask)[0])
        else:
            exceptions.append(q)
        rows.append(ZarembaRow(q, hit, witness))
    return ZarembaReport(
        bound=bound,
        q_max=q_max,
        achieved_count=achieved,
        density=achieved / q_max,
        exceptions=exceptions,
        rows=rows,
    )


def zaremba_forward_denominators(q_max: int, bound: int) -> set[int]:
    """Denominators <= q_max reachable with quotients in [1, bound].

    Independent oracle for the scan: grow continuant pairs
    (q_{k-1}, q_k) forward with q_k = a_k q_{k-1} + q_{k-2}, quotients
    in 1..bound, deduplicating states level by level.  A denominator is
    reachable exactly when it appears as the second member of a state
    whose final quotient was >= 2, or via the trailing-1 variant, which
    the pair growth covers automatically because both expansions of a
    fraction occur as quotient strings.

    Every generated state has gcd(q_{k-1}, q_k) = 1 and the pair
    determines the quotient string, so per-level dedup is sound.
    """
    if q_max < 1:
        return set()
    reachable = {1}
    # States (prev, cur) after at least one quotient; start from the
    # empty expansion state (prev=0, cur=1) -> first quotient a gives
    # (1, a).
    states = np.array([(0, 1)], dtype=np.int64)
    while states.size:
        prev = states[:, 0]
        cur = states[:, 1]
        children = []
        for a in range(1, bound + 1):
            nxt = a * cur + prev
            keep = nxt <= q_max
            if keep.any():
                children.append(np.stack([cur[keep], nxt[keep]], axis=1))
        if not children:
            break
        states = np.concatenate(children, axis=0)
        states = np.unique(states, axis=0)
        reachable.update(int(v) for v in states[:, 1])
    return reachable


# ---------------------------------------------------------------------------
# Apollonian curvature orbits.


def descartes_value(quad: tuple[int, int, int, int]) -> int:
    """2(a^2+b^2+c^2+d^2) - (a+b+c+d)^2; zero exactly on Descartes quadruples."""
    a, b, c, d = quad
    return 2 * (a * a + b * b + c * c + d * d) - (a + b + c + d) ** 2


def is_descartes_quadruple(quad: tuple[int, int, int, int]) -> bool:
    return descartes_value(quad) == 0


def swap_curvature(quad: tuple[int, int, int, int], i: int) -> tuple[int, int, int, int]:
    """Replace entry i by its Descartes conjugate 2(sum of others) - quad[i]."""
    s = sum(quad)
    new = 2 * (s - quad[i]) - quad[i]
    out = list(quad)
    out[i] = new
    return tuple(out)  # type: ignore[return-value]


@dataclass(frozen=True)
class CurvatureReport:
    root: tuple[int, int, int, int]
    bound: int
    curvatures: list[int]
    counts: dict[int, int] = field(repr=False)
    quadruples: tuple[tuple[int, int, int, int], ...] = field(repr=False)
    residues_mod_24: dict[int, int]
    quadruples_visited: int
    density: float

    def to_dict(self) -> dict:
        return {
            "root": list(self.root),
            "bound": self.bound,
            "curvature_count": len(self.curvatures),
            "quadruples_visited": self.quadruples_visited,
            "density": self.density,
            "residues_mod_24": {str(k): v for k, v in sorted(self.residues_mod_24.items())},
        }


def apollonian_orbit(
    root: tuple[int, int, int, int],
    bound: int,
    *,
    order: str = "fifo",
) -> CurvatureReport:
    """Collect all curvatures <= bound in the swap orbit of a root quadruple.

    Quadruples are deduplicated as sorted tuples.  A swap child is
    explored only when the new curvature is <= bound; this terminates
    and misses nothing below the bound, since every circle is created
    from a quadruple whose other three curvatures are at most its own.
    Counts are containment counts (number of visited quadruples that
    contain each curvature), so fifo and lifo orders agree exactly.
    """
    if len(root) != 4:
        raise ValueError("root must be a quadruple")
    root = tuple(int(x) for x in root)  # type: ignore[assignment]
    if not is_descartes_quadruple(root):
        raise ValueError("root does not satisfy the Descartes identity")
    if order not in ("fifo", "lifo"):
        raise ValueError("order must be 'fifo' or 'lifo'")
    start = tuple(sorted(root))
    frontier: list[tuple[int, int, int, int]] = [start]
    seen = {start}
    counts: dict[int, int] = {}
    visited = 0
    while frontier:
        quad = frontier.pop(0) if order == "fifo" else frontier.pop()
        visited += 1
        for c in quad:
            counts[c] = counts.get(c, 0) + 1
        for i in range(4):
            child = swap_curvature(quad, i)
            if child[i] > bound:
                continue
            key = tuple(sorted(child))
            if key not in seen:
                seen.add(key)
                frontier.append(key)
    curvatures = sorted(counts)
    positive = [c for c in curvatures if 0 < c <= bound]
    residues: dict[int, int] = {}
    for c in positive:
        residues[c % 24] = residues.get(c % 24, 0) + 1
    density = len(positive) / bound if bound > 0 else 0.0
    return CurvatureReport(
        root=root,
        bound=bound,
        curvatures=curvatures,
        counts=counts,
        quadruples=tuple(sorted(seen)),
        residues_mod_24=residues,
        quadruples_visited=visited,
        density=density,
    )
