"""Words, balls, relations, and walk statistics for integer matrix groups.

A `GenSet` is a symmetrized generating set: inverses are appended when
missing and exact duplicates are dropped.  Words are tuples of generator
indices; evaluation is exact integer matrix multiplication, so collisions
certify genuine group identities.

`relation_search` finds all relators up to a length bound by breadth-first
search over freely reduced words with matrix-collision pruning: any relator
of length <= L forces two words of length <= ceil(L/2) to land on the same
matrix, so searching the half ball suffices and an empty result certifies
freeness up to the bound.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .matrices import IntMatrix
from .polynomials import IntPoly, reducibility_verdict

DEFAULT_CAP = 10_000_000


class CapExceeded(RuntimeError):
    """An enumeration outgrew its configured element cap."""

    def __init__(self, message: str, cap: int):
        super().__init__(message)
        self.cap = cap


@dataclass(frozen=True)
class GenSet:
    """Symmetrized generating set of invertible integer matrices."""

    gens: tuple[IntMatrix, ...]
    labels: tuple[str, ...]
    inverse_of: tuple[int, ...]  # index of each generator's inverse

    @classmethod
    def from_matrices(
        cls,
        mats: Sequence[IntMatrix],
        labels: Sequence[str] | None = None,
    ) -> "GenSet":
        if not mats:
            raise ValueError("need at least one generator")
        n = mats[0].n
        if any(m.n != n for m in mats):
            raise ValueError("generators must share a dimension")
        if labels is None:
            labels = [chr(ord("a") + i) if len(mats) <= 26 else f"g{i}" for i in range(len(mats))]
        if len(labels) != len(mats):
            raise ValueError("one label per matrix")
        gens: list[IntMatrix] = []
        names: list[str] = []
        seen: dict[IntMatrix, int] = {}
        for m, lab in zip(mats, labels):
            if m.det() not in (1, -1):
                raise ValueError(f"generator {lab} is not invertible over the integers")
            if m not in seen:
                seen[m] = len(gens)
                gens.append(m)
                names.append(lab)
        for i in range(len(gens)):  # append missing inverses
            inv = gens[i].inverse()
            if inv not in seen:
                seen[inv] = len(gens)
                gens.append(inv)
                names.append(names[i] + "^-1")
        inverse_of = tuple(seen[g.inverse()] for g in gens)
        return cls(gens=tuple(gens), labels=tuple(names), inverse_of=inverse_of)

    @property
    def dimension(self) -> int:
        return self.gens[0].n

    @property
    def degree(self) -> int:
        return len(self.gens)

    def identity(self) -> IntMatrix:
        return IntMatrix.identity(self.dimension)

    def word_matrix(self, letters: Iterable[int]) -> IntMatrix:
        m = self.identity()
        for i in letters:
            m = m * self.gens[i]
        return m

    def word_str(self, letters: Iterable[int]) -> str:
        parts = [self.labels[i] for i in letters]
        return ".".join(parts) if parts else "1"

    def invert_word(self, letters: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.inverse_of[i] for i in reversed(letters))

    def free_reduce(self, letters: Sequence[int]) -> tuple[int, ...]:
        """Cancel adjacent formal inverse pairs (distinct letters only).

        A letter that is its own inverse (a matrix involution) is kept on
        repetition so that s.s survives as a genuine relation candidate.
        """
        out: list[int] = []
        for i in letters:
            if out and out[-1] == self.inverse_of[i] and out[-1] != i:
                out.pop()
            else:
                out.append(i)
        return tuple(out)

    def cyclic_reduce(self, letters: Sequence[int]) -> tuple[int, ...]:
        w = list(self.free_reduce(letters))
        while len(w) >= 2 and w[0] == self.inverse_of[w[-1]] and w[0] != w[-1]:
            w = w[1:-1]
        return tuple(w)


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]
    matrix: IntMatrix
    text: str


@dataclass(frozen=True)
class BallReport:
    """Ball in the word metric, optionally filtered by a norm bound."""

    radius: int
    norm_bound: int | None
    elements: tuple[IntMatrix, ...]  # sorted by (depth, entries)
    counts: tuple[int, ...]  # cumulative count at radius 0..radius
    stabilized: bool  # no new elements before the radius ran out

    @property
    def size(self) -> int:
        return len(self.elements)


def ball_enumerate(
    S: GenSet,
    radius: int,
    norm_bound: int | None = None,
    cap: int = DEFAULT_CAP,
) -> BallReport:
    """Enumerate the ball of the given word-metric radius.

    Counts are cumulative and, when a norm bound is given, count only the
    elements whose max-norm (of the element and its inverse) stays within
    the bound; the bound does not prune the search, it filters the report,
    so an element reachable only through large intermediate matrices is
    still found.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    ident = S.identity()
    depth: dict[IntMatrix, int] = {ident: 0}
    inv_of: dict[IntMatrix, IntMatrix] = {ident: ident}
    frontier = [ident]
    stabilized = False
    for r in range(1, radius + 1):
        new_frontier: list[IntMatrix] = []
        for m in frontier:
            minv = inv_of[m]
            for i, g in enumerate(S.gens):
                nm = m * g
                if nm in depth:
                    continue
                depth[nm] = r
                inv_of[nm] = S.gens[S.inverse_of[i]] * minv
                new_frontier.append(nm)
                if len(depth) > cap:
                    raise CapExceeded(
                        f"ball exceeded cap of {cap} elements at radius {r}", cap
                    )
        frontier = new_frontier
        if not frontier:
            stabilized = True
            break

    def keep(m: IntMatrix) -> bool:
        if norm_bound is None:
            return True
        return max(m.max_norm(), inv_of[m].max_norm()) <= norm_bound

    kept = [(depth[m], m.rows, m) for m in depth if keep(m)]
    kept.sort(key=lambda t: (t[0], t[1]))
    counts = []
    for r in range(radius + 1):
        counts.append(sum(1 for d, _, _ in kept if d <= r))
    return BallReport(
        radius=radius,
        norm_bound=norm_bound,
        elements=tuple(m for _, _, m in kept),
        counts=tuple(counts),
        stabilized=stabilized,
    )


def random_walk_word(S: GenSet, length: int, seed: int) -> Word:
    """Uniform word of the given length over the symmetrized alphabet."""
    if length < 0:
        raise ValueError("length must be >= 0")
    rng = random.Random(seed)
    letters = tuple(rng.randrange(S.degree) for _ in range(length))
    return Word(letters=letters, matrix=S.word_matrix(letters), text=S.word_str(letters))


@dataclass(frozen=True)
class Relation:
    letters: tuple[int, ...]
    text: str

    @property
    def length(self) -> int:
        return len(self.letters)


def _canonical_relator(S: GenSet, letters: Sequence[int]) -> tuple[int, ...]:
    """Cyclic reduction, then lexicographic minimum over rotations and inversion."""
    w = S.cyclic_reduce(letters)
    if not w:
        return ()
    candidates = []
    for word in (w, S.invert_word(w)):
        for k in range(len(word)):
            candidates.append(word[k:] + word[:k])
    return min(candidates)


def relation_search(S: GenSet, max_len: int, cap: int = DEFAULT_CAP) -> list[Relation]:
    """All relators of length <= max_len, canonicalized and deduplicated.

    Empty output certifies that no relation of length <= max_len holds,
    i.e. the ball of radius ceil(max_len/2) injects into the group freely.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    depth_bound = (max_len + 1) // 2
    ident = S.identity()
    seen: dict[IntMatrix, tuple[int, ...]] = {ident: ()}
    frontier: list[tuple[tuple[int, ...], IntMatrix]] = [((), ident)]
    found: dict[tuple[int, ...], Relation] = {}
    for _ in range(depth_bound):
        new_frontier: list[tuple[tuple[int, ...], IntMatrix]] = []
        for w, m in frontier:
            for i, g in enumerate(S.gens):
                if w and i == S.inverse_of[w[-1]] and i != w[-1]:
                    continue  # freely reduced words only
                w2 = w + (i,)
                m2 = m * g
                other = seen.get(m2)
                if other is not None:
                    relator = _canonical_relator(S, S.invert_word(other) + w2)
                    if relator and len(relator) <= max_len and relator not in found:
                        assert S.word_matrix(relator).is_identity
                        found[relator] = Relation(letters=relator, text=S.word_str(relator))
                    continue
                seen[m2] = w2
                new_frontier.append((w2, m2))
                if len(seen) > cap:
                    raise CapExceeded(
                        f"relation search exceeded cap of {cap} elements", cap
                    )
        frontier = new_frontier
    return sorted(found.values(), key=lambda rel: (rel.length, rel.letters))


@dataclass(frozen=True)
class ReducibilityRow:
    length: int
    trials: int
    n_irreducible: int
    n_reducible: int
    n_undetermined: int

    @property
    def irreducible_fraction(self) -> float:
        return self.n_irreducible / self.trials

    @property
    def reducible_fraction(self) -> float:
        return self.n_reducible / self.trials

    @property
    def undetermined_fraction(self) -> float:
        return self.n_undetermined / self.trials


@dataclass(frozen=True)
class ReducibilityReport:
    seed: int
    rows: tuple[ReducibilityRow, ...]
    certificates: tuple[tuple[str, int], ...] = field(default=())

    @property
    def total_trials(self) -> int:
        return sum(r.trials for r in self.rows)


def walk_charpoly_stats(
    S: GenSet,
    lengths: int | Sequence[int],
    trials: int,
    seed: int,
) -> ReducibilityReport:
    """Characteristic-polynomial reducibility statistics of random words.

    Every polynomial is classified with sound certificates only; the
    undetermined bucket is reported explicitly, never folded into either
    side.  The RNG stream is consumed sequentially over (length, trial)
    so a fixed seed pins the whole report.
    """
    if isinstance(lengths, int):
        lengths = [lengths]
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    rows = []
    cert_counts: dict[str, int] = {}
    for length in lengths:
        tally = {"irreducible": 0, "reducible": 0, "undetermined": 0}
        for _ in range(trials):
            letters = tuple(rng.randrange(S.degree) for _ in range(length))
            p: IntPoly = S.word_matrix(letters).charpoly()
            verdict, certificate = reducibility_verdict(p)
            tally[verdict] += 1
            key = f"{verdict}: {certificate.split(' ')[0]}" if verdict != "undetermined" else "undetermined"
            cert_counts[key] = cert_counts.get(key, 0) + 1
        rows.append(
            ReducibilityRow(
                length=length,
                trials=trials,
                n_irreducible=tally["irreducible"],
                n_reducible=tally["reducible"],
                n_undetermined=tally["undetermined"],
            )
        )
    certs = tuple(sorted(cert_counts.items()))
    return ReducibilityReport(seed=seed, rows=tuple(rows), certificates=certs)
