"""Congruence quotients and Cayley-graph spectral gaps.

`closure_mod` reduces a generating set mod q and computes the subgroup it
generates inside SL_n(Z/q) by breadth-first closure, then compares the
exact BFS order against the closed-form |SL_n(Z/q)| to decide surjectivity
("onto").  `cayley_spectrum` builds the degree-normalized adjacency of the
Cayley graph (vertices = closure elements, edges x -> s x) and computes the
top of the spectrum and both spectral gaps with the hand-written Lanczos
solver; for small graphs a dense symmetric eigensolver runs as an
independent cross-check and disagreement raises.

The closure BFS is vectorized with int64 keys when q^(n^2) fits below
2^62 (sorted key arrays, searchsorted membership, batched integer
matmuls); otherwise a plain dictionary BFS over entry tuples is used.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .groups import CapExceeded, DEFAULT_CAP, GenSet
from .lanczos import LanczosResult, lanczos_extremes
from .matrices import IntMatrix

_KEY_LIMIT = 2 ** 62
_DENSE_ONLY_MAX = 64  # below this, Lanczos adds nothing over the dense solve


def factorize(q: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, [(p, exponent), ...]."""
    if q < 1:
        raise ValueError("q must be >= 1")
    out = []
    m = q
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


def is_squarefree(q: int) -> bool:
    return all(e == 1 for _, e in factorize(q))


def sl_group_order(n: int, q: int) -> int:
    """|SL_n(Z/q)|, multiplicative over prime powers.

    At a prime: p^(n(n-1)/2) * prod_{k=2..n} (p^k - 1); a prime power p^e
    contributes an extra factor p^((n^2-1)(e-1)) (the kernel of reduction
    p^e -> p is an iterated elementary abelian extension of rank n^2 - 1).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    order = 1
    for p, e in factorize(q):
        at_p = p ** (n * (n - 1) // 2)
        for k in range(2, n + 1):
            at_p *= p ** k - 1
        if e > 1:
            at_p *= p ** ((n * n - 1) * (e - 1))
        order *= at_p
    return order


@dataclass(frozen=True)
class ModMatrix:
    """Square matrix with entries reduced into [0, q)."""

    q: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def identity(cls, n: int, q: int) -> "ModMatrix":
        return cls(q, tuple(tuple(1 % q if i == j else 0 for j in range(n)) for i in range(n)))

    def __mul__(self, other: "ModMatrix") -> "ModMatrix":
        if self.q != other.q:
            raise ValueError("moduli differ")
        q = self.q
        cols = tuple(zip(*other.entries))
        return ModMatrix(
            q,
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) % q for col in cols)
                for row in self.entries
            ),
        )


def reduce_mod(m: IntMatrix, q: int) -> ModMatrix:
    if q < 2:
        raise ValueError("q must be >= 2")
    return ModMatrix(q, tuple(tuple(x % q for x in row) for row in m.rows))


# ---------------------------------------------------------------------------
# BFS closure
# ---------------------------------------------------------------------------


@dataclass
class _ClosureData:
    """Internal closure payload: sorted vertex keys plus decode info."""

    q: int
    n: int
    keys: np.ndarray | None          # sorted int64 keys (vectorized path)
    tuples: list[tuple[int, ...]] | None  # sorted flat tuples (fallback path)

    @property
    def size(self) -> int:
        return len(self.keys) if self.keys is not None else len(self.tuples)


def _powers(q: int, nn: int) -> np.ndarray:
    # most-significant-first so key order matches row-major lexicographic
    return np.array([q ** (nn - 1 - i) for i in range(nn)], dtype=np.int64)


def _member_mask(sorted_arr: np.ndarray, values: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(sorted_arr, values)
    capped = np.minimum(pos, len(sorted_arr) - 1)
    return (pos < len(sorted_arr)) & (sorted_arr[capped] == values)


def _closure_vectorized(S: GenSet, q: int, cap: int) -> np.ndarray:
    n = S.dimension
    nn = n * n
    powers = _powers(q, nn)
    gens = [np.array([[x % q for x in row] for row in g.rows], dtype=np.int64) for g in S.gens]

    def encode(mats: np.ndarray) -> np.ndarray:
        return (mats.reshape(-1, nn) * powers).sum(axis=1)

    ident = np.eye(n, dtype=np.int64) % q
    visited = encode(ident[None, :, :])
    frontier = ident[None, :, :]
    while len(frontier):
        batches = [(g @ frontier) % q for g in gens]
        prods = np.concatenate(batches, axis=0)
        keys = encode(prods)
        uniq, first_idx = np.unique(keys, return_index=True)
        fresh = ~_member_mask(visited, uniq)
        new_keys = uniq[fresh]
        frontier = prods[first_idx[fresh]]
        if not len(new_keys):
            break
        visited = np.sort(np.concatenate([visited, new_keys]))
        if len(visited) > cap:
            raise CapExceeded(f"closure mod {q} exceeded cap of {cap} elements", cap)
    return visited


def _closure_python(S: GenSet, q: int, cap: int) -> list[tuple[int, ...]]:
    n = S.dimension
    gens = [tuple(tuple(x % q for x in row) for row in g.rows) for g in S.gens]

    def mul(a, b):
        cols = tuple(zip(*b))
        return tuple(
            tuple(sum(x * y for x, y in zip(row, col)) % q for col in cols) for row in a
        )

    ident = tuple(tuple(1 % q if i == j else 0 for j in range(n)) for i in range(n))
    visited = {ident}
    frontier = [ident]
    while frontier:
        new_frontier = []
        for m in frontier:
            for g in gens:
                prod = mul(g, m)
                if prod not in visited:
                    visited.add(prod)
                    new_frontier.append(prod)
                    if len(visited) > cap:
                        raise CapExceeded(
                            f"closure mod {q} exceeded cap of {cap} elements", cap
                        )
        frontier = new_frontier
    return sorted(tuple(x for row in m for x in row) for m in visited)


def _closure(S: GenSet, q: int, cap: int) -> _ClosureData:
    n = S.dimension
    if q ** (n * n) < _KEY_LIMIT:
        keys = _closure_vectorized(S, q, cap)
        return _ClosureData(q=q, n=n, keys=keys, tuples=None)
    tuples = _closure_python(S, q, cap)
    return _ClosureData(q=q, n=n, keys=None, tuples=tuples)


@dataclass(frozen=True)
class ClosureResult:
    """Order of the mod-q closure and the surjectivity verdict."""

    q: int
    n: int
    completed: bool
    order: int | None
    target: str | None
    target_order: int | None
    onto: bool | None
    index: int | None  # target_order / order when both known
    squarefree: bool
    cap: int

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "completed": self.completed,
            "order": self.order,
            "target": self.target,
            "target_order": self.target_order,
            "onto": self.onto,
            "index": self.index,
            "squarefree": self.squarefree,
        }


def _closure_result(
    S: GenSet,
    q: int,
    data: _ClosureData | None,
    target: str | None,
    cap: int,
) -> ClosureResult:
    n = S.dimension
    target_order = sl_group_order(n, q) if target == "SL" else None
    if data is None:
        return ClosureResult(
            q=q, n=n, completed=False, order=None, target=target,
            target_order=target_order, onto=None, index=None,
            squarefree=is_squarefree(q), cap=cap,
        )
    order = data.size
    onto = None
    index = None
    if target_order is not None:
        onto = order == target_order
        index, rem = divmod(target_order, order)
        if rem != 0:
            raise AssertionError(
                "closure order must divide the group order (Lagrange)"
            )
    return ClosureResult(
        q=q, n=n, completed=True, order=order, target=target,
        target_order=target_order, onto=onto, index=index,
        squarefree=is_squarefree(q), cap=cap,
    )


def closure_mod(
    S: GenSet,
    q: int,
    *,
    target: str | None = "SL",
    allow_non_squarefree: bool = False,
    cap: int = DEFAULT_CAP,
) -> ClosureResult:
    """BFS closure of S mod q with an exact order comparison.

    A cap overflow is a verdict (completed=False, onto=None), not an
    exception.  Non-squarefree moduli are refused unless explicitly
    allowed, since the closed-form order comparison is the designed use.
    """
    _validate_modulus(q, allow_non_squarefree)
    if target not in ("SL", None):
        raise ValueError("target must be 'SL' or None")
    try:
        data = _closure(S, q, cap)
    except CapExceeded:
        data = None
    return _closure_result(S, q, data, target, cap)


def _validate_modulus(q: int, allow_non_squarefree: bool) -> None:
    if q < 2:
        raise ValueError("q must be >= 2")
    if not allow_non_squarefree and not is_squarefree(q):
        raise ValueError(
            f"q = {q} is not squarefree; pass allow_non_squarefree=True to proceed"
        )


# ---------------------------------------------------------------------------
# Cayley spectrum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CayleySpectrum:
    """Spectral report for the Cayley graph of the mod-q closure."""

    q: int
    closure: ClosureResult
    vertex_count: int
    degree: int
    eigenvalues: tuple[float, ...]  # leading values, descending, 1.0 first
    lambda2: float | None
    lambda_min: float | None
    one_sided_gap: float | None
    two_sided_gap: float | None
    bipartite: bool | None
    trivial_residual: float
    method: str  # "lanczos" or "dense"
    converged: bool
    matvecs: int
    dense_checked: bool
    dense_delta: float | None

    def to_dict(self) -> dict:
        d = {
            "q": self.q,
            "vertex_count": self.vertex_count,
            "degree": self.degree,
            "eigenvalues": list(self.eigenvalues),
            "lambda2": self.lambda2,
            "lambda_min": self.lambda_min,
            "one_sided_gap": self.one_sided_gap,
            "two_sided_gap": self.two_sided_gap,
            "bipartite": self.bipartite,
            "trivial_residual": self.trivial_residual,
            "method": self.method,
            "converged": self.converged,
            "matvecs": self.matvecs,
            "dense_checked": self.dense_checked,
            "dense_delta": self.dense_delta,
        }
        d["closure"] = self.closure.to_dict()
        return d


def _adjacency(S: GenSet, data: _ClosureData) -> sp.csr_matrix:
    """Degree-normalized adjacency; multi-edges accumulate."""
    q, n = data.q, data.n
    deg = S.degree
    if data.keys is not None:
        nn = n * n
        powers = _powers(q, nn)
        keys = data.keys
        V = len(keys)
        mats = ((keys[:, None] // powers[None, :]) % q).reshape(V, n, n)
        rows_all = []
        cols_all = []
        for g in S.gens:
            garr = np.array([[x % q for x in row] for row in g.rows], dtype=np.int64)
            prods = (garr @ mats) % q
            pkeys = (prods.reshape(V, nn) * powers).sum(axis=1)
            cols = np.searchsorted(keys, pkeys)
            if not np.all(keys[cols] == pkeys):
                raise AssertionError("closure must be closed under the generators")
            rows_all.append(np.arange(V, dtype=np.int64))
            cols_all.append(cols)
        rows = np.concatenate(rows_all)
        cols = np.concatenate(cols_all)
    else:
        tuples = data.tuples
        V = len(tuples)
        index = {t: i for i, t in enumerate(tuples)}
        gens = [tuple(tuple(x % q for x in row) for row in g.rows) for g in S.gens]
        rows_list: list[int] = []
        cols_list: list[int] = []
        for i, flat in enumerate(tuples):
            m = tuple(flat[r * n:(r + 1) * n] for r in range(n))
            for g in gens:
                cols_m = tuple(zip(*m))
                prod = tuple(
                    tuple(sum(x * y for x, y in zip(row, col)) % q for col in cols_m)
                    for row in g
                )
                rows_list.append(i)
                cols_list.append(index[tuple(x for row in prod for x in row)])
        rows = np.array(rows_list, dtype=np.int64)
        cols = np.array(cols_list, dtype=np.int64)
    vals = np.full(len(rows), 1.0 / deg)
    a_hat = sp.coo_matrix((vals, (rows, cols)), shape=(V, V)).tocsr()
    return a_hat


def cayley_spectrum(
    S: GenSet,
    q: int,
    k: int = 6,
    *,
    target: str | None = "SL",
    allow_non_squarefree: bool = False,
    cap: int = DEFAULT_CAP,
    dense_check_max: int = 5000,
    tol: float = 1e-10,
    seed: int = 0,
    max_matvecs: int | None = None,
) -> CayleySpectrum:
    """Spectrum and gaps of the normalized Cayley adjacency mod q.

    Production eigenvalues come from the thick-restart Lanczos path with
    the constant vector deflated; for graphs with at most dense_check_max
    vertices a dense symmetric eigensolver runs independently and the two
    must agree within 1e-8 on lambda_2 and lambda_min (disagreement
    raises).  A cap overflow raises CapExceeded (a spectrum needs the
    whole graph).
    """
    _validate_modulus(q, allow_non_squarefree)
    if k < 2:
        raise ValueError("k must be >= 2")
    data = _closure(S, q, cap)
    closure = _closure_result(S, q, data, target, cap)
    V = data.size
    a_hat = _adjacency(S, data)

    ones = np.ones(V) / math.sqrt(V)
    trivial_residual = float(np.max(np.abs(a_hat @ ones - ones)))

    if V == 1:
        return CayleySpectrum(
            q=q, closure=closure, vertex_count=1, degree=S.degree,
            eigenvalues=(1.0,), lambda2=None, lambda_min=None,
            one_sided_gap=None, two_sided_gap=None, bipartite=None,
            trivial_residual=trivial_residual, method="dense",
            converged=True, matvecs=0, dense_checked=True, dense_delta=None,
        )

    dense_vals = None
    if V <= dense_check_max:
        dense_vals = np.linalg.eigvalsh(a_hat.toarray())  # ascending

    lanczos_res: LanczosResult | None = None
    if V > _DENSE_ONLY_MAX:
        k_top = min(k - 1, V - 1)
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(V)
        v0 -= v0.mean()

        def matvec(x: np.ndarray) -> np.ndarray:
            y = x - x.mean()
            y = a_hat @ y
            return y - y.mean()

        lanczos_res = lanczos_extremes(
            matvec, V, k_top, 1, v0=v0, tol=tol, max_matvecs=max_matvecs,
        )

    if dense_vals is None and (lanczos_res is None or not lanczos_res.top):
        dense_vals = np.linalg.eigvalsh(a_hat.toarray())

    if lanczos_res is not None and lanczos_res.top:
        lambda2 = lanczos_res.top[0]
        lambda_min = lanczos_res.bottom[0]
        method = "lanczos"
        converged = lanczos_res.converged
        matvecs = lanczos_res.matvecs
    else:
        lambda2 = float(dense_vals[-2])
        lambda_min = float(dense_vals[0])
        method = "dense"
        converged = True
        matvecs = lanczos_res.matvecs if lanczos_res is not None else 0

    dense_checked = dense_vals is not None
    dense_delta = None
    if dense_vals is not None and lanczos_res is not None and lanczos_res.top:
        dense_delta = max(
            abs(lambda2 - float(dense_vals[-2])),
            abs(lambda_min - float(dense_vals[0])),
        )
        if converged and dense_delta > 1e-8:
            raise RuntimeError(
                f"iterative and dense eigensolvers disagree at q={q}: "
                f"delta={dense_delta:.3e}"
            )

    if dense_vals is not None:
        eigenvalues = tuple(float(x) for x in dense_vals[::-1][:k])
    else:
        eigenvalues = (1.0,) + tuple(lanczos_res.top)[: k - 1]

    one_sided = 1.0 - lambda2
    two_sided = 1.0 - max(abs(lambda2), abs(lambda_min))
    bipartite = bool(lambda_min <= -1.0 + 1e-8)
    return CayleySpectrum(
        q=q, closure=closure, vertex_count=V, degree=S.degree,
        eigenvalues=eigenvalues, lambda2=float(lambda2),
        lambda_min=float(lambda_min), one_sided_gap=float(one_sided),
        two_sided_gap=float(two_sided), bipartite=bipartite,
        trivial_residual=trivial_residual, method=method,
        converged=converged, matvecs=matvecs,
        dense_checked=dense_checked, dense_delta=dense_delta,
    )


# ---------------------------------------------------------------------------
# Scan driver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    q: int
    spectrum: CayleySpectrum | None
    error: str | None

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "spectrum": self.spectrum.to_dict() if self.spectrum else None,
            "error": self.error,
        }


@dataclass(frozen=True)
class ScanReport:
    rows: tuple[ScanRow, ...]
    target: str | None
    k: int

    @property
    def flagged_not_onto(self) -> tuple[int, ...]:
        return tuple(
            r.q
            for r in self.rows
            if r.spectrum is not None and r.spectrum.closure.onto is False
        )

    @property
    def errors(self) -> tuple[tuple[int, str], ...]:
        return tuple((r.q, r.error) for r in self.rows if r.error)

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "k": self.k,
            "flagged_not_onto": list(self.flagged_not_onto),
            "rows": [r.to_dict() for r in self.rows],
        }


def squarefree_range(lo: int, hi: int) -> list[int]:
    return [q for q in range(max(lo, 2), hi + 1) if is_squarefree(q)]


def expander_scan(
    S: GenSet,
    q_values: Sequence[int],
    *,
    k: int = 6,
    target: str | None = "SL",
    allow_non_squarefree: bool = False,
    cap: int = DEFAULT_CAP,
    dense_check_max: int = 5000,
    tol: float = 1e-10,
    seed: int = 0,
    threads: int = 1,
) -> ScanReport:
    """Per-q closure + spectrum scan; failures are recorded, not fatal.

    Rows are merged in ascending q order, so the report is deterministic
    for any thread count (per-q work is independent and seeded by q).
    """
    qs = sorted(set(int(q) for q in q_values))

    def job(q: int) -> ScanRow:
        try:
            found = cayley_spectrum(
                S, q, k, target=target,
                allow_non_squarefree=allow_non_squarefree, cap=cap,
                dense_check_max=dense_check_max, tol=tol, seed=seed + q,
            )
            return ScanRow(q=q, spectrum=found, error=None)
        except (CapExceeded, ValueError, RuntimeError) as exc:
            return ScanRow(q=q, spectrum=None, error=f"{type(exc).__name__}: {exc}")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(job, qs))
    else:
        rows = [job(q) for q in qs]
    return ScanReport(rows=tuple(rows), target=target, k=k)
