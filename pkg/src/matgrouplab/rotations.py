"""Averaging operators for rotation generators on spherical harmonics.

For a set of rotations s_1..s_t the averaging operator at harmonic level
ell is T_ell = sum_j (rho(s_j) + rho(s_j)^T), where rho(R) is the action
p(x) -> p(R^-1 x) on an orthonormal basis of degree-ell harmonic
polynomials.  Each rho(R) is orthogonal, so the spectrum of T_ell lies in
[-2t, 2t]; the reported gap after level L is 2t - max over 1 <= ell <= L
of lambda_max(ell), which is nonincreasing in L by construction.

Harmonic bases are built in the monomial basis: the harmonic space is the
nullspace of the Laplacian coefficient map, the sphere Gram matrix comes
from the exact even-moment formula (double factorials), and the basis is
orthonormalized symmetrically after a diagonal preconditioning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .matrices import IntMatrix

_ORTHO_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class RotationGenSet:
    """Rotations validated orthogonal (1e-12) with determinant +1."""

    gens: tuple[np.ndarray, ...]
    labels: tuple[str, ...]

    @classmethod
    def of(cls, mats: Sequence, labels: Sequence[str] | None = None) -> "RotationGenSet":
        arrays = []
        for m in mats:
            if isinstance(m, IntMatrix):
                m = np.array(m.to_lists(), dtype=np.float64)
            arr = np.asarray(m, dtype=np.float64)
            if arr.shape != (3, 3):
                raise ValueError("rotations must be 3x3")
            if np.max(np.abs(arr.T @ arr - np.eye(3))) > 1e-12:
                raise ValueError("generator is not orthogonal within 1e-12")
            if abs(np.linalg.det(arr) - 1.0) > 1e-12:
                raise ValueError("generator must have determinant +1")
            arrays.append(arr)
        if labels is None:
            labels = [f"s{i + 1}" for i in range(len(arrays))]
        if len(labels) != len(arrays):
            raise ValueError("one label per rotation")
        return cls(gens=tuple(arrays), labels=tuple(labels))

    @property
    def t(self) -> int:
        return len(self.gens)


def rotation_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def rotation_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]])


def gamma_generators(m: int, n: int) -> RotationGenSet:
    """Rotation by 2 pi/m about the z-axis and 2 pi/n about the x-axis."""
    if m < 1 or n < 1:
        raise ValueError("orders must be >= 1")
    return RotationGenSet.of(
        [rotation_z(2 * math.pi / m), rotation_x(2 * math.pi / n)],
        labels=[f"rz{m}", f"rx{n}"],
    )


def integral_rotation_gens(m: int, n: int) -> list[IntMatrix]:
    """Integer matrices for the quarter-turn pair; only (4, 4) is integral."""
    if (m, n) != (4, 4):
        raise ValueError("integral rotation generators exist only for orders (4, 4)")
    return [
        IntMatrix([[0, 1, 0], [-1, 0, 0], [0, 0, 1]]),
        IntMatrix([[1, 0, 0], [0, 0, 1], [0, -1, 0]]),
    ]


# ---------------------------------------------------------------------------
# Harmonic frames
# ---------------------------------------------------------------------------


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def _monomials(l: int) -> tuple[tuple[int, int, int], ...]:
    return tuple(
        (a, b, l - a - b) for a in range(l, -1, -1) for b in range(l - a, -1, -1)
    )


def _sphere_moment(a: int, b: int, c: int) -> float:
    """Normalized sphere average of x^a y^b z^c (exact for even exponents)."""
    if a % 2 or b % 2 or c % 2:
        return 0.0
    num = (
        _double_factorial(a - 1)
        * _double_factorial(b - 1)
        * _double_factorial(c - 1)
    )
    den = _double_factorial(a + b + c + 1)
    return num / den


@lru_cache(maxsize=None)
def _harmonic_frame(l: int) -> tuple[tuple[tuple[int, int, int], ...], np.ndarray, np.ndarray]:
    """(monomials, Q, G): Q maps harmonic coordinates to monomial coefficients.

    Q has 2l+1 columns with Q^T G Q = I, where G is the monomial Gram
    matrix of sphere averages.  Built via the Laplacian nullspace with a
    diagonal preconditioning so high levels stay well conditioned.
    """
    monos = _monomials(l)
    dim = len(monos)
    index = {m: i for i, m in enumerate(monos)}
    g = np.empty((dim, dim))
    for i, (a1, b1, c1) in enumerate(monos):
        for j in range(i, dim):
            a2, b2, c2 = monos[j]
            g[i, j] = g[j, i] = _sphere_moment(a1 + a2, b1 + b2, c1 + c2)

    if l < 2:
        null = np.eye(dim)
    else:
        lower = _monomials(l - 2)
        lower_index = {m: i for i, m in enumerate(lower)}
        lap = np.zeros((len(lower), dim))
        for j, (a, b, c) in enumerate(monos):
            if a >= 2:
                lap[lower_index[(a - 2, b, c)], j] += a * (a - 1)
            if b >= 2:
                lap[lower_index[(a, b - 2, c)], j] += b * (b - 1)
            if c >= 2:
                lap[lower_index[(a, b, c - 2)], j] += c * (c - 1)
        scale = 1.0 / np.sqrt(np.diag(g))
        _, s, vt = np.linalg.svd(lap * scale[None, :])
        rank = int(np.sum(s > 1e-10 * s[0]))
        null = (vt[rank:].T) * scale[:, None]
    expected = 2 * l + 1
    if null.shape[1] != expected:
        raise AssertionError(
            f"harmonic dimension at level {l}: {null.shape[1]} != {expected}"
        )
    b = null.T @ g @ null
    evals, evecs = np.linalg.eigh(b)
    if np.min(evals) <= 0:
        raise AssertionError("harmonic Gram must be positive definite")
    q = null @ evecs @ np.diag(1.0 / np.sqrt(evals))
    if np.max(np.abs(q.T @ g @ q - np.eye(expected))) > 1e-10:
        raise AssertionError(f"orthonormalization drifted at level {l}")
    return monos, q, g


_SUBST_CACHE: dict[bytes, list[np.ndarray]] = {}


def _substitution_matrix(s: np.ndarray, l: int) -> np.ndarray:
    """Matrix of x^nu -> (s x)^nu on the degree-l monomial basis.

    Built degree by degree: the column for nu = mu + e_i multiplies the
    degree d-1 column for mu by the linear form sum_j s[i, j] x_j.  All
    degrees are cached per rotation so climbing levels costs one pass.
    """
    key = s.tobytes()
    mats = _SUBST_CACHE.setdefault(key, [np.array([[1.0]])])
    while len(mats) <= l:
        d = len(mats)
        monos_prev = _monomials(d - 1)
        monos_d = _monomials(d)
        index_d = {m: i for i, m in enumerate(monos_d)}
        prev_index = {m: i for i, m in enumerate(monos_prev)}
        prev = mats[d - 1]
        out = np.zeros((len(monos_d), len(monos_d)))
        for col, nu in enumerate(monos_d):
            i = next(ax for ax in range(3) if nu[ax] > 0)
            mu = tuple(nu[ax] - (1 if ax == i else 0) for ax in range(3))
            base = prev[:, prev_index[mu]]
            vec = out[:, col]
            for row_k, kappa in enumerate(monos_prev):
                coeff = base[row_k]
                if coeff == 0.0:
                    continue
                for j in range(3):
                    sij = s[i, j]
                    if sij != 0.0:
                        target = (
                            kappa[0] + (1 if j == 0 else 0),
                            kappa[1] + (1 if j == 1 else 0),
                            kappa[2] + (1 if j == 2 else 0),
                        )
                        vec[index_d[target]] += coeff * sij
        mats.append(out)
    return mats[l]


@dataclass(frozen=True, eq=False)
class HarmonicBlock:
    l: int
    matrix: np.ndarray


def harmonic_block(rotation, l: int) -> HarmonicBlock:
    """rho(R) at level l: the action p -> p(R^-1 x), orthogonal by construction."""
    if isinstance(rotation, IntMatrix):
        rotation = np.array(rotation.to_lists(), dtype=np.float64)
    r = np.asarray(rotation, dtype=np.float64)
    if r.shape != (3, 3):
        raise ValueError("rotation must be 3x3")
    if np.max(np.abs(r.T @ r - np.eye(3))) > _ORTHO_TOL:
        raise ValueError("rotation is not orthogonal")
    if l < 0:
        raise ValueError("level must be >= 0")
    monos, q, g = _harmonic_frame(l)
    m = _substitution_matrix(r.T, l)  # R^-1 = R^T for orthogonal R
    block = q.T @ g @ m @ q
    return HarmonicBlock(l=l, matrix=block)


@dataclass(frozen=True)
class GapRow:
    l: int
    lam_max: float
    lam_min: float
    gap_after: float | None  # 2t - max over levels 1..l (None at l = 0)

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "lam_max": self.lam_max,
            "lam_min": self.lam_min,
            "gap_after": self.gap_after,
        }


@dataclass(frozen=True)
class GapTable:
    t: int
    L: int
    rows: tuple[GapRow, ...]

    @property
    def gap(self) -> float | None:
        return self.rows[-1].gap_after if self.L >= 1 else None

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "L": self.L,
            "gap": self.gap,
            "rows": [r.to_dict() for r in self.rows],
        }


def tsigma_gap(S: RotationGenSet, L: int) -> GapTable:
    """Averaging-operator spectra through level L and the running gap."""
    if L < 0:
        raise ValueError("L must be >= 0")
    t = S.t
    rows = []
    running_max = None
    for l in range(L + 1):
        dim = 2 * l + 1
        total = np.zeros((dim, dim))
        for gmat in S.gens:
            rho = harmonic_block(gmat, l).matrix
            total += rho + rho.T
        evals = np.linalg.eigvalsh(total)
        lam_max = float(evals[-1])
        lam_min = float(evals[0])
        if l >= 1:
            running_max = lam_max if running_max is None else max(running_max, lam_max)
            gap_after = 2.0 * t - running_max
        else:
            gap_after = None
        rows.append(GapRow(l=l, lam_max=lam_max, lam_min=lam_min, gap_after=gap_after))
    return GapTable(t=t, L=L, rows=tuple(rows))
