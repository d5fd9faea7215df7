"""Thick-restart Lanczos for symmetric operators.

Hand-written iterative eigensolver used for the extreme eigenvalues of
large normalized adjacency operators.  Full reorthogonalization against the
whole active basis (two passes) keeps the basis numerically orthogonal, a
thick restart keeps the best Ritz vectors from both ends of the spectrum,
and convergence is declared from the standard residual bound
|beta * y_last| for each wanted Ritz pair.

numpy is used for dense vector arithmetic only; the algorithm itself lives
here.  The dense-eigensolver cross-check lives with the caller so the two
routes stay independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class LanczosResult:
    top: tuple[float, ...]      # descending, up to k_top values
    bottom: tuple[float, ...]   # ascending, up to k_bottom values
    matvecs: int
    converged: bool
    max_residual: float
    breakdown: bool             # exact invariant subspace was hit


def lanczos_extremes(
    matvec: Callable[[np.ndarray], np.ndarray],
    n: int,
    k_top: int,
    k_bottom: int = 1,
    *,
    v0: np.ndarray | None = None,
    seed: int = 0,
    tol: float = 1e-10,
    max_matvecs: int | None = None,
    basis_cap: int | None = None,
) -> LanczosResult:
    """Extreme eigenvalues of a symmetric operator given by `matvec`.

    Returns the k_top largest and k_bottom smallest eigenvalues.  When the
    Krylov space exhausts (exact invariant subspace, e.g. for operators
    with few distinct eigenvalues) the available Ritz values are returned
    with breakdown=True; fewer than the requested count may be present.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    nwant = k_top + k_bottom
    if max_matvecs is None:
        max_matvecs = int(10 * math.sqrt(n) + 200)
    if basis_cap is None:
        basis_cap = max(3 * nwant + 12, 36)
    m = min(n, max(basis_cap, nwant + 2))

    if v0 is None:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(n)
    v = np.asarray(v0, dtype=np.float64)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("start vector must be nonzero")

    V = np.zeros((n, m + 1))
    H = np.zeros((m + 1, m + 1))
    V[:, 0] = v / nrm
    j = 0
    matvecs = 0
    breakdown = False

    def rayleigh_ritz(size: int) -> tuple[np.ndarray, np.ndarray]:
        return np.linalg.eigh(H[:size, :size])

    while True:
        # build out the basis
        while j < m and matvecs < max_matvecs and not breakdown:
            w = matvec(V[:, j])
            matvecs += 1
            h = V[:, : j + 1].T @ w
            w = w - V[:, : j + 1] @ h
            h2 = V[:, : j + 1].T @ w  # second orthogonalization pass
            w = w - V[:, : j + 1] @ h2
            h = h + h2
            H[: j + 1, j] = h
            H[j, : j + 1] = h
            beta = float(np.linalg.norm(w))
            if beta < 1e-13:
                breakdown = True
                j += 1
                break
            H[j + 1, j] = beta
            H[j, j + 1] = beta
            V[:, j + 1] = w / beta
            j += 1

        theta, Y = rayleigh_ritz(j)
        if breakdown:
            top = theta[::-1][:k_top]
            bottom = theta[:k_bottom]
            return LanczosResult(
                top=tuple(float(x) for x in top),
                bottom=tuple(float(x) for x in bottom),
                matvecs=matvecs,
                converged=True,
                max_residual=0.0,
                breakdown=True,
            )

        # general residual row: after a plain step it is (0, ..., 0, beta),
        # right after a restart it is the dense coupling row
        res_row = H[j, :j]
        residuals = np.abs(res_row @ Y)
        top_idx = list(range(j - 1, j - 1 - k_top, -1))
        bottom_idx = list(range(k_bottom))
        wanted = [i for i in top_idx + bottom_idx if 0 <= i < j]
        max_res = float(
            max(residuals[i] / max(1.0, abs(theta[i])) for i in wanted)
        )
        if max_res <= tol:
            return LanczosResult(
                top=tuple(float(theta[i]) for i in top_idx if 0 <= i < j),
                bottom=tuple(float(theta[i]) for i in bottom_idx if i < j),
                matvecs=matvecs,
                converged=True,
                max_residual=max_res,
                breakdown=False,
            )
        if matvecs >= max_matvecs:
            return LanczosResult(
                top=tuple(float(theta[i]) for i in top_idx if 0 <= i < j),
                bottom=tuple(float(theta[i]) for i in bottom_idx if i < j),
                matvecs=matvecs,
                converged=False,
                max_residual=max_res,
                breakdown=False,
            )

        # thick restart: keep padded sets of extreme Ritz vectors
        pad = 3
        keep_top = min(j - 1, k_top + pad)
        keep_bottom = max(0, min(j - 1 - keep_top, k_bottom + pad))
        sel = sorted(set(range(j - keep_top, j)) | set(range(keep_bottom)))
        couplings = res_row @ Y[:, sel]
        ell = len(sel)
        W = V[:, :j] @ Y[:, sel]
        v_res = V[:, j].copy()
        V[:, :ell] = W
        V[:, ell] = v_res
        H[:, :] = 0.0
        for a, i in enumerate(sel):
            H[a, a] = theta[i]
            H[ell, a] = couplings[a]
            H[a, ell] = couplings[a]
        j = ell
