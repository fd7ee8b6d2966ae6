"""Low-level sweeps for phase-space translation matrices.

The unitary translation by (x, y) acts on the truncated Hermite basis as the
displacement matrix D(alpha) with alpha = sqrt(pi) * (-x + i y).  Its entries
along the d-th subdiagonal,

    c_k = D[k + d, k] = sqrt(k! / (k+d)!) alpha^d e^{-|alpha|^2/2} L_k^{(d)}(|alpha|^2),

satisfy the normalized Laguerre three-term recurrence

    c_{k+1} = [(2k + d + 1 - a2) c_k - sqrt(k (k+d)) c_{k-1}] / sqrt((k+1)(k+1+d)),

which is run here per diagonal.  Quantities stay bounded by 1, so the sweep is
stable for every truncation size this package allows (the column-by-column
alternative loses digits near the far diagonal for |alpha|^2 beyond ~1).

Superdiagonals are the same sweep with alpha^d replaced by (-conj(alpha))^d.
All kernels are O(B N^2) for a batch of B displacements.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

__all__ = [
    "displacement_matrix",
    "accumulate_displacements",
    "trace_pairings",
]


def _diagonal_seeds(signs: np.ndarray, a2: np.ndarray, levels: int) -> np.ndarray:
    """c_0 over diagonals: seeds[b, d] = signs[b]^d e^{-a2[b]/2} / sqrt(d!)."""
    B = signs.shape[0]
    seeds = np.empty((B, levels), dtype=np.complex128)
    seeds[:, 0] = np.exp(-a2 / 2.0)
    for d in range(1, levels):
        seeds[:, d] = seeds[:, d - 1] * (signs / np.sqrt(d))
    return seeds


@njit(cache=True, parallel=True)
def _sweep_accumulate(seeds, a2, weights, levels, out_diag):
    # out_diag[d, k] = sum_b weights[b] * c_k[b, d]
    B = seeds.shape[0]
    for d in prange(levels):
        kmax = levels - d
        sq_lo = np.empty(kmax)
        sq_hi = np.empty(kmax)
        for k in range(kmax):
            sq_lo[k] = np.sqrt(k * (k + d))
            sq_hi[k] = 1.0 / np.sqrt((k + 1.0) * (k + 1.0 + d))
        for b in range(B):
            w = weights[b]
            a = a2[b]
            cm1 = 0.0 + 0.0j
            ck = seeds[b, d]
            for k in range(kmax):
                out_diag[d, k] += w * ck
                cnext = ((2.0 * k + d + 1.0 - a) * ck - sq_lo[k] * cm1) * sq_hi[k]
                cm1 = ck
                ck = cnext


@njit(cache=True, parallel=True)
def _sweep_trace(seeds, a2, xdiag, levels, out):
    # out[b] += sum_{d,k} c_k[b, d] * xdiag[d, k]
    B = seeds.shape[0]
    for b in prange(B):
        a = a2[b]
        acc = 0.0 + 0.0j
        for d in range(levels):
            kmax = levels - d
            cm1 = 0.0 + 0.0j
            ck = seeds[b, d]
            for k in range(kmax):
                acc += ck * xdiag[d, k]
                cnext = ((2.0 * k + d + 1.0 - a) * ck
                         - np.sqrt(k * (k + d)) * cm1) / np.sqrt(
                    (k + 1.0) * (k + 1.0 + d))
                cm1 = ck
                ck = cnext
        out[b] += acc


def accumulate_displacements(alphas: np.ndarray, weights: np.ndarray,
                             levels: int) -> np.ndarray:
    """Weighted sum_b weights[b] * D(alphas[b]) as a dense (levels, levels) matrix."""
    alphas = np.ascontiguousarray(alphas, dtype=np.complex128)
    weights = np.ascontiguousarray(weights, dtype=np.complex128)
    a2 = np.abs(alphas) ** 2
    out = np.zeros((levels, levels), dtype=np.complex128)
    ks = np.arange(levels)

    # lower triangle including the main diagonal
    diag = np.zeros((levels, levels), dtype=np.complex128)
    _sweep_accumulate(_diagonal_seeds(alphas, a2, levels), a2, weights, levels, diag)
    for d in range(levels):
        out[ks[: levels - d] + d, ks[: levels - d]] = diag[d, : levels - d]

    # strict upper triangle
    diag[:] = 0.0
    _sweep_accumulate(_diagonal_seeds(-np.conj(alphas), a2, levels), a2, weights,
                      levels, diag)
    for d in range(1, levels):
        out[ks[: levels - d], ks[: levels - d] + d] = diag[d, : levels - d]
    return out


def displacement_matrix(alpha: complex, levels: int) -> np.ndarray:
    """Dense displacement matrix D(alpha) on the first `levels` basis states."""
    return accumulate_displacements(np.array([alpha]), np.array([1.0]), levels)


def trace_pairings(alphas: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """tr(D(alphas[b]) @ matrix) for every b, without forming any D."""
    alphas = np.ascontiguousarray(alphas, dtype=np.complex128)
    levels = matrix.shape[0]
    a2 = np.abs(alphas) ** 2
    out = np.zeros(alphas.shape[0], dtype=np.complex128)
    ks = np.arange(levels)

    # pairing tables: lower-triangle entries D[k+d, k] meet matrix[k, k+d]
    xdiag = np.zeros((levels, levels), dtype=np.complex128)
    for d in range(levels):
        xdiag[d, : levels - d] = matrix[ks[: levels - d], ks[: levels - d] + d]
    _sweep_trace(_diagonal_seeds(alphas, a2, levels), a2, xdiag, levels, out)

    # superdiagonal entries D[k, k+d] meet matrix[k+d, k], d >= 1
    xdiag[:] = 0.0
    for d in range(1, levels):
        xdiag[d, : levels - d] = matrix[ks[: levels - d] + d, ks[: levels - d]]
    _sweep_trace(_diagonal_seeds(-np.conj(alphas), a2, levels), a2, xdiag, levels, out)
    return out
