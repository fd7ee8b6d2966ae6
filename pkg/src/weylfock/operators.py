"""Reference operators and test-function families.

The random families are concentrated on the lowest quarter of the basis
levels so that translation and trace pairings stay far from the truncation
edge; every tolerance in the verification suites presumes this.
"""

from __future__ import annotations

import numpy as np

from .fock_rep import FockConfig, FockOperator
from .transforms import PhaseFunction, PhaseGrid, weyl_transform

__all__ = [
    "ground_state_projector",
    "random_low_rank_operator",
    "random_bump_operator",
    "gaussian_packet",
    "random_polynomial_gaussian",
]


def ground_state_projector(cfg: FockConfig) -> FockOperator:
    """Projector onto the ground basis state."""
    m = np.zeros((cfg.dim, cfg.dim), dtype=np.complex128)
    m[0, 0] = 1.0
    return FockOperator.wrap(m, cfg)


def random_low_rank_operator(cfg: FockConfig, rank: int,
                             rng: np.random.Generator, *,
                             level_fraction: float = 0.25,
                             unit_norm_p: float | None = 2.0) -> FockOperator:
    """Sum of `rank` random dyads supported on the lowest basis levels."""
    top = max(2, int(cfg.dim * level_fraction))
    m = np.zeros((cfg.dim, cfg.dim), dtype=np.complex128)
    for _ in range(rank):
        u = rng.normal(size=top) + 1j * rng.normal(size=top)
        v = rng.normal(size=top) + 1j * rng.normal(size=top)
        m[:top, :top] += np.outer(u, v.conj())
    if unit_norm_p is not None:
        s = np.linalg.svd(m, compute_uv=False)
        scale = s[0] if np.isinf(unit_norm_p) else (s ** unit_norm_p).sum() ** (
            1.0 / unit_norm_p)
        m /= scale
    return FockOperator.wrap(m, cfg)


def gaussian_packet(grid: PhaseGrid, center, momentum) -> PhaseFunction:
    """Modulated shifted Gaussian exp(2 pi i m.w) exp(-pi |w - c|^2 / 2)."""
    mesh = grid.mesh()
    c = np.asarray(center, dtype=float).ravel()
    m = np.asarray(momentum, dtype=float).ravel()
    if c.size != 2 * grid.n or m.size != 2 * grid.n:
        raise ValueError("center and momentum need 2n components")
    phase = sum(mi * wi for mi, wi in zip(m, mesh))
    r2 = sum((wi - ci) ** 2 for ci, wi in zip(c, mesh))
    return PhaseFunction(grid, np.exp(2j * np.pi * phase - np.pi * r2 / 2.0))


def random_polynomial_gaussian(grid: PhaseGrid, rng: np.random.Generator,
                               degree: int = 4) -> PhaseFunction:
    """Random complex polynomial of total degree <= degree times the unit Gaussian.

    The operator quadrature maps this family onto the lowest `degree + 1`
    basis levels exactly, so truncation plays no role in norm comparisons.
    """
    mesh = grid.mesh()
    r2 = sum(w ** 2 for w in mesh)
    poly = np.zeros_like(mesh[0], dtype=np.complex128)
    for expo in np.ndindex(*([degree + 1] * len(mesh))):
        if sum(expo) > degree:
            continue
        coef = rng.normal() + 1j * rng.normal()
        term = np.ones_like(poly)
        for w, e in zip(mesh, expo):
            if e:
                term = term * w ** e
        poly += coef * term
    return PhaseFunction(grid, poly * np.exp(-np.pi * r2 / 2.0))


def random_bump_operator(cfg: FockConfig, rng: np.random.Generator,
                         grid: PhaseGrid | None = None) -> FockOperator:
    """Operator quadrature of a random localized smooth phase-space function."""
    if grid is None:
        grid = PhaseGrid(cfg.n, 12.0, 96 if cfg.n == 1 else 16)
    mesh = grid.mesh()
    c = rng.uniform(-0.5, 0.5, size=2 * grid.n)
    r2 = sum((w - ci) ** 2 for ci, w in zip(c, mesh))
    poly = np.zeros_like(mesh[0], dtype=np.complex128)
    for expo in np.ndindex(*([3] * len(mesh))):
        if sum(expo) > 2:
            continue
        coef = rng.normal() + 1j * rng.normal()
        term = np.ones_like(poly)
        for w, e in zip(mesh, expo):
            if e:
                term = term * w ** e
        poly += coef * term
    f = PhaseFunction(grid, poly * np.exp(-np.pi * r2))
    return weyl_transform(f, cfg)
