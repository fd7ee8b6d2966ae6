"""Transforms between operators and phase-space functions.

The two directions are the trace pairing (operator -> function)

    wig(X)(x, y) = tr(U(-x, -y) X)

and the operator-valued quadrature (function -> operator)

    W(f) = sum_nodes f(x, y) U(x, y) h^{2n},

which invert each other on well-resolved inputs.  Also here: the symplectic
and ordinary Fourier transforms on centered uniform grids, the damped map
g * wig(X) with the unit Gaussian g, and the quantization map that composes
W with the inverse ordinary Fourier transform.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._kernels import accumulate_displacements, trace_pairings
from .fock_rep import FockConfig, FockOperator, displacement_parameter, rho_matrix
from .phase_space import PhasePoint

__all__ = [
    "PhaseGrid",
    "PhaseFunction",
    "SurfaceMeasure",
    "BoundaryMassError",
    "WEYL_PLANCHEREL_CONSTANT",
    "fourier_wigner",
    "fourier_wigner_at",
    "weyl_transform",
    "weyl_of_measure",
    "symplectic_fourier",
    "ordinary_fourier",
    "inverse_ordinary_fourier",
    "weyl_correspondence",
    "beta_damp",
    "phase_function_to_csv",
    "surface_measure_to_csv",
    "surface_measure_from_csv",
]

DEFAULT_GRID_CAP = 2 ** 22
BOUNDARY_MASS_TOL = 1e-10

# Ratio ||W(f)||_S2 / ||f||_L2 under this package's conventions.  Measured once
# from the ground-state Gaussian pair (wig of the h_0 projector against the
# projector itself) and frozen; every norm comparison routes through it.
WEYL_PLANCHEREL_CONSTANT = 1.0


class BoundaryMassError(ValueError):
    """Raised in strict mode when a quadrature input has boundary mass."""


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform centered grid on R^{2n}: M points per axis over [-L/2, L/2)."""

    n: int
    side: float
    points_per_axis: int
    cap: int = DEFAULT_GRID_CAP

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.side <= 0:
            raise ValueError("side must be positive")
        if self.points_per_axis < 2 or self.points_per_axis % 2:
            raise ValueError("points_per_axis must be even and >= 2")
        if self.points_per_axis ** (2 * self.n) > self.cap:
            raise ValueError("grid exceeds the configured point cap")

    @property
    def spacing(self) -> float:
        return self.side / self.points_per_axis

    def axis(self) -> np.ndarray:
        M = self.points_per_axis
        return (np.arange(M) - M // 2) * self.spacing

    def mesh(self) -> list[np.ndarray]:
        """2n coordinate arrays (x_1..x_n, y_1..y_n), 'ij' indexing."""
        return list(np.meshgrid(*([self.axis()] * (2 * self.n)), indexing="ij"))

    def points(self) -> np.ndarray:
        """All grid nodes as a (M^{2n}, 2n) array, C order."""
        return np.stack([m.ravel() for m in self.mesh()], axis=-1)

    def reciprocal(self) -> "PhaseGrid":
        """The grid the discrete Fourier transforms map onto (spacing 1/side)."""
        M = self.points_per_axis
        return PhaseGrid(self.n, M / self.side, M, self.cap)


@dataclass(frozen=True)
class PhaseFunction:
    """Complex samples on a PhaseGrid, shape (M,) * 2n."""

    grid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.complex128)
        M = self.grid.points_per_axis
        if v.shape != (M,) * (2 * self.grid.n):
            raise ValueError(f"values must have shape {(M,) * (2 * self.grid.n)}")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid: PhaseGrid, fn) -> "PhaseFunction":
        return cls(grid, np.asarray(fn(*grid.mesh()), dtype=np.complex128))

    def lp_norm(self, p: float) -> float:
        """Quadrature L^p norm; p = inf gives the max modulus."""
        a = np.abs(self.values)
        if np.isinf(p):
            return float(a.max())
        h = self.grid.spacing
        return float((np.sum(a ** p) * h ** (2 * self.grid.n)) ** (1.0 / p))


@dataclass(frozen=True)
class SurfaceMeasure:
    """Finitely many weighted nodes approximating a measure on a hypersurface."""

    points: np.ndarray          # (k, 2n)
    weights: np.ndarray         # (k,), positive
    tangents: np.ndarray | None = None

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        w = np.asarray(self.weights, dtype=float)
        if pts.ndim != 2 or pts.shape[1] % 2:
            raise ValueError("points must be (k, 2n)")
        if w.shape != (pts.shape[0],):
            raise ValueError("weights must match the node count")
        if pts.shape[0] < 1:
            raise ValueError("need at least one node")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(w))):
            raise ValueError("nodes and weights must be finite")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.points.shape[1] // 2

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def phase_points(self) -> list[PhasePoint]:
        n = self.n
        return [PhasePoint(tuple(p[:n]), tuple(p[n:])) for p in self.points]


def _split_xy(points: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != 2 * n:
        raise ValueError(f"points must have 2n = {2 * n} coordinates")
    return pts[:, :n], pts[:, n:]


def fourier_wigner_at(X: FockOperator, points: np.ndarray) -> np.ndarray:
    """tr(U(-x, -y) X) at arbitrary phase points, shape (k, 2n) -> (k,)."""
    n = X.config.n
    xs, ys = _split_xy(points, n)
    if n == 1:
        alphas = np.array([displacement_parameter(-x, -y)
                           for x, y in zip(xs[:, 0], ys[:, 0])])
        return trace_pairings(alphas, X.entries)
    return _trace_general(-xs, -ys, X)


def _trace_general(xs: np.ndarray, ys: np.ndarray, X: FockOperator) -> np.ndarray:
    # n >= 2: contract the Kronecker factors against X reshaped as a 2n-tensor
    n, levels = X.config.n, X.config.levels
    T = X.entries.reshape((levels,) * (2 * n))
    out = np.empty(xs.shape[0], dtype=np.complex128)
    for i in range(xs.shape[0]):
        # tr(kron(D_1..D_n) X) = sum D_1[j1,k1]..D_n[jn,kn] X[k1..kn, j1..jn]
        acc = T
        for c in range(n):
            D = accumulate_displacements(
                np.array([displacement_parameter(xs[i, c], ys[i, c])]),
                np.array([1.0]), levels)
            acc = np.tensordot(D, acc, axes=[[1], [0]])  # contract k_c, j_c to front
            acc = np.trace(acc, axis1=0, axis2=n - c)
        out[i] = acc
    return out


def fourier_wigner(X: FockOperator, grid: PhaseGrid) -> PhaseFunction:
    """The trace pairing of X against translations, sampled on `grid`."""
    if grid.n != X.config.n:
        raise ValueError(f"grid n {grid.n} != operator n {X.config.n}")
    vals = fourier_wigner_at(X, grid.points())
    M = grid.points_per_axis
    return PhaseFunction(grid, vals.reshape((M,) * (2 * grid.n)))


def _boundary_fraction(values: np.ndarray) -> float:
    total = float(np.abs(values).sum())
    if total == 0.0:
        return 0.0
    inner = values[tuple(slice(1, -1) for _ in range(values.ndim))]
    return float((np.abs(values).sum() - np.abs(inner).sum()) / total)


def weyl_transform(f: PhaseFunction, cfg: FockConfig, *,
                   strict: bool = False) -> FockOperator:
    """Riemann quadrature of f against translations: sum f(z) U(z) h^{2n}.

    Inputs should decay below ~1e-10 of their mass at the grid boundary;
    otherwise a warning is issued (an error under strict=True) since aliasing
    is silent.
    """
    if f.grid.n != cfg.n:
        raise ValueError(f"grid n {f.grid.n} != config n {cfg.n}")
    frac = _boundary_fraction(f.values)
    if frac > BOUNDARY_MASS_TOL:
        msg = f"boundary mass fraction {frac:.3e} exceeds {BOUNDARY_MASS_TOL:.0e}"
        if strict:
            raise BoundaryMassError(msg)
        warnings.warn(msg, stacklevel=2)
    h = f.grid.spacing
    cell = h ** (2 * cfg.n)
    pts = f.grid.points()
    vals = f.values.ravel()
    # dropping nodes below 1e-14 of the peak changes the sum below roundoff
    keep = np.abs(vals) > 1e-14 * np.abs(vals).max() if vals.size else slice(None)
    pts, vals = pts[keep], vals[keep]
    if cfg.n == 1:
        alphas = np.sqrt(np.pi) * (-pts[:, 0] + 1j * pts[:, 1])
        return FockOperator.wrap(
            accumulate_displacements(alphas, vals * cell, cfg.levels), cfg)
    out = np.zeros((cfg.dim, cfg.dim), dtype=np.complex128)
    for p, v in zip(pts, vals):
        z = PhasePoint(tuple(p[: cfg.n]), tuple(p[cfg.n:]))
        out += (v * cell) * rho_matrix(z, cfg).entries
    return FockOperator.wrap(out, cfg)


def weyl_of_measure(mu: SurfaceMeasure, cfg: FockConfig, *,
                    bound: float = 8.0) -> FockOperator:
    """sum_i weights[i] U(nodes[i]) for a discrete surface measure."""
    if mu.n != cfg.n:
        raise ValueError(f"measure n {mu.n} != config n {cfg.n}")
    if np.abs(mu.points).max() > bound:
        raise ValueError(f"measure node outside the representable region |z| <= {bound}")
    if cfg.n == 1:
        alphas = np.sqrt(np.pi) * (-mu.points[:, 0] + 1j * mu.points[:, 1])
        return FockOperator.wrap(
            accumulate_displacements(alphas, mu.weights.astype(complex), cfg.levels),
            cfg)
    out = np.zeros((cfg.dim, cfg.dim), dtype=np.complex128)
    for p, w in zip(mu.points, mu.weights):
        z = PhasePoint(tuple(p[: cfg.n]), tuple(p[cfg.n:]))
        out += w * rho_matrix(z, cfg).entries
    return FockOperator.wrap(out, cfg)


def _centered_dft(values: np.ndarray, spacing: float, sign: int) -> np.ndarray:
    """DFT with kernel exp(sign * 2 pi i nu . w) on centered grids, weight spacing^d."""
    M = values.shape[0]
    ndim = values.ndim
    phase = (-1.0) ** np.arange(M)
    out = values
    for ax in range(ndim):
        out = out * phase.reshape((1,) * ax + (M,) + (1,) * (ndim - ax - 1))
    if sign < 0:
        out = np.fft.fftn(out)
    else:
        out = np.fft.ifftn(out) * M ** ndim
    for ax in range(ndim):
        out = out * phase.reshape((1,) * ax + (M,) + (1,) * (ndim - ax - 1))
    return out * (spacing * (-1.0) ** (M // 2)) ** ndim


def ordinary_fourier(f: PhaseFunction) -> PhaseFunction:
    """Fourier transform with kernel exp(-2 pi i nu . w), on the reciprocal grid."""
    return PhaseFunction(f.grid.reciprocal(),
                         _centered_dft(f.values, f.grid.spacing, -1))


def inverse_ordinary_fourier(f: PhaseFunction) -> PhaseFunction:
    """Fourier transform with kernel exp(+2 pi i nu . w), on the reciprocal grid."""
    return PhaseFunction(f.grid.reciprocal(),
                         _centered_dft(f.values, f.grid.spacing, +1))


def _negate_axis(a: np.ndarray, ax: int) -> np.ndarray:
    # index map i -> (M - i) mod M, the grid realization of coordinate negation
    return np.roll(np.flip(a, axis=ax), 1, axis=ax)


def symplectic_fourier(f: PhaseFunction) -> PhaseFunction:
    """Transform with kernel exp(2 pi i (xi . y - eta . x)).

    Realized through the ordinary transform: the output at (xi, eta) is the
    ordinary transform at (eta, -xi).  An exact involution on matched
    grid/reciprocal-grid pairs.
    """
    n = f.grid.n
    G = _centered_dft(f.values, f.grid.spacing, -1)
    for ax in range(n, 2 * n):     # negate the frequency axes dual to y
        G = _negate_axis(G, ax)
    G = np.transpose(G, axes=tuple(range(n, 2 * n)) + tuple(range(n)))
    return PhaseFunction(f.grid.reciprocal(), G)


def weyl_correspondence(f: PhaseFunction, cfg: FockConfig, *,
                        strict: bool = False) -> FockOperator:
    """Quantization of f: the quadrature W applied to its inverse Fourier transform."""
    return weyl_transform(inverse_ordinary_fourier(f), cfg, strict=strict)


def beta_damp(X: FockOperator, grid: PhaseGrid) -> PhaseFunction:
    """Pointwise product of the unit Gaussian exp(-pi |w|^2 / 2) with fourier_wigner(X)."""
    fw = fourier_wigner(X, grid)
    r2 = sum(m ** 2 for m in grid.mesh())
    return PhaseFunction(grid, np.exp(-np.pi * r2 / 2.0) * fw.values)


def phase_function_to_csv(f: PhaseFunction, path: str | Path) -> None:
    n = f.grid.n
    cols = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]
    header = ",".join(cols + ["re", "im"])
    pts = f.grid.points()
    v = f.values.ravel()
    data = np.column_stack([pts, v.real, v.imag])
    np.savetxt(path, data, delimiter=",", header=header, comments="", fmt="%.17g")


def surface_measure_to_csv(mu: SurfaceMeasure, path: str | Path) -> None:
    n = mu.n
    cols = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]
    header = ",".join(cols + ["weight"])
    data = np.column_stack([mu.points, mu.weights])
    np.savetxt(path, data, delimiter=",", header=header, comments="", fmt="%.17g")


def surface_measure_from_csv(path: str | Path) -> SurfaceMeasure:
    data = np.atleast_2d(np.loadtxt(path, delimiter=",", skiprows=1))
    return SurfaceMeasure(points=data[:, :-1], weights=data[:, -1])
