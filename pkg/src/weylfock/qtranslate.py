"""Quantum translation of operators and its linear-independence diagnostics.

Translating an operator means conjugating by the unitary phase-space
translation: z . X = U(z) X U(z)*.  Finite linear combinations of translates
form difference operators; on the function side each translate multiplies the
trace pairing by the unit-modulus cocycle, so a difference operator acts as
multiplication by a trigonometric polynomial.  The Gram matrix of a family of
translates quantifies their linear independence at finite truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fock_rep import FockConfig, FockOperator, rho_matrix
from .phase_space import PhasePoint, cocycle

__all__ = [
    "DifferenceSpec",
    "translate",
    "difference_apply",
    "characteristic_poly",
    "characteristic_poly_at",
    "gram_matrix",
    "independence_margin",
    "lattice_difference_spec",
    "difference_spec_to_csv",
    "difference_spec_from_csv",
]

DISTINCTNESS_TOL = 1e-9


@dataclass(frozen=True)
class DifferenceSpec:
    """Distinct translation points with complex coefficients."""

    points: tuple[PhasePoint, ...]
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        cs = tuple(complex(c) for c in self.coeffs)
        if len(pts) < 1:
            raise ValueError("need at least one translation point")
        if len(pts) != len(cs):
            raise ValueError("points and coeffs must have equal length")
        n = pts[0].n
        if any(p.n != n for p in pts):
            raise ValueError("all points must share one dimension")
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if pts[i].distance(pts[j]) <= DISTINCTNESS_TOL:
                    raise ValueError(
                        f"points {i} and {j} closer than {DISTINCTNESS_TOL}"
                    )
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "coeffs", cs)

    @property
    def n(self) -> int:
        return self.points[0].n


def translate(z: PhasePoint, X: FockOperator) -> FockOperator:
    """Conjugation U(z) X U(z)*; unitary, so spectra are preserved."""
    if z.n != X.config.n:
        raise ValueError(f"point dimension {z.n} != operator n {X.config.n}")
    U = rho_matrix(z, X.config).entries
    return FockOperator.wrap(U @ X.entries @ U.conj().T, X.config)


def difference_apply(spec: DifferenceSpec, A: FockOperator) -> FockOperator:
    """sum_i coeffs[i] * (points[i] . A)."""
    if spec.n != A.config.n:
        raise ValueError("spec dimension does not match operator")
    out = np.zeros_like(A.entries)
    for c, z in zip(spec.coeffs, spec.points):
        out = out + c * translate(z, A).entries
    return FockOperator.wrap(out, A.config)


def characteristic_poly(spec: DifferenceSpec, w: PhasePoint) -> complex:
    """sum_i coeffs[i] * cocycle(points[i], w), the symbol of the difference operator."""
    if spec.n != w.n:
        raise ValueError("dimension mismatch")
    return sum(c * cocycle(z, w) for c, z in zip(spec.coeffs, spec.points))


def characteristic_poly_at(spec: DifferenceSpec, points: np.ndarray) -> np.ndarray:
    """Vectorized symbol over an array of phase points, shape (k, 2n)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = spec.n
    if pts.shape[1] != 2 * n:
        raise ValueError("points must have 2n coordinates")
    out = np.zeros(pts.shape[0], dtype=np.complex128)
    for c, z in zip(spec.coeffs, spec.points):
        sym = pts[:, n:] @ np.array(z.x) - pts[:, :n] @ np.array(z.y)
        out += c * np.exp(2j * np.pi * sym)
    return out


def _gram(points: list[PhasePoint], A: FockOperator) -> np.ndarray:
    # no distinctness validation: exercised directly by tests on degenerate input
    translates = [translate(z, A).entries for z in points]
    k = len(translates)
    G = np.empty((k, k), dtype=np.complex128)
    for i in range(k):
        for j in range(i, k):
            G[j, i] = np.vdot(translates[j], translates[i])
            G[i, j] = np.conj(G[j, i])
    return G


def gram_matrix(points: list[PhasePoint], A: FockOperator) -> np.ndarray:
    """Hermitian matrix of pairwise Hilbert-Schmidt inner products of translates."""
    norm = np.linalg.norm(A.entries)
    if norm == 0:
        raise ValueError("operator must be nonzero")
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if points[i].distance(points[j]) <= DISTINCTNESS_TOL:
                raise ValueError(f"points {i} and {j} are not distinct")
    return _gram(list(points), A)


def independence_margin(points: list[PhasePoint], A: FockOperator) -> float:
    """Smallest Gram eigenvalue over the squared Hilbert-Schmidt norm, in [0, 1].

    Strictly positive exactly when the translates are linearly independent at
    this truncation; reported as a margin rather than a boolean because
    truncation makes exact rank statements unreliable.
    """
    G = gram_matrix(points, A)
    lam = float(np.linalg.eigvalsh(G)[0])
    norm2 = float(np.linalg.norm(A.entries) ** 2)
    return min(max(lam / norm2, 0.0), 1.0)


def lattice_difference_spec(n: int) -> DifferenceSpec:
    """Central weight 2(2n-1) against the 4n unit translates along each axis.

    The symbol is 2(2n-1) - 2 sum_j (cos 2 pi x_j + cos 2 pi y_j), whose zero
    set the surface-measure construction lives on.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    zero = (0.0,) * n
    points = [PhasePoint(zero, zero)]
    coeffs: list[complex] = [2.0 * (2 * n - 1)]
    for j in range(n):
        e = tuple(1.0 if i == j else 0.0 for i in range(n))
        me = tuple(-1.0 if i == j else 0.0 for i in range(n))
        for pt in (PhasePoint(e, zero), PhasePoint(me, zero),
                   PhasePoint(zero, e), PhasePoint(zero, me)):
            points.append(pt)
            coeffs.append(-1.0)
    return DifferenceSpec(tuple(points), tuple(coeffs))


def difference_spec_to_csv(spec: DifferenceSpec, path: str | Path) -> None:
    n = spec.n
    cols = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]
    header = ",".join(cols + ["re_c", "im_c"])
    rows = np.array([
        list(z.x) + list(z.y) + [c.real, c.imag]
        for z, c in zip(spec.points, spec.coeffs)
    ])
    np.savetxt(path, rows, delimiter=",", header=header, comments="", fmt="%.17g")


def difference_spec_from_csv(path: str | Path) -> DifferenceSpec:
    data = np.atleast_2d(np.loadtxt(path, delimiter=",", skiprows=1))
    n = (data.shape[1] - 2) // 2
    points = tuple(PhasePoint(tuple(r[:n]), tuple(r[n:2 * n])) for r in data)
    coeffs = tuple(complex(r[2 * n], r[2 * n + 1]) for r in data)
    return DifferenceSpec(points, coeffs)
