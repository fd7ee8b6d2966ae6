"""Unitary phase-space translations on a truncated Hermite (Fock) basis.

Convention: the basis consists of orthonormal Hermite functions under the
normalization h_0(t) = 2^{1/4} exp(-pi t^2), so the translation by (x, y),

    (U(x, y) phi)(t) = exp(i pi x.y + 2 pi i y.t) phi(t + x),

has the ground-state matrix element <h_0, U h_0> = exp(-pi (x^2 + y^2) / 2).
In this basis U(x, y) is the displacement matrix D(sqrt(pi) (-x + i y)),
assembled coordinate by coordinate as a Kronecker product for n > 1.

Truncation-edge policy: a translation mixes O(sqrt(levels) |z|) basis states,
so accuracy statements are made on the leading half of the basis indices; the
outer half is buffer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._kernels import accumulate_displacements
from .phase_space import PhasePoint

__all__ = [
    "FockConfig",
    "FockOperator",
    "hermite_basis_samples",
    "hermite_basis_table",
    "rho_matrix",
    "rho_adjoint",
    "displacement_parameter",
    "save_operator",
    "load_operator",
]

HERMITE_MAX_INDEX = 512
DEFAULT_DIM_CAP = 4096


@dataclass(frozen=True)
class FockConfig:
    """Truncation parameters: n coordinates, `levels` Hermite functions each."""

    n: int
    levels: int
    dim_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.levels < 2:
            raise ValueError("levels must be >= 2")
        if self.levels ** self.n > self.dim_cap:
            raise ValueError(
                f"total dimension {self.levels ** self.n} exceeds cap {self.dim_cap}"
            )

    @property
    def dim(self) -> int:
        return self.levels ** self.n


@dataclass(frozen=True)
class FockOperator:
    """A dense complex matrix on the truncated basis, tagged with its config."""

    dim: int
    entries: np.ndarray
    config: FockConfig

    def __post_init__(self):
        entries = np.ascontiguousarray(self.entries, dtype=np.complex128)
        if entries.shape != (self.dim, self.dim):
            raise ValueError(f"entries must be {self.dim}x{self.dim}")
        if self.dim != self.config.dim:
            raise ValueError("dim does not match config.levels**config.n")
        if not np.all(np.isfinite(entries)):
            raise ValueError("entries must be finite")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def wrap(cls, entries: np.ndarray, config: FockConfig) -> "FockOperator":
        return cls(config.dim, entries, config)

    def adjoint(self) -> "FockOperator":
        return FockOperator.wrap(self.entries.conj().T.copy(), self.config)


def hermite_basis_samples(k: int, grid: np.ndarray) -> np.ndarray:
    """Samples of the k-th orthonormal Hermite function, h_0 = 2^{1/4} e^{-pi t^2}.

    Three-term recurrence h_{k+1} = 2 sqrt(pi/(k+1)) t h_k - sqrt(k/(k+1)) h_{k-1}.
    """
    return hermite_basis_table(k, grid)[k]


def hermite_basis_table(kmax: int, grid: np.ndarray) -> np.ndarray:
    """All of h_0 .. h_kmax sampled on `grid`, as a (kmax+1, len(grid)) array."""
    if kmax < 0:
        raise ValueError("index must be >= 0")
    if kmax > HERMITE_MAX_INDEX:
        raise ValueError(
            f"index {kmax} beyond the supported recurrence range {HERMITE_MAX_INDEX}"
        )
    t = np.asarray(grid, dtype=float)
    table = np.zeros((kmax + 1, t.size))
    table[0] = 2.0 ** 0.25 * np.exp(-np.pi * t * t)
    if kmax >= 1:
        table[1] = 2.0 * np.sqrt(np.pi) * t * table[0]
    for k in range(1, kmax):
        table[k + 1] = (2.0 * np.sqrt(np.pi / (k + 1)) * t * table[k]
                        - np.sqrt(k / (k + 1.0)) * table[k - 1])
    return table


def displacement_parameter(x: float, y: float) -> complex:
    """Map one phase-space coordinate pair to its displacement parameter."""
    return complex(np.sqrt(np.pi) * (-x + 1j * y))


def _coordinate_factors(z: PhasePoint, levels: int) -> list[np.ndarray]:
    return [
        accumulate_displacements(
            np.array([displacement_parameter(x, y)]), np.array([1.0]), levels
        )
        for x, y in zip(z.x, z.y)
    ]


def rho_matrix(z: PhasePoint, cfg: FockConfig) -> FockOperator:
    """Matrix of the unitary translation by z on the truncated basis.

    For n > 1 the matrix is the Kronecker product of the per-coordinate
    factors, first coordinate most significant.
    """
    if z.n != cfg.n:
        raise ValueError(f"point dimension {z.n} != config n {cfg.n}")
    factors = _coordinate_factors(z, cfg.levels)
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return FockOperator.wrap(out, cfg)


def rho_adjoint(z: PhasePoint, cfg: FockConfig) -> FockOperator:
    """Conjugate transpose of rho_matrix(z); equals rho_matrix(-z) up to truncation."""
    return rho_matrix(z, cfg).adjoint()


def save_operator(op: FockOperator, path: str | Path) -> None:
    """Line-oriented text dump: dim, then dim^2 rows of "re im", plus a JSON sidecar."""
    path = Path(path)
    with open(path, "w") as fh:
        fh.write(f"{op.dim}\n")
        for v in op.entries.ravel():
            fh.write(f"{v.real:.17g} {v.imag:.17g}\n")
    sidecar = {"n": op.config.n, "levels": op.config.levels,
               "dim_cap": op.config.dim_cap}
    with open(path.with_suffix(path.suffix + ".json"), "w") as fh:
        json.dump(sidecar, fh, indent=1)
        fh.write("\n")


def load_operator(path: str | Path) -> FockOperator:
    path = Path(path)
    with open(path) as fh:
        dim = int(fh.readline())
        data = np.loadtxt(fh, dtype=float, max_rows=dim * dim)
    entries = (data[:, 0] + 1j * data[:, 1]).reshape(dim, dim)
    with open(path.with_suffix(path.suffix + ".json")) as fh:
        sidecar = json.load(fh)
    cfg = FockConfig(n=sidecar["n"], levels=sidecar["levels"],
                     dim_cap=sidecar.get("dim_cap", DEFAULT_DIM_CAP))
    return FockOperator.wrap(entries, cfg)
