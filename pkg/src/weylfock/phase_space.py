"""Phase-space points, the symplectic form, and the unit-modulus pairing.

Everything downstream (translation identities, difference operators,
characteristic polynomials) reduces to the antisymmetric form computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["PhasePoint", "symplectic_form", "cocycle"]


def _as_tuple(v) -> tuple[float, ...]:
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.ndim != 1:
        raise ValueError("phase point components must be 1-D")
    return tuple(float(c) for c in arr)


@dataclass(frozen=True)
class PhasePoint:
    """A point (x, y) of R^{2n}, position part x and momentum part y."""

    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", _as_tuple(self.x))
        object.__setattr__(self, "y", _as_tuple(self.y))
        if len(self.x) != len(self.y):
            raise ValueError(
                f"x has length {len(self.x)} but y has length {len(self.y)}"
            )
        if len(self.x) < 1:
            raise ValueError("phase point needs dimension n >= 1")
        if not all(math.isfinite(c) for c in self.x + self.y):
            raise ValueError("phase point components must be finite")

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def zero(cls, n: int) -> "PhasePoint":
        return cls((0.0,) * n, (0.0,) * n)

    def as_vector(self) -> np.ndarray:
        """Concatenated (x, y) as a length-2n array."""
        return np.array(self.x + self.y, dtype=float)

    def __neg__(self) -> "PhasePoint":
        return PhasePoint(tuple(-c for c in self.x), tuple(-c for c in self.y))

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        _check_dims(self, other)
        return PhasePoint(
            tuple(a + b for a, b in zip(self.x, other.x)),
            tuple(a + b for a, b in zip(self.y, other.y)),
        )

    def scaled(self, t: float) -> "PhasePoint":
        return PhasePoint(tuple(t * c for c in self.x), tuple(t * c for c in self.y))

    def distance(self, other: "PhasePoint") -> float:
        _check_dims(self, other)
        return float(np.linalg.norm(self.as_vector() - other.as_vector()))


def _check_dims(a: PhasePoint, b: PhasePoint) -> None:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")


def symplectic_form(a: PhasePoint, b: PhasePoint) -> float:
    """The antisymmetric bilinear form x_a . y_b - y_a . x_b."""
    _check_dims(a, b)
    xa, ya = np.array(a.x), np.array(a.y)
    xb, yb = np.array(b.x), np.array(b.y)
    return float(xa @ yb - ya @ xb)


def cocycle(a: PhasePoint, b: PhasePoint) -> complex:
    """Unit-modulus pairing exp(2 pi i (x_a . y_b - y_a . x_b)).

    A bicharacter: multiplicative in each slot, and cocycle(a, b) is the
    complex conjugate of cocycle(b, a).
    """
    return complex(np.exp(2j * np.pi * symplectic_form(a, b)))
