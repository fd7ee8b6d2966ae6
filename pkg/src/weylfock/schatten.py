"""Singular values, Schatten p-norms and power-law decay fits."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fock_rep import FockOperator

__all__ = [
    "SpectrumProfile",
    "singular_values",
    "schatten_norm",
    "decay_exponent",
    "loglog_slope",
    "spectrum_to_csv",
]


@dataclass(frozen=True)
class SpectrumProfile:
    """Descending singular values with a fitted power-law decay exponent."""

    values: np.ndarray
    fit_exponent: float
    fit_stderr: float
    fit_range: tuple[int, int]   # 1-based inclusive index interval

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if np.any(v < 0) or np.any(np.diff(v) > 0):
            raise ValueError("values must be nonnegative and descending")
        lo, hi = self.fit_range
        if not (1 <= lo < hi <= v.size):
            raise ValueError("fit range must satisfy 1 <= lo < hi <= len(values)")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def fit_dict(self) -> dict:
        return {"exponent": self.fit_exponent, "stderr": self.fit_stderr,
                "j_lo": self.fit_range[0], "j_hi": self.fit_range[1]}


def singular_values(X: FockOperator | np.ndarray) -> np.ndarray:
    """Descending singular values of a dense operator."""
    entries = X.entries if isinstance(X, FockOperator) else np.asarray(X)
    if not np.all(np.isfinite(entries)):
        raise ValueError("operator entries must be finite")
    return np.linalg.svd(entries, compute_uv=False)


def schatten_norm(X: FockOperator | np.ndarray, p: float) -> float:
    """(sum s_j^p)^{1/p}; p = inf gives the largest singular value."""
    if p != np.inf and p < 1:
        raise ValueError("p must be >= 1 or inf")
    s = singular_values(X)
    if np.isinf(p):
        return float(s[0]) if s.size else 0.0
    return float((s ** p).sum() ** (1.0 / p))


def loglog_slope(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Ordinary least-squares slope of log y against log x, with standard error."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    if lx.size < 2:
        raise ValueError("need at least two points")
    A = np.column_stack([lx, np.ones_like(lx)])
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ coef
    dof = max(lx.size - 2, 1)
    denom = np.sum((lx - lx.mean()) ** 2)
    stderr = float(np.sqrt(resid @ resid / dof / denom)) if denom > 0 else np.inf
    return float(coef[0]), stderr


def decay_exponent(s: np.ndarray, fit_range: tuple[int, int]) -> tuple[float, float]:
    """Least-squares slope of log s_j vs log j over 1-based indices [lo, hi]."""
    s = np.asarray(s, dtype=float)
    lo, hi = fit_range
    if not (1 <= lo < hi <= s.size):
        raise ValueError("fit range out of bounds")
    seg = s[lo - 1: hi]
    if np.any(seg <= 0):
        raise ValueError("singular values in the fit range must be positive")
    return loglog_slope(np.arange(lo, hi + 1), seg)


def spectrum_to_csv(profile: SpectrumProfile, path: str | Path) -> None:
    """CSV of (j, s_j) plus a JSON sidecar with the fit summary."""
    path = Path(path)
    j = np.arange(1, profile.values.size + 1)
    np.savetxt(path, np.column_stack([j, profile.values]), delimiter=",",
               header="j,s", comments="", fmt=["%d", "%.17g"])
    with open(path.with_suffix(path.suffix + ".json"), "w") as fh:
        json.dump(profile.fit_dict(), fh, indent=1)
        fh.write("\n")
