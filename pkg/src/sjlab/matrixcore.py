"""Validated real/complex symmetric matrix primitives.

Every matrix entering the geometry or group layers passes through the
constructors here.  Symmetry is enforced exactly (construction symmetrizes
small float round-off and rejects genuinely asymmetric input); positive
definiteness is decided by a pivot factorization.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericError, AccuracyWarning

# Asymmetry up to this fraction of the max-norm is treated as round-off.
SYM_RTOL = 1e-12
# Pivot threshold for positive definiteness, relative to the max-norm.
PIVOT_RTOL = 1e-14
# Condition-number threshold above which inverses carry an accuracy warning.
ILL_CONDITION = 1e12


def _as_square(mat, dtype) -> np.ndarray:
    m = np.array(mat, dtype=dtype)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    return m


def symmetrize(mat, dtype=float, rtol: float = SYM_RTOL) -> np.ndarray:
    """Return (M + M^T)/2, rejecting matrices that are genuinely asymmetric.

    The tolerance is relative to the max-norm so that float round-off from
    upstream arithmetic passes while transposition bugs are caught.
    """
    m = _as_square(mat, dtype)
    scale = max(float(np.abs(m).max()), 1.0) if m.size else 1.0
    asym = float(np.abs(m - m.T).max()) if m.size else 0.0
    if asym > rtol * scale:
        raise InputError(
            f"matrix is not symmetric: max |M - M^T| = {asym:.3e} "
            f"exceeds {rtol:.1e} * max-norm"
        )
    return (m + m.T) / 2.0


def leading_minors(y: np.ndarray) -> list[float]:
    """Determinants of the leading principal blocks Y[:k,:k], k = 1..n."""
    return [float(np.linalg.det(y[:k, :k])) for k in range(1, y.shape[0] + 1)]


def posdef_check(y) -> tuple[bool, float]:
    """Decide positive definiteness; return (verdict, smallest leading minor).

    The verdict comes from the pivots of the triangular factorization
    (ratios of consecutive leading minors) against a scale-relative
    threshold.  The smallest leading minor is returned as a margin
    diagnostic.
    """
    y = symmetrize(y)
    n = y.shape[0]
    if n == 0:
        return True, 1.0
    tol = PIVOT_RTOL * max(float(np.abs(y).max()), 1.0)
    minors = leading_minors(y)
    pivots = [minors[0]] + [
        minors[k] / minors[k - 1] if abs(minors[k - 1]) > 0 else -np.inf
        for k in range(1, n)
    ]
    ok = all(p > tol for p in pivots)
    return ok, min(minors)


def sym_inverse(y) -> np.ndarray:
    """Inverse of a positive definite symmetric matrix, symmetrized.

    Attaches an AccuracyWarning when the condition estimate exceeds 1e12.
    """
    y = symmetrize(y)
    ok, margin = posdef_check(y)
    if not ok:
        raise InputError(f"matrix is not positive definite (least minor {margin:.3e})")
    cond = float(np.linalg.cond(y))
    if cond > ILL_CONDITION:
        warnings.warn(
            f"ill-conditioned inverse (cond ~ {cond:.2e})", AccuracyWarning, stacklevel=2
        )
    inv = np.linalg.inv(y)
    return (inv + inv.T) / 2.0


def det(mat) -> float | complex:
    """Determinant of a real or complex square matrix."""
    m = np.asarray(mat)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    d = np.linalg.det(m)
    return complex(d) if np.iscomplexobj(m) else float(d)


@dataclass(frozen=True)
class RealSymMatrix:
    """Real symmetric matrix; construction symmetrizes or rejects."""

    a: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", symmetrize(self.a, dtype=float))

    @property
    def n(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True)
class PosDefSymMatrix(RealSymMatrix):
    """Real symmetric positive definite matrix (all leading minors > 0)."""

    least_minor: float = field(init=False)

    def __post_init__(self):
        super().__post_init__()
        ok, margin = posdef_check(self.a)
        if not ok:
            raise InputError(
                f"matrix is not positive definite (least minor {margin:.3e})"
            )
        object.__setattr__(self, "least_minor", margin)

    def inverse(self) -> np.ndarray:
        return sym_inverse(self.a)


@dataclass(frozen=True)
class ComplexSymMatrix:
    """Complex symmetric (not Hermitian) matrix."""

    a: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", symmetrize(self.a, dtype=complex))

    @property
    def n(self) -> int:
        return self.a.shape[0]


def check_condition(mat, what: str = "matrix") -> np.ndarray:
    """Guard a matrix that is about to be inverted inside a group action."""
    m = np.asarray(mat)
    cond = float(np.linalg.cond(m))
    if not np.isfinite(cond) or cond > ILL_CONDITION:
        raise NumericError(f"{what} is numerically singular (cond ~ {cond:.2e})")
    return m


# JSON wire format: row-major arrays; complex entries as [re, im] pairs.

def mat_to_json(m) -> list:
    m = np.asarray(m)
    if np.iscomplexobj(m):
        return [[[float(z.real), float(z.imag)] for z in row] for row in m]
    return [[float(x) for x in row] for row in m]


def mat_from_json(data, expect_complex: bool = False) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 3 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim != 2:
        raise InputError(f"expected a matrix, got array of shape {arr.shape}")
    return arr.astype(complex) if expect_complex else arr
