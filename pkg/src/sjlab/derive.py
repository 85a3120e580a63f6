"""High-order mixed partial derivatives of scalar fields on charts.

Central-difference tensor-product stencils with one Richardson level.
Fields may supply an exact-derivative hook; the engine prefers it and only
falls back to finite differences when the hook is absent or declines.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AccuracyWarning, InputError, NumericError

FD_MAX_ORDER = 3


@dataclass(frozen=True)
class DeriveConfig:
    base_step: float = 1e-4       # orders 1 and 2
    third_step: float = 5e-4      # order-3 multi-indices
    richardson: bool = True
    domain_margin: float = 1e-6   # shrink steps that would leave the domain


DEFAULT_CONFIG = DeriveConfig()


@lru_cache(maxsize=None)
def stencil_1d(order: int) -> tuple[tuple[int, ...], tuple[float, ...]]:
    """Central stencil (offsets, coefficients) for d^order/dx^order, unit step.

    Each is second-order accurate; the order-3 stencil is the convolution of
    the first- and second-derivative stencils.
    """
    if order == 0:
        return (0,), (1.0,)
    if order == 1:
        return (-1, 1), (-0.5, 0.5)
    if order == 2:
        return (-1, 0, 1), (1.0, -2.0, 1.0)
    if order == 3:
        return (-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)
    raise InputError(f"finite differences support order <= {FD_MAX_ORDER}, got {order}")


def _stencil_eval(fn, coords, alpha, steps):
    """Tensor-product stencil evaluation at the given per-coordinate steps."""
    active = [i for i, a in enumerate(alpha) if a > 0]
    points = [(coords, 1.0)]
    for i in active:
        offs, coefs = stencil_1d(alpha[i])
        h = steps[i]
        new_points = []
        for base, w in points:
            for off, c in zip(offs, coefs):
                p = base.copy()
                p[i] += off * h
                new_points.append((p, w * c / h ** alpha[i]))
        points = new_points
    return sum(w * fn(p) for p, w in points)


def _fit_steps(chart, coords, alpha, steps, margin):
    """Shrink steps until the stencil's extreme points stay in the domain."""
    if chart is None:
        return steps
    steps = np.array(steps, dtype=float)
    for _ in range(40):
        extreme_lo = coords.copy()
        extreme_hi = coords.copy()
        for i, a in enumerate(alpha):
            if a > 0:
                reach = max(abs(o) for o in stencil_1d(a)[0])
                extreme_lo[i] -= reach * steps[i]
                extreme_hi[i] += reach * steps[i]
        if chart.in_domain(extreme_lo, margin / 2) and chart.in_domain(
            extreme_hi, margin / 2
        ):
            return steps
        steps = steps / 2
    raise NumericError("could not fit a finite-difference stencil inside the domain")


def derive(field, coords, alpha, cfg: DeriveConfig = DEFAULT_CONFIG) -> complex:
    """Mixed partial d^alpha field(coords).

    alpha is a multi-index over the chart coordinates.  Uses the field's
    exact hook when available, otherwise central differences with step
    h_i = base * (1 + |coords_i|) and one Richardson extrapolation level.
    """
    coords = np.asarray(coords, dtype=float)
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != coords.shape[0]:
        raise InputError("multi-index length does not match coordinate count")
    if any(a < 0 for a in alpha):
        raise InputError("multi-index entries must be nonnegative")
    order = sum(alpha)
    if order == 0:
        return complex(field.fn(coords))

    exact = getattr(field, "exact", None)
    if exact is not None:
        val = exact(alpha, coords)
        if val is not None:
            return complex(val)

    if order > FD_MAX_ORDER:
        raise InputError(
            f"finite differences limited to order {FD_MAX_ORDER}; "
            f"field supplies no exact derivative of order {order}"
        )

    chart = getattr(field, "chart", None)
    base = cfg.third_step if order == 3 else cfg.base_step
    steps = base * (1.0 + np.abs(coords))
    if chart is not None and chart.domain_margin(coords) < cfg.domain_margin:
        raise NumericError(
            "point is too close to the domain boundary for finite differencing"
        )
    fitted = _fit_steps(chart, coords, alpha, steps, cfg.domain_margin)
    if np.any(fitted < steps):
        warnings.warn(
            "finite-difference step shrunk to stay inside the domain",
            AccuracyWarning,
            stacklevel=2,
        )
    steps = fitted

    coarse = _stencil_eval(field.fn, coords, alpha, steps)
    if not cfg.richardson:
        value = coarse
    else:
        fine = _stencil_eval(field.fn, coords, alpha, steps / 2)
        value = (4.0 * fine - coarse) / 3.0
    if not np.isfinite(value.real) or not np.isfinite(value.imag):
        raise NumericError("non-finite value in finite-difference evaluation")
    return complex(value)


class _CachedField:
    """Evaluation-memoizing wrapper used inside a single operator application."""

    def __init__(self, field):
        self._field = field
        self.chart = getattr(field, "chart", None)
        self.exact = getattr(field, "exact", None)
        self._cache: dict[bytes, complex] = {}

    def fn(self, coords):
        key = np.asarray(coords).tobytes()
        hit = self._cache.get(key)
        if hit is None:
            hit = complex(self._field.fn(coords))
            self._cache[key] = hit
        return hit


def cached(field) -> _CachedField:
    return field if isinstance(field, _CachedField) else _CachedField(field)
