"""Model-space point types, Cayley transforms and random samplers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charts import Chart, ChartVector
from .errors import DomainError, InputError
from .matrixcore import check_condition, posdef_check, symmetrize

# Points closer to the boundary than this are rejected by finite-difference
# and curvature routines (steps must stay inside the domain).
BOUNDARY_MARGIN = 1e-6
DISK_MARGIN = 1e-12


@dataclass(frozen=True)
class SiegelPoint:
    """Point of the upper half plane: Omega = X + iY, X symmetric, Y > 0."""

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        x = symmetrize(self.X)
        y = symmetrize(self.Y)
        if x.shape != y.shape:
            raise InputError("X and Y must have the same shape")
        ok, margin = posdef_check(y)
        if not ok:
            raise InputError(f"Y is not positive definite (least minor {margin:.3e})")
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "Y", y)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def omega(self) -> np.ndarray:
        return self.X + 1j * self.Y

    @classmethod
    def from_omega(cls, omega) -> "SiegelPoint":
        omega = np.asarray(omega, dtype=complex)
        return cls(omega.real, omega.imag)

    def to_chart(self) -> ChartVector:
        ch = Chart("H", self.n)
        return ChartVector(ch, ch.pack(X=self.X, Y=self.Y))


@dataclass(frozen=True)
class JacobiPoint:
    """Point (Omega, Z) of the half plane times C^(m,n)."""

    omega: SiegelPoint
    Z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.Z, dtype=complex)
        if z.ndim != 2 or z.shape[1] != self.omega.n:
            raise InputError(
                f"Z must be m x {self.omega.n}, got shape {z.shape}"
            )
        object.__setattr__(self, "Z", z)

    @property
    def n(self) -> int:
        return self.omega.n

    @property
    def m(self) -> int:
        return self.Z.shape[0]

    def to_chart(self) -> ChartVector:
        ch = Chart("HJ", self.n, self.m)
        return ChartVector(
            ch, ch.pack(X=self.omega.X, Y=self.omega.Y, U=self.Z.real, V=self.Z.imag)
        )


@dataclass(frozen=True)
class DiskPoint:
    """Point of the generalized unit disk: W symmetric, I - conj(W) W > 0."""

    W: np.ndarray

    def __post_init__(self):
        w = symmetrize(self.W, dtype=complex)
        h = np.eye(w.shape[0]) - w.conj() @ w
        least = float(np.linalg.eigvalsh((h + h.conj().T) / 2).min())
        if least < DISK_MARGIN:
            raise InputError(
                f"I - conj(W) W is not positive definite (margin {least:.3e})"
            )
        object.__setattr__(self, "W", w)

    @property
    def n(self) -> int:
        return self.W.shape[0]

    def to_chart(self) -> ChartVector:
        ch = Chart("D", self.n)
        return ChartVector(ch, ch.pack(W=self.W))


@dataclass(frozen=True)
class DiskJacobiPoint:
    """Point (W, eta) of the disk times C^(m,n)."""

    W: DiskPoint
    eta: np.ndarray

    def __post_init__(self):
        eta = np.asarray(self.eta, dtype=complex)
        if eta.ndim != 2 or eta.shape[1] != self.W.n:
            raise InputError(f"eta must be m x {self.W.n}, got shape {eta.shape}")
        object.__setattr__(self, "eta", eta)

    @property
    def n(self) -> int:
        return self.W.n

    @property
    def m(self) -> int:
        return self.eta.shape[0]

    def to_chart(self) -> ChartVector:
        ch = Chart("DJ", self.n, self.m)
        return ChartVector(ch, ch.pack(W=self.W.W, eta=self.eta))


# -- Cayley transforms ------------------------------------------------------

def cayley(w: DiskPoint) -> SiegelPoint:
    """Biholomorphism of the disk onto the half plane: i(I+W)(I-W)^(-1)."""
    n = w.n
    eye = np.eye(n)
    a = eye - w.W
    if np.linalg.cond(a) > 1e12:
        raise DomainError("I - W is singular: W lies on the disk boundary")
    omega = 1j * (eye + w.W) @ np.linalg.inv(a)
    return SiegelPoint.from_omega(symmetrize(omega, dtype=complex, rtol=1e-9))


def cayley_inv(p: SiegelPoint) -> DiskPoint:
    """Inverse transform: (Omega - iI)(Omega + iI)^(-1)."""
    eye = np.eye(p.n)
    om = p.omega
    w = (om - 1j * eye) @ np.linalg.inv(om + 1j * eye)
    return DiskPoint(symmetrize(w, dtype=complex, rtol=1e-9))


def partial_cayley(p: DiskJacobiPoint) -> JacobiPoint:
    """(W, eta) -> (i(I+W)(I-W)^(-1), 2i eta (I-W)^(-1))."""
    eye = np.eye(p.n)
    a = eye - p.W.W
    if np.linalg.cond(a) > 1e12:
        raise DomainError("I - W is singular: W lies on the disk boundary")
    ainv = np.linalg.inv(a)
    omega = 1j * (eye + p.W.W) @ ainv
    z = 2j * p.eta @ ainv
    return JacobiPoint(SiegelPoint.from_omega(symmetrize(omega, dtype=complex, rtol=1e-9)), z)


def partial_cayley_inv(q: JacobiPoint) -> DiskJacobiPoint:
    """(Omega, Z) -> ((Omega-iI)(Omega+iI)^(-1), Z (Omega+iI)^(-1))."""
    eye = np.eye(q.n)
    om = q.omega.omega
    binv = np.linalg.inv(om + 1j * eye)
    w = (om - 1j * eye) @ binv
    eta = q.Z @ binv
    return DiskJacobiPoint(DiskPoint(symmetrize(w, dtype=complex, rtol=1e-9)), eta)


# -- random interior samplers ------------------------------------------------

def random_siegel(n: int, rng: np.random.Generator, spread: float = 0.5) -> SiegelPoint:
    """Random interior point with Y bounded well away from the cone boundary."""
    x = rng.uniform(-spread, spread, (n, n))
    x = (x + x.T) / 2
    a = rng.uniform(-spread, spread, (n, n))
    y = a @ a.T + (0.5 + rng.uniform(0.0, 1.0)) * np.eye(n)
    return SiegelPoint(x, y)


def random_jacobi(
    n: int, m: int, rng: np.random.Generator, spread: float = 0.5
) -> JacobiPoint:
    z = rng.uniform(-spread, spread, (m, n)) + 1j * rng.uniform(-spread, spread, (m, n))
    return JacobiPoint(random_siegel(n, rng, spread), z)


def random_disk(n: int, rng: np.random.Generator) -> DiskPoint:
    return cayley_inv(random_siegel(n, rng))


def random_disk_jacobi(n: int, m: int, rng: np.random.Generator) -> DiskJacobiPoint:
    return partial_cayley_inv(random_jacobi(n, m, rng))


def point_from_chart(cv: ChartVector):
    """Rebuild the typed point behind a chart vector (H/HJ/D/DJ charts)."""
    b = cv.unpack()
    kind = cv.chart.kind
    if kind == "H":
        return SiegelPoint(b["X"], b["Y"])
    if kind == "HJ":
        return JacobiPoint(SiegelPoint(b["X"], b["Y"]), b["U"] + 1j * b["V"])
    if kind == "D":
        return DiskPoint(b["W"])
    if kind == "DJ":
        return DiskJacobiPoint(DiskPoint(b["W"]), b["eta"])
    raise InputError(f"chart {kind} does not correspond to a typed point")
