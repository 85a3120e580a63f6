"""Symplectic, Heisenberg, Jacobi, disk-model and GL_{n,m} groups.

Element validation, composition, inversion, the embedding into the bigger
symplectic group, the conjugation onto the disk model, and the actions on
all four model spaces.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import InputError, NumericError
from .geometry import DiskJacobiPoint, DiskPoint, JacobiPoint, SiegelPoint
from .matrixcore import check_condition, symmetrize

SP_RTOL = 1e-10
HEIS_RTOL = 1e-10


def standard_j(n: int) -> np.ndarray:
    """Block matrix [[0, I], [-I, 0]] defining the alternating form."""
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


def symplectic_residual(mat: np.ndarray) -> float:
    n = mat.shape[0] // 2
    j = standard_j(n)
    return float(np.abs(mat.T @ j @ mat - j).max())


@dataclass(frozen=True)
class SymplecticMatrix:
    """2n x 2n real matrix M with M^T J M = J."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise InputError(f"expected a 2n x 2n matrix, got shape {m.shape}")
        res = symplectic_residual(m)
        if res > SP_RTOL * max(1.0, float(np.abs(m).max()) ** 2):
            raise InputError(f"matrix is not symplectic (residual {res:.3e})")
        object.__setattr__(self, "mat", m)

    @property
    def n(self) -> int:
        return self.mat.shape[0] // 2

    def blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        n = self.n
        m = self.mat
        return m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:]

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return SymplecticMatrix(self.mat @ other.mat)

    def inv(self) -> "SymplecticMatrix":
        # J^-1 M^T J inverts a symplectic matrix exactly.
        n = self.n
        j = standard_j(n)
        return SymplecticMatrix(-j @ self.mat.T @ j)


@dataclass(frozen=True)
class HeisenbergElement:
    """Triple (lambda, mu; kappa) with kappa + mu lambda^T symmetric."""

    lam: np.ndarray
    mu: np.ndarray
    kappa: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        mu = np.asarray(self.mu, dtype=float)
        kappa = np.asarray(self.kappa, dtype=float)
        if lam.ndim != 2 or mu.shape != lam.shape:
            raise InputError("lambda and mu must be m x n matrices of equal shape")
        m = lam.shape[0]
        if kappa.shape != (m, m):
            raise InputError(f"kappa must be {m} x {m}, got {kappa.shape}")
        s = kappa + mu @ lam.T
        scale = max(1.0, float(np.abs(s).max()))
        if float(np.abs(s - s.T).max()) > HEIS_RTOL * scale:
            raise InputError("kappa + mu lambda^T is not symmetric")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "kappa", kappa)

    @property
    def m(self) -> int:
        return self.lam.shape[0]

    @property
    def n(self) -> int:
        return self.lam.shape[1]


@dataclass(frozen=True)
class JacobiElement:
    """Pair (M, (lambda, mu; kappa)) in the semidirect product."""

    M: SymplecticMatrix
    h: HeisenbergElement

    def __post_init__(self):
        if self.h.n != self.M.n:
            raise InputError(
                f"Heisenberg part has n={self.h.n} but symplectic part n={self.M.n}"
            )

    @property
    def n(self) -> int:
        return self.M.n

    @property
    def m(self) -> int:
        return self.h.m


def identity_jacobi(n: int, m: int) -> JacobiElement:
    return JacobiElement(
        SymplecticMatrix(np.eye(2 * n)),
        HeisenbergElement(np.zeros((m, n)), np.zeros((m, n)), np.zeros((m, m))),
    )


def heisenberg_right_action(lam, mu, M: SymplecticMatrix):
    """(lambda, mu) M as a row block acting on the right."""
    a, b, c, d = M.blocks()
    return lam @ a + mu @ c, lam @ b + mu @ d


def pairing(lam, mu, lam2, mu2) -> np.ndarray:
    """lambda mu'^T - mu lambda'^T, the alternating m x m pairing."""
    return lam @ mu2.T - mu @ lam2.T


def jacobi_mul(g: JacobiElement, g2: JacobiElement) -> JacobiElement:
    """Semidirect-product law with the twisted Heisenberg addition."""
    if (g.n, g.m) != (g2.n, g2.m):
        raise InputError("dimension mismatch in group multiplication")
    lt, mt = heisenberg_right_action(g.h.lam, g.h.mu, g2.M)
    kappa = g.h.kappa + g2.h.kappa + pairing(lt, mt, g2.h.lam, g2.h.mu)
    return JacobiElement(
        g.M @ g2.M, HeisenbergElement(lt + g2.h.lam, mt + g2.h.mu, kappa)
    )


def jacobi_inv(g: JacobiElement) -> JacobiElement:
    minv = g.M.inv()
    lt, mt = heisenberg_right_action(g.h.lam, g.h.mu, minv)
    kappa = -g.h.kappa + pairing(lt, mt, lt, mt)
    return JacobiElement(minv, HeisenbergElement(-lt, -mt, kappa))


# -- actions -----------------------------------------------------------------

def sp_action(M: SymplecticMatrix, p: SiegelPoint) -> SiegelPoint:
    """(A Omega + B)(C Omega + D)^(-1)."""
    a, b, c, d = M.blocks()
    om = p.omega
    den = check_condition(c @ om + d, "C Omega + D")
    out = (a @ om + b) @ np.linalg.inv(den)
    return SiegelPoint.from_omega(symmetrize(out, dtype=complex, rtol=1e-9))


def im_pullback(M: SymplecticMatrix, p: SiegelPoint) -> np.ndarray:
    """Imaginary part of the image, via (C conj(Omega) + D)^(-T) Y (C Omega + D)^(-1).

    Cross-checked against the action itself; disagreement signals corrupted
    input and raises.
    """
    a, b, c, d = M.blocks()
    om = p.omega
    den = check_condition(c @ om + d, "C Omega + D")
    denbar = c @ om.conj() + d
    out = np.linalg.inv(denbar).T @ p.Y @ np.linalg.inv(den)
    direct = sp_action(M, p).Y
    if np.abs(out.real - direct).max() > 1e-10 * max(1.0, np.abs(direct).max()):
        raise NumericError("imaginary-part pullback disagrees with the action")
    return symmetrize(out.real, rtol=1e-8)


def jacobi_action(g: JacobiElement, p: JacobiPoint) -> JacobiPoint:
    """(M . Omega, (Z + lambda Omega + mu)(C Omega + D)^(-1))."""
    if (g.n, g.m) != (p.n, p.m):
        raise InputError("element and point dimensions do not agree")
    a, b, c, d = g.M.blocks()
    om = p.omega.omega
    den = check_condition(c @ om + d, "C Omega + D")
    deninv = np.linalg.inv(den)
    om2 = (a @ om + b) @ deninv
    z2 = (p.Z + g.h.lam @ om + g.h.mu) @ deninv
    return JacobiPoint(
        SiegelPoint.from_omega(symmetrize(om2, dtype=complex, rtol=1e-9)), z2
    )


# -- embedding into Sp(m+n, R) ----------------------------------------------

def embed_sp(g: JacobiElement) -> SymplecticMatrix:
    """Embed (M, (lambda, mu; kappa)) as a 2(m+n) x 2(m+n) symplectic matrix.

    Block rows/columns are ordered (n, m, n, m); the alternating form is the
    standard one of degree m+n in the same interleaved splitting.
    """
    n, m = g.n, g.m
    a, b, c, d = g.M.blocks()
    lam, mu, kappa = g.h.lam, g.h.mu, g.h.kappa
    out = np.zeros((2 * (n + m), 2 * (n + m)))
    r0, r1, r2, r3 = 0, n, n + m, 2 * n + m
    out[r0:r1, r0:r1] = a
    out[r0:r1, r2:r3] = b
    out[r0:r1, r3:] = a @ mu.T - b @ lam.T
    out[r1:r2, r0:r1] = lam
    out[r1:r2, r1:r2] = np.eye(m)
    out[r1:r2, r2:r3] = mu
    out[r1:r2, r3:] = kappa
    out[r2:r3, r0:r1] = c
    out[r2:r3, r2:r3] = d
    out[r2:r3, r3:] = c @ mu.T - d @ lam.T
    out[r3:, r3:] = np.eye(m)
    return SymplecticMatrix(out)


# -- disk model ---------------------------------------------------------------

@dataclass(frozen=True)
class DiskJacobiElement:
    """Element (M*, (xi, conj(xi); i kappa)) of the conjugated Jacobi group.

    M* is stored through its blocks P, Q; kappa is the real matrix such that
    the third Heisenberg slot equals i kappa.  The action on the disk model
    ignores kappa.
    """

    P: np.ndarray
    Q: np.ndarray
    xi: np.ndarray
    kappa: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.P, dtype=complex)
        q = np.asarray(self.Q, dtype=complex)
        xi = np.asarray(self.xi, dtype=complex)
        kappa = np.asarray(self.kappa, dtype=float)
        n = p.shape[0]
        if p.shape != (n, n) or q.shape != (n, n):
            raise InputError("P and Q must be square of equal size")
        if xi.ndim != 2 or xi.shape[1] != n:
            raise InputError(f"xi must be m x {n}")
        m = xi.shape[0]
        if kappa.shape != (m, m):
            raise InputError(f"kappa must be {m} x {m}")
        scale = max(1.0, float(np.abs(p).max()) ** 2)
        r1 = np.abs(p.T @ p.conj() - q.conj().T @ q - np.eye(n)).max()
        r2 = np.abs(p.T @ q.conj() - q.conj().T @ p).max()
        if max(r1, r2) > SP_RTOL * scale:
            raise InputError(
                f"(P, Q) does not satisfy the unitary-symplectic relations "
                f"(residuals {r1:.3e}, {r2:.3e})"
            )
        # Heisenberg constraint of the triple (xi, conj(xi); i kappa).
        s = 1j * kappa + xi.conj() @ xi.T
        if float(np.abs(s - s.T).max()) > HEIS_RTOL * max(1.0, float(np.abs(s).max())):
            raise InputError("i kappa + conj(xi) xi^T is not symmetric")
        object.__setattr__(self, "P", p)
        object.__setattr__(self, "Q", q)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "kappa", kappa)

    @property
    def n(self) -> int:
        return self.P.shape[0]

    @property
    def m(self) -> int:
        return self.xi.shape[0]

    def mstar(self) -> np.ndarray:
        """The 2n x 2n complex matrix [[P, Q], [conj(Q), conj(P)]]."""
        return np.block([[self.P, self.Q], [self.Q.conj(), self.P.conj()]])


def identity_disk_jacobi(n: int, m: int) -> DiskJacobiElement:
    return DiskJacobiElement(
        np.eye(n), np.zeros((n, n)), np.zeros((m, n)), np.zeros((m, m))
    )


def to_disk_group(g: JacobiElement) -> DiskJacobiElement:
    """Conjugate a Jacobi element into the disk-model group.

    P = ((A+D) + i(B-C))/2, Q = ((A-D) - i(B+C))/2, xi = (lambda + i mu)/2,
    and the third Heisenberg slot -i kappa/2 is stored as kappa* = -kappa/2.
    """
    a, b, c, d = g.M.blocks()
    p = ((a + d) + 1j * (b - c)) / 2
    q = ((a - d) - 1j * (b + c)) / 2
    xi = (g.h.lam + 1j * g.h.mu) / 2
    return DiskJacobiElement(p, q, xi, -g.h.kappa / 2)


def disk_jacobi_mul(g: DiskJacobiElement, g2: DiskJacobiElement) -> DiskJacobiElement:
    """Disk-side law: the twisted addition applied to (xi, conj(xi); i kappa).

    Derived by conjugating the half-plane law; the conjugation is a group
    isomorphism, so the same formula holds with complex entries.
    """
    if (g.n, g.m) != (g2.n, g2.m):
        raise InputError("dimension mismatch in group multiplication")
    mstar2 = g2.mstar()
    n = g.n
    row = np.hstack([g.xi, g.xi.conj()]) @ mstar2
    xt, xbt = row[:, :n], row[:, n:]
    # Third slots compose like kappa; the cross term is purely imaginary.
    cross = xt @ g2.xi.conj().T - xbt @ g2.xi.T
    kappa = g.kappa + g2.kappa + cross.imag
    if float(np.abs(cross.real).max()) > 1e-9 * max(1.0, float(np.abs(cross).max())):
        raise NumericError("disk-side Heisenberg cross term is not purely imaginary")
    return DiskJacobiElement(
        g.P @ g2.P + g.Q @ g2.Q.conj(),
        g.P @ g2.Q + g.Q @ g2.P.conj(),
        xt + g2.xi,
        kappa,
    )


def disk_jacobi_action(g: DiskJacobiElement, p: DiskJacobiPoint) -> DiskJacobiPoint:
    """((PW+Q)(conj(Q)W + conj(P))^(-1), (eta + xi W + conj(xi))(...)^(-1))."""
    if (g.n, g.m) != (p.n, p.m):
        raise InputError("element and point dimensions do not agree")
    w = p.W.W
    den = check_condition(g.Q.conj() @ w + g.P.conj(), "conj(Q) W + conj(P)")
    deninv = np.linalg.inv(den)
    w2 = (g.P @ w + g.Q) @ deninv
    eta2 = (p.eta + g.xi @ w + g.xi.conj()) @ deninv
    return DiskJacobiPoint(DiskPoint(symmetrize(w2, dtype=complex, rtol=1e-9)), eta2)


def disk_action(g: DiskJacobiElement, w: DiskPoint) -> DiskPoint:
    """Action of the M* part alone on the disk (the xi component is ignored)."""
    den = check_condition(g.Q.conj() @ w.W + g.P.conj(), "conj(Q) W + conj(P)")
    w2 = (g.P @ w.W + g.Q) @ np.linalg.inv(den)
    return DiskPoint(symmetrize(w2, dtype=complex, rtol=1e-9))


# -- GL_{n,m} ------------------------------------------------------------------

@dataclass(frozen=True)
class GLnmElement:
    """Pair (A, (lambda, mu; kappa)) with A invertible."""

    A: np.ndarray
    h: HeisenbergElement

    def __post_init__(self):
        a = np.asarray(self.A, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InputError("A must be square")
        if abs(np.linalg.det(a)) < 1e-12:
            raise InputError("A is singular")
        if self.h.n != a.shape[0]:
            raise InputError("Heisenberg part does not match A")
        object.__setattr__(self, "A", a)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.h.m


def glnm_mul(g: GLnmElement, g2: GLnmElement) -> GLnmElement:
    """(A, h)(B, h') with lambda B, mu B^(-T) twisting."""
    if (g.n, g.m) != (g2.n, g2.m):
        raise InputError("dimension mismatch in group multiplication")
    binv_t = np.linalg.inv(g2.A).T
    lt = g.h.lam @ g2.A
    mt = g.h.mu @ binv_t
    kappa = g.h.kappa + g2.h.kappa + pairing(lt, mt, g2.h.lam, g2.h.mu)
    return GLnmElement(
        g.A @ g2.A, HeisenbergElement(lt + g2.h.lam, mt + g2.h.mu, kappa)
    )


def glnm_action(g: GLnmElement, y: np.ndarray, v: np.ndarray):
    """(Y, V) -> (A Y A^T, (V + lambda Y + mu) A^T)."""
    y2 = g.A @ y @ g.A.T
    v2 = (v + g.h.lam @ y + g.h.mu) @ g.A.T
    return symmetrize(y2, rtol=1e-9), v2


# -- random element generation -------------------------------------------------

def random_symplectic(n: int, rng: np.random.Generator, scale: float = 0.5) -> SymplecticMatrix:
    """exp of a random element of the symplectic Lie algebra.

    Block form [[A, B], [C, -A^T]] with B, C symmetric guarantees validity
    by construction.
    """
    a = rng.uniform(-scale, scale, (n, n))
    b = rng.uniform(-scale, scale, (n, n))
    c = rng.uniform(-scale, scale, (n, n))
    b = (b + b.T) / 2
    c = (c + c.T) / 2
    x = np.block([[a, b], [c, -a.T]])
    return SymplecticMatrix(expm(x))


def random_heisenberg(n: int, m: int, rng: np.random.Generator, scale: float = 0.5) -> HeisenbergElement:
    lam = rng.uniform(-scale, scale, (m, n))
    mu = rng.uniform(-scale, scale, (m, n))
    s = rng.uniform(-scale, scale, (m, m))
    kappa = (s + s.T) / 2 + pairing(lam, mu, lam, mu) / 2
    return HeisenbergElement(lam, mu, kappa)


def random_jacobi_element(
    n: int, m: int, rng: np.random.Generator, scale: float = 0.5
) -> JacobiElement:
    return JacobiElement(random_symplectic(n, rng, scale), random_heisenberg(n, m, rng, scale))


def random_disk_jacobi_element(
    n: int, m: int, rng: np.random.Generator, scale: float = 0.5
) -> DiskJacobiElement:
    return to_disk_group(random_jacobi_element(n, m, rng, scale))


def random_glnm_element(
    n: int, m: int, rng: np.random.Generator, scale: float = 0.5
) -> GLnmElement:
    a = expm(rng.uniform(-scale, scale, (n, n)))
    if rng.uniform() < 0.5:
        a = a.copy()
        a[0] = -a[0]  # cover the det < 0 component
    return GLnmElement(a, random_heisenberg(n, m, rng, scale))
