"""Invariant metrics as Gram tensors on the fixed charts.

Each catalog metric is realized by a quadratic form q on tangent
increments; the Gram matrix is obtained by polarization over the chart
basis.  The disk-model Jacobi metric is defined as the pullback of the
half-plane metric through the partial Cayley transform; the long printed
expression is evaluated separately as a cross-check.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .actions import action_jacobian, chart_action
from .charts import Chart
from .errors import AccuracyWarning, DomainError, InputError, NumericError
from .geometry import BOUNDARY_MARGIN, SiegelPoint

GRAM_IMAG_TOL = 1e-10
CURVATURE_STEP = 1e-4

METRIC_KINDS = ("SIEGEL", "DISK", "JACOBI", "DISK_JACOBI", "H11", "ABELIAN")


@dataclass(frozen=True)
class MetricId:
    kind: str
    n: int
    m: int = 0
    omega: SiegelPoint | None = None  # fixed base point for ABELIAN

    def __post_init__(self):
        if self.kind not in METRIC_KINDS:
            raise InputError(f"unknown metric {self.kind!r}")
        if self.kind == "H11" and (self.n, self.m) != (1, 1):
            raise InputError("the explicit (1,1) metric requires n = m = 1")
        if self.kind == "ABELIAN" and self.omega is None:
            raise InputError("the torus metric needs a fixed base point")

    @property
    def chart(self) -> Chart:
        kind = {
            "SIEGEL": "H",
            "DISK": "D",
            "JACOBI": "HJ",
            "DISK_JACOBI": "DJ",
            "H11": "HJ",
            "ABELIAN": "A",
        }[self.kind]
        m = self.m if kind in ("HJ", "DJ", "A") else 0
        return Chart(kind, self.n, m)


def siegel(n: int) -> MetricId:
    return MetricId("SIEGEL", n)


def disk(n: int) -> MetricId:
    return MetricId("DISK", n)


def jacobi(n: int, m: int) -> MetricId:
    return MetricId("JACOBI", n, m)


def disk_jacobi(n: int, m: int) -> MetricId:
    return MetricId("DISK_JACOBI", n, m)


def h11() -> MetricId:
    return MetricId("H11", 1, 1)


def abelian(omega: SiegelPoint, m: int) -> MetricId:
    return MetricId("ABELIAN", omega.n, m, omega)


# -- quadratic forms -----------------------------------------------------------

def _q_jacobi_terms(yinv, v, dom, dz):
    """The four half-plane terms evaluated on complex increments."""
    domb = dom.conj()
    dzb = dz.conj()
    a = np.trace(yinv @ dom @ yinv @ domb)
    b = np.trace(yinv @ v.T @ v @ yinv @ dom @ yinv @ domb)
    c = np.trace(yinv @ dz.T @ dzb)
    d = -np.trace(v @ yinv @ dom @ yinv @ dzb.T + v @ yinv @ domb @ yinv @ dz.T)
    return a + b + c + d


def metric_form(mid: MetricId, coords: np.ndarray):
    """Return q(t): the metric's quadratic form on tangent increments at a
    fixed point, with point-dependent matrices precomputed."""
    ch = mid.chart
    blocks = ch.unpack(coords)
    kind = mid.kind

    if kind == "SIEGEL":
        yinv = np.linalg.inv(blocks["Y"])

        def q(t):
            tb = ch.unpack(t)
            dom = tb["X"] + 1j * tb["Y"]
            return np.trace(yinv @ dom @ yinv @ dom.conj())

        return q

    if kind == "JACOBI":
        yinv = np.linalg.inv(blocks["Y"])
        v = blocks["V"]

        def q(t):
            tb = ch.unpack(t)
            dom = tb["X"] + 1j * tb["Y"]
            dz = tb["U"] + 1j * tb["V"]
            return _q_jacobi_terms(yinv, v, dom, dz)

        return q

    if kind == "H11":
        x, y = coords[0], coords[1]
        v = coords[3]

        def q(t):
            dx, dy, du, dv = t
            return (
                (y + v * v) / y**3 * (dx * dx + dy * dy)
                + (du * du + dv * dv) / y
                - 2 * v / y**2 * (dx * du + dy * dv)
            )

        return q

    if kind == "DISK":
        w = blocks["W"]
        eye = np.eye(mid.n)
        ri = np.linalg.inv(eye - w @ w.conj())
        rpi = np.linalg.inv(eye - w.conj() @ w)

        def q(t):
            tb = ch.unpack(t)
            dw = tb["W"]
            return 4 * np.trace(ri @ dw @ rpi @ dw.conj())

        return q

    if kind == "DISK_JACOBI":
        w, eta = blocks["W"], blocks["eta"]
        eye = np.eye(mid.n)
        ainv = np.linalg.inv(eye - w)
        omega = 1j * (eye + w) @ ainv
        z = 2j * eta @ ainv
        yinv = np.linalg.inv(omega.imag)
        v = z.imag

        def q(t):
            tb = ch.unpack(t)
            dw = tb["W"]
            de = tb["eta"]
            dom = 2j * ainv @ dw @ ainv
            dz = 2j * (de + eta @ ainv @ dw) @ ainv
            return _q_jacobi_terms(yinv, v, dom, dz)

        return q

    if kind == "ABELIAN":
        yinv = np.linalg.inv(mid.omega.Y)

        def q(t):
            tb = ch.unpack(t)
            dz = tb["U"] + 1j * tb["V"]
            return np.trace(yinv @ dz.T @ dz.conj())

        return q

    raise InputError(f"unknown metric {kind!r}")


def metric_gram(mid: MetricId, coords: np.ndarray) -> np.ndarray:
    """Gram matrix over the chart basis by polarization of the quadratic form.

    Imaginary residues must cancel below 1e-10 and are then dropped; a
    non-positive-definite result raises, signalling a domain violation or a
    transcription bug.
    """
    ch = mid.chart
    coords = np.asarray(coords, dtype=float)
    q = metric_form(mid, coords)
    d = ch.dim
    gram = np.zeros((d, d))
    basis = np.eye(d)
    for a in range(d):
        for b in range(a, d):
            val = 0.25 * (q(basis[a] + basis[b]) - q(basis[a] - basis[b]))
            val = complex(val)
            if abs(val.imag) > GRAM_IMAG_TOL * max(1.0, abs(val)):
                raise NumericError(
                    f"polarization left an imaginary residue {val.imag:.3e} "
                    f"at entry ({a},{b})"
                )
            gram[a, b] = gram[b, a] = val.real
    least = float(np.linalg.eigvalsh(gram).min())
    if least <= 0:
        raise NumericError(
            f"metric evaluation produced a non-positive Gram matrix "
            f"(least eigenvalue {least:.3e})"
        )
    return gram


def pullback_residual(mid: MetricId, g, coords: np.ndarray) -> float:
    """Relative residual of J^T Gram(g.p) J = Gram(p) for the acting group."""
    ch = mid.chart
    coords = np.asarray(coords, dtype=float)
    jac = action_jacobian(ch, g, coords)
    image = chart_action(ch, g, coords)
    g_here = metric_gram(mid, coords)
    g_there = metric_gram(mid, image)
    resid = jac.T @ g_there @ jac - g_here
    return float(np.abs(resid).max() / np.abs(g_here).max())


# -- volume densities ----------------------------------------------------------

def volume_density(mid: MetricId, coords: np.ndarray) -> float:
    """(det Y)^-(n+m+1) for the half-plane Jacobi metrics, sqrt(det Gram)
    otherwise."""
    if mid.kind in ("JACOBI", "H11"):
        y = mid.chart.unpack(coords)["Y"]
        return float(np.linalg.det(y) ** (-(mid.n + mid.m + 1)))
    return float(np.sqrt(np.linalg.det(metric_gram(mid, coords))))


def volume_invariance_residual(mid: MetricId, g, coords: np.ndarray) -> float:
    ch = mid.chart
    jac = action_jacobian(ch, g, coords)
    image = chart_action(ch, g, coords)
    dens_here = volume_density(mid, coords)
    dens_there = volume_density(mid, image)
    return float(abs(abs(np.linalg.det(jac)) * dens_there - dens_here) / dens_here)


# -- scalar curvature ------------------------------------------------------------

def _curvature_at_step(mid: MetricId, coords: np.ndarray, h: float) -> float:
    d = mid.chart.dim
    cache: dict[tuple, np.ndarray] = {}

    def gram_at(offset: tuple) -> np.ndarray:
        hit = cache.get(offset)
        if hit is None:
            p = coords + h * np.asarray(offset)
            hit = metric_gram(mid, p)
            cache[offset] = hit
        return hit

    zero = (0,) * d
    g0 = gram_at(zero)
    ginv = np.linalg.inv(g0)

    def unit(a, s):
        off = [0] * d
        off[a] = s
        return tuple(off)

    dg = np.zeros((d, d, d))
    for c in range(d):
        dg[c] = (gram_at(unit(c, 1)) - gram_at(unit(c, -1))) / (2 * h)

    ddg = np.zeros((d, d, d, d))
    for c in range(d):
        ddg[c, c] = (gram_at(unit(c, 1)) - 2 * g0 + gram_at(unit(c, -1))) / h**2
        for e in range(c + 1, d):
            pp = [0] * d
            pp[c] = 1
            pp[e] = 1
            pm = [0] * d
            pm[c] = 1
            pm[e] = -1
            val = (
                gram_at(tuple(pp))
                - gram_at(tuple(pm))
                - gram_at(tuple(-x for x in pm))
                + gram_at(tuple(-x for x in pp))
            ) / (4 * h**2)
            ddg[c, e] = val
            ddg[e, c] = val

    # Christoffel symbols of the second kind and their first derivatives.
    gamma_low = 0.5 * (
        np.einsum("jlk->jkl", dg) + np.einsum("kjl->jkl", dg) - np.einsum("ljk->jkl", dg)
    )  # gamma_low[j,k,l] = 1/2 (d_j g_lk + d_k g_jl - d_l g_jk)
    gamma = np.einsum("il,jkl->ijk", ginv, gamma_low)  # Gamma^i_{jk}

    dginv = -np.einsum("ia,cab,bl->cil", ginv, dg, ginv)
    dgamma_low = 0.5 * (
        np.einsum("cjlk->cjkl", ddg)
        + np.einsum("ckjl->cjkl", ddg)
        - np.einsum("cljk->cjkl", ddg)
    )
    dgamma = np.einsum("cil,jkl->cijk", dginv, gamma_low) + np.einsum(
        "il,cjkl->cijk", ginv, dgamma_low
    )  # d_c Gamma^i_{jk}

    riemann = (
        np.einsum("kilj->ijkl", dgamma)
        - np.einsum("likj->ijkl", dgamma)
        + np.einsum("ikm,mlj->ijkl", gamma, gamma)
        - np.einsum("ilm,mkj->ijkl", gamma, gamma)
    )
    ricci = np.einsum("ijil->jl", riemann)
    return float(np.einsum("jl,jl->", ginv, ricci))


def scalar_curvature(mid: MetricId, coords: np.ndarray, step: float = CURVATURE_STEP) -> float:
    """Scalar curvature by the Gram -> Christoffel -> Riemann -> Ricci
    pipeline with Richardson extrapolation; error budget ~1e-3 on the desk
    charts."""
    coords = np.asarray(coords, dtype=float)
    margin = mid.chart.domain_margin(coords)
    if margin < BOUNDARY_MARGIN:
        raise DomainError(
            f"point too close to the boundary for curvature (margin {margin:.2e})"
        )
    if margin < 1e-3:
        warnings.warn(
            "curvature accuracy degrades near the boundary", AccuracyWarning, stacklevel=2
        )
    coarse = _curvature_at_step(mid, coords, step)
    fine = _curvature_at_step(mid, coords, step / 2)
    return (4 * fine - coarse) / 3


# -- printed disk-model expression (validation target only) ---------------------

def disk_jacobi_printed_form(coords: np.ndarray, n: int, m: int):
    """Quadratic form of the printed disk-model metric (all ten terms,
    transcribed literally, including the (I - conj(W))^(-1) factors).

    Returns q(t); used only to report the discrepancy against the pullback
    definition.
    """
    ch = Chart("DJ", n, m)
    b = ch.unpack(coords)
    w, eta = b["W"], b["eta"]
    eye = np.eye(n)
    wb = w.conj()
    etab = eta.conj()
    ri = np.linalg.inv(eye - w @ wb)      # (I - W conj(W))^(-1)
    rpi = np.linalg.inv(eye - wb @ w)     # (I - conj(W) W)^(-1)
    one_minus_wb_inv = np.linalg.inv(eye - wb)
    one_minus_w = eye - w
    one_minus_wb = eye - wb
    one_minus_w_inv = np.linalg.inv(one_minus_w)

    def q(t):
        tb = ch.unpack(t)
        dw = tb["W"]
        de = tb["eta"]
        dwb = dw.conj()
        deb = de.conj()
        total = np.trace(ri @ dw @ rpi @ dwb)
        total += np.trace(ri @ de.T @ deb)
        total += np.trace((eta @ wb - etab) @ ri @ dw @ rpi @ deb.T)
        total += np.trace((etab @ w - eta) @ rpi @ dwb @ ri @ de.T)
        total -= np.trace(ri @ eta.T @ eta @ rpi @ wb @ dw @ rpi @ dwb)
        total -= np.trace(w @ rpi @ etab.T @ etab @ ri @ dw @ rpi @ dwb)
        total += np.trace(ri @ eta.T @ etab @ ri @ dw @ rpi @ dwb)
        total += np.trace(
            one_minus_wb_inv @ etab.T @ eta @ wb @ ri @ dw @ rpi @ dwb
        )
        total += np.trace(
            one_minus_wb_inv
            @ one_minus_w
            @ rpi
            @ etab.T
            @ eta
            @ rpi
            @ one_minus_wb
            @ one_minus_w_inv
            @ dw
            @ rpi
            @ dwb
        )
        total -= np.trace(
            ri
            @ one_minus_w
            @ one_minus_wb_inv
            @ etab.T
            @ eta
            @ one_minus_w_inv
            @ dw
            @ rpi
            @ dwb
        )
        return 4.0 * total

    return q


def disk_printed_discrepancy(coords: np.ndarray, n: int, m: int) -> float:
    """Entrywise max difference between the pullback Gram and the Gram of the
    printed expression, relative to the pullback's max entry."""
    mid = disk_jacobi(n, m)
    ch = mid.chart
    d = ch.dim
    q = disk_jacobi_printed_form(coords, n, m)
    basis = np.eye(d)
    printed = np.zeros((d, d))
    for a in range(d):
        for b in range(a, d):
            val = complex(0.25 * (q(basis[a] + basis[b]) - q(basis[a] - basis[b])))
            printed[a, b] = printed[b, a] = val.real
    pullback = metric_gram(mid, coords)
    return float(np.abs(printed - pullback).max() / np.abs(pullback).max())
