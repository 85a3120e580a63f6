"""Group actions expressed on flat chart coordinates, with Jacobians.

Exact Jacobians are used where the transformation formulas give them in
closed form (half-plane actions are matrix fractional-linear, the cone
action is affine); finite differences cover the disk-model actions.
"""
from __future__ import annotations

import numpy as np

from .charts import Chart, ChartVector
from .errors import InputError
from .geometry import (
    DiskJacobiPoint,
    DiskPoint,
    JacobiPoint,
    SiegelPoint,
    point_from_chart,
)
from .groups import (
    DiskJacobiElement,
    GLnmElement,
    JacobiElement,
    SymplecticMatrix,
    disk_action,
    disk_jacobi_action,
    glnm_action,
    jacobi_action,
    sp_action,
)

FD_JACOBIAN_STEP = 1e-5


def chart_action(chart: Chart, g, coords: np.ndarray) -> np.ndarray:
    """Apply a group element to a point given in chart coordinates."""
    kind = chart.kind
    if kind == "H":
        if not isinstance(g, SymplecticMatrix):
            raise InputError("the half-plane chart expects a symplectic matrix")
        p = point_from_chart(ChartVector(chart, coords))
        q = sp_action(g, p)
        return chart.pack(X=q.X, Y=q.Y)
    if kind == "HJ":
        p = point_from_chart(ChartVector(chart, coords))
        q = jacobi_action(g, p)
        return chart.pack(X=q.omega.X, Y=q.omega.Y, U=q.Z.real, V=q.Z.imag)
    if kind == "D":
        p = point_from_chart(ChartVector(chart, coords))
        q = disk_action(g, p)
        return chart.pack(W=q.W)
    if kind == "DJ":
        p = point_from_chart(ChartVector(chart, coords))
        q = disk_jacobi_action(g, p)
        return chart.pack(W=q.W.W, eta=q.eta)
    if kind == "PR":
        b = chart.unpack(coords)
        y2, v2 = glnm_action(g, b["Y"], b["V"])
        return chart.pack(Y=y2, V=v2)
    if kind == "A":
        lam, mu, omega = g
        b = chart.unpack(coords)
        z2 = (b["U"] + 1j * b["V"]) + lam @ omega + mu
        return chart.pack(U=z2.real, V=z2.imag)
    raise InputError(f"no action wired for chart kind {kind}")


def fd_jacobian(chart: Chart, g, coords: np.ndarray, step: float = FD_JACOBIAN_STEP) -> np.ndarray:
    d = chart.dim
    jac = np.zeros((d, d))
    for a in range(d):
        h = step * (1.0 + abs(coords[a]))
        up = coords.copy()
        dn = coords.copy()
        up[a] += h
        dn[a] -= h
        jac[:, a] = (chart_action(chart, g, up) - chart_action(chart, g, dn)) / (2 * h)
    return jac


def _siegel_differential(g: SymplecticMatrix, omega: np.ndarray, domega: np.ndarray) -> np.ndarray:
    a, b, c, d = g.blocks()
    deninv = np.linalg.inv(c @ omega + d)
    return deninv.T @ domega @ deninv


def _jacobi_differential(
    g: JacobiElement, omega: np.ndarray, z: np.ndarray, domega: np.ndarray, dz: np.ndarray
):
    a, b, c, d = g.M.blocks()
    deninv = np.linalg.inv(c @ omega + d)
    dom2 = deninv.T @ domega @ deninv
    coeff = g.h.lam - (z + g.h.lam @ omega + g.h.mu) @ deninv @ c
    dz2 = dz @ deninv + coeff @ domega @ deninv
    return dom2, dz2


def exact_jacobian(chart: Chart, g, coords: np.ndarray) -> np.ndarray | None:
    """Closed-form Jacobian when available, else None."""
    kind = chart.kind
    d = chart.dim
    if kind == "H":
        omega = point_from_chart(ChartVector(chart, coords)).omega
        jac = np.zeros((d, d))
        for a in range(d):
            e = np.zeros(d)
            e[a] = 1.0
            t = chart.unpack(e)
            dom = t["X"] + 1j * t["Y"]
            dom2 = _siegel_differential(g, omega, dom)
            jac[:, a] = chart.pack(X=dom2.real, Y=dom2.imag)
        return jac
    if kind == "HJ":
        p = point_from_chart(ChartVector(chart, coords))
        omega, z = p.omega.omega, p.Z
        jac = np.zeros((d, d))
        for a in range(d):
            e = np.zeros(d)
            e[a] = 1.0
            t = chart.unpack(e)
            dom = t["X"] + 1j * t["Y"]
            dz = t["U"] + 1j * t["V"]
            dom2, dz2 = _jacobi_differential(g, omega, z, dom, dz)
            jac[:, a] = chart.pack(X=dom2.real, Y=dom2.imag, U=dz2.real, V=dz2.imag)
        return jac
    if kind == "A":
        # Lattice translations leave the coordinates' differentials fixed.
        return np.eye(d)
    if kind == "PR":
        gl: GLnmElement = g
        jac = np.zeros((d, d))
        for a in range(d):
            e = np.zeros(d)
            e[a] = 1.0
            t = chart.unpack(e)
            dy2 = gl.A @ t["Y"] @ gl.A.T
            dv2 = (t["V"] + gl.h.lam @ t["Y"]) @ gl.A.T
            jac[:, a] = chart.pack(Y=dy2, V=dv2)
        return jac
    return None


def action_jacobian(chart: Chart, g, coords: np.ndarray) -> np.ndarray:
    jac = exact_jacobian(chart, g, coords)
    return jac if jac is not None else fd_jacobian(chart, g, coords)
