"""Real coordinate charts for the model spaces.

Every Gram matrix, Jacobian and differential operator refers to one fixed
flat ordering per chart:

    H   (upper half plane, dim n(n+1)):        x upper-triangle row-wise, then y.
    HJ  (half plane x C^(m,n), + 2mn):         x ut, y ut, U row-major, V row-major.
    D   (unit disk, dim n(n+1)):               Re W ut, Im W ut.
    DJ  (disk x C^(m,n), + 2mn):               Re W ut, Im W ut, Re eta, Im eta.
    PR  (cone P_n x R^(m,n), n(n+1)/2 + mn):   y ut, V row-major.
    A   (torus coordinates, 2mn):              U row-major, V row-major.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

CHART_KINDS = ("H", "HJ", "D", "DJ", "PR", "A")


def ut_indices(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def sym_to_vec(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    return np.array([m[i, j] for i, j in ut_indices(n)])


def vec_to_sym(vals, n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=np.asarray(vals).dtype)
    for (i, j), v in zip(ut_indices(n), vals):
        out[i, j] = v
        out[j, i] = v
    return out


@dataclass(frozen=True)
class Chart:
    kind: str
    n: int
    m: int = 0

    def __post_init__(self):
        if self.kind not in CHART_KINDS:
            raise InputError(f"unknown chart kind {self.kind!r}")
        if self.n < 1 or self.m < 0:
            raise InputError(f"bad chart dimensions n={self.n}, m={self.m}")

    @property
    def sdim(self) -> int:
        """Number of independent entries of a symmetric n x n block."""
        return self.n * (self.n + 1) // 2

    @property
    def dim(self) -> int:
        s, mn = self.sdim, self.m * self.n
        return {
            "H": 2 * s,
            "HJ": 2 * s + 2 * mn,
            "D": 2 * s,
            "DJ": 2 * s + 2 * mn,
            "PR": s + mn,
            "A": 2 * mn,
        }[self.kind]

    def coord_names(self) -> list[str]:
        ut = [f"{i}{j}" for i, j in ut_indices(self.n)]
        rm = [f"{k}{l}" for k in range(self.m) for l in range(self.n)]
        blocks = {
            "H": [("x", ut), ("y", ut)],
            "HJ": [("x", ut), ("y", ut), ("u", rm), ("v", rm)],
            "D": [("wr", ut), ("wi", ut)],
            "DJ": [("wr", ut), ("wi", ut), ("er", rm), ("ei", rm)],
            "PR": [("y", ut), ("v", rm)],
            "A": [("u", rm), ("v", rm)],
        }[self.kind]
        return [f"{tag}{idx}" for tag, idxs in blocks for idx in idxs]

    # -- pack/unpack between flat coordinates and matrix blocks ------------

    def unpack(self, coords: np.ndarray) -> dict:
        coords = np.asarray(coords, dtype=float)
        if coords.shape != (self.dim,):
            raise InputError(
                f"chart {self.kind}({self.n},{self.m}) expects {self.dim} "
                f"coordinates, got shape {coords.shape}"
            )
        n, m, s = self.n, self.m, self.sdim
        mn = m * n
        if self.kind == "H":
            return {"X": vec_to_sym(coords[:s], n), "Y": vec_to_sym(coords[s:], n)}
        if self.kind == "HJ":
            x, y = coords[:s], coords[s : 2 * s]
            u = coords[2 * s : 2 * s + mn].reshape(m, n)
            v = coords[2 * s + mn :].reshape(m, n)
            return {"X": vec_to_sym(x, n), "Y": vec_to_sym(y, n), "U": u, "V": v}
        if self.kind == "D":
            return {"W": vec_to_sym(coords[:s], n) + 1j * vec_to_sym(coords[s:], n)}
        if self.kind == "DJ":
            w = vec_to_sym(coords[:s], n) + 1j * vec_to_sym(coords[s : 2 * s], n)
            eta = (
                coords[2 * s : 2 * s + mn].reshape(m, n)
                + 1j * coords[2 * s + mn :].reshape(m, n)
            )
            return {"W": w, "eta": eta}
        if self.kind == "PR":
            return {"Y": vec_to_sym(coords[:s], n), "V": coords[s:].reshape(m, n)}
        # "A"
        return {"U": coords[:mn].reshape(m, n), "V": coords[mn:].reshape(m, n)}

    def pack(self, **blocks) -> np.ndarray:
        if self.kind == "H":
            return np.concatenate([sym_to_vec(blocks["X"]), sym_to_vec(blocks["Y"])])
        if self.kind == "HJ":
            return np.concatenate(
                [
                    sym_to_vec(blocks["X"]),
                    sym_to_vec(blocks["Y"]),
                    blocks["U"].ravel(),
                    blocks["V"].ravel(),
                ]
            )
        if self.kind == "D":
            w = blocks["W"]
            return np.concatenate([sym_to_vec(w.real), sym_to_vec(w.imag)])
        if self.kind == "DJ":
            w, eta = blocks["W"], blocks["eta"]
            return np.concatenate(
                [
                    sym_to_vec(w.real),
                    sym_to_vec(w.imag),
                    eta.real.ravel(),
                    eta.imag.ravel(),
                ]
            )
        if self.kind == "PR":
            return np.concatenate([sym_to_vec(blocks["Y"]), blocks["V"].ravel()])
        return np.concatenate([blocks["U"].ravel(), blocks["V"].ravel()])

    def domain_margin(self, coords: np.ndarray) -> float:
        """Least eigenvalue of the defining positivity condition (inf if none)."""
        b = self.unpack(coords)
        if self.kind in ("H", "HJ", "PR"):
            return float(np.linalg.eigvalsh(b["Y"]).min())
        if self.kind in ("D", "DJ"):
            w = b["W"]
            h = np.eye(self.n) - w.conj() @ w
            return float(np.linalg.eigvalsh((h + h.conj().T) / 2).min())
        return np.inf

    def in_domain(self, coords: np.ndarray, margin: float = 0.0) -> bool:
        return self.domain_margin(coords) > margin


@dataclass(frozen=True)
class ChartVector:
    """A point expressed in a fixed chart's flat real coordinates."""

    chart: Chart
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.shape != (self.chart.dim,):
            raise InputError(
                f"coordinate vector of length {c.shape} does not match "
                f"chart dimension {self.chart.dim}"
            )
        object.__setattr__(self, "coords", c)

    def unpack(self) -> dict:
        return self.chart.unpack(self.coords)
