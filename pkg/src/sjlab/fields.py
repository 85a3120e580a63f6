"""Scalar fields on charts: generic wrappers, a polynomial-exponential
algebra with exact derivatives of every order, and the eigenfunction
catalog on the (1,1) half-plane chart.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .charts import Chart
from .errors import InputError


@dataclass
class ScalarField:
    """Evaluation contract coords -> complex, with an optional exact hook.

    exact(alpha, coords) may return None to decline a multi-index, in which
    case the derivative engine falls back to finite differences.
    """

    chart: Chart
    fn: Callable[[np.ndarray], complex]
    exact: Callable[[tuple, np.ndarray], complex | None] | None = None
    smooth_order: int = 3


# -- polynomial-exponential term algebra --------------------------------------
#
# A term is coeff * prod_i x_i^powers[i] * exp(sum_i lin[i] * x_i) with complex
# coeff, powers and linear coefficients.  Non-integer powers require the
# corresponding coordinate to stay positive (true for the y-block coordinates
# used by the catalog).

@dataclass(frozen=True)
class Term:
    coeff: complex
    powers: tuple[tuple[int, complex], ...] = ()
    lin: tuple[tuple[int, complex], ...] = ()

    def diff(self, i: int) -> list["Term"]:
        out = []
        pw = dict(self.powers)
        if i in pw and pw[i] != 0:
            p = pw[i]
            npw = dict(pw)
            if p == 1:
                del npw[i]
            else:
                npw[i] = p - 1
            out.append(Term(self.coeff * p, tuple(sorted(npw.items())), self.lin))
        ln = dict(self.lin)
        if i in ln and ln[i] != 0:
            out.append(Term(self.coeff * ln[i], self.powers, self.lin))
        return out

    def eval(self, coords: np.ndarray) -> complex:
        val = self.coeff
        for i, p in self.powers:
            x = coords[i]
            if p == int(p.real) and p.imag == 0:
                val *= x ** int(p.real)
            else:
                if x <= 0:
                    raise InputError(
                        f"non-integer power of coordinate {i} requires it positive"
                    )
                val *= np.exp(p * np.log(x))
        if self.lin:
            val *= np.exp(sum(a * coords[i] for i, a in self.lin))
        return complex(val)


class PolyExpField(ScalarField):
    """Field given by a finite sum of polynomial-exponential terms."""

    def __init__(self, chart: Chart, terms: list[Term], smooth_order: int = 99):
        self.terms = list(terms)
        self._dcache: dict[tuple, list[Term]] = {(0,) * chart.dim: self.terms}
        super().__init__(chart, self._eval, self._exact, smooth_order)

    def _eval(self, coords):
        return sum(t.eval(coords) for t in self.terms)

    def _differentiated(self, alpha: tuple) -> list[Term]:
        hit = self._dcache.get(alpha)
        if hit is not None:
            return hit
        # peel one derivative off the first active coordinate
        i = next(k for k, a in enumerate(alpha) if a > 0)
        prev = list(alpha)
        prev[i] -= 1
        parents = self._differentiated(tuple(prev))
        terms = [s for t in parents for s in t.diff(i)]
        self._dcache[alpha] = terms
        return terms

    def _exact(self, alpha, coords):
        return sum(t.eval(coords) for t in self._differentiated(tuple(alpha)))


def _name_to_index(chart: Chart) -> dict[str, int]:
    return {name: i for i, name in enumerate(chart.coord_names())}


def poly_exp(chart: Chart, spec: list[dict]) -> PolyExpField:
    """Build a PolyExpField from term dicts keyed by coordinate names.

    Each dict: {"coeff": z, "powers": {"y00": p, ...}, "lin": {"x00": a, ...}}.
    """
    idx = _name_to_index(chart)
    terms = []
    for t in spec:
        powers = tuple(
            sorted((idx[k], complex(v)) for k, v in t.get("powers", {}).items())
        )
        lin = tuple(sorted((idx[k], complex(v)) for k, v in t.get("lin", {}).items()))
        terms.append(Term(complex(t.get("coeff", 1.0)), powers, lin))
    return PolyExpField(chart, terms)


def exp_linear(chart: Chart, coeffs: dict[str, complex]) -> PolyExpField:
    """exp(sum a_i x_i) over named chart coordinates."""
    return poly_exp(chart, [{"coeff": 1.0, "lin": coeffs}])


def monomial(chart: Chart, powers: dict[str, complex], coeff: complex = 1.0) -> PolyExpField:
    return poly_exp(chart, [{"coeff": coeff, "powers": powers}])


# -- generic analytic test fields ---------------------------------------------

def test_field_library(chart: Chart, rng: np.random.Generator, count: int = 10):
    """Smooth poly-exponential fields with exact derivatives, for FD checks
    and operator-invariance sampling."""
    names = chart.coord_names()
    fields = []
    for _ in range(count):
        nterms = int(rng.integers(1, 3))
        spec = []
        for _ in range(nterms):
            powers = {}
            for name in rng.choice(names, size=min(2, len(names)), replace=False):
                if rng.uniform() < 0.5:
                    powers[name] = int(rng.integers(1, 3))
            lin = {}
            for name in rng.choice(names, size=min(3, len(names)), replace=False):
                lin[name] = round(float(rng.uniform(-1.0, 1.0)), 3)
            spec.append({"coeff": round(float(rng.uniform(0.2, 1.0)), 3),
                         "powers": powers, "lin": lin})
        fields.append(poly_exp(chart, spec))
    return fields


# -- eigenfunction catalog on the (1,1) chart ---------------------------------

H11 = Chart("HJ", 1, 1)


@dataclass(frozen=True)
class EigenEntry:
    """A parameterized eigenfunction family with its eigenvalue map."""

    key: str
    description: str
    build: Callable[..., ScalarField]
    eigenvalue: Callable[..., complex]


def _mono11(powers: dict[str, complex]) -> PolyExpField:
    return monomial(H11, powers)


class KBesselRadialField(ScalarField):
    """y^(1/2) K_nu(c y) e^(i a0 x) on the (1,1) half-plane chart.

    Exact derivatives in x (any order) and y (order <= 2) via the standard
    K-Bessel neighbor recurrences; u, v derivatives vanish.  The K evaluator
    is injected so the quadrature implementation remains the single source.
    """

    def __init__(self, s: complex, a: float, kfun: Callable[[complex, float], complex]):
        if a == 0:
            raise InputError("the Fourier parameter a must be nonzero")
        self.s = complex(s)
        self.a = float(a)
        self.nu = complex(s) - 0.5
        self.c = 2 * np.pi * abs(a)
        self._k = kfun
        super().__init__(H11, self._eval, self._exact, smooth_order=4)

    def _radial(self, y: float, dy: int) -> complex:
        k = self._k
        nu, c = self.nu, self.c
        z = c * y
        ry = np.sqrt(y)
        if dy == 0:
            return ry * k(nu, z)
        k0 = k(nu, z)
        k1 = -(k(nu - 1, z) + k(nu + 1, z)) / 2          # K_nu'
        if dy == 1:
            return 0.5 / ry * k0 + ry * c * k1
        k2 = (k(nu - 2, z) + 2 * k0 + k(nu + 2, z)) / 4  # K_nu''
        if dy == 2:
            return (-0.25 * y ** -1.5) * k0 + (1.0 / ry) * c * k1 + ry * c * c * k2
        return None

    def _eval(self, coords):
        x, y = coords[0], coords[1]
        return self._radial(y, 0) * np.exp(2j * np.pi * self.a * x)

    def _exact(self, alpha, coords):
        ax, ay, au, av = alpha
        if au or av:
            return 0.0
        if ay > 2:
            return None
        x, y = coords[0], coords[1]
        rad = self._radial(y, ay)
        if rad is None:
            return None
        return (2j * np.pi * self.a) ** ax * rad * np.exp(2j * np.pi * self.a * x)


def eigen_catalog(kfun) -> list[EigenEntry]:
    """Catalog items (1)-(4); each entry knows its eigenvalue as a function
    of the parameters."""

    def power_field(extra: dict[str, complex]):
        def build(s):
            powers = {"y00": complex(s)}
            powers.update(extra)
            return _mono11(powers)

        return build

    entries = [
        EigenEntry(
            "item1_whittaker",
            "y^(1/2) K_(s-1/2)(2 pi |a| y) e^(2 pi i a x)",
            lambda s, a=1.0: KBesselRadialField(s, a, kfun),
            lambda s, a=1.0: s * (s - 1),
        ),
        EigenEntry("item2_ys", "y^s", power_field({}), lambda s: s * (s - 1)),
        EigenEntry("item2_ysx", "y^s x", power_field({"x00": 1}), lambda s: s * (s - 1)),
        EigenEntry("item2_ysu", "y^s u", power_field({"u00": 1}), lambda s: s * (s - 1)),
        EigenEntry("item3_ysv", "y^s v", power_field({"v00": 1}), lambda s: s * (s + 1)),
        EigenEntry("item3_ysuv", "y^s uv", power_field({"u00": 1, "v00": 1}), lambda s: s * (s + 1)),
        EigenEntry("item3_ysxv", "y^s xv", power_field({"x00": 1, "v00": 1}), lambda s: s * (s + 1)),
    ]
    for name in ("x00", "y00", "u00", "v00"):
        entries.append(
            EigenEntry(
                f"item4_{name[0]}",
                name[0],
                (lambda nm: (lambda: _mono11({nm: 1})))(name),
                lambda: 0.0,
            )
        )
    entries.append(
        EigenEntry("item4_xv", "xv", lambda: _mono11({"x00": 1, "v00": 1}), lambda: 0.0)
    )
    entries.append(
        EigenEntry("item4_uv", "uv", lambda: _mono11({"u00": 1, "v00": 1}), lambda: 0.0)
    )
    return entries


def compose_with_action(outer: ScalarField, action_on_coords, chart: Chart) -> ScalarField:
    """Field q -> outer(action(q)); no exact hook survives composition."""
    return ScalarField(chart, lambda coords: outer.fn(action_on_coords(coords)), None,
                       outer.smooth_order)
