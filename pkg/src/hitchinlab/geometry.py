"""Metric, almost complex structure, and symplectic form on configuration space.

Two equivalent metrics are implemented exactly as displayed:

  g(X, Y)  = -Tr int(alpha ^ *1 beta) - 2 Im Tr int(gamma10 ^ *2 delta10^tr)
  g1(X, Y) =  i Tr int(alpha01* ^ beta01 + beta01* ^ alpha01)
            + i Tr int(gamma10 ^ delta10* + delta10 ^ gamma10*)

(the second is the symmetric polarization of the quadratic form given on the
diagonal).  The symplectic form is Omega(X, Y) = g(X, I Y) where I acts as *1
on connection deformations and multiplication by i on Higgs deformations; it
is always cross-checked against the simplified expression
Tr int(alpha ^ beta) - Tr int(gamma ^ delta) over the full real 1-forms.

All pairings are real; the imaginary residue of each evaluation is tracked as
a realness defect and must stay below REALNESS_TOL * (1 + |value|).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .configuration import TangentVector
from .errors import ConsistencyError, DomainError
from .fields import conj_transpose_form, trace_integrate, transpose_form
from .lattice import hodge1, hodge2, wedge

REALNESS_TOL = 1e-10
OMEGA_CROSS_TOL = 1e-10


@dataclass(frozen=True)
class PairingValue:
    """Real value of a pairing together with its imaginary-part residue."""

    value: float
    realness_defect: float

    def __float__(self) -> float:
        return self.value


def _as_real(z: complex, what: str) -> PairingValue:
    value = float(np.real(z))
    defect = abs(float(np.imag(z)))
    if defect > REALNESS_TOL * (1.0 + abs(value)):
        raise ConsistencyError(f"{what} is not real: value {value!r}, Im {defect:.3e}")
    return PairingValue(value, defect)


def _check_pair(x: TangentVector, y: TangentVector) -> None:
    if x.grid != y.grid or x.rank != y.rank:
        raise DomainError("tangent vectors live on different grids or ranks")


def metric_g_detail(x: TangentVector, y: TangentVector) -> PairingValue:
    """Configuration-space metric, evaluated through the displayed pairing."""
    _check_pair(x, y)
    term1 = trace_integrate(wedge(x.alpha_pair, hodge1(y.alpha_pair)))
    pv1 = _as_real(-term1, "metric connection term")
    term2 = trace_integrate(wedge(x.gamma10, hodge2(transpose_form(y.gamma10))))
    value = pv1.value - 2.0 * float(np.imag(term2))
    return PairingValue(value, pv1.realness_defect)


def metric_g(x: TangentVector, y: TangentVector) -> float:
    return metric_g_detail(x, y).value


def metric_hitchin_detail(x: TangentVector, y: TangentVector) -> PairingValue:
    """The equivalent metric written through (0,1)/(1,0) components alone."""
    _check_pair(x, y)
    t_conn = trace_integrate(
        wedge(conj_transpose_form(x.alpha01), y.alpha01)
    ) + trace_integrate(wedge(conj_transpose_form(y.alpha01), x.alpha01))
    t_higgs = trace_integrate(
        wedge(x.gamma10, conj_transpose_form(y.gamma10))
    ) + trace_integrate(wedge(y.gamma10, conj_transpose_form(x.gamma10)))
    return _as_real(1j * (t_conn + t_higgs), "polarized metric")


def metric_hitchin(x: TangentVector, y: TangentVector) -> float:
    return metric_hitchin_detail(x, y).value


def complex_structure(x: TangentVector) -> TangentVector:
    """I X: alpha01 -> i alpha01 (equivalently alpha -> *1 alpha), gamma10 -> i gamma10."""
    return TangentVector(x.alpha01 * 1j, x.gamma10 * 1j)


def omega_two_paths(x: TangentVector, y: TangentVector) -> tuple[float, float]:
    """Symplectic form evaluated both ways: (g(X, I Y), simplified wedge form)."""
    _check_pair(x, y)
    a = metric_g(x, complex_structure(y))
    t1 = trace_integrate(wedge(x.alpha_pair, y.alpha_pair))
    t2 = trace_integrate(wedge(x.gamma_pair, y.gamma_pair))
    b = _as_real(t1 - t2, "simplified symplectic pairing").value
    return a, b


def omega(x: TangentVector, y: TangentVector) -> float:
    """Omega(X, Y) = g(X, I Y); cross-asserted against the simplified form."""
    a, b = omega_two_paths(x, y)
    if abs(a - b) > OMEGA_CROSS_TOL * (1.0 + abs(a)):
        raise ConsistencyError(
            f"symplectic form paths disagree: {a!r} vs {b!r} (sign/convention bug)"
        )
    return a


def tangent_norm(x: TangentVector) -> float:
    """Metric norm sqrt(g(X, X))."""
    return float(np.sqrt(max(metric_g(x, x), 0.0)))
