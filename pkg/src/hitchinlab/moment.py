"""Moment map of the gauge action, its Hamiltonians, and the pairing
identities connecting them to the symplectic form.

The moment map mu(A, Phi) = F(A) + [Phi, Phi*] takes skew-Hermitian 2-form
values; pairing it with a gauge algebra field by trace integration gives the
real Hamiltonian H_zeta = h_zeta + f_zeta.  The derivative of each part along
a tangent vector Y equals a wedge pairing against the gauge vector field
(curvature part against X1, Higgs part against X2), exactly on the grid
because the vector field carries the adjoint stencil; summed they give
dH_zeta(Y) = Omega(X_zeta, Y).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .configuration import (
    Configuration,
    TangentVector,
    curvature,
    gauge_vector_field,
    linearized_curvature,
    skew_value_defect,
    translate,
)
from .errors import ConsistencyError, DomainError, IdentityViolationError
from .fields import (
    GaugeAlgebraField,
    conj_transpose_form,
    form_commutator,
    trace_integrate,
)
from .geometry import complex_structure, metric_g, omega
from .lattice import D2, LatticeForm, wedge
from .reports import IdentityReport

SKEW_TOL = 1e-10
REAL_TOL = 1e-10
PAIRING_TOL = 1e-10


@dataclass(frozen=True)
class MomentValue:
    """Moment-map value: a skew-Hermitian-valued 2-form and its defect."""

    form: LatticeForm
    skew_defect: float

    def __post_init__(self):
        if self.form.degree != D2:
            raise DomainError("moment value must be a 2-form")


@dataclass(frozen=True)
class HamiltonianValue:
    """H_zeta with its curvature and Higgs parts, all asserted real."""

    total: float
    curvature_part: float
    higgs_part: float
    realness_defect: float

    def __float__(self) -> float:
        return self.total


@dataclass(frozen=True)
class IdentityPair:
    """Both evaluations of a pairing identity; `value` is the left one."""

    left: float
    right: float

    @property
    def value(self) -> float:
        return self.left

    @property
    def defect(self) -> float:
        return abs(self.left - self.right)

    def __float__(self) -> float:
        return self.left


def moment(c: Configuration) -> MomentValue:
    """mu = F(A) + [Phi, Phi*]; vanishes exactly on curvature-equation solutions."""
    m = curvature(c) + form_commutator(c.phi10, conj_transpose_form(c.phi10))
    defect = skew_value_defect(m)
    scale = 1.0 + float(np.abs(m.data).max())
    if defect > SKEW_TOL * scale:
        raise ConsistencyError(f"moment map lost skew-Hermitian values (defect {defect:.3e})")
    return MomentValue(m, defect)


def _real_checked(z: complex, what: str) -> tuple[float, float]:
    v = float(np.real(z))
    d = abs(float(np.imag(z)))
    if d > REAL_TOL * (1.0 + abs(v)):
        raise ConsistencyError(f"{what} is not real (Im {d:.3e})")
    return v, d


def hamiltonian(c: Configuration, zeta: GaugeAlgebraField) -> HamiltonianValue:
    """H_zeta = Tr int(mu * zeta), split into curvature and Higgs parts."""
    if zeta.grid != c.grid or zeta.rank != c.rank:
        raise DomainError("gauge algebra field and configuration mismatch")
    z0 = zeta.as_form()
    h_part = trace_integrate(wedge(curvature(c), z0))
    f_part = trace_integrate(
        wedge(form_commutator(c.phi10, conj_transpose_form(c.phi10)), z0)
    )
    hv, hd = _real_checked(h_part, "curvature Hamiltonian")
    fv, fd = _real_checked(f_part, "Higgs Hamiltonian")
    return HamiltonianValue(hv + fv, hv, fv, max(hd, fd))


def dh_curvature(
    c: Configuration, zeta: GaugeAlgebraField, y: TangentVector, tol: float = PAIRING_TOL
) -> IdentityPair:
    """Both sides of the curvature pairing identity.

    left  = Tr int(zeta (d beta + [beta, A]))
    right = Tr int(X1 ^ beta)

    Equal to rounding: the summation-by-parts pairing of the forward stencil in
    the linearized curvature against the backward stencil in X1 is exact.
    """
    z0 = zeta.as_form()
    left = trace_integrate(wedge(z0, linearized_curvature(c, y)))
    xz = gauge_vector_field(c, zeta)
    right = trace_integrate(wedge(xz.alpha_pair, y.alpha_pair))
    lv, _ = _real_checked(left, "curvature pairing (left)")
    rv, _ = _real_checked(right, "curvature pairing (right)")
    if abs(lv - rv) > tol * (1.0 + abs(lv)):
        raise IdentityViolationError(
            f"curvature pairing identity failed: {lv!r} vs {rv!r}", lv, rv
        )
    return IdentityPair(lv, rv)


def df_higgs(
    c: Configuration, zeta: GaugeAlgebraField, y: TangentVector, tol: float = PAIRING_TOL
) -> IdentityPair:
    """Both sides of the Higgs pairing identity.

    left  = Tr int(([delta, Phi*] + [Phi, delta*]) zeta)
    right = 2 Re Tr int(X2 ^ delta*)

    Pure per-site trace algebra; exact to rounding.
    """
    z0 = zeta.as_form()
    phi_star = conj_transpose_form(c.phi10)
    delta = y.gamma10
    delta_star = conj_transpose_form(delta)
    lin = form_commutator(delta, phi_star) + form_commutator(c.phi10, delta_star)
    left = trace_integrate(wedge(lin, z0))
    x2 = form_commutator(zeta.as_form(), c.phi10)
    right = 2.0 * float(np.real(trace_integrate(wedge(x2, delta_star))))
    lv, _ = _real_checked(left, "Higgs pairing (left)")
    if abs(lv - right) > tol * (1.0 + abs(lv)):
        raise IdentityViolationError(
            f"Higgs pairing identity failed: {lv!r} vs {right!r}", lv, right
        )
    return IdentityPair(lv, right)


def dmoment(c: Configuration, x: TangentVector) -> LatticeForm:
    """Linearization of the moment map along X:
    (d beta + [beta, A]) + [gamma, Phi*] + [Phi, gamma*]."""
    phi_star = conj_transpose_form(c.phi10)
    gamma_star = conj_transpose_form(x.gamma10)
    return (
        linearized_curvature(c, x)
        + form_commutator(x.gamma10, phi_star)
        + form_commutator(c.phi10, gamma_star)
    )


def verify_hamiltonian_identity(
    c: Configuration,
    zeta: GaugeAlgebraField,
    y: TangentVector,
    fd_epsilon: float = 1e-4,
    tol_analytic: float = 1e-10,
    tol_fd: float = 1e-5,
    inputs_digest: str = "",
) -> IdentityReport:
    """Check dH_zeta(Y) three ways: pairing assembly, Omega(X_zeta, Y), and a
    central finite difference of H_zeta along Y.

    Pass requires the analytic pair to agree within tol_analytic*(1+|dH|) and
    the finite-difference pair within tol_fd*(1+|dH|).
    """
    eq4 = dh_curvature(c, zeta, y)
    eq5 = df_higgs(c, zeta, y)
    dh_assembled = eq4.right + eq5.right
    xz = gauge_vector_field(c, zeta)
    omega_value = omega(xz, y)
    h_plus = hamiltonian(translate(c, y, +fd_epsilon), zeta).total
    h_minus = hamiltonian(translate(c, y, -fd_epsilon), zeta).total
    dh_fd = (h_plus - h_minus) / (2.0 * fd_epsilon)

    scale = 1.0 + abs(dh_assembled)
    d_analytic = abs(dh_assembled - omega_value)
    d_fd = abs(dh_assembled - dh_fd)
    passed = d_analytic <= tol_analytic * scale and d_fd <= tol_fd * scale
    return IdentityReport(
        identity_name="hamiltonian_identity",
        inputs_digest=inputs_digest,
        values=[dh_assembled, omega_value, dh_fd, eq4.defect, eq5.defect],
        discrepancies=[d_analytic, d_fd],
        tolerance={"analytic": tol_analytic, "finite_difference": tol_fd},
        passed=passed,
        value_labels=[
            "dH_assembled",
            "omega_pairing",
            "dH_central_difference",
            "curvature_pairing_defect",
            "higgs_pairing_defect",
        ],
        discrepancy_labels=["assembled_vs_omega", "assembled_vs_finite_difference"],
    )


def slice_pairing_checks(
    c: Configuration,
    x: TangentVector,
    zeta: GaugeAlgebraField,
    tol: float = PAIRING_TOL,
    inputs_digest: str = "",
) -> IdentityReport:
    """Pairing chains tying the metric, the symplectic form and the moment-map
    derivative on orbit directions:

        g(X_zeta, X)   = -Omega(X_zeta, I X) = -Tr int(zeta dmu(I X))
        g(X_zeta, I X) = +Omega(X_zeta, X)   = +Tr int(zeta dmu(X))

    Signs follow Omega = g(., I .); orthogonality to the orbit is equivalent to
    dmu(I X) pairing to zero against every zeta.
    """
    xz = gauge_vector_field(c, zeta)
    ix = complex_structure(x)
    z0 = zeta.as_form()

    q1 = metric_g(xz, x)
    q2 = -omega(xz, ix)
    q3v = trace_integrate(wedge(z0, dmoment(c, ix)))
    q3, _ = _real_checked(-q3v, "moment pairing along I X")

    q4 = metric_g(xz, ix)
    q5 = omega(xz, x)
    q6v = trace_integrate(wedge(z0, dmoment(c, x)))
    q6, _ = _real_checked(q6v, "moment pairing along X")

    d1, d2 = abs(q1 - q2), abs(q2 - q3)
    d3, d4 = abs(q4 - q5), abs(q5 - q6)
    s1 = 1.0 + abs(q1)
    s2 = 1.0 + abs(q4)
    passed = d1 <= tol * s1 and d2 <= tol * s1 and d3 <= tol * s2 and d4 <= tol * s2
    return IdentityReport(
        identity_name="slice_pairings",
        inputs_digest=inputs_digest,
        values=[q1, q2, q3, q4, q5, q6],
        discrepancies=[d1, d2, d3, d4],
        tolerance=tol,
        passed=passed,
        value_labels=[
            "g(Xz,X)",
            "-omega(Xz,IX)",
            "-pair(zeta,dmu(IX))",
            "g(Xz,IX)",
            "omega(Xz,X)",
            "pair(zeta,dmu(X))",
        ],
        discrepancy_labels=["chain1_metric_omega", "chain1_omega_moment",
                            "chain2_metric_omega", "chain2_omega_moment"],
    )
