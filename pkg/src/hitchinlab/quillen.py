"""Determinant-line curvature pairings and the spectral gauge-invariance probe.

Curvature side: the connection-family line bundle contributes
(i/pi) Re Tr int(alpha01 ^ beta01*) per tangent pair; the Higgs-family bundle
(built from the reference connection plus the Higgs field) contributes twice
that expression in the (0,1) Higgs components.  Scaled by the bundle powers
(-2 and +2) the two add up to (i/pi) times the symplectic form — the
prequantization identity checked by `prequantum_check`.  The Higgs-family
curvature is evaluated through two independent displays (natural (0,1)
components vs. the conjugated construction) and cross-asserted.

Operator side: D = dbar + A0^(0,1) + Phi^(0,1) acts on matrix sections by
left multiplication (n copies of the fundamental representation).  Its
companion D~ = del + A0^(1,0) + Phi^(1,0) uses the backward stencil and
equals -D^dagger under the site inner product, so the composite D^dagger D =
-(D~ D) is positive semidefinite; the probe compares its low spectrum before
and after a gauge transformation, for which constant unitaries give a literal
conjugation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .configuration import Configuration, TangentVector, gauge_transform
from .errors import ConsistencyError, DomainError, EigensolverError
from .fields import GaugeElement, conj_transpose_form, conjugate_form, trace_integrate
from .lattice import (
    D01,
    D10,
    LatticeForm,
    dbar_coeff,
    del_coeff_adj,
    wedge,
)
from .reports import IdentityReport

VARIANT_TOL = 1e-11
PREQUANTUM_TOL = 1e-10
SPECTRUM_REL_TOL = 1e-9
EIGVEC_RESIDUAL_TOL = 1e-8
KERNEL_EIG_TOL = 1e-10
DENSE_DIMENSION_CAP = 4096  # complex section dimension n^2 N^2 must stay below


@dataclass(frozen=True)
class ReferenceConnection:
    """Connection datum held fixed while tangent directions vary."""

    a0_01: LatticeForm

    def __post_init__(self):
        if self.a0_01.degree != D01:
            raise DomainError("reference connection must be a (0,1) form")


def phi01_from_phi10(phi10: LatticeForm) -> LatticeForm:
    """(0,1) Higgs component -(Phi^(1,0))^dagger."""
    if phi10.degree != D10:
        raise DomainError("expected a (1,0) form")
    return -1.0 * conj_transpose_form(phi10)


def phi10_from_phi01(phi01: LatticeForm) -> LatticeForm:
    """Inverse of `phi01_from_phi10`."""
    if phi01.degree != D01:
        raise DomainError("expected a (0,1) form")
    return -1.0 * conj_transpose_form(phi01)


def curv_L(x: TangentVector, y: TangentVector) -> complex:
    """Connection-family curvature (i/pi) Re Tr int(alpha01 ^ beta01*); purely imaginary."""
    val = trace_integrate(wedge(x.alpha01, conj_transpose_form(y.alpha01)))
    return (1j / np.pi) * float(np.real(val))


def curv_P_sections(x: TangentVector, y: TangentVector) -> tuple[complex, complex, complex]:
    """Curvatures (F_L^-2, F_R^2 natural, F_R^2 conjugated variant).

    The two Higgs-family displays must agree; a disagreement flags a
    conjugation-convention bug and raises.
    """
    f_l2 = -2.0 * curv_L(x, y)
    gamma01_x = phi01_from_phi10(x.gamma10)
    gamma01_y = phi01_from_phi10(y.gamma10)
    natural = 2.0 * (1j / np.pi) * float(
        np.real(trace_integrate(wedge(gamma01_x, conj_transpose_form(gamma01_y))))
    )
    conjugated = 2.0 * (1j / np.pi) * float(
        np.real(
            trace_integrate(
                wedge(conjugate_form(x.gamma10), conjugate_form(conj_transpose_form(y.gamma10)))
            )
        )
    )
    if abs(natural - conjugated) > VARIANT_TOL * (1.0 + abs(natural)):
        raise ConsistencyError(
            f"Higgs-family curvature variants disagree: {natural!r} vs {conjugated!r}"
        )
    return f_l2, natural, conjugated


def prequantum_check(
    x: TangentVector,
    y: TangentVector,
    tol: float = PREQUANTUM_TOL,
    inputs_digest: str = "",
) -> IdentityReport:
    """Check F_L^-2 + F_R^2 = (i/pi) Omega(X, Y) on one tangent pair."""
    from .geometry import omega

    f_l2, f_r2, _ = curv_P_sections(x, y)
    total = f_l2 + f_r2
    target = (1j / np.pi) * omega(x, y)
    disc = abs(total - target)
    magnitude = abs(total)
    passed = disc <= tol * (1.0 + magnitude)
    return IdentityReport(
        identity_name="prequantum_curvature",
        inputs_digest=inputs_digest,
        values=[float(np.imag(total)), float(np.imag(target))],
        discrepancies=[disc],
        tolerance=tol,
        passed=passed,
        value_labels=["curvature_sum_imag", "omega_scaled_imag"],
        discrepancy_labels=["curvature_sum_vs_omega"],
    )


# ---------------------------------------------------------------------------
# discrete Cauchy-Riemann operator and the spectral probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscreteCROperator:
    """D = dbar + (A0^(0,1) + Phi^(0,1)) acting on n x n matrix sections.

    Stored as the total multiplication coefficients m01/m10;
    `apply_companion` is the backward-stencil companion, equal to -D^dagger.
    """

    grid: object
    rank: int
    m01: np.ndarray
    m10: np.ndarray

    @property
    def dimension(self) -> int:
        return self.grid.side_count ** 2 * self.rank ** 2

    def apply(self, s: np.ndarray) -> np.ndarray:
        return dbar_coeff(s, self.grid.spacing) + self.m01 @ s

    def apply_companion(self, s: np.ndarray) -> np.ndarray:
        return del_coeff_adj(s, self.grid.spacing) + self.m10 @ s

    def _dense(self, apply_fn) -> np.ndarray:
        N = self.grid.side_count
        n = self.rank
        d = self.dimension
        mat = np.empty((d, d), dtype=np.complex128)
        basis = np.zeros((N, N, n, n), dtype=np.complex128)
        flat = basis.ravel()
        for idx in range(d):
            flat[idx] = 1.0
            mat[:, idx] = apply_fn(basis).ravel()
            flat[idx] = 0.0
        return mat

    def matrix(self) -> np.ndarray:
        return self._dense(self.apply)

    def companion_matrix(self) -> np.ndarray:
        return self._dense(self.apply_companion)

    def laplacian_matrix(self) -> np.ndarray:
        """Dense composite (D~ D); negative semidefinite (= -D^dagger D)."""
        return self.companion_matrix() @ self.matrix()


def build_cr_operator(a0: ReferenceConnection, phi10: LatticeForm) -> DiscreteCROperator:
    """Assemble D from the reference connection and the Higgs field."""
    if phi10.degree != D10:
        raise DomainError("Higgs field must be a (1,0) form")
    if a0.a0_01.grid != phi10.grid or a0.a0_01.rank != phi10.rank:
        raise DomainError("reference connection and Higgs field mismatch")
    phi01 = phi01_from_phi10(phi10)
    a0_10 = -1.0 * conj_transpose_form(a0.a0_01)
    m01 = a0.a0_01.data + phi01.data
    m10 = a0_10.data + phi10.data
    return DiscreteCROperator(grid=phi10.grid, rank=phi10.rank, m01=m01, m10=m10)


@dataclass
class SpectrumReport:
    """Spectral gauge-invariance probe outcome (JSON schema of this module)."""

    k: int
    eigenvalues_base: list
    eigenvalues_gauged: list
    max_rel_discrepancy: float
    passed: bool
    kernel_dim_base: int
    kernel_dim_gauged: int
    eigenvector_map_residual: float
    dimension: int

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "eigenvalues_base": [float(v) for v in self.eigenvalues_base],
            "eigenvalues_gauged": [float(v) for v in self.eigenvalues_gauged],
            "max_rel_discrepancy": float(self.max_rel_discrepancy),
            "pass": bool(self.passed),
            "kernel_dim_base": self.kernel_dim_base,
            "kernel_dim_gauged": self.kernel_dim_gauged,
            "eigenvector_map_residual": float(self.eigenvector_map_residual),
            "dimension": self.dimension,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def _psd_matrix(op: DiscreteCROperator) -> np.ndarray:
    """Dense PSD composite D^dagger D = -(D~ D), symmetrized."""
    lap = -op.laplacian_matrix()
    herm_defect = float(np.abs(lap - lap.conj().T).max())
    scale = 1.0 + float(np.abs(lap).max())
    if herm_defect > 1e-11 * scale:
        raise ConsistencyError(f"composite operator lost Hermiticity ({herm_defect:.3e})")
    return (lap + lap.conj().T) / 2.0


def _eigh(mat: np.ndarray, dim: int) -> tuple[np.ndarray, np.ndarray]:
    try:
        return np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"dense eigensolve failed for dimension {dim}: {exc}") from exc


def laplacian_spectrum_invariance(
    a0: ReferenceConnection,
    phi10: LatticeForm,
    g: GaugeElement,
    k: int,
    rel_tol: float = SPECTRUM_REL_TOL,
    eigvec_tol: float = EIGVEC_RESIDUAL_TOL,
) -> SpectrumReport:
    """Compare the k lowest eigenvalues of the section composite before and
    after transforming (A0, Phi) by g, and verify s -> g s maps the lowest
    eigenvectors onto eigenvectors of the transformed composite.

    Constant g conjugates the operator exactly; site-varying g only does so up
    to O(h) and will generally fail the stated tolerances.
    """
    op = build_cr_operator(a0, phi10)
    dim = op.dimension
    if dim >= DENSE_DIMENSION_CAP:
        raise DomainError(
            f"section dimension n^2 N^2 = {dim} reaches the dense-solver cap "
            f"{DENSE_DIMENSION_CAP}; reduce N or n"
        )
    if not (1 <= k <= dim):
        raise DomainError(f"k must lie in [1, {dim}], got {k}")

    cfg = Configuration(a0.a0_01, phi10)
    cfg_g = gauge_transform(cfg, g)
    op_g = build_cr_operator(ReferenceConnection(cfg_g.a01), cfg_g.phi10)

    lap_b = _psd_matrix(op)
    lap_g = _psd_matrix(op_g)
    evals_b, evecs_b = _eigh(lap_b, dim)
    evals_g, _ = _eigh(lap_g, dim)

    low_b = evals_b[:k]
    low_g = evals_g[:k]
    rel = np.abs(low_b - low_g) / (1.0 + np.abs(low_b))
    max_rel = float(rel.max())

    kernel_b = int((evals_b < KERNEL_EIG_TOL).sum())
    kernel_g = int((evals_g < KERNEL_EIG_TOL).sum())

    # eigenvector transport: H_g (g s) should equal lambda (g s) for base pairs
    N = op.grid.side_count
    n = op.rank
    op_scale = 1.0 + float(evals_b[-1])
    worst_map = 0.0
    for i in range(k):
        section = evecs_b[:, i].reshape(N, N, n, n)
        moved = (g.data @ section).ravel()
        moved = moved / np.linalg.norm(moved)
        res = float(np.linalg.norm(lap_g @ moved - evals_b[i] * moved))
        worst_map = max(worst_map, res / op_scale)

    passed = (
        max_rel <= rel_tol and kernel_b == kernel_g and worst_map <= eigvec_tol
    )
    return SpectrumReport(
        k=k,
        eigenvalues_base=list(map(float, low_b)),
        eigenvalues_gauged=list(map(float, low_g)),
        max_rel_discrepancy=max_rel,
        passed=passed,
        kernel_dim_base=kernel_b,
        kernel_dim_gauged=kernel_g,
        eigenvector_map_residual=worst_map,
        dimension=dim,
    )
