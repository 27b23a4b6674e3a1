"""Finite-dimensional model of the tangent space to the quotient by gauge:
orbit-direction bases, metric-orthogonal projection, and the check that the
orthogonal slice is preserved by the almost complex structure.

The infinite-dimensional gauge algebra is modeled by a finite generator set;
`fourier_generator_basis` supplies a deterministic low-frequency-first family
that spans the full lattice gauge algebra at count N^2 n^2.  Every identity
tested here is exact for any finite generator subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .configuration import Configuration, TangentVector, gauge_vector_field
from .errors import ConditioningError, ConsistencyError, DegenerateBasisError, DomainError
from .fields import GaugeAlgebraField, random_skew_hermitian
from .geometry import complex_structure
from .lattice import D01, D10, LatticeForm, SurfaceGrid, two_form_norm
from .moment import dmoment
from .configuration import linearized_eq2
from .reports import IdentityReport

GRAM_SYMMETRY_TOL = 1e-12
PRUNE_TOL = 1e-10
ORTHO_TOL = 1e-9
CONDITION_CAP = 1e12

GeneratorSpec = Union[GaugeAlgebraField, int]


def _skew_basis_matrices(rank: int) -> list[np.ndarray]:
    """Orthogonal basis of u(n): i E_aa, then (E_ab - E_ba)/sqrt2, i(E_ab + E_ba)/sqrt2."""
    mats = []
    for a in range(rank):
        m = np.zeros((rank, rank), dtype=np.complex128)
        m[a, a] = 1j
        mats.append(m)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for a in range(rank):
        for b in range(a + 1, rank):
            m = np.zeros((rank, rank), dtype=np.complex128)
            m[a, b] = inv_sqrt2
            m[b, a] = -inv_sqrt2
            mats.append(m)
            m = np.zeros((rank, rank), dtype=np.complex128)
            m[a, b] = 1j * inv_sqrt2
            m[b, a] = 1j * inv_sqrt2
            mats.append(m)
    return mats


def _fourier_profiles(N: int) -> list[np.ndarray]:
    """Real Fourier profiles on the grid, low frequency first; N^2 in total."""
    def centered(k: int) -> int:
        return k if k <= N // 2 else k - N

    reps = []
    for kx in range(N):
        for ky in range(N):
            neg = ((-kx) % N, (-ky) % N)
            if (kx, ky) <= neg:
                reps.append((kx, ky))
    reps.sort(key=lambda kk: (
        centered(kk[0]) ** 2 + centered(kk[1]) ** 2,
        abs(centered(kk[0])),
        abs(centered(kk[1])),
        kk,
    ))
    j = np.arange(N)
    profiles = []
    for kx, ky in reps:
        angle = 2.0 * np.pi * (kx * j[:, None] + ky * j[None, :]) / N
        profiles.append(np.cos(angle))
        if ((-kx) % N, (-ky) % N) != (kx, ky):
            profiles.append(np.sin(angle))
    return profiles


def fourier_generator_basis(
    grid: SurfaceGrid, rank: int, count: int | None = None
) -> list[GaugeAlgebraField]:
    """Deterministic gauge-algebra generators: real Fourier profiles times a
    u(n) matrix basis.  count=None returns the complete basis (N^2 n^2)."""
    profiles = _fourier_profiles(grid.side_count)
    mats = _skew_basis_matrices(rank)
    gens = []
    for profile in profiles:
        block = profile[:, :, None, None]
        for m in mats:
            gens.append(GaugeAlgebraField(grid, block * m))
            if count is not None and len(gens) >= count:
                return gens
    return gens


def _stack(vectors: Sequence[TangentVector]) -> tuple[np.ndarray, np.ndarray]:
    alphas = np.stack([v.alpha01.data for v in vectors])
    gammas = np.stack([v.gamma10.data for v in vectors])
    return alphas, gammas


def _gram(alphas: np.ndarray, gammas: np.ndarray, h: float) -> np.ndarray:
    """Metric Gram matrix in component form (matches metric_g; tested against it)."""
    m = alphas.shape[0]
    fa = alphas.reshape(m, -1)
    fg = gammas.reshape(m, -1)
    g = np.real(np.conj(fa) @ fa.T) + np.real(fg @ np.conj(fg).T)
    return 4.0 * h * h * g


def _pairings(alphas, gammas, x: TangentVector, h: float) -> np.ndarray:
    """g(X_i, X) for every stacked orbit vector."""
    m = alphas.shape[0]
    fa = alphas.reshape(m, -1)
    fg = gammas.reshape(m, -1)
    xa = x.alpha01.data.ravel()
    xg = x.gamma10.data.ravel()
    vals = np.real(np.conj(fa) @ xa) + np.real(fg @ np.conj(xg))
    return 4.0 * h * h * vals


@dataclass(frozen=True)
class OrbitBasis:
    """Gauge-orbit tangent directions at a configuration with their Gram data.

    Near-null generators are dropped by name; remaining exact linear
    dependencies are dropped spectrally (kept eigenpairs define the
    pseudo-inverse used for projection).
    """

    generators: list
    vectors: list
    gram: np.ndarray
    eigenvalues: np.ndarray          # kept spectrum, ascending
    eigenvectors: np.ndarray         # columns match eigenvalues
    pruned_generators: list          # indices dropped for null vectors
    pruned_directions: int           # eigen-directions dropped afterwards
    alphas: np.ndarray
    gammas: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.eigenvalues)

    @property
    def condition(self) -> float:
        return float(self.eigenvalues[-1] / self.eigenvalues[0])


def orbit_basis(
    c: Configuration,
    generator_seeds: Sequence[GeneratorSpec],
    smoothness: int | None = 2,
    prune_tol: float = PRUNE_TOL,
) -> OrbitBasis:
    """Build orbit directions X_zeta for each generator and assemble their Gram.

    Entries of generator_seeds are either GaugeAlgebraField instances or
    integer seeds mapped through `random_skew_hermitian` (low-frequency
    smoothing by default).
    """
    if len(generator_seeds) == 0:
        raise DomainError("generator list must be nonempty")
    gens: list[GaugeAlgebraField] = []
    for spec in generator_seeds:
        if isinstance(spec, GaugeAlgebraField):
            gens.append(spec)
        else:
            gens.append(random_skew_hermitian(c.grid, c.rank, spec, smoothness=smoothness))

    vectors = [gauge_vector_field(c, z) for z in gens]
    alphas, gammas = _stack(vectors)
    h = c.grid.spacing
    norms2 = 4.0 * h * h * (
        np.sum(np.abs(alphas) ** 2, axis=(1, 2, 3, 4))
        + np.sum(np.abs(gammas) ** 2, axis=(1, 2, 3, 4))
    )
    max_norm2 = float(norms2.max())
    if max_norm2 <= 0.0:
        raise DegenerateBasisError(
            "every generator is null at this configuration (full stabilizer)",
            pruned=list(range(len(gens))),
        )
    keep = norms2 > prune_tol * max_norm2
    pruned_named = [i for i, k in enumerate(keep) if not k]
    if not keep.any():
        raise DegenerateBasisError("every generator is null", pruned=pruned_named)

    kept_gens = [g for g, k in zip(gens, keep) if k]
    kept_vecs = [v for v, k in zip(vectors, keep) if k]
    alphas, gammas = alphas[keep], gammas[keep]
    gram = _gram(alphas, gammas, h)
    sym_defect = float(np.abs(gram - gram.T).max())
    if sym_defect > GRAM_SYMMETRY_TOL * (1.0 + float(np.abs(gram).max())):
        raise ConsistencyError(f"Gram matrix lost symmetry (defect {sym_defect:.3e})")
    gram = (gram + gram.T) / 2.0

    evals, evecs = np.linalg.eigh(gram)
    max_eig = float(evals[-1])
    if max_eig <= 0.0:
        raise DegenerateBasisError("Gram matrix is null", pruned=pruned_named)
    if float(evals[0]) < -prune_tol * max_eig:
        raise ConsistencyError(f"Gram matrix is not positive semidefinite ({evals[0]:.3e})")
    spectral_keep = evals > prune_tol * max_eig
    pruned_directions = int((~spectral_keep).sum())
    if not spectral_keep.any():
        raise DegenerateBasisError("Gram matrix is numerically null", pruned=pruned_named)

    return OrbitBasis(
        generators=kept_gens,
        vectors=kept_vecs,
        gram=gram,
        eigenvalues=evals[spectral_keep],
        eigenvectors=evecs[:, spectral_keep],
        pruned_generators=pruned_named,
        pruned_directions=pruned_directions,
        alphas=alphas,
        gammas=gammas,
    )


def _solve_coefficients(basis: OrbitBasis, rhs: np.ndarray) -> np.ndarray:
    y = basis.eigenvectors.T @ rhs
    return basis.eigenvectors @ (y / basis.eigenvalues)


def project_orthogonal(
    c: Configuration,
    x: TangentVector,
    basis: OrbitBasis,
    tol: float = ORTHO_TOL,
    condition_cap: float = CONDITION_CAP,
) -> TangentVector:
    """Metric-orthogonal projection of X off the orbit-direction span.

    One refinement pass keeps residual pairings at rounding level; residuals
    are checked against tol * |X| * |X_i| (input scale, so annihilating an
    in-span X passes).
    """
    if basis.condition > condition_cap:
        raise ConditioningError(
            f"orbit Gram condition {basis.condition:.3e} exceeds cap {condition_cap:.1e}"
        )
    h = c.grid.spacing
    coeffs = _solve_coefficients(basis, _pairings(basis.alphas, basis.gammas, x, h))
    alpha = x.alpha01.data - np.tensordot(coeffs, basis.alphas, axes=1)
    gamma = x.gamma10.data - np.tensordot(coeffs, basis.gammas, axes=1)
    xp = TangentVector(LatticeForm(c.grid, D01, alpha), LatticeForm(c.grid, D10, gamma))
    # refinement: re-project the residual pairings
    extra = _solve_coefficients(basis, _pairings(basis.alphas, basis.gammas, xp, h))
    alpha = alpha - np.tensordot(extra, basis.alphas, axes=1)
    gamma = gamma - np.tensordot(extra, basis.gammas, axes=1)
    xp = TangentVector(LatticeForm(c.grid, D01, alpha), LatticeForm(c.grid, D10, gamma))

    residuals = np.abs(_pairings(basis.alphas, basis.gammas, xp, h))
    vec_norms = np.sqrt(np.diag(basis.gram))
    scale = x.norm()
    if scale > 0.0:
        bound = tol * scale * np.maximum(vec_norms, 1e-300)
        if (residuals > bound).any():
            worst = float((residuals / bound).max())
            raise ConsistencyError(f"projection orthogonality failed ({worst:.3e}x bound)")
    return xp


def orthogonality_residual(x: TangentVector, basis: OrbitBasis, h: float) -> float:
    """max_i |g(X_i, x)| / (|X_i| * |x|); zero for x (numerically) zero."""
    xnorm = x.norm()
    if xnorm <= 0.0:
        return 0.0
    vals = np.abs(_pairings(basis.alphas, basis.gammas, x, h))
    vec_norms = np.sqrt(np.diag(basis.gram))
    return float((vals / (vec_norms * xnorm)).max())


def solution_tangent_samples(
    c: Configuration, basis: OrbitBasis, count: int = 3
) -> list[TangentVector]:
    """Tangent vectors that satisfy the linearized equations and are orthogonal
    to the orbit directions, up to the conditioning of c itself.

    Computed as the smallest right singular vectors of the stacked real-linear
    map X -> (linearized curvature-equation residual, linearized Higgs-equation
    residual, normalized orbit pairings).  Dense assembly: desk scale only.
    """
    N = c.grid.side_count
    n = c.rank
    h = c.grid.spacing
    m = N * N * n * n
    dim_in = 4 * m
    vec_norms = np.sqrt(np.diag(basis.gram))

    def to_tangent(v: np.ndarray) -> TangentVector:
        alpha = (v[:m] + 1j * v[m : 2 * m]).reshape(N, N, n, n)
        gamma = (v[2 * m : 3 * m] + 1j * v[3 * m :]).reshape(N, N, n, n)
        return TangentVector(LatticeForm(c.grid, D01, alpha), LatticeForm(c.grid, D10, gamma))

    def residual_vector(x: TangentVector) -> np.ndarray:
        r1 = dmoment(c, x).data.ravel()
        r2 = linearized_eq2(c, x).data.ravel()
        pair = _pairings(basis.alphas, basis.gammas, x, h) / vec_norms
        return np.concatenate([r1.real, r1.imag, r2.real, r2.imag, pair])

    unit = np.zeros(dim_in)
    out_dim = residual_vector(to_tangent(unit)).shape[0]
    mat = np.empty((out_dim, dim_in))
    for idx in range(dim_in):
        unit[idx] = 1.0
        mat[:, idx] = residual_vector(to_tangent(unit))
        unit[idx] = 0.0
    _, _, vt = np.linalg.svd(mat)
    return [to_tangent(vt[-1 - i]) for i in range(min(count, dim_in))]


def slice_invariance_check(
    c: Configuration,
    x: TangentVector,
    basis: OrbitBasis,
    threshold: float,
    inputs_digest: str = "",
) -> IdentityReport:
    """Project X off the orbit and test that I X' stays orthogonal and still
    satisfies the linearized equations, against a caller-supplied threshold.

    Residuals are normalized per unit tangent norm.  A projection that lands
    on (numerical) zero is trivially invariant and reported as such.
    """
    h = c.grid.spacing
    xp = project_orthogonal(c, x, basis)
    norm_xp = xp.norm()
    tiny = norm_xp <= 1e-12 * (1.0 + x.norm())
    if tiny:
        values = [0.0] * 6
    else:
        ixp = complex_structure(xp)
        values = [
            orthogonality_residual(xp, basis, h),
            orthogonality_residual(ixp, basis, h),
            two_form_norm(dmoment(c, xp)) / norm_xp,
            two_form_norm(dmoment(c, ixp)) / norm_xp,
            two_form_norm(linearized_eq2(c, xp)) / norm_xp,
            two_form_norm(linearized_eq2(c, ixp)) / norm_xp,
        ]
    checked = [values[1], values[3], values[5]]
    passed = all(v <= threshold for v in checked)
    return IdentityReport(
        identity_name="slice_invariance",
        inputs_digest=inputs_digest,
        values=values,
        discrepancies=checked,
        tolerance=threshold,
        passed=passed,
        value_labels=[
            "orthogonality_X",
            "orthogonality_IX",
            "linearized_curvature_X",
            "linearized_curvature_IX",
            "linearized_higgs_X",
            "linearized_higgs_IX",
        ],
        discrepancy_labels=[
            "orthogonality_IX",
            "linearized_curvature_IX",
            "linearized_higgs_IX",
        ],
    )
