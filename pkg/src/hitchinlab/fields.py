"""Matrix-algebra layer on lattice forms: graded commutators, conjugations,
trace pairing, u(n)-valued fields, unitary gauge fields, and seeded randomness.

Random fields are drawn from a PCG64 generator seeded through
``numpy.random.SeedSequence(seed)``; the drawing order is documented on each
factory so every artifact is reproducible from a 64-bit seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .lattice import (
    D01,
    D10,
    Form,
    LatticeForm,
    OneForm,
    SurfaceGrid,
    degree_int,
    integrate,
    wedge,
)

SKEW_TOL = 1e-14      # entrywise, relative to field magnitude
UNITARY_TOL = 1e-12


def adjoint(a: np.ndarray) -> np.ndarray:
    """Per-site conjugate transpose of an (..., n, n) array."""
    return np.conj(a.swapaxes(-1, -2))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Per-site matrix commutator [a, b] = ab - ba."""
    return a @ b - b @ a


# ---------------------------------------------------------------------------
# form-level algebra
# ---------------------------------------------------------------------------

def form_commutator(u: Form, v: Form) -> Form:
    """Graded commutator [u, v] = u^v - (-1)^{pq} v^u at the coefficient level."""
    p, q = degree_int(u), degree_int(v)
    if p + q > 2:
        raise DomainError(f"graded commutator of degrees {p} and {q} exceeds degree 2")
    sign = -1.0 if (p * q) % 2 == 0 else 1.0
    return wedge(u, v) + sign * wedge(v, u)


def conj_transpose_form(w: LatticeForm) -> LatticeForm:
    """(phi dz)* = phi^dagger dzbar (and dzbar -> dz analogously).

    Pure odd-degree input only; the conjugate transpose acts per site.
    """
    if isinstance(w, OneForm) or w.degree not in (D10, D01):
        raise DomainError("conj_transpose_form expects a pure (1,0) or (0,1) form")
    out_degree = D01 if w.degree == D10 else D10
    return LatticeForm(w.grid, out_degree, adjoint(w.data))


def transpose_form(w: LatticeForm) -> LatticeForm:
    """Entrywise matrix transpose of the coefficient; basis unchanged."""
    if isinstance(w, OneForm) or w.degree not in (D10, D01):
        raise DomainError("transpose_form expects a pure (1,0) or (0,1) form")
    return LatticeForm(w.grid, w.degree, w.data.swapaxes(-1, -2))


def conjugate_form(w: LatticeForm) -> LatticeForm:
    """Complex conjugate of a pure 1-form: conj(eta dz) = conj(eta) dzbar."""
    if isinstance(w, OneForm) or w.degree not in (D10, D01):
        raise DomainError("conjugate_form expects a pure (1,0) or (0,1) form")
    out_degree = D01 if w.degree == D10 else D10
    return LatticeForm(w.grid, out_degree, np.conj(w.data))


def trace_integrate(w: LatticeForm) -> complex:
    """Per-site matrix trace followed by integration; the scalar pairing."""
    return complex(np.trace(integrate(w)))


# ---------------------------------------------------------------------------
# gauge algebra / gauge group fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaugeAlgebraField:
    """Per-site skew-Hermitian n x n matrix field (infinitesimal gauge motion)."""

    grid: SurfaceGrid
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.complex128, order="C")
        N = self.grid.side_count
        if arr.ndim != 4 or arr.shape[:2] != (N, N) or arr.shape[2] != arr.shape[3]:
            raise DomainError(f"expected shape (N, N, n, n) with N={N}, got {arr.shape}")
        scale = max(1.0, float(np.abs(arr).max()))
        defect = float(np.abs(arr + adjoint(arr)).max())
        if defect > SKEW_TOL * scale:
            raise DomainError(f"field is not skew-Hermitian (defect {defect:.3e})")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def rank(self) -> int:
        return self.data.shape[2]

    def as_form(self) -> LatticeForm:
        from .lattice import D0

        return LatticeForm(self.grid, D0, self.data)


@dataclass(frozen=True)
class GaugeElement:
    """Per-site unitary n x n matrix field acting on configurations."""

    grid: SurfaceGrid
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.complex128, order="C")
        N = self.grid.side_count
        if arr.ndim != 4 or arr.shape[:2] != (N, N) or arr.shape[2] != arr.shape[3]:
            raise DomainError(f"expected shape (N, N, n, n) with N={N}, got {arr.shape}")
        n = arr.shape[2]
        eye = np.eye(n, dtype=np.complex128)
        defect = float(np.abs(adjoint(arr) @ arr - eye).max())
        if defect > UNITARY_TOL:
            raise DomainError(f"field is not unitary (defect {defect:.3e})")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def rank(self) -> int:
        return self.data.shape[2]

    @property
    def inverse_data(self) -> np.ndarray:
        return adjoint(self.data)

    @classmethod
    def identity(cls, grid: SurfaceGrid, rank: int) -> "GaugeElement":
        N = grid.side_count
        eye = np.broadcast_to(np.eye(rank, dtype=np.complex128), (N, N, rank, rank))
        return cls(grid, eye)

    @classmethod
    def constant(cls, grid: SurfaceGrid, matrix: np.ndarray) -> "GaugeElement":
        m = np.asarray(matrix, dtype=np.complex128)
        N = grid.side_count
        return cls(grid, np.broadcast_to(m, (N, N) + m.shape))


def exponentiate(zeta: GaugeAlgebraField, eps: float) -> GaugeElement:
    """Per-site matrix exponential exp(eps * zeta) of a skew-Hermitian field.

    Computed by eigendecomposition of the Hermitian matrix i*zeta, so the
    result is unitary to rounding for any step size.
    """
    eps = float(eps)
    if zeta.rank == 1:
        return GaugeElement(zeta.grid, np.exp(eps * zeta.data))
    herm = 1j * zeta.data  # Hermitian; zeta = -i * herm
    evals, evecs = np.linalg.eigh(herm)
    phases = np.exp(-1j * eps * evals)
    g = (evecs * phases[..., None, :]) @ adjoint(evecs)
    return GaugeElement(zeta.grid, g)


# ---------------------------------------------------------------------------
# seeded random fields
# ---------------------------------------------------------------------------

def _generator(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def random_matrix_field(
    grid: SurfaceGrid,
    rank: int,
    seed,
    smoothness: int | None = None,
    scale: float = 1.0,
) -> np.ndarray:
    """Random complex matrix field, optionally band limited.

    smoothness=None draws iid complex Gaussians per entry (real parts first,
    then imaginary parts).  An integer m >= 0 builds the field from Fourier
    modes with |kx|, |ky| <= m, weighted by 1/(1 + kx^2 + ky^2); coefficients
    are drawn in the fixed order of the mode list sorted by (kx^2+ky^2, kx, ky).
    """
    rng = _generator(seed)
    N = grid.side_count
    if smoothness is None:
        re = rng.standard_normal((N, N, rank, rank))
        im = rng.standard_normal((N, N, rank, rank))
        return scale * (re + 1j * im)
    m = int(smoothness)
    if m < 0:
        raise DomainError("smoothness must be None or a nonnegative integer")
    modes = sorted(
        ((kx, ky) for kx in range(-m, m + 1) for ky in range(-m, m + 1)),
        key=lambda kk: (kk[0] ** 2 + kk[1] ** 2, kk[0], kk[1]),
    )
    coeffs = rng.standard_normal((len(modes), rank, rank)) + 1j * rng.standard_normal(
        (len(modes), rank, rank)
    )
    j = np.arange(N)
    field = np.zeros((N, N, rank, rank), dtype=np.complex128)
    for (kx, ky), c in zip(modes, coeffs):
        phase = np.exp(2j * np.pi * (kx * j[:, None] + ky * j[None, :]) / N)
        weight = 1.0 / (1.0 + kx * kx + ky * ky)
        field += weight * phase[:, :, None, None] * c
    return scale * field


def random_skew_hermitian(
    grid: SurfaceGrid,
    rank: int,
    seed,
    smoothness: int | None = None,
    scale: float = 1.0,
) -> GaugeAlgebraField:
    """Seeded skew-Hermitian field: draw a complex field, then (w - w^dagger)/2."""
    if rank < 1:
        raise DomainError("rank must be >= 1")
    w = random_matrix_field(grid, rank, seed, smoothness=smoothness, scale=scale)
    return GaugeAlgebraField(grid, (w - adjoint(w)) / 2.0)


def random_unitary(rank: int, seed) -> np.ndarray:
    """Single random unitary from the QR of a complex Gaussian matrix.

    The R-diagonal phases are normalized out so the draw is well spread.
    """
    rng = _generator(seed)
    z = rng.standard_normal((rank, rank)) + 1j * rng.standard_normal((rank, rank))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def constant_gauge_element(grid: SurfaceGrid, rank: int, seed) -> GaugeElement:
    """Spatially constant random unitary gauge field (a random phase at rank 1).

    Constant gauge fields conjugate every finite-difference operator exactly,
    so equivariance checks against them hold to rounding.
    """
    return GaugeElement.constant(grid, random_unitary(rank, seed))
