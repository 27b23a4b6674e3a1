"""Configurations (A, Phi), tangent vectors, gauge action, curvature and the
self-duality residuals, plus the linearized operators built from them.

A configuration stores the (0,1) part of a unitary connection and the (1,0)
Higgs field; the (1,0) connection part is always derived as -(A01)^dagger and
never stored.  Tangent vectors follow the same pattern: the (0,1) deformation
of the connection is free data, its (1,0) part is derived.

Stencils: anything that differentiates configuration data (curvature,
residuals, their linearizations) uses the forward-difference calculus; the
gauge vector field and the inhomogeneous term of the gauge action use the
backward (adjoint) stencil, which makes the pairing identities between them
exact on the periodic grid and keeps the vector field the exact derivative of
the discrete gauge flow.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError
from .fields import (
    GaugeAlgebraField,
    GaugeElement,
    adjoint,
    commutator,
    form_commutator,
    conj_transpose_form,
    random_matrix_field,
)
from .lattice import (
    D01,
    D10,
    D2,
    LatticeForm,
    OneForm,
    SurfaceGrid,
    dbar_coeff_adj,
    del_coeff_adj,
    exterior_d,
    two_form_norm,
    wedge,
    zero_form,
)

SKEW_VALUE_TOL = 1e-10


@dataclass(frozen=True)
class Configuration:
    """Pair (A, Phi): connection stored through its (0,1) part, Higgs (1,0) form."""

    a01: LatticeForm
    phi10: LatticeForm

    def __post_init__(self):
        if self.a01.degree != D01:
            raise DomainError("connection datum must be a (0,1) form")
        if self.phi10.degree != D10:
            raise DomainError("Higgs field must be a (1,0) form")
        if self.a01.grid != self.phi10.grid or self.a01.rank != self.phi10.rank:
            raise DomainError("connection and Higgs field live on different grids/ranks")

    @property
    def grid(self) -> SurfaceGrid:
        return self.a01.grid

    @property
    def rank(self) -> int:
        return self.a01.rank

    @property
    def a10(self) -> LatticeForm:
        """Derived (1,0) connection part -(A01)^dagger (unitarity)."""
        return LatticeForm(self.grid, D10, -adjoint(self.a01.data))

    @property
    def a_pair(self) -> OneForm:
        return OneForm(self.a10, self.a01)


@dataclass(frozen=True)
class TangentVector:
    """Infinitesimal deformation (alpha, gamma): alpha01 free, alpha10 derived."""

    alpha01: LatticeForm
    gamma10: LatticeForm

    def __post_init__(self):
        if self.alpha01.degree != D01 or self.gamma10.degree != D10:
            raise DomainError("tangent parts must have degrees (0,1) and (1,0)")
        if self.alpha01.grid != self.gamma10.grid or self.alpha01.rank != self.gamma10.rank:
            raise DomainError("tangent parts live on different grids/ranks")

    @property
    def grid(self) -> SurfaceGrid:
        return self.alpha01.grid

    @property
    def rank(self) -> int:
        return self.alpha01.rank

    @property
    def alpha10(self) -> LatticeForm:
        return LatticeForm(self.grid, D10, -adjoint(self.alpha01.data))

    @property
    def alpha_pair(self) -> OneForm:
        return OneForm(self.alpha10, self.alpha01)

    @property
    def gamma01(self) -> LatticeForm:
        """Derived (0,1) Higgs deformation -(gamma10)^dagger."""
        return LatticeForm(self.grid, D01, -adjoint(self.gamma10.data))

    @property
    def gamma_pair(self) -> OneForm:
        return OneForm(self.gamma10, self.gamma01)

    def __add__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector(self.alpha01 + other.alpha01, self.gamma10 + other.gamma10)

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector(self.alpha01 - other.alpha01, self.gamma10 - other.gamma10)

    def __neg__(self) -> "TangentVector":
        return TangentVector(-self.alpha01, -self.gamma10)

    def scale(self, t: float) -> "TangentVector":
        """Real rescaling (the only scalar action preserving the pair structure)."""
        t = float(t)
        return TangentVector(self.alpha01 * t, self.gamma10 * t)

    def norm(self) -> float:
        """Configuration-space metric norm sqrt(g(X, X)).

        Component form 4 h^2 sum(|alpha01|^2 + |gamma10|^2); the geometry module
        evaluates the same metric through the displayed pairing.
        """
        h = self.grid.spacing
        s = np.sum(np.abs(self.alpha01.data) ** 2) + np.sum(np.abs(self.gamma10.data) ** 2)
        return float(np.sqrt(4.0 * h * h * s))


def zero_configuration(grid: SurfaceGrid, rank: int) -> Configuration:
    return Configuration(zero_form(grid, D01, rank), zero_form(grid, D10, rank))


def zero_tangent(grid: SurfaceGrid, rank: int) -> TangentVector:
    return TangentVector(zero_form(grid, D01, rank), zero_form(grid, D10, rank))


def random_configuration(
    grid: SurfaceGrid,
    rank: int,
    seed,
    amplitude: float = 0.3,
    smoothness: int | None = 2,
) -> Configuration:
    """Seeded random configuration; a01 drawn first, then phi10 (sub-seeds 0/1)."""
    a01 = random_matrix_field(grid, rank, (seed, 0), smoothness=smoothness, scale=amplitude)
    phi = random_matrix_field(grid, rank, (seed, 1), smoothness=smoothness, scale=amplitude)
    return Configuration(LatticeForm(grid, D01, a01), LatticeForm(grid, D10, phi))


def random_tangent(
    grid: SurfaceGrid,
    rank: int,
    seed,
    amplitude: float = 1.0,
    smoothness: int | None = None,
) -> TangentVector:
    """Seeded random tangent vector; alpha01 drawn first, then gamma10."""
    a = random_matrix_field(grid, rank, (seed, 0), smoothness=smoothness, scale=amplitude)
    g = random_matrix_field(grid, rank, (seed, 1), smoothness=smoothness, scale=amplitude)
    return TangentVector(LatticeForm(grid, D01, a), LatticeForm(grid, D10, g))


def translate(c: Configuration, x: TangentVector, t: float) -> Configuration:
    """c + t*X for real t."""
    t = float(t)
    return Configuration(c.a01 + t * x.alpha01, c.phi10 + t * x.gamma10)


# ---------------------------------------------------------------------------
# curvature and residuals
# ---------------------------------------------------------------------------

def skew_value_defect(w: LatticeForm) -> float:
    """Deviation of a 2-form from skew-Hermitian values.

    The dx^dy coefficient is -2i times the stored dz^dzbar coefficient, so
    skew-Hermitian values are equivalent to a Hermitian stored coefficient.
    """
    if w.degree != D2:
        raise DomainError("skew_value_defect expects a 2-form")
    return float(np.abs(w.data - adjoint(w.data)).max())


def curvature(c: Configuration) -> LatticeForm:
    """F = dA + A^A for the full derived connection; skew-Hermitian valued."""
    a = c.a_pair
    f = exterior_d(a) + wedge(a, a)
    scale = 1.0 + float(np.abs(f.data).max())
    if skew_value_defect(f) > SKEW_VALUE_TOL * scale:
        raise ConsistencyError("curvature lost skew-Hermitian values; conjugation bug")
    return f


def higgs_residual(c: Configuration) -> LatticeForm:
    """(0,1)-covariant derivative of the Higgs field: dbar(Phi) + [A01, Phi]."""
    return exterior_d(c.phi10) + form_commutator(c.a01, c.phi10)


def selfduality_residuals(c: Configuration) -> tuple[LatticeForm, LatticeForm]:
    """(F + [Phi, Phi*], dbar_A Phi); both vanish exactly on solutions."""
    r1 = curvature(c) + form_commutator(c.phi10, conj_transpose_form(c.phi10))
    r2 = higgs_residual(c)
    return r1, r2


def residual_norms(c: Configuration) -> tuple[float, float]:
    r1, r2 = selfduality_residuals(c)
    return two_form_norm(r1), two_form_norm(r2)


# ---------------------------------------------------------------------------
# gauge action
# ---------------------------------------------------------------------------

def gauge_transform(c: Configuration, g: GaugeElement) -> Configuration:
    """A01 -> g A01 g^-1 + g dbar(g^-1), Phi -> g Phi g^-1.

    g^-1 is the per-site adjoint (unitarity).  The inhomogeneous term uses the
    backward-stencil dbar so the epsilon-derivative of this action is exactly
    `gauge_vector_field`; for constant g the term vanishes and the action is an
    exact conjugation.
    """
    if not isinstance(g, GaugeElement):
        raise DomainError("gauge_transform expects a GaugeElement")
    if g.grid != c.grid or g.rank != c.rank:
        raise DomainError("gauge element and configuration live on different grids/ranks")
    h = c.grid.spacing
    gd = g.data
    gi = g.inverse_data
    a01 = gd @ c.a01.data @ gi + gd @ dbar_coeff_adj(gi, h)
    phi = gd @ c.phi10.data @ gi
    return Configuration(LatticeForm(c.grid, D01, a01), LatticeForm(c.grid, D10, phi))


def gauge_vector_field(c: Configuration, zeta: GaugeAlgebraField) -> TangentVector:
    """Infinitesimal gauge motion X = (-(d zeta - [zeta, A]), [zeta, Phi]).

    d zeta uses the backward stencil (see module docstring); the derived (1,0)
    part is recomputed independently and cross-checked, which would flag a
    stencil or conjugation bug.
    """
    if zeta.grid != c.grid or zeta.rank != c.rank:
        raise DomainError("gauge algebra field and configuration mismatch")
    h = c.grid.spacing
    z = zeta.data
    x01 = -(dbar_coeff_adj(z, h) - commutator(z, c.a01.data))
    x10_direct = -(del_coeff_adj(z, h) - commutator(z, c.a10.data))
    defect = float(np.abs(x10_direct - (-adjoint(x01))).max())
    scale = 1.0 + float(np.abs(x01).max())
    if defect > 1e-12 * scale:
        raise ConsistencyError(
            f"derived (1,0) part of the gauge vector field disagrees (defect {defect:.3e})"
        )
    x2 = commutator(z, c.phi10.data)
    return TangentVector(LatticeForm(c.grid, D01, x01), LatticeForm(c.grid, D10, x2))


# ---------------------------------------------------------------------------
# linearizations
# ---------------------------------------------------------------------------

def linearized_curvature(c: Configuration, x: TangentVector) -> LatticeForm:
    """Derivative of F along the full real tangent 1-form: d(beta) + [beta, A]."""
    beta = x.alpha_pair
    return exterior_d(beta) + form_commutator(beta, c.a_pair)


def linearized_eq2(c: Configuration, x: TangentVector) -> LatticeForm:
    """Derivative of the Higgs residual along X:
    dbar(gamma10) + [alpha01, Phi] + [A01, gamma10]."""
    return (
        exterior_d(x.gamma10)
        + form_commutator(x.alpha01, c.phi10)
        + form_commutator(c.a01, x.gamma10)
    )


# ---------------------------------------------------------------------------
# serialization: JSON header line + raw little-endian complex128 payload
# ---------------------------------------------------------------------------

_FORMAT_NAME = "hitchinlab.configuration"


def save_configuration(c: Configuration, path, seed=None) -> None:
    """Write a configuration with bit-exact round trip.

    Layout: one UTF-8 JSON header line, then the a01 and phi10 coefficient
    arrays as little-endian float64 pairs (re, im interleaved) in row-major
    site order.
    """
    header = {
        "format": _FORMAT_NAME,
        "version": 1,
        "side_count": c.grid.side_count,
        "side_length": c.grid.side_length,
        "rank": c.rank,
        "seed": seed,
        "endianness": "little",
        "arrays": ["a01", "phi10"],
    }
    a01 = np.ascontiguousarray(c.a01.data, dtype="<c16")
    phi = np.ascontiguousarray(c.phi10.data, dtype="<c16")
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
        fh.write(a01.tobytes())
        fh.write(phi.tobytes())


def load_configuration(path) -> tuple[Configuration, dict]:
    """Read a configuration written by `save_configuration`; returns (c, header)."""
    with open(path, "rb") as fh:
        header_line = fh.readline()
        payload = fh.read()
    header = json.loads(header_line.decode("utf-8"))
    if header.get("format") != _FORMAT_NAME:
        raise DomainError(f"not a {_FORMAT_NAME} file: {path}")
    N = int(header["side_count"])
    n = int(header["rank"])
    grid = SurfaceGrid(N, float(header["side_length"]))
    count = N * N * n * n
    expected = 2 * count * 16
    if len(payload) != expected:
        raise DomainError(f"payload size {len(payload)} != expected {expected} bytes")
    flat = np.frombuffer(payload, dtype="<c16")
    a01 = flat[:count].reshape(N, N, n, n).astype(np.complex128)
    phi = flat[count:].reshape(N, N, n, n).astype(np.complex128)
    c = Configuration(LatticeForm(grid, D01, a01), LatticeForm(grid, D10, phi))
    return c, header
