"""Discrete exterior calculus on a flat periodic torus with matrix coefficients.

The surface is an N x N periodic grid of spacing h = L/N with complex
coordinate z = (j + i*k) h.  A field assigns an n x n complex matrix to every
site.  Forms of pure degree store a single coefficient array: the value itself
for a 0-form, the coefficient of dz, dzbar or dz^dzbar otherwise; a general
1-form is an ordered pair of pure parts (`OneForm`).

Derivatives are forward differences, so d(d(f)) = 0 holds exactly on the
periodic grid.  The starred `_adj` variants use backward differences, the
negative adjoints of the forward ones under plain site summation; pairing a
forward derivative against a backward one turns integration by parts into an
identity of floating-point sums instead of an O(h) approximation.

Integration converts the dz^dzbar coefficient through dz^dzbar = -2i dx^dy,
with the total area normalized to L^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError

# Pure form degrees.
D0 = "0"
D10 = "(1,0)"
D01 = "(0,1)"
D2 = "2"

_DEGREES = (D0, D10, D01, D2)
_DEGREE_INT = {D0: 0, D10: 1, D01: 1, D2: 2}


@dataclass(frozen=True)
class SurfaceGrid:
    """Periodic N x N grid with spacing h = side_length / side_count."""

    side_count: int
    side_length: float

    def __post_init__(self):
        if not isinstance(self.side_count, (int, np.integer)) or self.side_count < 2:
            raise DomainError(f"side_count must be an integer >= 2, got {self.side_count!r}")
        if not float(self.side_length) > 0.0:
            raise DomainError(f"side_length must be positive, got {self.side_length!r}")
        object.__setattr__(self, "side_count", int(self.side_count))
        object.__setattr__(self, "side_length", float(self.side_length))

    @property
    def spacing(self) -> float:
        return self.side_length / self.side_count

    @property
    def site_count(self) -> int:
        return self.side_count * self.side_count

    def coordinates(self) -> np.ndarray:
        """Complex coordinate z = (j + i*k) h at every site, shape (N, N)."""
        j = np.arange(self.side_count)
        return (j[:, None] + 1j * j[None, :]) * self.spacing


def make_torus_grid(side_count: int, side_length: float) -> SurfaceGrid:
    """Build a periodic grid; rejects side_count < 2 or side_length <= 0."""
    return SurfaceGrid(side_count, side_length)


@dataclass(frozen=True)
class LatticeForm:
    """Matrix-valued form of pure degree sampled on a grid.

    ``data[j, k]`` is the n x n coefficient at site (j, k).  The degree is
    immutable; coefficient arrays are stored read-only.
    """

    grid: SurfaceGrid
    degree: str
    data: np.ndarray

    def __post_init__(self):
        if self.degree not in _DEGREES:
            raise DomainError(f"degree must be one of {_DEGREES}, got {self.degree!r}")
        arr = np.array(self.data, dtype=np.complex128, order="C")
        N = self.grid.side_count
        if arr.ndim != 4 or arr.shape[:2] != (N, N) or arr.shape[2] != arr.shape[3] or arr.shape[2] < 1:
            raise DomainError(
                f"coefficients must have shape (N, N, n, n) with N={N}, got {arr.shape}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def rank(self) -> int:
        return self.data.shape[2]

    def degree_int(self) -> int:
        return _DEGREE_INT[self.degree]

    def _require_compatible(self, other: "LatticeForm") -> None:
        if self.grid != other.grid or self.rank != other.rank:
            raise DomainError("forms live on different grids or have different ranks")
        if self.degree != other.degree:
            raise DomainError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "LatticeForm") -> "LatticeForm":
        self._require_compatible(other)
        return LatticeForm(self.grid, self.degree, self.data + other.data)

    def __sub__(self, other: "LatticeForm") -> "LatticeForm":
        self._require_compatible(other)
        return LatticeForm(self.grid, self.degree, self.data - other.data)

    def __neg__(self) -> "LatticeForm":
        return LatticeForm(self.grid, self.degree, -self.data)

    def __mul__(self, scalar: complex) -> "LatticeForm":
        return LatticeForm(self.grid, self.degree, self.data * complex(scalar))

    __rmul__ = __mul__


@dataclass(frozen=True)
class OneForm:
    """General 1-form stored as its pure parts: p10 * dz + p01 * dzbar."""

    p10: LatticeForm
    p01: LatticeForm

    def __post_init__(self):
        if self.p10.degree != D10 or self.p01.degree != D01:
            raise DomainError("OneForm parts must have degrees (1,0) and (0,1)")
        if self.p10.grid != self.p01.grid or self.p10.rank != self.p01.rank:
            raise DomainError("OneForm parts live on different grids or ranks")

    @property
    def grid(self) -> SurfaceGrid:
        return self.p10.grid

    @property
    def rank(self) -> int:
        return self.p10.rank

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.p10 + other.p10, self.p01 + other.p01)

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.p10 - other.p10, self.p01 - other.p01)

    def __neg__(self) -> "OneForm":
        return OneForm(-self.p10, -self.p01)

    def __mul__(self, scalar: complex) -> "OneForm":
        return OneForm(self.p10 * scalar, self.p01 * scalar)

    __rmul__ = __mul__


Form = Union[LatticeForm, OneForm]


def degree_int(w: Form) -> int:
    """Total degree of a pure form or a 1-form pair."""
    return 1 if isinstance(w, OneForm) else w.degree_int()


def zero_form(grid: SurfaceGrid, degree: str, rank: int) -> LatticeForm:
    N = grid.side_count
    return LatticeForm(grid, degree, np.zeros((N, N, rank, rank), dtype=np.complex128))


def zero_one_form(grid: SurfaceGrid, rank: int) -> OneForm:
    return OneForm(zero_form(grid, D10, rank), zero_form(grid, D01, rank))


def constant_form(grid: SurfaceGrid, degree: str, matrix: np.ndarray) -> LatticeForm:
    """Form with the same n x n coefficient at every site."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    N = grid.side_count
    return LatticeForm(grid, degree, np.broadcast_to(m, (N, N) + m.shape))


# ---------------------------------------------------------------------------
# difference stencils on coefficient arrays
# ---------------------------------------------------------------------------

def _dx(f: np.ndarray, h: float) -> np.ndarray:
    return (np.roll(f, -1, axis=0) - f) / h


def _dy(f: np.ndarray, h: float) -> np.ndarray:
    return (np.roll(f, -1, axis=1) - f) / h


def _dx_adj(f: np.ndarray, h: float) -> np.ndarray:
    return (f - np.roll(f, 1, axis=0)) / h


def _dy_adj(f: np.ndarray, h: float) -> np.ndarray:
    return (f - np.roll(f, 1, axis=1)) / h


def del_coeff(f: np.ndarray, h: float) -> np.ndarray:
    """dz-direction derivative (d_x - i d_y)/2, forward stencil."""
    return (_dx(f, h) - 1j * _dy(f, h)) / 2.0


def dbar_coeff(f: np.ndarray, h: float) -> np.ndarray:
    """dzbar-direction derivative (d_x + i d_y)/2, forward stencil."""
    return (_dx(f, h) + 1j * _dy(f, h)) / 2.0


def del_coeff_adj(f: np.ndarray, h: float) -> np.ndarray:
    """Backward-stencil companion of `del_coeff` (its negative adjoint)."""
    return (_dx_adj(f, h) - 1j * _dy_adj(f, h)) / 2.0


def dbar_coeff_adj(f: np.ndarray, h: float) -> np.ndarray:
    """Backward-stencil companion of `dbar_coeff` (its negative adjoint)."""
    return (_dx_adj(f, h) + 1j * _dy_adj(f, h)) / 2.0


def _require_zero_form(f: LatticeForm, op: str) -> None:
    if not isinstance(f, LatticeForm) or f.degree != D0:
        raise DomainError(f"{op} expects a 0-form")


def del_(f: LatticeForm) -> LatticeForm:
    """(1,0) part of the exterior derivative of a 0-form."""
    _require_zero_form(f, "del_")
    return LatticeForm(f.grid, D10, del_coeff(f.data, f.grid.spacing))


def dbar(f: LatticeForm) -> LatticeForm:
    """(0,1) part of the exterior derivative of a 0-form."""
    _require_zero_form(f, "dbar")
    return LatticeForm(f.grid, D01, dbar_coeff(f.data, f.grid.spacing))


def exterior_d(w: Form) -> Form:
    """Exterior derivative: 0-form -> OneForm, 1-form -> 2-form.

    d(eta dz) = -dbar(eta) dz^dzbar and d(eta dzbar) = +del(eta) dz^dzbar.
    """
    if isinstance(w, OneForm):
        h = w.grid.spacing
        coeff = del_coeff(w.p01.data, h) - dbar_coeff(w.p10.data, h)
        return LatticeForm(w.grid, D2, coeff)
    h = w.grid.spacing
    if w.degree == D0:
        return OneForm(del_(w), dbar(w))
    if w.degree == D10:
        return LatticeForm(w.grid, D2, -dbar_coeff(w.data, h))
    if w.degree == D01:
        return LatticeForm(w.grid, D2, del_coeff(w.data, h))
    raise DomainError("exterior_d is defined for degrees 0 and 1 only")


def exterior_d_adj(w: Form) -> Form:
    """Backward-stencil exterior derivative.

    Satisfies trace_integrate(exterior_d(f) ^ w) = -trace_integrate(f * exterior_d_adj(w))
    exactly for 0-forms f and 1-forms w on the periodic grid.
    """
    if isinstance(w, OneForm):
        h = w.grid.spacing
        coeff = del_coeff_adj(w.p01.data, h) - dbar_coeff_adj(w.p10.data, h)
        return LatticeForm(w.grid, D2, coeff)
    h = w.grid.spacing
    if w.degree == D0:
        return OneForm(
            LatticeForm(w.grid, D10, del_coeff_adj(w.data, h)),
            LatticeForm(w.grid, D01, dbar_coeff_adj(w.data, h)),
        )
    if w.degree == D10:
        return LatticeForm(w.grid, D2, -dbar_coeff_adj(w.data, h))
    if w.degree == D01:
        return LatticeForm(w.grid, D2, del_coeff_adj(w.data, h))
    raise DomainError("exterior_d_adj is defined for degrees 0 and 1 only")


# ---------------------------------------------------------------------------
# wedge, integration, Hodge stars
# ---------------------------------------------------------------------------

def _require_same_space(u: Form, v: Form) -> None:
    gu = u.grid if isinstance(u, OneForm) else u.grid
    gv = v.grid if isinstance(v, OneForm) else v.grid
    if gu != gv or u.rank != v.rank:
        raise DomainError("wedge arguments live on different grids or have different ranks")


def wedge(u: Form, v: Form) -> Form:
    """Pointwise matrix wedge product.

    Sign rules: dz^dz = dzbar^dzbar = 0, dzbar^dz = -dz^dzbar.  The result
    degree is the sum; sums above 2 are rejected.
    """
    _require_same_space(u, v)
    p, q = degree_int(u), degree_int(v)
    if p + q > 2:
        raise DomainError(f"wedge of degrees {p} and {q} exceeds the surface dimension")

    if isinstance(u, OneForm) and isinstance(v, OneForm):
        coeff = u.p10.data @ v.p01.data - u.p01.data @ v.p10.data
        return LatticeForm(u.grid, D2, coeff)
    if isinstance(u, OneForm):
        if v.degree == D0:
            return OneForm(
                LatticeForm(u.grid, D10, u.p10.data @ v.data),
                LatticeForm(u.grid, D01, u.p01.data @ v.data),
            )
        if v.degree == D10:
            return LatticeForm(u.grid, D2, -(u.p01.data @ v.data))
        return LatticeForm(u.grid, D2, u.p10.data @ v.data)
    if isinstance(v, OneForm):
        if u.degree == D0:
            return OneForm(
                LatticeForm(u.grid, D10, u.data @ v.p10.data),
                LatticeForm(u.grid, D01, u.data @ v.p01.data),
            )
        if u.degree == D10:
            return LatticeForm(u.grid, D2, u.data @ v.p01.data)
        return LatticeForm(u.grid, D2, -(u.data @ v.p10.data))

    # pure x pure
    du, dv = u.degree, v.degree
    if du == D0 or dv == D0:
        other_degree = dv if du == D0 else du
        return LatticeForm(u.grid, other_degree, u.data @ v.data)
    if du == D10 and dv == D10:
        return zero_form(u.grid, D2, u.rank)
    if du == D01 and dv == D01:
        return zero_form(u.grid, D2, u.rank)
    if du == D10 and dv == D01:
        return LatticeForm(u.grid, D2, u.data @ v.data)
    if du == D01 and dv == D10:
        return LatticeForm(u.grid, D2, -(u.data @ v.data))
    raise DomainError(f"cannot wedge degrees {du} and {dv}")


def integrate(w: LatticeForm) -> np.ndarray:
    """Integrate a 2-form over the torus; returns the n x n matrix sum.

    The dz^dzbar coefficient is converted through dz^dzbar = -2i dx^dy and
    summed with weight h^2.  Compose with a trace for the scalar pairing.
    """
    if not isinstance(w, LatticeForm) or w.degree != D2:
        raise DomainError("integrate expects a 2-form")
    h = w.grid.spacing
    return (-2j) * h * h * w.data.sum(axis=(0, 1))


def hodge1(w: Form) -> Form:
    """Degree-preserving Hodge star: eta dz -> -i eta dz, eta dzbar -> +i eta dzbar."""
    if isinstance(w, OneForm):
        return OneForm(w.p10 * (-1j), w.p01 * 1j)
    if w.degree == D10:
        return w * (-1j)
    if w.degree == D01:
        return w * 1j
    raise DomainError("hodge1 expects a 1-form")


def hodge2(w: Form) -> Form:
    """Conjugate-linear Hodge star: eta dz -> conj(eta) dzbar, eta dzbar -> -conj(eta) dz.

    Entrywise complex conjugation, no transpose.
    """
    if isinstance(w, OneForm):
        return OneForm(
            LatticeForm(w.grid, D10, -np.conj(w.p01.data)),
            LatticeForm(w.grid, D01, np.conj(w.p10.data)),
        )
    if w.degree == D10:
        return LatticeForm(w.grid, D01, np.conj(w.data))
    if w.degree == D01:
        return LatticeForm(w.grid, D10, -np.conj(w.data))
    raise DomainError("hodge2 expects a 1-form")


def two_form_norm(w: LatticeForm) -> float:
    """L2 norm of a 2-form: Frobenius norm of the dx^dy coefficient, weight h^2.

    Equals sqrt(4 h^2 sum |coeff|^2) since the dx^dy coefficient is -2i times
    the stored dz^dzbar coefficient.
    """
    if not isinstance(w, LatticeForm) or w.degree != D2:
        raise DomainError("two_form_norm expects a 2-form")
    h = w.grid.spacing
    return float(np.sqrt(4.0 * h * h * np.sum(np.abs(w.data) ** 2)))
