"""Numerical laboratory for the self-duality equations on a flat-torus lattice.

Layers: discrete exterior calculus with matrix coefficients (`lattice`),
gauge-algebra fields (`fields`), configurations and residuals
(`configuration`), metric/symplectic geometry (`geometry`), moment-map
identities (`moment`), orbit slices (`gauge_slice`), gradient flow (`flow`),
determinant-line curvature and spectral probes (`quillen`), and a CLI
(`cli`).
"""

from .configuration import (
    Configuration,
    TangentVector,
    curvature,
    gauge_transform,
    gauge_vector_field,
    higgs_residual,
    linearized_curvature,
    linearized_eq2,
    load_configuration,
    random_configuration,
    random_tangent,
    save_configuration,
    selfduality_residuals,
    translate,
)
from .errors import (
    ConditioningError,
    ConfigError,
    ConsistencyError,
    DegenerateBasisError,
    DomainError,
    EigensolverError,
    IdentityViolationError,
)
from .fields import (
    GaugeAlgebraField,
    GaugeElement,
    conj_transpose_form,
    constant_gauge_element,
    exponentiate,
    form_commutator,
    random_skew_hermitian,
    trace_integrate,
)
from .flow import FlowParams, FlowTrace, energy, energy_gradient, gradient_flow, seed_solution
from .gauge_slice import (
    OrbitBasis,
    fourier_generator_basis,
    orbit_basis,
    project_orthogonal,
    slice_invariance_check,
    solution_tangent_samples,
)
from .geometry import (
    PairingValue,
    complex_structure,
    metric_g,
    metric_hitchin,
    omega,
    tangent_norm,
)
from .lattice import (
    D0,
    D01,
    D10,
    D2,
    LatticeForm,
    OneForm,
    SurfaceGrid,
    dbar,
    del_,
    exterior_d,
    exterior_d_adj,
    hodge1,
    hodge2,
    integrate,
    make_torus_grid,
    two_form_norm,
    wedge,
    zero_form,
)
from .moment import (
    HamiltonianValue,
    MomentValue,
    df_higgs,
    dh_curvature,
    dmoment,
    hamiltonian,
    moment,
    slice_pairing_checks,
    verify_hamiltonian_identity,
)
from .quillen import (
    DiscreteCROperator,
    ReferenceConnection,
    SpectrumReport,
    build_cr_operator,
    curv_L,
    curv_P_sections,
    laplacian_spectrum_invariance,
    phi01_from_phi10,
    prequantum_check,
)
from .reports import IdentityReport

__version__ = "0.1.0"
