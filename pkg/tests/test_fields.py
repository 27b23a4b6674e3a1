import numpy as np
import pytest

import oracles
from hitchinlab import (
    D0,
    D01,
    D10,
    D2,
    DomainError,
    GaugeAlgebraField,
    GaugeElement,
    LatticeForm,
    OneForm,
    conj_transpose_form,
    exponentiate,
    form_commutator,
    random_skew_hermitian,
    trace_integrate,
    wedge,
    zero_form,
)
from hitchinlab.fields import adjoint, random_matrix_field, random_unitary


def rand_form(grid, degree, n, seed, **kw):
    return LatticeForm(grid, degree, random_matrix_field(grid, n, seed, **kw))


class TestFormCommutator:
    def test_pure_holomorphic_pair_is_symmetric(self, grid8):
        # odd-odd bracket is u^v + v^u; for two dz forms both wedges vanish
        u = rand_form(grid8, D10, 2, 1)
        v = rand_form(grid8, D10, 2, 2)
        uv = form_commutator(u, v)
        vu = form_commutator(v, u)
        assert np.allclose(uv.data, vu.data, atol=0)
        assert np.abs(uv.data).max() == 0.0

    def test_scalars_commute(self, grid8):
        u = rand_form(grid8, D0, 1, 3)
        for degree in (D0, D10, D01, D2):
            v = rand_form(grid8, degree, 1, 4)
            assert np.abs(form_commutator(u, v).data).max() <= 1e-15

    def test_zero_one_bracket_is_pointwise_commutator(self, grid8):
        u = rand_form(grid8, D0, 2, 5)
        v = rand_form(grid8, D01, 2, 6)
        w = form_commutator(u, v)
        N = grid8.side_count
        for j in range(N):
            for k in range(N):
                expected = u.data[j, k] @ v.data[j, k] - v.data[j, k] @ u.data[j, k]
                assert np.allclose(w.data[j, k], expected, atol=1e-15)

    @pytest.mark.parametrize("du,dv", [(D0, D0), (D0, D10), (D0, D01), (D10, D01), (D01, D10), (D10, D10), (D01, D01), (D0, D2)])
    def test_graded_antisymmetry_sign_rule(self, grid8, du, dv):
        # [u, v] = (-1)^{pq+1} [v, u]
        u = rand_form(grid8, du, 2, (7, hash(du) % 100))
        v = rand_form(grid8, dv, 2, (8, hash(dv) % 100))
        p = 0 if du in (D0,) else (2 if du == D2 else 1)
        q = 0 if dv in (D0,) else (2 if dv == D2 else 1)
        sign = (-1.0) ** (p * q + 1)
        lhs = form_commutator(u, v)
        rhs = form_commutator(v, u)

        def as_pair(w):
            if isinstance(w, OneForm):
                return w.p10.data, w.p01.data
            return (w.data,)

        for left, right in zip(as_pair(lhs), as_pair(rhs)):
            assert np.allclose(left, sign * right, atol=1e-14)

    def test_degree_overflow(self, grid8):
        u = rand_form(grid8, D2, 2, 9)
        v = rand_form(grid8, D10, 2, 10)
        with pytest.raises(DomainError):
            form_commutator(u, v)


class TestConjTransposeForm:
    def test_hermitian_coefficient(self, grid8):
        raw = random_matrix_field(grid8, 2, 11)
        herm = (raw + adjoint(raw)) / 2
        phi = LatticeForm(grid8, D10, herm)
        star = conj_transpose_form(phi)
        assert star.degree == D01
        assert np.allclose(star.data, herm, atol=0)

    def test_constant_imaginary_identity(self, grid8):
        N = grid8.side_count
        phi = LatticeForm(grid8, D10, np.broadcast_to(1j * np.eye(2), (N, N, 2, 2)))
        star = conj_transpose_form(phi)
        assert np.allclose(star.data, -1j * np.eye(2), atol=0)

    def test_involution(self, grid8):
        phi = rand_form(grid8, D10, 3, 12)
        assert np.allclose(conj_transpose_form(conj_transpose_form(phi)).data, phi.data, atol=0)

    def test_rejects_even_degrees(self, grid8):
        with pytest.raises(DomainError):
            conj_transpose_form(rand_form(grid8, D0, 1, 13))
        with pytest.raises(DomainError):
            conj_transpose_form(rand_form(grid8, D2, 1, 14))


class TestTraceIntegrate:
    def test_bracket_shuffle_identity(self, grid8):
        # Tr([u,v]^w) = Tr(u^[v,w]) summed over the surface
        u = rand_form(grid8, D0, 2, 15)
        v = rand_form(grid8, D10, 2, 16)
        w = rand_form(grid8, D01, 2, 17)
        lhs = trace_integrate(wedge(form_commutator(u, v), w))
        rhs = trace_integrate(wedge(u, form_commutator(v, w)))
        assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))

    def test_zero(self, grid8):
        assert trace_integrate(zero_form(grid8, D2, 2)) == 0

    def test_matches_per_site_trace_oracle(self, grid8):
        w = rand_form(grid8, D2, 2, 18)
        expected = oracles.trace_integrate_two_form(w.data, grid8.spacing)
        assert abs(trace_integrate(w) - expected) <= 1e-13 * (1 + abs(expected))


class TestRandomFields:
    def test_determinism(self, grid8):
        a = random_skew_hermitian(grid8, 2, 42, smoothness=2)
        b = random_skew_hermitian(grid8, 2, 42, smoothness=2)
        assert np.array_equal(a.data, b.data)
        c = random_skew_hermitian(grid8, 2, 43, smoothness=2)
        assert not np.array_equal(a.data, c.data)

    def test_skew_hermitian_exactly(self, grid8):
        z = random_skew_hermitian(grid8, 3, 1)
        assert np.abs(z.data + adjoint(z.data)).max() == 0.0

    def test_rank_one_is_purely_imaginary(self, grid8):
        z = random_skew_hermitian(grid8, 1, 2)
        assert np.abs(z.data.real).max() == 0.0

    def test_smoothness_zero_gives_constants(self, grid8):
        z = random_skew_hermitian(grid8, 2, 3, smoothness=0)
        assert np.abs(z.data - z.data[0, 0]).max() <= 1e-15

    def test_validates_skewness(self, grid8):
        bad = random_matrix_field(grid8, 2, 4)
        with pytest.raises(DomainError):
            GaugeAlgebraField(grid8, bad)


class TestExponentiate:
    def test_zero_step_is_identity(self, grid8):
        z = random_skew_hermitian(grid8, 2, 5)
        g = exponentiate(z, 0.0)
        assert np.allclose(g.data, np.eye(2), atol=1e-15)

    def test_rank_one_scalar_exponential(self, grid8):
        N = grid8.side_count
        z = GaugeAlgebraField(grid8, np.full((N, N, 1, 1), 0.7j))
        g = exponentiate(z, 0.5)
        assert np.allclose(g.data, np.exp(0.35j), atol=1e-15)

    def test_linearization_defect_is_quadratic(self, grid8):
        z = random_skew_hermitian(grid8, 2, 6, smoothness=2)
        defects = []
        for eps in (1e-2, 1e-3):
            g = exponentiate(z, eps)
            lin = np.broadcast_to(np.eye(2), g.data.shape) + eps * z.data
            defects.append(np.abs(g.data - lin).max())
        ratio = defects[0] / defects[1]
        assert 100 * 0.8 <= ratio <= 100 * 1.2

    def test_unitarity_at_large_norm(self, grid8):
        z = random_skew_hermitian(grid8, 3, 7, scale=3.0)
        g = exponentiate(z, 3.0)  # per-site norms up to ~10
        eye = np.eye(3)
        defect = np.abs(adjoint(g.data) @ g.data - eye).max()
        assert defect <= 1e-12

    def test_gauge_element_validates_unitarity(self, grid8):
        bad = random_matrix_field(grid8, 2, 8)
        with pytest.raises(DomainError):
            GaugeElement(grid8, bad)


class TestTraceLemmas:
    def test_cyclic_commutator_trace(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            a, b, c = rng.standard_normal((3, 3, 3)) + 1j * rng.standard_normal((3, 3, 3))
            lhs = np.trace((a @ b - b @ a) @ c)
            rhs = np.trace((b @ c - c @ b) @ a)
            assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))

    def test_real_adjoint_pairing_symmetry(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            a, b = rng.standard_normal((2, 3, 3)) + 1j * rng.standard_normal((2, 3, 3))
            lhs = np.trace(a @ b.conj().T).real
            rhs = np.trace(b @ a.conj().T).real
            assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))

    def test_self_pairing_is_real(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            c = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            val = np.trace(c @ c.conj().T)
            assert abs(val.imag) <= 1e-14 * (1 + abs(val.real))

    def test_random_unitary_is_unitary(self):
        for n in (1, 2, 3):
            u = random_unitary(n, (12, n))
            assert np.abs(u @ u.conj().T - np.eye(n)).max() <= 1e-13
