import numpy as np
import pytest

import oracles
from hitchinlab import (
    D0,
    D01,
    D10,
    D2,
    DomainError,
    LatticeForm,
    OneForm,
    dbar,
    del_,
    exterior_d,
    exterior_d_adj,
    hodge1,
    hodge2,
    integrate,
    make_torus_grid,
    trace_integrate,
    wedge,
    zero_form,
)
from hitchinlab.fields import random_matrix_field


def form(grid, degree, data):
    return LatticeForm(grid, degree, data)


def rand_form(grid, degree, n, seed, **kw):
    return form(grid, degree, random_matrix_field(grid, n, seed, **kw))


class TestGrid:
    def test_constructor_arithmetic(self):
        g = make_torus_grid(4, 1.0)
        assert g.site_count == 16
        assert g.spacing == 0.25
        g2 = make_torus_grid(2, 2.0)
        assert g2.site_count == 4
        assert g2.spacing == 1.0

    def test_rejects_bad_parameters(self):
        with pytest.raises(DomainError):
            make_torus_grid(1, 1.0)
        with pytest.raises(DomainError):
            make_torus_grid(4, 0.0)
        with pytest.raises(DomainError):
            make_torus_grid(4, -2.0)

    def test_total_area(self, grid8):
        # area 2-form dx^dy has dz^dzbar coefficient i/2
        N = grid8.side_count
        area_form = form(grid8, D2, np.full((N, N, 1, 1), 0.5j))
        area = integrate(area_form)[0, 0]
        assert abs(area - grid8.side_length**2) <= 1e-12


class TestDerivatives:
    def test_constant_is_closed(self, grid8):
        N = grid8.side_count
        f = form(grid8, D0, np.broadcast_to(np.eye(2) * (1.3 - 0.2j), (N, N, 2, 2)))
        df = exterior_d(f)
        assert np.abs(df.p10.data).max() == 0.0
        assert np.abs(df.p01.data).max() == 0.0

    def test_summation_by_parts_against_direct_oracle(self, grid8):
        # pairing of the forward derivative with a test form matches the
        # backward-difference adjoint, summed site by site
        N = grid8.side_count
        j = np.arange(N)
        fdata = np.exp(2j * np.pi * j / N)[:, None, None, None] * np.ones((N, N, 1, 1))
        f = form(grid8, D0, fdata)
        assert np.abs(del_(f).data).max() > 0
        assert np.abs(dbar(f).data).max() > 0
        w = OneForm(rand_form(grid8, D10, 1, 1), rand_form(grid8, D01, 1, 2))
        lhs = trace_integrate(wedge(exterior_d(f), w))
        rhs = -trace_integrate(wedge(f, exterior_d_adj(w)))
        assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))

    def test_real_field_conjugation_symmetry(self, grid8):
        data = random_matrix_field(grid8, 1, 3).real.astype(complex)
        f = form(grid8, D0, data)
        assert np.allclose(np.conj(del_(f).data), dbar(f).data, atol=1e-15)

    def test_summation_by_parts_random_fields(self, grid8):
        for seed in range(5):
            f = rand_form(grid8, D0, 2, (seed, 0))
            for degree in (D10, D01):
                w10 = rand_form(grid8, D10, 2, (seed, 1))
                w01 = rand_form(grid8, D01, 2, (seed, 2))
                w = OneForm(w10, w01)
                lhs = trace_integrate(wedge(exterior_d(f), w))
                rhs = -trace_integrate(wedge(f, exterior_d_adj(w)))
                assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))

    def test_d_squared_vanishes(self, grid8):
        f = rand_form(grid8, D0, 2, 7)
        ddf = exterior_d(exterior_d(f))
        assert np.abs(ddf.data).max() <= 1e-13

    def test_leibniz_defect_halves_with_spacing(self):
        # forward differences satisfy the product rule only to O(h)
        def defect(N):
            g = make_torus_grid(N, 1.0)
            jj = np.arange(N)
            x = jj[:, None] / N
            y = jj[None, :] / N
            fdata = (np.sin(2 * np.pi * x) + 1j * np.cos(2 * np.pi * y))[:, :, None, None]
            gdata = np.cos(2 * np.pi * (x + y))[:, :, None, None]
            f = form(g, D0, fdata * np.ones((1, 1, 1, 1)))
            fg = form(g, D0, fdata * gdata)
            gf = form(g, D0, gdata * np.ones((1, 1, 1, 1)))
            lhs = exterior_d(fg)
            rhs10 = wedge(del_(f), gf) + wedge(f, del_(gf))
            rhs01 = wedge(dbar(f), gf) + wedge(f, dbar(gf))
            d10 = np.abs(lhs.p10.data - rhs10.data).max()
            d01 = np.abs(lhs.p01.data - rhs01.data).max()
            return max(d10, d01)

        d8, d16 = defect(8), defect(16)
        ratio = d8 / d16
        assert 2.0 * 0.8 <= ratio <= 2.0 * 1.2

    def test_degree_errors(self, grid8):
        two = rand_form(grid8, D2, 1, 11)
        with pytest.raises(DomainError):
            dbar(two)
        with pytest.raises(DomainError):
            del_(two)
        with pytest.raises(DomainError):
            exterior_d(two)


class TestWedge:
    def test_dz_wedge_dz_vanishes(self, grid8):
        u = rand_form(grid8, D10, 2, 1)
        v = rand_form(grid8, D10, 2, 2)
        assert np.abs(wedge(u, v).data).max() == 0.0

    def test_scalar_anticommutation(self, grid8):
        u = rand_form(grid8, D10, 1, 3)
        v = rand_form(grid8, D01, 1, 4)
        uv = wedge(u, v)
        vu = wedge(v, u)
        assert np.allclose(uv.data, -vu.data, atol=0)

    def test_coefficient_is_matrix_product(self, grid8):
        u = rand_form(grid8, D10, 2, 5)
        v = rand_form(grid8, D01, 2, 6)
        w = wedge(u, v)
        N = grid8.side_count
        for j in range(N):
            for k in range(N):
                assert np.allclose(w.data[j, k], u.data[j, k] @ v.data[j, k], atol=1e-15)

    def test_pair_wedge_matches_oracle(self, grid8):
        u = OneForm(rand_form(grid8, D10, 2, 7), rand_form(grid8, D01, 2, 8))
        v = OneForm(rand_form(grid8, D10, 2, 9), rand_form(grid8, D01, 2, 10))
        w = wedge(u, v)
        expected = oracles.wedge_two_form_coeff(
            u.p10.data, u.p01.data, v.p10.data, v.p01.data
        )
        assert np.allclose(w.data, expected, atol=1e-14)

    def test_degree_overflow(self, grid8):
        u = rand_form(grid8, D2, 1, 11)
        v = rand_form(grid8, D10, 1, 12)
        with pytest.raises(DomainError):
            wedge(u, v)

    def test_rank_mismatch(self, grid8):
        u = rand_form(grid8, D10, 1, 13)
        v = rand_form(grid8, D01, 2, 14)
        with pytest.raises(DomainError):
            wedge(u, v)


class TestIntegrate:
    def test_constant_unit(self, grid8):
        N = grid8.side_count
        w = form(grid8, D2, np.ones((N, N, 1, 1)))
        assert abs(integrate(w)[0, 0] - (-2j)) <= 1e-14

    def test_zero(self, grid8):
        assert np.abs(integrate(zero_form(grid8, D2, 2))).max() == 0.0

    def test_oscillating_mode_integrates_to_zero(self, grid8):
        N = grid8.side_count
        j = np.arange(N)
        coeff = np.exp(2j * np.pi * j / N)[:, None, None, None] * np.ones((N, N, 1, 1))
        w = form(grid8, D2, coeff)
        # closed-form geometric sum: q^N = 1 so the column sum vanishes
        q = np.exp(2j * np.pi / N)
        geometric = (q**N - 1) / (q - 1) * N
        assert abs(geometric) <= 1e-12
        assert abs(integrate(w)[0, 0]) <= 1e-12

    def test_linearity(self, grid8):
        u = rand_form(grid8, D2, 2, 15)
        v = rand_form(grid8, D2, 2, 16)
        lhs = integrate(u + 2.5 * v)
        assert np.allclose(lhs, integrate(u) + 2.5 * integrate(v), atol=1e-13)

    def test_matches_site_loop_oracle(self, grid8):
        u = rand_form(grid8, D2, 2, 17)
        expected = oracles.integrate_two_form(u.data, grid8.spacing)
        assert np.allclose(integrate(u), expected, atol=1e-13)

    def test_rejects_non_two_form(self, grid8):
        with pytest.raises(DomainError):
            integrate(rand_form(grid8, D10, 1, 18))


class TestHodgeStars:
    def test_hodge1_rules(self, grid8):
        u = rand_form(grid8, D10, 2, 19)
        v = rand_form(grid8, D01, 2, 20)
        assert np.allclose(hodge1(u).data, -1j * u.data, atol=0)
        assert np.allclose(hodge1(v).data, 1j * v.data, atol=0)

    def test_hodge1_squares_to_minus_one(self, grid8):
        w = OneForm(rand_form(grid8, D10, 2, 21), rand_form(grid8, D01, 2, 22))
        ww = hodge1(hodge1(w))
        assert np.allclose(ww.p10.data, -w.p10.data, atol=0)
        assert np.allclose(ww.p01.data, -w.p01.data, atol=0)

    def test_hodge2_rules(self, grid8):
        u = rand_form(grid8, D10, 2, 23)
        v = rand_form(grid8, D01, 2, 24)
        su = hodge2(u)
        assert su.degree == D01
        assert np.allclose(su.data, np.conj(u.data), atol=0)
        sv = hodge2(v)
        assert sv.degree == D10
        assert np.allclose(sv.data, -np.conj(v.data), atol=0)

    def test_hodge2_squares_to_minus_one(self, grid8):
        u = rand_form(grid8, D10, 2, 25)
        uu = hodge2(hodge2(u))
        assert uu.degree == D10
        assert np.allclose(uu.data, -u.data, atol=0)

    def test_star_composition_commutes(self, grid8):
        # from the four displayed rules both orders equal eta -> i conj(eta) dzbar
        u = rand_form(grid8, D10, 2, 26)
        lhs = hodge1(hodge2(u))
        rhs = hodge2(hodge1(u))
        assert lhs.degree == rhs.degree == D01
        assert np.allclose(lhs.data, rhs.data, atol=0)
        assert np.allclose(lhs.data, 1j * np.conj(u.data), atol=0)

    def test_wrong_degree(self, grid8):
        with pytest.raises(DomainError):
            hodge1(rand_form(grid8, D2, 1, 27))
        with pytest.raises(DomainError):
            hodge2(rand_form(grid8, D0, 1, 28))


class TestFormContainer:
    def test_degree_immutable_and_validated(self, grid8):
        with pytest.raises(DomainError):
            rand_form(grid8, "(2,0)", 1, 29)
        f = rand_form(grid8, D0, 1, 30)
        with pytest.raises(Exception):
            f.data[0, 0, 0, 0] = 1.0

    def test_shape_validation(self, grid8):
        with pytest.raises(DomainError):
            LatticeForm(grid8, D0, np.zeros((3, 3, 1, 1)))
