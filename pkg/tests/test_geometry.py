import numpy as np
import pytest

import oracles
from hitchinlab import (
    D01,
    D10,
    LatticeForm,
    TangentVector,
    complex_structure,
    metric_g,
    metric_hitchin,
    omega,
    random_tangent,
    tangent_norm,
    zero_form,
)
from hitchinlab.geometry import metric_g_detail, omega_two_paths


class TestMetric:
    def test_zero(self, grid8):
        x = TangentVector(zero_form(grid8, D01, 2), zero_form(grid8, D10, 2))
        assert metric_g(x, x) == 0.0

    @pytest.mark.parametrize("rank", [1, 2, 3])
    def test_equals_polarized_form(self, grid8, rank):
        for t in range(30):
            x = random_tangent(grid8, rank, (60, rank, t))
            gxx = metric_g(x, x)
            assert gxx > 0.0
            assert abs(gxx - metric_hitchin(x, x)) <= 1e-11 * (1 + abs(gxx))

    def test_symmetry(self, grid8):
        for t in range(20):
            x = random_tangent(grid8, 2, (61, t, 0))
            y = random_tangent(grid8, 2, (61, t, 1))
            gxy = metric_g(x, y)
            assert abs(gxy - metric_g(y, x)) <= 1e-12 * (1 + abs(gxy))

    def test_constant_connection_tangent_direct_sum(self, grid8):
        # alpha01 = i/2 at every site (alpha = i dx), no Higgs deformation
        N = grid8.side_count
        x = TangentVector(
            LatticeForm(grid8, D01, np.full((N, N, 1, 1), 0.5j)),
            zero_form(grid8, D10, 1),
        )
        expected = oracles.metric_direct(
            x.alpha01.data, x.gamma10.data, x.alpha01.data, x.gamma10.data, grid8.spacing
        )
        assert abs(metric_g(x, x) - expected) <= 1e-13 * (1 + expected)

    def test_matches_direct_summation_oracle(self, grid8):
        x = random_tangent(grid8, 2, 62)
        y = random_tangent(grid8, 2, 63)
        expected = oracles.metric_direct(
            x.alpha01.data, x.gamma10.data, y.alpha01.data, y.gamma10.data, grid8.spacing
        )
        assert abs(metric_g(x, y) - expected) <= 1e-12 * (1 + abs(expected))

    def test_realness_defect_tracked(self, grid8):
        x = random_tangent(grid8, 2, 64)
        pv = metric_g_detail(x, x)
        assert pv.realness_defect <= 1e-10 * (1 + abs(pv.value))
        assert float(pv) == pv.value

    def test_component_norm_agrees(self, grid8):
        x = random_tangent(grid8, 3, 65)
        assert abs(x.norm() - tangent_norm(x)) <= 1e-12 * (1 + x.norm())


class TestComplexStructure:
    def test_squares_to_minus_one(self, grid8):
        x = random_tangent(grid8, 2, 66)
        xx = complex_structure(complex_structure(x))
        assert np.allclose(xx.alpha01.data, -x.alpha01.data, atol=0)
        assert np.allclose(xx.gamma10.data, -x.gamma10.data, atol=0)

    def test_multiplies_components_by_i(self, grid8):
        x = random_tangent(grid8, 2, 67)
        ix = complex_structure(x)
        assert np.array_equal(ix.alpha01.data, 1j * x.alpha01.data)
        assert np.array_equal(ix.gamma10.data, 1j * x.gamma10.data)

    def test_sign_table_on_derived_parts(self, grid8):
        x = random_tangent(grid8, 2, 68)
        ix = complex_structure(x)
        assert np.array_equal(ix.alpha10.data, -1j * x.alpha10.data)
        assert np.array_equal(ix.gamma01.data, -1j * x.gamma01.data)

    def test_metric_compatibility(self, grid8):
        for t in range(20):
            x = random_tangent(grid8, 2, (69, t, 0))
            y = random_tangent(grid8, 2, (69, t, 1))
            gxy = metric_g(x, y)
            d = abs(metric_g(complex_structure(x), complex_structure(y)) - gxy)
            assert d <= 1e-11 * (1 + abs(gxy))


class TestOmega:
    def test_diagonal_vanishes(self, grid8):
        x = random_tangent(grid8, 2, 70)
        assert abs(omega(x, x)) <= 1e-12 * (1 + tangent_norm(x) ** 2)

    def test_antisymmetry(self, grid8):
        for t in range(20):
            x = random_tangent(grid8, 2, (71, t, 0))
            y = random_tangent(grid8, 2, (71, t, 1))
            oxy = omega(x, y)
            assert abs(oxy + omega(y, x)) <= 1e-11 * (1 + abs(oxy))

    def test_complex_structure_invariance(self, grid8):
        for t in range(20):
            x = random_tangent(grid8, 3, (72, t, 0))
            y = random_tangent(grid8, 3, (72, t, 1))
            oxy = omega(x, y)
            d = abs(omega(complex_structure(x), complex_structure(y)) - oxy)
            assert d <= 1e-11 * (1 + abs(oxy))

    def test_two_evaluation_paths_agree(self, grid8):
        for rank in (1, 2, 3):
            for t in range(10):
                x = random_tangent(grid8, rank, (73, rank, t, 0))
                y = random_tangent(grid8, rank, (73, rank, t, 1))
                a, b = omega_two_paths(x, y)
                assert abs(a - b) <= 1e-10 * (1 + abs(a))

    def test_sampled_nondegeneracy(self, grid8):
        x = random_tangent(grid8, 2, 74)
        probes = [random_tangent(grid8, 2, (75, t)) for t in range(8)]
        assert max(abs(omega(x, y)) for y in probes) > 0.0
