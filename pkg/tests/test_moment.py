import numpy as np
import pytest

import oracles
from hitchinlab import (
    GaugeAlgebraField,
    complex_structure,
    constant_gauge_element,
    df_higgs,
    dh_curvature,
    dmoment,
    gauge_transform,
    gauge_vector_field,
    hamiltonian,
    moment,
    omega,
    random_configuration,
    random_skew_hermitian,
    random_tangent,
    seed_solution,
    slice_pairing_checks,
    translate,
    two_form_norm,
    verify_hamiltonian_identity,
)
from hitchinlab.configuration import zero_tangent
from hitchinlab.fields import adjoint


class TestMoment:
    def test_vanishes_on_rank_one_solution(self, grid8):
        m = moment(seed_solution(grid8, 1, 0.4 - 1.1j))
        assert np.abs(m.form.data).max() == 0.0
        assert m.skew_defect == 0.0

    def test_equivariance_constant_gauge(self, grid8):
        c = random_configuration(grid8, 2, 80)
        g = constant_gauge_element(grid8, 2, 81)
        lhs = moment(gauge_transform(c, g)).form.data
        rhs = g.data @ moment(c).form.data @ g.inverse_data
        assert np.abs(lhs - rhs).max() <= 1e-10 * (1 + np.abs(rhs).max())

    def test_two_path_assembly(self, grid8):
        c = random_configuration(grid8, 2, 82)
        m = moment(c).form.data
        expected = oracles.curvature_coeff(np.array(c.a01.data), grid8.spacing)
        phi = c.phi10.data
        N = grid8.side_count
        for j in range(N):
            for k in range(N):
                p = phi[j, k]
                expected[j, k] += p @ p.conj().T - p.conj().T @ p
        assert np.allclose(m, expected, atol=1e-12)

    def test_values_skew_hermitian(self, grid8):
        m = moment(random_configuration(grid8, 3, 83))
        # dz^dzbar coefficient Hermitian <=> dx^dy values skew-Hermitian
        assert np.abs(m.form.data - adjoint(m.form.data)).max() <= 1e-12


class TestHamiltonian:
    def test_zero_generator(self, grid8):
        c = random_configuration(grid8, 2, 84)
        zeta = random_skew_hermitian(grid8, 2, 85, scale=0.0)
        h = hamiltonian(c, zeta)
        assert h.total == 0.0

    def test_vanishes_on_solutions(self, grid8):
        c = seed_solution(grid8, 1, 1 + 2j)
        for t in range(5):
            zeta = random_skew_hermitian(grid8, 1, (86, t), smoothness=2)
            assert abs(hamiltonian(c, zeta).total) <= 1e-14

    def test_abelian_higgs_part_vanishes(self, grid8):
        c = random_configuration(grid8, 1, 87)
        zeta = random_skew_hermitian(grid8, 1, 88, smoothness=2)
        h = hamiltonian(c, zeta)
        assert h.higgs_part == 0.0
        assert h.total == h.curvature_part

    def test_realness(self, grid8):
        c = random_configuration(grid8, 3, 89)
        zeta = random_skew_hermitian(grid8, 3, 90)
        h = hamiltonian(c, zeta)
        assert h.realness_defect <= 1e-10 * (1 + abs(h.total))


class TestPairingIdentities:
    def test_zero_generator_gives_zeros(self, grid8):
        c = random_configuration(grid8, 2, 91)
        zeta = random_skew_hermitian(grid8, 2, 92, scale=0.0)
        y = random_tangent(grid8, 2, 93)
        p4 = dh_curvature(c, zeta, y)
        p5 = df_higgs(c, zeta, y)
        assert p4.left == p4.right == 0.0
        assert p5.left == p5.right == 0.0

    def test_abelian_higgs_pairing_vanishes(self, grid8):
        c = random_configuration(grid8, 1, 94)
        zeta = random_skew_hermitian(grid8, 1, 95, smoothness=2)
        y = random_tangent(grid8, 1, 96)
        p5 = df_higgs(c, zeta, y)
        assert abs(p5.left) <= 1e-14
        assert abs(p5.right) <= 1e-14

    @pytest.mark.parametrize("rank", [1, 2, 3])
    def test_pairings_machine_exact(self, grid8, rank):
        for t in range(10):
            c = random_configuration(grid8, rank, (97, rank, t, 0))
            zeta = random_skew_hermitian(grid8, rank, (97, rank, t, 1), smoothness=2)
            y = random_tangent(grid8, rank, (97, rank, t, 2))
            p4 = dh_curvature(c, zeta, y)
            assert p4.defect <= 1e-11 * (1 + abs(p4.left))
            p5 = df_higgs(c, zeta, y)
            assert p5.defect <= 1e-11 * (1 + abs(p5.left))

    def test_curvature_pairing_matches_finite_difference(self, grid8):
        c = random_configuration(grid8, 2, 98)
        zeta = random_skew_hermitian(grid8, 2, 99, smoothness=2)
        y = random_tangent(grid8, 2, 100)
        p4 = dh_curvature(c, zeta, y)
        eps = 1e-4
        hp = hamiltonian(translate(c, y, +eps), zeta).curvature_part
        hm = hamiltonian(translate(c, y, -eps), zeta).curvature_part
        fd = (hp - hm) / (2 * eps)
        assert abs(p4.left - fd) <= 1e-6 * (1 + abs(p4.left))


class TestHamiltonianIdentity:
    @pytest.mark.parametrize("rank", [1, 2, 3])
    def test_random_triples_pass(self, grid8, rank):
        for t in range(10):
            c = random_configuration(grid8, rank, (101, rank, t, 0))
            zeta = random_skew_hermitian(grid8, rank, (101, rank, t, 1), smoothness=2)
            y = random_tangent(grid8, rank, (101, rank, t, 2))
            rep = verify_hamiltonian_identity(c, zeta, y)
            assert rep.passed, rep.to_dict()

    def test_orbit_direction_argument(self, grid8):
        c = random_configuration(grid8, 2, 102)
        zeta = random_skew_hermitian(grid8, 2, 103, smoothness=2)
        zeta2 = random_skew_hermitian(grid8, 2, 104, smoothness=2)
        y = gauge_vector_field(c, zeta2)
        rep = verify_hamiltonian_identity(c, zeta, y)
        assert rep.passed

    def test_exact_solution_nonzero_pairing(self, grid8):
        c = seed_solution(grid8, 1, 1 + 2j)
        zeta = random_skew_hermitian(grid8, 1, 105, smoothness=2)
        y = random_tangent(grid8, 1, 106)
        rep = verify_hamiltonian_identity(c, zeta, y)
        assert rep.passed
        assert abs(rep.values[0]) > 1e-6  # generically nonzero both sides

    def test_zero_generator_all_zero(self, grid8):
        c = random_configuration(grid8, 2, 107)
        zeta = random_skew_hermitian(grid8, 2, 108, scale=0.0)
        y = random_tangent(grid8, 2, 109)
        rep = verify_hamiltonian_identity(c, zeta, y)
        assert rep.passed
        assert rep.values[0] == rep.values[1] == 0.0

    def test_finite_difference_richardson_ratio(self, grid8):
        # quadratic truncation of the centered difference on the Higgs part
        c = random_configuration(grid8, 2, 110)
        zeta = random_skew_hermitian(grid8, 2, 111, smoothness=2)
        y = random_tangent(grid8, 2, 112)
        exact = dh_curvature(c, zeta, y).left + df_higgs(c, zeta, y).left

        def fd(eps):
            hp = hamiltonian(translate(c, y, +eps), zeta).total
            hm = hamiltonian(translate(c, y, -eps), zeta).total
            return (hp - hm) / (2 * eps)

        d1 = abs(fd(2e-3) - exact)
        d2 = abs(fd(1e-3) - exact)
        if d2 > 1e-11 * (1 + abs(exact)):  # above rounding floor
            assert 3.5 <= d1 / d2 <= 4.5


class TestDmoment:
    def test_zero_tangent(self, grid8):
        c = random_configuration(grid8, 2, 113)
        assert np.abs(dmoment(c, zero_tangent(grid8, 2)).data).max() == 0.0

    def test_finite_difference_oracle(self, grid8):
        c = random_configuration(grid8, 2, 114)
        x = random_tangent(grid8, 2, 115)
        lin = dmoment(c, x)
        defects = []
        for t in (1e-4, 1e-5):
            fd = (moment(translate(c, x, t)).form.data - moment(c).form.data) / t
            defects.append(np.abs(fd - lin.data).max())
        assert 10 * 0.8 <= defects[0] / defects[1] <= 10 * 1.2


class TestSlicePairings:
    def test_zero_tangent_all_zero(self, grid8):
        c = random_configuration(grid8, 2, 116)
        zeta = random_skew_hermitian(grid8, 2, 117, smoothness=2)
        rep = slice_pairing_checks(c, zero_tangent(grid8, 2), zeta)
        assert rep.passed
        assert all(v == 0.0 for v in rep.values)

    @pytest.mark.parametrize("rank", [1, 2, 3])
    def test_random_inputs_pass(self, grid8, rank):
        for t in range(10):
            c = random_configuration(grid8, rank, (118, rank, t, 0))
            x = random_tangent(grid8, rank, (118, rank, t, 1))
            zeta = random_skew_hermitian(grid8, rank, (118, rank, t, 2), smoothness=2)
            rep = slice_pairing_checks(c, x, zeta)
            assert rep.passed, rep.to_dict()

    def test_chain_ties_omega_to_moment_pairing(self, grid8):
        c = random_configuration(grid8, 2, 119)
        x = random_tangent(grid8, 2, 120)
        zeta = random_skew_hermitian(grid8, 2, 121, smoothness=2)
        xz = gauge_vector_field(c, zeta)
        rep = slice_pairing_checks(c, x, zeta)
        assert abs(rep.values[4] - omega(xz, x)) <= 1e-12 * (1 + abs(rep.values[4]))
