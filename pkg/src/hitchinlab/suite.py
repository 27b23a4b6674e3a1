"""Registered identity suite behind the `verify` command.

Each check draws `trials` seeded samples, evaluates one family of identities,
and reports the worst scaled discrepancy.  Discrepancies are normalized as
|a - b| / (1 + |a|), so default tolerances compare directly.  A tolerance
override (used to demonstrate the failure path) replaces every default at
judgment time.

Trials may run on a thread pool capped by HITCHIN_LAB_THREADS; results are
aggregated in trial order so report payloads stay byte-deterministic.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .configuration import random_configuration, random_tangent, translate
from .fields import adjoint, commutator, random_skew_hermitian
from .geometry import complex_structure, metric_g, metric_hitchin, omega, omega_two_paths
from .lattice import SurfaceGrid
from .moment import dh_curvature, df_higgs, hamiltonian, slice_pairing_checks, verify_hamiltonian_identity
from .quillen import curv_P_sections, prequantum_check
from .reports import IdentityReport, digest


@dataclass(frozen=True)
class VerifySettings:
    grid: SurfaceGrid
    rank: int
    seed: int
    trials: int
    tolerance_override: float | None = None

    def digest(self, check: str) -> str:
        return digest(
            check=check,
            sites=self.grid.side_count,
            length=self.grid.side_length,
            rank=self.rank,
            seed=self.seed,
            trials=self.trials,
        )


def thread_count() -> int:
    raw = os.environ.get("HITCHIN_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_trials(fn, trials: int) -> list:
    workers = thread_count()
    if workers <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))


def _judge(discrepancies, defaults, override):
    if override is not None:
        return all(d <= override for d in discrepancies)
    return all(d <= t for d, t in zip(discrepancies, defaults))


def _report(settings, name, values, discrepancies, defaults, labels, dlabels):
    tolerance = (
        settings.tolerance_override
        if settings.tolerance_override is not None
        else (defaults[0] if len(set(defaults)) == 1 else dict(zip(dlabels, defaults)))
    )
    return IdentityReport(
        identity_name=name,
        inputs_digest=settings.digest(name),
        values=values,
        discrepancies=discrepancies,
        tolerance=tolerance,
        passed=_judge(discrepancies, defaults, settings.tolerance_override),
        value_labels=labels,
        discrepancy_labels=dlabels,
    )


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def check_metric_equivalence(settings: VerifySettings) -> IdentityReport:
    g, n, s = settings.grid, settings.rank, settings.seed

    def trial(t):
        x = random_tangent(g, n, (s, 10, t, 0))
        y = random_tangent(g, n, (s, 10, t, 1))
        gxx = metric_g(x, x)
        d_eq = abs(gxx - metric_hitchin(x, x)) / (1.0 + abs(gxx))
        gxy = metric_g(x, y)
        d_sym = abs(gxy - metric_g(y, x)) / (1.0 + abs(gxy))
        positive = gxx > 0.0
        return d_eq, d_sym, positive

    rows = _map_trials(trial, settings.trials)
    d_eq = max(r[0] for r in rows)
    d_sym = max(r[1] for r in rows)
    all_positive = all(r[2] for r in rows)
    discs = [d_eq, d_sym, 0.0 if all_positive else 1.0]
    return _report(
        settings,
        "metric_equivalence",
        values=[d_eq, d_sym],
        discrepancies=discs,
        defaults=[1e-11, 1e-12, 0.5],
        labels=["max_metric_pair_discrepancy", "max_symmetry_defect"],
        dlabels=["g_vs_polarized", "symmetry", "positivity"],
    )


def check_omega_consistency(settings: VerifySettings) -> IdentityReport:
    g, n, s = settings.grid, settings.rank, settings.seed

    def trial(t):
        x = random_tangent(g, n, (s, 11, t, 0))
        y = random_tangent(g, n, (s, 11, t, 1))
        a, b = omega_two_paths(x, y)
        d_paths = abs(a - b) / (1.0 + abs(a))
        d_anti = abs(a + omega(y, x)) / (1.0 + abs(a))
        d_inv = abs(omega(complex_structure(x), complex_structure(y)) - a) / (1.0 + abs(a))
        d_diag = abs(omega(x, x)) / (1.0 + abs(a))
        return d_paths, d_anti, d_inv, d_diag

    rows = _map_trials(trial, settings.trials)
    discs = [max(r[i] for r in rows) for i in range(4)]
    return _report(
        settings,
        "omega_consistency",
        values=discs,
        discrepancies=discs,
        defaults=[1e-10, 1e-11, 1e-11, 1e-12],
        labels=["two_paths", "antisymmetry", "complex_invariance", "diagonal"],
        dlabels=["two_paths", "antisymmetry", "complex_invariance", "diagonal"],
    )


def _fd_part(c, zeta, y, eps, part):
    hp = hamiltonian(translate(c, y, +eps), zeta)
    hm = hamiltonian(translate(c, y, -eps), zeta)
    if part == "curvature":
        return (hp.curvature_part - hm.curvature_part) / (2 * eps)
    return (hp.higgs_part - hm.higgs_part) / (2 * eps)


def check_curvature_pairing(settings: VerifySettings) -> IdentityReport:
    g, n, s = settings.grid, settings.rank, settings.seed

    def trial(t):
        c = random_configuration(g, n, (s, 12, t, 0))
        zeta = random_skew_hermitian(g, n, (s, 12, t, 1), smoothness=2)
        y = random_tangent(g, n, (s, 12, t, 2))
        pair = dh_curvature(c, zeta, y, tol=np.inf)
        d_pair = pair.defect / (1.0 + abs(pair.left))
        fd = _fd_part(c, zeta, y, 1e-4, "curvature")
        d_fd = abs(pair.left - fd) / (1.0 + abs(pair.left))
        return d_pair, d_fd

    rows = _map_trials(trial, settings.trials)
    discs = [max(r[0] for r in rows), max(r[1] for r in rows)]
    return _report(
        settings,
        "curvature_pairing",
        values=discs,
        discrepancies=discs,
        defaults=[1e-11, 1e-6],
        labels=["pairing_defect", "finite_difference_defect"],
        dlabels=["pairing", "finite_difference"],
    )


def check_higgs_pairing(settings: VerifySettings) -> IdentityReport:
    g, n, s = settings.grid, settings.rank, settings.seed

    def trial(t):
        c = random_configuration(g, n, (s, 13, t, 0))
        zeta = random_skew_hermitian(g, n, (s, 13, t, 1), smoothness=2)
        y = random_tangent(g, n, (s, 13, t, 2))
        pair = df_higgs(c, zeta, y, tol=np.inf)
        d_pair = pair.defect / (1.0 + abs(pair.left))
        fd = _fd_part(c, zeta, y, 1e-4, "higgs")
        d_fd = abs(pair.left - fd) / (1.0 + abs(pair.left))
        return d_pair, d_fd

    rows = _map_trials(trial, settings.trials)
    discs = [max(r[0] for r in rows), max(r[1] for r in rows)]
    return _report(
        settings,
        "higgs_pairing",
        values=discs,
        discrepancies=discs,
        defaults=[1e-11, 1e-6],
        labels=["pairing_defect", "finite_difference_defect"],
        dlabels=["pairing", "finite_difference"],
    )


def check_hamiltonian_identity(settings: VerifySettings) -> IdentityReport:
    g, n, s = settings.grid, settings.rank, settings.seed

    def trial(t):
        c = random_configuration(g, n, (s, 14, t, 0))
        zeta = random_skew_hermitian(g, n, (s, 14, t, 1), smoothness=2)
        y = random_tangent(g, n, (s, 14, t, 2))
        rep = verify_hamiltonian_identity(c, zeta, y)
        return rep.discrepancies

    rows = _map_trials(trial, settings.trials)
    discs = [max(r[0] for r in rows), max(r[1] for r in rows)]
    return _report(
        settings,
        "hamiltonian_identity",
        values=discs,
        discrepancies=discs,
        defaults=[1e-10, 1e-5],
        labels=["analytic_vs_omega", "analytic_vs_finite_difference"],
        dlabels=["analytic", "finite_difference"],
    )


def check_slice_pairings(settings: VerifySettings) -> IdentityReport:
    g, n, s = settings.grid, settings.rank, settings.seed

    def trial(t):
        c = random_configuration(g, n, (s, 15, t, 0))
        x = random_tangent(g, n, (s, 15, t, 1))
        zeta = random_skew_hermitian(g, n, (s, 15, t, 2), smoothness=2)
        rep = slice_pairing_checks(c, x, zeta)
        scale1 = 1.0 + abs(rep.values[0])
        scale2 = 1.0 + abs(rep.values[3])
        return (
            rep.discrepancies[0] / scale1,
            rep.discrepancies[1] / scale1,
            rep.discrepancies[2] / scale2,
            rep.discrepancies[3] / scale2,
        )

    rows = _map_trials(trial, settings.trials)
    worst = max(max(r) for r in rows)
    return _report(
        settings,
        "slice_pairings",
        values=[worst],
        discrepancies=[worst],
        defaults=[1e-10],
        labels=["worst_chain_defect"],
        dlabels=["chains"],
    )


def check_prequantum(settings: VerifySettings) -> IdentityReport:
    g, n, s = settings.grid, settings.rank, settings.seed

    def trial(t):
        x = random_tangent(g, n, (s, 16, t, 0))
        y = random_tangent(g, n, (s, 16, t, 1))
        rep = prequantum_check(x, y)
        scale = 1.0 + abs(rep.values[0])
        _, natural, conjugated = curv_P_sections(x, y)
        d_var = abs(natural - conjugated) / (1.0 + abs(natural))
        return rep.discrepancies[0] / scale, d_var

    rows = _map_trials(trial, settings.trials)
    discs = [max(r[0] for r in rows), max(r[1] for r in rows)]
    return _report(
        settings,
        "prequantum_curvature",
        values=discs,
        discrepancies=discs,
        defaults=[1e-10, 1e-11],
        labels=["curvature_sum_vs_omega", "higgs_variant_disagreement"],
        dlabels=["sum_identity", "variants"],
    )


def check_complex_structure_signs(settings: VerifySettings) -> IdentityReport:
    g, n, s = settings.grid, settings.rank, settings.seed

    def trial(t):
        x = random_tangent(g, n, (s, 17, t, 0))
        ix = complex_structure(x)
        d = 0.0
        d = max(d, float(np.abs(ix.alpha01.data - 1j * x.alpha01.data).max()))
        d = max(d, float(np.abs(ix.gamma10.data - 1j * x.gamma10.data).max()))
        d = max(d, float(np.abs(ix.alpha10.data - (-1j) * x.alpha10.data).max()))
        d = max(d, float(np.abs(ix.gamma01.data - (-1j) * x.gamma01.data).max()))
        iix = complex_structure(ix)
        d = max(d, float(np.abs(iix.alpha01.data + x.alpha01.data).max()))
        d = max(d, float(np.abs(iix.gamma10.data + x.gamma10.data).max()))
        return d

    worst = max(_map_trials(trial, settings.trials))
    return _report(
        settings,
        "complex_structure_signs",
        values=[worst],
        discrepancies=[worst],
        defaults=[0.0],
        labels=["worst_sign_table_defect"],
        dlabels=["sign_table"],
    )


def check_trace_lemmas(settings: VerifySettings) -> IdentityReport:
    n, s = settings.rank, settings.seed

    def trial(t):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((s, 18, t))))
        a, b, c, e, phi = (
            rng.standard_normal((5, n, n)) + 1j * rng.standard_normal((5, n, n))
        )
        zeta_raw = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        zeta = (zeta_raw - zeta_raw.conj().T) / 2
        t1 = np.trace(commutator(a, b) @ c)
        d1 = abs(t1 - np.trace(commutator(b, c) @ a)) / (1.0 + abs(t1))
        t2 = np.trace(a @ b.conj().T).real
        d2 = abs(t2 - np.trace(b @ a.conj().T).real) / (1.0 + abs(t2))
        d3 = abs(np.trace(c @ c.conj().T).imag) / (1.0 + abs(np.trace(c @ c.conj().T).real))
        lhs = np.trace(commutator(zeta, phi) @ e.conj().T).imag
        rhs = (
            np.trace(commutator(phi, e.conj().T) @ zeta)
            + np.trace(commutator(e, phi.conj().T) @ zeta)
        ) / 2j
        d4 = abs(lhs - rhs) / (1.0 + abs(lhs))
        return d1, d2, d3, abs(d4)

    rows = _map_trials(trial, settings.trials)
    discs = [max(r[i] for r in rows) for i in range(4)]
    return _report(
        settings,
        "trace_lemmas",
        values=discs,
        discrepancies=discs,
        defaults=[1e-12, 1e-12, 1e-14, 1e-13],
        labels=["cyclic_commutator", "real_transpose_pairing", "cc_star_realness", "imag_commutator_chain"],
        dlabels=["cyclic", "real_pairing", "realness", "imag_chain"],
    )


CHECKS = [
    check_metric_equivalence,
    check_omega_consistency,
    check_curvature_pairing,
    check_higgs_pairing,
    check_hamiltonian_identity,
    check_slice_pairings,
    check_prequantum,
    check_complex_structure_signs,
    check_trace_lemmas,
]


def run_suite(settings: VerifySettings) -> list[IdentityReport]:
    """Run every registered check in a fixed order."""
    return [check(settings) for check in CHECKS]
