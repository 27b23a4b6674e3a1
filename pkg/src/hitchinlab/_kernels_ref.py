"""NumPy reference implementation of the flow hot-path kernels.

Same contract as the compiled extension `_kernels`; used as the import-time
fallback and as the cross-check/benchmark baseline.  Arrays are (N, N, n, n)
complex128, h is the grid spacing.
"""

from __future__ import annotations

import numpy as np

BACKEND = "reference"


def _adj(a):
    return np.conj(a.swapaxes(-1, -2))


def _residuals(a01, phi, h):
    ax_f = (np.roll(a01, -1, axis=0) - a01) / h
    ay_f = (np.roll(a01, -1, axis=1) - a01) / h
    adag = _adj(a01)
    bx_f = (np.roll(adag, -1, axis=0) - adag) / h
    by_f = (np.roll(adag, -1, axis=1) - adag) / h
    # F coefficient: del(a01) + dbar(a01^dagger) - [a01^dagger, a01]
    r1 = (ax_f - 1j * ay_f) / 2.0 + (bx_f + 1j * by_f) / 2.0
    r1 -= adag @ a01 - a01 @ adag
    r1 += phi @ _adj(phi) - _adj(phi) @ phi
    px_f = (np.roll(phi, -1, axis=0) - phi) / h
    py_f = (np.roll(phi, -1, axis=1) - phi) / h
    r2 = -((px_f + 1j * py_f) / 2.0 + a01 @ phi - phi @ a01)
    return r1, r2


def eval_state(a01, phi, h):
    """Energy and residual norms at (a01, phi)."""
    r1, r2 = _residuals(a01, phi, h)
    w = 4.0 * h * h
    s1 = float(np.sum(np.abs(r1) ** 2))
    s2 = float(np.sum(np.abs(r2) ** 2))
    return w * (s1 + s2), float(np.sqrt(w * s1)), float(np.sqrt(w * s2))


def eval_gradient(a01, phi, h):
    """Energy, residual norms, metric gradient (gx, gp) and its squared norm."""
    r1, r2 = _residuals(a01, phi, h)
    w = 4.0 * h * h
    s1 = float(np.sum(np.abs(r1) ** 2))
    s2 = float(np.sum(np.abs(r2) ** 2))

    r1x_b = (r1 - np.roll(r1, 1, axis=0)) / h
    r1y_b = (r1 - np.roll(r1, 1, axis=1)) / h
    adp = _adj(phi)
    gx = -4.0 * ((r1x_b + 1j * r1y_b) / 2.0 + (a01 @ r1 - r1 @ a01))
    gx -= 2.0 * (r2 @ adp - adp @ r2)

    r2x_b = (r2 - np.roll(r2, 1, axis=0)) / h
    r2y_b = (r2 - np.roll(r2, 1, axis=1)) / h
    adag = _adj(a01)
    gp = 4.0 * (r1 @ phi - phi @ r1)
    gp += 2.0 * ((r2x_b - 1j * r2y_b) / 2.0 - (adag @ r2 - r2 @ adag))

    gnorm2 = w * float(np.sum(np.abs(gx) ** 2) + np.sum(np.abs(gp) ** 2))
    return w * (s1 + s2), float(np.sqrt(w * s1)), float(np.sqrt(w * s2)), gx, gp, gnorm2
