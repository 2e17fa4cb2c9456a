"""Numerical tolerances.

Every threshold in the library derives from one base tolerance (``1e-9`` by
default). The ``CM_TOL`` environment variable overrides it; the value is read
at call time so tests and the CLI can change it without reimporting.
"""

import os

import numpy as np

DEFAULT_BASE = 1e-9
# absolute pivot cutoff relative to max|M|; not scaled by CM_TOL
PIVOT_RATIO = 1e-12


def base_tol():
    raw = os.environ.get("CM_TOL")
    if raw is None or raw.strip() == "":
        return DEFAULT_BASE
    value = float(raw)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"CM_TOL must be a positive finite number, got {raw!r}")
    return value


def _maxabs(a):
    a = np.asarray(a, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


def tau_sum(a):
    """Tolerance for sum-to-one / sum-to-zero checks on ``a``."""
    return base_tol() * (1.0 + _maxabs(a))


def tau_sym(a):
    return base_tol() * (1.0 + _maxabs(a))


def tau_eig(eigenvalues, size):
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    if eigenvalues.size == 0:
        return 0.0
    return base_tol() * size * _maxabs(eigenvalues)


def tau_det(matrix):
    matrix = np.asarray(matrix, dtype=float)
    return base_tol() * _maxabs(matrix) ** matrix.shape[0]


def tau_quadric(d_matrix):
    return 10.0 * base_tol() * (1.0 + _maxabs(d_matrix))


tau_functorial = tau_quadric


def tau_embed(d_matrix):
    return 10.0 * base_tol() * max(1.0, _maxabs(d_matrix))


def snapshot(d_matrix=None):
    """All tolerances in force, as a plain dict (for reports)."""
    out = {"base": base_tol(), "pivot_ratio": PIVOT_RATIO}
    if d_matrix is not None:
        out.update(
            tau_sym=tau_sym(d_matrix),
            tau_quadric=tau_quadric(d_matrix),
            tau_functorial=tau_functorial(d_matrix),
            tau_embed=tau_embed(d_matrix),
        )
    return out
