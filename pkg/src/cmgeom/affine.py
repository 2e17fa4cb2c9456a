"""Barycentric representation of affine objects in a fixed referential.

A referential ``(R_0, ..., R_n)`` of an n-dimensional affine space is implicit:
everything here is a coordinate array relative to it.

* points are *weights*: length ``n+1`` columns summing to 1;
* director vectors are *hollow* columns summing to 0;
* affine functions are coefficient rows ``c`` with value ``c @ p``;
* covectors (differentials) are rows modulo the unit row, stored as the
  sum-zero representative;
* affine maps from n-space to m-space are ``(m+1, n+1)`` weight matrices whose
  columns sum to 1.

All returned arrays are read-only.
"""

import numpy as np

from .errors import ColumnSumError, DimensionError, WeightError
from .tolerances import tau_sum


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


def _vector(x, name):
    a = np.asarray(x, dtype=float)
    if a.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {a.shape}")
    if a.size == 0:
        raise DimensionError(f"{name} must have at least one entry")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def _same_length(*arrays):
    lengths = {a.shape[0] for a in arrays}
    if len(lengths) != 1:
        raise DimensionError(f"dimension mismatch: lengths {sorted(lengths)}")


def as_weight(p):
    """Validate ``p`` as a weight (entries sum to 1) and return it as an array."""
    a = _vector(p, "weight")
    total = a.sum()
    if abs(total - 1.0) > tau_sum(a):
        raise WeightError(f"weight entries sum to {total!r}, expected 1")
    return _frozen(a)


def as_hollow(x):
    """Validate ``x`` as a hollow vector (entries sum to 0)."""
    a = _vector(x, "hollow vector")
    total = a.sum()
    if abs(total) > tau_sum(a):
        raise WeightError(f"hollow vector entries sum to {total!r}, expected 0")
    return _frozen(a)


def vertex(n, i):
    """Weight of the referential point ``R_i`` in dimension ``n``."""
    e = np.zeros(n + 1)
    e[i] = 1.0
    return _frozen(e)


def unit_row(n):
    return _frozen(np.ones(n + 1))


def hollow_basis(n):
    """Columns ``e_i - e_0`` for ``i = 1..n``, shape ``(n+1, n)``."""
    b = np.zeros((n + 1, n))
    b[0, :] = -1.0
    b[1:, :] = np.eye(n)
    return b


def bary_combine(points, w):
    """Barycentric combination ``sum_i w_i * points[i]``."""
    if len(points) == 0:
        raise DimensionError("cannot combine an empty list of points")
    pts = [as_weight(p) for p in points]
    _same_length(*pts)
    w = as_weight(w)
    if w.shape[0] != len(pts):
        raise DimensionError(f"{len(pts)} points but {w.shape[0]} weights")
    return _frozen(w @ np.array(pts))


def vector_between(p, q):
    """Director vector from ``p`` to ``q`` (``q - p``)."""
    p, q = as_weight(p), as_weight(q)
    _same_length(p, q)
    return _frozen(q - p)


def invert_point(center, q):
    """Point reflection of ``q`` through ``center``: ``2*center - q``."""
    center, q = as_weight(center), as_weight(q)
    _same_length(center, q)
    return _frozen(2.0 * center - q)


def affine_eval(c, p):
    c = _vector(c, "coefficient row")
    p = as_weight(p)
    _same_length(c, p)
    return float(c @ p)


def differential(c):
    """Canonical (sum-zero) representative of the gradient covector of ``c``."""
    c = _vector(c, "coefficient row")
    return _frozen(c - c.mean())


def covector_pair(w, x):
    """Pairing of a covector row with a hollow vector."""
    w = _vector(w, "covector")
    x = as_hollow(x)
    _same_length(w, x)
    return float(w @ x)


def validate_weight_matrix(C):
    """Check that every column of ``C`` sums to 1; returns ``C`` as an array.

    Raises ColumnSumError naming the first offending column.
    """
    a = np.asarray(C, dtype=float)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise DimensionError(f"weight matrix must be a non-empty 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("weight matrix has non-finite entries")
    sums = a.sum(axis=0)
    tol = tau_sum(a)
    for j, s in enumerate(sums):
        if abs(s - 1.0) > tol:
            raise ColumnSumError(j, float(s))
    return _frozen(a)


def apply_map(C, p):
    """Image of the point ``p`` under the affine map with weight matrix ``C``."""
    C = validate_weight_matrix(C)
    p = as_weight(p)
    if C.shape[1] != p.shape[0]:
        raise DimensionError(f"map expects {C.shape[1]} coordinates, got {p.shape[0]}")
    return _frozen(C @ p)
