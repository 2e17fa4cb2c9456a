"""Quadratic functions and maps in barycentric representation.

A quadratic function is stored as a symmetric ``(n+1, n+1)`` matrix ``delta``
with value ``p @ delta @ p`` at the weight ``p``. This representation is
unique: the matrix is recovered from the values at the referential points and
their midpoints (:func:`from_midpoint_values`).
"""

from dataclasses import dataclass, field

import numpy as np

from .affine import _frozen, as_hollow, as_weight, hollow_basis, vertex
from .errors import DimensionError, NotClosedError, SymmetryError, WeightError
from .tolerances import tau_sum, tau_sym


def symmetric_matrix(a, name="matrix"):
    """Return ``a`` symmetrized, or raise SymmetryError if it is not symmetric.

    Asymmetry within ``tau_sym`` is treated as roundoff and averaged away.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    gap = np.abs(a - a.T)
    if gap.max() > tau_sym(a):
        i, j = np.unravel_index(np.argmax(gap), gap.shape)
        i, j = sorted((int(i), int(j)))
        raise SymmetryError(
            f"{name} is not symmetric: entry [{i}][{j}]={float(a[i, j])!r} vs [{j}][{i}]={float(a[j, i])!r}",
            index=(i, j),
        )
    return 0.5 * (a + a.T)


@dataclass(frozen=True, eq=False)
class QuadFn:
    """Quadratic function with barycentric matrix ``delta``."""

    delta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "delta", _frozen(symmetric_matrix(self.delta, "delta")))

    @property
    def dim(self):
        return self.delta.shape[0] - 1

    def __call__(self, p):
        return quad_eval(self, p)

    def __add__(self, other):
        return QuadFn(self.delta + as_quadfn(other).delta)

    def __sub__(self, other):
        return QuadFn(self.delta - as_quadfn(other).delta)

    def __mul__(self, scalar):
        return QuadFn(float(scalar) * self.delta)

    __rmul__ = __mul__

    def allclose(self, other, atol=1e-9):
        other = as_quadfn(other)
        return self.delta.shape == other.delta.shape and np.allclose(
            self.delta, other.delta, rtol=0, atol=atol
        )

    def __repr__(self):
        return f"QuadFn({self.delta.tolist()!r})"


def as_quadfn(obj):
    return obj if isinstance(obj, QuadFn) else QuadFn(obj)


def _check_dim(q, p):
    if q.delta.shape[0] != p.shape[0]:
        raise DimensionError(f"function on {q.dim}-space evaluated at a {p.shape[0] - 1}-weight")


def quad_eval(q, p):
    q = as_quadfn(q)
    p = as_weight(p)
    _check_dim(q, p)
    return float(p @ q.delta @ p)


def _from_values(S):
    diag = np.diag(S)
    return 2.0 * S - 0.5 * (diag[:, None] + diag[None, :])


def from_midpoint_values(S):
    """Quadratic function with value ``S[i, i]`` at ``R_i`` and ``S[i, j]`` at
    the midpoint of ``R_i`` and ``R_j``."""
    S = symmetric_matrix(S, "value matrix")
    return QuadFn(_from_values(S))


def from_affine(c):
    """Affine function ``p -> c @ p`` written as a quadratic function."""
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise DimensionError(f"coefficient row must be one-dimensional, got shape {c.shape}")
    return QuadFn(0.5 * (c[:, None] + c[None, :]))


def homogenize_at(q, p):
    """Component of ``q`` homogeneous at ``p``: ``x -> (x-p) @ delta @ (x-p)``.

    The result vanishes at ``p``, is even about ``p`` and differs from ``q`` by
    an affine function.
    """
    q = as_quadfn(q)
    p = as_weight(p)
    _check_dim(q, p)
    proj = np.eye(p.shape[0]) - np.outer(p, np.ones(p.shape[0]))
    return QuadFn(proj.T @ q.delta @ proj)


def affine_part_at(q, p):
    """Coefficient row of ``q - homogenize_at(q, p)``."""
    q = as_quadfn(q)
    p = as_weight(p)
    _check_dim(q, p)
    row = p @ q.delta
    return _frozen(2.0 * row - (row @ p))


def reduce_at_referential(q):
    """The representative of ``q`` modulo affine functions that vanishes at
    every referential point (a hollow matrix)."""
    q = as_quadfn(q)
    diag = np.diag(q.delta)
    reduced = q.delta - 0.5 * (diag[:, None] + diag[None, :])
    np.fill_diagonal(reduced, 0.0)
    return QuadFn(reduced)


def _canonical_rows(a):
    return a - a.mean(axis=-1, keepdims=True)


def gradient_at(q, p):
    """Gradient covector of ``q`` at ``p``, sum-zero representative."""
    q = as_quadfn(q)
    p = as_weight(p)
    _check_dim(q, p)
    return _frozen(_canonical_rows(2.0 * (p @ q.delta)))


def hessian_pair(q, x, y):
    """Hessian bilinear form of ``q`` on director vectors: ``2 x @ delta @ y``."""
    q = as_quadfn(q)
    x, y = as_hollow(x), as_hollow(y)
    if not (x.shape[0] == y.shape[0] == q.delta.shape[0]):
        raise DimensionError("dimension mismatch in hessian pairing")
    return float(2.0 * x @ q.delta @ y)


@dataclass(frozen=True, eq=False)
class AffineCovectorField:
    """Affine field of covectors; value at ``p`` is the class of ``p @ f_matrix``.

    Rows are stored with zero sum (the canonical representative).
    """

    f_matrix: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.f_matrix, dtype=float)
        if f.ndim != 2 or f.shape[0] != f.shape[1] or f.shape[0] == 0:
            raise DimensionError(f"field matrix must be square, got shape {f.shape}")
        object.__setattr__(self, "f_matrix", _frozen(_canonical_rows(f)))

    @property
    def dim(self):
        return self.f_matrix.shape[0] - 1

    def at(self, p):
        p = as_weight(p)
        if p.shape[0] != self.f_matrix.shape[0]:
            raise DimensionError("dimension mismatch")
        return _frozen(_canonical_rows(p @ self.f_matrix))


def field_of(q):
    q = as_quadfn(q)
    return AffineCovectorField(2.0 * q.delta)


def _restricted(field):
    basis = hollow_basis(field.dim)
    return basis.T @ field.f_matrix @ basis


def is_closed(field):
    """True when the field is locally a gradient (its hollow restriction is
    symmetric)."""
    if field.dim <= 1:
        return True
    k = _restricted(field)
    return bool(np.max(np.abs(k - k.T)) <= tau_sym(field.f_matrix))


def potential(field):
    """The quadratic function whose gradient field is ``field`` and which
    vanishes at ``R_0``.

    Integrates along the segment from ``R_0``; the trapezoid rule is exact for
    affine integrands, so sampled values are exact and the matrix is rebuilt
    from them.
    """
    if not is_closed(field):
        raise NotClosedError("covector field is not closed; it has no potential")
    n = field.dim
    F = field.f_matrix
    e0 = np.asarray(vertex(n, 0))
    start = e0 @ F
    S = np.empty((n + 1, n + 1))
    for i in range(n + 1):
        for j in range(i, n + 1):
            p = np.zeros(n + 1)
            p[i] += 0.5
            p[j] += 0.5
            S[i, j] = S[j, i] = 0.5 * (start + p @ F) @ (p - e0)
    return QuadFn(_from_values(S))


@dataclass(frozen=True, eq=False)
class QuadMap:
    """Quadratic map into an m-dimensional affine space.

    ``grid[i, j]`` is a target weight; the image of ``p`` is
    ``sum_ij p_i p_j grid[i, j]``.
    """

    grid: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        if g.ndim != 3 or g.shape[0] != g.shape[1] or g.shape[0] == 0 or g.shape[2] == 0:
            raise DimensionError(f"grid must have shape (n+1, n+1, m+1), got {g.shape}")
        if np.max(np.abs(g - g.transpose(1, 0, 2))) > tau_sym(g):
            raise SymmetryError("grid is not symmetric in its first two indices")
        object.__setattr__(self, "grid", _frozen(0.5 * (g + g.transpose(1, 0, 2))))

    @property
    def dim(self):
        return self.grid.shape[0] - 1

    @property
    def target_dim(self):
        return self.grid.shape[2] - 1

    def __call__(self, p, check=False):
        p = as_weight(p)
        if p.shape[0] != self.grid.shape[0]:
            raise DimensionError("dimension mismatch")
        out = np.einsum("i,j,ijk->k", p, p, self.grid)
        if check:
            as_weight(out)
        return _frozen(out)

    def component(self, k):
        """Scalar quadratic function giving the k-th target coordinate."""
        return QuadFn(self.grid[:, :, k])


def from_midpoint_values_map(S):
    """Quadratic map with target weight ``S[i, j]`` at the midpoint of ``R_i``
    and ``R_j`` (and ``S[i, i]`` at ``R_i``)."""
    S = np.asarray(S, dtype=float)
    if S.ndim != 3 or S.shape[0] != S.shape[1]:
        raise DimensionError(f"value grid must have shape (n+1, n+1, m+1), got {S.shape}")
    sums = S.sum(axis=2)
    bad = np.abs(sums - 1.0) > tau_sum(S)
    if bad.any():
        i, j = (int(v) for v in np.argwhere(bad)[0])
        raise WeightError(f"grid entry [{i}][{j}] sums to {sums[i, j]!r}, expected 1")
    diag = np.einsum("iik->ik", S)
    grid = 2.0 * S - 0.5 * (diag[:, None, :] + diag[None, :, :])
    return QuadMap(grid)
