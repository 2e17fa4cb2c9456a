"""Metrics on affine spaces, stored as squared-pseudodistance matrices.

A metric is a quadratic function modulo affine functions. Its canonical data
in a referential is the hollow symmetric matrix ``D`` with
``D[i, j] = d^2(R_i, R_j)``; the representative vanishing on the referential
has barycentric matrix ``-D/4`` (Gram matrix ``-D/2``). Signatures are
arbitrary, so ``D`` may have entries of either sign.
"""

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .affine import _frozen, as_hollow, as_weight, hollow_basis, validate_weight_matrix
from .errors import DimensionError, SymmetryError
from .quadratic import QuadFn, as_quadfn, homogenize_at, reduce_at_referential, symmetric_matrix
from .tolerances import tau_det, tau_eig, tau_sym

logger = logging.getLogger(__name__)


class InertiaIndex(NamedTuple):
    positive: int
    negative: int
    null: int


def spectral_inertia(matrix):
    """Inertia of a symmetric matrix from its eigenvalues.

    Eigenvalues within ``tau_eig`` of zero count as null.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.size == 0:
        return InertiaIndex(0, 0, 0)
    eig = np.linalg.eigvalsh(matrix)
    tol = tau_eig(eig, matrix.shape[0])
    return InertiaIndex(int(np.sum(eig > tol)), int(np.sum(eig < -tol)), int(np.sum(np.abs(eig) <= tol)))


@dataclass(frozen=True, eq=False)
class Metric:
    """Metric on an n-dimensional affine space, given by its hollow
    squared-distance matrix.

    Input within ``tau_sym`` of hollow symmetric is canonicalized
    (symmetrized, diagonal zeroed) and ``adjusted`` is set.
    """

    d_matrix: np.ndarray
    adjusted: bool = field(default=False, compare=False)

    def __post_init__(self):
        d = symmetric_matrix(self.d_matrix, "D")
        diag = np.abs(np.diag(d))
        if diag.max() > tau_sym(d):
            i = int(np.argmax(diag))
            raise SymmetryError(f"D has nonzero diagonal entry [{i}][{i}]={float(d[i, i])!r}", index=(i, i))
        raw = np.asarray(self.d_matrix, dtype=float)
        adjusted = bool(self.adjusted or np.any(diag != 0) or np.any(raw != raw.T))
        np.fill_diagonal(d, 0.0)
        object.__setattr__(self, "d_matrix", _frozen(d))
        object.__setattr__(self, "adjusted", adjusted)

    @property
    def dim(self):
        return self.d_matrix.shape[0] - 1

    @classmethod
    def zero(cls, n):
        return cls(np.zeros((n + 1, n + 1)))

    def gram(self):
        """Reduced Gram matrix ``-D/2``."""
        return -0.5 * self.d_matrix

    def reduced(self):
        """Representative vanishing on the referential (matrix ``-D/4``)."""
        return QuadFn(-0.25 * self.d_matrix)

    def __repr__(self):
        return f"Metric({self.d_matrix.tolist()!r})"


def metric_of(q):
    """Metric represented by the quadratic function ``q``."""
    return Metric(-4.0 * reduce_at_referential(as_quadfn(q)).delta)


def _point(m, p):
    p = as_weight(p)
    if p.shape[0] != m.dim + 1:
        raise DimensionError(f"metric on {m.dim}-space, point has {p.shape[0]} coordinates")
    return p


def sq_pseudodistance(m, p, q):
    """Squared pseudodistance ``-1/2 x @ D @ x`` with ``x = q - p``."""
    p, q = _point(m, p), _point(m, q)
    x = q - p
    return float(-0.5 * x @ m.d_matrix @ x)


def metric_pair(m, x, y):
    """Hessian inner product of two director vectors."""
    x, y = as_hollow(x), as_hollow(y)
    if not (x.shape[0] == y.shape[0] == m.dim + 1):
        raise DimensionError("dimension mismatch")
    return float(-0.5 * x @ m.d_matrix @ y)


def half_sq_fn_at(m, p):
    """The half-squared pseudodistance function from ``p``: the representative
    of ``m`` homogeneous at ``p``."""
    p = _point(m, p)
    return homogenize_at(m.reduced(), p)


def hessian_restriction(m):
    """Gram matrix of the metric on the director basis ``R_0 R_i``:
    ``g_ij = (D_0i + D_0j - D_ij) / 2``."""
    D = m.d_matrix
    d0 = D[0, 1:]
    return 0.5 * (d0[:, None] + d0[None, :] - D[1:, 1:])


def inertia(m):
    return spectral_inertia(hessian_restriction(m))


def bordered_matrix(m):
    """``[[D, 1], [1^t, 0]]``."""
    n1 = m.dim + 1
    out = np.zeros((n1 + 1, n1 + 1))
    out[:n1, :n1] = m.d_matrix
    out[:n1, n1] = 1.0
    out[n1, :n1] = 1.0
    return out


def is_nondegenerate(m):
    """True iff the metric has no null directions.

    Decided spectrally; the determinant of the bordered matrix is checked as
    well and a disagreement is logged.
    """
    nondeg = inertia(m).null == 0
    b = bordered_matrix(m)
    det_says = abs(np.linalg.det(b)) > tau_det(b)
    if det_says != nondeg:
        logger.warning("bordered determinant disagrees with spectral non-degeneracy for %r", m)
    return nondeg


def radical_basis(m):
    """Hollow vectors spanning the radical (null directions) of ``m``.

    Returns a list with one read-only array per null direction; its length is
    the nullity of :func:`inertia`.
    """
    n = m.dim
    if n == 0:
        return []
    g = hessian_restriction(m)
    eig, vecs = np.linalg.eigh(g)
    tol = tau_eig(eig, n)
    null = vecs[:, np.abs(eig) <= tol]
    basis = hollow_basis(n) @ null
    return [_frozen(basis[:, k]) for k in range(basis.shape[1])]


class Embedding(NamedTuple):
    points: np.ndarray  # (n+1, k) coordinates, row 0 at the origin
    signs: np.ndarray  # (k,) entries +1 / -1
    inertia: InertiaIndex

    def sq_distances(self):
        diff = self.points[:, None, :] - self.points[None, :, :]
        return np.einsum("ijk,k->ij", diff * diff, self.signs)


def embed(m):
    """Realize ``m`` as a point configuration in pseudo-Euclidean space.

    Point ``R_0`` goes to the origin and ``R_i`` to a vector whose
    sign-weighted inner products reproduce the hessian restriction. Positive
    directions come first, then negative ones; the radical is dropped.
    """
    n = m.dim
    if n == 0:
        return Embedding(np.zeros((1, 0)), np.zeros(0), InertiaIndex(0, 0, 0))
    g = hessian_restriction(m)
    eig, vecs = np.linalg.eigh(g)
    tol = tau_eig(eig, n)
    pos = np.flatnonzero(eig > tol)[::-1]
    neg = np.flatnonzero(eig < -tol)
    keep = np.concatenate([pos, neg])
    coords = vecs[:, keep] * np.sqrt(np.abs(eig[keep]))
    points = np.vstack([np.zeros((1, keep.size)), coords])
    signs = np.concatenate([np.ones(pos.size), -np.ones(neg.size)])
    idx = InertiaIndex(int(pos.size), int(neg.size), int(n - keep.size))
    return Embedding(_frozen(points), _frozen(signs), idx)


def pullback_metric(m, C):
    """Metric on the source space of the affine map with weight matrix ``C``.

    ``D'[i, j]`` is the squared pseudodistance between the images of the
    source referential points.
    """
    C = validate_weight_matrix(C)
    if C.shape[0] != m.dim + 1:
        raise DimensionError(f"map targets {C.shape[0] - 1}-space, metric lives on {m.dim}-space")
    diff = C[:, :, None] - C[:, None, :]
    return Metric(-0.5 * np.einsum("aij,ab,bij->ij", diff, m.d_matrix, diff))
