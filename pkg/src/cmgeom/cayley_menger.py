"""The Cayley-Menger bilinear form of a metric.

Functionals live in the basis ``(v_R0, ..., v_Rn, v_m)``: ``v_Ri`` evaluates a
metric-representing quadratic function at ``R_i`` and ``v_m`` is the
normalization functional. In this basis the form has the bordered matrix

    M = [[D/2, 1], [1^t, 0]].

Hull elements are stored by their pairing values against the same basis, so
``M @ f`` turns a functional into a hull element and solving with ``M`` goes
back. The two bases are not dual; nothing converts implicitly.
"""

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .affine import _frozen, as_hollow, as_weight, validate_weight_matrix
from .errors import DimensionError, SingularCMError
from .metric import InertiaIndex, Metric, pullback_metric, spectral_inertia
from .tolerances import PIVOT_RATIO, tau_quadric, tau_functorial


def _bordered(d_matrix, corner_block):
    n1 = d_matrix.shape[0]
    out = np.zeros((n1 + 1, n1 + 1))
    out[:n1, :n1] = corner_block
    out[:n1, n1] = 1.0
    out[n1, :n1] = 1.0
    return out


@dataclass(frozen=True, eq=False)
class CMForm:
    """Cayley-Menger matrix of a metric with its LU factorization cached."""

    metric: Metric
    matrix: np.ndarray = field(init=False)
    _lu: tuple = field(init=False, default=None, repr=False)

    def __post_init__(self):
        M = _bordered(self.metric.d_matrix, 0.5 * self.metric.d_matrix)
        object.__setattr__(self, "matrix", _frozen(M))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(M)
        if np.min(np.abs(np.diag(lu))) >= PIVOT_RATIO * np.max(np.abs(M)):
            object.__setattr__(self, "_lu", (lu, piv))

    @property
    def dim(self):
        return self.metric.dim

    @property
    def size(self):
        return self.metric.dim + 2

    @property
    def singular(self):
        return self._lu is None

    def solve(self, h):
        """Functional ``f`` with ``M @ f = h``."""
        if self._lu is None:
            raise SingularCMError("Cayley-Menger matrix is singular: the metric is degenerate")
        return scipy.linalg.lu_solve(self._lu, h)


def cm_matrix(m):
    return CMForm(m)


def _form(obj):
    return obj if isinstance(obj, CMForm) else CMForm(obj)


def _metric(obj):
    return obj.metric if isinstance(obj, CMForm) else obj


def _coords(form, f, name="functional"):
    f = np.asarray(f, dtype=float)
    if f.shape != (form.size,):
        raise DimensionError(f"{name} must have {form.size} coordinates, got shape {f.shape}")
    return f


def v_m(n):
    """Coordinates of the normalization functional ``v_m``."""
    f = np.zeros(n + 2)
    f[-1] = 1.0
    return _frozen(f)


def u_m(n):
    """Pairing values of the unit function: ``(1, ..., 1, 0)``."""
    h = np.ones(n + 2)
    h[-1] = 0.0
    return _frozen(h)


def cm_pair(M, f1, f2):
    M = _form(M)
    f1, f2 = _coords(M, f1), _coords(M, f2)
    return float(f1 @ M.matrix @ f2)


def cm_apply(M, f):
    """Hull element (pairing values) associated to the functional ``f``."""
    M = _form(M)
    return _frozen(M.matrix @ _coords(M, f))


def cm_inverse_pair(M, h1, h2):
    """Inverse Cayley-Menger pairing of two hull elements."""
    M = _form(M)
    h1 = _coords(M, h1, "hull element")
    h2 = _coords(M, h2, "hull element")
    return float(h1 @ M.solve(h2))


def _point(m, p):
    p = as_weight(p)
    if p.shape[0] != m.dim + 1:
        raise DimensionError(f"metric on {m.dim}-space, point has {p.shape[0]} coordinates")
    return p


def v_of_point(m, p):
    """Evaluation functional at the point ``p``.

    Its last coordinate is fixed by isotropy: ``-p @ D @ p / 4``.
    """
    m = _metric(m)
    p = _point(m, p)
    return _frozen(np.append(p, -0.25 * p @ m.d_matrix @ p))


def cm_coordinates(m, p):
    """Half squared pseudodistances from each referential point to ``p``."""
    m = _metric(m)
    p = _point(m, p)
    D = m.d_matrix
    # -(e_i - p)^T D (e_i - p) / 4, using D_ii = 0
    return _frozen(0.5 * D @ p - 0.25 * p @ D @ p)


class Localization(NamedTuple):
    point: np.ndarray
    beta: float
    residual: float


def localize(m, values):
    """Recover a point from its Cayley-Menger coordinates by one linear solve.

    ``residual`` is the inverse Cayley-Menger square of ``[values; 1]``; it is
    zero exactly when ``values`` are the coordinates of a genuine point.
    """
    M = _form(m)
    values = np.asarray(values, dtype=float)
    if values.shape != (M.dim + 1,):
        raise DimensionError(f"expected {M.dim + 1} values, got shape {values.shape}")
    h = np.append(values, 1.0)
    f = M.solve(h)
    return Localization(_frozen(f[:-1]), float(f[-1]), float(h @ f))


class SphereFit(NamedTuple):
    center: np.ndarray
    r_squared: float


def sphere_fit(m, values):
    """Center and signed squared radius of the level set given by referential
    values.

    The metric-quadratic function taking ``values`` on the referential equals
    the half squared pseudodistance from ``center`` minus ``r_squared / 2``.
    """
    M = _form(m)
    values = np.asarray(values, dtype=float)
    if values.shape != (M.dim + 1,):
        raise DimensionError(f"expected {M.dim + 1} values, got shape {values.shape}")
    h = np.append(values, 1.0)
    r2 = -float(h @ M.solve(h))
    loc = localize(M, values + 0.5 * r2)
    return SphereFit(loc.point, r2)


def quadric_test(M, f):
    """True iff ``f`` is the evaluation functional of some point."""
    M = _form(M)
    f = _coords(M, f)
    tol = tau_quadric(M.metric.d_matrix)
    isotropic = abs(f @ M.matrix @ f) <= tol
    normalized = abs(f[:-1].sum() - 1.0) <= tol
    return bool(isotropic and normalized)


def cm_signature(M):
    return spectral_inertia(_form(M).matrix)


def pushforward_matrix(m, C):
    """Matrix of the pushforward of functionals along the affine map ``C``.

    Column ``j`` is the evaluation functional at the image of the j-th source
    referential point; the last column sends ``v_m`` to ``v_m``.
    """
    m = _metric(m)
    C = validate_weight_matrix(C)
    if C.shape[0] != m.dim + 1:
        raise DimensionError(f"map targets {C.shape[0] - 1}-space, metric lives on {m.dim}-space")
    rows, cols = C.shape
    T = np.zeros((rows + 1, cols + 1))
    T[:rows, :cols] = C
    T[rows, :cols] = -0.25 * np.einsum("aj,ab,bj->j", C, m.d_matrix, C)
    T[rows, cols] = 1.0
    return _frozen(T)


def functoriality_check(m, C):
    """Cayley-Menger form of the pulled-back metric and the max-norm defect of
    ``M_B - T^t M_A T``."""
    m = _metric(m)
    T = pushforward_matrix(m, C)
    M_A = CMForm(m)
    M_B = CMForm(pullback_metric(m, C))
    defect = float(np.max(np.abs(M_B.matrix - T.T @ M_A.matrix @ T)))
    return M_B, defect


class HyperbolicSplit(NamedTuple):
    alpha: float
    beta: float
    x: np.ndarray


def hyperbolic_split(m, f, q):
    """Components of ``f`` along ``v_m``, ``v_q`` and the director space at ``q``.

    The form is the hyperbolic plane on ``(v_m, v_q)`` plus the negated metric
    on director vectors, so
    ``cm_pair(f1, f2) = a1*b2 + a2*b1 + x1 @ D @ x2 / 2``.
    """
    m = _metric(m)
    q = _point(m, q)
    f = np.asarray(f, dtype=float)
    if f.shape != (m.dim + 2,):
        raise DimensionError(f"functional must have {m.dim + 2} coordinates, got shape {f.shape}")
    c, gamma = f[:-1], f[-1]
    beta = float(c.sum())
    x = c - beta * q
    alpha = float(c @ cm_coordinates(m, q) + gamma)
    return HyperbolicSplit(alpha, beta, _frozen(x))


def split_lift(m, x, q):
    """Functional representing the director vector ``x`` based at ``q``
    (orthogonal to both ``v_m`` and ``v_q``)."""
    m = _metric(m)
    q = _point(m, q)
    x = as_hollow(x)
    return _frozen(np.append(x, -0.5 * x @ m.d_matrix @ q))
