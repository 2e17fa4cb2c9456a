"""Random generators and independent oracles shared by the test modules."""

from fractions import Fraction

import numpy as np

EXAMPLE_S = np.array([[1, 4, -2], [4, 9, -1], [-2, -1, 1]], dtype=float)
EXAMPLE_DELTA = np.array([[1, 3, -5], [3, 9, -7], [-5, -7, 1]], dtype=float)
EXAMPLE_D = np.array([[0, 8, 24], [8, 0, 48], [24, 48, 0]], dtype=float)
EXAMPLE_CM = np.array([[0, 4, 12, 1], [4, 0, 24, 1], [12, 24, 0, 1], [1, 1, 1, 0]], dtype=float)
R02 = np.array([0.5, 0.0, 0.5])
P_INV = np.array([2.0, -1.0, 0.0])


def random_weight(rng, n, scale=1.0):
    p = rng.normal(scale=scale, size=n + 1)
    p[-1] = 1.0 - p[:-1].sum()
    return p


def random_hollow(rng, n):
    x = rng.normal(size=n + 1)
    return x - x.mean()


def random_symmetric(rng, n, scale=5.0):
    a = rng.normal(scale=scale, size=(n + 1, n + 1))
    return 0.5 * (a + a.T)


def random_hollow_symmetric(rng, n, scale=10.0):
    a = rng.uniform(-scale, scale, size=(n + 1, n + 1))
    a = 0.5 * (a + a.T)
    np.fill_diagonal(a, 0.0)
    return a


def configuration_d(points, signs):
    """Squared pseudodistances ``sum_k signs_k (x_i - x_j)_k^2``."""
    diff = points[:, None, :] - points[None, :, :]
    return np.einsum("ijk,k->ij", diff * diff, signs)


def random_config_d(rng, n, n_pos, n_neg):
    """D of n+1 random points in a space with n_pos + and n_neg - directions."""
    pts = rng.normal(size=(n + 1, n_pos + n_neg))
    signs = np.concatenate([np.ones(n_pos), -np.ones(n_neg)])
    return configuration_d(pts, signs)


def random_weight_matrix(rng, rows, cols):
    C = rng.normal(size=(rows, cols))
    C[-1, :] = 1.0 - C[:-1, :].sum(axis=0)
    return C


def rank_deficient_weight_matrix(rng, rows, cols, affine_rank):
    """Columns are weights lying in an affine subspace of dimension
    ``affine_rank`` of the target."""
    anchors = np.array([random_weight(rng, rows - 1) for _ in range(affine_rank + 1)]).T
    mix = np.array([random_weight(rng, affine_rank) for _ in range(cols)]).T
    return anchors @ mix


def exact_inertia(matrix):
    """Inertia of a rational symmetric matrix by exact congruence reduction.

    Independent of any floating-point eigen solver; inputs must be exactly
    representable as fractions (integers or dyadic floats).
    """
    A = [[Fraction(v) for v in row] for row in np.asarray(matrix, dtype=float).tolist()]
    pos = neg = null = 0
    while A:
        size = len(A)
        pivot = next((i for i in range(size) if A[i][i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in range(size) for j in range(size) if A[i][j] != 0), None)
            if pair is None:
                null += size
                break
            i, j = pair
            # congruence: row_i += row_j, col_i += col_j
            for k in range(size):
                A[i][k] += A[j][k]
            for k in range(size):
                A[k][i] += A[k][j]
            pivot = i
        a = A[pivot][pivot]
        if a > 0:
            pos += 1
        else:
            neg += 1
        rest = [k for k in range(size) if k != pivot]
        A = [[A[r][c] - A[r][pivot] * A[pivot][c] / a for c in rest] for r in rest]
    return pos, neg, null


def brute_quadratic_value(delta, p):
    """Value of the quadratic function as an explicit double sum."""
    n1 = len(p)
    return sum(p[i] * p[j] * delta[i][j] for i in range(n1) for j in range(n1))
