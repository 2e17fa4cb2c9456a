import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cmgeom import cayley_menger as cm
from cmgeom.affine import vertex
from cmgeom.errors import DimensionError, SingularCMError
from cmgeom.metric import Metric, inertia, pullback_metric, sq_pseudodistance
from cmgeom.tolerances import tau_functorial, tau_quadric

from helpers import (
    R02,
    EXAMPLE_CM,
    EXAMPLE_D,
    exact_inertia,
    random_config_d,
    random_hollow_symmetric,
    random_weight,
    random_weight_matrix,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
EXAMPLE = Metric(EXAMPLE_D)
LORENTZ = Metric([[0, -2], [-2, 0]])


def nondegenerate_metric(rng, n):
    n_pos = int(rng.integers(0, n + 1))
    return Metric(random_config_d(rng, n, n_pos, n - n_pos))


# --- matrix and pairings --------------------------------------------------


def test_example_matrix():
    np.testing.assert_array_equal(cm.cm_matrix(EXAMPLE).matrix, EXAMPLE_CM)


def test_small_matrices():
    np.testing.assert_array_equal(cm.cm_matrix(Metric([[0.0]])).matrix, [[0, 1], [1, 0]])
    np.testing.assert_array_equal(
        cm.cm_matrix(Metric.zero(2)).matrix, [[0, 0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 1], [1, 1, 1, 0]]
    )


def test_basis_pairings():
    M = cm.cm_matrix(EXAMPLE)
    vm = cm.v_m(2)
    assert cm.cm_pair(M, vm, vm) == 0.0
    assert cm.cm_pair(M, vertex(3, 0), vm) == 1.0
    for i in range(3):
        e = np.zeros(4)
        e[i] = 1
        assert cm.cm_pair(M, e, e) == 0.0


def test_cm_apply():
    M = cm.cm_matrix(EXAMPLE)
    np.testing.assert_array_equal(cm.cm_apply(M, cm.v_m(2)), [1, 1, 1, 0])
    np.testing.assert_array_equal(cm.cm_apply(M, [1, 0, 0, 0]), [0, 4, 12, 1])
    np.testing.assert_array_equal(cm.cm_apply(M, np.zeros(4)), 0.0)
    np.testing.assert_array_equal(cm.u_m(2), [1, 1, 1, 0])
    with pytest.raises(DimensionError):
        cm.cm_apply(M, np.zeros(3))


def test_example_inverse_pair():
    M = cm.cm_matrix(EXAMPLE)
    h = [1, 9, 1, 1]
    assert cm.cm_inverse_pair(M, h, h) == pytest.approx(-4, abs=1e-9)
    assert cm.cm_inverse_pair(M, cm.u_m(2), cm.u_m(2)) == pytest.approx(0, abs=1e-12)
    hq = cm.cm_apply(M, cm.v_of_point(EXAMPLE, [0.3, -0.2, 0.9]))
    assert cm.cm_inverse_pair(M, hq, hq) == pytest.approx(0, abs=1e-9)


def test_singular_form_rejects_inverse():
    M = cm.cm_matrix(Metric.zero(2))
    assert M.singular
    with pytest.raises(SingularCMError):
        cm.cm_inverse_pair(M, [0, 0, 0, 1], [0, 0, 0, 1])
    with pytest.raises(SingularCMError):
        cm.localize(Metric.zero(2), [0, 0, 0])
    with pytest.raises(SingularCMError):
        cm.sphere_fit(Metric.zero(2), [0, 0, 0])


# --- points and coordinates -----------------------------------------------


def test_v_of_point():
    np.testing.assert_array_equal(cm.v_of_point(EXAMPLE, vertex(2, 1)), [0, 1, 0, 0])
    np.testing.assert_allclose(cm.v_of_point(EXAMPLE, R02), [0.5, 0, 0.5, -3])


def test_cm_coordinates():
    np.testing.assert_allclose(cm.cm_coordinates(EXAMPLE, R02), [3, 11, 3])
    np.testing.assert_allclose(cm.cm_coordinates(EXAMPLE, vertex(2, 2)), 0.5 * EXAMPLE_D[:, 2])
    np.testing.assert_array_equal(cm.cm_coordinates(Metric.zero(2), R02), 0.0)


@settings(max_examples=60)
@given(seed=seeds, n=st.integers(0, 5), a=st.floats(-3, 3))
def test_quadraticity_defect_of_point_immersion(seed, n, a):
    rng = np.random.default_rng(seed)
    m = Metric(random_hollow_symmetric(rng, n))
    M = cm.cm_matrix(m)
    p, q = random_weight(rng, n), random_weight(rng, n)
    b = 1.0 - a
    vp, vq = cm.v_of_point(m, p), cm.v_of_point(m, q)
    defect = cm.v_of_point(m, a * p + b * q) - a * vp - b * vq
    scale = 1e-9 * (1 + np.abs(m.d_matrix).max()) * (1 + np.abs(p).max() + np.abs(q).max()) ** 2 * (1 + abs(a)) ** 2
    np.testing.assert_allclose(defect[:-1], 0.0, atol=scale)
    # constant is -a*b*CM(v_p, v_q) = -(a*b/2) * d^2(p, q)
    assert defect[-1] == pytest.approx(-a * b * cm.cm_pair(M, vp, vq), abs=scale)
    assert defect[-1] == pytest.approx(-(a * b / 2) * sq_pseudodistance(m, p, q), abs=scale)


@settings(max_examples=60)
@given(seed=seeds, n=st.integers(0, 5))
def test_isotropy_and_half_squared_distance(seed, n):
    rng = np.random.default_rng(seed)
    m = Metric(random_hollow_symmetric(rng, n))
    M = cm.cm_matrix(m)
    p, q = random_weight(rng, n), random_weight(rng, n)
    vp, vq = cm.v_of_point(m, p), cm.v_of_point(m, q)
    scale = 1e-9 * (1 + np.abs(m.d_matrix).max()) * (1 + np.abs(p).max() + np.abs(q).max()) ** 2
    assert cm.cm_pair(M, vp, vp) == pytest.approx(0.0, abs=scale)
    assert cm.cm_pair(M, vp, cm.v_m(n)) == pytest.approx(1.0, abs=scale)
    assert cm.cm_pair(M, vp, vq) == pytest.approx(0.5 * sq_pseudodistance(m, p, q), abs=scale)
    assert cm.quadric_test(M, vp)
    # basis transport: pairing values of v_p are its Cayley-Menger coordinates
    np.testing.assert_allclose(cm.cm_apply(M, vp)[:-1], cm.cm_coordinates(m, p), atol=scale)


@settings(max_examples=60)
@given(seed=seeds, n=st.integers(0, 5))
def test_quadric_characterization(seed, n):
    rng = np.random.default_rng(seed)
    m = Metric(random_hollow_symmetric(rng, n))
    M = cm.cm_matrix(m)
    p = random_weight(rng, n)
    f = np.append(p, rng.normal())
    on_quadric = np.allclose(cm.v_of_point(m, f[:-1]), f, rtol=0, atol=tau_quadric(m.d_matrix) / 10)
    assert cm.quadric_test(M, f) == on_quadric
    assert cm.quadric_test(M, cm.v_of_point(m, p))
    assert not cm.quadric_test(M, np.append(1.5 * p, cm.v_of_point(m, p)[-1]))


def test_quadric_test_rejects():
    M = cm.cm_matrix(EXAMPLE)
    assert not cm.quadric_test(M, cm.v_m(2))
    f = M.solve(np.array([1.0, 9, 1, 1]))
    assert not cm.quadric_test(M, f)


# --- localization and spheres ---------------------------------------------


def test_example_localize():
    loc = cm.localize(EXAMPLE, [3, 11, 3])
    np.testing.assert_allclose(loc.point, R02, atol=1e-12)
    assert loc.beta == pytest.approx(-3)
    assert loc.residual == pytest.approx(0, abs=1e-9)
    off = cm.localize(EXAMPLE, [1, 9, 1])
    assert off.residual == pytest.approx(-4, abs=1e-9)
    loc = cm.localize(EXAMPLE, 0.5 * EXAMPLE_D[:, 0])
    np.testing.assert_allclose(loc.point, vertex(2, 0), atol=1e-12)
    assert loc.residual == pytest.approx(0, abs=1e-9)


def test_example_sphere_fit():
    fit = cm.sphere_fit(EXAMPLE, [1, 9, 1])
    np.testing.assert_allclose(fit.center, R02, atol=1e-12)
    assert fit.r_squared == pytest.approx(4)
    fit = cm.sphere_fit(EXAMPLE, cm.cm_coordinates(EXAMPLE, [0.2, 0.7, 0.1]))
    np.testing.assert_allclose(fit.center, [0.2, 0.7, 0.1], atol=1e-9)
    assert fit.r_squared == pytest.approx(0, abs=1e-9)


def test_lorentz_sphere_fit_is_signed():
    # M = [[0,-1,1],[-1,0,1],[1,1,0]]; M z = (0,0,1) gives z = (1/2,1/2,1/2)
    assert cm.cm_inverse_pair(LORENTZ, [0, 0, 1], [0, 0, 1]) == pytest.approx(0.5)
    fit = cm.sphere_fit(LORENTZ, [0, 0])
    assert fit.r_squared == pytest.approx(-0.5)
    np.testing.assert_allclose(fit.center, [0.5, 0.5])


@settings(max_examples=60)
@given(seed=seeds, n=st.integers(1, 5), r2=st.floats(-10, 10))
def test_sphere_fit_recovers_level_sets(seed, n, r2):
    rng = np.random.default_rng(seed)
    m = Metric(random_config_d(rng, n, n, 0))
    c = random_weight(rng, n)
    values = cm.cm_coordinates(m, c) - 0.5 * r2
    fit = cm.sphere_fit(m, values)
    tol = 1e-7 * (1 + np.abs(m.d_matrix).max())
    np.testing.assert_allclose(fit.center, c, atol=tol)
    assert fit.r_squared == pytest.approx(r2, abs=tol)
    h = np.append(values, 1.0)
    assert cm.cm_inverse_pair(m, h, h) == pytest.approx(-r2, abs=tol)


# --- signature ------------------------------------------------------------


def test_signatures():
    assert cm.cm_signature(cm.cm_matrix(EXAMPLE)) == (1, 3, 0)
    assert cm.cm_signature(cm.cm_matrix(Metric.zero(1))) == (1, 1, 1)
    assert cm.cm_signature(cm.cm_matrix(Metric([[0.0]]))) == (1, 1, 0)
    assert cm.cm_signature(cm.cm_matrix(LORENTZ)) == (2, 1, 0)


@settings(max_examples=40)
@given(seed=seeds, n=st.integers(0, 6))
def test_signature_law(seed, n):
    rng = np.random.default_rng(seed)
    m = Metric(random_hollow_symmetric(rng, n))
    pos, neg, null = inertia(m)
    assert cm.cm_signature(cm.cm_matrix(m)) == (neg + 1, pos + 1, null)
    assert tuple(cm.cm_signature(cm.cm_matrix(m))) == exact_inertia(cm.cm_matrix(m).matrix)


# --- functoriality --------------------------------------------------------


def test_pushforward_basic():
    T = cm.pushforward_matrix(EXAMPLE, np.eye(3))
    np.testing.assert_array_equal(T, np.eye(4))
    perm = np.eye(3)[:, [2, 0, 1]]
    T = cm.pushforward_matrix(EXAMPLE, perm)
    np.testing.assert_array_equal(T[:3, :3], perm)
    np.testing.assert_array_equal(T[3], [0, 0, 0, 1])
    c = np.array([0.2, 0.3, 0.5])
    T = cm.pushforward_matrix(EXAMPLE, np.outer(c, np.ones(2)))
    for j in range(2):
        np.testing.assert_allclose(T[:, j], cm.v_of_point(EXAMPLE, c))
    np.testing.assert_array_equal(T[:, 2], [0, 0, 0, 1])


def test_functoriality_identity_and_swap():
    M_B, defect = cm.functoriality_check(EXAMPLE, np.eye(3))
    assert defect == 0.0
    swap = np.eye(3)[:, [2, 1, 0]]
    M_B, defect = cm.functoriality_check(EXAMPLE, swap)
    assert defect == 0.0
    order = [2, 1, 0, 3]
    np.testing.assert_array_equal(M_B.matrix, EXAMPLE_CM[np.ix_(order, order)])


@settings(max_examples=60)
@given(seed=seeds, n_a=st.integers(0, 5), n_b=st.integers(0, 5))
def test_functoriality_random(seed, n_a, n_b):
    rng = np.random.default_rng(seed)
    m = Metric(random_hollow_symmetric(rng, n_a))
    C = random_weight_matrix(rng, n_a + 1, n_b + 1)
    M_B, defect = cm.functoriality_check(m, C)
    assert defect <= tau_functorial(m.d_matrix)
    np.testing.assert_array_equal(M_B.metric.d_matrix, pullback_metric(m, C).d_matrix)


def test_functoriality_dimension_mismatch():
    with pytest.raises(DimensionError):
        cm.functoriality_check(EXAMPLE, np.eye(2))


# --- hyperbolic split -----------------------------------------------------


def test_split_of_basis_elements():
    q = np.array([0.2, 0.3, 0.5])
    a, b, x = cm.hyperbolic_split(EXAMPLE, cm.v_m(2), q)
    assert (a, b) == (1.0, 0.0)
    np.testing.assert_array_equal(x, 0.0)
    a, b, x = cm.hyperbolic_split(EXAMPLE, cm.v_of_point(EXAMPLE, q), q)
    assert a == pytest.approx(0.0, abs=1e-12)
    assert b == pytest.approx(1.0)
    np.testing.assert_allclose(x, 0.0, atol=1e-12)


@settings(max_examples=60)
@given(seed=seeds, n=st.integers(0, 5), degenerate=st.booleans())
def test_split_isometry_and_reconstruction(seed, n, degenerate):
    rng = np.random.default_rng(seed)
    m = Metric.zero(n) if degenerate else Metric(random_hollow_symmetric(rng, n))
    M = cm.cm_matrix(m)
    q = random_weight(rng, n)
    f1, f2 = rng.normal(size=n + 2), rng.normal(size=n + 2)
    a1, b1, x1 = cm.hyperbolic_split(m, f1, q)
    a2, b2, x2 = cm.hyperbolic_split(m, f2, q)
    expected = a1 * b2 + a2 * b1 + 0.5 * x1 @ m.d_matrix @ x2
    scale = abs(a1 * b2) + abs(a2 * b1) + abs(0.5 * x1 @ m.d_matrix @ x2)
    assert cm.cm_pair(M, f1, f2) == pytest.approx(expected, abs=1e-8 * max(1.0, scale))
    rebuilt = a1 * cm.v_m(n) + b1 * cm.v_of_point(m, q) + cm.split_lift(m, x1, q)
    np.testing.assert_allclose(rebuilt, f1, atol=1e-9 * max(1.0, scale))
