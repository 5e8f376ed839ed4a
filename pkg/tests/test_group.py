"""Group structure, gauge norms, and measure constants."""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hfrac import group

coord = st.floats(-3.0, 3.0, allow_nan=False)
vert = st.floats(-9.0, 9.0, allow_nan=False)
point = st.tuples(coord, coord, vert).map(lambda p: np.array(p))


def _batch(rng, m, scale=2.0):
    z = rng.uniform(-scale, scale, size=(m, 2))
    t = rng.uniform(-scale * scale, scale * scale, size=(m, 1))
    return np.concatenate([z, t], axis=1)


@given(point)
def test_identity_and_inverse_exact(a):
    e = group.identity(1)
    assert np.array_equal(group.group_mul(a, e), a)
    assert np.array_equal(group.group_mul(e, a), a)
    # the t-component of a * a^-1 cancels exactly in floating point
    assert np.array_equal(group.group_mul(a, group.group_inv(a)), e)
    assert np.array_equal(group.group_mul(group.group_inv(a), a), e)


def test_associativity_batch():
    rng = np.random.default_rng(7)
    a, b, c = (_batch(rng, 2000) for _ in range(3))
    left = group.group_mul(group.group_mul(a, b), c)
    right = group.group_mul(a, group.group_mul(b, c))
    assert np.max(np.abs(left - right)) < 1e-12 * np.max(np.abs(right) + 1)


def test_noncommutative():
    a = np.array([1.0, 0.0, 0.0])
    b = np.array([0.0, 1.0, 0.0])
    ab = group.group_mul(a, b)
    ba = group.group_mul(b, a)
    assert ab[2] == -2.0 and ba[2] == 2.0


@given(point, point, st.floats(0.1, 4.0))
def test_dilation_automorphism(a, b, lam):
    left = group.dilate(lam, group.group_mul(a, b))
    right = group.group_mul(group.dilate(lam, a), group.dilate(lam, b))
    assert np.allclose(left, right, rtol=1e-12, atol=1e-12)


def test_dilate_rejects_nonpositive():
    with pytest.raises(ValueError):
        group.dilate(0.0, np.zeros(3))
    with pytest.raises(ValueError):
        group.dilate(-1.0, np.zeros(3))


@given(point, st.floats(0.1, 4.0))
def test_norm_homogeneity(a, lam):
    for norm in (group.koranyi_norm, group.box_norm):
        assert np.isclose(
            norm(group.dilate(lam, a)), lam * norm(a), rtol=1e-12, atol=1e-300
        )


def test_norm_symmetry_exact():
    rng = np.random.default_rng(11)
    a = _batch(rng, 2000)
    assert np.array_equal(group.koranyi_norm(group.group_inv(a)), group.koranyi_norm(a))
    assert np.array_equal(group.box_norm(group.group_inv(a)), group.box_norm(a))


def test_norm_vanishes_only_at_origin():
    assert group.koranyi_norm(np.zeros(3)) == 0.0
    rng = np.random.default_rng(13)
    a = _batch(rng, 500)
    nz = np.any(a != 0.0, axis=1)
    assert np.all(group.koranyi_norm(a[nz]) > 0.0)


@given(point, point, point)
def test_gauge_triangle_inequality(a, b, c):
    # the gauge distance is a true metric, not just a quasi-metric
    dac = group.koranyi_dist(a, c)
    dab = group.koranyi_dist(a, b)
    dbc = group.koranyi_dist(b, c)
    assert dac <= (dab + dbc) * (1.0 + 1e-9) + 1e-12


@given(point, point, point)
def test_dist_left_invariance(zeta, a, b):
    shifted = group.koranyi_dist(group.group_mul(zeta, a), group.group_mul(zeta, b))
    base = group.koranyi_dist(a, b)
    assert np.isclose(shifted, base, rtol=1e-9, atol=1e-12)


def test_box_equivalence_range_and_sharpness():
    rng = np.random.default_rng(17)
    a = _batch(rng, 5000)
    kn = group.koranyi_norm(a)
    bn = group.box_norm(a)
    nz = bn > 0
    ratio = kn[nz] / bn[nz]
    assert np.all(ratio >= 1.0 - 1e-12)
    assert np.all(ratio <= group.BOX_EQUIVALENCE * (1.0 + 1e-12))
    # both extremes are attained
    assert group.koranyi_norm(np.array([1.0, 0.0, 0.0])) == 1.0
    diag = np.array([1.0, 0.0, 1.0])
    assert np.isclose(
        group.koranyi_norm(diag) / group.box_norm(diag),
        group.BOX_EQUIVALENCE, rtol=1e-14,
    )


def test_norm_equivalence_constant_box():
    rng = np.random.default_rng(19)
    samples = _batch(rng, 4000)
    lam = group.norm_equivalence_constant(group.HomNorm(group.BOX), samples)
    assert 1.0 <= lam <= group.BOX_EQUIVALENCE * (1.0 + 1e-12)
    with pytest.raises(ValueError):
        group.norm_equivalence_constant(group.HomNorm(group.BOX), np.zeros((3, 3)))


def test_hom_norm_wrapper():
    hn = group.HomNorm(group.KORANYI)
    pt = np.array([0.3, -0.2, 0.5])
    assert hn(pt) == group.koranyi_norm(pt)
    assert hn.lambda_equiv == 1.0
    assert group.HomNorm(group.BOX).lambda_equiv == group.BOX_EQUIVALENCE
    with pytest.raises(ValueError):
        group.HomNorm("euclidean")


def test_homogeneous_dimension():
    assert group.homogeneous_dimension(1) == 4
    assert group.homogeneous_dimension(2) == 6
    with pytest.raises(ValueError):
        group.homogeneous_dimension(0)


def test_coord_layout_helpers():
    assert group.dim_of(1) == 3
    assert group.n_of(np.zeros((5, 3))) == 1
    assert group.n_of(np.zeros(5)) == 2
    with pytest.raises(ValueError):
        group.n_of(np.zeros((4, 4)))
    x, y, t = group.split_coords(np.array([1.0, 2.0, 3.0]))
    assert np.array_equal(x, [1.0]) and np.array_equal(y, [2.0]) and t == 3.0
    assert np.array_equal(group.horizontal(np.array([1.0, 2.0, 3.0])), [1.0, 2.0])


def test_ball_volume_closed_form_and_mc():
    vol = group.ball_volume(1)
    assert np.isclose(vol, np.pi ** 2 / 2.0, rtol=1e-12)
    # box-rejection cross-check on [-1,1]^2 x [-1,1]
    rng = np.random.default_rng(23)
    pts = rng.uniform(-1.0, 1.0, size=(500_000, 3))
    frac = np.mean(group.koranyi_norm(pts) < 1.0)
    assert abs(8.0 * frac - vol) / vol < 0.01
    with pytest.raises(ValueError):
        group.ball_volume(0)


def test_sphere_surface_scaling():
    assert np.isclose(group.sphere_surface(1), 2.0 * np.pi ** 2, rtol=1e-12)
    assert np.isclose(
        group.sphere_surface(1), 4.0 * group.ball_volume(1), rtol=1e-14
    )
    assert np.isclose(group.euclidean_sphere_surface(3), 4.0 * np.pi, rtol=1e-14)
    assert np.isclose(group.euclidean_sphere_surface(2), 2.0 * np.pi, rtol=1e-14)


def test_dilation_measure_scaling():
    # |Phi_lam(E)| = lam^Q |E|: the dilation Jacobian determinant is lam^Q,
    # and the dilation maps B_1 exactly onto B_lam
    lam = 1.7
    jac = np.diag([lam, lam, lam * lam])
    assert np.isclose(
        np.linalg.det(jac), lam ** group.homogeneous_dimension(1), rtol=1e-12
    )
    rng = np.random.default_rng(29)
    pts = rng.uniform(-1.0, 1.0, size=(100_000, 3))
    inside = pts[group.koranyi_norm(pts) < 1.0]
    assert np.all(group.koranyi_norm(group.dilate(lam, inside)) < lam * (1.0 + 1e-12))
