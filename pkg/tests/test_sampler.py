import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latcut.errors import DegenerateBody, DimensionTooLarge, EmptySlice, InfeasibleStart, ZeroNormal
from latcut.sampler import (
    KERNEL_NAME,
    AffineSubspace,
    Polytope,
    SamplerConfig,
    _walk_py,
    add_halfspace,
    affine_hull,
    chebyshev_center,
    contains,
    default_sample_count,
    estimate_moments,
    estimate_volume,
    interior_start,
    sample,
)

TRIANGLE = [(0, 0), (1, 0), (0, 1)]


def segment_2d():
    """[0,1] x {0} as a 1-dimensional subspace of R^2."""
    sub = AffineSubspace(np.zeros(2), np.array([[1.0, 0.0]]))
    return Polytope(np.array([[1.0, 0.0], [-1.0, 0.0]]), np.array([1.0, 0.0]), sub)


# -- polytopes ------------------------------------------------------------------------

def test_contains_box():
    K = Polytope.box(3, 5)
    assert contains(K, np.zeros(3))
    assert not contains(K, np.array([6.0, 0, 0]))


def test_contains_after_cut():
    K = add_halfspace(Polytope.box(2, 1), np.array([-1.0, 0.0]), 0.0)  # keeps -x1 >= 0
    assert not contains(K, np.array([0.5, 0.0]))
    assert contains(K, np.array([-0.5, 0.0]))


def test_contains_respects_subspace():
    K = segment_2d()
    assert contains(K, np.array([0.5, 0.0]))
    assert not contains(K, np.array([0.5, 1e-6]))


def test_add_halfspace_segment():
    K = add_halfspace(Polytope.box(1, 1), np.array([1.0]), 0.0)
    assert K.num_constraints == 3
    assert contains(K, np.array([1.0])) and contains(K, np.array([0.0]))
    assert not contains(K, np.array([-0.01]))
    assert np.allclose(np.linalg.norm(K.normals, axis=1), 1.0)


def test_add_halfspace_idempotent():
    c = np.array([1.0, 2.0])
    once = add_halfspace(Polytope.box(2, 1), c, 0.3)
    twice = add_halfspace(once, c, 0.3)
    pts = np.random.default_rng(0).uniform(-1.2, 1.2, (500, 2))
    assert [contains(once, p) for p in pts] == [contains(twice, p) for p in pts]


def test_add_halfspace_half_square():
    K = add_halfspace(Polytope.box(2, 1), np.array([1.0, 1.0]) / np.sqrt(2), 0.0)
    assert estimate_volume(K, seed=1) == pytest.approx(2.0, abs=0.2)


def test_zero_normal_rejected():
    with pytest.raises(ZeroNormal):
        add_halfspace(Polytope.box(2, 1), np.zeros(2), 0.0)


def test_restrict_drops_constant_rows():
    K = Polytope.box(2, 1)
    line = AffineSubspace(np.array([0.0, 0.5]), np.array([[1.0, 0.0]]))
    R = K.restrict(line)
    assert R.num_constraints == 2
    with pytest.raises(EmptySlice):
        K.restrict(AffineSubspace(np.array([0.0, 2.0]), np.array([[1.0, 0.0]])))


# -- sampling ---------------------------------------------------------------------------

def test_box_sample_mean():
    pts = sample(Polytope.box(2, 1), 10000, seed=3)
    assert np.all(np.abs(pts.mean(axis=0)) < 0.05)
    assert all(contains(Polytope.box(2, 1), p) for p in pts[::50])


def test_segment_confinement():
    pts = sample(segment_2d(), 2000, seed=1)
    assert np.all(np.abs(pts[:, 1]) <= 1e-8)
    assert pts[:, 0].min() >= 0 and pts[:, 0].max() <= 1


def test_triangle_sample_mean():
    pts = sample(Polytope.from_vertices_2d(TRIANGLE), 10000, seed=5)
    assert np.allclose(pts.mean(axis=0), [1 / 3, 1 / 3], atol=0.05)


def test_infeasible_start():
    K = add_halfspace(Polytope.box(2, 1), np.array([1.0, 0.0]), 1.0)  # x1 >= 1: a face
    with pytest.raises(InfeasibleStart):
        interior_start(K)


def test_interior_start_repairs_warm_start():
    K = add_halfspace(Polytope.box(2, 1), np.array([1.0, 0.0]), 0.5)
    y = interior_start(K, np.array([0.0, 0.0]))
    assert np.all(K.local()[1] - K.local()[0] @ y > 0)


def test_kernels_agree():
    from latcut.sampler import KERNEL
    K = Polytope.from_vertices_2d(TRIANGLE)
    a, b = K.local()
    rng = np.random.default_rng(0)
    gauss, unif = rng.standard_normal((600, 2)), rng.random(600)
    out1, out2 = np.empty((50, 2)), np.empty((50, 2))
    y0 = np.array([0.2, 0.2])
    KERNEL(a, b, np.eye(2), y0, gauss, unif, 100, 10, out1)
    _walk_py.hit_and_run(a, b, np.eye(2), y0, gauss, unif, 100, 10, out2)
    assert np.allclose(out1, out2, atol=1e-9)
    assert KERNEL_NAME in ("compiled", "python")


def test_backends_reproducible():
    K = Polytope.box(3, 1)
    cfg_py = SamplerConfig(backend="python")
    a = sample(K, 50, seed=9, config=cfg_py)
    b = sample(K, 50, seed=9, config=cfg_py)
    c = sample(K, 50, seed=9)
    assert np.array_equal(a, b)
    assert np.allclose(a, c, atol=1e-9)


def test_chains_are_merged_in_order():
    K = Polytope.box(2, 1)
    a = sample(K, 40, seed=2, config=SamplerConfig(chains=4))
    b = sample(K, 40, seed=2, config=SamplerConfig(chains=4))
    assert a.shape == (40, 2) and np.array_equal(a, b)


# -- moments ----------------------------------------------------------------------------------

def test_default_sample_count():
    assert default_sample_count(1, 0.01) == 4000
    assert default_sample_count(2, 0.1) == 2000


def test_box_moments():
    est = estimate_moments(Polytope.box(2, 1), 0.01, seed=0)
    assert np.allclose(est.centroid, 0, atol=0.05)
    cov = est.covariance_array
    assert np.allclose(np.diag(cov), 1 / 3, rtol=0.05)
    assert abs(cov[0, 1]) < 0.05 / 3


def test_triangle_moments():
    est = estimate_moments(Polytope.from_vertices_2d(TRIANGLE), 0.01, seed=0)
    # analytic moments of the unit simplex
    exact = np.array([[1 / 18, -1 / 36], [-1 / 36, 1 / 18]])
    assert np.allclose(est.covariance_array, exact, rtol=0.10)
    assert np.allclose(est.centroid, [1 / 3, 1 / 3], atol=0.02)


def test_segment_moments():
    sub = AffineSubspace(np.zeros(1), np.eye(1))
    K = Polytope(np.array([[1.0], [-1.0]]), np.array([1.0, 0.0]), sub)
    est = estimate_moments(K, 0.01, seed=0)
    assert est.centroid[0] == pytest.approx(0.5, rel=0.05)
    assert est.covariance_array[0, 0] == pytest.approx(1 / 12, rel=0.05)


def test_epsilon_range():
    with pytest.raises(ValueError):
        estimate_moments(Polytope.box(2, 1), 0.5)


def test_degenerate_body():
    K = Polytope.box(2, 1)
    K = add_halfspace(add_halfspace(K, np.array([0.0, 1.0]), 0.0), np.array([0.0, -1.0]), -1e-11)
    with pytest.raises((DegenerateBody, InfeasibleStart)):
        estimate_moments(K, 0.01, sample_count=500)


def test_centroid_is_interior():
    K = add_halfspace(Polytope.box(3, 1), np.array([1.0, 1.0, 1.0]), 1.5)
    est = estimate_moments(K, 0.01, seed=4, sample_count=3000)
    assert np.all(K.slack(est.centroid) > 0)


# -- hulls and volumes -------------------------------------------------------------------------

def test_chebyshev_center_box():
    c, r = chebyshev_center(Polytope.box(2, 2))
    assert np.allclose(c, 0, atol=1e-9) and r == pytest.approx(2.0)


def test_affine_hull_of_face():
    K = add_halfspace(Polytope.box(3, 1), np.array([1.0, 0.0, 0.0]), 1.0)
    hull = affine_hull(K)
    assert hull.dim == 2
    assert hull.base_point[0] == pytest.approx(1.0)
    assert np.allclose(hull.directions[:, 0], 0, atol=1e-9)
    assert affine_hull(Polytope.box(3, 1)).dim == 3


def test_volume_examples():
    assert estimate_volume(Polytope.box(2, 1), seed=0) == pytest.approx(4.0, abs=0.4)
    half = add_halfspace(Polytope.box(2, 1), np.array([1.0, 0.0]), 0.0)
    assert estimate_volume(half, seed=0) == pytest.approx(2.0, abs=0.2)
    tri = Polytope.from_vertices_2d(TRIANGLE)
    assert estimate_volume(tri, seed=0) == pytest.approx(0.5, abs=0.05)
    assert estimate_volume(segment_2d()) == pytest.approx(1.0)


def test_volume_dimension_limit():
    with pytest.raises(DimensionTooLarge):
        estimate_volume(Polytope.box(7, 1))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4))
def test_samples_satisfy_constraints(seed, n):
    rng = np.random.default_rng(seed)
    K = Polytope.box(n, 1)
    for _ in range(3):
        K = add_halfspace(K, rng.standard_normal(n), -0.3)
    pts = sample(K, 200, seed=seed, config=SamplerConfig(burn_factor=20, thin_factor=2))
    assert np.all(pts @ K.normals.T <= K.offsets + 1e-9)
