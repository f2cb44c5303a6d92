import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latcut.errors import NotPrimitive, RankTooLarge, ZeroVector
from latcut.lattice import (
    LatticeBasis,
    QuadraticNorm,
    ShortestVectorResult,
    approx_shortest_vector,
    coefficients_in_basis,
    contains_vector,
    dual_basis,
    enumerate_shortest_vector,
    gram_determinant,
    gram_schmidt,
    lattice_determinant,
    lll_reduce,
    lll_transform,
    minkowski_bound,
    preimage_consistent,
    project_out,
    squared_norm,
    unimodular_completion,
)


def brute_lambda1_sq(rows, a=None, bound=4):
    """Independent float oracle: min over coefficient vectors in [-bound, bound]^k."""
    b = np.array(rows, dtype=float)
    a = np.eye(b.shape[1]) if a is None else np.asarray(a, dtype=float)
    best = math.inf
    for c in itertools.product(range(-bound, bound + 1), repeat=b.shape[0]):
        if any(c):
            v = np.array(c) @ b
            best = min(best, float(v @ a @ v))
    return best


def random_basis(rng, n, k, lo=-5, hi=5):
    while True:
        rows = rng.integers(lo, hi + 1, (k, n)).tolist()
        if np.linalg.matrix_rank(np.array(rows)) == k:
            return rows


def random_psd(rng, n):
    m = rng.integers(-3, 4, (n, n))
    return m.T @ m + np.eye(n, dtype=int)


# -- Gram-Schmidt ------------------------------------------------------------

def test_gram_schmidt_unit_metric():
    bstar, mu = gram_schmidt(LatticeBasis.integer([[1, 0], [1, 1]]))
    assert bstar[1] == (0, 1)
    assert mu[0][1] == 1


def test_gram_schmidt_weighted_metric():
    norm = QuadraticNorm.from_array(np.diag([1.0, 4.0]))
    bstar, mu = gram_schmidt(LatticeBasis.integer([[1, 0], [1, 1]]), norm)
    assert mu[0][1] == 1
    assert bstar[1] == (0, 1)
    assert norm.squared(bstar[1]) == 4
    # dense float oracle
    a = np.diag([1.0, 4.0])
    b1, b2 = np.array([1.0, 0.0]), np.array([1.0, 1.0])
    m = (b2 @ a @ b1) / (b1 @ a @ b1)
    assert m == pytest.approx(1.0)
    assert math.sqrt((b2 - m * b1) @ a @ (b2 - m * b1)) == pytest.approx(2.0)


def test_gram_schmidt_orthogonal_input():
    bstar, mu = gram_schmidt(LatticeBasis.standard(2))
    assert bstar == [(1, 0), (0, 1)]
    assert all(x == 0 for row in mu for x in row)


# -- LLL ------------------------------------------------------------------------

def test_lll_skewed_basis():
    red = lll_reduce(LatticeBasis.integer([[1, 0], [1000, 1]]))
    vecs = {tuple(abs(int(x)) for x in v) for v in red.vectors}
    assert vecs == {(1, 0), (0, 1)}
    assert squared_norm(red.vectors[0]) == 1


def test_lll_identity_unchanged():
    red = lll_reduce(LatticeBasis.standard(2))
    assert {tuple(abs(int(x)) for x in v) for v in red.vectors} == {(1, 0), (0, 1)}


def test_lll_rank5_guarantee():
    rng = np.random.default_rng(5)
    rows = random_basis(rng, 5, 5)
    b = LatticeBasis.integer(rows)
    lam = enumerate_shortest_vector(b).norm_squared
    red = lll_reduce(b)
    assert squared_norm(red.vectors[0]) <= 2 ** 4 * lam


def test_lll_transform_is_unimodular():
    rng = np.random.default_rng(11)
    b = LatticeBasis.integer(random_basis(rng, 4, 4))
    red, h = lll_transform(b, QuadraticNorm.from_array(random_psd(rng, 4).astype(float)))
    det = round(np.linalg.det(np.array(h, dtype=float)))
    assert abs(det) == 1
    # the inverse is integral: every original vector is an integer combination of the reduced ones
    for v in b.vectors:
        assert contains_vector(red, v)
    assert gram_determinant(red) == gram_determinant(b)
    assert preimage_consistent(red)


# -- shortest vectors --------------------------------------------------------------------

def test_svp_unit_lattice_tie_break():
    r = enumerate_shortest_vector(LatticeBasis.standard(2))
    assert r.norm_squared == 1
    assert r.vector == (0, 1)


def test_svp_skewed_metric():
    norm = QuadraticNorm.from_array(np.diag([1.0, 1e-6]))
    r = enumerate_shortest_vector(LatticeBasis.standard(2), norm)
    assert r.vector == (0, 1)
    assert r.norm_value == pytest.approx(1e-3, rel=1e-12)
    # enumeration over |c_i| <= 2
    assert brute_lambda1_sq([[1, 0], [0, 1]], np.diag([1, 1e-6]), 2) == pytest.approx(1e-6)


def test_svp_two_by_two():
    rows = [[2, 0], [1, 2]]
    r = enumerate_shortest_vector(LatticeBasis.integer(rows))
    assert r.vector == (2, 0)
    assert r.norm_value == 2
    assert brute_lambda1_sq(rows, bound=3) == 4


def test_approx_lll_skewed_metric():
    norm = QuadraticNorm.from_array(np.diag([1.0, 1e-6]))
    r = approx_shortest_vector(LatticeBasis.standard(2), norm, "lll")
    assert tuple(abs(x) for x in r.vector) == (0, 1)
    assert r.norm_value <= math.sqrt(2) * 1e-3 * (1 + 1e-12)
    assert r.gamma == pytest.approx(math.sqrt(2))


def test_approx_rank_one():
    for backend in ("lll", "exact"):
        r = approx_shortest_vector(LatticeBasis.integer([[3]]), QuadraticNorm.from_array([[2.5]]), backend)
        assert tuple(abs(x) for x in r.vector) == (3,)


def test_exact_backend_matches_enumeration():
    rng = np.random.default_rng(6)
    b = LatticeBasis.integer(random_basis(rng, 6, 6))
    norm = QuadraticNorm.from_array(random_psd(rng, 6).astype(float))
    assert approx_shortest_vector(b, norm, "exact") == enumerate_shortest_vector(b, norm)


def test_rank_limit():
    with pytest.raises(RankTooLarge):
        enumerate_shortest_vector(LatticeBasis.standard(3), rank_limit=2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(2, 3))
def test_enumeration_matches_brute_force(seed, k_off, n):
    rng = np.random.default_rng(seed)
    k = max(1, n - k_off + 1)
    rows = random_basis(rng, n, k, -3, 3)
    a = random_psd(rng, n)
    r = enumerate_shortest_vector(LatticeBasis.integer(rows), QuadraticNorm.from_array(a.astype(float)))
    assert float(r.norm_squared) == pytest.approx(brute_lambda1_sq(rows, a, 5), rel=1e-9)


# -- projection, completion, duals ---------------------------------------------------

def _svr(basis, coeffs):
    vec, pre = basis.combine(coeffs)
    return ShortestVectorResult(vec, pre, math.sqrt(squared_norm(vec)), 1.0, tuple(coeffs), squared_norm(vec))


def test_project_out_diagonal():
    z2 = LatticeBasis.standard(2)
    proj = project_out(z2, _svr(z2, (1, 1)))
    assert proj.rank == 1
    assert tuple(abs(x) for x in proj.vectors[0]) == (Fraction(1, 2), Fraction(1, 2))
    assert proj.vectors[0][0] == -proj.vectors[0][1]
    assert lattice_determinant(proj) == pytest.approx(math.sqrt(2) / 2)
    assert math.sqrt(2) * lattice_determinant(proj) == pytest.approx(1.0)
    assert preimage_consistent(proj)


def test_project_out_axes():
    z2 = LatticeBasis.standard(2)
    proj = project_out(z2, _svr(z2, (1, 0)))
    assert tuple(abs(x) for x in proj.vectors[0]) == (0, 1)
    z3 = LatticeBasis.standard(3)
    proj3 = project_out(z3, _svr(z3, (0, 0, 1)))
    assert all(v[2] == 0 for v in proj3.vectors)
    assert gram_determinant(proj3) == 1


def test_project_out_rejects_non_primitive():
    z2 = LatticeBasis.standard(2)
    with pytest.raises(NotPrimitive):
        project_out(z2, _svr(z2, (2, 0)))


def test_unimodular_completion():
    for c in [(1, 0), (3, 5), (6, 10, 15), (-4, 7, 0, 9)]:
        u = unimodular_completion(c)
        assert [row[0] for row in u] == list(c)
        assert abs(round(np.linalg.det(np.array(u, dtype=float)))) == 1
    with pytest.raises(ZeroVector):
        unimodular_completion((0, 0))
    with pytest.raises(NotPrimitive):
        unimodular_completion((2, 4))


def test_dual_basis_examples():
    assert dual_basis(LatticeBasis.standard(3)).vectors == LatticeBasis.standard(3).vectors
    d = dual_basis(LatticeBasis.integer([[2, 0], [0, 1]]))
    assert d.vectors == ((Fraction(1, 2), 0), (0, 1))
    b = LatticeBasis.integer([[1, 1], [1, 0]])
    d = dual_basis(b)
    for i, di in enumerate(d.vectors):
        for j, bj in enumerate(b.vectors):
            assert sum(x * y for x, y in zip(di, bj)) == int(i == j)


def test_determinants():
    assert lattice_determinant(LatticeBasis.standard(3)) == 1
    half = LatticeBasis.from_rows([[Fraction(1, 2), Fraction(-1, 2)]])
    assert lattice_determinant(half) == pytest.approx(math.sqrt(2) / 2)
    rng = np.random.default_rng(3)
    b = LatticeBasis.integer(random_basis(rng, 4, 3))
    assert gram_determinant(lll_reduce(b)) == gram_determinant(b)


def test_minkowski_examples():
    assert minkowski_bound(LatticeBasis.standard(2)) == pytest.approx(math.sqrt(2))
    assert minkowski_bound(LatticeBasis.integer([[3]])) == pytest.approx(3)
    rng = np.random.default_rng(8)
    b = LatticeBasis.integer(random_basis(rng, 5, 5))
    assert minkowski_bound(b) >= enumerate_shortest_vector(b).norm_value


def test_coefficients_roundtrip():
    b = LatticeBasis.integer([[2, 1], [0, 3]])
    assert coefficients_in_basis(b, (4, 5)) == (2, 1)
    assert not contains_vector(b, (1, 0))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_dual_of_projection(seed):
    """Dual of the projected lattice equals the dual lattice intersected with v-perp."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5))
    b = LatticeBasis.integer(random_basis(rng, n, n, -3, 3))
    while True:
        c = tuple(int(x) for x in rng.integers(-2, 3, n))
        if any(c) and math.gcd(*c) == 1:
            break
    proj = project_out(b, _svr(b, c))
    dproj = dual_basis(proj)
    dual = dual_basis(b)
    v, _ = b.combine(c)
    for w in dproj.vectors:
        assert sum(x * y for x, y in zip(w, v)) == 0
        assert contains_vector(dual, w)
    for y in itertools.product(range(-2, 3), repeat=n):
        if any(y) and sum(a * b_ for a, b_ in zip(y, c)) == 0:
            w, _ = dual.combine(y)
            assert contains_vector(dproj, w)
