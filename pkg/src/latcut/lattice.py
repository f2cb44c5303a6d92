"""Exact lattice arithmetic under quadratic norms.

Lattice vectors, integral preimages, unimodular transforms and determinants
are kept in arbitrary precision (``fractions.Fraction`` / ``int``).  Norm
matrices given as floats are converted through their exact binary value.

LLL works on an integer Gram matrix (Cohen's integral variant), so no
rational denominators accumulate during reduction.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import NotPrimitive, RankDeficient, RankTooLarge, ZeroVector

Vector = tuple  # tuple[Fraction, ...]

DEFAULT_RANK_LIMIT = 8
LLL_DELTA = Fraction(3, 4)


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return Fraction(float(x))


def _frac_vec(v: Iterable) -> Vector:
    return tuple(_to_fraction(x) for x in v)


def _lcm(values: Iterable[int]) -> int:
    return reduce(math.lcm, values, 1)


def _integerize(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    """Scale rational rows by a common denominator: rows == ints / den."""
    den = _lcm(x.denominator for row in rows for x in row)
    return [[int(x * den) for x in row] for row in rows], den


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _gcd_all(values: Iterable[int]) -> int:
    return reduce(math.gcd, values, 0)


# --------------------------------------------------------------------------
# exact dense linear algebra
# --------------------------------------------------------------------------

def _bareiss_det(m: list[list[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [row[:] for row in m]
    k = len(a)
    if k == 0:
        return 1
    sign, prev = 1, 1
    for i in range(k - 1):
        if a[i][i] == 0:
            for r in range(i + 1, k):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[k - 1][k - 1]


def _solve(m: list[list[Fraction]], rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    """Solve m X = rhs exactly (m square, nonsingular). Columns of rhs are RHS."""
    k = len(m)
    a = [list(m[i]) + list(rhs[i]) for i in range(k)]
    width = len(a[0])
    for col in range(k):
        piv = next((r for r in range(col, k) if a[r][col] != 0), None)
        if piv is None:
            raise RankDeficient("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(k):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[k:width] for row in a]


# --------------------------------------------------------------------------
# types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticNorm:
    """Symmetric PSD matrix ``A`` defining ``||v||_A = sqrt(v^T A v)``."""

    matrix: tuple

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise ValueError("norm matrix must be square")
        for i in range(n):
            for j in range(i):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise ValueError("norm matrix must be symmetric")

    @classmethod
    def identity(cls, n: int) -> "QuadraticNorm":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def from_array(cls, a, rtol: float = 1e-12) -> "QuadraticNorm":
        """Build from a float or rational matrix.

        Float input is symmetrized when asymmetric within ``rtol`` (relative to
        the largest entry) and then converted exactly.
        """
        if isinstance(a, np.ndarray) and a.dtype != object:
            a = np.asarray(a, dtype=float)
            scale = max(float(np.max(np.abs(a))), 1e-300)
            if np.max(np.abs(a - a.T)) > rtol * scale:
                raise ValueError("norm matrix is not symmetric")
            a = 0.5 * (a + a.T)
        rows = [_frac_vec(row) for row in a]
        n = len(rows)
        rows = [tuple(rows[i][j] if j >= i else rows[j][i] for j in range(n)) for i in range(n)]
        return cls(tuple(rows))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def squared(self, v) -> Fraction:
        v = _frac_vec(v)
        return _dot(v, [_dot(row, v) for row in self.matrix])

    def value(self, v) -> float:
        return math.sqrt(self.squared(v))

    def inner(self, u, v) -> Fraction:
        u, v = _frac_vec(u), _frac_vec(v)
        return _dot(u, [_dot(row, v) for row in self.matrix])

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.matrix])

    @cached_property
    def _integer_matrix(self) -> tuple[list[list[int]], int]:
        return _integerize(self.matrix)


@dataclass(frozen=True)
class LatticeBasis:
    """Ordered basis of a lattice in R^n with optional integral preimages.

    ``preimages[i]`` is an integer vector whose orthogonal projection onto
    ``span(vectors)`` equals ``vectors[i]``; dual bases carry ``None``.
    """

    vectors: tuple
    preimages: tuple | None
    ambient_dim: int

    def __post_init__(self):
        k = len(self.vectors)
        if not 1 <= k <= self.ambient_dim:
            raise ValueError(f"rank {k} outside [1, {self.ambient_dim}]")
        if any(len(v) != self.ambient_dim for v in self.vectors):
            raise ValueError("vector length differs from ambient dimension")
        if self.preimages is not None:
            if len(self.preimages) != k or any(len(z) != self.ambient_dim for z in self.preimages):
                raise ValueError("preimages do not match basis shape")

    @classmethod
    def from_rows(cls, rows, preimages=None) -> "LatticeBasis":
        vecs = tuple(_frac_vec(r) for r in rows)
        pre = None
        if preimages is not None:
            pre = tuple(tuple(int(x) for x in z) for z in preimages)
        return cls(vecs, pre, len(vecs[0]))

    @classmethod
    def integer(cls, rows) -> "LatticeBasis":
        """Integer basis whose vectors are their own preimages (full rank)."""
        ints = [tuple(int(x) for x in r) for r in rows]
        return cls.from_rows(ints, ints)

    @classmethod
    def standard(cls, n: int) -> "LatticeBasis":
        return cls.integer([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def rank(self) -> int:
        return len(self.vectors)

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in v] for v in self.vectors])

    def combine(self, coeffs: Sequence[int]) -> tuple[Vector, tuple | None]:
        """Lattice vector (and preimage) with the given integer coordinates."""
        vec = tuple(sum(c * v[j] for c, v in zip(coeffs, self.vectors)) for j in range(self.ambient_dim))
        pre = None
        if self.preimages is not None:
            pre = tuple(sum(c * z[j] for c, z in zip(coeffs, self.preimages)) for j in range(self.ambient_dim))
        return vec, pre

    def transform(self, h: Sequence[Sequence[int]]) -> "LatticeBasis":
        """Basis with rows ``h @ vectors`` (and the same action on preimages)."""
        vecs, pres = [], []
        for row in h:
            v, z = self.combine(row)
            vecs.append(v)
            pres.append(z)
        return LatticeBasis(tuple(vecs), None if self.preimages is None else tuple(pres), self.ambient_dim)

    def euclidean_gram(self) -> list[list[Fraction]]:
        return [[_dot(u, v) for v in self.vectors] for u in self.vectors]


@dataclass(frozen=True)
class ShortestVectorResult:
    vector: Vector
    preimage: tuple | None
    norm_value: float
    gamma: float
    coefficients: tuple = field(default=())
    norm_squared: Fraction = Fraction(0)


# --------------------------------------------------------------------------
# Gram matrices
# --------------------------------------------------------------------------

def integer_gram(basis: LatticeBasis, norm: QuadraticNorm | None = None) -> tuple[list[list[int]], int]:
    """Return ``(G, scale)`` with ``B A B^T == G / scale`` and G integral."""
    b_int, bden = _integerize(basis.vectors)
    if norm is None:
        g = [[_dot(u, v) for v in b_int] for u in b_int]
        return g, bden * bden
    if norm.dim != basis.ambient_dim:
        raise ValueError("norm and basis dimensions differ")
    a_int, aden = norm._integer_matrix
    ab = [[_dot(row, b) for row in a_int] for b in b_int]
    g = [[_dot(u, w) for w in ab] for u in b_int]
    return g, bden * bden * aden


def gram_determinant(basis: LatticeBasis, norm: QuadraticNorm | None = None) -> Fraction:
    """Exact ``det(B A B^T)`` (Euclidean when ``norm`` is None)."""
    g, scale = integer_gram(basis, norm)
    return Fraction(_bareiss_det(g), scale ** basis.rank)


# --------------------------------------------------------------------------
# Gram-Schmidt and LLL
# --------------------------------------------------------------------------

def gram_schmidt(basis: LatticeBasis, norm: QuadraticNorm | None = None):
    """Exact Gram-Schmidt orthogonalization under ``<x, y>_A``.

    Returns ``(bstar, mu)`` where ``bstar[j] = b_j - sum_{i<j} mu[i][j] bstar[i]``.
    """
    norm = norm or QuadraticNorm.identity(basis.ambient_dim)
    k = basis.rank
    bstar: list[Vector] = []
    sq: list[Fraction] = []
    mu = [[Fraction(0)] * k for _ in range(k)]
    for j, b in enumerate(basis.vectors):
        cur = list(b)
        for i in range(j):
            mu[i][j] = norm.inner(b, bstar[i]) / sq[i]
            cur = [x - mu[i][j] * y for x, y in zip(cur, bstar[i])]
        s = norm.squared(cur)
        if s <= 0:
            raise RankDeficient("norm is singular on the span of the basis")
        bstar.append(tuple(cur))
        sq.append(s)
    return bstar, mu


class _IntegralLLL:
    """Cohen's integral LLL on a positive definite integer Gram matrix.

    ``h`` rows give the reduced basis in terms of the input basis; ``d`` and
    ``lam`` are the integral Gram-Schmidt data (1-based, ``d[0] == 1``).
    """

    def __init__(self, gram: list[list[int]], delta: Fraction = LLL_DELTA):
        self.g = gram
        self.k = len(gram)
        self.p, self.q = delta.numerator, delta.denominator
        k = self.k
        self.h = [[int(i == j) for j in range(k)] for i in range(k)]
        self.d = [1] + [0] * k
        self.lam = [[0] * (k + 1) for _ in range(k + 1)]

    def _inner_new(self, kk: int, j: int) -> int:
        # row kk (1-based) is still the kk-th input vector when first reached
        col = kk - 1
        hj = self.h[j - 1]
        return sum(hj[l] * self.g[l][col] for l in range(self.k) if hj[l])

    def _incremental_gs(self, kk: int):
        d, lam = self.d, self.lam
        for j in range(1, kk + 1):
            u = self._inner_new(kk, j)
            for i in range(1, j):
                u = (d[i] * u - lam[kk][i] * lam[j][i]) // d[i - 1]
            if j < kk:
                lam[kk][j] = u
            else:
                if u <= 0:
                    raise RankDeficient("basis is dependent or norm singular on its span")
                d[kk] = u

    def _red(self, kk: int, l: int):
        d, lam = self.d, self.lam
        if 2 * abs(lam[kk][l]) > d[l]:
            q = (2 * lam[kk][l] + d[l]) // (2 * d[l])
            hk, hl = self.h[kk - 1], self.h[l - 1]
            for t in range(self.k):
                hk[t] -= q * hl[t]
            lam[kk][l] -= q * d[l]
            for i in range(1, l):
                lam[kk][i] -= q * lam[l][i]

    def _swap(self, kk: int, kmax: int):
        d, lam, h = self.d, self.lam, self.h
        h[kk - 1], h[kk - 2] = h[kk - 2], h[kk - 1]
        for j in range(1, kk - 1):
            lam[kk][j], lam[kk - 1][j] = lam[kk - 1][j], lam[kk][j]
        lm = lam[kk][kk - 1]
        b = (d[kk - 2] * d[kk] + lm * lm) // d[kk - 1]
        for i in range(kk + 1, kmax + 1):
            t = lam[i][kk]
            lam[i][kk] = (d[kk] * lam[i][kk - 1] - lm * t) // d[kk - 1]
            lam[i][kk - 1] = (b * t + lm * lam[i][kk]) // d[kk]
        d[kk - 1] = b

    def run(self) -> "_IntegralLLL":
        self._incremental_gs(1)
        kk, kmax = 2, 1
        d, lam = self.d, self.lam
        while kk <= self.k:
            if kk > kmax:
                kmax = kk
                self._incremental_gs(kk)
            self._red(kk, kk - 1)
            lhs = self.q * d[kk] * d[kk - 2]
            rhs = self.p * d[kk - 1] ** 2 - self.q * lam[kk][kk - 1] ** 2
            if lhs < rhs:
                self._swap(kk, kmax)
                kk = max(2, kk - 1)
            else:
                for l in range(kk - 2, 0, -1):
                    self._red(kk, l)
                kk += 1
        return self

    def gs_squared_norms(self) -> list[Fraction]:
        return [Fraction(self.d[i], self.d[i - 1]) for i in range(1, self.k + 1)]

    def mu(self) -> list[list[Fraction]]:
        """mu[i][j] (0-based, j < i) of the reduced basis."""
        return [[Fraction(self.lam[i + 1][j + 1], self.d[j + 1]) for j in range(i)] for i in range(self.k)]


def _check_span_norm(basis: LatticeBasis, norm: QuadraticNorm | None):
    if norm is not None and norm.dim != basis.ambient_dim:
        raise ValueError("norm and basis dimensions differ")


def lll_transform(basis: LatticeBasis, norm: QuadraticNorm | None = None,
                  delta: Fraction = LLL_DELTA) -> tuple[LatticeBasis, list[list[int]]]:
    """LLL-reduce and also return the unimodular matrix ``H`` (reduced = H @ basis)."""
    _check_span_norm(basis, norm)
    g, _ = integer_gram(basis, norm)
    red = _IntegralLLL(g, Fraction(delta)).run()
    return basis.transform(red.h), red.h


def lll_reduce(basis: LatticeBasis, norm: QuadraticNorm | None = None,
               delta: Fraction = LLL_DELTA) -> LatticeBasis:
    """LLL-reduced basis of the same lattice under ``||.||_A``.

    The first vector satisfies ``||b1||_A^2 <= 2^(k-1) lambda_1^2`` for the
    default ``delta = 3/4``; preimages follow the same integer combinations.
    """
    return lll_transform(basis, norm, delta)[0]


# --------------------------------------------------------------------------
# shortest vectors
# --------------------------------------------------------------------------

def _sign_normalize(c: Sequence[int]) -> tuple:
    for x in c:
        if x != 0:
            return tuple(c) if x > 0 else tuple(-y for y in c)
    return tuple(c)


def _quad_form(g: list[list[int]], x: Sequence[int]) -> int:
    return sum(x[i] * sum(g[i][j] * x[j] for j in range(len(x)) if x[j]) for i in range(len(x)) if x[i])


def _enumerate_short(mu: np.ndarray, bsq: np.ndarray, radius_sq: float) -> list[tuple]:
    """All nonzero integer x with sum_i bsq[i] (x_i + sum_{j>i} mu[j,i] x_j)^2 <= radius_sq.

    Depth-first Fincke-Pohst enumeration; mu is lower triangular (mu[j, i], j > i).
    Only one of each pair {x, -x} is reported (last nonzero entry positive).
    """
    k = len(bsq)
    out: list[tuple] = []
    x = [0] * k

    def rec(i: int, partial: float):
        center = -sum(mu[j, i] * x[j] for j in range(i + 1, k))
        rem = radius_sq - partial
        if rem < 0:
            return
        half = math.sqrt(rem / bsq[i])
        lo, hi = math.ceil(center - half - 1e-12), math.floor(center + half + 1e-12)
        top = all(v == 0 for v in x[i + 1:])
        if top:
            lo = max(lo, 0)
        for xi in range(lo, hi + 1):
            x[i] = xi
            p = partial + bsq[i] * (xi - center) ** 2
            if p > radius_sq * (1 + 1e-9) + 1e-300:
                continue
            if i == 0:
                if any(x):
                    out.append(tuple(x))
            else:
                rec(i - 1, p)
        x[i] = 0

    rec(k - 1, 0.0)
    return out


def enumerate_shortest_vector(basis: LatticeBasis, norm: QuadraticNorm | None = None,
                              rank_limit: int = DEFAULT_RANK_LIMIT) -> ShortestVectorResult:
    """Exact shortest nonzero lattice vector by exhaustive enumeration.

    Candidates are enumerated in floating point around an LLL-reduced basis
    with a slightly inflated radius, then compared exactly.  Ties go to the
    lexicographically smallest coefficient vector (input basis coordinates)
    whose first nonzero entry is positive.
    """
    if basis.rank > rank_limit:
        raise RankTooLarge(f"rank {basis.rank} exceeds enumeration limit {rank_limit}")
    _check_span_norm(basis, norm)
    g, scale = integer_gram(basis, norm)
    red = _IntegralLLL(g, LLL_DELTA).run()
    h = red.h
    k = basis.rank
    g_red = [[_dot(h[i], [_dot(g[a], h[j]) for a in range(k)]) for j in range(k)] for i in range(k)]
    bsq_exact = red.gs_squared_norms()
    top = max(bsq_exact)
    bsq = np.array([float(b / top) for b in bsq_exact])
    mu_exact = red.mu()
    mu = np.zeros((k, k))
    for i in range(k):
        for j in range(i):
            mu[i, j] = float(mu_exact[i][j])
    best = min(g_red[i][i] for i in range(k))
    cands = _enumerate_short(mu, bsq, float(Fraction(best) / top))
    best_key = None
    for xr in cands:
        val = _quad_form(g_red, xr)
        c = _sign_normalize([sum(xr[i] * h[i][j] for i in range(k)) for j in range(k)])
        key = (val, c)
        if best_key is None or key < best_key:
            best_key = key
    val, coeffs = best_key
    vec, pre = basis.combine(coeffs)
    sq = Fraction(val, scale)
    return ShortestVectorResult(vec, pre, math.sqrt(sq), 1.0, coeffs, sq)


def approx_shortest_vector(basis: LatticeBasis, norm: QuadraticNorm | None = None,
                           backend: str = "lll", rank_limit: int = DEFAULT_RANK_LIMIT) -> ShortestVectorResult:
    """Short nonzero lattice vector within ``gamma`` of the shortest.

    ``lll``: shortest vector of an LLL-reduced basis, gamma = 2^((k-1)/2).
    ``exact``: exhaustive enumeration, gamma = 1.
    """
    if backend == "exact":
        return enumerate_shortest_vector(basis, norm, rank_limit)
    if backend != "lll":
        raise ValueError(f"unknown SVP backend {backend!r}")
    _check_span_norm(basis, norm)
    g, scale = integer_gram(basis, norm)
    red = _IntegralLLL(g, LLL_DELTA).run()
    h = red.h
    k = basis.rank
    best_i, best_val = None, None
    for i in range(k):
        val = _quad_form(g, h[i])
        if best_val is None or val < best_val:
            best_i, best_val = i, val
    coeffs = tuple(h[best_i])
    vec, pre = basis.combine(coeffs)
    sq = Fraction(best_val, scale)
    return ShortestVectorResult(vec, pre, math.sqrt(sq), 2.0 ** ((k - 1) / 2), coeffs, sq)


# --------------------------------------------------------------------------
# projection, duals, determinants
# --------------------------------------------------------------------------

def coefficients_in_basis(basis: LatticeBasis, vector) -> tuple[Fraction, ...]:
    """Exact coordinates of ``vector`` in the basis (must lie in its span)."""
    v = _frac_vec(vector)
    gram = basis.euclidean_gram()
    rhs = [[_dot(b, v)] for b in basis.vectors]
    sol = [row[0] for row in _solve(gram, rhs)]
    recon, _ = basis.combine(sol) if basis.preimages is None else (
        tuple(sum(c * b[j] for c, b in zip(sol, basis.vectors)) for j in range(basis.ambient_dim)), None)
    if tuple(recon) != v:
        raise ValueError("vector is not in the span of the basis")
    return tuple(sol)


def contains_vector(basis: LatticeBasis, vector) -> bool:
    try:
        return all(c.denominator == 1 for c in coefficients_in_basis(basis, vector))
    except ValueError:
        return False


def unimodular_completion(c: Sequence[int]) -> list[list[int]]:
    """Integer matrix ``U`` with det ±1 whose first column is the primitive vector ``c``."""
    k = len(c)
    w = [int(x) for x in c]
    if not any(w):
        raise ZeroVector("cannot complete the zero vector")
    if _gcd_all(w) != 1:
        raise NotPrimitive(f"coefficients {tuple(c)} have gcd {_gcd_all(w)}")
    u = [[int(i == j) for j in range(k)] for i in range(k)]  # u[row][col]

    def add_col(dst, src, q):  # column dst += q * column src  =>  w[src] -= q * w[dst]
        for r in range(k):
            u[r][dst] += q * u[r][src]
        w[src] -= q * w[dst]

    def swap_col(a, b):
        for r in range(k):
            u[r][a], u[r][b] = u[r][b], u[r][a]
        w[a], w[b] = w[b], w[a]

    while True:
        nz = [i for i in range(k) if w[i] != 0]
        if len(nz) == 1:
            break
        piv = min(nz, key=lambda i: abs(w[i]))
        for i in nz:
            if i != piv:
                q = w[i] // w[piv]
                # w[i] -= q * w[piv]  <=> column piv += q * column i
                add_col(piv, i, q)
    piv = next(i for i in range(k) if w[i] != 0)
    if piv != 0:
        swap_col(0, piv)
    if w[0] == -1:
        for r in range(k):
            u[r][0] = -u[r][0]
        w[0] = 1
    return u


def project_out(basis: LatticeBasis, v: ShortestVectorResult) -> LatticeBasis:
    """Basis of the projection of the lattice onto the orthogonal complement of v.

    ``v`` must be primitive.  The complement is taken within ``span(basis)``;
    preimages of the retained generators carry over unchanged.
    """
    coeffs = v.coefficients or tuple(int(x) for x in coefficients_in_basis(basis, v.vector))
    if not any(coeffs):
        raise ZeroVector("cannot project out the zero vector")
    if basis.rank < 2:
        raise RankDeficient("projecting out the only generator leaves rank 0")
    u = unimodular_completion(coeffs)
    k = basis.rank
    cols = [[u[r][j] for r in range(k)] for j in range(k)]
    new = basis.transform(cols)
    vv = new.vectors[0]
    vsq = _dot(vv, vv)
    vecs = []
    for b in new.vectors[1:]:
        t = _dot(b, vv) / vsq
        vecs.append(tuple(x - t * y for x, y in zip(b, vv)))
    pre = None if new.preimages is None else new.preimages[1:]
    return LatticeBasis(tuple(vecs), pre, basis.ambient_dim)


def dual_basis(basis: LatticeBasis) -> LatticeBasis:
    """Basis ``B (B^T B)^{-1}`` of the dual lattice (columns are basis vectors)."""
    gram = basis.euclidean_gram()
    k = basis.rank
    inv = _solve(gram, [[Fraction(int(i == j)) for j in range(k)] for i in range(k)])
    vecs = tuple(
        tuple(sum(inv[j][i] * basis.vectors[j][t] for j in range(k)) for t in range(basis.ambient_dim))
        for i in range(k)
    )
    return LatticeBasis(vecs, None, basis.ambient_dim)


def lattice_determinant(basis: LatticeBasis) -> float:
    """Volume of the fundamental parallelepiped, ``sqrt(det(B^T B))``."""
    det = gram_determinant(basis)
    if det <= 0:
        raise RankDeficient("basis vectors are dependent")
    return math.sqrt(det)


def log_determinant(basis: LatticeBasis, norm: QuadraticNorm | None = None) -> float:
    """``0.5 * log det(B A B^T)`` without floating overflow."""
    det = gram_determinant(basis, norm)
    if det <= 0:
        raise RankDeficient("Gram matrix is singular")
    return 0.5 * (math.log(det.numerator) - math.log(det.denominator))


def minkowski_bound(basis: LatticeBasis, norm: QuadraticNorm | None = None) -> float:
    """Upper bound ``sqrt(k) det(A|_span)^(1/2k) det(L)^(1/k)`` on lambda_1(L, A).

    ``det(A restricted) * det(L)^2 == det(B A B^T)``, so the bound is
    ``sqrt(k) * det(B A B^T)^(1/(2k))``.
    """
    k = basis.rank
    return math.sqrt(k) * math.exp(log_determinant(basis, norm) / k)


def squared_norm(v, norm: QuadraticNorm | None = None) -> Fraction:
    v = _frac_vec(v)
    return _dot(v, v) if norm is None else norm.squared(v)


def preimage_consistent(basis: LatticeBasis) -> bool:
    """Exact check that each preimage projects onto its basis vector."""
    if basis.preimages is None:
        return False
    for z, b in zip(basis.preimages, basis.vectors):
        diff = [Fraction(zi) - bi for zi, bi in zip(z, b)]
        if any(_dot(diff, other) != 0 for other in basis.vectors):
            return False
    return True


def brute_force_shortest(basis: LatticeBasis, norm: QuadraticNorm | None, bound: int) -> Fraction:
    """Reference lambda_1^2 by scanning all coefficient vectors in [-bound, bound]^k."""
    g, scale = integer_gram(basis, norm)
    best = None
    for c in itertools.product(range(-bound, bound + 1), repeat=basis.rank):
        if any(c):
            val = _quad_form(g, c)
            best = val if best is None or val < best else best
    return Fraction(best, scale)
