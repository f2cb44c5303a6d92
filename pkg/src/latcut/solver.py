"""Cutting-plane minimization over the integers with lattice dimension reduction.

The state is ``(W, K, L, x_K, Sigma_K)``: an affine subspace ``W`` holding every
integral candidate, a polytope ``K`` inside it, the lattice
``L = projection of Z^n onto W0`` with integral preimages, and estimates of
the centroid and covariance of ``K``.  Each iteration asks for a short vector
of ``L`` in the ``Sigma_K`` norm.  A long vector means ``K`` is still wide in
every lattice direction, so the oracle is queried at the centroid.  A short
vector certifies that all integral points of ``K`` lie on one hyperplane,
which becomes the new ``W``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import (
    DegenerateBody,
    EmptySlice,
    HalfIntegerAmbiguity,
    InfeasibleRegion,
    InfeasibleStart,
    NoIntegralPoint,
    OracleBudgetExceeded,
    OracleContractViolation,
)
from .lattice import (
    LatticeBasis,
    QuadraticNorm,
    ShortestVectorResult,
    _gcd_all,
    approx_shortest_vector,
    coefficients_in_basis,
    lll_reduce,
    log_determinant,
    project_out,
)
from .sampler import (
    AffineSubspace,
    Polytope,
    SamplerConfig,
    affine_hull,
    estimate_moments,
    estimate_volume,
    interior_start,
)

YES, CUT = "YES", "CUT"
HALF_INTEGER_TOL = 1e-9
FLAT_CUT_TOL = 1e-12
SEGMENT_TOL = 1e-7
CONTRACT_TOL = 1e-9
MOMENT_RETRIES = 3
FLAT_RETRIES = 8


@dataclass(frozen=True)
class SeparationResponse:
    """Oracle answer at ``query_point``: YES, or CUT with every minimizer in ``{c^T y >= c^T x}``."""

    tag: str
    normal: np.ndarray | None
    query_point: np.ndarray

    def __post_init__(self):
        if self.tag not in (YES, CUT):
            raise ValueError(f"unknown tag {self.tag!r}")
        if self.tag == CUT:
            c = np.asarray(self.normal, dtype=float)
            if not np.any(c):
                raise ValueError("CUT requires a nonzero normal")
            object.__setattr__(self, "normal", c)
        object.__setattr__(self, "query_point", np.asarray(self.query_point, dtype=float))

    @classmethod
    def yes(cls, x) -> "SeparationResponse":
        return cls(YES, None, x)

    @classmethod
    def cut(cls, c, x) -> "SeparationResponse":
        return cls(CUT, c, x)

    @property
    def is_yes(self) -> bool:
        return self.tag == YES


Oracle = Callable[[np.ndarray], SeparationResponse]


@dataclass(frozen=True)
class SolverConfig:
    radius: int = 1
    svp_backend: str = "lll"
    seed: int = 0
    max_oracle_calls: int | None = None
    perturb: bool = True
    threshold_dim: str = "current"  # or "ambient"
    sample_factor: int = 40
    min_samples: int = 200
    sampler: SamplerConfig = SamplerConfig(burn_factor=20, thin_factor=4)
    rank_limit: int | None = None
    diagnostics: bool = False
    prune_factor: float = 3.0

    def __post_init__(self):
        if self.radius < 1:
            raise ValueError("radius must be >= 1")
        if self.svp_backend not in ("lll", "exact"):
            raise ValueError(f"unknown SVP backend {self.svp_backend!r}")
        if self.max_oracle_calls is not None and self.max_oracle_calls < 1:
            raise ValueError("max_oracle_calls must be >= 1")
        if self.threshold_dim not in ("current", "ambient"):
            raise ValueError("threshold_dim must be 'current' or 'ambient'")

    def budget(self, n: int) -> int:
        if self.max_oracle_calls is not None:
            return self.max_oracle_calls
        return default_budget(n, self.radius)

    def samples(self, d: int) -> int:
        return max(self.min_samples, self.sample_factor * d)


def default_budget(n: int, radius: int) -> int:
    return math.ceil(100 * n * (n + math.log2(radius) + 4))


# --------------------------------------------------------------------------
# oracle wrappers
# --------------------------------------------------------------------------

class CountingOracle:
    """Counts calls to the original oracle, enforces the budget and checks the contract."""

    def __init__(self, oracle: Oracle, budget: int):
        self.oracle = oracle
        self.budget = budget
        self.calls = 0
        self.yes_points: list[np.ndarray] = []

    def __call__(self, x) -> SeparationResponse:
        if self.calls >= self.budget:
            raise OracleBudgetExceeded(f"oracle budget of {self.budget} calls exhausted")
        self.calls += 1
        x = np.asarray(x, dtype=float)
        r = self.oracle(x)
        if r.is_yes:
            self.yes_points.append(x.copy())
        else:
            c = r.normal
            scale = CONTRACT_TOL * (1 + np.abs(c) @ np.abs(x))
            for y in self.yes_points:
                if c @ y < c @ x - scale:
                    raise OracleContractViolation(
                        f"cut at {x.tolist()} excludes certified point {y.tolist()}")
        return r


class PerturbedOracle:
    """Turns inner YES answers into cuts along a fixed random integer vector.

    Among the minimizers the one maximizing ``c^T y`` is unique for generic
    ``c``, so the wrapped problem has a single target.  Every inner YES point
    is recorded; ``best_integral`` is the integral one with the largest
    ``c^T y``.
    """

    def __init__(self, inner: CountingOracle, c: np.ndarray):
        self.inner = inner
        self.c = np.asarray(c, dtype=float)
        self.yes_points: list[np.ndarray] = []
        self.last_inner_yes = False

    def __call__(self, x) -> SeparationResponse:
        r = self.inner(x)
        self.last_inner_yes = r.is_yes
        if r.is_yes:
            self.yes_points.append(np.asarray(x, dtype=float).copy())
            return SeparationResponse.cut(self.c, x)
        return r

    def best_integral(self):
        best = None
        for y in self.yes_points:
            if np.all(y == np.round(y)):
                if best is None or self.c @ y > self.c @ best:
                    best = y
        return None if best is None else tuple(int(v) for v in np.round(best))


def perturbation_vector(n: int, radius: int, rng: np.random.Generator) -> np.ndarray:
    m = (2 * n * radius + 1) ** 2
    while True:
        c = rng.integers(-m, m + 1, size=n)
        if c.any():  # a zero vector is not a valid cut normal
            return c.astype(float)


def perturb_oracle(oracle: Oracle, config: SolverConfig, rng=None, n: int | None = None,
                   c=None) -> PerturbedOracle:
    """Wrap ``oracle`` so inner YES answers become cuts with a random integral normal.

    ``c`` is drawn once with entries uniform in ``{-M..M}``, ``M = (2 n R + 1)^2``.
    """
    if c is None:
        if n is None:
            raise ValueError("need n or c")
        rng = rng if rng is not None else np.random.default_rng(config.seed)
        c = perturbation_vector(n, config.radius, rng)
    inner = oracle if isinstance(oracle, CountingOracle) else CountingOracle(oracle, 10**18)
    return PerturbedOracle(inner, np.asarray(c, dtype=float))


# --------------------------------------------------------------------------
# state
# --------------------------------------------------------------------------

@dataclass
class SolverState:
    subspace: AffineSubspace
    polytope: Polytope
    lattice: LatticeBasis
    centroid: np.ndarray
    covariance: np.ndarray  # in subspace coordinates
    rng: np.random.Generator
    oracle_calls: int = 0
    reductions: int = 0
    iterations: int = 0
    samples: np.ndarray | None = None  # last walk, ambient coordinates
    flat: bool = False  # K has no interior in W; moments live on its affine hull
    trace: list = field(default_factory=list)
    result: tuple | None = None

    @property
    def dim(self) -> int:
        return self.subspace.dim

    @property
    def ambient_dim(self) -> int:
        return self.subspace.ambient_dim

    def sigma_array(self) -> np.ndarray:
        """Sigma_K in ambient coordinates, regularized on its range."""
        d = self.dim
        dirs = self.subspace.directions
        s = dirs.T @ self.covariance @ dirs
        if d:
            reg = 1e-12 * np.trace(self.covariance) / d
            s = s + max(reg, 1e-30) * np.eye(self.ambient_dim)
        return 0.5 * (s + s.T)

    def sigma(self) -> QuadraticNorm:
        return QuadraticNorm.from_array(self.sigma_array())


@dataclass
class SolverReport:
    minimizer: tuple
    oracle_calls: int
    dimension_reductions: int
    iterations: int
    potential_trace: list | None = None
    trace: list = field(default_factory=list)
    perturbation: tuple | None = None


def initial_state(n: int, config: SolverConfig) -> SolverState:
    R = config.radius
    return SolverState(
        subspace=AffineSubspace.full(n),
        polytope=Polytope.box(n, R),
        lattice=LatticeBasis.standard(n),
        centroid=np.zeros(n),
        covariance=(R * R / 3.0) * np.eye(n),
        rng=np.random.default_rng(np.random.SeedSequence([int(config.seed) & (2**63 - 1), 1])),
    )


def threshold(state: SolverState, config: SolverConfig) -> float:
    d = state.dim if config.threshold_dim == "current" else state.ambient_dim
    return 1.0 / (10 * d)


def _log(state: SolverState, kind: str, **extra):
    event = {
        "kind": kind,
        "iteration": state.iterations,
        "dim": state.dim,
        "oracle_calls": state.oracle_calls,
        "constraints": state.polytope.num_constraints,
    }
    if state.dim:
        event["log_det"] = log_determinant(state.lattice)
    event.update(extra)
    state.trace.append(event)
    return event


# --------------------------------------------------------------------------
# moments
# --------------------------------------------------------------------------

def _frame(cov: np.ndarray) -> np.ndarray | None:
    try:
        return np.linalg.cholesky(0.5 * (cov + cov.T))
    except np.linalg.LinAlgError:
        return None


def refresh_moments(state: SolverState, config: SolverConfig, warm_start=None) -> SolverState:
    """Re-estimate centroid and covariance of ``state.polytope``.

    When K has no interior in W (it lies in a face), the walk runs inside the
    affine hull of K and the covariance is left singular across the hull.
    """
    K = state.polytope
    d = K.dim
    if d == 0:
        return replace(state, centroid=K.subspace.base_point.copy(), covariance=np.zeros((0, 0)),
                       samples=None, flat=False)
    if warm_start is None:
        warm_start = state.centroid
    body, flat = K, False
    try:
        interior_start(K, warm_start)
    except InfeasibleStart:
        hull = affine_hull(K)
        body, flat = K.restrict(hull), True
        if hull.dim == 0:
            x = hull.base_point.copy()
            return replace(state, centroid=x, covariance=np.zeros((d, d)), samples=x[None, :], flat=True)
    frame = None
    if not flat and state.covariance.shape == (d, d) and not state.flat:
        frame = _frame(state.covariance)
    last = None
    for _ in range(MOMENT_RETRIES):
        seed = int(state.rng.integers(2**62))
        try:
            est = estimate_moments(body, 0.01, warm_start, seed, sample_count=config.samples(body.dim),
                                   frame=frame, config=config.sampler)
        except DegenerateBody as exc:
            # a poor frame can stall the walk; retry in plain coordinates
            last, frame = exc, None
            continue
        except InfeasibleStart as exc:
            raise EmptySlice(f"no relative interior: {exc}") from exc
        # covariance in the coordinates of W
        e = K.subspace.directions @ body.subspace.directions.T
        cov = e @ est.covariance_array @ e.T
        samples = body.subspace.to_ambient(est.samples)
        return replace(state, centroid=est.centroid, covariance=cov, samples=samples, flat=flat)
    raise last


def _warm_start_after_cut(state: SolverState, K: Polytope):
    """Mean of the previous samples that survive the new constraints."""
    if state.samples is None or not len(state.samples):
        return None
    ok = np.all(state.samples @ K.normals.T < K.offsets, axis=1)
    if np.count_nonzero(ok) < 2:
        return None
    return state.samples[ok].mean(axis=0)


# --------------------------------------------------------------------------
# steps
# --------------------------------------------------------------------------

def _prune(state: SolverState, config: SolverConfig) -> Polytope:
    """Drop cuts far outside the current body; enlarging K loses no minimizer."""
    K = state.polytope
    if config.prune_factor <= 0 or K.num_constraints <= K.protected or state.flat:
        return K
    d = state.dim
    sig = state.sigma_array()
    slack = K.offsets - K.normals @ state.centroid
    width = np.sqrt(np.maximum(np.einsum("ij,jk,ik->i", K.normals, sig, K.normals), 0.0))
    far = slack > config.prune_factor * (d + 1) * width
    far[: K.protected] = False
    if not far.any():
        return K
    return K.keep_rows(~far)


def _query_points(state: SolverState):
    """The centroid, then interior sample points as fallbacks."""
    yield state.centroid.copy()
    if state.samples is not None and len(state.samples):
        order = state.rng.permutation(len(state.samples))[:FLAT_RETRIES]
        for i in order:
            yield state.samples[i].copy()


def cutting_plane_step(state: SolverState, oracle, config: SolverConfig) -> SolverState:
    """Query the oracle at the centroid and intersect K with the returned halfspace.

    A cut whose normal is orthogonal to W says nothing about points of W; the
    query is then repeated at interior sample points.
    """
    for x in _query_points(state):
        r = oracle(x)
        state.oracle_calls = _calls(oracle)
        if r.is_yes:
            z = np.round(x)
            if not np.array_equal(z, x):
                rz = oracle(z)
                state.oracle_calls = _calls(oracle)
                if not rz.is_yes:
                    raise _NeedPerturbation(x)
            state.result = tuple(int(v) for v in z)
            _log(state, "yes", point=list(state.result))
            return state
        c = r.normal
        c_loc = state.subspace.directions @ c
        if np.linalg.norm(c_loc) > FLAT_CUT_TOL * np.linalg.norm(c):
            return _apply_cut(state, c, x, config)
        _log(state, "flat_cut")
    raise InfeasibleRegion("every cut at the sampled query points is orthogonal to W")


def _apply_cut(state: SolverState, c, x, config: SolverConfig) -> SolverState:
    K = state.polytope.add_halfspace(c, float(np.dot(c, x)))
    state = replace(state, polytope=K)
    K = _prune(state, config)
    warm = _warm_start_after_cut(state, K)
    state = replace(state, polytope=K)
    state = refresh_moments(state, config, warm)
    state.iterations += 1
    event = _log(state, "cut")
    if config.diagnostics and state.dim <= 6:
        event["potential"] = potential_diagnostic(state)
    return state


@dataclass(frozen=True)
class Hyperplane:
    normal: tuple
    offset: Fraction
    rounded: int


def round_hyperplane(v: ShortestVectorResult, x_K, subspace: AffineSubspace) -> Hyperplane:
    """Hyperplane ``v^T y = (v - z)^T x_K + [z^T x_K]`` holding the integral points near x_K.

    ``z^T x_K`` is evaluated as ``z^T x0 + v^T (x_K - x0)`` with the exact base
    point ``x0``: the difference lies in ``W0`` where ``z`` and ``v`` agree, and
    the float part is lifted to rationals so large ``z`` cannot erode the
    rounding margin.
    """
    if v.preimage is None:
        raise ValueError("shortest vector carries no integral preimage")
    x0 = subspace.exact_base
    if x0 is None:
        x0 = tuple(Fraction(float(t)) for t in subspace.base_point)
    z = v.preimage
    vv = v.vector
    delta = subspace.directions.T @ subspace.to_local(x_K)
    zx0 = sum(Fraction(zi) * xi for zi, xi in zip(z, x0))
    vdelta = sum(vi * Fraction(float(di)) for vi, di in zip(vv, delta))
    zx = zx0 + vdelta
    frac = zx - math.floor(zx)
    if abs(frac - Fraction(1, 2)) < HALF_INTEGER_TOL:
        raise HalfIntegerAmbiguity(f"z^T x_K = {float(zx):.12g} is within {HALF_INTEGER_TOL} of a half-integer")
    k = math.floor(zx + Fraction(1, 2))
    offset = sum((vi - zi) * xi for vi, zi, xi in zip(vv, z, x0)) + k
    return Hyperplane(tuple(vv), offset, k)


def _orthonormal_rows(vectors) -> np.ndarray:
    m = np.array([[float(t) for t in v] for v in vectors])
    if m.size == 0:
        return m.reshape(0, m.shape[1] if m.ndim == 2 else 0)
    q, _ = np.linalg.qr(m.T)
    return q.T.copy()


def _primitive(v: ShortestVectorResult, basis: LatticeBasis) -> ShortestVectorResult:
    coeffs = v.coefficients or tuple(int(c) for c in coefficients_in_basis(basis, v.vector))
    g = _gcd_all(coeffs)
    if g <= 1:
        return replace(v, coefficients=tuple(coeffs))
    coeffs = tuple(c // g for c in coeffs)
    vec, pre = basis.combine(coeffs)
    return ShortestVectorResult(vec, pre, v.norm_value / g, v.gamma, coeffs, v.norm_squared / (g * g))


def reduce_dimension(state: SolverState, v: ShortestVectorResult, config: SolverConfig) -> SolverState:
    """Restrict to the hyperplane through the integral points of K and project the lattice."""
    v = _primitive(v, state.lattice)
    plane = round_hyperplane(v, state.centroid, state.subspace)
    vv = plane.normal
    x0 = state.subspace.exact_base
    vsq = sum(t * t for t in vv)
    shift = (plane.offset - sum(a * b for a, b in zip(vv, x0))) / vsq
    new_base = tuple(xi + shift * vi for xi, vi in zip(x0, vv))
    lattice = project_out(state.lattice, v)
    dirs = _orthonormal_rows(lattice.vectors)
    sub = AffineSubspace.from_exact(new_base, dirs)
    K = state.polytope.restrict(sub)
    old_dirs = state.subspace.directions
    cov = dirs @ (old_dirs.T @ state.covariance @ old_dirs) @ dirs.T
    state = replace(state, subspace=sub, polytope=K, lattice=lattice, covariance=cov, samples=None)
    state.reductions += 1
    warm = sub.project(state.centroid)
    state = refresh_moments(state, config, warm)
    state.iterations += 1
    event = _log(state, "reduce", v_norm=v.norm_value, rounded=plane.rounded)
    if config.diagnostics and state.dim <= 6:
        event["potential"] = potential_diagnostic(state)
    return state


def potential_diagnostic(state: SolverState, seed: int = 0) -> float:
    """``log vol(K) + log det(L)``."""
    vol = estimate_volume(state.polytope, seed=seed)
    log_vol = math.log(vol) if vol > 0 else -math.inf
    return log_vol + (log_determinant(state.lattice) if state.dim else 0.0)


# --------------------------------------------------------------------------
# endgame
# --------------------------------------------------------------------------

def _line_parametrization(state: SolverState):
    """Integral points of W as ``x_a + k p``; returns (x_a, p) or None if W has none."""
    b = state.lattice.vectors[0]
    den = math.lcm(*(t.denominator for t in b))
    p = [int(t * den) for t in b]
    g = _gcd_all(p)
    p = [t // g for t in p]
    # w with w^T p = 1 via extended gcd
    w = [0] * len(p)
    acc, idx = 0, []
    for i, t in enumerate(p):
        if t:
            idx.append(i)
    acc = p[idx[0]]
    w[idx[0]] = 1
    for i in idx[1:]:
        g2, s, t = _ext_gcd(acc, p[i])
        w = [s * wi for wi in w]
        w[i] = t
        acc = g2
    if acc < 0:
        w = [-wi for wi in w]
    x0 = state.subspace.exact_base
    s0 = sum(wi * xi for wi, xi in zip(w, x0))
    xa = [xi - s0 * pi for xi, pi in zip(x0, p)]
    if any(t.denominator != 1 for t in xa):
        return None
    return [int(t) for t in xa], p


def _ext_gcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def finalize_1d(state: SolverState, oracle) -> tuple:
    """Search the integral points of the final segment with the oracle.

    Each cut orients the search along the segment; a cut orthogonal to the
    segment carries no information and switches to a linear scan.
    """
    if state.dim > 1:
        raise ValueError("finalize_1d needs dim(W) <= 1")
    perturbed = isinstance(oracle, PerturbedOracle)
    visited = []

    def query(pt):
        r = oracle(np.asarray(pt, dtype=float))
        state.oracle_calls = _calls(oracle)
        visited.append(tuple(pt))
        inner_yes = r.is_yes or (perturbed and oracle.last_inner_yes)
        return r, inner_yes

    if state.dim == 0:
        x0 = state.subspace.exact_base
        if any(t.denominator != 1 for t in x0):
            raise NoIntegralPoint("final point is not integral")
        pt = tuple(int(t) for t in x0)
        _, ok = query(pt)
        if ok:
            return pt
        raise NoIntegralPoint("final candidate rejected by the oracle", visited)

    line = _line_parametrization(state)
    if line is None:
        raise NoIntegralPoint("the final line holds no integral point")
    xa, p = line
    K = state.polytope
    xa_f, p_f = np.array(xa, dtype=float), np.array(p, dtype=float)
    ap = K.normals @ p_f
    room = K.offsets - K.normals @ xa_f + SEGMENT_TOL * (1 + np.abs(K.offsets))
    lo, hi = -math.inf, math.inf
    for a_i, r_i in zip(ap, room):
        if a_i > 1e-15:
            hi = min(hi, math.floor(r_i / a_i))
        elif a_i < -1e-15:
            lo = max(lo, math.ceil(r_i / a_i))
        elif r_i < 0:
            raise NoIntegralPoint("the final segment is empty")
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise NoIntegralPoint("the final segment is unbounded")
    _log(state, "segment", lo=lo, hi=hi)

    def point(k):
        return tuple(a + k * b for a, b in zip(xa, p))

    found = []
    scan = False
    while lo <= hi:
        m = (lo + hi) // 2
        pt = point(m)
        r, ok = query(pt)
        if ok:
            if not perturbed:
                return pt
            found.append(pt)
        s = float(r.normal @ p_f) if not r.is_yes else 0.0
        if s > 0:
            lo = m + 1
        elif s < 0:
            hi = m - 1
        else:
            scan = True
            break
    if scan:
        for k in range(lo, hi + 1):
            pt = point(k)
            if pt in visited:
                continue
            _, ok = query(pt)
            if ok:
                if not perturbed:
                    return pt
                found.append(pt)
    if perturbed:
        earlier = oracle.best_integral()
        if earlier is not None:
            found.append(earlier)
    if found:
        return max(found, key=lambda y: float(oracle.c @ np.array(y, dtype=float)))
    raise NoIntegralPoint("no certified integral point on the final segment", visited)


# --------------------------------------------------------------------------
# driver
# --------------------------------------------------------------------------

class _NeedPerturbation(Exception):
    def __init__(self, x):
        self.x = x


def _calls(oracle) -> int:
    if isinstance(oracle, PerturbedOracle):
        return oracle.inner.calls
    return oracle.calls


def shortest_vector(state: SolverState, config: SolverConfig) -> tuple[SolverState, ShortestVectorResult]:
    norm = state.sigma()
    reduced = lll_reduce(state.lattice, norm)
    limit = config.rank_limit or max(8, state.ambient_dim)
    v = approx_shortest_vector(reduced, norm, config.svp_backend, rank_limit=limit)
    return replace(state, lattice=reduced), v


def minimize(oracle: Oracle, n: int, config: SolverConfig | None = None, observer=None) -> SolverReport:
    """Integral minimizer of a convex function given its separation oracle.

    ``observer(kind, before, after)`` is called after every cut and every
    dimension reduction with the states on either side.
    """
    config = config or SolverConfig()
    counting = CountingOracle(oracle, config.budget(n))
    state = initial_state(n, config)
    c_pert = perturbation_vector(n, config.radius, state.rng)
    active = PerturbedOracle(counting, c_pert) if config.perturb else counting
    _log(state, "init")
    if config.diagnostics and n <= 6:
        state.trace[-1]["potential"] = potential_diagnostic(state)

    def enable_perturbation():
        nonlocal active
        if not isinstance(active, PerturbedOracle):
            active = PerturbedOracle(counting, c_pert)
            _log(state, "perturb_on")

    while state.dim > 1 and state.result is None:
        state, v = shortest_vector(state, config)
        thr = threshold(state, config)
        before = state
        if v.norm_value >= thr:
            try:
                state = cutting_plane_step(state, active, config)
            except _NeedPerturbation as need:
                enable_perturbation()
                state = _apply_cut(state, active.c, need.x, config)
            if state.trace[-1]["kind"] == "cut":
                state.trace[-1].update(v_norm=v.norm_value, threshold=thr)
                if observer is not None:
                    observer("cut", before, state)
        else:
            for attempt in range(MOMENT_RETRIES + 1):
                try:
                    state = reduce_dimension(state, v, config)
                    break
                except HalfIntegerAmbiguity:
                    if attempt == MOMENT_RETRIES:
                        raise
                    state = refresh_moments(state, config)
                    state, v = shortest_vector(state, config)
                    if v.norm_value >= threshold(state, config):
                        break
            if state.trace[-1]["kind"] == "reduce":
                state.trace[-1]["threshold"] = thr
                if observer is not None:
                    observer("reduce", before, state)
    if state.result is None:
        state.result = finalize_1d(state, active)
    result = state.result
    if not counting(np.array(result, dtype=float)).is_yes:
        raise NoIntegralPoint("final verification failed", [result])
    state.oracle_calls = counting.calls
    _log(state, "final", point=list(result))
    potentials = [e["potential"] for e in state.trace if "potential" in e] if config.diagnostics else None
    return SolverReport(
        minimizer=result,
        oracle_calls=counting.calls,
        dimension_reductions=state.reductions,
        iterations=state.iterations,
        potential_trace=potentials,
        trace=state.trace,
        perturbation=tuple(int(t) for t in c_pert) if isinstance(active, PerturbedOracle) else None,
    )
