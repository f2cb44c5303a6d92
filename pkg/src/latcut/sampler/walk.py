"""Hit-and-run sampling, moment estimation and Monte-Carlo volume."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from ..errors import DegenerateBody, DimensionTooLarge, EmptySlice, InfeasibleStart
from ..lattice import QuadraticNorm
from .polytope import AffineSubspace, Polytope

DEFAULT_EPSILON = 0.01
MAX_CONDITION = 1e12
MIN_WIDTH = 1e-9
INTERIOR_TOL = 1e-12
VOLUME_MAX_DIM = 6


@dataclass(frozen=True)
class SamplerConfig:
    """Walk schedule: ``burn_factor * d`` burn-in steps, ``thin_factor * d`` between samples."""

    burn_factor: int = 100
    thin_factor: int = 10
    chains: int = 1
    backend: str = "auto"

    def burn(self, d: int) -> int:
        return max(1, self.burn_factor * d)

    def thin(self, d: int) -> int:
        return max(1, self.thin_factor * d)


@dataclass(frozen=True)
class MomentEstimate:
    centroid: np.ndarray
    covariance: QuadraticNorm
    sample_count: int
    epsilon: float
    covariance_array: np.ndarray = None
    samples: np.ndarray | None = None  # subspace coordinates

    def __post_init__(self):
        if self.covariance_array is None:
            object.__setattr__(self, "covariance_array", self.covariance.as_array())


def default_sample_count(d: int, epsilon: float) -> int:
    return max(2000, math.ceil(40 * max(d, 1) / epsilon))


def _kernel(backend: str):
    from . import KERNEL, _walk_py
    if backend == "python":
        return _walk_py.hit_and_run
    if backend == "compiled":
        from . import _walk  # noqa: F401  raises ImportError when not built
        return _walk.hit_and_run
    return KERNEL


def chebyshev_center(K: Polytope) -> tuple[np.ndarray, float]:
    """Center and radius of the largest ball inside K, in subspace coordinates."""
    a, b = K.local()
    d = a.shape[1]
    if d == 0:
        return np.zeros(0), float(np.min(b)) if b.size else math.inf
    norms = np.linalg.norm(a, axis=1)
    cost = np.zeros(d + 1)
    cost[-1] = -1.0
    a_ub = np.hstack([a, norms[:, None]])
    bounds = [(None, None)] * d + [(0, None)]
    res = linprog(cost, A_ub=a_ub, b_ub=b, bounds=bounds, method="highs")
    if res.status == 3:
        raise DegenerateBody("polytope is unbounded")
    if res.status != 0:
        raise EmptySlice(f"Chebyshev LP failed: {res.message}")
    return res.x[:d], float(res.x[d])


def affine_hull(K: Polytope, tol: float = 1e-9) -> AffineSubspace:
    """Affine hull of K, found by detecting implicit equalities with LPs.

    Rows that can be strictly slack are peeled off in rounds; the rest hold
    with equality on all of K and cut out the hull inside the subspace.
    """
    a, b = K.local()
    m, d = a.shape
    tight = np.ones(m, dtype=bool)
    point = None
    while tight.any():
        idx = np.flatnonzero(tight)
        # variables (y, s_idx): maximize sum s with s_i <= b_i - a_i y, 0 <= s <= 1
        cost = np.concatenate([np.zeros(d), -np.ones(idx.size)])
        rows = np.zeros((m, d + idx.size))
        rows[:, :d] = a
        rows[idx, d + np.arange(idx.size)] = 1.0
        res = linprog(cost, A_ub=rows, b_ub=b, bounds=[(None, None)] * d + [(0, 1)] * idx.size, method="highs")
        if res.status != 0:
            raise EmptySlice(f"polytope is empty: {res.message}")
        point = res.x[:d]
        loose = res.x[d:] > tol * (1 + np.abs(b[idx]))
        if not loose.any():
            break
        tight[idx[loose]] = False
    if point is None:
        point = chebyshev_center(K)[0]
    eq = a[tight]
    if eq.shape[0] == 0:
        basis = np.eye(d)
    else:
        _, sv, vt = np.linalg.svd(eq)
        rank = int(np.count_nonzero(sv > 1e-9 * max(sv[0], 1.0)))
        basis = vt[rank:].T
    sub = K.subspace
    return AffineSubspace(sub.to_ambient(point), basis.T @ sub.directions)


def interior_start(K: Polytope, warm_start=None) -> np.ndarray:
    """Strictly interior point in subspace coordinates.

    A warm start is repaired by up to ``10 d`` reflection steps off the most
    violated constraint before falling back to the Chebyshev center.
    """
    a, b = K.local()
    d = a.shape[1]
    if warm_start is not None:
        y = K.subspace.to_local(warm_start)
        norms2 = np.einsum("ij,ij->i", a, a)
        for _ in range(10 * max(d, 1) + 1):
            slack = b - a @ y
            if np.all(slack > INTERIOR_TOL):
                return y
            i = int(np.argmin(slack / np.sqrt(np.maximum(norms2, 1e-300))))
            if norms2[i] <= 1e-24:
                break
            y = y + (slack[i] - 1e-6 * (1 + abs(b[i]))) / norms2[i] * a[i]
    center, radius = chebyshev_center(K)
    if radius <= INTERIOR_TOL:
        raise InfeasibleStart(f"no interior point (Chebyshev radius {radius:.3g})")
    return center


def _walk(K: Polytope, count: int, y0: np.ndarray, seed: int, frame, config: SamplerConfig) -> np.ndarray:
    a, b = K.local()
    d = a.shape[1]
    t = np.eye(d) if frame is None else np.ascontiguousarray(frame, dtype=float)
    burn, thin = config.burn(d), config.thin(d)
    kernel = _kernel(config.backend)
    chains = max(1, config.chains)
    per_chain = [count // chains + (1 if c < count % chains else 0) for c in range(chains)]
    out = []
    for c, k in enumerate(per_chain):
        if k == 0:
            continue
        rng = np.random.default_rng(np.random.SeedSequence([int(seed) & (2**63 - 1), c]))
        steps = burn + thin * k
        gauss = rng.standard_normal((steps, d))
        unif = rng.random(steps)
        buf = np.empty((k, d))
        unbounded = kernel(a, b, t, np.ascontiguousarray(y0, dtype=float), gauss, unif, burn, thin, buf)
        if unbounded:
            raise DegenerateBody("polytope is unbounded along a sampled direction")
        out.append(buf)
    return np.vstack(out)


def sample_local(K: Polytope, count: int, warm_start=None, seed: int = 0, frame=None,
                 config: SamplerConfig | None = None) -> np.ndarray:
    """``count`` hit-and-run samples as subspace coordinates, shape ``(count, d)``."""
    if count < 1:
        raise ValueError("count must be positive")
    config = config or SamplerConfig()
    if K.dim == 0:
        return np.zeros((count, 0))
    y0 = interior_start(K, warm_start)
    return _walk(K, count, y0, seed, frame, config)


def sample(K: Polytope, count: int, warm_start=None, seed: int = 0, frame=None,
           config: SamplerConfig | None = None) -> np.ndarray:
    """``count`` approximately uniform points of K in ambient coordinates."""
    return K.subspace.to_ambient(sample_local(K, count, warm_start, seed, frame, config))


def estimate_moments(K: Polytope, epsilon: float = DEFAULT_EPSILON, warm_start=None, seed: int = 0,
                     *, sample_count: int | None = None, frame=None,
                     config: SamplerConfig | None = None) -> MomentEstimate:
    """Sample mean and covariance (subspace coordinates) of K."""
    if not 0 < epsilon <= 0.1:
        raise ValueError("epsilon must lie in (0, 0.1]")
    d = K.dim
    count = sample_count or default_sample_count(d, epsilon)
    if d == 0:
        return MomentEstimate(K.subspace.base_point.copy(), QuadraticNorm(()), count, epsilon, np.zeros((0, 0)))
    ys = sample_local(K, count, warm_start, seed, frame, config)
    mean = ys.mean(axis=0)
    cov = np.atleast_2d(np.cov(ys, rowvar=False))
    eig = np.linalg.eigvalsh(cov)
    if eig[0] <= 0 or math.sqrt(max(eig[0], 0.0)) < MIN_WIDTH or eig[-1] / eig[0] > MAX_CONDITION:
        raise DegenerateBody(f"sample covariance is degenerate (eigenvalues {eig[0]:.3g}..{eig[-1]:.3g})")
    centroid = K.subspace.to_ambient(mean)
    a, b = K.local()
    if np.any(a @ mean >= b):
        # the mean of a convex body is interior; fall back to the sample nearest it
        mean = ys[np.argmin(np.linalg.norm(ys - mean, axis=1))]
        centroid = K.subspace.to_ambient(mean)
    return MomentEstimate(centroid, QuadraticNorm.from_array(cov), count, epsilon, cov, ys)


def bounding_box(K: Polytope, frame: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Per-axis extent of K in coordinates ``z`` with ``y = frame @ z``."""
    a, b = K.local()
    d = a.shape[1]
    f = np.eye(d) if frame is None else frame
    af = a @ f
    lo, hi = np.empty(d), np.empty(d)
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        for sign, store in ((1.0, lo), (-1.0, hi)):
            res = linprog(sign * e, A_ub=af, b_ub=b, bounds=[(None, None)] * d, method="highs")
            if res.status != 0:
                raise DegenerateBody(f"bounding-box LP failed: {res.message}")
            store[i] = res.x[i]
    return lo, hi


def estimate_volume(K: Polytope, seed: int = 0, samples: int = 200_000) -> float:
    """d-dimensional volume of K by rejection sampling in a fitted box."""
    d = K.dim
    if d > VOLUME_MAX_DIM:
        raise DimensionTooLarge(f"volume estimation supports dim <= {VOLUME_MAX_DIM}, got {d}")
    a, b = K.local()
    if d == 0:
        return 1.0 if np.all(b >= -1e-9) else 0.0
    if d == 1:
        lo, hi = bounding_box(K)
        return float(max(hi[0] - lo[0], 0.0))
    # orient the box along the principal axes of a cheap sample
    try:
        ys = sample_local(K, 400, seed=seed, config=SamplerConfig(burn_factor=50, thin_factor=5))
        _, vecs = np.linalg.eigh(np.cov(ys, rowvar=False))
    except (DegenerateBody, InfeasibleStart, EmptySlice):
        vecs = np.eye(d)
    lo, hi = bounding_box(K, vecs)
    width = np.maximum(hi - lo, 0.0)
    box_vol = float(np.prod(width))
    if box_vol == 0.0:
        return 0.0
    rng = np.random.default_rng(np.random.SeedSequence([int(seed) & (2**63 - 1), 7919]))
    af = a @ vecs
    hits = 0
    chunk = 50_000
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        z = lo + rng.random((k, d)) * width
        hits += int(np.count_nonzero(np.all(z @ af.T <= b, axis=1)))
        done += k
    return box_vol * hits / samples
