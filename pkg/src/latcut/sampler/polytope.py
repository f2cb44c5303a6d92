"""Halfspace polytopes restricted to affine subspaces."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from ..errors import EmptySlice, ZeroNormal

SUBSPACE_TOL = 1e-8
CONSTRAINT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """``W = x0 + span(directions)``.

    ``directions`` is a ``(d, n)`` array with orthonormal rows.  When the base
    point is known exactly, ``exact_base`` holds it as Fractions and
    ``base_point`` is its float rounding.
    """

    base_point: np.ndarray
    directions: np.ndarray
    exact_base: tuple | None = None

    def __post_init__(self):
        x0 = np.asarray(self.base_point, dtype=float).reshape(-1)
        n = x0.shape[0]
        dirs = np.asarray(self.directions, dtype=float).reshape(-1, n)
        if dirs.shape[0] > n:
            raise ValueError("more directions than ambient dimensions")
        if dirs.shape[0] and not np.allclose(dirs @ dirs.T, np.eye(dirs.shape[0]), atol=1e-10):
            raise ValueError("directions must be orthonormal")
        object.__setattr__(self, "base_point", x0)
        object.__setattr__(self, "directions", dirs)

    @classmethod
    def full(cls, n: int) -> "AffineSubspace":
        return cls(np.zeros(n), np.eye(n), tuple(Fraction(0) for _ in range(n)))

    @classmethod
    def from_exact(cls, base, directions) -> "AffineSubspace":
        base = tuple(Fraction(x) for x in base)
        return cls(np.array([float(x) for x in base]), directions, base)

    @property
    def dim(self) -> int:
        return self.directions.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.base_point.shape[0]

    def to_local(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.base_point) @ self.directions.T

    def to_ambient(self, y) -> np.ndarray:
        return self.base_point + np.asarray(y, dtype=float) @ self.directions

    def distance(self, x) -> float:
        diff = np.asarray(x, dtype=float) - self.base_point
        resid = diff - (diff @ self.directions.T) @ self.directions
        return float(np.linalg.norm(resid))

    def project(self, x) -> np.ndarray:
        return self.to_ambient(self.to_local(x))


@dataclass(frozen=True, eq=False)
class Polytope:
    """``{x in W : normals @ x <= offsets}`` with unit-norm rows.

    The first ``protected`` rows (the initial box) are never pruned.
    """

    normals: np.ndarray
    offsets: np.ndarray
    subspace: AffineSubspace
    protected: int = 0
    _local: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = self.subspace.ambient_dim
        a = np.asarray(self.normals, dtype=float).reshape(-1, n)
        b = np.asarray(self.offsets, dtype=float).reshape(-1)
        if a.shape[0] != b.shape[0]:
            raise ValueError("normals and offsets differ in length")
        norms = np.linalg.norm(a, axis=1)
        if np.any(norms == 0):
            raise ZeroNormal("constraint with zero normal")
        object.__setattr__(self, "normals", a / norms[:, None])
        object.__setattr__(self, "offsets", b / norms)

    @classmethod
    def box(cls, n: int, radius: float, subspace: AffineSubspace | None = None) -> "Polytope":
        eye = np.eye(n)
        normals = np.vstack([eye, -eye])
        offsets = np.full(2 * n, float(radius))
        return cls(normals, offsets, subspace or AffineSubspace.full(n), protected=2 * n)

    @classmethod
    def from_vertices_2d(cls, vertices) -> "Polytope":
        """Convex polygon in R^2 from counter-clockwise vertices."""
        v = np.asarray(vertices, dtype=float)
        edges = np.roll(v, -1, axis=0) - v
        normals = np.column_stack([edges[:, 1], -edges[:, 0]])
        offsets = np.einsum("ij,ij->i", normals, v)
        return cls(normals, offsets, AffineSubspace.full(2))

    @property
    def num_constraints(self) -> int:
        return self.normals.shape[0]

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def local(self) -> tuple[np.ndarray, np.ndarray]:
        """Constraints in subspace coordinates: ``A_loc @ y <= b_loc``."""
        if self._local is None:
            sub = self.subspace
            a_loc = self.normals @ sub.directions.T
            b_loc = self.offsets - self.normals @ sub.base_point
            object.__setattr__(self, "_local", (np.ascontiguousarray(a_loc), np.ascontiguousarray(b_loc)))
        return self._local

    def slack(self, x) -> np.ndarray:
        return self.offsets - self.normals @ np.asarray(x, dtype=float)

    def add_halfspace(self, c, offset: float) -> "Polytope":
        """Keep the side ``{x : c^T x >= offset}``."""
        c = np.asarray(c, dtype=float).reshape(-1)
        norm = np.linalg.norm(c)
        if norm == 0 or not np.isfinite(norm):
            raise ZeroNormal("cut normal is zero")
        normals = np.vstack([self.normals, -c / norm])
        offsets = np.append(self.offsets, -float(offset) / norm)
        return Polytope(normals, offsets, self.subspace, self.protected)

    def keep_rows(self, mask) -> "Polytope":
        mask = np.asarray(mask, dtype=bool).copy()
        mask[: self.protected] = True
        return Polytope(self.normals[mask], self.offsets[mask], self.subspace, self.protected)

    def restrict(self, subspace: AffineSubspace, flat_tol: float = 1e-9) -> "Polytope":
        """Same halfspaces intersected with a new affine subspace.

        Rows whose normal is orthogonal to the new directions are constant on
        the subspace; satisfied ones are dropped, violated ones raise.
        """
        a_loc = self.normals @ subspace.directions.T
        b_loc = self.offsets - self.normals @ subspace.base_point
        flat = np.linalg.norm(a_loc, axis=1) <= flat_tol
        if np.any(flat & (b_loc < -flat_tol * (1 + np.abs(self.offsets)))):
            raise EmptySlice("subspace lies outside a constraint")
        keep = ~flat
        protected = int(np.count_nonzero(keep[: self.protected]))
        return Polytope(self.normals[keep], self.offsets[keep], subspace, protected)

    def with_subspace(self, subspace: AffineSubspace) -> "Polytope":
        return replace(self, subspace=subspace, _local=None)


def contains(K: Polytope, x) -> bool:
    x = np.asarray(x, dtype=float)
    if K.subspace.distance(x) > SUBSPACE_TOL:
        return False
    return bool(np.all(K.normals @ x <= K.offsets + CONSTRAINT_TOL))


def add_halfspace(K: Polytope, c, offset: float) -> Polytope:
    return K.add_halfspace(c, offset)
