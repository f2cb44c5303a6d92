"""Convex test problems with integral minimizers and subgradient oracles.

Families (JSON ``family`` field):
  l1         f(x) = sum_i w_i |x_i - a_i|                 unique minimizer a
  quadratic  f(x) = sum_i w_i (x_i - a_i)^2               unique minimizer a
  l1_box     f(x) = sum_i w_i dist(x_i, [lo_i, hi_i])     minimizers form an integral box
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InstanceError
from .solver import SeparationResponse

SEPARATION_FAMILIES = ("l1", "quadratic", "l1_box")


@dataclass(frozen=True)
class SeparationInstance:
    family: str
    lower: tuple
    upper: tuple
    weights: tuple
    radius: int | None = None

    def __post_init__(self):
        if self.family not in SEPARATION_FAMILIES:
            raise InstanceError(f"unknown separation family {self.family!r}")
        n = len(self.lower)
        if n == 0 or len(self.upper) != n or len(self.weights) != n:
            raise InstanceError("lower, upper and weights must have the same positive length")
        if any(lo > hi for lo, hi in zip(self.lower, self.upper)):
            raise InstanceError("lower exceeds upper")
        if self.family != "l1_box" and self.lower != self.upper:
            raise InstanceError(f"{self.family} needs a single center")
        if any(w <= 0 for w in self.weights):
            raise InstanceError("weights must be positive")

    @property
    def n(self) -> int:
        return len(self.lower)

    @property
    def default_radius(self) -> int:
        if self.radius is not None:
            return self.radius
        return max(1, max(max(abs(v) for v in self.lower), max(abs(v) for v in self.upper)))

    def subgradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lo, hi, w = (np.asarray(t, dtype=float) for t in (self.lower, self.upper, self.weights))
        if self.family == "quadratic":
            return 2 * w * (x - lo)
        return w * (np.sign(x - hi) * (x > hi) + np.sign(x - lo) * (x < lo))

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        lo, hi, w = (np.asarray(t, dtype=float) for t in (self.lower, self.upper, self.weights))
        if self.family == "quadratic":
            return float(w @ (x - lo) ** 2)
        return float(w @ (np.maximum(x - hi, 0) + np.maximum(lo - x, 0)))

    def is_minimizer(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= np.asarray(self.lower)) and np.all(x <= np.asarray(self.upper)))

    def oracle(self, x) -> SeparationResponse:
        g = self.subgradient(x)
        if not g.any():
            return SeparationResponse.yes(x)
        return SeparationResponse.cut(-g, x)

    __call__ = oracle

    def to_json(self) -> dict:
        out = {"family": self.family, "weights": list(self.weights)}
        if self.family == "l1_box":
            out["lower"], out["upper"] = list(self.lower), list(self.upper)
        else:
            out["center"] = list(self.lower)
        if self.radius is not None:
            out["radius"] = self.radius
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SeparationInstance":
        try:
            family = data["family"]
            if family == "l1_box":
                lower = tuple(int(v) for v in data["lower"])
                upper = tuple(int(v) for v in data["upper"])
            else:
                lower = upper = tuple(int(v) for v in data["center"])
            weights = tuple(int(v) for v in data.get("weights", [1] * len(lower)))
            radius = data.get("radius")
            radius = None if radius is None else int(radius)
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"malformed instance: {exc}") from exc
        return cls(family, lower, upper, weights, radius)


def load_separation(path) -> SeparationInstance:
    with open(path) as fh:
        return SeparationInstance.from_json(json.load(fh))


def random_separation_instance(n: int, radius: int, rng: np.random.Generator,
                               family: str | None = None) -> SeparationInstance:
    """Random instance whose minimizers lie in ``[-radius, radius]^n``."""
    family = family or SEPARATION_FAMILIES[int(rng.integers(len(SEPARATION_FAMILIES)))]
    weights = tuple(int(w) for w in rng.integers(1, 10, n))
    a = rng.integers(-radius, radius + 1, n)
    if family == "l1_box":
        b = rng.integers(-radius, radius + 1, n)
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        return SeparationInstance(family, tuple(int(v) for v in lo), tuple(int(v) for v in hi), weights, radius)
    center = tuple(int(v) for v in a)
    return SeparationInstance(family, center, center, weights, radius)
