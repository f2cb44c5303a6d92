"""Submodular function minimization through the Lovász extension.

Sets are Python sets / iterables of 0-based indices in this API; the JSON
instance format uses 1-based vertices and elements.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.optimize import linprog

from .errors import GroundSetTooLarge, InstanceError, NoIntegralPoint, OutOfBox
from .solver import SeparationResponse, SolverConfig, SolverReport, minimize

FAMILIES = ("directed_cut", "coverage", "concave_cardinality")
BRUTE_FORCE_LIMIT = 20
YES_TOL = 1e-9
BOX_TOL = 1e-12  # float noise on box faces is treated as inside


@dataclass(frozen=True)
class SubmodularInstance:
    """Integral submodular set function on ``{0..n-1}``, normalized so ``f(empty) = 0``.

    ``params`` by family:
      directed_cut: ``edges`` as ``(u, v, w)`` with 0-based ends, ``undirected`` flag
      coverage: ``sets[i]`` = elements covered by ``i``, ``weights[e]`` per element
      concave_cardinality: ``values[k] = g(k)`` for ``k = 0..n``, concave in ``k``
    ``modular`` adds ``sum_{i in S} modular[i]``.
    """

    n: int
    family: str
    params: dict
    modular: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise InstanceError("ground set must be nonempty")
        if self.family not in FAMILIES:
            raise InstanceError(f"unknown family {self.family!r}")
        if self.modular and len(self.modular) != self.n:
            raise InstanceError("modular terms must have length n")
        if self.family == "directed_cut":
            for u, v, w in self.params.get("edges", ()):
                if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
                    raise InstanceError(f"bad edge {(u, v, w)}")
                if w < 0:
                    raise InstanceError("cut weights must be nonnegative")
        elif self.family == "coverage":
            sets = self.params.get("sets")
            weights = self.params.get("weights")
            if sets is None or weights is None or len(sets) != self.n:
                raise InstanceError("coverage needs n sets and element weights")
            if any(w < 0 for w in weights):
                raise InstanceError("coverage weights must be nonnegative")
            if any(not 0 <= e < len(weights) for s in sets for e in s):
                raise InstanceError("covered element out of range")
        else:
            vals = self.params.get("values")
            if vals is None or len(vals) != self.n + 1:
                raise InstanceError("concave_cardinality needs n + 1 values")
            inc = np.diff(vals)
            if np.any(np.diff(inc) > 0):
                raise InstanceError("cardinality values must be concave")

    # -- evaluation ---------------------------------------------------------

    def _raw(self, members: frozenset) -> int:
        if self.family == "directed_cut":
            und = self.params.get("undirected", False)
            total = 0
            for u, v, w in self.params["edges"]:
                if (u in members) != (v in members) if und else (u in members and v not in members):
                    total += w
        elif self.family == "coverage":
            covered = set()
            for i in members:
                covered.update(self.params["sets"][i])
            total = sum(self.params["weights"][e] for e in covered)
        else:
            total = self.params["values"][len(members)] - self.params["values"][0]
        if self.modular:
            total += sum(self.modular[i] for i in members)
        return int(total)

    def value(self, S: Iterable[int]) -> int:
        members = frozenset(int(i) for i in S)
        if any(not 0 <= i < self.n for i in members):
            raise InstanceError("set element out of range")
        return self._raw(members)

    def all_values(self) -> np.ndarray:
        """f at every subset; index is the bitmask (bit i set when i in S)."""
        n = self.n
        masks = np.arange(1 << n, dtype=np.int64)
        bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
        vals = np.zeros(1 << n, dtype=np.int64)
        if self.family == "directed_cut":
            und = self.params.get("undirected", False)
            for u, v, w in self.params["edges"]:
                cut = bits[:, u] != bits[:, v] if und else bits[:, u] & ~bits[:, v]
                vals += w * cut
        elif self.family == "coverage":
            weights = self.params["weights"]
            for e, w in enumerate(weights):
                owners = [i for i, s in enumerate(self.params["sets"]) if e in s]
                if owners:
                    vals += w * bits[:, owners].any(axis=1)
        else:
            g = np.asarray(self.params["values"], dtype=np.int64)
            vals += g[bits.sum(axis=1)] - g[0]
        if self.modular:
            vals += bits @ np.asarray(self.modular, dtype=np.int64)
        return vals

    def to_json(self) -> dict:
        out = {"family": self.family, "n": self.n}
        if self.family == "directed_cut":
            out["edges"] = [[u + 1, v + 1, w] for u, v, w in self.params["edges"]]
            if self.params.get("undirected"):
                out["undirected"] = True
        elif self.family == "coverage":
            out["sets"] = [[e + 1 for e in sorted(s)] for s in self.params["sets"]]
            out["weights"] = list(self.params["weights"])
        else:
            out["values"] = list(self.params["values"])
        if self.modular:
            out["modular"] = list(self.modular)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SubmodularInstance":
        try:
            family, n = data["family"], int(data["n"])
            modular = tuple(int(m) for m in data.get("modular", ()))
            if family == "directed_cut":
                edges = tuple((int(u) - 1, int(v) - 1, int(w)) for u, v, w in data["edges"])
                params = {"edges": edges, "undirected": bool(data.get("undirected", False))}
            elif family == "coverage":
                params = {
                    "sets": tuple(frozenset(int(e) - 1 for e in s) for s in data["sets"]),
                    "weights": tuple(int(w) for w in data["weights"]),
                }
            elif family == "concave_cardinality":
                params = {"values": tuple(int(v) for v in data["values"])}
            else:
                raise InstanceError(f"unknown family {family!r}")
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"malformed instance: {exc}") from exc
        return cls(n, family, params, modular)


def load_instance(path) -> SubmodularInstance:
    with open(path) as fh:
        return SubmodularInstance.from_json(json.load(fh))


def edge_instance() -> SubmodularInstance:
    """Single undirected edge between elements 0 and 1 with weight 1."""
    return SubmodularInstance(2, "directed_cut", {"edges": ((0, 1, 1),), "undirected": True})


# --------------------------------------------------------------------------
# evaluation oracle and Lovász extension
# --------------------------------------------------------------------------

@dataclass
class EOCounter:
    calls: int = 0


def evaluate(inst: SubmodularInstance, S: Iterable[int], counter: EOCounter | None = None) -> int:
    if counter is not None:
        counter.calls += 1
    return inst.value(S)


@dataclass(frozen=True)
class SortedEvaluation:
    permutation: tuple
    prefix_values: tuple

    @property
    def subgradient(self) -> np.ndarray:
        g = np.zeros(len(self.permutation))
        for i, p in enumerate(self.permutation):
            g[p] = self.prefix_values[i + 1] - self.prefix_values[i]
        return g


def sorted_evaluation(inst: SubmodularInstance, x, counter: EOCounter | None = None) -> SortedEvaluation:
    """Prefix values along the order of decreasing ``x`` (ties by ascending index); n EO calls."""
    x = np.asarray(x, dtype=float)
    perm = tuple(sorted(range(inst.n), key=lambda i: (-x[i], i)))
    vals = [0]
    members = []
    for i in perm:
        members.append(i)
        vals.append(evaluate(inst, members, counter))
    return SortedEvaluation(perm, tuple(vals))


def _check_box(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > 1):
        raise OutOfBox(f"point {x.tolist()} lies outside [0,1]^n")
    return x


def lovasz_value(inst: SubmodularInstance, x, counter: EOCounter | None = None) -> float:
    x = _check_box(x)
    ev = sorted_evaluation(inst, x, counter)
    return float(ev.subgradient @ x)


def lovasz_expectation(inst: SubmodularInstance, x) -> float:
    """``E_t f({i : x_i >= t})`` for t uniform on [0, 1], by integrating over breakpoints."""
    x = _check_box(x)
    cuts = sorted(set([0.0, 1.0] + [float(v) for v in x]))
    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        t = 0.5 * (lo + hi)
        total += (hi - lo) * inst.value([i for i in range(inst.n) if x[i] >= t])
    return total


def _outside(x) -> bool:
    return bool(np.any(x < -BOX_TOL) or np.any(x > 1 + BOX_TOL))


def _box_cut(x):
    over = x - 1.0
    under = -x
    i_over, i_under = int(np.argmax(over)), int(np.argmax(under))
    c = np.zeros_like(x)
    if over[i_over] >= under[i_under]:
        c[i_over] = -1.0
    else:
        c[i_under] = 1.0
    return c


def lovasz_separation(inst: SubmodularInstance, x, lower_bound: float | None = None,
                      counter: EOCounter | None = None) -> SeparationResponse:
    """Separation oracle for the Lovász extension.

    Outside the box the most violated facet is returned.  Inside, the cut is
    ``c = -g`` for the sorted-prefix subgradient ``g``; the answer is YES when
    ``f^(x)`` does not exceed ``lower_bound`` (a proven lower bound on min f).
    """
    x = np.asarray(x, dtype=float)
    if _outside(x):
        return SeparationResponse.cut(_box_cut(x), x)
    g = sorted_evaluation(inst, np.clip(x, 0, 1), counter).subgradient
    value = float(g @ x)
    if not g.any() or (lower_bound is not None and value <= lower_bound + YES_TOL):
        return SeparationResponse.yes(x)
    return SeparationResponse.cut(-g, x)


class LovaszOracle:
    """Stateful separation oracle that certifies optimality from collected subgradients.

    Every subgradient ``g`` is a vertex of the base polytope, so
    ``f^(y) >= max_g g^T y`` and ``min_y max_g g^T y`` over the box (an LP) is
    a lower bound on ``min f``.  Values are integral, so the bound is rounded
    up.  A query answers YES once ``f^(x)`` reaches the bound.
    """

    def __init__(self, inst: SubmodularInstance, known_min: int | None = None,
                 counter: EOCounter | None = None):
        self.inst = inst
        self.counter = counter or EOCounter()
        self.known_min = known_min
        self.pool: dict[tuple, np.ndarray] = {}
        self.lower_bound = -math.inf
        self.best_set: tuple | None = None
        self.best_value = math.inf
        self.queries = 0

    def _update_bound(self, g: np.ndarray):
        key = tuple(g)
        if key in self.pool:
            return
        self.pool[key] = g
        simple = math.ceil(float(np.minimum(g, 0).sum()) - 1e-7)
        self.lower_bound = max(self.lower_bound, simple)
        if len(self.pool) > 1:
            self.lower_bound = max(self.lower_bound, self._lp_bound())

    def _lp_bound(self) -> float:
        n = self.inst.n
        gs = np.array(list(self.pool.values()))
        cost = np.zeros(n + 1)
        cost[-1] = 1.0
        a_ub = np.hstack([gs, -np.ones((gs.shape[0], 1))])
        res = linprog(cost, A_ub=a_ub, b_ub=np.zeros(gs.shape[0]),
                      bounds=[(0, 1)] * n + [(None, None)], method="highs")
        if res.status != 0:
            return -math.inf
        return math.ceil(res.fun - 1e-7)

    def __call__(self, x) -> SeparationResponse:
        self.queries += 1
        x = np.asarray(x, dtype=float)
        if _outside(x):
            return SeparationResponse.cut(_box_cut(x), x)
        ev = sorted_evaluation(self.inst, np.clip(x, 0, 1), self.counter)
        g = ev.subgradient
        for k, val in enumerate(ev.prefix_values):
            if val < self.best_value:
                self.best_value = val
                self.best_set = tuple(sorted(ev.permutation[:k]))
        value = float(g @ x)
        bound = self.lower_bound
        if value > bound + YES_TOL:
            self._update_bound(g)
            bound = self.lower_bound
        if self.known_min is not None:
            bound = max(bound, self.known_min)
        if not g.any() or value <= bound + YES_TOL:
            return SeparationResponse.yes(x)
        return SeparationResponse.cut(-g, x)


def brute_force_min(inst: SubmodularInstance) -> tuple[frozenset, int]:
    """Exhaustive minimum; ties by smallest cardinality, then lexicographically."""
    if inst.n > BRUTE_FORCE_LIMIT:
        raise GroundSetTooLarge(f"n = {inst.n} exceeds {BRUTE_FORCE_LIMIT}")
    vals = inst.all_values()
    best = int(vals.min())
    masks = np.flatnonzero(vals == best)
    sets = [tuple(i for i in range(inst.n) if (m >> i) & 1) for m in masks]
    chosen = min(sets, key=lambda s: (len(s), s))
    return frozenset(chosen), best


def is_submodular(inst: SubmodularInstance) -> bool:
    """Exhaustive diminishing-returns check (use for small n)."""
    vals = inst.all_values()
    n = inst.n
    for i in range(n):
        bit = 1 << i
        for j in range(n):
            if j == i:
                continue
            bj = 1 << j
            for m in range(1 << n):
                if m & bit or m & bj:
                    continue
                # f(S+i) - f(S) >= f(S+j+i) - f(S+j)
                if vals[m | bit] - vals[m] < vals[m | bj | bit] - vals[m | bj]:
                    return False
    return True


# --------------------------------------------------------------------------
# driver
# --------------------------------------------------------------------------

@dataclass
class SFMResult:
    subset: frozenset
    value: int
    eo_calls: int
    oracle_calls: int
    report: SolverReport | None = None
    fallback: bool = False
    trace: list = field(default_factory=list)


def minimize_submodular(inst: SubmodularInstance, config: SolverConfig | None = None,
                        known_min: int | None = None) -> SFMResult:
    """Minimize f by running the solver on its Lovász extension over ``[-1, 1]^n``.

    Perturbation is always on, since the minimizer set of ``f^`` is a face.
    If the final search ends without a certificate, the best set among all
    evaluated prefixes and visited points is returned (``fallback=True``).
    """
    base = config or SolverConfig()
    cfg = SolverConfig(**{**base.__dict__, "radius": 1, "perturb": True})
    counter = EOCounter()
    oracle = LovaszOracle(inst, known_min, counter)
    try:
        report = minimize(oracle, inst.n, cfg)
    except NoIntegralPoint as exc:
        best_set, best_val = oracle.best_set, oracle.best_value
        for pt in exc.visited:
            if all(v in (0, 1) for v in pt):
                s = tuple(i for i, v in enumerate(pt) if v == 1)
                val = evaluate(inst, s, counter)
                if val < best_val:
                    best_set, best_val = s, val
        return SFMResult(frozenset(best_set or ()), int(best_val), counter.calls, oracle.queries,
                         None, True)
    subset = frozenset(i for i, v in enumerate(report.minimizer) if v == 1)
    value = evaluate(inst, subset, counter)
    return SFMResult(subset, value, counter.calls, report.oracle_calls, report, False, report.trace)


# --------------------------------------------------------------------------
# random instances
# --------------------------------------------------------------------------

def random_instance(family: str, n: int, rng: np.random.Generator, max_weight: int = 100,
                    modular: bool = True) -> SubmodularInstance:
    """Random integral instance with weights in ``[0, max_weight]``."""
    if family == "directed_cut":
        m = int(rng.integers(n, 3 * n + 1)) if n > 1 else 0
        edges = []
        for _ in range(m):
            u, v = rng.choice(n, size=2, replace=False)
            edges.append((int(u), int(v), int(rng.integers(1, max_weight + 1))))
        params = {"edges": tuple(edges), "undirected": bool(rng.integers(2))}
    elif family == "coverage":
        universe = 2 * n
        sets = tuple(frozenset(int(e) for e in rng.choice(universe, size=int(rng.integers(1, 4)), replace=False))
                     for _ in range(n))
        params = {"sets": sets, "weights": tuple(int(w) for w in rng.integers(1, max_weight + 1, universe))}
    elif family == "concave_cardinality":
        inc = np.sort(rng.integers(-max_weight, max_weight + 1, n))[::-1]
        params = {"values": tuple(int(v) for v in np.concatenate([[0], np.cumsum(inc)]))}
    else:
        raise InstanceError(f"unknown family {family!r}")
    mod = ()
    if modular:
        mod = tuple(int(v) for v in rng.integers(-max_weight, max_weight + 1, n))
    return SubmodularInstance(n, family, params, mod)
