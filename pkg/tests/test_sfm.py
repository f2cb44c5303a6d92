import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latcut.errors import InstanceError, OutOfBox
from latcut.sfm import (
    FAMILIES,
    EOCounter,
    LovaszOracle,
    SubmodularInstance,
    brute_force_min,
    edge_instance,
    evaluate,
    is_submodular,
    lovasz_expectation,
    lovasz_separation,
    lovasz_value,
    minimize_submodular,
    random_instance,
)
from latcut.solver import SolverConfig


def indicator(n, S):
    x = np.zeros(n)
    x[list(S)] = 1.0
    return x


def minimizing_sets(inst):
    vals = inst.all_values()
    best = vals.min()
    return [tuple(i for i in range(inst.n) if (m >> i) & 1) for m in np.flatnonzero(vals == best)]


# -- evaluation ---------------------------------------------------------------------

def test_edge_evaluation():
    inst = edge_instance()
    assert evaluate(inst, {0}) == 1
    assert evaluate(inst, {0, 1}) == 0
    assert evaluate(inst, set()) == 0


def test_all_values_match_value():
    rng = np.random.default_rng(0)
    for fam in FAMILIES:
        inst = random_instance(fam, 6, rng)
        vals = inst.all_values()
        for m in range(1 << 6):
            assert vals[m] == inst.value([i for i in range(6) if (m >> i) & 1])


def test_counter():
    counter = EOCounter()
    evaluate(edge_instance(), {0}, counter)
    evaluate(edge_instance(), {1}, counter)
    assert counter.calls == 2


def test_random_instances_are_submodular():
    rng = np.random.default_rng(1)
    for fam in FAMILIES:
        for _ in range(5):
            inst = random_instance(fam, 6, rng)
            assert is_submodular(inst)
            assert inst.value(()) == 0


def test_supermodular_rejected():
    with pytest.raises(InstanceError):
        SubmodularInstance(3, "concave_cardinality", {"values": (0, 1, 3, 6)})


def test_json_roundtrip_one_based():
    inst = SubmodularInstance.from_json({"family": "directed_cut", "n": 3, "edges": [[1, 3, 4]]})
    assert inst.params["edges"] == ((0, 2, 4),)
    assert SubmodularInstance.from_json(inst.to_json()) == inst
    rng = np.random.default_rng(2)
    for fam in FAMILIES:
        r = random_instance(fam, 5, rng)
        assert np.array_equal(SubmodularInstance.from_json(r.to_json()).all_values(), r.all_values())
    with pytest.raises(InstanceError):
        SubmodularInstance.from_json({"family": "coverage", "n": 2})


# -- Lovász extension --------------------------------------------------------------

def test_lovasz_value_examples():
    inst = edge_instance()
    assert lovasz_value(inst, [0.7, 0.3]) == pytest.approx(0.4)
    assert lovasz_expectation(inst, [0.7, 0.3]) == pytest.approx(0.4)
    assert lovasz_value(inst, [1.0, 0.0]) == 1
    assert lovasz_value(inst, [0.5, 0.5]) == 0
    assert lovasz_expectation(inst, [0.5, 0.5]) == 0


def test_lovasz_out_of_box():
    with pytest.raises(OutOfBox):
        lovasz_value(edge_instance(), [1.5, 0.0])


def test_separation_examples():
    inst = edge_instance()
    r = lovasz_separation(inst, np.array([0.7, 0.3]))
    assert np.array_equal(r.normal, [-1, 1])
    for S in ((), (0, 1)):
        assert r.normal @ indicator(2, S) >= r.normal @ np.array([0.7, 0.3])
    assert np.array_equal(lovasz_separation(inst, np.array([1.5, 0.0])).normal, [-1, 0])
    assert lovasz_separation(inst, np.zeros(2), lower_bound=brute_force_min(inst)[1]).is_yes


def test_eo_accounting():
    rng = np.random.default_rng(3)
    inst = random_instance("coverage", 7, rng)
    counter = EOCounter()
    for _ in range(10):
        lovasz_separation(inst, rng.random(7), counter=counter)
    assert counter.calls == 70
    before = counter.calls
    lovasz_separation(inst, np.full(7, 2.0), counter=counter)
    assert counter.calls == before


def test_stateful_oracle_certifies_minimum():
    inst = edge_instance()
    oracle = LovaszOracle(inst, known_min=0)
    assert oracle(np.zeros(2)).is_yes
    unaided = LovaszOracle(inst)
    assert not unaided(np.array([0.7, 0.3])).is_yes
    assert unaided.lower_bound <= 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(FAMILIES), st.integers(2, 7))
def test_extension_properties(seed, family, n):
    rng = np.random.default_rng(seed)
    inst = random_instance(family, n, rng)
    for m in range(1 << n):
        S = [i for i in range(n) if (m >> i) & 1]
        assert lovasz_value(inst, indicator(n, S)) == inst.value(S)
    for _ in range(20):
        x, y = rng.random(n), rng.random(n)
        fx, fy = lovasz_value(inst, x), lovasz_value(inst, y)
        assert lovasz_value(inst, (x + y) / 2) <= (fx + fy) / 2 + 1e-9
        lam = rng.random()
        assert lovasz_value(inst, lam * x) == pytest.approx(lam * fx, abs=1e-9)
        g = -lovasz_separation(inst, x).normal if not lovasz_separation(inst, x).is_yes else np.zeros(n)
        assert fy >= fx + g @ (y - x) - 1e-9
        assert fx == pytest.approx(lovasz_expectation(inst, x), abs=1e-9)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(FAMILIES))
def test_separation_contract(seed, family):
    rng = np.random.default_rng(seed)
    inst = random_instance(family, 6, rng)
    mins = minimizing_sets(inst)
    for _ in range(30):
        x = rng.random(6)
        r = lovasz_separation(inst, x)
        if r.is_yes:
            continue
        for S in mins:
            assert r.normal @ indicator(6, S) >= r.normal @ x - 1e-9


# -- brute force --------------------------------------------------------------------

def test_brute_force_examples():
    assert brute_force_min(edge_instance()) == (frozenset(), 0)
    one = SubmodularInstance(4, "concave_cardinality", {"values": (0, 1, 1, 1, 1)})
    assert brute_force_min(one) == (frozenset(), 0)


def test_brute_force_st_cut():
    # path s=0 -> 1 -> 2 -> t=3 with capacities 5, 2, 4; penalties force s in S and t out of S
    edges = ((0, 1, 5), (1, 2, 2), (2, 3, 4))
    inst = SubmodularInstance(4, "directed_cut", {"edges": edges}, (-1000, 0, 0, 1000))
    S, value = brute_force_min(inst)
    assert value == -1000 + 2
    assert S == frozenset({0, 1})


# -- end to end ---------------------------------------------------------------------

def test_minimize_edge():
    res = minimize_submodular(edge_instance(), SolverConfig(seed=7))
    assert res.value == 0
    assert res.subset in (frozenset(), frozenset({0, 1}))
    assert evaluate(edge_instance(), res.subset) == 0


def test_minimize_weighted_cut_6():
    rng = np.random.default_rng(4)
    edges = tuple((int(u), int(v), int(rng.integers(1, 20)))
                  for u, v in itertools.combinations(range(6), 2) if rng.random() < 0.6)
    inst = SubmodularInstance(6, "directed_cut", {"edges": edges, "undirected": True},
                              tuple(int(v) for v in rng.integers(-15, 16, 6)))
    res = minimize_submodular(inst, SolverConfig(seed=1))
    assert res.value == brute_force_min(inst)[1]


def test_minimize_dominating_coverage():
    # set 0 covers every element; the rewards make taking it worthwhile
    sets = (frozenset({0, 1, 2, 3}), frozenset({0}), frozenset({1, 2}), frozenset({3}))
    inst = SubmodularInstance(4, "coverage", {"sets": sets, "weights": (3, 2, 2, 1)}, (-9, -1, -1, 0))
    res = minimize_submodular(inst, SolverConfig(seed=2))
    assert res.value == brute_force_min(inst)[1]
    assert 0 in res.subset


@pytest.mark.parametrize("family", FAMILIES)
def test_minimize_random(family):
    rng = np.random.default_rng(10)
    for n in (3, 5, 7):
        inst = random_instance(family, n, rng)
        res = minimize_submodular(inst, SolverConfig(seed=n))
        assert res.value == brute_force_min(inst)[1]
        assert res.value == inst.value(res.subset)
