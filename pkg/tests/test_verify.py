from __future__ import annotations

import math
from itertools import combinations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from localdiff import (
    NumberSet,
    ProjectedCubeSpec,
    arithmetic_progression,
    congruent_double_dumbbells_instance,
    congruent_dumbbells_instance,
    difference_set,
    find_k_ap,
    local_min_diffs,
    make_set,
    projected_cube,
    same_diff_pairs_instance,
    small_doubling_subsets,
)
from localdiff.errors import BadK
from localdiff.verify import dumbbell_cross_distances, has_local_property, violates_with_newest
from oracles import naive_diffs, naive_k_ap, naive_local_min, naive_sums
from strategies import int_sets

# ---- local property


def test_local_min_examples():
    r = local_min_diffs(arithmetic_progression(10), 4)
    assert r.min_diffs == 3 and r.exhaustive
    w = r.witness
    assert len(w) == 4 and difference_set(w).size == 3
    assert local_min_diffs(make_set([0, 1, 4, 6]), 4).min_diffs == 6
    r = local_min_diffs(projected_cube(ProjectedCubeSpec.standard(3)), 4)
    assert r.min_diffs == 4
    gaps = [b - a for a, b in zip(r.witness.ints, r.witness.ints[1:])]
    assert gaps == [1, 2, 1]  # a translate of P(0; 1, 3)


def test_local_min_bad_k():
    with pytest.raises(BadK):
        local_min_diffs(arithmetic_progression(4), 5)
    with pytest.raises(BadK):
        local_min_diffs(arithmetic_progression(4), 1)


def test_sampled_report_is_flagged():
    A = NumberSet.from_ints(range(0, 60, 1))
    r = local_min_diffs(A, 10, budget=10, samples=200, seed=3)
    assert not r.exhaustive
    assert r.to_dict()["certificate"].startswith("sampled")
    assert r.satisfies(9) is True
    assert r.satisfies(r.min_diffs) is None
    assert r.satisfies(50) is False
    again = local_min_diffs(A, 10, budget=10, samples=200, seed=3)
    assert again.min_diffs == r.min_diffs and again.witness == r.witness


@settings(max_examples=60, deadline=None)
@given(int_sets(min_size=2, max_size=12, lo=0, hi=50), st.data())
def test_branch_and_bound_matches_naive(vals, data):
    k = data.draw(st.integers(2, len(vals)))
    r = local_min_diffs(NumberSet.from_ints(vals), k)
    assert r.exhaustive
    assert r.min_diffs == naive_local_min(vals, k)
    assert len(r.witness) == k and set(r.witness.ints) <= set(vals)
    assert difference_set(r.witness).size == r.min_diffs
    assert k - 1 <= r.min_diffs <= math.comb(k, 2)


@settings(max_examples=60, deadline=None)
@given(int_sets(min_size=3, max_size=11, lo=0, hi=40), st.data())
def test_local_property_definition(vals, data):
    k = data.draw(st.integers(2, len(vals)))
    ell = data.draw(st.integers(1, math.comb(k, 2) + 1))
    A = NumberSet.from_ints(vals)
    expected = all(len(naive_diffs(c)) >= ell for c in combinations(vals, k))
    assert has_local_property(A, k, ell) == expected
    assert local_min_diffs(A, k).satisfies(ell) == expected


@settings(max_examples=60, deadline=None)
@given(int_sets(min_size=3, max_size=10, lo=0, hi=40), st.data())
def test_violation_with_newest_point(vals, data):
    vals = sorted(vals)
    k = data.draw(st.integers(2, len(vals)))
    ell = data.draw(st.integers(1, math.comb(k, 2)))
    expected = any(
        len(naive_diffs(c)) < ell for c in combinations(vals, k) if vals[-1] in c
    )
    assert violates_with_newest(vals, k, ell) == expected


@settings(max_examples=40, deadline=None)
@given(int_sets(min_size=4, max_size=11, lo=0, hi=40), st.data())
def test_monotonicity(vals, data):
    A = NumberSet.from_ints(vals)
    k = data.draw(st.integers(2, len(vals) - 1))
    full = local_min_diffs(A, k).min_diffs
    sub = data.draw(st.lists(st.sampled_from(vals), min_size=k, max_size=len(vals), unique=True))
    assert local_min_diffs(NumberSet.from_ints(sub), k).min_diffs >= full
    assert local_min_diffs(A, k + 1).min_diffs >= full


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 7), st.integers(1, 9), st.lists(st.integers(0, 200), max_size=4, unique=True))
def test_repeated_difference_caps_local_minimum(k, d, extra):
    # k pairs at the same difference d; any k-subset built from them obeys the pairs bound
    base = [i * 1000 for i in range(k)]
    pts = set(base) | {b + d for b in base} | {e + 50_000 for e in extra}
    A = NumberSet.from_ints(pts)
    assert difference_set(A).count(d) >= k
    k_even = k if k % 2 == 0 else k - 1
    r = local_min_diffs(A, k_even)
    assert r.min_diffs <= (3 * k_even * k_even - 6 * k_even + 8) // 8


# ---- configuration instances


def test_same_diff_pairs_examples():
    r = same_diff_pairs_instance(4)
    assert r.instance.ints == (0, 1, 10, 11)
    assert r.predicted == r.achieved == 4
    r = same_diff_pairs_instance(8)
    assert r.predicted == r.achieved == 19
    with pytest.raises(BadK):
        same_diff_pairs_instance(3)


@pytest.mark.parametrize("k", [4, 6, 8, 10, 12])
def test_same_diff_pairs_mechanism(k):
    r = same_diff_pairs_instance(k)
    assert r.matches
    assert r.details["coincidences"] == math.comb(k // 2, 2) == r.details["expected_coincidences"]
    assert r.details["shared_reps"] == k // 2


def test_congruent_dumbbells_examples():
    r = congruent_dumbbells_instance(8)
    assert r.predicted == r.achieved == 13
    assert r.details["intra"] == 4 and r.details["cross_per_pair"] == [9]
    assert r.details["cross_matches_pattern"]
    r = congruent_dumbbells_instance(16)
    assert r.predicted == r.achieved == 58
    with pytest.raises(BadK):
        congruent_dumbbells_instance(12)


def test_cross_distances_are_distinct_for_generic_gaps():
    assert len(set(dumbbell_cross_distances(1, 3, 100))) == 9
    P = (0, 1, 4, 5)
    Q = tuple(x + 105 for x in P)
    assert {q - p for p in P for q in Q} == set(dumbbell_cross_distances(1, 3, 100))


def test_double_dumbbell_predictions_and_brute_force():
    r16 = congruent_double_dumbbells_instance(16)
    r32 = congruent_double_dumbbells_instance(32)
    assert (r16.predicted, r32.predicted) == (39, 194)
    for r in (r16, r32):
        assert r.achieved == len(naive_diffs(r.instance.ints))
        assert r.achieved == r.details["model_count"]
    with pytest.raises(BadK):
        congruent_double_dumbbells_instance(8)


def test_to_dict_is_json_ready():
    import json

    json.dumps(congruent_dumbbells_instance(8).to_dict())


# ---- AP and small doubling


def test_find_k_ap_examples():
    assert find_k_ap(make_set([0, 1, 2, 5, 9]), 3) == (0, 1, 2)
    assert find_k_ap(make_set([0, 1, 4, 6]), 3) is None
    assert find_k_ap(arithmetic_progression(10), 10) == tuple(range(10))
    with pytest.raises(BadK):
        find_k_ap(arithmetic_progression(4), 2)


@given(int_sets(min_size=1, max_size=12, lo=-20, hi=20), st.integers(3, 5))
def test_find_k_ap_matches_naive(vals, k):
    wit = find_k_ap(NumberSet.from_ints(vals), k)
    assert (wit is not None) == naive_k_ap(vals, k)
    if wit is not None:
        assert len({b - a for a, b in zip(wit, wit[1:])}) == 1
        assert set(wit) <= set(vals)


def test_small_doubling_examples():
    scan = small_doubling_subsets(make_set([0, 1, 2, 3]), 3, 2, "diff")
    assert (0, 1, 2) in scan.witnesses and scan.exhaustive
    assert small_doubling_subsets(make_set([0, 1, 4, 6]), 3, 2, "diff").witnesses == []
    assert small_doubling_subsets(make_set([0, 1, 2]), 3, 4, "sum").witnesses == []
    assert small_doubling_subsets(make_set([0, 1, 2]), 3, 5, "sum").witnesses == [(0, 1, 2)]
    with pytest.raises(BadK):
        small_doubling_subsets(make_set([0, 1]), 3, 2)


@settings(deadline=None)
@given(int_sets(min_size=3, max_size=10, lo=0, hi=30), st.data())
def test_small_doubling_matches_naive(vals, data):
    vals = sorted(vals)
    k = data.draw(st.integers(2, len(vals)))
    bound = data.draw(st.integers(1, 2 * k))
    mode = data.draw(st.sampled_from(["diff", "sum"]))
    size = (lambda c: len(naive_diffs(c))) if mode == "diff" else (lambda c: len(naive_sums(c)))
    expected = {c for c in combinations(vals, k) if size(c) <= bound}
    scan = small_doubling_subsets(NumberSet.from_ints(vals), k, bound, mode)
    assert {tuple(int(x) for x in w) for w in scan.witnesses} == expected


def test_sampled_small_doubling_finds_subset_of_truth():
    A = NumberSet.from_ints(list(range(12)) + [100, 250, 777])
    exact = small_doubling_subsets(A, 6, 7, budget=10**6)
    sampled = small_doubling_subsets(A, 6, 7, budget=1, samples=300, seed=2)
    assert not sampled.exhaustive
    assert set(sampled.witnesses) <= set(exact.witnesses)
    assert sampled.checked == 300
