from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localdiff import (
    BaryCubeSpec,
    ExtractionConstants,
    GAPSpec,
    NumberSet,
    ProbeConfig,
    ProjectedCubeSpec,
    arithmetic_progression,
    bary_cube,
    difference_set,
    find_projected_cube,
    generalized_ap,
    make_set,
    probabilistic_construction,
    projected_cube,
)
from localdiff.constructions import _iroot_ceil, _iroot_floor, bary_levels, cube_difference_bound
from localdiff.errors import BadLength, BadParameters, InsufficientSurvivors
from oracles import naive_diffs

# ---- arithmetic progressions and cubes


def test_arithmetic_progression_examples():
    A = arithmetic_progression(5, 0, 1)
    assert A.ints == (0, 1, 2, 3, 4) and difference_set(A).size == 4
    assert arithmetic_progression(2, 7, 3).points == (7, 10)
    assert arithmetic_progression(3, 0, Fraction(1, 2)).points == (0, Fraction(1, 2), 1)
    with pytest.raises(BadLength):
        arithmetic_progression(1)
    with pytest.raises(BadParameters):
        arithmetic_progression(3, 0, 0)


def test_projected_cube_examples():
    A = projected_cube(ProjectedCubeSpec(0, (1, 3)))
    assert A.ints == (0, 1, 3, 4) and difference_set(A).size == 4
    B = projected_cube(ProjectedCubeSpec(0, (1, 3, 9)))
    assert len(B) == 8 and difference_set(B).size == 13
    assert projected_cube(ProjectedCubeSpec(0, (1, 1))).ints == (0, 1, 2)
    with pytest.raises(BadParameters):
        ProjectedCubeSpec(0, ())
    with pytest.raises(BadParameters):
        ProjectedCubeSpec.standard(0)


@pytest.mark.parametrize("i", range(1, 13))
def test_standard_cube_attains_bound(i):
    A = projected_cube(ProjectedCubeSpec.standard(i))
    assert len(A) == 2**i
    assert difference_set(A).size == cube_difference_bound(i) == (3**i - 1) // 2


@given(st.lists(st.fractions(min_value=Fraction(1, 6), max_value=20, max_denominator=6), min_size=1, max_size=6),
       st.fractions(-5, 5, max_denominator=4))
def test_cube_bound_for_any_deltas(deltas, base):
    spec = ProjectedCubeSpec(base, tuple(deltas))
    A = projected_cube(spec)
    assert len(A) <= 2 ** len(deltas)
    if len(A) > 1:
        assert difference_set(A).size <= cube_difference_bound(len(deltas))


@given(st.lists(st.integers(1, 30), min_size=1, max_size=5), st.integers(1, 30), st.integers(-9, 9))
def test_cube_recursive_decomposition(deltas, extra, base):
    big = projected_cube(ProjectedCubeSpec(base, tuple(deltas) + (extra,)))
    lo = projected_cube(ProjectedCubeSpec(base, tuple(deltas)))
    hi = projected_cube(ProjectedCubeSpec(base + extra, tuple(deltas)))
    assert set(big.points) == set(lo.points) | set(hi.points)


# ---- generalized AP


def test_gap_examples():
    A, proper = generalized_ap(GAPSpec(0, (1,), (5,)))
    assert A.ints == (0, 1, 2, 3, 4) and proper
    A, proper = generalized_ap(GAPSpec(0, (1, 10), (3, 2)))
    assert A.ints == (0, 1, 2, 10, 11, 12) and proper
    A, proper = generalized_ap(GAPSpec(0, (1, 2), (3, 2)))
    assert A.ints == (0, 1, 2, 3, 4) and not proper
    with pytest.raises(BadParameters):
        GAPSpec(0, (1, 2), (3,))
    with pytest.raises(BadParameters):
        GAPSpec(0, (1,), (0,))


@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(1, 4)), min_size=1, max_size=3))
def test_gap_size_and_properness(parts):
    steps = tuple(s for s, _ in parts)
    lengths = tuple(m for _, m in parts)
    A, proper = generalized_ap(GAPSpec(0, steps, lengths))
    expected = {sum(k * b for k, b in zip(ks, steps)) for ks in product(*(range(m) for m in lengths))}
    assert set(A.points) == expected
    assert proper == (len(expected) == GAPSpec(0, steps, lengths).nominal_size)


# ---- b-ary cube


def test_bary_examples():
    assert bary_cube(BaryCubeSpec(2, 2)).ints == (1, 2, 9, 10)
    A = bary_cube(BaryCubeSpec(3, 2))
    assert len(A) == 9 and difference_set(A).size == 12
    B = bary_cube(BaryCubeSpec(2, 1))
    assert B.ints == (1, 2) and difference_set(B).size == 1
    with pytest.raises(BadParameters):
        BaryCubeSpec(1, 2)


@pytest.mark.parametrize("b,i", [(b, i) for b in (2, 3, 4) for i in range(1, 6)])
def test_bary_counts(b, i):
    A = bary_cube(BaryCubeSpec(b, i))
    assert len(A) == b**i
    assert difference_set(A).size == ((2 * b - 1) ** i - 1) // 2


@pytest.mark.parametrize("b,i", [(2, 3), (3, 3), (4, 3), (5, 2)])
def test_bary_unique_representation(b, i):
    levels = bary_levels(BaryCubeSpec(b, i))
    prev, _ = levels[-2]
    _, s = levels[-1]
    xs = {s * (t - u) for t in range(b) for u in range(b)}
    ys = {p - q for p in prev for q in prev}
    sums = [x + y for x in xs for y in ys]
    assert len(sums) == len(set(sums)) == len(xs) * len(ys)


# ---- random construction


def test_integer_roots():
    rng = random.Random(5)
    for _ in range(500):
        x = rng.randrange(1, 10**40)
        k = rng.randint(1, 30)
        r = _iroot_floor(x, k)
        assert r**k <= x < (r + 1) ** k
        c = _iroot_ceil(x, k)
        assert c**k >= x and (c - 1) ** k < x


def test_default_blowup_keeps_probability_below_half():
    cfg = ProbeConfig(n=30, k=26, c=2)
    N = cfg.resolved_N()
    assert N % 30 == 0 and N >= 240
    assert cfg.probability() <= 0.5
    assert ProbeConfig(n=30, k=26, c=2, N=N - 30).probability() > 0.5


def test_strict_mode_rejects_small_k():
    with pytest.raises(BadParameters):
        probabilistic_construction(ProbeConfig(n=30, k=10, c=2))
    with pytest.raises(BadParameters):
        probabilistic_construction(ProbeConfig(n=30, k=26, c=2, N=2))
    with pytest.raises(BadParameters):
        probabilistic_construction(ProbeConfig(n=5, k=6, c=2, strict=False))


def _exploratory(seed, **kw):
    return ProbeConfig(n=10, k=7, c=2, seed=seed, strict=False, **kw)


@pytest.mark.parametrize("seed", range(4))
def test_exploratory_exact_repair(seed):
    cfg = _exploratory(seed, N=40)
    A, log = probabilistic_construction(cfg)
    assert len(A) == 10
    assert A.ints[0] >= 1 and A.ints[-1] <= cfg.universe_size()
    assert log.certificate == "exhaustive" and log.guarantee_void
    for B in combinations(A.ints, 7):
        assert len(naive_diffs(B)) > 14


def test_repair_actually_deletes_on_dense_universe():
    # small N makes the universe tiny relative to n, so small-doubling subsets abound
    cfg = ProbeConfig(n=8, k=6, c=2, N=10, seed=0, strict=False)
    A, log = probabilistic_construction(cfg)
    assert log.deleted_count > 0 and log.rounds > 1
    for B in combinations(A.ints, 6):
        assert len(naive_diffs(B)) > 12


def test_exhausted_reserve_is_reported():
    with pytest.raises(InsufficientSurvivors):
        probabilistic_construction(ProbeConfig(n=8, k=6, c=2, N=6, seed=0, strict=False))


def test_same_seed_same_output():
    a = probabilistic_construction(_exploratory(11, N=40, repair_mode="sampled", samples=500))
    b = probabilistic_construction(_exploratory(11, N=40, repair_mode="sampled", samples=500))
    assert a[0] == b[0] and a[1].to_dict() == b[1].to_dict()
    assert a[1].certificate.startswith("sampled")


# ---- cube extraction


def test_extraction_planted_example():
    A = make_set([0, 1, 5, 6, 100, 101, 105, 106, 40])
    res = find_projected_cube(A, 2)
    assert res.success
    assert res.levels[0].count >= 2
    top = res.levels[-1]
    assert top.count >= 1
    assert len(top.pattern) == 4


def test_extraction_fails_on_sidon():
    res = find_projected_cube(make_set([0, 1, 4, 6]), 2)
    assert not res.success and res.failed_level == 2


@pytest.mark.parametrize("n", [32, 40, 64])
def test_extraction_on_ap(n):
    res = find_projected_cube(arithmetic_progression(n), 3)
    assert res.success and res.achieved_count >= 1
    assert len(res.levels[-1].pattern) == 8


def test_extraction_rejects_bad_target():
    with pytest.raises(BadParameters):
        find_projected_cube(arithmetic_progression(5), 0)


@settings(deadline=None)
@given(st.lists(st.integers(0, 400), min_size=2, max_size=40, unique=True), st.integers(1, 4))
def test_extracted_copies_are_disjoint_translates(vals, target):
    res = find_projected_cube(NumberSet.from_ints(vals), target, ExtractionConstants())
    for lv in res.levels:
        seen = set()
        for cp in lv.copies:
            assert tuple(x - cp[0] for x in cp) == lv.pattern
            assert seen.isdisjoint(cp)
            seen.update(cp)
            assert set(cp) <= set(vals)
        assert lv.count == len(lv.copies)
    assert res.success == (len(res.levels) == target and res.levels[-1].count >= 1)
