from __future__ import annotations

from hypothesis import strategies as st

from localdiff import NumberSet


def int_sets(min_size=1, max_size=10, lo=-40, hi=40):
    return st.lists(st.integers(lo, hi), min_size=min_size, max_size=max_size, unique=True)


def number_sets(min_size=1, max_size=10, lo=-40, hi=40):
    return int_sets(min_size, max_size, lo, hi).map(NumberSet.from_ints)
