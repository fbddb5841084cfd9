"""Naive reference implementations used only by the tests."""

from __future__ import annotations

from collections import Counter
from itertools import combinations, product


def naive_diffs(vals) -> set:
    return {abs(a - b) for a in vals for b in vals if a != b}


def naive_sums(vals) -> set:
    return {a + b for a in vals for b in vals}


def naive_rminus(vals) -> Counter:
    return Counter(b - a for a, b in combinations(sorted(vals), 2))


def naive_local_min(vals, k) -> int:
    return min(len(naive_diffs(c)) for c in combinations(sorted(vals), k))


def naive_g(n, k, ell, span) -> tuple[int, tuple]:
    best = None
    for rest in combinations(range(1, span + 1), n - 1):
        pts = (0,) + rest
        if naive_local_min(pts, k) < ell:
            continue
        v = len(naive_diffs(pts))
        if best is None or v < best[0]:
            best = (v, pts)
    return best


def naive_dumbbells(vals) -> Counter:
    """Class (d, d') -> count by scanning all 4-subsets."""
    out = Counter()
    for a1, a2, a3, a4 in combinations(sorted(vals), 4):
        if a2 - a1 == a4 - a3:
            out[(a2 - a1, a3 - a2)] += 1
    return out


def naive_double_dumbbells(vals) -> Counter:
    out = Counter()
    for a in combinations(sorted(vals), 8):
        d = a[1] - a[0]
        if (a[3] - a[2] == a[5] - a[4] == a[7] - a[6] == d) and a[2] - a[1] == a[6] - a[5]:
            out[(d, a[2] - a[1], a[4] - a[3])] += 1
    return out


def naive_additive_energy(vals, ell) -> int:
    """Count (x_1..x_ell, y_1..y_ell) with x_i - y_i all equal."""
    cnt = 0
    for xs in product(vals, repeat=ell):
        for ys in product(vals, repeat=ell):
            if len({x - y for x, y in zip(xs, ys)}) == 1:
                cnt += 1
    return cnt


def naive_k_ap(vals, k) -> bool:
    s = set(vals)
    for a, b in combinations(sorted(vals), 2):
        if all(a + j * (b - a) in s for j in range(k)):
            return True
    return False
