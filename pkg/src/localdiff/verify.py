"""Local-property checks, configuration instances and witness finding."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from ._subsets import combination_chunks, random_row_chunks, subset_counts
from .errors import BadK
from .setcore import NumberSet, difference_counts

DEFAULT_BUDGET = 10**6
DEFAULT_SAMPLES = 10_000


# ---------------------------------------------------------------------------
# Local property
# ---------------------------------------------------------------------------


@dataclass
class LocalPropertyReport:
    k: int
    min_diffs: int
    witness: NumberSet
    exhaustive: bool
    nodes: int = 0
    samples: int = 0

    def satisfies(self, ell: int) -> Optional[bool]:
        """True / False when decided, None when a sampled scan found no violation."""
        if self.min_diffs < ell:
            return False
        if self.exhaustive or ell <= self.k - 1:
            # any k distinct points span at least k - 1 differences
            return True
        return None

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "min_diffs": self.min_diffs,
            "witness": [str(x) for x in self.witness.points],
            "exhaustive": self.exhaustive,
            "certificate": "exhaustive" if self.exhaustive else "sampled (not a certificate)",
            "nodes": self.nodes,
            "samples": self.samples,
        }


class _MinSearch:
    """Depth-first branch and bound for the fewest distinct differences.

    Points are added monotonically (each new point is a new maximum, or a
    new minimum when ``root`` holds a forced maximum), so every added point
    creates at least one new difference; that makes
    ``distinct + points_still_needed`` an admissible lower bound.
    """

    def __init__(self, incumbent: int, stop_below: Optional[int] = None):
        self.best = incumbent
        self.witness: Optional[list[int]] = None
        self.stop_below = stop_below
        self.nodes = 0
        self.done = False

    def run(self, root: list[int], cand: list[int], need: int) -> None:
        counts: Counter = Counter()
        for a, b in combinations(root, 2):
            counts[abs(b - a)] += 1
        self._dfs(list(root), cand, 0, need, counts)

    def _dfs(self, chosen, cand, start, need, counts):
        self.nodes += 1
        if need == 0:
            distinct = len(counts)
            if distinct < self.best:
                self.best = distinct
                self.witness = sorted(chosen)
                if self.stop_below is not None and distinct < self.stop_below:
                    self.done = True
            return
        if len(cand) - start < need:
            return
        distinct = len(counts)
        lower = distinct + need - (0 if chosen else 1)
        if lower >= self.best:
            return
        # children ordered by how many new differences they add (fewest first)
        options = []
        for j in range(start, len(cand) - need + 1):
            x = cand[j]
            new = sum(1 for c in chosen if abs(x - c) not in counts)
            options.append((new, j))
        options.sort()
        for new, j in options:
            if distinct + new + (need - 1) >= self.best:
                continue
            x = cand[j]
            diffs = [abs(x - c) for c in chosen]
            for dd in diffs:
                counts[dd] += 1
            chosen.append(x)
            self._dfs(chosen, cand, j + 1, need - 1, counts)
            chosen.pop()
            for dd in diffs:
                counts[dd] -= 1
                if not counts[dd]:
                    del counts[dd]
            if self.done:
                return
            if self.best <= distinct + need - (0 if chosen else 1):
                return


def _exhaustive_min(ints, k):
    search = _MinSearch(math.comb(k, 2) + 1, stop_below=k)
    search.run([], list(ints), k)
    return search.best, search.witness, search.nodes


def local_min_diffs(
    A: NumberSet, k: int, budget: int = DEFAULT_BUDGET, samples: int = DEFAULT_SAMPLES, seed: int = 0
) -> LocalPropertyReport:
    """Minimum of ``|A' - A'|`` over k-subsets ``A'``.

    Exhaustive (branch and bound) when ``C(|A|, k) <= budget``; otherwise
    the minimum over ``samples`` random k-subsets, flagged non-exhaustive.
    """
    n = len(A)
    if not 2 <= k <= n:
        raise BadK(f"need 2 <= k <= |A| (k={k}, |A|={n})")
    if math.comb(n, k) <= budget:
        best, wit, nodes = _exhaustive_min(A.ints, k)
        return LocalPropertyReport(k, best, A.with_ints(wit), True, nodes=nodes)
    rng = np.random.default_rng(seed)
    best, wit = math.comb(k, 2) + 1, None
    for rows in random_row_chunks(rng, n, k, samples):
        counts = subset_counts(A.ints, rows, "diff")
        j = int(np.argmin(counts))
        if counts[j] < best:
            best = int(counts[j])
            wit = [A.ints[i] for i in rows[j]]
    return LocalPropertyReport(k, best, A.with_ints(wit), False, samples=samples)


def has_local_property(A: NumberSet, k: int, ell: int) -> bool:
    """Exact: does every k-subset of ``A`` span at least ``ell`` differences?"""
    n = len(A)
    if not 2 <= k <= n:
        raise BadK(f"need 2 <= k <= |A| (k={k}, |A|={n})")
    if ell <= k - 1:
        return True
    search = _MinSearch(ell, stop_below=ell)
    search.run([], list(A.ints), k)
    return search.witness is None


def violates_with_newest(ints: list[int], k: int, ell: int) -> bool:
    """Is there a k-subset containing ``ints[-1]`` (the maximum) with fewer than ``ell`` differences?

    Used by incremental search: earlier points were already checked.
    """
    if len(ints) < k or ell <= k - 1:
        return False
    top = ints[-1]
    search = _MinSearch(ell, stop_below=ell)
    # remaining points are added in decreasing order, each a new minimum
    search.run([top], sorted(ints[:-1], reverse=True), k - 1)
    return search.witness is not None


# ---------------------------------------------------------------------------
# Configuration instances
# ---------------------------------------------------------------------------


@dataclass
class ConfigBoundResult:
    config_kind: str
    k: int
    predicted: int
    achieved: int
    instance: NumberSet
    details: dict = field(default_factory=dict)

    @property
    def matches(self) -> bool:
        return self.achieved == self.predicted

    def to_dict(self) -> dict:
        return {
            "config_kind": self.config_kind,
            "k": self.k,
            "predicted": self.predicted,
            "achieved": self.achieved,
            "matches": self.matches,
            "instance": [str(x) for x in self.instance.points],
            "details": self.details,
        }


def _signed_diffs(pattern) -> set[int]:
    return {b - a for a in pattern for b in pattern}


def _sidon_offsets(m: int, width: int) -> list[int]:
    """``0, B, B*10, B*100, ...`` with ``B`` a power of 10 well above ``width``."""
    base = 10 ** (len(str(4 * width + 1)) + 1)
    return [0] + [base * 10**j for j in range(m - 1)]


def same_diff_pairs_instance(k: int) -> ConfigBoundResult:
    """``k/2`` translated pairs sharing one difference, other gaps generic.

    ``k/2 - 1`` repeats of the shared difference plus one forced coincidence
    ``a_i - a_j = b_i - b_j`` per pair of pairs are the only collisions.
    """
    if k < 4 or k % 2:
        raise BadK("k must be even and >= 4")
    half = k // 2
    d = 1
    lows = [0] + [10**j for j in range(1, half)]
    pts = sorted(x for b in lows for x in (b, b + d))
    A = NumberSet.from_ints(pts)
    prof = difference_counts(A.ints)
    achieved = len(prof)
    predicted = (3 * k * k - 6 * k + 8) // 8
    coincidences = sum(
        1 for i, j in combinations(range(half), 2) if prof.get(lows[j] - lows[i], 0) == 2
    )
    return ConfigBoundResult(
        "same_diff_pairs", k, predicted, achieved, A,
        {
            "shared_difference": d,
            "shared_reps": prof.get(d, 0),
            "coincidences": coincidences,
            "expected_coincidences": math.comb(half, 2),
        },
    )


def dumbbell_cross_distances(d1, d2, d3) -> list:
    """The nine distances between two congruent dumbbells separated by a gap ``d3``."""
    return [
        d3, d1 + d3, 2 * d1 + d3, d1 + d2 + d3, 2 * d1 + d2 + d3,
        3 * d1 + d2 + d3, 2 * d1 + 2 * d2 + d3, 3 * d1 + 2 * d2 + d3, 4 * d1 + 2 * d2 + d3,
    ]


def congruent_dumbbells_instance(k: int) -> ConfigBoundResult:
    if k < 8 or k % 8:
        raise BadK("k must be a positive multiple of 8")
    m = k // 4
    d, g = 1, 3
    pattern = (0, d, d + g, 2 * d + g)
    width = pattern[-1]
    offsets = _sidon_offsets(m, width)
    blocks = [tuple(o + p for p in pattern) for o in offsets]
    A = NumberSet.from_ints(x for blk in blocks for x in blk)
    achieved = len(difference_counts(A.ints))
    predicted = (9 * k * k - 36 * k + 128) // 32
    intra = {b - a for a, b in combinations(pattern, 2)}
    cross_ok = True
    cross_sizes = []
    for (i, P), (j, Q) in combinations(enumerate(blocks), 2):
        cross = {q - p for p in P for q in Q}
        cross_sizes.append(len(cross))
        gap = Q[0] - P[-1]
        if cross != set(dumbbell_cross_distances(d, g, gap)):
            cross_ok = False
    return ConfigBoundResult(
        "congruent_dumbbells", k, predicted, achieved, A,
        {
            "dumbbells": m,
            "d": d,
            "d_prime": g,
            "intra": len(intra),
            "cross_per_pair": sorted(set(cross_sizes)),
            "cross_matches_pattern": cross_ok,
        },
    )


def congruent_double_dumbbells_instance(k: int) -> ConfigBoundResult:
    """``k/8`` disjoint congruent double dumbbells with generic parameters.

    ``predicted`` is ``31k^2/128 - 31k/16 + 8``; ``details`` carries the
    brute-force intra / cross split so a mismatch can be reported.
    """
    if k < 16 or k % 16:
        raise BadK("k must be a positive multiple of 16")
    m = k // 8
    d, g, h = 1, 3, 10
    first = (0, d, d + g, 2 * d + g)
    shift = 2 * d + g + h
    pattern = first + tuple(x + shift for x in first)
    width = pattern[-1]
    offsets = _sidon_offsets(m, width)
    blocks = [tuple(o + p for p in pattern) for o in offsets]
    A = NumberSet.from_ints(x for blk in blocks for x in blk)
    achieved = len(difference_counts(A.ints))
    predicted = (31 * k * k - 248 * k + 1024) // 128
    intra = len({b - a for a, b in combinations(pattern, 2)})
    cross = sorted({len({q - p for p in P for q in Q}) for P, Q in combinations(blocks, 2)})
    return ConfigBoundResult(
        "congruent_double_dumbbells", k, predicted, achieved, A,
        {
            "double_dumbbells": m,
            "d": d,
            "d_prime": g,
            "d_second": h,
            "intra": intra,
            "cross_per_pair": cross,
            "model_count": intra + (cross[0] if cross else 0) * math.comb(m, 2),
        },
    )


# ---------------------------------------------------------------------------
# Arithmetic progressions and small doubling
# ---------------------------------------------------------------------------


def find_k_ap(A: NumberSet, k: int) -> Optional[tuple[Fraction, ...]]:
    """First k-term AP in ``A`` by (start, step), or None."""
    if k < 3:
        raise BadK("k must be >= 3")
    ints = A.ints
    members = set(ints)
    top = ints[-1]
    for i, a in enumerate(ints):
        for b in ints[i + 1 :]:
            step = b - a
            if a + (k - 1) * step > top:
                break
            if all(a + j * step in members for j in range(2, k)):
                return tuple(A.to_fraction(a + j * step) for j in range(k))
    return None


@dataclass
class SmallDoublingScan:
    k: int
    bound: int
    mode: str
    witnesses: list[tuple[Fraction, ...]]
    exhaustive: bool
    checked: int
    min_count: Optional[int] = None

    def __iter__(self):
        return iter(self.witnesses)

    def __len__(self) -> int:
        return len(self.witnesses)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "bound": self.bound,
            "mode": self.mode,
            "witnesses": [[str(x) for x in w] for w in self.witnesses],
            "exhaustive": self.exhaustive,
            "certificate": "exhaustive" if self.exhaustive else "sampled (not a certificate)",
            "checked": self.checked,
            "min_count": self.min_count,
        }


def small_doubling_subsets(
    A: NumberSet,
    k: int,
    bound: int,
    mode: str = "diff",
    budget: int = DEFAULT_BUDGET,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> SmallDoublingScan:
    """k-subsets ``B`` with ``|B - B| <= bound`` (mode ``diff``) or ``|B + B| <= bound`` (``sum``).

    All of them when ``C(|A|, k) <= budget``, otherwise those found among
    ``samples`` random k-subsets.
    """
    n = len(A)
    if not 1 <= k <= n:
        raise BadK(f"need 1 <= k <= |A| (k={k}, |A|={n})")
    if mode not in ("diff", "sum"):
        raise ValueError(f"unknown mode {mode!r}")
    exhaustive = math.comb(n, k) <= budget
    if exhaustive:
        chunks = combination_chunks(n, k)
    else:
        chunks = random_row_chunks(np.random.default_rng(seed), n, k, samples)
    found: dict[tuple[int, ...], None] = {}
    checked = 0
    lowest = None
    for rows in chunks:
        counts = subset_counts(A.ints, rows, mode)
        checked += len(rows)
        if len(counts):
            c = int(counts.min())
            lowest = c if lowest is None else min(lowest, c)
        for j in np.flatnonzero(counts <= bound).tolist():
            found.setdefault(tuple(rows[j].tolist()), None)
    witnesses = [tuple(A.to_fraction(A.ints[i]) for i in r) for r in found]
    return SmallDoublingScan(k, bound, mode, witnesses, exhaustive, checked, lowest)
