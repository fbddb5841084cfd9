"""Dumbbells, double dumbbells and the energies built on them.

A dumbbell is a quadruple ``a1 < a2 < a3 < a4`` of the set with equal outer
arms ``a2 - a1 = a4 - a3 = d``; its congruence class is ``(d, d')`` with
``d' = a3 - a2``.  A dumbbell is determined by its class and ``a1``.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .errors import InvalidMoment, NoDumbbells, TooLarge, TooSmall, UnknownClass
from .setcore import NumberSet, difference_counts

BRUTEFORCE_MAX_POINTS = 8
BRUTEFORCE_MAX_MOMENT = 2


@dataclass(frozen=True, order=True)
class DumbbellClass:
    d: Fraction
    d_prime: Fraction

    def __post_init__(self):
        object.__setattr__(self, "d", Fraction(self.d))
        object.__setattr__(self, "d_prime", Fraction(self.d_prime))
        if self.d <= 0 or self.d_prime <= 0:
            raise ValueError("dumbbell class parameters must be positive")

    def pattern(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """The dumbbell of this class with leftmost point 0."""
        d, g = self.d, self.d_prime
        return (Fraction(0), d, d + g, 2 * d + g)


@dataclass(frozen=True, order=True)
class DoubleDumbbellClass:
    d: Fraction
    d_prime: Fraction
    d_second: Fraction

    def __post_init__(self):
        for name in ("d", "d_prime", "d_second"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if min(self.d, self.d_prime, self.d_second) <= 0:
            raise ValueError("double dumbbell class parameters must be positive")

    def pattern(self) -> tuple[Fraction, ...]:
        d, g, h = self.d, self.d_prime, self.d_second
        first = (Fraction(0), d, d + g, 2 * d + g)
        shift = 2 * d + g + h
        return first + tuple(x + shift for x in first)


@dataclass
class DumbbellTable:
    """Dumbbells of a set bucketed by congruence class.

    ``raw`` maps ``(d, d')`` in the set's integer units to the ascending list
    of leftmost points (also integer units).
    """

    raw: dict[tuple[int, int], list[int]]
    scale: int = 1
    n_points: int = 0

    def _key(self, cls: DumbbellClass) -> tuple[int, int]:
        d = cls.d * self.scale
        g = cls.d_prime * self.scale
        if d.denominator != 1 or g.denominator != 1:
            raise UnknownClass(cls)
        return int(d), int(g)

    def _cls(self, key: tuple[int, int]) -> DumbbellClass:
        return DumbbellClass(Fraction(key[0], self.scale), Fraction(key[1], self.scale))

    @property
    def classes(self) -> dict[DumbbellClass, tuple[int, list[Fraction]]]:
        out = {}
        for key in sorted(self.raw):
            wit = self.raw[key]
            out[self._cls(key)] = (len(wit), [Fraction(x, self.scale) for x in wit])
        return out

    def __contains__(self, cls: DumbbellClass) -> bool:
        try:
            return self._key(cls) in self.raw
        except UnknownClass:
            return False

    def count(self, cls: DumbbellClass) -> int:
        try:
            return len(self.raw.get(self._key(cls), ()))
        except UnknownClass:
            return 0

    def witnesses(self, cls: DumbbellClass) -> list[Fraction]:
        key = self._key(cls)
        if key not in self.raw:
            raise UnknownClass(cls)
        return [Fraction(x, self.scale) for x in self.raw[key]]

    def dumbbells(self, cls: DumbbellClass) -> list[tuple[Fraction, ...]]:
        pat = cls.pattern()
        return [tuple(a + p for p in pat) for a in self.witnesses(cls)]

    @property
    def total(self) -> int:
        return sum(len(w) for w in self.raw.values())

    @property
    def num_classes(self) -> int:
        return len(self.raw)

    def class_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(len(w) for w in self.raw.values()).items()))


def _dumbbells_raw(ints: tuple[int, ...]) -> dict[tuple[int, int], list[int]]:
    lefts: dict[int, list[int]] = defaultdict(list)
    for a, b in combinations(ints, 2):
        lefts[b - a].append(a)
    raw: dict[tuple[int, int], list[int]] = defaultdict(list)
    for d in sorted(lefts):
        L = lefts[d]
        if len(L) < 2:
            continue
        L.sort()
        for i, x in enumerate(L):
            # the second arm has to start strictly after the first one ends
            j = bisect_right(L, x + d, i + 1)
            for y in L[j:]:
                raw[(d, y - x - d)].append(x)
    for w in raw.values():
        w.sort()
    return dict(raw)


def enumerate_dumbbells(A: NumberSet) -> DumbbellTable:
    if len(A) < 4:
        raise TooSmall("a dumbbell needs 4 points")
    return DumbbellTable(_dumbbells_raw(A.ints), A.scale, len(A))


def _double_raw(table: DumbbellTable) -> dict[tuple[int, int, int], int]:
    out: dict[tuple[int, int, int], int] = {}
    for (d, g), W in table.raw.items():
        if len(W) < 2:
            continue
        width = 2 * d + g
        for i, x in enumerate(W):
            j = bisect_right(W, x + width, i + 1)
            for y in W[j:]:
                key = (d, g, y - x - width)
                out[key] = out.get(key, 0) + 1
    return out


def enumerate_double_dumbbells(A: NumberSet) -> dict[DoubleDumbbellClass, int]:
    """Double dumbbells bucketed by ``(d, d', a5 - a4)``.

    A double dumbbell is two congruent dumbbells, the second starting
    strictly to the right of the first one's last point.
    """
    if len(A) < 8:
        raise TooSmall("a double dumbbell needs 8 points")
    table = enumerate_dumbbells(A)
    s = A.scale
    return {
        DoubleDumbbellClass(Fraction(d, s), Fraction(g, s), Fraction(h, s)): c
        for (d, g, h), c in sorted(_double_raw(table).items())
    }


def _falling(r: int, ell: int) -> int:
    return math.perm(r, ell) if r >= ell else 0


def signed_difference_counts(ints) -> dict[int, int]:
    """Ordered-pair counts of every signed difference, including 0."""
    pos = difference_counts(tuple(ints))
    out = {0: len(ints)}
    for d, c in pos.items():
        out[d] = c
        out[-d] = c
    return out


def additive_energy_moment(A: NumberSet, ell: int) -> int:
    """Number of ``2*ell``-tuples with ``a1-a2 = a3-a4 = ... `` (signed, incl. 0)."""
    if ell < 2:
        raise InvalidMoment("additive energy moment needs ell >= 2")
    return sum(c**ell for c in signed_difference_counts(A.ints).values())


def additive_energy_bruteforce(A: NumberSet, ell: int) -> int:
    if len(A) ** (2 * ell) > 10**7:
        raise TooLarge("brute-force additive energy is limited to |A|^(2l) <= 1e7")
    total = 0
    for t in product(A.ints, repeat=2 * ell):
        d0 = t[0] - t[1]
        if all(t[2 * i] - t[2 * i + 1] == d0 for i in range(1, ell)):
            total += 1
    return total


@dataclass
class EnergyReport:
    moment: int
    additive: int
    dumbbell_unordered: int
    dumbbell_ordered: int
    double_dumbbell_unordered: int
    class_histogram: dict[int, int]
    total_dumbbells: int = 0
    num_classes: int = 0
    energy_graph_edges: int = 0

    def to_dict(self) -> dict:
        return {
            "moment": self.moment,
            "additive": self.additive,
            "dumbbell_unordered": self.dumbbell_unordered,
            "dumbbell_ordered": self.dumbbell_ordered,
            "double_dumbbell_unordered": self.double_dumbbell_unordered,
            "class_histogram": {str(k): v for k, v in self.class_histogram.items()},
            "total_dumbbells": self.total_dumbbells,
            "num_classes": self.num_classes,
            "energy_graph_edges": self.energy_graph_edges,
        }


def dumbbell_energy(A: NumberSet, ell: int, include_double: bool = True) -> EnergyReport:
    """Moment-``ell`` dumbbell energy in both its unordered and ordered forms.

    ``energy_graph_edges`` is the edge count of the energy graph, which by
    construction equals the ordered tuple count; the graph itself is never
    built.
    """
    if ell < 1:
        raise InvalidMoment("moment must be >= 1")
    table = enumerate_dumbbells(A)
    counts = [len(w) for w in table.raw.values()]
    unordered = sum(math.comb(r, ell) for r in counts)
    ordered = sum(_falling(r, ell) for r in counts)
    double = 0
    if include_double and len(A) >= 8:
        double = sum(math.comb(r, ell) for r in _double_raw(table).values())
    additive = sum(c**ell for c in signed_difference_counts(A.ints).values())
    return EnergyReport(
        moment=ell,
        additive=additive,
        dumbbell_unordered=unordered,
        dumbbell_ordered=ordered,
        double_dumbbell_unordered=double,
        class_histogram=table.class_histogram(),
        total_dumbbells=sum(counts),
        num_classes=len(counts),
        energy_graph_edges=ordered,
    )


def brute_force_dumbbells(A: NumberSet) -> list[tuple[int, int, int, int]]:
    """All dumbbells of ``A`` (integer units) by scanning ``A^4`` directly."""
    out = []
    for a1, a2, a3, a4 in product(A.ints, repeat=4):
        if a1 < a2 < a3 < a4 and a2 - a1 == a4 - a3:
            out.append((a1, a2, a3, a4))
    return out


def dumbbell_energy_bruteforce(A: NumberSet, ell: int) -> int:
    """Ordered ``ell``-tuples of distinct congruent dumbbells, from the definition.

    Tuples in ``A^(4 ell)`` whose blocks are not all dumbbells contribute
    nothing, so the scan runs over blocks that pass the dumbbell test.
    """
    if ell < 1:
        raise InvalidMoment("moment must be >= 1")
    if len(A) > BRUTEFORCE_MAX_POINTS or ell > BRUTEFORCE_MAX_MOMENT:
        raise TooLarge(
            f"brute force limited to |A| <= {BRUTEFORCE_MAX_POINTS}, ell <= {BRUTEFORCE_MAX_MOMENT}"
        )
    blocks = brute_force_dumbbells(A)

    def shape(q):
        return (q[1] - q[0], q[2] - q[1], q[3] - q[2])

    total = 0
    for tup in product(blocks, repeat=ell):
        if len(set(tup)) != ell:
            continue
        s0 = shape(tup[0])
        if all(shape(q) == s0 for q in tup[1:]):
            total += 1
    return total


@dataclass
class LemmaChainReport:
    s: int
    n: int
    popular_set_size: int
    popular_mass: int
    second_moment: int
    lw_bound: Fraction
    holds_popular_mass: bool
    holds_popular_size: bool
    holds_lw: bool
    vacuous: bool = False
    # sum over arms of C(r(d), 2); equals s only when no representations interleave
    arm_pair_sum: int = 0

    @property
    def all_hold(self) -> bool:
        return self.holds_popular_mass and self.holds_popular_size and self.holds_lw

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "n": self.n,
            "popular_set_size": self.popular_set_size,
            "popular_mass": self.popular_mass,
            "second_moment": self.second_moment,
            "lw_bound_num": self.lw_bound.numerator,
            "lw_bound_den": self.lw_bound.denominator,
            "holds_popular_mass": self.holds_popular_mass,
            "holds_popular_size": self.holds_popular_size,
            "holds_lw": self.holds_lw,
            "vacuous": self.vacuous,
            "arm_pair_sum": self.arm_pair_sum,
        }


def check_lemma_chain(A: NumberSet, allow_empty: bool = False) -> LemmaChainReport:
    """Evaluate the finite inequalities behind the dumbbell lower bound exactly.

    With ``S`` the number of dumbbells, ``C = C(n, 2)`` and ``P`` the
    differences represented at least ``S / (4C)`` times:

    * dumbbells with both arm and gap in ``P`` number at least ``3S/4``;
    * ``|P| <= 4 C^2 / S``;
    * ``sum r^D(d, d')^2 >= 9 S^4 / (256 C^4)``.
    """
    n = len(A)
    if n < 4:
        raise TooSmall("need at least 4 points")
    table = enumerate_dumbbells(A)
    S = table.total
    C = math.comb(n, 2)
    rminus = difference_counts(A.ints)
    arm_pairs = sum(math.comb(r, 2) for r in rminus.values())
    if S == 0:
        if not allow_empty:
            raise NoDumbbells("set spans no dumbbell")
        return LemmaChainReport(0, n, 0, 0, 0, Fraction(0), True, True, True, True, arm_pairs)
    popular = {d for d, r in rminus.items() if 4 * C * r >= S}
    mass = sum(len(w) for (d, g), w in table.raw.items() if d in popular and g in popular)
    second = sum(len(w) ** 2 for w in table.raw.values())
    lw = Fraction(9 * S**4, 256 * C**4)
    return LemmaChainReport(
        s=S,
        n=n,
        popular_set_size=len(popular),
        popular_mass=mass,
        second_moment=second,
        lw_bound=lw,
        holds_popular_mass=4 * mass >= 3 * S,
        holds_popular_size=len(popular) * S <= 4 * C * C,
        holds_lw=second >= lw,
        arm_pair_sum=arm_pairs,
    )


def _disjoint_greedy(witnesses: list[int], pattern: tuple[int, ...]) -> list[int]:
    used: set[int] = set()
    picked = []
    for x in witnesses:
        pts = [x + p for p in pattern]
        if used.isdisjoint(pts):
            picked.append(x)
            used.update(pts)
    return picked


def extract_disjoint_congruent(table: DumbbellTable, cls: DumbbellClass) -> list[tuple[Fraction, ...]]:
    """Greedily pick pairwise point-disjoint dumbbells of one class.

    A dumbbell meets at most 12 others of its class, so at least
    ``ceil(m / 13)`` of the ``m`` dumbbells survive.
    """
    key = table._key(cls)
    if key not in table.raw:
        raise UnknownClass(cls)
    d, g = key
    pattern = (0, d, d + g, 2 * d + g)
    picked = _disjoint_greedy(table.raw[key], pattern)
    s = table.scale
    return [tuple(Fraction(x + p, s) for p in pattern) for x in picked]
