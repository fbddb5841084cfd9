"""Set constructions with predictable difference-set sizes.

Arithmetic progressions, projected cubes, generalized arithmetic
progressions, the b-ary cube, the random construction avoiding small
doubling, and extraction of translated cube copies from an arbitrary set.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .errors import BadLength, BadParameters, InsufficientSurvivors, InvariantViolation
from .setcore import NumberSet, difference_counts, make_set


def arithmetic_progression(n: int, start=0, step=1) -> NumberSet:
    if n < 2:
        raise BadLength("an arithmetic progression needs n >= 2")
    start, step = Fraction(start), Fraction(step)
    if step <= 0:
        raise BadParameters("step must be positive")
    return make_set(start + j * step for j in range(n))


# ---------------------------------------------------------------------------
# Projected cubes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectedCubeSpec:
    base: Fraction
    deltas: tuple[Fraction, ...]
    generic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        object.__setattr__(self, "deltas", tuple(Fraction(x) for x in self.deltas))
        if not self.deltas:
            raise BadParameters("a projected cube needs at least one delta")
        if any(x <= 0 for x in self.deltas):
            raise BadParameters("deltas must be positive")

    @classmethod
    def standard(cls, i: int, base=0) -> "ProjectedCubeSpec":
        """Deltas ``1, 3, 9, ...``: every signed 0/1 combination is distinct."""
        if i < 1:
            raise BadParameters("dimension must be >= 1")
        return cls(Fraction(base), tuple(Fraction(3**j) for j in range(i)), generic=True)

    @property
    def dimension(self) -> int:
        return len(self.deltas)


def projected_cube(spec: ProjectedCubeSpec) -> NumberSet:
    """All sums ``base + sum x_j delta_j`` with ``x_j`` in {0, 1}, coincidences merged."""
    sums = {spec.base}
    for delta in spec.deltas:
        sums |= {s + delta for s in sums}
    A = make_set(sums)
    if spec.generic:
        i = spec.dimension
        if len(A) != 2**i:
            raise InvariantViolation(f"generic cube has {len(A)} points, expected {2**i}")
    return A


def cube_difference_bound(i: int) -> int:
    return (3**i - 1) // 2


# ---------------------------------------------------------------------------
# Generalized arithmetic progressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GAPSpec:
    base: Fraction
    steps: tuple[Fraction, ...]
    lengths: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        object.__setattr__(self, "steps", tuple(Fraction(x) for x in self.steps))
        object.__setattr__(self, "lengths", tuple(int(x) for x in self.lengths))
        if not self.steps or len(self.steps) != len(self.lengths):
            raise BadParameters("steps and lengths must be nonempty and of equal length")
        if any(x < 1 for x in self.lengths):
            raise BadParameters("every length must be >= 1")

    @property
    def dimension(self) -> int:
        return len(self.steps)

    @property
    def nominal_size(self) -> int:
        return math.prod(self.lengths)


def generalized_ap(spec: GAPSpec) -> tuple[NumberSet, bool]:
    """Generated set and whether the progression is proper (no coincidences)."""
    values = {
        spec.base + sum(k * b for k, b in zip(ks, spec.steps))
        for ks in product(*(range(m) for m in spec.lengths))
    }
    A = make_set(values)
    return A, len(A) == spec.nominal_size


# ---------------------------------------------------------------------------
# b-ary cube
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BaryCubeSpec:
    b: int
    i: int

    def __post_init__(self):
        if self.b < 2 or self.i < 1:
            raise BadParameters("b-ary cube needs b >= 2 and i >= 1")


def bary_levels(spec: BaryCubeSpec) -> list[tuple[tuple[int, ...], int]]:
    """``(A_j, s_j)`` for ``j = 1..i`` (``s_1`` is reported as 0)."""
    b = spec.b
    A = tuple(range(1, b + 1))
    levels = [(A, 0)]
    for _ in range(2, spec.i + 1):
        s = 4 * b * (A[-1] - A[0])
        A = tuple(sorted(t * s + a for t in range(b) for a in A))
        levels.append((A, s))
    return levels


def bary_cube(spec: BaryCubeSpec) -> NumberSet:
    """``A_1 = {1..b}``, ``A_j = s_j * {0..b-1} + A_{j-1}`` with ``s_j = 4b max(A_{j-1} - A_{j-1})``."""
    A_ints, _ = bary_levels(spec)[-1]
    A = NumberSet.from_ints(A_ints)
    b, i = spec.b, spec.i
    if len(A) != b**i:
        raise InvariantViolation(f"|A_i| = {len(A)}, expected {b**i}")
    expected = ((2 * b - 1) ** i - 1) // 2
    got = len(difference_counts(A.ints))
    if got != expected:
        raise InvariantViolation(f"|A_i - A_i| = {got}, expected {expected}")
    return A


def bary_difference_count(b: int, i: int) -> int:
    return ((2 * b - 1) ** i - 1) // 2


# ---------------------------------------------------------------------------
# Random construction without small-doubling k-subsets
# ---------------------------------------------------------------------------

EXACT_DETECTION_LIMIT = 10**7


def _iroot_floor(x: int, k: int) -> int:
    if x < 2:
        return x
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * r + x // r ** (k - 1)) // k
        if y >= r:
            return r
        r = y


def _iroot_ceil(x: int, k: int) -> int:
    """Smallest integer ``r`` with ``r**k >= x``."""
    r = _iroot_floor(x, k)
    return r if r**k >= x else r + 1


@dataclass
class ProbeConfig:
    n: int
    k: int
    c: int = 2
    N: Optional[int] = None
    seed: int = 0
    repair_mode: str = "exact"
    samples: int = 100_000
    strict: bool = True
    exact_limit: int = EXACT_DETECTION_LIMIT

    @property
    def exponent(self) -> Fraction:
        """``(c^2 + 1) / k``"""
        return Fraction(self.c * self.c + 1, self.k)

    def resolved_N(self) -> int:
        if self.N is not None:
            return self.N
        # smallest multiple of n from 8n up whose selection probability is <= 1/2,
        # i.e. 6^k <= N^(c^2+1)
        e = self.c * self.c + 1
        N = 8 * self.n
        while 6**self.k > N**e:
            N += self.n
        return N

    def universe_size(self) -> int:
        """``ceil(N^(1 + (c^2+1)/k))``, computed exactly."""
        N = self.resolved_N()
        return _iroot_ceil(N ** (self.k + self.c * self.c + 1), self.k)

    def probability(self) -> float:
        return 3.0 * float(self.resolved_N()) ** (-(self.c * self.c + 1) / self.k)


@dataclass
class RepairLog:
    deleted_count: int
    detection_mode: str
    samples: int
    certificate: str
    rounds: int
    N: int
    universe: int
    p: float
    survivors: int
    strict: bool
    guarantee_void: bool
    seed: int
    deleted: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "deleted_count": self.deleted_count,
            "detection_mode": self.detection_mode,
            "samples": self.samples,
            "certificate": self.certificate,
            "rounds": self.rounds,
            "N": self.N,
            "universe": self.universe,
            "p": self.p,
            "survivors": self.survivors,
            "strict": self.strict,
            "guarantee_void": self.guarantee_void,
            "seed": self.seed,
            "deleted": self.deleted,
        }


def _validate_probe(cfg: ProbeConfig) -> None:
    if cfg.c < 2:
        raise BadParameters("c must be >= 2")
    if cfg.k < 2 or cfg.n < cfg.k:
        raise BadParameters("need 2 <= k <= n")
    if cfg.strict and cfg.k <= (cfg.c * cfg.c + 1) ** 2:
        raise BadParameters(f"strict mode needs k > (c^2+1)^2 = {(cfg.c * cfg.c + 1) ** 2}")
    if cfg.repair_mode not in ("exact", "sampled"):
        raise BadParameters(f"unknown repair mode {cfg.repair_mode!r}")
    N = cfg.resolved_N()
    # p = 3 N^{-(c^2+1)/k} < 1  <=>  3^k < N^(c^2+1)
    if N < 1 or 3**cfg.k >= N ** (cfg.c * cfg.c + 1):
        raise BadParameters(f"selection probability 3*N^(-(c^2+1)/k) is not below 1 for N={N}")


def probabilistic_construction(cfg: ProbeConfig) -> tuple[NumberSet, RepairLog]:
    """An ``n``-set in ``{1..ceil(N^(1+(c^2+1)/k))}`` with no detected small-doubling k-subset.

    Each integer of the universe is kept independently with probability
    ``3 N^(-(c^2+1)/k)``.  A random ``n`` of the survivors are taken; any
    k-subset ``B`` with ``|B - B| <= c k`` that detection finds loses one
    element, which is replaced from the unused survivors, until a scan comes
    back clean.  Detection is exhaustive when there are at most
    ``exact_limit`` k-subsets and ``repair_mode == "exact"``; otherwise it is
    sampled and the log says so.
    """
    from .verify import small_doubling_subsets

    _validate_probe(cfg)
    N = cfg.resolved_N()
    universe = cfg.universe_size()
    p = cfg.probability()
    rng = np.random.default_rng(cfg.seed)
    keep = rng.random(universe) < p
    survivors = (np.flatnonzero(keep) + 1).tolist()
    if len(survivors) < cfg.n:
        raise InsufficientSurvivors(f"{len(survivors)} survivors, need {cfg.n}")
    order = rng.permutation(len(survivors)).tolist()
    current = sorted(survivors[j] for j in order[: cfg.n])
    reserve = [survivors[j] for j in order[cfg.n :]]

    bound = cfg.c * cfg.k
    exhaustive_ok = cfg.repair_mode == "exact" and math.comb(cfg.n, cfg.k) <= cfg.exact_limit
    budget = cfg.exact_limit if exhaustive_ok else 0
    deleted: list[int] = []
    rounds = 0
    while True:
        rounds += 1
        A = NumberSet.from_ints(current)
        scan = small_doubling_subsets(
            A, cfg.k, bound, mode="diff", budget=budget, samples=cfg.samples,
            seed=cfg.seed + rounds,
        )
        if not scan.witnesses:
            break
        alive = set(current)
        for w in scan.witnesses:
            raw = [A.to_raw(x) for x in w]
            if alive.issuperset(raw):
                victim = max(raw)
                alive.discard(victim)
                deleted.append(victim)
        while len(alive) < cfg.n:
            if not reserve:
                raise InsufficientSurvivors("survivor pool exhausted during repair")
            alive.add(reserve.pop())
        current = sorted(alive)

    mode = "exhaustive" if scan.exhaustive else "sampled"
    log = RepairLog(
        deleted_count=len(deleted),
        detection_mode=mode,
        samples=0 if scan.exhaustive else cfg.samples,
        certificate="exhaustive" if scan.exhaustive else "sampled (not a certificate)",
        rounds=rounds,
        N=N,
        universe=universe,
        p=p,
        survivors=len(survivors),
        strict=cfg.strict,
        guarantee_void=not cfg.strict or cfg.k <= (cfg.c * cfg.c + 1) ** 2,
        seed=cfg.seed,
        deleted=deleted,
    )
    return NumberSet.from_ints(current), log


# ---------------------------------------------------------------------------
# Extracting translated cube copies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtractionConstants:
    # minimum number of candidate pairs for the chosen difference
    popularity_threshold: int = 1
    # greedy matching on a max-degree-2 graph keeps at least 1/discard_factor of the edges
    discard_factor: int = 3


@dataclass
class CubeLevel:
    level: int
    difference: Fraction
    pair_type: str
    translation: Fraction
    pattern: tuple[Fraction, ...]
    copies: list[tuple[Fraction, ...]]
    candidate_pairs: int
    matching_bound_ok: bool

    @property
    def count(self) -> int:
        return len(self.copies)


@dataclass
class CubeExtraction:
    success: bool
    target_i: int
    levels: list[CubeLevel]
    failed_level: Optional[int] = None
    achieved_count: int = 0

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "target_i": self.target_i,
            "failed_level": self.failed_level,
            "achieved_count": self.achieved_count,
            "levels": [
                {
                    "level": lv.level,
                    "difference": str(lv.difference),
                    "pair_type": lv.pair_type,
                    "translation": str(lv.translation),
                    "pattern": [str(x) for x in lv.pattern],
                    "count": lv.count,
                    "candidate_pairs": lv.candidate_pairs,
                    "matching_bound_ok": lv.matching_bound_ok,
                }
                for lv in self.levels
            ],
        }


_TYPE_ORDER = ("left-left", "right-right", "left-right", "right-left")


def _greedy_pairs(edges: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    used: set[int] = set()
    out = []
    for a, b in edges:
        if a not in used and b not in used:
            out.append((a, b))
            used.add(a)
            used.add(b)
    return out


def _check_copies(copies, pattern) -> None:
    seen: set[int] = set()
    for cp in copies:
        lo = cp[0]
        if tuple(x - lo for x in cp) != pattern:
            raise InvariantViolation(f"copy {cp} is not a translate of {pattern}")
        if not seen.isdisjoint(cp):
            raise InvariantViolation("extracted copies overlap")
        seen.update(cp)


def find_projected_cube(
    A: NumberSet, target_i: int, constants: ExtractionConstants = ExtractionConstants()
) -> CubeExtraction:
    """Grow disjoint translated copies of a projected cube, one dimension at a time.

    Level 1 matches pairs at the most popular difference.  At each later
    level the endpoints of the current copies are compared across copies;
    the most popular endpoint difference (ties to the smallest) and its most
    frequent endpoint type fix a translation ``t``, and copies ``C, C + t``
    are greedily matched and merged into copies of the next cube.
    """
    if target_i < 1:
        raise BadParameters("target_i must be >= 1")
    ints = A.ints
    s = A.scale
    q = lambda x: Fraction(x, s)  # noqa: E731
    levels: list[CubeLevel] = []

    rminus = difference_counts(ints) if len(ints) >= 2 else {}
    if not rminus or max(rminus.values()) < constants.popularity_threshold:
        return CubeExtraction(False, target_i, levels, failed_level=1, achieved_count=0)
    top = max(rminus.values())
    d1 = min(d for d, c in rminus.items() if c == top)
    members = set(ints)
    edges = [(x, x + d1) for x in ints if x + d1 in members]
    matched = _greedy_pairs(edges)
    copies = [tuple(e) for e in matched]
    pattern = (0, d1)
    _check_copies(copies, pattern)
    levels.append(
        CubeLevel(1, q(d1), "pair", q(d1), tuple(map(q, pattern)), [tuple(map(q, c)) for c in copies],
                  len(edges), constants.discard_factor * len(copies) >= len(edges))
    )

    for level in range(2, target_i + 1):
        if len(copies) < 2:
            return CubeExtraction(False, target_i, levels, failed_level=level, achieved_count=len(copies))
        w = pattern[-1]
        copies.sort()
        lefts = [c[0] for c in copies]
        by_d: Counter = Counter()
        by_type: Counter = Counter()
        for a in range(len(lefts)):
            for b in range(a + 1, len(lefts)):
                t = lefts[b] - lefts[a]
                for kind, d in (
                    ("left-left", t),
                    ("right-right", t),
                    ("left-right", t - w),
                    ("right-left", t + w),
                ):
                    if d > 0:
                        by_d[d] += 1
                        by_type[(d, kind)] += 1
        best = max(by_d.values())
        d_star = min(d for d, c in by_d.items() if c == best)
        kind = max(_TYPE_ORDER, key=lambda kd: (by_type.get((d_star, kd), 0), -_TYPE_ORDER.index(kd)))
        t = {"left-left": d_star, "right-right": d_star, "left-right": d_star + w, "right-left": d_star - w}[kind]
        index_of = {lo: j for j, lo in enumerate(lefts)}
        cand = [(j, index_of[lo + t]) for j, lo in enumerate(lefts) if lo + t in index_of]
        if len(cand) < constants.popularity_threshold:
            return CubeExtraction(False, target_i, levels, failed_level=level, achieved_count=0)
        matched = _greedy_pairs(cand)
        copies = [tuple(sorted(copies[a] + copies[b])) for a, b in matched]
        pattern = tuple(sorted(pattern + tuple(x + t for x in pattern)))
        if len(set(pattern)) != len(pattern):
            raise InvariantViolation("merged cube pattern has coincident points")
        _check_copies(copies, pattern)
        levels.append(
            CubeLevel(level, q(d_star), kind, q(t), tuple(map(q, pattern)),
                      [tuple(map(q, c)) for c in copies], len(cand),
                      constants.discard_factor * len(copies) >= len(cand))
        )
    return CubeExtraction(True, target_i, levels, achieved_count=len(copies))
