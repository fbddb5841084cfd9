"""Exact finite point sets on the line and their difference / sum profiles.

Every set is stored in integer form: a tuple of strictly increasing integers
together with a positive ``scale`` such that the actual points are
``ints[i] / scale``.  All downstream arithmetic runs on the integers.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import DuplicateValue, EmptyInput, TooSmall

Rational = Union[int, Fraction]

_VALUE_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
# numpy fast path is only taken when every pairwise sum fits in int64
_INT64_SAFE = 2**62


def _as_fraction(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_value(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}: {value!r}")


@dataclass(frozen=True)
class NumberSet:
    """A finite set of distinct rationals, kept sorted and in integer form.

    ``ints`` are the points multiplied by ``scale``.  The pair is canonical:
    ``scale`` is the least common denominator of the points, so two equal
    sets always compare equal field by field.
    """

    ints: tuple[int, ...]
    scale: int = 1

    def __post_init__(self):
        if not self.ints:
            raise EmptyInput("a NumberSet needs at least one point")
        if self.scale < 1:
            raise ValueError("scale must be a positive integer")
        for a, b in zip(self.ints, self.ints[1:]):
            if a >= b:
                raise ValueError("ints must be strictly increasing")

    @classmethod
    def from_ints(cls, values: Iterable[int], scale: int = 1) -> "NumberSet":
        """Build from integer coordinates (points are ``values / scale``)."""
        vals = [int(v) for v in values]
        if not vals:
            raise EmptyInput("no values given")
        _reject_duplicates(vals, scale)
        vals.sort()
        g = math.gcd(scale, reduce(math.gcd, vals, 0))
        if g > 1:
            vals = [v // g for v in vals]
            scale //= g
        return cls(tuple(vals), scale)

    @property
    def points(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self.scale) for v in self.ints)

    def __len__(self) -> int:
        return len(self.ints)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, value) -> bool:
        q = _as_fraction(value) * self.scale
        if q.denominator != 1:
            return False
        return int(q) in self._lookup

    @property
    def _lookup(self) -> frozenset:
        # cached on first use; frozen dataclass so bypass __setattr__
        try:
            return self.__dict__["_lookup_cache"]
        except KeyError:
            s = frozenset(self.ints)
            object.__setattr__(self, "_lookup_cache", s)
            return s

    def to_fraction(self, raw: int) -> Fraction:
        """Convert an integer-unit quantity of this set back to a rational."""
        return Fraction(raw, self.scale)

    def to_raw(self, value) -> int:
        """Convert a rational in this set's units to integer form (must be exact)."""
        q = _as_fraction(value) * self.scale
        if q.denominator != 1:
            raise ValueError(f"{value} is not representable at scale {self.scale}")
        return int(q)

    def subset(self, indices: Iterable[int]) -> "NumberSet":
        return NumberSet.from_ints((self.ints[i] for i in indices), self.scale)

    def with_ints(self, values: Iterable[int]) -> "NumberSet":
        """A new set on the same scale (e.g. a subset or a translate)."""
        return NumberSet.from_ints(values, self.scale)

    def max_gap_int(self) -> int:
        return self.ints[-1] - self.ints[0]

    def __repr__(self) -> str:
        body = ", ".join(format_value(p) for p in self.points)
        return f"NumberSet{{{body}}}"


def _reject_duplicates(vals, scale=1):
    seen = set()
    for v in vals:
        if v in seen:
            raise DuplicateValue(format_value(Fraction(v, scale)))
        seen.add(v)


def make_set(values: Iterable) -> NumberSet:
    """Canonical set from exact rationals (ints, Fractions or ``"p/q"`` strings).

    Duplicates raise :class:`DuplicateValue` instead of being merged.
    """
    fracs = [_as_fraction(v) for v in values]
    if not fracs:
        raise EmptyInput("no values given")
    seen = set()
    for q in fracs:
        if q in seen:
            raise DuplicateValue(format_value(q))
        seen.add(q)
    scale = reduce(math.lcm, (q.denominator for q in fracs), 1)
    return NumberSet.from_ints((int(q * scale) for q in fracs), scale)


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiffProfile:
    """Representation counts of the positive differences of a set.

    ``counts`` maps a positive difference in integer units to the number of
    pairs ``a > a'`` realising it.
    """

    counts: Mapping[int, int]
    scale: int = 1

    @property
    def entries(self) -> dict[Fraction, int]:
        return {Fraction(d, self.scale): c for d, c in sorted(self.counts.items())}

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def size(self) -> int:
        """``|A - A|``"""
        return len(self.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def count(self, d) -> int:
        q = _as_fraction(d) * self.scale
        if q.denominator != 1:
            return 0
        return self.counts.get(int(q), 0)

    def max_count(self) -> int:
        return max(self.counts.values(), default=0)


@dataclass(frozen=True)
class SumProfile:
    """Counts of ordered pairs ``(a, a')`` by their sum ``a + a'``."""

    counts: Mapping[int, int]
    scale: int = 1

    @property
    def entries(self) -> dict[Fraction, int]:
        return {Fraction(s, self.scale): c for s, c in sorted(self.counts.items())}

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def size(self) -> int:
        return len(self.counts)

    def __len__(self) -> int:
        return len(self.counts)


def _fits_int64(ints) -> bool:
    return max(abs(ints[0]), abs(ints[-1])) < _INT64_SAFE // 2


def difference_counts(ints: tuple[int, ...]) -> dict[int, int]:
    """Positive-difference counts of a sorted integer tuple."""
    n = len(ints)
    if n >= 64 and _fits_int64(ints):
        arr = np.asarray(ints, dtype=np.int64)
        iu, ju = np.triu_indices(n, k=1)
        vals, cnt = np.unique(arr[ju] - arr[iu], return_counts=True)
        return dict(zip(vals.tolist(), cnt.tolist()))
    return dict(Counter(b - a for a, b in combinations(ints, 2)))


def distinct_difference_count(ints) -> int:
    """``|A - A|`` for an integer sequence (need not be sorted)."""
    return len({abs(b - a) for a, b in combinations(ints, 2)})


def difference_set(A: NumberSet) -> DiffProfile:
    if len(A) < 2:
        raise TooSmall("difference_set needs at least 2 points")
    return DiffProfile(difference_counts(A.ints), A.scale)


def sum_set(A: NumberSet) -> SumProfile:
    ints = A.ints
    counts: Counter = Counter(2 * a for a in ints)
    for a, b in combinations(ints, 2):
        counts[a + b] += 2
    return SumProfile(dict(counts), A.scale)


def affine_normalize(A: NumberSet) -> NumberSet:
    """Translate to ``min = 0`` and divide out the gcd of the gaps."""
    if len(A) < 2:
        raise TooSmall("affine_normalize needs at least 2 points")
    lo = A.ints[0]
    shifted = [v - lo for v in A.ints]
    g = reduce(math.gcd, shifted, 0)
    return NumberSet(tuple(v // g for v in shifted), 1)


def is_arithmetic_progression(A: NumberSet) -> bool:
    gaps = {b - a for a, b in zip(A.ints, A.ints[1:])}
    return len(gaps) <= 1


# ---------------------------------------------------------------------------
# Set file format
# ---------------------------------------------------------------------------


def parse_value(text: str) -> Fraction:
    s = text.strip()
    if not _VALUE_RE.match(s):
        raise ValueError(f"not an integer or p/q rational: {text!r}")
    q = Fraction(s)
    return q


def format_value(q) -> str:
    return str(Fraction(q))


def parse_set_text(text: str) -> NumberSet:
    """Parse either the line format or the JSON form of a set file.

    The JSON form is an array of integers / ``"p/q"`` strings, or an object
    carrying such an array under ``"set"`` (as written by report emitters).
    """
    stripped = text.lstrip()
    if stripped.startswith("[") or stripped.startswith("{"):
        data = json.loads(text)
        if isinstance(data, dict):
            data = data["set"]
        if not isinstance(data, list):
            raise ValueError("JSON set file must be an array")
        values = []
        for item in data:
            if isinstance(item, bool) or not isinstance(item, (int, str)):
                raise ValueError(f"bad JSON set element: {item!r}")
            values.append(Fraction(item) if isinstance(item, int) else parse_value(item))
        return make_set(values)
    values = []
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        values.append(parse_value(s))
    return make_set(values)


def format_set_text(A: NumberSet, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines.extend(format_value(p) for p in A.points)
    return "\n".join(lines) + "\n"


def set_to_json_list(A: NumberSet) -> list:
    out = []
    for p in A.points:
        out.append(int(p) if p.denominator == 1 else format_value(p))
    return out


def format_set_json(A: NumberSet) -> str:
    return json.dumps(set_to_json_list(A))


def read_set(path) -> NumberSet:
    return parse_set_text(Path(path).read_text(encoding="utf-8"))


def write_set(A: NumberSet, path, fmt: str = "text", header: Iterable[str] = ()) -> None:
    if fmt == "json":
        text = format_set_json(A) + "\n"
    else:
        text = format_set_text(A, header)
    Path(path).write_text(text, encoding="utf-8")
