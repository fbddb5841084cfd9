"""Vectorised scans over k-subsets of a small set.

Each subset is a sorted row of indices into the parent set.  For every row
the kernel returns ``|B - B|`` (positive differences) or ``|B + B|``.
"""

from __future__ import annotations

from itertools import combinations, islice

import numpy as np

CHUNK_ROWS = 20_000
_INT64_SAFE = 2**61


def _numpy_ok(ints) -> bool:
    return max(abs(ints[0]), abs(ints[-1])) < _INT64_SAFE


def _row_distinct(vals: np.ndarray) -> np.ndarray:
    vals = np.sort(vals, axis=1)
    return 1 + np.count_nonzero(np.diff(vals, axis=1), axis=1)


def subset_counts(ints, rows: np.ndarray, mode: str = "diff") -> np.ndarray:
    """Distinct difference (or sum) counts for each index row of ``rows``."""
    rows = np.asarray(rows)
    m, k = rows.shape
    if not _numpy_ok(ints):
        return np.array([_py_count([ints[i] for i in r], mode) for r in rows.tolist()])
    arr = np.asarray(ints, dtype=np.int64)
    if mode == "diff":
        if k < 2:
            return np.zeros(m, dtype=np.int64)
        iu, ju = np.triu_indices(k, k=1)
        pts = arr[rows]
        vals = pts[:, ju] - pts[:, iu]
    elif mode == "sum":
        iu, ju = np.triu_indices(k, k=0)
        pts = arr[rows]
        vals = pts[:, ju] + pts[:, iu]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return _row_distinct(vals)


def _py_count(pts, mode):
    if mode == "diff":
        return len({b - a for a, b in combinations(sorted(pts), 2)})
    return len({a + b for i, a in enumerate(pts) for b in pts[i:]})


def combination_chunks(n: int, k: int, chunk: int = CHUNK_ROWS):
    it = combinations(range(n), k)
    while True:
        block = list(islice(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64)


def random_rows(rng: np.random.Generator, n: int, k: int, m: int) -> np.ndarray:
    """``m`` uniformly random k-subsets of ``range(n)`` as sorted rows."""
    keys = rng.random((m, n))
    rows = np.argpartition(keys, k - 1, axis=1)[:, :k] if k < n else np.tile(np.arange(n), (m, 1))
    return np.sort(rows, axis=1)


def random_row_chunks(rng, n, k, total, chunk=CHUNK_ROWS):
    done = 0
    while done < total:
        m = min(chunk, total - done)
        yield random_rows(rng, n, k, m)
        done += m
