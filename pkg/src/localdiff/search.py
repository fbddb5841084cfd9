"""Exact values of g(n, k, l) over bounded integer spans.

The search enumerates canonical integer sets ``0 = a_1 < ... < a_n <= span``
(gap gcd 1, gap sequence no larger than its reversal), discards a branch as
soon as its newest point closes a k-subset with fewer than ``l`` differences,
and minimises ``|A - A|`` with the bound "current distinct differences plus
one per missing point".  Results are exact over the searched span only.
"""

from __future__ import annotations

import csv
import io
import json
import math
import multiprocessing as mp
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Iterable, Optional

from .constructions import (
    BaryCubeSpec,
    ProjectedCubeSpec,
    arithmetic_progression,
    bary_cube,
    projected_cube,
)
from .errors import BadParameters, InvariantViolation
from .setcore import NumberSet, affine_normalize, difference_counts
from .verify import has_local_property, local_min_diffs, violates_with_newest

CSV_COLUMNS = ["n", "k", "ell", "value", "lower", "upper", "witness", "span", "complete", "nodes", "seconds"]
THREADS_ENV = "LOCALDIFF_THREADS"


def default_span(n: int) -> int:
    return 3 * math.comb(n, 2)


@dataclass
class SearchOutcome:
    n: int
    k: int
    ell: int
    value: Optional[int]
    lower: int
    upper: Optional[int]
    witness: Optional[NumberSet]
    span_searched: int
    complete_within_span: bool
    nodes_expanded: int
    witness_span: Optional[int] = None
    seconds: float = 0.0
    verified: bool = False
    construction_checks: list = field(default_factory=list)

    @property
    def caveat(self) -> str:
        return f"exact over integer sets of span <= {self.span_searched}"

    def to_row(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "ell": self.ell,
            "value": "" if self.value is None else self.value,
            "lower": self.lower,
            "upper": "" if self.upper is None else self.upper,
            "witness": "" if self.witness is None else " ".join(str(x) for x in self.witness.points),
            "span": self.span_searched,
            "complete": str(self.complete_within_span).lower(),
            "nodes": self.nodes_expanded,
            "seconds": f"{self.seconds:.3f}",
        }

    def to_dict(self) -> dict:
        d = self.to_row()
        d["value"] = self.value
        d["upper"] = self.upper
        d["witness"] = None if self.witness is None else [int(x) for x in self.witness.points]
        d["complete"] = self.complete_within_span
        d["seconds"] = round(self.seconds, 3)
        d["witness_span"] = self.witness_span
        d["verified"] = self.verified
        d["caveat"] = self.caveat
        d["construction_checks"] = self.construction_checks
        return d

    @classmethod
    def from_row(cls, row: dict) -> "SearchOutcome":
        wit = row.get("witness") or ""
        witness = NumberSet.from_ints(int(x) for x in wit.split()) if wit else None
        value = int(row["value"]) if str(row["value"]) != "" else None
        upper = int(row["upper"]) if str(row["upper"]) != "" else None
        return cls(
            n=int(row["n"]), k=int(row["k"]), ell=int(row["ell"]), value=value,
            lower=int(row["lower"]), upper=upper, witness=witness,
            span_searched=int(row["span"]),
            complete_within_span=str(row["complete"]).lower() == "true",
            nodes_expanded=int(row["nodes"]), seconds=float(row["seconds"]),
            witness_span=None if witness is None else witness.ints[-1],
            verified=witness is not None,
        )


class _Search:
    def __init__(self, n, k, ell, span, incumbent, shared=None):
        self.n, self.k, self.ell, self.span = n, k, ell, span
        self.best = incumbent
        self.best_pts: Optional[tuple[int, ...]] = None
        self.nodes = 0
        self.shared = shared
        self.floor = n - 1

    def _pruned(self, bound: int) -> bool:
        if bound >= self.best:
            return True
        # another worker's incumbent only prunes strictly worse subtrees
        return self.shared is not None and bound > self.shared.value

    def run(self, pts: list[int]) -> None:
        counts: Counter = Counter(b - a for i, a in enumerate(pts) for b in pts[i + 1 :])
        for j in range(2, len(pts) + 1):
            if violates_with_newest(pts[:j], self.k, self.ell):
                return
        self._dfs(pts, counts)

    def _leaf(self, pts, counts):
        gaps = [b - a for a, b in zip(pts, pts[1:])]
        if reduce(math.gcd, gaps, 0) != 1 or gaps[::-1] < gaps:
            return
        distinct = len(counts)
        if distinct < self.best:
            self.best = distinct
            self.best_pts = tuple(pts)
            if self.shared is not None:
                with self.shared.get_lock():
                    if distinct < self.shared.value:
                        self.shared.value = distinct

    def _dfs(self, pts, counts):
        self.nodes += 1
        if len(pts) == self.n:
            self._leaf(pts, counts)
            return
        if self._pruned(len(counts) + self.n - len(pts)):
            return
        remaining = self.n - len(pts) - 1
        last = pts[-1]
        for x in range(last + 1, self.span - remaining + 1):
            diffs = [x - a for a in pts]
            new = sum(1 for d in diffs if d not in counts)
            if self._pruned(len(counts) + new + remaining):
                continue
            for d in diffs:
                counts[d] += 1
            pts.append(x)
            if not violates_with_newest(pts, self.k, self.ell):
                self._dfs(pts, counts)
            pts.pop()
            for d in diffs:
                counts[d] -= 1
                if not counts[d]:
                    del counts[d]
            if self.best <= self.floor:
                return


def _validate(n, k, ell, span):
    if not 2 <= k <= n:
        raise BadParameters("need 2 <= k <= n")
    if not 1 <= ell <= math.comb(k, 2):
        raise BadParameters("need 1 <= ell <= C(k, 2)")
    if span < n - 1:
        raise BadParameters("max_span must be at least n - 1")


def _roots(n: int, span: int) -> list[list[int]]:
    """Subtree roots fixed by the first two gaps (or fewer for tiny n)."""
    depth = min(3, n)
    out = [[0]]
    for _ in range(depth - 1):
        nxt = []
        for pts in out:
            remaining = n - len(pts) - 1
            for x in range(pts[-1] + 1, span - remaining + 1):
                nxt.append(pts + [x])
        out = nxt
    return out


_SHARED = None


def _init_worker(shared):
    global _SHARED
    _SHARED = shared


def _solve_root(args):
    n, k, ell, span, incumbent, root = args
    s = _Search(n, k, ell, span, incumbent, shared=_SHARED)
    s.run(list(root))
    return s.best, s.best_pts, s.nodes


def _resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    return max(1, threads)


def construction_checks(n: int, k: int, ell: int, span: int, upper: Optional[int]) -> list[dict]:
    """Compare the search's upper bound with each applicable construction of size n."""
    cands = [("arithmetic-progression", arithmetic_progression(n))]
    i = n.bit_length() - 1
    if n == 2**i and 1 <= i <= 12:
        cands.append((f"projected-cube-{i}", projected_cube(ProjectedCubeSpec.standard(i))))
    for b in range(3, n + 1):
        j = round(math.log(n, b))
        if j >= 2 and b**j == n:
            cands.append((f"bary-cube-{b}-{j}", bary_cube(BaryCubeSpec(b, j))))
    out = []
    for kind, C in cands:
        Cn = affine_normalize(C)
        diffs = len(difference_counts(Cn.ints))
        within = Cn.ints[-1] <= span
        ok = has_local_property(Cn, k, ell)
        consistent = not (within and ok) or (upper is not None and upper <= diffs)
        out.append({"kind": kind, "diffs": diffs, "within_span": within, "satisfies": ok, "consistent": consistent})
        if not consistent:
            raise InvariantViolation(f"search upper bound {upper} exceeds construction {kind} with {diffs}")
    return out


def exact_g(
    n: int, k: int, ell: int, max_span: Optional[int] = None, threads: Optional[int] = None
) -> SearchOutcome:
    """Minimum ``|A - A|`` over n-sets of span ``<= max_span`` whose k-subsets all span ``>= ell``."""
    span = default_span(n) if max_span is None else max_span
    _validate(n, k, ell, span)
    threads = _resolve_threads(threads)
    t0 = time.perf_counter()
    incumbent = math.comb(n, 2) + 1
    if threads == 1 or n < 4:
        s = _Search(n, k, ell, span, incumbent)
        s.run([0])
        best, pts, nodes = s.best, s.best_pts, s.nodes
    else:
        shared = mp.Value("i", incumbent)
        tasks = [(n, k, ell, span, incumbent, tuple(r)) for r in _roots(n, span)]
        ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else None
        with ProcessPoolExecutor(threads, mp_context=ctx, initializer=_init_worker, initargs=(shared,)) as ex:
            results = list(ex.map(_solve_root, tasks, chunksize=max(1, len(tasks) // (8 * threads))))
        nodes = 1 + sum(r[2] for r in results)
        found = [(b, p) for b, p, _ in results if p is not None]
        if found:
            best, pts = min(found, key=lambda bp: (bp[0], [y - x for x, y in zip(bp[1], bp[1][1:])]))
        else:
            best, pts = incumbent, None
    seconds = time.perf_counter() - t0

    if pts is None:
        return SearchOutcome(n, k, ell, None, n - 1, None, None, span, True, nodes, seconds=seconds)
    witness = NumberSet.from_ints(pts)
    rep = local_min_diffs(witness, k, budget=math.comb(n, k))
    if rep.min_diffs < ell or len(difference_counts(witness.ints)) != best:
        raise InvariantViolation(f"search witness {witness} fails re-verification")
    checks = construction_checks(n, k, ell, span, best)
    return SearchOutcome(
        n, k, ell, best, best, best, witness, span, True, nodes,
        witness_span=pts[-1], seconds=seconds, verified=True, construction_checks=checks,
    )


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


def _load_checkpoint(path: Path, params: dict) -> dict:
    if path.exists():
        data = json.loads(path.read_text())
        if data.get("params") != params:
            raise BadParameters("checkpoint was written for different parameters")
        return data
    return {"schema_version": 1, "params": params, "completed": [], "frontier": None}


def g_table(
    n_values: Iterable[int],
    k: int,
    ell_values: Iterable[int],
    max_span: Optional[int] = None,
    checkpoint=None,
    threads: Optional[int] = None,
) -> list[SearchOutcome]:
    """One :func:`exact_g` outcome per ``(n, ell)``, in order, optionally resumable.

    The checkpoint is a JSON file holding the finished rows and the frontier
    of ``(n, ell)`` jobs still to run.
    """
    n_values, ell_values = list(n_values), list(ell_values)
    if not n_values or not ell_values:
        raise BadParameters("n and ell ranges must be nonempty")
    jobs = [[n, ell] for n in n_values for ell in ell_values]
    params = {"n": n_values, "k": k, "ell": ell_values, "max_span": max_span}
    path = Path(checkpoint) if checkpoint else None
    state = _load_checkpoint(path, params) if path else {"completed": [], "frontier": None}
    done = {(r["n"] if isinstance(r["n"], int) else int(r["n"]), int(r["ell"])): r for r in state["completed"]}
    outcomes = []
    for n, ell in jobs:
        if (n, ell) in done:
            outcomes.append(SearchOutcome.from_row(done[(n, ell)]))
            continue
        out = exact_g(n, k, ell, max_span, threads=threads)
        outcomes.append(out)
        if path:
            state["completed"].append(out.to_row())
            finished = {(int(r["n"]), int(r["ell"])) for r in state["completed"]}
            state["frontier"] = [j for j in jobs if tuple(j) not in finished]
            path.write_text(json.dumps(state, indent=1))
    return outcomes


def table_to_csv(outcomes: Iterable[SearchOutcome], header: Iterable[str] = ()) -> str:
    buf = io.StringIO()
    for h in header:
        buf.write(f"# {h}\n")
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for o in outcomes:
        w.writerow(o.to_row())
    return buf.getvalue()
