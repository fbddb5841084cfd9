"""Battery of exact identity and inequality checks run by ``localdiff check``."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .constructions import (
    BaryCubeSpec,
    ProjectedCubeSpec,
    bary_cube,
    bary_difference_count,
    cube_difference_bound,
    projected_cube,
)
from .energy import (
    check_lemma_chain,
    dumbbell_energy,
    dumbbell_energy_bruteforce,
    enumerate_dumbbells,
)
from .search import exact_g
from .setcore import NumberSet, difference_set
from .verify import (
    congruent_double_dumbbells_instance,
    congruent_dumbbells_instance,
    same_diff_pairs_instance,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    finding: bool = False  # reported, never counted as a failure

    def line(self) -> str:
        tag = "INFO" if self.finding else ("PASS" if self.passed else "FAIL")
        return f"[{tag}] {self.name}: {self.detail}"


def random_int_set(rng: random.Random, n: int, span: int) -> NumberSet:
    return NumberSet.from_ints(rng.sample(range(span + 1), n))


def _cube_law(rng) -> CheckResult:
    for i in range(1, 11):
        if len(difference_set(projected_cube(ProjectedCubeSpec.standard(i)))) != cube_difference_bound(i):
            return CheckResult("projected-cube law", False, f"equality fails at i={i}")
    for _ in range(200):
        i = rng.randint(1, 6)
        spec = ProjectedCubeSpec(0, tuple(rng.randint(1, 20) for _ in range(i)))
        A = projected_cube(spec)
        if len(A) > 1 and len(difference_set(A)) > cube_difference_bound(i):
            return CheckResult("projected-cube law", False, f"bound fails for {spec.deltas}")
    return CheckResult("projected-cube law", True, "equality for i<=10, bound on 200 random cubes")


def _bary_law() -> CheckResult:
    for b in (2, 3, 4):
        for i in range(1, 5):
            A = bary_cube(BaryCubeSpec(b, i))
            if len(A) != b**i or len(difference_set(A)) != bary_difference_count(b, i):
                return CheckResult("b-ary law", False, f"b={b}, i={i}")
    return CheckResult("b-ary law", True, "b in {2,3,4}, i <= 4")


def _energy_oracle(rng) -> CheckResult:
    for _ in range(40):
        n = rng.randint(4, 8)
        A = random_int_set(rng, n, rng.choice([n, 2 * n, 20]))
        for ell in (1, 2):
            rep = dumbbell_energy(A, ell, include_double=False)
            brute = dumbbell_energy_bruteforce(A, ell)
            if not (brute == rep.dumbbell_ordered == math.factorial(ell) * rep.dumbbell_unordered):
                return CheckResult("energy oracle", False, f"{A} ell={ell}")
    return CheckResult("energy oracle", True, "40 random sets, ell in {1,2}")


def _lemma_chain(rng) -> CheckResult:
    tried = 0
    while tried < 30:
        n = rng.randint(10, 30)
        A = random_int_set(rng, n, rng.choice([2 * n, 4 * n, n * n]))
        if enumerate_dumbbells(A).total == 0:
            continue
        tried += 1
        rep = check_lemma_chain(A)
        if not rep.all_hold:
            return CheckResult("dumbbell inequality chain", False, f"{A}: {rep.to_dict()}")
    return CheckResult("dumbbell inequality chain", True, "30 random sets with dumbbells")


def _config_bounds() -> list[CheckResult]:
    out = []
    ok = all(same_diff_pairs_instance(k).matches for k in (4, 6, 8, 10))
    out.append(CheckResult("same-difference pairs", ok, "k in {4,6,8,10}"))
    res = [congruent_dumbbells_instance(k) for k in (8, 16, 24)]
    ok = all(r.matches and r.details["cross_matches_pattern"] for r in res)
    out.append(CheckResult("congruent dumbbells", ok, "k in {8,16,24}, nine cross distances"))
    for k in (16, 32):
        r = congruent_double_dumbbells_instance(k)
        out.append(
            CheckResult(
                f"double dumbbells k={k}", True,
                f"predicted {r.predicted}, generic instance spans {r.achieved} "
                f"(intra {r.details['intra']}, cross per pair {r.details['cross_per_pair']})",
                finding=not r.matches,
            )
        )
    return out


def _ap_values() -> CheckResult:
    for n in range(3, 7):
        for k in range(3, n + 1):
            if exact_g(n, k, k - 1, 2 * n, threads=1).value != n - 1:
                return CheckResult("g(n,k,k-1) = n-1", False, f"n={n}, k={k}")
    return CheckResult("g(n,k,k-1) = n-1", True, "3 <= k <= n <= 6")


def run_battery(seed: int = 0) -> list[CheckResult]:
    rng = random.Random(seed)
    results = [_cube_law(rng), _bary_law(), _energy_oracle(rng), _lemma_chain(rng)]
    results.extend(_config_bounds())
    results.append(_ap_values())
    return results
