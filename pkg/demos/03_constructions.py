"""Constructions with known difference-set sizes."""

import numpy as np

from localdiff import (
    BaryCubeSpec,
    NumberSet,
    ProbeConfig,
    ProjectedCubeSpec,
    bary_cube,
    congruent_double_dumbbells_instance,
    congruent_dumbbells_instance,
    difference_set,
    find_projected_cube,
    probabilistic_construction,
    projected_cube,
    same_diff_pairs_instance,
)

# projected cubes with deltas 1, 3, 9, ... have (3^i - 1)/2 differences
for i in range(1, 7):
    P = projected_cube(ProjectedCubeSpec.standard(i))
    print(i, len(P), difference_set(P).size, (3**i - 1) // 2)

# the b-ary cube: ((2b-1)^i - 1)/2 differences on b^i points
for b in (2, 3):
    for i in (1, 2, 3):
        A = bary_cube(BaryCubeSpec(b, i))
        print(b, i, len(A), difference_set(A).size)

# small configurations and their predicted counts
for r in (same_diff_pairs_instance(8), congruent_dumbbells_instance(16), congruent_double_dumbbells_instance(16)):
    print(r.config_kind, r.k, "predicted", r.predicted, "achieved", r.achieved)
# the last line does not match: two translates of the 8-point pattern meet in
# 13 internal and 27 cross differences, not the split the closed form assumes
print(congruent_double_dumbbells_instance(16).details)

# plant two copies of a 2-cube among noise and pull them back out
cube = [0, 7, 1000, 1007]
rng = np.random.default_rng(0)
pts = set(cube) | {x + 50_000 for x in cube} | set(rng.integers(0, 10**6, 4).tolist())
res = find_projected_cube(NumberSet.from_ints(pts), 2)
print(res.success, [lv.count for lv in res.levels], res.levels[-1].pattern)

# random set of 30 integers whose 26-subsets all have more than 52 differences
A, log = probabilistic_construction(ProbeConfig(n=30, k=26, c=2, seed=1, repair_mode="sampled"))
print(A.ints[:6], "...", "max", A.ints[-1], "universe", log.universe, log.certificate)
