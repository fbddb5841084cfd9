"""Dumbbells and their energies.

A dumbbell is a1 < a2 < a3 < a4 with a2 - a1 = a4 - a3.  Sets with many
congruent dumbbells have large dumbbell energy; the last part checks the
counting inequalities that turn a lower bound on dumbbells into one on the
second moment of the class counts.
"""

import random

from localdiff import (
    NumberSet,
    check_lemma_chain,
    dumbbell_energy,
    enumerate_dumbbells,
    extract_disjoint_congruent,
    make_set,
)
from localdiff.energy import DumbbellClass

ap6 = make_set(range(6))
table = enumerate_dumbbells(ap6)
for cls, (count, lefts) in table.classes.items():
    print(cls, count, lefts)

rep = dumbbell_energy(ap6, 2)
print("unordered:", rep.dumbbell_unordered, "ordered:", rep.dumbbell_ordered)

# greedy disjoint picks keep at least 1/13 of a class
long_ap = make_set(range(29))
T = enumerate_dumbbells(long_ap)
picked = extract_disjoint_congruent(T, DumbbellClass(1, 1))
print(T.count(DumbbellClass(1, 1)), "dumbbells of class (1,1), kept", len(picked), "disjoint")

rng = random.Random(1)
for _ in range(5):
    A = NumberSet.from_ints(rng.sample(range(60), 20))
    lc = check_lemma_chain(A, allow_empty=True)
    print(lc.s, lc.popular_set_size, lc.second_moment, float(lc.lw_bound), lc.all_hold)
