"""Difference sets, sum sets and the local property on a few small sets."""

from fractions import Fraction

from localdiff import difference_set, local_min_diffs, make_set, sum_set

# sets are exact; rationals are kept as a common denominator
A = make_set([0, Fraction(1, 2), 1])
print(A, "stored as", A.ints, "/", A.scale)

# the positive differences and how often each occurs
B = make_set([0, 1, 3, 4])
print("B - B:", difference_set(B).entries)
print("|B + B| =", sum_set(B).size)

# an AP is as additive as it gets: every 4-subset of {0..9} can span only 3 differences
ap = make_set(range(10))
print(local_min_diffs(ap, 4))

# a Sidon set: every difference is distinct, so every 4-subset spans C(4,2) = 6
sidon = make_set([0, 1, 4, 6])
print(local_min_diffs(sidon, 4).min_diffs)
