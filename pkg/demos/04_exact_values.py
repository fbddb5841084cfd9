"""Exact g(n, k, l): the least |A - A| over n-sets whose k-subsets span >= l differences.

Values are exact over integer sets of bounded span (the default span is
3 C(n, 2)).  The l = 5, k = 4 column is compared with C(n,2) - n + 2.
"""

import math

from localdiff import exact_g, g_table
from localdiff.search import table_to_csv

print(table_to_csv(g_table([4, 5], 4, range(3, 7))))

for n in (4, 5, 6):
    out = exact_g(n, 4, 5)
    print(n, out.value, math.comb(n, 2) - n + 2, out.witness, out.nodes_expanded)
