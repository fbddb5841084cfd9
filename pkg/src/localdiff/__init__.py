"""Exact tools for difference sets with local properties.

Difference and sum profiles, dumbbell energies, set constructions with
predicted difference-set sizes, local-property checks and exact values of
``g(n, k, l)`` over bounded spans.
"""

__version__ = "0.1.0"

from .setcore import (
    DiffProfile,
    NumberSet,
    SumProfile,
    affine_normalize,
    difference_set,
    make_set,
    parse_set_text,
    read_set,
    sum_set,
    write_set,
)
from .energy import (
    DoubleDumbbellClass,
    DumbbellClass,
    DumbbellTable,
    EnergyReport,
    LemmaChainReport,
    additive_energy_moment,
    check_lemma_chain,
    dumbbell_energy,
    dumbbell_energy_bruteforce,
    enumerate_double_dumbbells,
    enumerate_dumbbells,
    extract_disjoint_congruent,
)
from .constructions import (
    BaryCubeSpec,
    CubeExtraction,
    ExtractionConstants,
    GAPSpec,
    ProbeConfig,
    ProjectedCubeSpec,
    RepairLog,
    arithmetic_progression,
    bary_cube,
    find_projected_cube,
    generalized_ap,
    probabilistic_construction,
    projected_cube,
)
from .verify import (
    ConfigBoundResult,
    LocalPropertyReport,
    congruent_double_dumbbells_instance,
    congruent_dumbbells_instance,
    find_k_ap,
    local_min_diffs,
    same_diff_pairs_instance,
    small_doubling_subsets,
)
from .search import SearchOutcome, exact_g, g_table
