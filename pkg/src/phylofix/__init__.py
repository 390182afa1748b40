"""Counting and uniform sampling of phylogenetic trees fixed by a permutation,
and of tanglegrams and tangled chains."""
from .core import (
    CycleNotationError,
    NewickError,
    NotFixedError,
    Permutation,
    apply_permutation,
    canonicalize,
    edges,
    from_newick,
    induced_edge_permutation,
    is_fixed,
    parse_permutation,
    to_newick,
)
from .counting import (
    STable,
    build_s_table,
    enumerate_binary_partitions,
    is_binary_partition,
    r_lambda,
    t_n_k,
    z_lambda,
)
from .sampler import (
    EmptySupportError,
    RandomSource,
    TangledChain,
    canonical_permutation,
    insert_cycle,
    remove_largest_cycle,
    sample_fixed_tree,
    sample_partition,
    sample_tangled_chain,
    unique_single_cycle_tree,
)

__version__ = "0.1.0"
