"""Generic cospark of matrix sparsity patterns via bipartite matching."""

from .cospark import CosparkResult, compute_x_w, greedy_extend, spcospark
from .matching import Matching, RowSubgraphView, max_matching, sprank, try_augment
from .oracle import (
    CosparkWitness,
    RationalMatrix,
    SizeGuardError,
    brute_cospark,
    brute_spcospark,
    exact_rank,
    realize,
)
from .pattern import (
    BipartiteGraph,
    ParseError,
    PatternError,
    SparsityPattern,
    build_graph,
    from_entries,
    random_pattern,
    read_pattern,
    write_pattern,
)

__version__ = "0.1.0"
