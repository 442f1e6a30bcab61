"""balpart: balance-guaranteed k-way partitioning of weighted hypergraphs.

Recursive bipartitioning with an attainable block-weight bound (derived
from greedy scheduling), deep-balance checks, and prepacking of the
heaviest vertices whenever a bipartition could strand the recursion.
"""

__version__ = "0.1.0"

from ._kernels import IS_COMPILED
from .balance import (BalanceContext, PreprocessResult, adaptive_epsilon,
                      bipartition_bound, fits, fm_bound, lpt_balance_bound,
                      modified_epsilon, preprocess_remove_heavy,
                      standard_bound, weight_cap)
from .driver import (DriverStats, PipelineReport, RBResult,
                     partition_pipeline, recursive_bipartition)
from .hgr_io import (HgrFormatError, generate_artificial, load_hgr,
                     parse_hgr, read_partition, write_hgr, write_partition)
from .hypergraph import (Hypergraph, HypergraphError, Partition,
                         VertexSubset, block_weights, build_hypergraph,
                         connectivity, max_block_weight, subhypergraph)
from .lpt import (LptResult, WeightIndex, af_bound, af_bound_seq,
                  brute_force_most_balanced, lpt_extend, lpt_makespan,
                  range_max, smallest_t)
from .multilevel import (BipartitionResult, CoarseLevel, RefineStats,
                         coarsen, fm_refine, initial_bipartition,
                         multilevel_bipartition)
from .prepacking import (Prepacking, check_deep_balance, compute_prepacking,
                         satisfies_balance_property)
from .profiles import performance_profile, profile_fraction_at

__all__ = [
    "IS_COMPILED", "__version__",
    "BalanceContext", "PreprocessResult", "adaptive_epsilon",
    "bipartition_bound", "fits", "fm_bound", "lpt_balance_bound",
    "modified_epsilon", "preprocess_remove_heavy", "standard_bound",
    "weight_cap",
    "DriverStats", "PipelineReport", "RBResult", "partition_pipeline",
    "recursive_bipartition",
    "HgrFormatError", "generate_artificial", "load_hgr", "parse_hgr",
    "read_partition", "write_hgr", "write_partition",
    "Hypergraph", "HypergraphError", "Partition", "VertexSubset",
    "block_weights", "build_hypergraph", "connectivity", "max_block_weight",
    "subhypergraph",
    "LptResult", "WeightIndex", "af_bound", "af_bound_seq",
    "brute_force_most_balanced", "lpt_extend", "lpt_makespan", "range_max",
    "smallest_t",
    "BipartitionResult", "CoarseLevel", "RefineStats", "coarsen",
    "fm_refine", "initial_bipartition", "multilevel_bipartition",
    "Prepacking", "check_deep_balance", "compute_prepacking",
    "satisfies_balance_property",
    "performance_profile", "profile_fraction_at",
]
