"""Set-pair Lovász extensions and the graph cut problems they relax."""
from .cuts import KIND_NAMES, CutKind, CutProblem, CutResult, discrete_optimum, pair_ratio_problem
from .estimators import KCutSolver, SetPairCutSolver, ThresholdRounder
from .functionals import TableFunction, UnionMinVolume, median_dev, table_extension_closed
from .graph import (
    Graph,
    complete_graph,
    cycle_graph,
    parse_edge_list,
    path_graph,
    random_graph,
    read_graph,
    write_edge_list,
)
from .kcut import encode_partition, kcut_discrete, kcut_FL, kcut_GL, parts_at_threshold
from .lovasz import (
    SetPairFunction,
    TabulatedSetPairFunction,
    original_extension,
    setpair_extension,
    setpair_extension_chain,
    setpair_extension_integral,
)
from .relax import (
    RatioProblem,
    SolveReport,
    discrete_polish,
    local_descent,
    multi_start_solve,
    threshold_round,
)
from .setpair import SetPair, indicator, threshold_pairs
from .submodular import check_pair_submodular, convexity_probe

__version__ = "0.1.0"

__all__ = [
    "KIND_NAMES", "CutKind", "CutProblem", "CutResult", "discrete_optimum", "pair_ratio_problem",
    "KCutSolver", "SetPairCutSolver", "ThresholdRounder",
    "TableFunction", "UnionMinVolume", "median_dev", "table_extension_closed",
    "Graph", "complete_graph", "cycle_graph", "path_graph", "random_graph",
    "parse_edge_list", "read_graph", "write_edge_list",
    "encode_partition", "kcut_discrete", "kcut_FL", "kcut_GL", "parts_at_threshold",
    "SetPairFunction", "TabulatedSetPairFunction", "original_extension", "setpair_extension",
    "setpair_extension_chain", "setpair_extension_integral",
    "RatioProblem", "SolveReport", "local_descent", "discrete_polish", "multi_start_solve", "threshold_round",
    "SetPair", "indicator", "threshold_pairs",
    "check_pair_submodular", "convexity_probe",
]
