"""Reservoir computing for graph classification.

Three models share one fixed-point graph encoder and a closed-form ridge
readout; they differ only in how the untrained weights are built:

* GESN: random sparse reservoir (one nonzero per row) and dense random
  input weights.
* GRN: ring (cyclic permutation) reservoir and random input weights.
* MGN: ring reservoir with input weight signs taken from the decimal
  digits of pi -- no randomness anywhere.

The evaluation module adds the full nested cross-validation benchmark
protocol, and the CLI (`ringgesn`) wraps fetching, benchmarking, and
embedding dumps.
"""

from .data import (
    Dataset,
    Graph,
    MalformedDatasetError,
    TargetEncoding,
    compute_degree,
    encode_targets,
    parse_tudataset,
)
from .evaluation import (
    CandidateConfig,
    EncodingCache,
    EvaluationReport,
    FoldPlan,
    SearchSpace,
    evaluate_config,
    nested_cross_validate,
    run_evaluation,
    sample_configs,
    size_sweep,
    stratified_folds,
)
from .fetch import DEFAULT_BASE_URL, ExtractionError, FetchError, fetch_dataset
from .numerics import (
    AdjacencyCSR,
    RidgeSolverError,
    SparseOneHop,
    apply_one_hop,
    frobenius_distance,
    propagate,
    ridge_solve,
    ridge_solve_sweep,
    spectral_radius_one_hop,
)
from .pidigits import pi_digits
from .readout import Readout, decode, predict_classes, predict_scores, train_readout, train_readout_sweep
from .reservoir import (
    FAMILIES,
    GESN,
    GRN,
    MGN,
    EmbeddingResult,
    EncodingError,
    ReservoirConfig,
    ReservoirWeights,
    StopRule,
    build_gesn,
    build_grn,
    build_mgn,
    build_reservoir,
    encode_dataset,
    encode_graph,
    encode_pooled,
    pi_sign_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "AdjacencyCSR",
    "CandidateConfig",
    "DEFAULT_BASE_URL",
    "Dataset",
    "EmbeddingResult",
    "EncodingCache",
    "EncodingError",
    "EvaluationReport",
    "ExtractionError",
    "FAMILIES",
    "FetchError",
    "FoldPlan",
    "GESN",
    "GRN",
    "Graph",
    "MGN",
    "MalformedDatasetError",
    "Readout",
    "ReservoirConfig",
    "ReservoirWeights",
    "RidgeSolverError",
    "SearchSpace",
    "SparseOneHop",
    "StopRule",
    "TargetEncoding",
    "apply_one_hop",
    "build_gesn",
    "build_grn",
    "build_mgn",
    "build_reservoir",
    "compute_degree",
    "decode",
    "encode_dataset",
    "encode_graph",
    "encode_pooled",
    "encode_targets",
    "evaluate_config",
    "fetch_dataset",
    "frobenius_distance",
    "nested_cross_validate",
    "parse_tudataset",
    "pi_digits",
    "pi_sign_matrix",
    "predict_classes",
    "predict_scores",
    "propagate",
    "ridge_solve",
    "ridge_solve_sweep",
    "run_evaluation",
    "sample_configs",
    "size_sweep",
    "spectral_radius_one_hop",
    "stratified_folds",
    "train_readout",
    "train_readout_sweep",
]
