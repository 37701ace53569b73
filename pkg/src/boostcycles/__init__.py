"""Boosting as a map on the probability simplex: run it, detect its limit
cycles, and verify their continued-fraction structure with exact arithmetic."""

from .simplex import (
    HypothesisPool,
    MistakeDichotomy,
    MistakeLattice,
    WeightVector,
    check_periodic_learning,
    edge_dot,
    edge_from_misclassified,
    uniform_weights,
)
from .engine import (
    BoostStep,
    BoostTrace,
    FirstAbove,
    FixedSequence,
    Optimal,
    PerfectClassification,
    WeakLearningFailure,
    alpha,
    exponential_update,
    run,
    select,
    strong_classify,
    weight_update,
)
from .farey import (
    GOLDEN,
    FareyWord,
    MoebiusMatrix,
    QuadraticIrrational,
    cf_expansion,
    enumerate_orbits,
    farey,
    gauss,
    inv_L,
    inv_R,
    periodic_point,
    word_matrix,
)
from .cycles import (
    ContributionVector,
    CycleReport,
    IndexPartition,
    aligned_weight_distance,
    check_edge_update,
    contributions,
    detect_cycle,
    four_term_edge,
    lattice_agreement,
    match_farey,
    partition,
    subsums,
)
from .learners import Dataset, TreeHypothesis, dichotomy_of, load_csv, run_on_dataset, sample, train_tree

__version__ = "0.1.0"

__all__ = [
    "HypothesisPool",
    "MistakeDichotomy",
    "MistakeLattice",
    "WeightVector",
    "check_periodic_learning",
    "edge_dot",
    "edge_from_misclassified",
    "uniform_weights",
    "BoostStep",
    "BoostTrace",
    "FirstAbove",
    "FixedSequence",
    "Optimal",
    "PerfectClassification",
    "WeakLearningFailure",
    "alpha",
    "exponential_update",
    "run",
    "select",
    "strong_classify",
    "weight_update",
    "GOLDEN",
    "FareyWord",
    "MoebiusMatrix",
    "QuadraticIrrational",
    "cf_expansion",
    "enumerate_orbits",
    "farey",
    "gauss",
    "inv_L",
    "inv_R",
    "periodic_point",
    "word_matrix",
    "ContributionVector",
    "aligned_weight_distance",
    "CycleReport",
    "IndexPartition",
    "check_edge_update",
    "contributions",
    "detect_cycle",
    "four_term_edge",
    "lattice_agreement",
    "match_farey",
    "partition",
    "subsums",
    "Dataset",
    "TreeHypothesis",
    "dichotomy_of",
    "load_csv",
    "run_on_dataset",
    "sample",
    "train_tree",
]
