"""gravlabel: weak supervision with gravitation-based label augmentation.

Pipeline: declarative labeling functions fill a sparse label matrix over
an unlabeled dataset; abstain cells are relabeled when the aggregated
pull of nearby labeled points crosses a boundary; majority vote collapses
the densified matrix into training labels for a simple end classifier.
"""

from .aggregate import AggregatedLabels, majority_vote, training_set
from .backend import available_backends, compiled_available, resolve_backend
from .data import (
    Dataset,
    FeatureVector,
    Vocabulary,
    build_vocabulary,
    label_wine_truth,
    load_tabular,
    load_text_table,
    minmax_normalize,
    save_tabular,
    split,
    tokenize,
    vectorize,
    vectorize_dataset,
)
from .distances import (
    DistanceCache,
    MetricSpec,
    cached_distance,
    distance,
    mahalanobis_precompute,
    pairwise_matrix,
)
from .errors import (
    ConfigError,
    DegenerateTrainingError,
    GravlabelError,
    InputError,
    NoTrainingDataError,
    NumericError,
    SchemaError,
)
from .lf import (
    ABSTAIN,
    AbsentRule,
    KeywordRule,
    LabelingFunction,
    LabelMatrix,
    LFStats,
    NumericBandRule,
    NumericRule,
    apply_all,
    apply_lf,
    lf_stats,
    parse_lf_set,
)
from .models import Metrics, ModelSpec, evaluate, predict, train
from .reinforce import (
    Boundaries,
    ReinforceParams,
    ReinforceResult,
    aggregate_effects,
    augment,
    auto_h_iqr,
    effect,
    iqr_boundaries,
    reinforce,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
