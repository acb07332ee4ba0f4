"""Mining interpretable lung-malignancy decision trees from CXR score tables.

The pipeline: ingest seven-column pathology score CSVs (or fabricate
them with :mod:`cxrmine.synth`), harmonize the diagnosis labels into
Benign/Malignant, split each candidate table 80:20 with a seeded
shuffle, fit a depth-limited entropy-criterion decision tree, filter
candidates at 60% holdout accuracy, rank the survivors by confusion
matrix interrogation, and render metrics/tree reports.
"""

from .datamodel import (
    FEATURE_NAMES,
    BinaryLabel,
    DatasetTag,
    FeatureVector,
    LabeledRecord,
    RawDiagnosis,
    ScoreTable,
    combine_datasets,
    harmonize_jsrt,
    harmonize_lidc,
)
from .ingest import (
    CSV_HEADER,
    IngestIssue,
    IssueKind,
    parse_score_table,
    parse_scores_filename,
    scores_filename,
    write_score_table,
)
from .metrics import (
    METRIC_NAMES,
    ConfusionMatrix,
    MetricSet,
    binary_metrics,
    confusion,
    format_percent,
    format_ratio,
    roc_auc,
)
from .mining import (
    CandidateResult,
    MiningConfig,
    MiningReport,
    RankPolicy,
    evaluate_candidate,
    mine,
    rank_models,
    render_report,
    split_train_test,
)
from .preprocess import GrayImage, equalize, hflip, load_png, resize, rotate, save_png
from .report import GroupBy, pass_rate_table, summarize_best
from .synth import SynthConfig, epoch_series, generate
from .tree import (
    DecisionTree,
    Internal,
    Leaf,
    SplitCandidate,
    TreeConfig,
    TreeFormat,
    best_split,
    entropy,
    export_tree,
    fit_tree,
    parse_tree,
    predict,
)

__version__ = "0.1.0"
