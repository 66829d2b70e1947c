"""crossmi: measure machine-translation difficulty with cross-mutual information.

The toolkit covers the full measurement pipeline: controlled corpus
preparation, joint byte-pair encoding, probabilistic scoring (built-in
desk-scale models or external score files), cross-entropy / XMI / BLEU,
corpus features, correlation analysis with Bonferroni correction, and
bootstrap confidence intervals.
"""

from .analysis import (
    BootstrapResult,
    CorrelationResult,
    FeatureTable,
    bonferroni_threshold,
    bootstrap_test,
    compute_data_features,
    correlate_features,
    d_ttr,
    pearson,
    read_feature_csv,
    spearman,
    ttr,
    word_number_ratio,
    word_overlap_ratio,
)
from .bpe import BpeModel, bpe_decode, bpe_encode, bpe_train, load_bpe, save_bpe
from .corpus import (
    ParallelCorpus,
    Sentence,
    SplitSpec,
    filter_by_length,
    intersect_multiway,
    make_splits,
    prepare_multiway,
    read_parallel,
    tokenize_13a,
)
from .errors import CrossmiError, PipelineError, ValidationError, ZeroProbabilityError
from .metrics import (
    BleuConfig,
    BleuStats,
    CrossEntropy,
    MetricReport,
    XmiResult,
    bleu,
    bleu_from_stats,
    bleu_sentence_stats,
    cross_entropy,
    xmi,
)
from .pipeline import PipelineResult, RunConfig, run_pipeline, train_bootstrap_xmi
from .plots import render_scatter, render_stack
from .scoring import (
    LexicalTable,
    LexMixtureMt,
    NgramLm,
    ScoreRecord,
    ScoreSet,
    lm_logprob,
    mt_logprob,
    read_scores,
    train_lex_mixture_mt,
    train_lex_table,
    train_ngram_lm,
    write_scores,
)

__version__ = "0.1.0"
