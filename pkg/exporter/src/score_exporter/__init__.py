"""score_exporter: neural-checkpoint scoring into crossmi score files."""

from .exporter import (
    ExportError,
    ExportJob,
    ScoredSentence,
    export_scores,
    score_lm,
    score_mt,
    write_score_file,
)

__version__ = "0.1.0"
