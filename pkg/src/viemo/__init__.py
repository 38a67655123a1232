"""Vietnamese social-media emotion classification toolkit.

Layers, bottom to top: corpus I/O, lexicons, text normalization, n-gram
vectorization, multinomial logistic regression, evaluation, stopword
discovery, key-clause extraction, and the experiment pipeline gluing them
together. Each layer is importable on its own; the CLI (``viemo``) fronts
the pipeline.
"""

from .corpus import (
    EMOTION_LABELS,
    CorpusSplit,
    LabeledComment,
    load_corpus,
    load_split,
    parse_label,
    save_corpus,
)
from .errors import ConfigError, DataError, ViemoError
from .evaluate import EvalReport, evaluate
from .lexicons import LexiconSet, load_lexicons
from .mlr import MlrConfig, MlrModel, load_model, predict, save_model, train
from .normalize import NormalizerConfig, NormalizeReport, normalize, normalize_corpus
from .pipeline import PipelineConfig, run_experiment, run_matrix
from .vectorize import VectorizerConfig, Vocabulary, fit_vocabulary, tokenize, transform

__version__ = "0.1.0"

__all__ = [
    "EMOTION_LABELS",
    "ConfigError",
    "CorpusSplit",
    "DataError",
    "EvalReport",
    "LabeledComment",
    "LexiconSet",
    "MlrConfig",
    "MlrModel",
    "NormalizeReport",
    "NormalizerConfig",
    "PipelineConfig",
    "VectorizerConfig",
    "ViemoError",
    "Vocabulary",
    "evaluate",
    "fit_vocabulary",
    "load_corpus",
    "load_lexicons",
    "load_model",
    "load_split",
    "normalize",
    "normalize_corpus",
    "parse_label",
    "predict",
    "run_experiment",
    "run_matrix",
    "save_corpus",
    "save_model",
    "tokenize",
    "train",
    "transform",
    "__version__",
]
