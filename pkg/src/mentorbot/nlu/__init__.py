"""Natural-language understanding: tokenizing, tagging, clause extraction,
intent classification, and the evaluation harness."""

from .classifier import (
    CONTENT_INTENTS,
    ClassifierModel,
    EmptyAdmissibleSet,
    EmptyCorpus,
    Intent,
    ParseResult,
    canonical,
    classify,
    featurize,
    match_polarity,
    train,
)
from .corpus import (
    CorpusFormatError,
    LabeledUtterance,
    load_corpus,
    load_seed_corpus,
    parse_corpus,
    seed_corpus_path,
)
from .evaluate import CorpusTooSmall, Metrics, evaluate, fold_of
from .extract import Clause, EmptyUtterance, extract_clause, normalize
from .tags import Tag, TaggedToken, Token, pos_tag, tokenize

__all__ = [
    "CONTENT_INTENTS",
    "ClassifierModel",
    "Clause",
    "CorpusFormatError",
    "CorpusTooSmall",
    "EmptyAdmissibleSet",
    "EmptyCorpus",
    "EmptyUtterance",
    "Intent",
    "LabeledUtterance",
    "Metrics",
    "ParseResult",
    "Tag",
    "TaggedToken",
    "Token",
    "canonical",
    "classify",
    "evaluate",
    "extract_clause",
    "featurize",
    "fold_of",
    "load_corpus",
    "load_seed_corpus",
    "match_polarity",
    "normalize",
    "parse_corpus",
    "pos_tag",
    "seed_corpus_path",
    "tokenize",
    "train",
]
