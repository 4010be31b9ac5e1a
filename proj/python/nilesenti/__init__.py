"""Arabic tweet sentiment toolkit: preprocessing, CNB, voting ensemble, quantification."""

from ._core import (
    CnbModel,
    Lexicon,
    NilesentiError,
    abs_error_metrics,
    classification_metrics,
    classify_and_count,
    kld,
    light_stem,
    majority_vote,
    normalize_text,
    prepare_neural_tokens,
    prepare_text,
    reduce_elongation,
    replace_emoticons,
    run,
    tokenize_and_stem,
    train_cnb,
)

__all__ = [
    "CnbModel",
    "Lexicon",
    "NilesentiError",
    "abs_error_metrics",
    "classification_metrics",
    "classify_and_count",
    "kld",
    "light_stem",
    "majority_vote",
    "normalize_text",
    "prepare_neural_tokens",
    "prepare_text",
    "reduce_elongation",
    "replace_emoticons",
    "run",
    "tokenize_and_stem",
    "train_cnb",
]
