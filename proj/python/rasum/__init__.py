"""Reader-aware multi-document summarization.

Thin wrapper over the compiled core. See the functions on `rasum._rasum`
for the full signatures; everything is re-exported here.
"""

from ._rasum import (  # noqa: F401
    InvalidInputError,
    NumericError,
    ParseError,
    evaluate_text,
    ingest,
    jaccard,
    porter_stem,
    rouge_n,
    rouge_su4,
    summarize,
    tokenize,
    train_salience,
)

__all__ = [
    "InvalidInputError",
    "NumericError",
    "ParseError",
    "evaluate_text",
    "ingest",
    "jaccard",
    "porter_stem",
    "rouge_n",
    "rouge_su4",
    "summarize",
    "tokenize",
    "train_salience",
]
