"""Sentence embeddings with conceptor-based soft common-component removal."""

__version__ = "0.1.0"

from .composer import (
    CompositionConfig,
    SentenceEmbedding,
    collect_word_matrix,
    embed_corpus,
    sif_weight,
    weighted_average,
)
from .conceptor import (
    Conceptor,
    SoftProjector,
    apply,
    complement,
    compute_conceptor,
    conceptor_objective,
    hard_override,
)
from .lexicon import (
    EmbeddingTable,
    FrequencyTable,
    StopWordSet,
    TokenizedSentence,
    default_stopwords,
    effective_rank,
    load_embeddings,
    load_frequencies,
    load_stopwords,
    tokenize,
)
from .sts_eval import EvalReport, StsPair, cosine, evaluate, parse_sts, spearman
