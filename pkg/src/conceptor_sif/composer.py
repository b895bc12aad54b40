"""Sentence embeddings: SIF-weighted averages plus common-direction removal.

Four post-processing methods are supported:

``average-only``
    The SIF-weighted average, untouched.
``sif-pc1``
    Subtract the projection on the first uncentered principal component
    of the sentence vectors.
``sif-top-d``
    Subtract the projection on the top ``top_d`` components.
``conceptor``
    Multiply by ``G = I - C`` where ``C`` is a conceptor fitted either to
    the word vectors of the corpus (optionally unioned with a stop-word
    prior) or to the sentence vectors themselves.
"""

from dataclasses import dataclass

import numpy as np

from .conceptor import SoftProjector, complement, compute_conceptor
from .errors import EmptyDataError, ParameterError
from .linalg import sym_eig, uncentered_covariance

METHODS = ("average-only", "sif-pc1", "sif-top-d", "conceptor")
SOURCES = ("word-vectors", "sentence-vectors")


@dataclass(frozen=True)
class CompositionConfig:
    method: str = "conceptor"
    a: float = 0.001
    aperture_inv_sq: float = 1.0
    top_d: int = 1
    conceptor_source: str = "word-vectors"
    use_stopword_prior: bool = True

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        if self.conceptor_source not in SOURCES:
            raise ParameterError(f"unknown conceptor source {self.conceptor_source!r}")
        if not self.a > 0:
            raise ParameterError(f"a must be positive, got {self.a}")
        if not self.aperture_inv_sq > 0:
            raise ParameterError(f"aperture_inv_sq must be positive, got {self.aperture_inv_sq}")
        if self.method == "sif-top-d" and self.top_d < 1:
            raise ParameterError(f"top_d must be >= 1, got {self.top_d}")

    @property
    def label(self):
        if self.method == "sif-top-d":
            return f"sif-top-d({self.top_d})"
        if self.method == "conceptor" and self.conceptor_source == "sentence-vectors":
            return "conceptor(sentence-vectors)"
        if self.method == "conceptor" and not self.use_stopword_prior:
            return "conceptor(no-prior)"
        return self.method


@dataclass(frozen=True)
class SentenceEmbedding:
    vector: np.ndarray
    token_count: int
    oov_count: int

    @property
    def all_oov(self):
        """True when no token had a vector, so ``vector`` is zero."""
        return self.oov_count == self.token_count


def sif_weight(p, a=0.001):
    """``a / (p + a)``; 1 for unseen words, decreasing in ``p``."""
    if p < 0:
        raise ParameterError(f"probability must be non-negative, got {p}")
    if not a > 0:
        raise ParameterError(f"a must be positive, got {a}")
    return a / (p + a)


def weighted_average(sentence, emb, freq, a=0.001):
    """SIF-weighted mean over the in-vocabulary tokens of ``sentence``."""
    total = np.zeros(emb.dim)
    used = 0
    for w in sentence.tokens:
        v = emb.get(w)
        if v is None:
            continue
        total += sif_weight(freq.prob(w), a) * v
        used += 1
    if used:
        total /= used
    n = len(sentence.tokens)
    return SentenceEmbedding(vector=total, token_count=n, oov_count=n - used)


def collect_word_matrix(corpus, emb, stops=None, use_prior=True):
    """Columns are the vectors of distinct in-vocabulary word types.

    Corpus words come first in order of first appearance, followed by any
    stop words (file order) not already present.
    """
    seen = {}
    for s in corpus:
        for w in s.tokens:
            if w not in seen and w in emb:
                seen[w] = None
    if use_prior and stops is not None:
        for w in stops:
            if w not in seen and w in emb:
                seen[w] = None
    if not seen:
        raise EmptyDataError("no in-vocabulary words to fit a conceptor on")
    return np.column_stack([emb[w] for w in seen])


def principal_removal(sentence_vectors, d):
    """Projector removing the top ``d`` uncentered PCs of the given rows."""
    r = uncentered_covariance(np.asarray(sentence_vectors).T)
    u = sym_eig(r, psd=True).eigenvectors[:, :d]
    g = np.eye(r.shape[0]) - u @ u.T
    return SoftProjector(matrix=0.5 * (g + g.T))


def fit_projector(corpus, averages, emb, stops, cfg):
    """Phase one: build the linear map applied to every sentence vector.

    ``averages`` are the SIF averages of ``corpus`` as an (m, N) array.
    Returns None for ``average-only``.
    """
    if cfg.method == "average-only":
        return None
    if cfg.method == "sif-pc1":
        return principal_removal(averages, 1)
    if cfg.method == "sif-top-d":
        return principal_removal(averages, min(cfg.top_d, emb.dim))
    if cfg.conceptor_source == "word-vectors":
        x = collect_word_matrix(corpus, emb, stops, cfg.use_stopword_prior)
    else:
        x = np.asarray(averages).T
    return complement(compute_conceptor(x, cfg.aperture_inv_sq))


def embed_corpus(corpus, emb, freq, stops=None, cfg=None, fit_corpus=None, projector=None):
    """Embed every sentence of ``corpus`` with the configured method.

    Parameters
    ----------
    corpus : list of TokenizedSentence
    emb : EmbeddingTable
    freq : FrequencyTable
    stops : StopWordSet or None
        Prior for word-vector conceptors; ignored by the other methods.
    cfg : CompositionConfig
    fit_corpus : list of TokenizedSentence, optional
        Fit the projector on these sentences instead of ``corpus``.
    projector : SoftProjector, optional
        Use this map instead of fitting one; ``cfg.method`` is then only
        used for the SIF parameter ``a``.

    Returns
    -------
    list of SentenceEmbedding, in input order.
    """
    cfg = cfg or CompositionConfig()
    if not corpus:
        raise EmptyDataError("corpus is empty")
    embs = [weighted_average(s, emb, freq, cfg.a) for s in corpus]
    averages = np.vstack([e.vector for e in embs])

    if projector is not None:
        proj = projector
    elif fit_corpus is None:
        proj = fit_projector(corpus, averages, emb, stops, cfg)
    else:
        if not fit_corpus:
            raise EmptyDataError("fit corpus is empty")
        fit_avgs = np.vstack([weighted_average(s, emb, freq, cfg.a).vector for s in fit_corpus])
        proj = fit_projector(fit_corpus, fit_avgs, emb, stops, cfg)
    if proj is None:
        return embs
    out = proj.apply_rows(averages)
    return [
        SentenceEmbedding(vector=out[i], token_count=e.token_count, oov_count=e.oov_count)
        for i, e in enumerate(embs)
    ]
