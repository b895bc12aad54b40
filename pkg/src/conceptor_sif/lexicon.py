"""Word vectors, word frequencies, stop words and tokenization."""

import io
import logging
import os
import re
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import EmptyDataError, IngestionError, ParseError
from .linalg import sym_eig, uncentered_covariance

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[^\W_]+")


def _iter_lines(source):
    """Yield ``(lineno, text)`` pairs; ``text`` is None for undecodable lines.

    ``source`` may be a path, a binary or text file object, or any iterable
    of str/bytes lines.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            yield from _iter_lines(fh)
        return
    for lineno, line in enumerate(source, start=1):
        if isinstance(line, bytes):
            try:
                line = line.decode("utf-8")
            except UnicodeDecodeError:
                yield lineno, None
                continue
        yield lineno, line.rstrip("\r\n")


def _source_name(source):
    if isinstance(source, (str, os.PathLike)):
        return os.fspath(source)
    return getattr(source, "name", None)


class EmbeddingTable:
    """Word -> vector map with a fixed dimension.

    Lookups of absent words return None from :meth:`get`; they never raise.
    """

    def __init__(self, words, vectors, skipped=0):
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[1] == 0:
            raise IngestionError(f"bad embedding matrix shape {vectors.shape}")
        if len(words) != vectors.shape[0]:
            raise IngestionError("word list and vector rows differ in length")
        self._index = {}
        for i, w in enumerate(words):
            self._index.setdefault(w, i)
        self._vectors = vectors
        self._vectors.setflags(write=False)
        self.skipped = skipped

    @property
    def dim(self):
        return self._vectors.shape[1]

    @property
    def words(self):
        return list(self._index)

    def __len__(self):
        return len(self._index)

    def __contains__(self, word):
        return word in self._index

    def get(self, word):
        i = self._index.get(word)
        if i is None:
            return None
        return self._vectors[i]

    def __getitem__(self, word):
        return self._vectors[self._index[word]]

    @classmethod
    def from_dict(cls, mapping):
        words = list(mapping)
        return cls(words, np.array([mapping[w] for w in words], dtype=np.float64))


def load_embeddings(source):
    """Read a GloVe-style text file: ``word v1 v2 ... vN`` per line.

    The dimension is taken from the first well-formed line.  Lines with the
    wrong number of fields, unparseable or non-finite floats, or invalid
    UTF-8 are skipped and counted in ``table.skipped``.  Duplicate words keep
    their first vector.
    """
    words = []
    rows = []
    seen = set()
    dim = None
    skipped = 0
    any_line = False
    for lineno, line in _iter_lines(source):
        if line is None:
            skipped += 1
            continue
        parts = line.split()
        if not parts:
            continue
        any_line = True
        if len(parts) < 2 or (dim is not None and len(parts) - 1 != dim):
            skipped += 1
            continue
        try:
            vec = np.array(parts[1:], dtype=np.float64)
        except ValueError:
            skipped += 1
            continue
        if not np.all(np.isfinite(vec)):
            skipped += 1
            continue
        if dim is None:
            dim = vec.shape[0]
        word = parts[0]
        if word in seen:
            continue
        seen.add(word)
        words.append(word)
        rows.append(vec)
    if not any_line:
        raise IngestionError(f"embedding source {_source_name(source) or '<stream>'} is empty")
    if not rows:
        raise IngestionError("embedding source has no valid lines")
    if skipped:
        logger.warning("skipped %d malformed embedding line(s)", skipped)
    return EmbeddingTable(words, np.vstack(rows), skipped=skipped)


@dataclass(frozen=True)
class FrequencyTable:
    """Unigram probabilities.  Unknown words have probability 0."""

    probs: dict
    total_count: int

    def prob(self, word):
        return self.probs.get(word, 0.0)

    def __contains__(self, word):
        return word in self.probs

    def __len__(self):
        return len(self.probs)


def load_frequencies(source):
    """Read ``word count`` lines and normalize counts to probabilities.

    Repeated words have their counts summed.
    """
    name = _source_name(source)
    counts = {}
    for lineno, line in _iter_lines(source):
        if line is None:
            raise ParseError("line is not valid UTF-8", lineno, name)
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 2:
            raise ParseError(f"expected 'word count', got {len(parts)} field(s)", lineno, name)
        word, raw = parts
        try:
            count = int(raw)
        except ValueError:
            raise ParseError(f"count {raw!r} is not an integer", lineno, name) from None
        if count <= 0:
            raise ParseError(f"count must be positive, got {count}", lineno, name)
        counts[word] = counts.get(word, 0) + count
    total = sum(counts.values())
    if total == 0:
        raise EmptyDataError("frequency source has zero total count")
    probs = {w: c / total for w, c in counts.items()}
    return FrequencyTable(probs=probs, total_count=total)


@dataclass(frozen=True)
class StopWordSet:
    """Lowercased stop words, deduplicated, in first-seen file order."""

    ordered: tuple

    def __post_init__(self):
        object.__setattr__(self, "_set", frozenset(self.ordered))

    @property
    def words(self):
        return self._set

    def __contains__(self, word):
        return word in self._set

    def __iter__(self):
        return iter(self.ordered)

    def __len__(self):
        return len(self.ordered)

    @classmethod
    def of(cls, words):
        return cls(tuple(dict.fromkeys(w.lower() for w in words)))


def load_stopwords(source):
    words = []
    for lineno, line in _iter_lines(source):
        if line is None:
            raise ParseError("line is not valid UTF-8", lineno, _source_name(source))
        w = line.strip()
        if w:
            words.append(w)
    return StopWordSet.of(words)


def default_stopwords():
    """The bundled English stop-word list."""
    text = resources.files("conceptor_sif").joinpath("data/stopwords.txt").read_text("utf-8")
    return load_stopwords(io.StringIO(text))


@dataclass(frozen=True)
class TokenizedSentence:
    tokens: tuple
    raw: str = field(default="", compare=False)

    def __len__(self):
        return len(self.tokens)


def tokenize(raw):
    """Lowercase, then split on runs of non-alphanumeric characters.

    >>> tokenize("The cat, sat.").tokens
    ('the', 'cat', 'sat')
    """
    return TokenizedSentence(tokens=tuple(_TOKEN_RE.findall(raw.lower())), raw=raw)


def effective_rank(table, words, tol=1e-6):
    """Count covariance eigenvalues of the found ``words`` above ``tol * max``."""
    found = [table[w] for w in dict.fromkeys(words) if w in table]
    if not found:
        raise EmptyDataError("none of the given words have an embedding")
    x = np.column_stack(found)
    eig = sym_eig(uncentered_covariance(x), psd=True)
    top = eig.eigenvalues[0]
    if top <= 0:
        return 0
    return int(np.sum(eig.eigenvalues > tol * top))
