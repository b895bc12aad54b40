"""Semantic textual similarity evaluation: cosine scores vs gold, by Spearman."""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .composer import embed_corpus
from .errors import DimensionError, EmptyDataError, ParameterError, ParseError, UndefinedCorrelationError
from .lexicon import _iter_lines, _source_name, tokenize

DEGENERATE_NORM = 1e-12
# cosines are rounded before ranking so round-off cannot split exact ties
SCORE_DECIMALS = 12


@dataclass(frozen=True)
class StsPair:
    sentence_a: str
    sentence_b: str
    gold: float


@dataclass(frozen=True)
class MethodResult:
    spearman: float
    n_pairs: int
    n_degenerate: int
    error: str = None

    def to_dict(self):
        d = {"spearman": self.spearman, "n_pairs": self.n_pairs, "n_degenerate": self.n_degenerate}
        if self.error is not None:
            d["error"] = self.error
        return d


@dataclass
class EvalReport:
    """Results keyed by method label, in the order the methods were run."""

    results: dict = field(default_factory=dict)

    def __getitem__(self, label):
        return self.results[label]

    def __len__(self):
        return len(self.results)

    def to_json(self):
        return json.dumps({k: v.to_dict() for k, v in self.results.items()}, indent=2) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["method", "spearman", "n_pairs", "n_degenerate", "error"])
        for label, r in self.results.items():
            spearman = "" if r.spearman is None else repr(r.spearman)
            writer.writerow([label, spearman, r.n_pairs, r.n_degenerate, r.error or ""])
        return buf.getvalue()

    def format_table(self):
        width = max([len("method")] + [len(k) for k in self.results])
        lines = [f"{'method':<{width}}  spearman  pairs  degenerate"]
        for label, r in self.results.items():
            score = "   n/a  " if r.spearman is None else f"{r.spearman:8.4f}"
            lines.append(f"{label:<{width}}  {score}  {r.n_pairs:5d}  {r.n_degenerate:10d}")
        return "\n".join(lines)


def parse_sts(source):
    """Read ``sentence_a<TAB>sentence_b<TAB>score`` lines.

    Blank lines are ignored.  Any other malformed line raises
    :class:`ParseError` carrying its line number.
    """
    name = _source_name(source)
    pairs = []
    for lineno, line in _iter_lines(source):
        if line is None:
            raise ParseError("line is not valid UTF-8", lineno, name)
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(f"expected 3 tab-separated fields, got {len(fields)}", lineno, name)
        a, b, raw = fields
        try:
            gold = float(raw)
        except ValueError:
            raise ParseError(f"score {raw.strip()!r} is not a number", lineno, name) from None
        if not math.isfinite(gold):
            raise ParseError(f"score {raw.strip()!r} is not finite", lineno, name)
        pairs.append(StsPair(a, b, gold))
    if not pairs:
        raise EmptyDataError(f"no sentence pairs in {name or 'input'}")
    return pairs


def _is_degenerate(v):
    return float(np.linalg.norm(v)) < DEGENERATE_NORM


def cosine(u, v):
    """Cosine similarity; 0 when either vector is (numerically) zero."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionError(f"cannot compare vectors of shape {u.shape} and {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu < DEGENERATE_NORM or nv < DEGENERATE_NORM:
        return 0.0
    uu = u / nu
    vv = v / nv
    if np.array_equal(uu, vv):
        return 1.0
    return min(1.0, max(-1.0, float(uu @ vv)))


def spearman(x, y):
    """Spearman rank correlation with average ranks for ties."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError(f"score lists differ in shape: {x.shape} vs {y.shape}")
    if x.shape[0] < 2:
        raise UndefinedCorrelationError("need at least two observations")
    rx = rankdata(x) - (x.shape[0] + 1) / 2
    ry = rankdata(y) - (y.shape[0] + 1) / 2
    sxx = float(rx @ rx)
    syy = float(ry @ ry)
    if sxx == 0 or syy == 0:
        raise UndefinedCorrelationError("correlation is undefined for a constant score list")
    r = float(rx @ ry) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def evaluate(pairs, emb, freq, stops, cfgs, fit_pairs=None):
    """Score every pair under every configuration.

    Both sentences of every pair are embedded together as one corpus, so
    projectors are fitted on the pooled set (or on ``fit_pairs`` when
    given).  An undefined correlation is recorded on that method's result
    rather than aborting the run.
    """
    if not pairs:
        raise EmptyDataError("no sentence pairs to evaluate")
    if not cfgs:
        raise ParameterError("no methods to evaluate")
    k = len(pairs)
    corpus = [tokenize(p.sentence_a) for p in pairs] + [tokenize(p.sentence_b) for p in pairs]
    fit_corpus = None
    if fit_pairs is not None:
        fit_corpus = [tokenize(p.sentence_a) for p in fit_pairs] + [tokenize(p.sentence_b) for p in fit_pairs]
    gold = [p.gold for p in pairs]

    report = EvalReport()
    for cfg in cfgs:
        if cfg.label in report.results:
            raise ParameterError(f"method {cfg.label!r} requested twice")
        embs = embed_corpus(corpus, emb, freq, stops, cfg, fit_corpus=fit_corpus)
        scores = []
        degenerate = 0
        for i in range(k):
            u, v = embs[i].vector, embs[k + i].vector
            if _is_degenerate(u) or _is_degenerate(v):
                degenerate += 1
            scores.append(cosine(u, v))
        try:
            rho = spearman(np.round(scores, SCORE_DECIMALS), gold)
            err = None
        except UndefinedCorrelationError as exc:
            rho, err = None, str(exc)
        report.results[cfg.label] = MethodResult(rho, k, degenerate, err)
    return report
