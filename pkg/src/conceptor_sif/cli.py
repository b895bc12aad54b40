"""Command-line interface: ``conceptor-sif {embed,eval,diag}``."""

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .composer import (
    METHODS,
    SOURCES,
    CompositionConfig,
    collect_word_matrix,
    embed_corpus,
    fit_projector,
    weighted_average,
)
from .conceptor import complement, compute_conceptor, projector_from_json, projector_to_json
from .errors import ConceptorSifError, EmptyDataError, ParameterError
from .lexicon import (
    FrequencyTable,
    default_stopwords,
    effective_rank,
    load_embeddings,
    load_frequencies,
    load_stopwords,
    tokenize,
)
from .sts_eval import evaluate, parse_sts

logger = logging.getLogger("conceptor_sif")


class StartupError(ConceptorSifError):
    pass


@dataclass
class RunConfig:
    embedding_path: str
    frequency_path: str = None
    stopword_path: str = None
    dataset_path: str = None
    fit_split_path: str = None
    output_path: str = None
    output_format: str = "json"
    methods: list = field(default_factory=list)
    a: float = 0.001
    aperture_inv_sq: float = 1.0
    top_d: int = 1
    conceptor_source: str = "word-vectors"
    use_stopword_prior: bool = True
    seed: int = 0

    def check_paths(self):
        for path in (
            self.embedding_path,
            self.frequency_path,
            self.stopword_path,
            self.dataset_path,
            self.fit_split_path,
        ):
            if path is not None and not os.access(path, os.R_OK):
                raise StartupError(f"cannot read file: {path}")

    def compositions(self, default=METHODS):
        return [
            CompositionConfig(
                method=m,
                a=self.a,
                aperture_inv_sq=self.aperture_inv_sq,
                top_d=self.top_d,
                conceptor_source=self.conceptor_source,
                use_stopword_prior=self.use_stopword_prior,
            )
            for m in (self.methods or default)
        ]


def _load_resources(cfg):
    emb = load_embeddings(cfg.embedding_path)
    if cfg.frequency_path is not None:
        freq = load_frequencies(cfg.frequency_path)
    else:
        logger.info("no frequency file given; every word gets SIF weight 1")
        freq = FrequencyTable(probs={}, total_count=1)
    stops = load_stopwords(cfg.stopword_path) if cfg.stopword_path else default_stopwords()
    return emb, freq, stops


def _read_sentences(path):
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\r\n") for line in fh]
    if not lines:
        raise EmptyDataError(f"sentence file is empty: {path}")
    return lines


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def format_vector(v):
    return " ".join(repr(float(x)) for x in v)


def cmd_embed(cfg, sentences_path, load_projector=None, save_projector=None):
    """Embed one sentence per line; write one vector per line."""
    if len(cfg.methods) > 1:
        raise ParameterError("embed takes a single --method")
    emb, freq, stops = _load_resources(cfg)
    corpus = [tokenize(s) for s in _read_sentences(sentences_path)]
    fit_corpus = None
    if cfg.fit_split_path is not None:
        fit_corpus = [tokenize(s) for s in _read_sentences(cfg.fit_split_path)]
    comp = cfg.compositions(default=("conceptor",))[0]

    projector = None
    if load_projector is not None:
        with open(load_projector, encoding="utf-8") as fh:
            projector = projector_from_json(fh.read())
    elif save_projector is not None:
        if comp.method != "conceptor":
            raise ParameterError("--save-projector requires --method conceptor")
        fit_sents = fit_corpus or corpus
        avgs = np.vstack([weighted_average(s, emb, freq, comp.a).vector for s in fit_sents])
        projector = fit_projector(fit_sents, avgs, emb, stops, comp)
        with open(save_projector, "w", encoding="utf-8") as fh:
            fh.write(projector_to_json(projector))

    embs = embed_corpus(corpus, emb, freq, stops, comp, fit_corpus=fit_corpus, projector=projector)
    _write("".join(format_vector(e.vector) + "\n" for e in embs), cfg.output_path)
    return embs


def cmd_eval(cfg):
    if cfg.dataset_path is None:
        raise StartupError("eval requires --dataset")
    emb, freq, stops = _load_resources(cfg)
    pairs = parse_sts(cfg.dataset_path)
    fit_pairs = parse_sts(cfg.fit_split_path) if cfg.fit_split_path else None
    report = evaluate(pairs, emb, freq, stops, cfg.compositions(), fit_pairs=fit_pairs)
    text = report.to_csv() if cfg.output_format == "csv" else report.to_json()
    if cfg.output_path is not None:
        _write(text, cfg.output_path)
        print(report.format_table())
    else:
        _write(text, None)
        print(report.format_table(), file=sys.stderr)
    return report


def cmd_diag(cfg, top_k=10, tol=1e-6, out=None):
    """Print the stop-word rank and the fitted conceptor spectrum."""
    out = out or sys.stdout
    emb, _, stops = _load_resources(cfg)
    found = [w for w in stops if w in emb]
    if found:
        rank = effective_rank(emb, found, tol)
        print(f"stop words with vectors: {len(found)} of {len(stops)}", file=out)
        print(f"stop-word effective rank: {rank} of {emb.dim}", file=out)
    else:
        print("stop words with vectors: 0; effective rank undefined", file=out)

    corpus = []
    if cfg.dataset_path is not None:
        for p in parse_sts(cfg.dataset_path):
            corpus += [tokenize(p.sentence_a), tokenize(p.sentence_b)]
    x = collect_word_matrix(corpus, emb, stops, cfg.use_stopword_prior)
    c = compute_conceptor(x, cfg.aperture_inv_sq)
    g = complement(c)
    gvals = 1.0 - c.spectrum.eigenvalues
    k = min(top_k, c.dim)
    print(f"conceptor fitted on {x.shape[1]} word vectors, aperture_inv_sq={c.aperture_inv_sq:g}", file=out)
    print(f"{'i':>4}  {'covariance':>12}  {'conceptor':>10}  {'complement':>10}", file=out)
    for i in range(k):
        print(
            f"{i + 1:>4}  {c.covariance_eigenvalues[i]:12.6g}  "
            f"{c.spectrum.eigenvalues[i]:10.6g}  {gvals[i]:10.6g}",
            file=out,
        )
    return c, g


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--embeddings", required=True, help="word vectors, GloVe text format")
    common.add_argument("--frequencies", help="'word count' file; omit for unit SIF weights")
    common.add_argument("--stopwords", help="one stop word per line (default: bundled list)")
    common.add_argument("--a", type=float, default=0.001, help="SIF smoothing (default 0.001)")
    common.add_argument("--aperture-inv-sq", type=float, default=1.0, help="conceptor penalty weight (default 1)")
    common.add_argument("--method", action="append", choices=METHODS, dest="methods")
    common.add_argument("--top-d", type=int, default=1, help="components removed by sif-top-d")
    common.add_argument("--conceptor-source", choices=SOURCES, default="word-vectors")
    common.add_argument("--no-stopword-prior", action="store_true")
    common.add_argument("--fit-split", help="fit projectors on this file instead of the evaluated data")
    common.add_argument("--seed", type=int, default=0, help="accepted for reproducibility; currently has no effect")
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="conceptor-sif", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", parents=[common], help="embed sentences, one per line")
    p.add_argument("sentences")
    p.add_argument("--save-projector", help="write the fitted conceptor complement as JSON")
    p.add_argument("--load-projector", help="apply a projector saved with --save-projector")

    p = sub.add_parser("eval", parents=[common], help="Spearman evaluation on an STS file")
    p.add_argument("--dataset", required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("diag", parents=[common], help="stop-word rank and conceptor spectrum")
    p.add_argument("--dataset", help="include this STS file's words in the fitted covariance")
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-6)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    cfg = RunConfig(
        embedding_path=args.embeddings,
        frequency_path=args.frequencies,
        stopword_path=args.stopwords,
        dataset_path=getattr(args, "dataset", None),
        fit_split_path=args.fit_split,
        output_path=args.output,
        output_format=getattr(args, "format", "json"),
        methods=args.methods or [],
        a=args.a,
        aperture_inv_sq=args.aperture_inv_sq,
        top_d=args.top_d,
        conceptor_source=args.conceptor_source,
        use_stopword_prior=not args.no_stopword_prior,
        seed=args.seed,
    )
    try:
        cfg.check_paths()
        if args.command == "embed":
            if not os.access(args.sentences, os.R_OK):
                raise StartupError(f"cannot read file: {args.sentences}")
            cmd_embed(cfg, args.sentences, args.load_projector, args.save_projector)
        elif args.command == "eval":
            cmd_eval(cfg)
        else:
            cmd_diag(cfg, args.top_k, args.tol)
    except (ConceptorSifError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
