"""Deterministic synthetic STS corpus with a strong common-direction bias.

Every word vector is ``background + common + signal``:

* ``background`` is one shared direction added to all words;
* ``common`` lives in a handful of leading directions and is large for
  stop words, small for content words;
* ``signal`` lives in the trailing directions and carries word identity.

Sentence pairs share a random fraction of their content words and the gold
score is five times that fraction.  Stop words are sprinkled independently
into each sentence, so they only add noise to cosine scores.

Run ``python -m conceptor_sif.synthetic OUTDIR`` to write the four files
(``vectors.txt``, ``freq.txt``, ``stopwords.txt``, ``sts.tsv``).
"""

import argparse
import os

import numpy as np

from .lexicon import default_stopwords

DIM = 50
N_COMMON = 8
N_STOP = 60
N_CONTENT = 400
N_PAIRS = 200
SEED = 20181


def _fmt(x):
    return f"{x:.6f}"


def generate(seed=SEED, n_pairs=N_PAIRS):
    """Return a dict of file name -> file text."""
    rng = np.random.default_rng(seed)
    stops = list(default_stopwords())[:N_STOP]
    content = [f"w{i:03d}" for i in range(N_CONTENT)]

    background = rng.normal(size=DIM)
    background /= np.linalg.norm(background)
    basis, _ = np.linalg.qr(rng.normal(size=(DIM, DIM)))
    # keep the background out of the common/signal subspaces
    basis -= np.outer(background, background @ basis)
    common_dirs = basis[:, :N_COMMON]
    signal_dirs = basis[:, N_COMMON:]
    common_scale = np.linspace(3.0, 1.0, N_COMMON)

    vectors = {}
    for w in stops:
        vectors[w] = (
            2.0 * background
            + 3.0 * common_dirs @ (common_scale * rng.normal(size=N_COMMON))
            + 0.1 * signal_dirs @ rng.normal(size=DIM - N_COMMON)
        )
    for w in content:
        vectors[w] = (
            2.0 * background
            + 0.3 * common_dirs @ (common_scale * rng.normal(size=N_COMMON))
            + 0.5 * signal_dirs @ rng.normal(size=DIM - N_COMMON)
        )

    stop_counts = rng.integers(20_000, 200_000, size=N_STOP)
    content_counts = rng.integers(10, 2_000, size=N_CONTENT)
    freq_lines = [f"{w} {c}" for w, c in zip(stops, stop_counts)]
    freq_lines += [f"{w} {c}" for w, c in zip(content, content_counts)]

    def sprinkle(words):
        k = int(rng.integers(3, 8))
        merged = list(words) + list(rng.choice(stops, size=k))
        order = rng.permutation(len(merged))
        return " ".join(merged[i] for i in order)

    sts_lines = []
    for _ in range(n_pairs):
        k = int(rng.integers(4, 9))
        a_words = list(rng.choice(content, size=k, replace=False))
        keep = int(rng.integers(0, k + 1))
        pool = [w for w in content if w not in a_words]
        b_words = a_words[:keep] + list(rng.choice(pool, size=k - keep, replace=False))
        gold = 5.0 * keep / k
        sts_lines.append(f"{sprinkle(a_words)}\t{sprinkle(b_words)}\t{gold:.4f}")

    vec_lines = [w + " " + " ".join(_fmt(x) for x in v) for w, v in vectors.items()]
    return {
        "vectors.txt": "\n".join(vec_lines) + "\n",
        "freq.txt": "\n".join(freq_lines) + "\n",
        "stopwords.txt": "\n".join(stops) + "\n",
        "sts.tsv": "\n".join(sts_lines) + "\n",
    }


def write(outdir, seed=SEED):
    os.makedirs(outdir, exist_ok=True)
    for name, text in generate(seed).items():
        with open(os.path.join(outdir, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None):
    parser = argparse.ArgumentParser(description="write the synthetic STS fixture")
    parser.add_argument("outdir")
    parser.add_argument("--seed", type=int, default=SEED)
    args = parser.parse_args(argv)
    write(args.outdir, args.seed)


if __name__ == "__main__":
    main()
