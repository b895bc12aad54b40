import io
import os

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conceptor_sif.errors import EmptyDataError, IngestionError, ParseError
from conceptor_sif.lexicon import (
    EmbeddingTable,
    StopWordSet,
    default_stopwords,
    effective_rank,
    load_embeddings,
    load_frequencies,
    load_stopwords,
    tokenize,
)


def test_load_embeddings_minimal():
    table = load_embeddings(io.StringIO("a 1.0 0.0\nb 0.0 1.0"))
    assert table.dim == 2
    assert len(table) == 2
    np.testing.assert_array_equal(table["a"], [1.0, 0.0])
    np.testing.assert_array_equal(table["b"], [0.0, 1.0])
    assert table.skipped == 0


def test_load_embeddings_skips_malformed():
    table = load_embeddings(io.StringIO("a 1 2\nb 1 2 3\nc 3 4\n"))
    assert len(table) == 2
    assert table.skipped == 1
    assert "b" not in table


def test_load_embeddings_skip_reasons():
    text = b"a 1 2\nb x 2\nc nan 1\n\xff\xfe 1 2\nd 1 2\n\n"
    table = load_embeddings(io.BytesIO(text))
    assert table.words == ["a", "d"]
    assert table.skipped == 3


def test_load_embeddings_duplicates_keep_first():
    table = load_embeddings(io.StringIO("a 1 0\na 0 1\n"))
    np.testing.assert_array_equal(table["a"], [1.0, 0.0])


def test_missing_word_is_a_miss():
    table = load_embeddings(io.StringIO("a 1 0\n"))
    assert table.get("zzz") is None
    assert "zzz" not in table


def test_load_embeddings_empty():
    with pytest.raises(IngestionError):
        load_embeddings(io.StringIO(""))
    with pytest.raises(IngestionError):
        load_embeddings(io.StringIO("onlyword\n"))


def test_load_embeddings_large_file_matches_line_count(tmp_path):
    rng = np.random.default_rng(0)
    path = tmp_path / "big.txt"
    n, dim = 5000, 300
    with open(path, "w") as fh:
        for i in range(n):
            fh.write(f"w{i} " + " ".join(f"{x:.4f}" for x in rng.normal(size=dim)) + "\n")
    # independent count: lines and fields
    with open(path) as fh:
        rows = [line.split() for line in fh if line.strip()]
    assert {len(r) for r in rows} == {dim + 1}
    table = load_embeddings(path)
    assert len(table) == len(rows) == n
    assert table.dim == dim


def test_load_frequencies_normalizes():
    freq = load_frequencies(io.StringIO("the 2\ncat 1\nsat 1"))
    assert freq.probs == {"the": 0.5, "cat": 0.25, "sat": 0.25}
    assert freq.total_count == 4
    assert freq.prob("dog") == 0.0


def test_load_frequencies_single():
    assert load_frequencies(io.StringIO("a 7")).probs == {"a": 1.0}


@given(st.lists(st.integers(1, 10**9), min_size=1, max_size=200))
def test_load_frequencies_sum_to_one(counts):
    text = "\n".join(f"w{i} {c}" for i, c in enumerate(counts))
    freq = load_frequencies(io.StringIO(text))
    assert abs(sum(freq.probs.values()) - 1.0) <= 1e-12


@pytest.mark.parametrize("text,lineno", [("a 1\nb -3\n", 2), ("a 1\nb x\n", 2), ("a 1 2\n", 1), ("a 0\n", 1)])
def test_load_frequencies_bad_lines(text, lineno):
    with pytest.raises(ParseError) as info:
        load_frequencies(io.StringIO(text))
    assert info.value.lineno == lineno


def test_load_frequencies_zero_total():
    with pytest.raises(EmptyDataError):
        load_frequencies(io.StringIO("\n\n"))


@pytest.mark.parametrize(
    "raw,tokens",
    [
        ("The cat, sat.", ["the", "cat", "sat"]),
        ("!!!", []),
        ("", []),
        ("X-ray at 9am", ["x", "ray", "at", "9am"]),
        ("snake_case  words", ["snake", "case", "words"]),
        ("Café ÜBER", ["café", "über"]),
    ],
)
def test_tokenize(raw, tokens):
    assert list(tokenize(raw).tokens) == tokens


@given(st.text())
def test_tokenize_idempotent(raw):
    tokens = tokenize(raw).tokens
    assert tokenize(" ".join(tokens)).tokens == tokens
    assert all(t == t.lower() and t.isalnum() for t in tokens)


def test_load_stopwords():
    assert load_stopwords(io.StringIO("the\nof\nand")).words == {"the", "of", "and"}
    assert load_stopwords(io.StringIO("The\nthe\n\n")).words == {"the"}
    assert load_stopwords(io.StringIO("b\na\nB\n")).ordered == ("b", "a")


def test_default_stopwords_size():
    path = os.path.join(os.path.dirname(__import__("conceptor_sif").__file__), "data", "stopwords.txt")
    with open(path) as fh:
        distinct = {line.strip().lower() for line in fh if line.strip()}
    stops = default_stopwords()
    assert len(stops) == len(distinct)
    assert "the" in stops


def test_effective_rank_examples():
    table = EmbeddingTable.from_dict({"a": [1.0, 0.0], "b": [0.0, 1.0], "c": [1.0, 1.0]})
    assert effective_rank(table, StopWordSet.of(["a", "b"]), 1e-6) == 2
    table3 = EmbeddingTable.from_dict({"x": [1.0, 2.0, 3.0], "y": [1.0, 2.0, 3.0]})
    assert effective_rank(table3, ["x", "y"], 1e-6) == 1
    with pytest.raises(EmptyDataError):
        effective_rank(table3, ["nope"], 1e-6)


def test_effective_rank_monotone_in_tol():
    rng = np.random.default_rng(0)
    words = {f"w{i}": rng.normal(size=6) * np.logspace(0, -5, 6) for i in range(20)}
    table = EmbeddingTable.from_dict(words)
    ranks = [effective_rank(table, list(words), tol) for tol in np.logspace(-14, 0, 30)]
    assert ranks == sorted(ranks, reverse=True)
    assert ranks[0] == 6
