import json
import subprocess
import sys

import numpy as np
import pytest

from conceptor_sif.cli import main
from conceptor_sif.composer import CompositionConfig, embed_corpus
from conceptor_sif.lexicon import load_embeddings, load_frequencies, load_stopwords, tokenize


@pytest.fixture
def toy(tmp_path):
    (tmp_path / "vec.txt").write_text(
        "the 1 0 0.2\ncat 0 1 0.1\nsat 0.5 0.5 1\nmat 0.2 0.9 0.3\non 0.9 0.1 0.1\ndog 0.1 0.2 0.9\n"
    )
    (tmp_path / "freq.txt").write_text("the 100\non 50\ncat 5\nsat 3\nmat 2\n")
    (tmp_path / "stop.txt").write_text("the\non\n")
    (tmp_path / "sents.txt").write_text("The cat sat.\nthe dog on the mat\nThe cat sat.\n")
    (tmp_path / "sts.tsv").write_text(
        "the cat sat\tthe cat sat on the mat\t4.0\n"
        "the dog\tthe mat\t1.0\n"
        "cat on mat\tdog on mat\t3.0\n"
        "sat\tthe dog sat\t2.5\n"
        "the cat\tthe dog\t2.0\n"
    )
    return tmp_path


def base_args(d):
    return ["--embeddings", str(d / "vec.txt"), "--frequencies", str(d / "freq.txt"), "--stopwords", str(d / "stop.txt")]


def test_embed_shape_and_determinism(toy):
    out = toy / "out.txt"
    assert main(["embed", str(toy / "sents.txt"), *base_args(toy), "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    assert all(len(line.split()) == 3 for line in lines)
    assert lines[0] == lines[2]


@pytest.mark.parametrize("method", ["average-only", "sif-pc1", "conceptor"])
def test_embed_roundtrip_matches_pipeline(toy, method):
    out = toy / "out.txt"
    assert main(["embed", str(toy / "sents.txt"), *base_args(toy), "--method", method, "-o", str(out)]) == 0
    written = np.loadtxt(out)
    emb = load_embeddings(toy / "vec.txt")
    freq = load_frequencies(toy / "freq.txt")
    stops = load_stopwords(toy / "stop.txt")
    corpus = [tokenize(s) for s in (toy / "sents.txt").read_text().splitlines()]
    expected = embed_corpus(corpus, emb, freq, stops, CompositionConfig(method=method))
    np.testing.assert_allclose(written, np.vstack([e.vector for e in expected]), atol=1e-6)


def test_embed_errors(toy, capsys):
    assert main(["embed", str(toy / "missing.txt"), *base_args(toy)]) == 1
    assert "missing.txt" in capsys.readouterr().err
    (toy / "empty.txt").write_text("")
    assert main(["embed", str(toy / "empty.txt"), *base_args(toy)]) == 1
    args = ["embed", str(toy / "sents.txt"), "--embeddings", str(toy / "nope.vec")]
    assert main(args) == 1
    assert "nope.vec" in capsys.readouterr().err


def test_embed_projector_save_and_load(toy):
    saved = toy / "proj.json"
    a, b = toy / "a.txt", toy / "b.txt"
    assert main(["embed", str(toy / "sents.txt"), *base_args(toy), "--save-projector", str(saved), "-o", str(a)]) == 0
    assert main(["embed", str(toy / "sents.txt"), *base_args(toy), "--load-projector", str(saved), "-o", str(b)]) == 0
    np.testing.assert_allclose(np.loadtxt(a), np.loadtxt(b), atol=1e-15)


def test_embed_fit_split(toy):
    (toy / "fit.txt").write_text("the mat\ncat on the mat\n")
    out = toy / "out.txt"
    args = ["embed", str(toy / "sents.txt"), *base_args(toy), "--method", "sif-pc1", "--fit-split", str(toy / "fit.txt")]
    assert main([*args, "-o", str(out)]) == 0
    assert np.loadtxt(out).shape == (3, 3)


def test_eval_single_method(toy, capsys):
    out = toy / "r.json"
    assert main(["eval", *base_args(toy), "--dataset", str(toy / "sts.tsv"), "--method", "average-only", "-o", str(out)]) == 0
    report = json.loads(out.read_text())
    assert list(report) == ["average-only"]
    assert report["average-only"]["n_pairs"] == 5
    assert "average-only" in capsys.readouterr().out


def test_eval_all_methods_and_csv(toy):
    out = toy / "r.json"
    assert main(["eval", *base_args(toy), "--dataset", str(toy / "sts.tsv"), "-o", str(out)]) == 0
    report = json.loads(out.read_text())
    assert list(report) == ["average-only", "sif-pc1", "sif-top-d(1)", "conceptor"]
    assert {r["n_pairs"] for r in report.values()} == {5}
    csv_out = toy / "r.csv"
    assert main(["eval", *base_args(toy), "--dataset", str(toy / "sts.tsv"), "--format", "csv", "-o", str(csv_out)]) == 0
    assert len(csv_out.read_text().splitlines()) == 5


def test_eval_repeat_is_byte_identical(toy):
    outs = [toy / "r1.json", toy / "r2.json"]
    for o in outs:
        assert main(["eval", *base_args(toy), "--dataset", str(toy / "sts.tsv"), "-o", str(o), "--seed", "7"]) == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()


def test_eval_bad_dataset_names_line(toy, capsys):
    (toy / "bad.tsv").write_text("a\tb\t1\nbroken line\n")
    assert main(["eval", *base_args(toy), "--dataset", str(toy / "bad.tsv")]) == 1
    assert "bad.tsv:2" in capsys.readouterr().err


def test_diag_orthogonal_stop_words(tmp_path, capsys):
    (tmp_path / "v.txt").write_text("the 1 0\nof 0 1\n")
    (tmp_path / "s.txt").write_text("the\nof\n")
    assert main(["diag", "--embeddings", str(tmp_path / "v.txt"), "--stopwords", str(tmp_path / "s.txt")]) == 0
    assert "effective rank: 2 of 2" in capsys.readouterr().out


def test_diag_conceptor_spectrum(tmp_path, capsys):
    s6, s2 = np.sqrt(6), np.sqrt(2)
    # covariance of these four vectors is diag(3, 1, 0)
    (tmp_path / "v.txt").write_text(f"a {s6} 0 0\nb {-s6} 0 0\nc 0 {s2} 0\nd 0 {-s2} 0\n")
    (tmp_path / "s.txt").write_text("a\nb\nc\nd\n")
    args = ["diag", "--embeddings", str(tmp_path / "v.txt"), "--stopwords", str(tmp_path / "s.txt"), "--aperture-inv-sq", "1"]
    assert main(args) == 0
    out = capsys.readouterr().out
    rows = [line.split() for line in out.splitlines() if line.strip()[:1].isdigit()]
    values = np.array([[float(x) for x in r[1:]] for r in rows])
    np.testing.assert_allclose(values[:, 0], [3, 1, 0], atol=1e-9)
    np.testing.assert_allclose(values[:, 1], [0.75, 0.5, 0], atol=1e-9)
    np.testing.assert_allclose(values[:, 2], [0.25, 0.5, 1], atol=1e-9)
    assert "effective rank: 2 of 3" in out


def test_console_module_runs(toy):
    proc = subprocess.run(
        [sys.executable, "-m", "conceptor_sif.cli", "eval", *base_args(toy), "--dataset", str(toy / "sts.tsv")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert '"conceptor"' in proc.stdout
