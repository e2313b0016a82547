from __future__ import annotations

import json

import pytest

from misinfo.cli import build_parser, main


def run(argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    path = root / "corpus.jsonl"
    assert run(["synth", "--output", path, "--n-m", 40, "--n-t", 60,
                "--signal", 0.9, "--seed", 13]) == 0
    return path


def test_usage_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as err:
        run([])
    assert err.value.code == 1
    with pytest.raises(SystemExit) as err:
        run(["transmogrify"])
    assert err.value.code == 1
    with pytest.raises(SystemExit) as err:
        run(["train", "--model", "nb"])  # missing required flags
    assert err.value.code == 1


def test_missing_input_is_user_error(tmp_path, capsys):
    assert run(["preprocess", "--input", tmp_path / "nope.jsonl",
                "--output", tmp_path / "out.jsonl"]) == 1
    assert "error" in capsys.readouterr().err


def test_synth_writes_corpus_and_sidecar(corpus):
    lines = corpus.read_text().splitlines()
    assert len(lines) == 100
    assert json.loads(lines[0])["label"] == "M"
    sidecar = json.loads((corpus.parent / "corpus.jsonl.spec.json")
                         .read_text())
    assert sidecar["seed"] == 13


def test_stage_pipeline(corpus, tmp_path):
    kept = tmp_path / "kept.jsonl"
    report = tmp_path / "hits.csv"
    assert run(["filter", "--input", corpus, "--output", kept,
                "--report", report]) == 0
    assert len(kept.read_text().splitlines()) == 100  # labels survive
    assert json.loads(kept.read_text().splitlines()[0]).get("label")
    header = report.read_text().splitlines()[0]
    assert header == "keyword,theme,hits"

    tokens = tmp_path / "tokens.jsonl"
    assert run(["preprocess", "--input", kept, "--output", tokens]) == 0

    train_p, test_p = tmp_path / "train.jsonl", tmp_path / "test.jsonl"
    assert run(["split", "--input", tokens, "--seed", 3,
                "--train-output", train_p, "--test-output", test_p]) == 0
    assert len(train_p.read_text().splitlines()) == 80
    assert len(test_p.read_text().splitlines()) == 20

    model_p, space_p = tmp_path / "nb.model.json", tmp_path / "space.json"
    assert run(["train", "--train", train_p, "--model", "nb",
                "--method", "unigram", "--output-model", model_p,
                "--output-space", space_p]) == 0

    row_p = tmp_path / "row.csv"
    assert run(["eval", "--test", test_p, "--model", model_p,
                "--space", space_p, "--output", row_p]) == 0
    rows = row_p.read_text().splitlines()
    assert rows[0].startswith("model,method,")
    assert rows[1].startswith("nb,unigram,")


def test_train_hyper_overrides(corpus, tmp_path):
    tokens = tmp_path / "tokens.jsonl"
    run(["preprocess", "--input", corpus, "--output", tokens])
    model_p, space_p = tmp_path / "m.json", tmp_path / "s.json"
    assert run(["train", "--train", tokens, "--model", "svm",
                "--method", "bow", "--hyper", "epochs=2",
                "--output-model", model_p, "--output-space", space_p]) == 0
    assert json.loads(model_p.read_text())["parameters"]["epochs"] == 2
    # unknown knob is a user error
    assert run(["train", "--train", tokens, "--model", "svm",
                "--method", "bow", "--hyper", "gamma=1",
                "--output-model", model_p, "--output-space", space_p]) == 1
    assert run(["train", "--train", tokens, "--model", "svm",
                "--method", "bow", "--hyper", "broken",
                "--output-model", model_p, "--output-space", space_p]) == 1


def test_experiment_grid(corpus, tmp_path, capsys):
    outdir = tmp_path / "grid"
    assert run(["experiment", "--corpus", corpus, "--output-dir", outdir,
                "--models", "nb,dt", "--methods", "bow,unigram",
                "--seed", 4]) == 0
    printed = capsys.readouterr().out
    assert "macro_f1" in printed
    csv_rows = (outdir / "grid.csv").read_text().splitlines()
    assert len(csv_rows) == 5  # header + 2 models x 2 methods
    assert csv_rows[1].startswith("nb,bow,")
    assert csv_rows[2].startswith("nb,unigram,")
    assert csv_rows[3].startswith("dt,bow,")
    assert (outdir / "grid.txt").exists()


def test_experiment_determinism_and_resplit(corpus, tmp_path):
    a, b, c = (tmp_path / n for n in ("a", "b", "c"))
    args = ["experiment", "--corpus", corpus, "--models", "nb",
            "--methods", "unigram", "--seed", 4]
    assert run(args + ["--output-dir", a]) == 0
    assert run(args + ["--output-dir", b]) == 0
    assert (a / "grid.csv").read_bytes() == (b / "grid.csv").read_bytes()
    assert run(args + ["--output-dir", c, "--resplit-per-method"]) == 0
    assert (c / "grid.csv").exists()


def test_experiment_rejects_unlabeled_corpus(tmp_path):
    p = tmp_path / "plain.jsonl"
    p.write_text('{"id": "1", "text": "mask tweet"}\n')
    assert run(["experiment", "--corpus", p,
                "--output-dir", tmp_path / "g"]) == 1


def test_annotate_serve_parser_wiring():
    args = build_parser().parse_args(
        ["annotate-serve", "--dataset", "d.jsonl", "--journal", "j.csv",
         "--output", "o.jsonl", "--port", "0"])
    assert args.func.__name__ == "cmd_annotate_serve"
    assert args.port == 0
