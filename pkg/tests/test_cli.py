import json
import subprocess
import sys

import pytest

from cmxtag.cli import main
from cmxtag.corpus import read_corpus


@pytest.fixture
def synth_file(tmp_path):
    path = tmp_path / "synth.tsv"
    assert main(["synth", "--num-utterances", "60", "--seed", "3", "--output", str(path)]) == 0
    return path


def test_cmi_json(synth_file, capsys):
    assert main(["cmi", "--input", str(synth_file), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"cmi_all", "cmi_mixed", "mixed_pct", "num_utt", "per_utterance"}
    assert doc["num_utt"] == 60


def test_cmi_tsv_and_univ_only(synth_file, capsys):
    assert main(["cmi", "--input", str(synth_file)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("metric\tvalue\n")
    assert main(["cmi", "--input", str(synth_file), "--univ-only"]) == 0


def test_train_without_input_is_usage_error(capsys):
    assert main(["train"]) == 1
    assert "usage" in capsys.readouterr().err


def test_unknown_flag_is_usage_error(capsys):
    assert main(["cmi", "--input", "x", "--bogus"]) == 1
    assert main(["tag", "--c1", "0.1"]) == 1


def test_missing_subcommand():
    assert main([]) == 1


def test_data_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text("a\ten\tN\textra\n", encoding="utf-8")
    assert main(["cmi", "--input", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err
    assert main(["cmi", "--input", str(tmp_path / "missing.tsv")]) == 2
    junk = tmp_path / "junk.model"
    junk.write_bytes(b"junk")
    assert main(["tag", "--input", str(bad), "--model", str(junk)]) == 2


def test_strict_flag(tmp_path):
    f = tmp_path / "x.tsv"
    f.write_text("a\txx\tN\n", encoding="utf-8")
    assert main(["cmi", "--input", str(f)]) == 0
    assert main(["cmi", "--input", str(f), "--strict"]) == 2


def test_pipeline(tmp_path, capsys):
    corpus = tmp_path / "corpus.tsv"
    folds = tmp_path / "folds"
    model = tmp_path / "m.cmxcrf"
    pred = tmp_path / "pred.tsv"
    assert main(["synth", "--output", str(corpus)]) == 0
    assert main(["split", "--input", str(corpus), "--output", str(folds)]) == 0
    train_part = folds / "fold1.train.tsv"
    assert train_part.exists() and (folds / "fold5.test.tsv").exists()
    assert main(["train", "--input", str(train_part), "--model", str(model)]) == 0
    assert main(["tag", "--input", str(train_part), "--model", str(model), "--output", str(pred)]) == 0
    capsys.readouterr()
    assert main(["eval", "--gold", str(train_part), "--pred", str(pred), "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["weighted_f1"] >= 0.99


def test_outputs_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    for p in (a, b):
        assert main(["synth", "--seed", "9", "--mixing", "0.5", "--langpair", "te", "--output", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    ma, mb = tmp_path / "a.m", tmp_path / "b.m"
    for m in (ma, mb):
        assert main(["train", "--input", str(a), "--model", str(m), "--max-iter", "30", "--c1", "0.2"]) == 0
    assert ma.read_bytes() == mb.read_bytes()


def test_tag_output_keeps_structure(synth_file, tmp_path):
    model = tmp_path / "m"
    out = tmp_path / "tagged.tsv"
    assert main(["train", "--input", str(synth_file), "--model", str(model), "--max-iter", "20"]) == 0
    assert main(["tag", "--input", str(synth_file), "--model", str(model), "--output", str(out)]) == 0
    src, tagged = read_corpus(synth_file), read_corpus(out)
    assert [u.forms for u in src] == [u.forms for u in tagged]
    assert [u.meta for u in src] == [u.meta for u in tagged]


def test_eval_tsv(synth_file, capsys):
    assert main(["eval", "--gold", str(synth_file), "--pred", str(synth_file)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[-2] == "weighted_f1\t1.0000"


def test_grid(synth_file, capsys):
    args = ["grid", "--input", str(synth_file), "--c1-grid", "0,0.5", "--c2-grid", "0.1", "--folds", "3", "--max-iter", "20"]
    assert main(args) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "c1\tc2\tfold1\tfold2\tfold3\tmean"
    assert len(out) == 4
    assert out[-1].startswith("best c1=")
    assert main(args + ["--format", "json"]) == 0
    assert set(json.loads(capsys.readouterr().out)) == {"rows", "best"}


def test_grid_bad_values():
    assert main(["grid", "--input", "x", "--c1-grid", "a,b"]) == 1
    assert main(["grid", "--input", "x", "--c1-grid", "0.1,0.1"]) == 1


def test_split_folds_validation(synth_file, tmp_path):
    assert main(["split", "--input", str(synth_file), "--output", str(tmp_path / "o"), "--folds", "1"]) == 1


def test_manifest(tmp_path, capsys):
    rows = []
    for lp, col in (("hi", "Twitter"), ("te", "Facebook")):
        for part, seed in (("train", 1), ("test", 2)):
            assert main(["synth", "--langpair", lp, "--seed", str(seed), "--num-utterances", "40",
                         "--output", str(tmp_path / f"{lp}.{part}.tsv")]) == 0
        rows.append(f"{lp}.train.tsv\t{lp}.test.tsv\t{lp}.model\tcoarse\t{lp}\t{col}")
    manifest = tmp_path / "jobs.tsv"
    manifest.write_text("# train test model tag-column row column\n" + "\n".join(rows) + "\n", encoding="utf-8")
    capsys.readouterr()
    assert main(["train", "--manifest", str(manifest), "--max-iter", "30"]) == 0
    out = capsys.readouterr().out
    assert (tmp_path / "hi.model").exists() and (tmp_path / "te.model").exists()
    assert "Language" in out and "Twitter" in out and "overall (platform)" in out


def test_manifest_bad_row(tmp_path):
    manifest = tmp_path / "jobs.tsv"
    manifest.write_text("a\tb\n", encoding="utf-8")
    assert main(["train", "--manifest", str(manifest)]) == 2


def test_console_entry_point(synth_file):
    proc = subprocess.run(
        [sys.executable, "-m", "cmxtag.cli", "cmi", "--input", str(synth_file), "--format", "json"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["num_utt"] == 60
