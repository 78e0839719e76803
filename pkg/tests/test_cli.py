import io
import json
import subprocess
import sys

import pytest

from timexrules.cli import EXIT_CORPUS, EXIT_OK, EXIT_USAGE, main

TRAIN = ("last october\tDATE\t2020-10\t2021-05-17\n"
         "last november\tDATE\t2020-11\t2021-02-10\n"
         "last june\tDATE\t2018-06\t2019-08-01\n")


@pytest.fixture
def rules(tmp_path):
    corpus = tmp_path / "train.tsv"
    corpus.write_text(TRAIN)
    out = tmp_path / "rules.txt"
    assert main(["learn", "--corpus", str(corpus), "--format", "tsv", "--out", str(out)]) == EXIT_OK
    return out


def test_learn_writes_rules(rules, tmp_path, capsys):
    text = rules.read_text()
    assert "last MONTH:$1\tInstant\t(ToLast[year],ModifyEnum[$1])\t3\t3\n" in text
    out = tmp_path / "again.txt"
    main(["learn", "--corpus", str(tmp_path / "train.tsv"), "--format", "tsv", "--out", str(out)])
    assert "rules\t2\nexpressions\t3\ncaptured\t3\n" in capsys.readouterr().err
    assert out.read_text() == text


def test_apply_single(rules, capsys):
    assert main(["apply", "--rules", str(rules), "--expr", "last october", "--dct", "2021-05-17"]) == 0
    assert capsys.readouterr().out == "DATE\t2020-10\tvia=direct\n"


def test_apply_batch_from_stdin(rules, capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("last june\t2019-08-01\n\nzzz\t2019-08-01\n"))
    assert main(["apply", "--rules", str(rules)]) == EXIT_OK
    assert capsys.readouterr().out == "DATE\t2018-06\tvia=direct\n-\tFAILED\tvia=failed\n"


def test_apply_batch_file_with_shared_dct(rules, tmp_path, capsys):
    batch = tmp_path / "batch.txt"
    batch.write_text("last may\n")
    assert main(["apply", "--rules", str(rules), "--batch", str(batch), "--dct", "2021-05-17"]) == 0
    assert capsys.readouterr().out == "DATE\t2020-05\tvia=direct\n"


def test_apply_usage_errors(rules, tmp_path):
    assert main(["apply", "--rules", str(rules), "--expr", "last may"]) == EXIT_USAGE
    assert main(["apply", "--rules", str(rules), "--expr", "x", "--dct", "2021"]) == EXIT_USAGE
    assert main(["apply", "--rules", str(tmp_path / "none.txt"), "--expr", "x",
                 "--dct", "2021-05-17"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["apply"])
    assert info.value.code == EXIT_USAGE


def test_capture(capsys):
    assert main(["capture", "--base", "2021-05-17", "--target", "2020-10"]) == EXIT_OK
    assert "(ToLast[year], ModifyEnum[October])" in capsys.readouterr().out.splitlines()
    assert main(["capture", "--base", "2021-05-17", "--target", "P2M", "--pool", "2"]) == 0
    assert capsys.readouterr().out == "(Add[2,month])\n"
    assert main(["capture", "--base", "2021-05-17", "--target", "1999"]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert main(["capture", "--base", "2021-05-17", "--target", "soon"]) == EXIT_USAGE
    assert main(["capture", "--base", "2021-05-17", "--target", "P2M", "--pool", "x"]) == EXIT_USAGE


def test_eval_reports(rules, tmp_path, capsys):
    test = tmp_path / "test.tsv"
    test.write_text("last may\tDATE\t2020-05\t2021-05-17\nzzz\tDATE\t2020\t2021-05-17\n")
    assert main(["eval", "--rules", str(rules), "--corpus", str(test), "--format", "tsv",
                 "--report", "json"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["value_accuracy"] == 0.5 and report["errors"]["unseen_pattern"] == 1
    assert main(["eval", "--rules", str(rules), "--corpus", str(test), "--format", "tsv"]) == 0
    assert "type_accuracy\t0.5000" in capsys.readouterr().out


def test_corpus_errors_exit_two(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("only\tthree\tcolumns\n")
    out = tmp_path / "r.txt"
    assert main(["learn", "--corpus", str(bad), "--format", "tsv", "--out", str(out)]) == EXIT_CORPUS
    assert main(["learn", "--corpus", str(tmp_path / "nope"), "--format", "timeml",
                 "--out", str(out)]) == EXIT_CORPUS
    broken = tmp_path / "x.tml"
    broken.write_text("<TimeML>")
    assert main(["learn", "--corpus", str(broken), "--format", "timeml",
                 "--out", str(out)]) == EXIT_CORPUS
    empty = tmp_path / "empty.tsv"
    empty.write_text("# nothing\n")
    assert main(["learn", "--corpus", str(empty), "--format", "tsv", "--out", str(out)]) == EXIT_CORPUS


def test_lexicon_flag(tmp_path, capsys):
    lex = tmp_path / "lex.tsv"
    lex.write_text("MONTH\tOctober\toctober|octobre\n")
    corpus = tmp_path / "train.tsv"
    corpus.write_text(TRAIN)
    out = tmp_path / "rules.txt"
    assert main(["learn", "--corpus", str(corpus), "--format", "tsv", "--out", str(out),
                 "--lexicon", str(lex)]) == 0
    assert main(["apply", "--rules", str(out), "--expr", "last octobre", "--dct", "2021-05-17",
                 "--lexicon", str(lex)]) == 0
    assert capsys.readouterr().out.endswith("DATE\t2020-10\tvia=direct\n")
    lex.write_text("NOPE\tx\n")
    assert main(["apply", "--rules", str(out), "--expr", "x", "--dct", "2021-05-17",
                 "--lexicon", str(lex)]) == EXIT_USAGE


def test_module_entry_point(rules):
    proc = subprocess.run([sys.executable, "-m", "timexrules", "apply", "--rules", str(rules),
                           "--expr", "last june", "--dct", "2019-08-01"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "DATE\t2018-06\tvia=direct\n"
