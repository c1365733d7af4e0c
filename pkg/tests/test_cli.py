import json
import subprocess
import sys

import pytest

import fthreehalves.cli as cli
from fthreehalves.cli import main
from fthreehalves.words import RelationPair, Word, evaluate, relations


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_relations(capsys):
    code, out, _ = run(capsys, "verify-relations", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["ok"] and [r["name"] for r in report["relations"]] == ["REL_A", "REL_B"]
    assert all(r["word_map"] == r["pair_map"] for r in report["relations"])


def test_verify_relations_negative_control(capsys, monkeypatch):
    good = relations()
    broken = (RelationPair("REL_A", Word(str(good[0].word)[:-1]), good[0].pair), good[1])
    monkeypatch.setattr(cli, "relations", lambda: broken)
    code, out, _ = run(capsys, "verify-relations")
    assert code == 1
    assert "REL_A: FAILS" in out and "REL_B: holds" in out


def test_verify_schemas_one_group(capsys):
    code, out, _ = run(capsys, "verify-schemas", "--depth", "1", "--group", "serpent_hip", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["ok"] and report["rules"][0]["rule"] == "two_caret_hip"


def test_eval_and_identity(capsys):
    code, out, _ = run(capsys, "eval", "lL")
    assert code == 0
    assert json.loads(out) == {"points": [[["0", "1"], ["0", "1"]], [["1", "1"], ["1", "1"]]]}
    code, out, _ = run(capsys, "eval", "--pretty", "l")
    assert code == 0 and "→" in out


def test_decompose_text_and_audit(capsys):
    pair = "(pair (2 (3 * * *) (2 * *)) (2 (2 * *) (3 * * *)))"
    code, out, _ = run(capsys, "decompose", pair)
    _, direct, _ = run(capsys, "eval", pair)
    assert code == 0
    assert evaluate(out.strip()).to_json() == json.loads(direct)
    code, out, _ = run(capsys, "decompose", "lrLR", "--audit", "--check", "--format", "program")
    assert code == 0
    obj = json.loads(out)
    assert obj["audit"]["checks"]["word"] is True
    assert evaluate(Word.from_program(obj["word"])) == evaluate("lrLR")


def test_decompose_identity_notes_on_stderr(capsys):
    code, out, err = run(capsys, "decompose", "rR")
    assert code == 0 and out == "\n" and "identity" in err


def test_decompose_refuses_huge_text(capsys):
    code, _, err = run(capsys, "decompose", "rL", "--max-letters", "1000")
    assert code == 2 and "--format program" in err


def test_program_output_feeds_back_into_eval(capsys, tmp_path):
    code, out, _ = run(capsys, "decompose", "rr", "--format", "program")
    assert code == 0
    path = tmp_path / "w.json"
    path.write_text(out)
    _, direct, _ = run(capsys, "eval", "rr")
    code, via, _ = run(capsys, "eval", str(path))
    assert code == 0 and via == direct


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "l")
    assert code == 0
    a = json.loads(out)
    assert a["family"] == "StickBug" and a["stickbug_n"] == 0


@pytest.mark.parametrize(
    "arg, code, text",
    [
        ("lrx", 2, "unexpected character"),
        ('{"points": [["0", "0"], ["1/2", "1/3"], ["1", "1"]]}', 1, "slope group"),
        ('{"points": [["0", "0"], ["1/5", "1/5"], ["1", "1"]]}', 1, "breakpoint ring"),
        ("(pair (2 * (2 * *)) (3 * * *))", 1, "leaf-depth"),
        ("(pair (2 * *) (3 * * *))", 2, "leaf counts"),
        ('{"nothing": 1}', 2, "needs"),
        ("[1, 2", 2, "bad JSON"),
    ],
)
def test_errors_map_to_exit_codes(capsys, arg, code, text):
    got, _, err = run(capsys, "decompose", arg)
    assert got == code
    assert text in err


def test_random_is_deterministic(capsys):
    a = run(capsys, "random", "word", "--size", "12", "--seed", "7")[1]
    b = run(capsys, "random", "word", "--size", "12", "--seed", "7")[1]
    assert a == b and len(a.strip()) == 12 and Word(a.strip()).is_reduced()
    c = run(capsys, "random", "treepair", "--size", "3", "--seed", "7", "--json", "--reduce")[1]
    d = run(capsys, "random", "treepair", "--size", "3", "--seed", "7", "--json", "--reduce")[1]
    assert c == d and "domain" in json.loads(c)


def test_oracle_commands(capsys):
    code, out, _ = run(capsys, "oracle", "search", "--target", "lrLr", "--bound", "4")
    assert code == 0 and evaluate(out.strip()) == evaluate("lrLr")
    code, _, err = run(capsys, "oracle", "search", "--target", "lrLr", "--bound", "3")
    assert code == 1 and "no word" in err
    code, out, _ = run(capsys, "oracle", "min-length", "--target", "lrLr", "--below", "4")
    assert code == 0 and json.loads(out)["minimal"] is True


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "fthreehalves", "eval", "l"], capture_output=True, text=True)
    assert done.returncode == 0
    assert json.loads(done.stdout)["points"][0] == [["0", "1"], ["0", "1"]]
