import json

import pytest

from projdyn.cli import main, run
from projdyn.corpus import CORPUS, corpus_argv
from projdyn.errors import InputError


def ok(argv):
    code, out, err = run(argv)
    assert code == 0, err
    return json.loads(out)


def test_corpus_list_and_unknown():
    doc = ok(["corpus", "list"])
    assert set(CORPUS) <= set(json.dumps(doc).replace('"', " ").split())
    with pytest.raises(InputError):
        corpus_argv("nope")
    code, _, err = run(["corpus", "run", "nope"])
    assert code == 2 and json.loads(err)["error"] == "input"


def test_falso_hopf_command():
    res = ok(["corpus", "run", "falso-hopf"])["result"]
    assert res["case"] == "C1.6"
    # condition (F) holds for this group, so its Kulkarni set is two lines
    assert res["condition_F"] == "holds"
    assert res["kulkarni"] == "⟨e1,e2⟩ ∪ ⟨e2,e3⟩"


def test_nine_blocks_svg(tmp_path):
    svg = tmp_path / "p.svg"
    res = ok(["corpus", "run", "nine-blocks", "--svg", str(svg)])["result"]
    assert res["blocks"]["dims"] == [3, 1, 2, 2, 1]
    assert res["middle_block"] == 2 and res["polygon"]["weights"] == [3, 1, 2, 2, 1]
    text = svg.read_text()
    assert text.startswith("<svg") and text.count("<circle") == 5


def test_json_out(tmp_path):
    out = tmp_path / "o.json"
    code, text, _ = run(["arrange", "qtable", "--param", "2", "3", "--json", str(out)])
    assert code == 0 and out.read_text() == text


def test_input_errors():
    for argv in (["classify", "--matrix", "[[1,2],[3"],
                 ["nosuch"],
                 ["classify", "--matrix", "/no/such/file.json"],
                 ["arrange", "qtable", "--param", "2", "2"],
                 ["kulkarni", "diagonal", "--alpha", "2"]):
        code, out, err = run(argv)
        assert code == 2 and out == ""
        doc = json.loads(err)
        assert doc["schema"] == "projdyn/1" and doc["error"] and doc["message"]


def test_numeric_non_resolution():
    spec = '{"w": [1, 1.4142135623730951], "mu": [0.36787944117144233, 4.1132503787829275]}'
    code, _, err = run(["kulkarni", "case1", "--spec", spec])
    assert code == 3
    assert json.loads(err)["error"] == "UnresolvedFlags"


def test_main_writes_streams(capsys):
    assert main(["arrange", "check", "--param", "2", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["result"]
    assert main(["arrange", "check", "--param", "1", "3"]) in (0, 2)


def test_classify_inline():
    res = ok(["classify", "--matrix", "[[2,0,0],[0,1,0],[0,0,\"1/2\"]]"])["result"]
    assert res["major"] == "Loxodromic"


@pytest.mark.parametrize("name", ["diagonal-d1", "a-eps-half", "slice-2-3", "cyclic-series"])
def test_corpus_entries_deterministic(name):
    a = run(["corpus", "run", name])
    b = run(["corpus", "run", name])
    assert a[0] == 0 and a == b
