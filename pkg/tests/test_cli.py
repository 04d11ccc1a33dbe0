import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from snakelemma import Algebra, from_jordan
from snakelemma.cli import dump, parse, parse_report, run, workspace_from_sequence
from snakelemma.decider import resolution_sequence

DATA = Path(__file__).resolve().parent.parent / "data"
HEADLINE_DOC = DATA / "paper_example.json"
SNAKE_DOC = DATA / "snake_demo.json"

ALPHA_DOC = {
    "field": 2,
    "nilpotency": 3,
    "modules": {"S": {"jordan": [1]}, "N": {"jordan": [2]}, "R": {"jordan": [3]}},
    "maps": {
        "i": {"src": "S", "tgt": "N", "matrix": [[0], [1]]},
        "q": {"src": "N", "tgt": "S", "matrix": [[1, 0]]},
    },
    "sequences": {"alpha": ["i", "q"]},
}


def run_doc(cmd, doc, *extra):
    return run([cmd, "-", *extra], io.StringIO(json.dumps(doc)))


def test_parse_alpha():
    ws = parse(json.dumps(ALPHA_DOC))
    assert set(ws.modules) == {"S", "N", "R"}
    assert len(ws.sequence("alpha")) == 3


def test_nonlinear_map_names_the_map():
    doc = json.loads(json.dumps(ALPHA_DOC))
    doc["maps"]["i"]["matrix"] = [[1], [0]]
    code, text = run_doc("validate", doc)
    assert code == 2 and "[i]" in text


def test_bad_dimensions_exit_2():
    doc = json.loads(json.dumps(ALPHA_DOC))
    doc["maps"]["q"]["matrix"] = [[1, 0, 0]]
    code, text = run_doc("validate", doc)
    assert code == 2 and "q" in text


def test_unknown_reference_exit_2():
    doc = json.loads(json.dumps(ALPHA_DOC))
    doc["sequences"]["alpha"] = ["i", "nope"]
    assert run_doc("validate", doc)[0] == 2


def test_non_nilpotent_action_exit_2():
    doc = json.loads(json.dumps(ALPHA_DOC))
    doc["modules"]["X"] = {"dim": 1, "action": [[1]]}
    code, text = run_doc("validate", doc)
    assert code == 2 and "X" in text


@pytest.mark.parametrize("text", ["{", "[1, 2]", '{"field": 2}', '{"field": "two", "nilpotency": 3, "modules": {}, "maps": {}, "sequences": {}}'])
def test_malformed_exit_1(text):
    assert run(["validate", "-"], io.StringIO(text))[0] == 1


def test_usage_errors():
    assert run(["bogus"])[0] == 64
    assert run([])[0] == 64
    assert run(["example", "nonsense"])[0] == 64
    assert run(["decide", str(DATA / "missing.json")])[0] == 64


def test_round_trip_idempotent():
    ws = parse(HEADLINE_DOC.read_text())
    once = json.dumps(dump(ws), sort_keys=True)
    twice = json.dumps(dump(parse(once)), sort_keys=True)
    assert once == twice
    assert json.loads(once) == json.loads(HEADLINE_DOC.read_text())


def test_decide_shipped_doc():
    code, text = run(["decide", str(HEADLINE_DOC)])
    assert code == 0
    rep = parse_report(text)
    assert rep["realizable"] is False and rep["obstruction"] == "toda"
    assert rep["exact"] and rep["neeman"] == {"ext3_MA_zero": True, "ext3_FK_zero": True}
    assert rep["toda"] == {"defined": True, "contains_zero": False}
    assert rep["details"]["jordan"]["K"] == [2]


def test_example_command():
    code, text = run(["example", "paper"])
    rep = parse_report(text)
    assert code == 0 and rep["obstruction"] == "toda"
    seq = rep["document"]["sequences"]["paper"]
    assert len(seq) == 5
    # the printed document decides the same way
    code2, text2 = run(["decide", "-"], io.StringIO(json.dumps(rep["document"])))
    assert code2 == 0 and parse_report(text2)["obstruction"] == "toda"


def test_example_field_and_nilpotency():
    assert parse_report(run(["example", "paper", "--field", "5"])[1])["obstruction"] == "toda"
    assert run(["example", "paper", "--nilpotency", "4"])[0] == 2
    assert run(["example", "paper", "--field", "4"])[0] == 2
    rep = parse_report(run(["example", "resolution", "--nilpotency", "4"])[1])
    assert rep["realizable"] is False


def test_snake_command():
    code, text = run(["snake", str(SNAKE_DOC)])
    rep = parse_report(text)
    assert code == 0 and rep["exact"]
    assert rep["details"]["jordan"] == [[1]] * 6
    # its output document feeds straight into decide
    code2, text2 = run(["decide", "-"], io.StringIO(json.dumps(rep["document"])))
    assert code2 == 0 and parse_report(text2)["realizable"] is True


def test_ext_and_neeman5_commands():
    rep = parse_report(run(["ext", str(SNAKE_DOC)])[1])
    assert rep["degree"] == 1 and rep["zero"] is False
    S = from_jordan(Algebra.of(2, 3), (1,))
    five = dump(workspace_from_sequence(resolution_sequence(S, 3), name="tail"))
    rep5 = parse_report(run(["neeman5", "-"], io.StringIO(json.dumps(five)))[1])
    assert rep5["exact"] is True and rep5["realizable"] is False


def test_neeman5_requires_length_five():
    assert run(["neeman5", str(HEADLINE_DOC)])[0] == 2


def test_toda_command():
    code, text = run(["toda", str(SNAKE_DOC), "--maps", "zS,zS,zS"])
    rep = parse_report(text)
    assert code == 0 and rep["toda"]["defined"] and rep["toda"]["contains_zero"]


def test_fuzz_determinism_and_schema():
    argv = ["fuzz", "--trials", "20", "--seed", "11"]
    a, b = run(argv), run(argv)
    assert a == b and a[0] == 0
    rep = parse_report(a[1])
    assert rep["realizable_count"] == 20 and rep["failures"] == []


def test_decide_determinism():
    assert run(["decide", str(HEADLINE_DOC)]) == run(["decide", str(HEADLINE_DOC)])


def test_all_reports_match_schema():
    outputs = [
        run(["validate", str(HEADLINE_DOC)]),
        run(["decide", str(HEADLINE_DOC)]),
        run(["snake", str(SNAKE_DOC)]),
        run(["ext", str(SNAKE_DOC)]),
        run(["example", "resolution"]),
        run(["fuzz", "--trials", "3"]),
    ]
    for code, text in outputs:
        assert code == 0
        parse_report(text)


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "snakelemma", "decide", str(HEADLINE_DOC)],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0 and json.loads(out.stdout)["obstruction"] == "toda"
    bad = subprocess.run([sys.executable, "-m", "snakelemma", "frobnicate"],
                         capture_output=True, text=True, check=False)
    assert bad.returncode == 64
