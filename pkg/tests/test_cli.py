import json

import pytest

from ptamc.cli import main, parse_program
from ptamc.model import load_model
from ptamc.testkit.gadgets import Dec, Halt, Inc

TWO = """locations:
  - {name: q, rate: 2}
  - {name: "q'", rate: 5}
edges:
  - {from: q, to: "q'", guard: "x<=1"}
  - {from: "q'", to: "q'"}
"""


@pytest.fixture
def two_file(tmp_path):
    p = tmp_path / "two.yaml"
    p.write_text(TWO)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_check_exit_codes(capsys):
    code, out = run(capsys, "check", "--model", "repair", "--formula", "AG(Problem => EF{c<=47} OK)")
    assert code == 0 and out.out.startswith("holds at (OK,0)")
    code, _ = run(capsys, "check", "--model", "repair", "--formula", "AG(Problem => EF{c<=46} OK)")
    assert code == 1


def test_check_json_uses_exact_rationals(capsys):
    code, out = run(capsys, "check", "--model", "repair", "--formula", "EF{c<=35} OK", "--state", "Cheap,5",
                    "--format", "json")
    doc = json.loads(out.out)
    assert code == 0 and doc["verdict"] is True
    assert doc["sat"]["Expensive"] == "[25/4,15]"
    assert doc["stats"]["g"] == "1/12"


def test_wmtl_outside_fragment(capsys):
    code, out = run(capsys, "check", "--model", "repair", "--logic", "wmtl", "--formula", "F{c<=3} OK")
    assert code == 2 and "stopwatch" in out.err


def test_errors(capsys, tmp_path):
    code, out = run(capsys, "check", "--model", "nope.yaml", "--formula", "a")
    assert code == 2 and "no such model" in out.err
    bad = tmp_path / "bad.yaml"
    bad.write_text("locations:\n  - {name: a}\nedges:\n  - {from: a, to: b}\n")
    code, out = run(capsys, "check", "--model", str(bad), "--formula", "a")
    assert code == 2 and "line 4" in out.err
    code, out = run(capsys, "check", "--model", "repair", "--formula", "EF{c<=} OK")
    assert code == 2


def test_dump_cost_graph(capsys, two_file):
    code, out = run(capsys, "dump", "--model", two_file, "--what", "cost-graph")
    assert code == 0 and "(q,{0}) -> (q',{1}) [2,5]" in out.out


def test_dump_dot_outputs(capsys, two_file):
    for what in ("regions", "model"):
        code, out = run(capsys, "dump", "--model", two_file, "--what", what, "--format", "dot")
        assert code == 0 and out.out.startswith("digraph")
    code, out = run(capsys, "dump", "--model", "repair", "--what", "ata", "--logic", "wmtl",
                    "--formula", "G(a => F{<=3} b)", "--format", "dot")
    assert code == 0 and "doublecircle" in out.out


def test_oracle_agrees(capsys):
    code, out = run(capsys, "oracle", "--model", "repair", "--formula", "EF{c<=47} OK", "--state", "Problem,0",
                    "--grid", "1/24")
    assert code == 0 and "AGREE" in out.out
    code, out = run(capsys, "oracle", "--model", "repair", "--formula", "EF{c<=46} OK", "--state", "Problem,0",
                    "--depth", "3")
    assert code == 0 and "ORACLE-INCONCLUSIVE" in out.out


def test_generate_roundtrips(capsys):
    code, out = run(capsys, "generate", "random", "--seed", "3", "--stopwatch")
    assert code == 0 and load_model(out.out).cost().is_stopwatch()
    code, out = run(capsys, "generate", "binary", "--n", "2", "--format", "json")
    doc = json.loads(out.out)
    assert "formula" in doc or "locations" in doc


def test_generate_2cm(capsys):
    code, out = run(capsys, "generate", "2cm", "--program", "inc 1 1; halt")
    assert code == 0 and "m1.Halt" in out.out


def test_parse_program():
    assert parse_program("inc 1 1; dec 2 2 0; halt").instructions == (Inc(1, 1), Dec(2, 2, 0), Halt())
    with pytest.raises(Exception):
        parse_program("jump 3")
