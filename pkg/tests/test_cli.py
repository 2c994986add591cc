from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from sepmon import corpus
from sepmon.cli import RunConfig, default_bounds, main, to_dot
from sepmon.graph import graph_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


@pytest.fixture
def graph_file(tmp_path):
    def write(name, obj=None):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(obj if obj is not None else graph_to_json(corpus.load(name))))
        return str(p)

    return write


# -- validate and input errors ---------------------------------------------------------------


def test_validate_intro(capsys, graph_file):
    code, out, _ = run(capsys, "validate", graph_file("intro"))
    (r,) = records(out)
    assert code == 0 and r["adaptable"] is True and r["conditionF"]["holds"] is False
    assert r["free"] == ["1", "2", "3"] and r["regular"] == []


def test_validate_tilde(capsys):
    _, out, _ = run(capsys, "validate", "corpus:intro_tilde")
    assert records(out)[0]["conditionF"]["holds"] is True


def test_malformed_json_exits_2(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"vertices": [1,\n')
    code, out, err = run(capsys, "validate", str(p))
    assert code == 2 and out == ""
    assert "ParseError" in err and "line 2" in err


def test_missing_file_and_bad_graph_exit_2(capsys, tmp_path, graph_file):
    assert run(capsys, "validate", str(tmp_path / "none.json"))[0] == 2
    bad = graph_file("dangling", {"vertices": ["a"], "edges": [{"id": "e", "src": "a", "dst": "z"}], "groups": {"a": [["e"]]}})
    code, _, err = run(capsys, "validate", bad)
    assert code == 2 and "DanglingEndpoint" in err


def test_not_adaptable_exits_1(capsys, graph_file):
    # a 2-cycle where one vertex has two groups
    g = {
        "vertices": ["u", "w"],
        "edges": [{"id": i, "src": i[0], "dst": i[1]} for i in ("uw", "uu", "wu", "ww")],
        "groups": {"u": [["uw"], ["uu"]], "w": [["wu", "ww"]]},
    }
    code, out, _ = run(capsys, "validate", graph_file("cyc", g))
    assert code == 1 and records(out)[0]["status"] == "Fails"


# -- bounded commands ---------------------------------------------------------------------------


def test_eq_statuses(capsys):
    code, out, _ = run(capsys, "eq", "corpus:m_graph", "p", "p + a")
    assert code == 0 and records(out)[0]["status"] == "EqualCertified"
    code, out, _ = run(capsys, "eq", "corpus:m_graph", "a", "b")
    assert code == 0 and records(out)[0]["certificate"]["invariant"] == "support_closure"


def test_unknown_exits_3(capsys):
    code, out, _ = run(capsys, "eq", "corpus:m_graph", "p", "p + 2*a + 2*b", "--depth", "1")
    assert code == 3 and records(out)[0]["status"] == "Unknown"


def test_records_have_sorted_keys(capsys):
    _, out, _ = run(capsys, "pipeline", "corpus:m_graph")
    for line in out.splitlines():
        r = json.loads(line)
        assert line == json.dumps(r, sort_keys=True)


def test_m_graph_pipeline(capsys):
    code, out, _ = run(capsys, "pipeline", "corpus:m_graph")
    rs = records(out)
    by = {r["step"]: r for r in rs if "step" in r}
    assert code == 0
    assert by["chain"]["length"] == 0 and by["blocks"]["count"] == 2
    assert rs[-1]["step"] == "summary" and rs[-1]["status"] == "Verified"


def test_sink_pipeline_is_trivial(capsys):
    code, out, _ = run(capsys, "pipeline", "corpus:sink")
    assert code == 0 and records(out)[-1]["status"] == "Verified"


def test_intro_pipeline(capsys):
    code, out, _ = run(capsys, "pipeline", "corpus:intro")
    rs = records(out)
    assert code == 0
    assert [r["status"] for r in rs if r.get("step") == "pushout"] == ["Verified"]
    assert rs[-1]["status"] == "Verified"


def test_pushout_negative_control(capsys):
    # the control is expected to fail, so catching it is a success
    code, out, _ = run(capsys, "pushout-verify", "corpus:intro", "--negative-control")
    (ctrl,) = [r for r in records(out) if r["step"] == "pushout_negative_control"]
    assert code == 0 and ctrl["status"] == "Holds"
    assert ctrl["report"]["status"] == "Fails" and ctrl["report"]["witness"]["case"] == "mixed"


def test_refine_square(capsys):
    code, out, _ = run(capsys, "refine", "corpus:m_graph", "p", "a", "p", "b")
    (r,) = records(out)
    assert code == 0 and r["status"] == "Square"


def test_refine_sample_is_seeded(capsys):
    a = run(capsys, "refine", "corpus:intro", "--sample", "15", "--seed", "3")[1]
    b = run(capsys, "refine", "corpus:intro", "--sample", "15", "--seed", "3")[1]
    assert a == b


def test_k0_text(capsys):
    code, out, _ = run(capsys, "k0", "corpus:intro", "--format", "text")
    assert code == 0 and "Z" in out


# -- configuration -------------------------------------------------------------------------------


def test_default_bounds(monkeypatch):
    monkeypatch.delenv("SEPMON_DEFAULT_BOUNDS", raising=False)
    assert default_bounds() == (8, 64, 4)
    monkeypatch.setenv("SEPMON_DEFAULT_BOUNDS", "2,16,3")
    assert default_bounds() == (2, 16, 3)


def test_env_bounds_reach_commands():
    env = dict(os.environ, SEPMON_DEFAULT_BOUNDS="1,64,2")
    res = subprocess.run(
        [sys.executable, "-m", "sepmon", "eq", "corpus:m_graph", "p", "p + 2*a + 2*b"],
        capture_output=True, text=True, env=env,
    )
    assert res.returncode == 3
    assert json.loads(res.stdout)["bounds"]["depth"] == 1


def test_negative_bounds_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eq", "corpus:m_graph", "a", "b", "--depth", "-1"])
    assert exc.value.code == 2
    with pytest.raises(ValueError):
        RunConfig(depth=-1)


# -- DOT ---------------------------------------------------------------------------------------


def _dot_counts(text):
    lines = [l.strip() for l in text.splitlines()]
    nodes = [l for l in lines if l.endswith(";") and "->" not in l and l.startswith('"')]
    edges = [l for l in lines if "->" in l]
    return nodes, edges


def test_dot_intro():
    text = to_dot(corpus.load("intro"), "graph")
    nodes, edges = _dot_counts(text)
    assert len(nodes) == 3 and len(edges) == 6
    colors = {l.split('color="')[1].split('"')[0] for l in edges if l.startswith('"1" ->')}
    assert len(colors) == 2
    assert all("style=bold" in l for l in edges if '"1" -> "2"' in l or '"2" -> "3"' in l)
    assert not any("style=bold" in l for l in edges if '"1" -> "1"' in l)


def test_dot_reduced_tilde():
    nodes, edges = _dot_counts(to_dot(corpus.load("intro_tilde"), "reduced"))
    assert len(nodes) == 5 and len(edges) == 4


def test_dot_sink():
    nodes, edges = _dot_counts(to_dot(corpus.load("sink"), "graph"))
    assert len(nodes) == 1 and edges == []


def test_dot_command_is_deterministic(capsys):
    a = run(capsys, "dot", "corpus:intro_three", "--what", "poset")[1]
    b = run(capsys, "dot", "corpus:intro_three", "--what", "poset")[1]
    assert a == b and a.startswith("digraph")


def test_stdin_input(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(graph_to_json(corpus.load("m_graph")))))
    code, out, _ = run(capsys, "k0", "-")
    assert code == 0 and records(out)[0]["group"] == "Z"
