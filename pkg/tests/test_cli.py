"""End-to-end CLI: document grammar, exit codes, rendering."""

import json
import re

import pytest

from charfol import FoliationGraph, zoo
from charfol.cli import FoliationDocument, ParseError, emit, main, parse, render_dot, render_svg
from charfol.tightness import universe_cached

ZOO_NAMES = sorted(zoo.ZOO)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_doc(tmp_path, text, name="doc.fol"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# ------------------------------------------------------------ parse and emit


@pytest.mark.parametrize("name", ZOO_NAMES)
def test_emit_parse_round_trip(name):
    g = zoo.example(name)
    text = emit(g)
    doc = parse(text)
    assert doc.graph.canonical_form() == g.canonical_form()
    assert doc.values is None and doc.transcript is None
    assert emit(doc) == text  # canonical form is a fixed point


def test_round_trip_keeps_values_and_transcript():
    g = zoo.example("tight_one_saddle")
    from fractions import Fraction

    doc = FoliationDocument(
        g,
        {"a": Fraction(0), "b": Fraction(0), "h": Fraction(1, 2), "z": Fraction(1)},
        {"note": ["resolved", 2]},
    )
    text = emit(doc)
    again = parse(text)
    assert again.values == doc.values
    assert again.transcript == doc.transcript
    assert emit(again) == text


def test_round_trip_on_enumerated_universe():
    for graphs in universe_cached(2).values():
        for g in graphs:
            assert parse(emit(g)).graph.canonical_form() == g.canonical_form()


def test_parse_accepts_comments_and_blank_lines():
    doc = parse(
        "foliation v1\n"
        "# two elliptic points and the marker leaf\n"
        "\n"
        "point p elliptic +\n"
        "point q elliptic -\n"
        "sep m0 p q marker\n"
        "rot p: m0.src\n"
        "rot q: m0.tgt\n"
    )
    assert doc.graph.is_isomorphic(zoo.trivial())


SYNTAX_ERRORS = [
    ("foliation v2\npoint p elliptic +\n", "header", 1),
    ("point p elliptic +\n", "header", 1),
    ("foliation v1\npoint p parabolic +\n", "kind", 2),
    ("foliation v1\npoint p elliptic\n", "point line needs", 2),
    ("foliation v1\npoint p elliptic +\npoint p elliptic -\n", "duplicate point", 3),
    ("foliation v1\nsep e a\n", "sep line needs", 2),
    ("foliation v1\nsep e a b extra words here\n", "unknown separatrix flag", 2),
    ("foliation v1\nwibble p\n", "unknown key", 2),
    ("foliation v1\npoint p elliptic +\nvalue p 1/0\n", "zero denominator", 3),
    ("foliation v1\npoint p elliptic +\nvalue p one\n", "malformed rational", 3),
    ("foliation v1\npoint p elliptic +\nvalue q 1/2\n", "unknown point", 3),
    ("foliation v1\npoint p elliptic +\nrot p m0.src\n", "rot line needs", 3),
    ("foliation v1\ntranscript {not json}\n", "bad transcript", 2),
]


@pytest.mark.parametrize("text,needle,line", SYNTAX_ERRORS)
def test_syntax_errors_carry_line_numbers(text, needle, line):
    with pytest.raises(ParseError) as err:
        parse(text)
    message = str(err.value)
    assert needle in message
    assert f"line {line}" in message


def test_homoclinic_flag_must_match_endpoints():
    text = (
        "foliation v1\n"
        "point p elliptic +\n"
        "point q elliptic -\n"
        "sep m0 p q marker homoclinic\n"
        "rot p: m0.src\n"
        "rot q: m0.tgt\n"
    )
    with pytest.raises(ParseError, match="homoclinic"):
        parse(text)


# ----------------------------------------------------------------- commands


def test_validate_exit_codes(tmp_path, capsys):
    good = write_doc(tmp_path, emit(zoo.example("tight_one_saddle")))
    code, out, _ = run(capsys, "validate", "-i", good)
    assert code == 0 and out == "valid\n"

    broken = emit(zoo.example("tight_one_saddle")).replace("rot h:", "rot_bad h:")
    bad = write_doc(tmp_path, broken, "bad.fol")
    code, out, err = run(capsys, "validate", "-i", bad)
    assert code == 2 and "syntax error" in err

    # structurally wrong but parseable: drop one rotation line entirely
    lines = [l for l in emit(zoo.example("tight_one_saddle")).splitlines() if not l.startswith("rot z")]
    code, out, _ = run(capsys, "validate", "-i", write_doc(tmp_path, "\n".join(lines), "inv.fol"), "--json")
    assert code == 2
    payload = json.loads(out)
    assert payload["valid"] is False and payload["problems"]


def test_decide_exit_codes_and_json(tmp_path, capsys):
    tight = write_doc(tmp_path, emit(zoo.example("tight_one_saddle")))
    code, out, _ = run(capsys, "decide", "-i", tight)
    assert code == 0 and "verdict: tight" in out and "value h = 1/2" in out

    loop = write_doc(tmp_path, emit(zoo.example("overtwisted_loop_positive")), "l.fol")
    code, out, _ = run(capsys, "decide", "-i", loop, "--json")
    assert code == 1
    payload = json.loads(out)
    assert payload["verdict"] == "overtwisted"
    assert payload["polygon"]["same_sign"] is True


def test_decide_json_is_byte_identical_between_runs(tmp_path, capsys):
    for name in ZOO_NAMES:
        path = write_doc(tmp_path, emit(zoo.example(name)), f"{name}.fol")
        _, first, _ = run(capsys, "decide", "-i", path, "--json")
        _, second, _ = run(capsys, "decide", "-i", path, "--json")
        assert first == second


def test_tame_synthesize_then_verify_pipeline(tmp_path, capsys):
    bare = write_doc(tmp_path, emit(zoo.example("three_basin_chain")))
    code, out, _ = run(capsys, "tame", "-i", bare)
    assert code == 0
    assert "value h0 1/3" in out and "value h1 2/3" in out

    tamed = write_doc(tmp_path, out, "tamed.fol")
    code, verify_out, _ = run(capsys, "tame", "-i", tamed)
    assert code == 0
    assert "tames_simply: yes" in verify_out

    code, out, _ = run(capsys, "tame", "-i", tamed, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload == {
        "mode": "verify",
        "lyapunov": True,
        "taming": True,
        "circle_simple": True,
        "component_simple": True,
        "tames_simply": True,
    }


def test_tame_reports_untamable_inputs(tmp_path, capsys):
    loop = write_doc(tmp_path, emit(zoo.example("overtwisted_loop_positive")))
    code, out, _ = run(capsys, "tame", "-i", loop)
    assert code == 1 and "no simple taming order" in out


def test_extend_outputs_records(tmp_path, capsys):
    path = write_doc(tmp_path, emit(zoo.example("tight_one_saddle")))
    code, out, _ = run(capsys, "extend", "-i", path)
    assert code == 0
    assert "zero-cell" in out and "half-handle-1" in out and "cap" in out

    code, out, _ = run(capsys, "extend", "-i", path, "--json")
    payload = json.loads(out)
    assert [r["kind"] for r in payload["records"]] == [
        "zero-cell", "zero-cell", "half-handle-1", "cap",
    ]

    loop = write_doc(tmp_path, emit(zoo.example("overtwisted_loop_positive")), "l.fol")
    code, out, _ = run(capsys, "extend", "-i", loop)
    assert code == 1 and "no simple taming order" in out


def test_oracle_command(tmp_path, capsys):
    path = write_doc(tmp_path, emit(zoo.example("tight_one_saddle")))
    code, out, _ = run(capsys, "oracle", "-i", path, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["tight"] is True and payload["order"] == ["h"]

    cyc = write_doc(tmp_path, emit(zoo.example("double_join_cycle")), "c.fol")
    code, out, _ = run(capsys, "oracle", "-i", cyc)
    assert code == 1 and "tight: no" in out

    conn = write_doc(tmp_path, emit(zoo.example("tight_saddle_connection")), "h.fol")
    code, _, err = run(capsys, "oracle", "-i", conn)
    assert code == 2 and "connection-free" in err


def test_enumerate_streams_documents(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-saddles", "1")
    assert code == 0
    docs = [d for d in out.split("foliation v1") if d.strip()]
    assert len(docs) == 5
    code, out2, _ = run(capsys, "enumerate", "--max-saddles", "1")
    assert out == out2  # deterministic stream

    code, out, _ = run(capsys, "enumerate", "--max-saddles", "1", "--embryos", "--homoclinics", "--json")
    payload = json.loads(out)
    assert len(payload) == 7
    for data in payload:
        assert FoliationGraph.from_data(data).validate() == []


def test_invariants_command(tmp_path, capsys):
    path = write_doc(tmp_path, emit(zoo.example("three_basin_chain")))
    code, out, _ = run(capsys, "invariants", "-i", path, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["surplus"] == [1, 1]
    assert payload["basins"] == [["p0", [0]], ["p1", [1, 2]], ["p2", [3]]]
    assert payload["positive_tree"]["is_tree"] is True
    assert payload["same_sign_polygon"] is None

    loop = write_doc(tmp_path, emit(zoo.example("overtwisted_loop_positive")), "l.fol")
    code, out, _ = run(capsys, "invariants", "-i", loop)
    assert code == 0 and "same-sign polygon: faces 0" in out


def test_unknown_file_is_an_io_error(capsys):
    code, _, err = run(capsys, "decide", "-i", "/nonexistent/only/in/tests.fol")
    assert code == 2 and "io error" in err


# ----------------------------------------------------------------- rendering


def test_render_dot_structure(tmp_path, capsys):
    path = write_doc(tmp_path, emit(zoo.example("tight_one_saddle")))
    code, out, _ = run(capsys, "render", "-i", path, "--format", "dot")
    assert code == 0
    assert out.count('subgraph "cluster_basin_') == 2
    assert '"h" [' in out and "diamond" in out
    # unstable separatrices form the skeleton and draw heavier
    assert out.count("penwidth=2") == 2

    conn = write_doc(tmp_path, emit(zoo.example("tight_saddle_connection")), "c.fol")
    code, out, _ = run(capsys, "render", "-i", conn, "--format", "dot")
    assert code == 0 and "color=red" in out


def test_render_svg_structure(tmp_path, capsys):
    path = write_doc(tmp_path, emit(zoo.example("tight_one_saddle")))
    code, out, _ = run(capsys, "render", "-i", path, "--format", "svg")
    assert code == 0
    for pid in ("a", "b", "h", "z"):
        assert f'id="point-{pid}"' in out
    for eid in ("ea", "eb", "f0", "f1"):
        assert f'id="edge-{eid}"' in out
    code, again, _ = run(capsys, "render", "-i", path, "--format", "svg")
    assert again == out  # layout is deterministic


def test_render_svg_draws_the_bigon_with_two_arcs(tmp_path, capsys):
    path = write_doc(tmp_path, emit(zoo.example("overtwisted_loop_positive")))
    code, out, _ = run(capsys, "render", "-i", path, "--format", "svg")
    assert code == 0
    arcs = {}
    for eid in ("g0", "g1"):
        m = re.search(rf'id="edge-{eid}"[^>]*?\sd="([^"]+)"', out)
        assert m, eid
        arcs[eid] = m.group(1)
    # the two separatrices share endpoints but must not overlap
    assert arcs["g0"] != arcs["g1"]


def test_render_rejects_invalid_documents(tmp_path, capsys):
    lines = [l for l in emit(zoo.example("trivial")).splitlines() if not l.startswith("rot q")]
    path = write_doc(tmp_path, "\n".join(lines))
    code, _, _ = run(capsys, "render", "-i", path, "--format", "svg")
    assert code == 2


def test_library_render_matches_cli(tmp_path, capsys):
    g = zoo.example("trivial")
    path = write_doc(tmp_path, emit(g))
    _, out, _ = run(capsys, "render", "-i", path, "--format", "dot")
    assert out == render_dot(g)
    _, out, _ = run(capsys, "render", "-i", path, "--format", "svg")
    assert out == render_svg(g)
