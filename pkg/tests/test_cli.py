"""End-to-end runs of the command line interface."""

import json

import pytest

from fomodal.cli import main
from fomodal.jsonio import proof_from_json, proof_to_json, sequent_from_json
from fomodal.refine import refine_proof
from fomodal.sequents import NestedSequent, parse_nested, to_labeled

from fixtures import EX_FRAME, elimination_initial


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def _json(out):
    return json.loads(out)


def test_prove_serial_formula(capsys):
    code, out = _run(capsys, "prove", "--serial", "<> ~false")
    assert code == 0
    assert _json(out)["status"] == "proved"


def test_prove_failure_exit_code(capsys):
    code, out = _run(capsys, "prove", "<> ~false")
    assert code == 1
    payload = _json(out)
    assert payload["status"] == "exhausted"
    assert payload["complete"] is True


def test_prove_sequent_with_proof_payload(capsys):
    code, out = _run(capsys, "prove", "--sequent", "--path", "0:2",
                     "--proof", "<><> p ; |- <> p")
    assert code == 0
    payload = _json(out)
    tree = proof_from_json(payload["proof"])
    assert tree.conclusion == parse_nested("<><> p ; |- <> p")


def test_prove_budget_flags(capsys):
    code, out = _run(capsys, "prove", "--serial", "--max-creations", "2",
                     "<> <> <> <> ~false")
    assert code == 1
    assert _json(out)["complete"] is False


def test_grammar_member_and_pretty(capsys):
    code, out = _run(capsys, "grammar", "--system", "s4", "--start", "d",
                     "--string", "ddd", "--pretty")
    assert code == 0
    assert "member" in out
    code, out = _run(capsys, "grammar", "--system", "s4", "--start", "d",
                     "--string", "bdd", "--pretty")
    assert code == 1
    assert "non-member" in out


def test_grammar_explicit_productions(capsys):
    code, out = _run(capsys, "grammar", "--production", "d -> eps",
                     "--production", "d -> dd", "--start", "d",
                     "--string", "eps")
    assert code == 0
    assert _json(out)["member"] is True


def test_grammar_sg_needs_path(capsys):
    code, _ = _run(capsys, "grammar", "--system", "sg", "--start", "d",
                   "--string", "d")
    assert code == 3


def test_check_good_and_corrupted_proof(capsys, tmp_path):
    proof = elimination_initial()
    good = tmp_path / "good.json"
    good.write_text(json.dumps(proof_to_json(proof)))
    code, out = _run(capsys, "check", "--calculus", "g3",
                     "--frame-paths", "0:2", "--inc-dom", str(good))
    assert code == 0
    assert _json(out)["ok"] is True

    obj = proof_to_json(proof)
    node = obj
    while node["premises"]:
        node = node["premises"][0]
    node["rule"] = "bot_l"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    code, out = _run(capsys, "check", "--calculus", "g3",
                     "--frame-paths", "0:2", "--inc-dom", str(bad))
    assert code == 4
    payload = _json(out)
    assert payload["ok"] is False
    assert "node" in payload and "message" in payload


def test_translate_round_trip(capsys, tmp_path):
    text = "<>p ; x |- [p ; |- exists y. q(y)]@v @w"
    code, out = _run(capsys, "translate", "--to-labeled", text)
    assert code == 0
    labeled = tmp_path / "labeled.json"
    labeled.write_text(out)
    code, out = _run(capsys, "translate", "--to-nested", str(labeled))
    assert code == 0
    assert sequent_from_json(_json(out)) == parse_nested(text)


def test_translate_rejects_wrong_direction(capsys):
    code, _ = _run(capsys, "translate", "--to-nested",
                   "<>p ; |- [p ; |- ]@v @w")
    assert code == 3


def test_refine_outputs_steps(capsys, tmp_path):
    src = tmp_path / "proof.json"
    src.write_text(json.dumps(proof_to_json(elimination_initial())))
    code, out = _run(capsys, "refine", "--path", "0:2", "--inc-dom", str(src))
    assert code == 0
    payload = _json(out)
    ops = [step["op"] for step in payload["steps"]]
    assert ops == ["retag", "swap", "absorb", "swap", "absorb"]
    refined = proof_from_json(payload["proof"])
    expected = refine_proof(EX_FRAME, elimination_initial())
    assert refined == expected.proof


def test_refine_wrong_frame_is_check_failure(capsys, tmp_path):
    src = tmp_path / "proof.json"
    src.write_text(json.dumps(proof_to_json(elimination_initial())))
    code, _ = _run(capsys, "refine", str(src))
    assert code == 4


def test_graph_lists_edges_and_reachability(capsys):
    text = "wRv, wRu, y in D(w), z in D(u) |- v: exists x. p(x), u: <>(q | r)"
    code, out = _run(capsys, "graph", "--source", "u", "--char", "d",
                     "--path", "1:1", "--inc-dom", text)
    assert code == 0
    payload = _json(out)
    assert set(payload["vertices"]) == {"w", "v", "u"}
    assert payload["vertices"]["w"] == ["y"]
    assert ["w", "d", "v"] in payload["edges"]
    assert "v" in payload["reachable"]
    assert payload["witnesses"]["v"]["chars"] == ["b", "d"]


def test_countermodel_found_and_absent(capsys):
    code, out = _run(capsys, "countermodel", "exists x. (p(x) | ~p(x))")
    assert code == 2
    payload = _json(out)
    assert payload["status"] == "countermodel"
    assert payload["model"]["domains"] == [[]]
    code, out = _run(capsys, "countermodel", "--nonempty-dom",
                     "exists x. (p(x) | ~p(x))")
    assert code == 0
    assert _json(out)["status"] == "none"


def test_output_file_and_stdin(capsys, tmp_path):
    dest = tmp_path / "result.json"
    code, out = _run(capsys, "prove", "--serial", "-o", str(dest),
                     "<> ~false")
    assert code == 0
    assert json.loads(dest.read_text())["status"] == "proved"


def test_input_error_exit_codes(capsys):
    assert _run(capsys, "prove", "((p")[0] == 3
    assert _run(capsys, "check", "{not json")[0] == 3
    assert _run(capsys, "no-such-command")[0] == 3
    assert _run(capsys, "grammar", "--start", "d", "--string", "d")[0] == 3


def test_prove_pretty_prints_proof_tree(capsys):
    code, out = _run(capsys, "prove", "--serial", "--proof", "--pretty",
                     "<> ~false")
    assert code == 0
    assert "[d]" in out or "[dia_l]" in out
