"""Backward proof search over nested sequents."""

import pytest

from fomodal.calculi import CalculusSpec, check
from fomodal.prover import (Exhausted, Proved, ProverError, SearchBudget,
                            prove_formula, prove_sequent)
from fomodal.sequents import DuplicateLabelError, NestedSequent, parse_nested
from fomodal.syntax import frame_spec, parse_formula


def _proves(text, frame):
    result = prove_formula(frame, parse_formula(text))
    assert isinstance(result, Proved), (text, result)
    report = check(CalculusSpec("NestedN", frame), result.proof)
    assert report.ok, report.message
    return result


def _fails(text, frame):
    result = prove_formula(frame, parse_formula(text))
    assert isinstance(result, Exhausted), (text, result)
    assert result.complete
    return result


def test_propositional_theorems():
    frame = frame_spec()
    for text in ["p | ~p", "~(p & ~p)", "p -> p", "(p -> q) -> (~q -> ~p)",
                 "false -> p", "~~p -> p", "p -> ~~p"]:
        _proves(text, frame)


def test_propositional_non_theorems():
    frame = frame_spec()
    for text in ["p", "p -> q", "p | q", "~p", "<>p", "[]p -> p"]:
        _fails(text, frame)


def test_modal_axioms_match_frames():
    cases = [
        ("[](p -> q) -> ([]p -> []q)", frame_spec()),          # distribution
        ("[]p -> <>p", frame_spec(serial=True)),               # seriality
        ("<> ~false", frame_spec(serial=True)),
        ("p -> <>p", frame_spec(paths=[(0, 0)])),              # reflexivity
        ("p -> []<>p", frame_spec(paths=[(1, 0)])),            # symmetry
        ("<><>p -> <>p", frame_spec(paths=[(0, 2)])),          # transitivity
        ("<>p -> []<>p", frame_spec(paths=[(1, 1)])),          # euclidean
    ]
    for text, frame in cases:
        _proves(text, frame)
        if frame != frame_spec():
            _fails(text, frame_spec())


def test_quantifier_theorems():
    frame = frame_spec(nonempty=True)
    _proves("exists x. (p(x) | ~p(x))", frame)
    _fails("exists x. (p(x) | ~p(x))", frame_spec())
    _proves("(forall x. p(x)) -> ~(exists x. ~p(x))", frame_spec())


def test_barcan_formulas():
    barcan = "(forall x. []p(x)) -> [](forall x. p(x))"
    converse = "[](forall x. p(x)) -> (forall x. []p(x))"
    _proves(barcan, frame_spec(dec=True))
    _fails(barcan, frame_spec())
    _proves(converse, frame_spec(inc=True))
    _fails(converse, frame_spec())
    _proves(barcan, frame_spec(const=True))
    _proves(converse, frame_spec(const=True))


def test_prove_sequent_directly():
    frame = frame_spec(paths=[(0, 2)])
    result = prove_sequent(frame, parse_nested("<><>p ;  |- <>p"))
    assert isinstance(result, Proved)
    assert check(CalculusSpec("NestedN", frame), result.proof).ok
    assert result.proof.conclusion == parse_nested("<><>p ;  |- <>p")


def test_exhausted_carries_completeness():
    result = prove_formula(frame_spec(), parse_formula("p"))
    assert not result
    assert result.complete
    assert result.nodes > 0


def test_budget_abort_is_not_complete():
    frame = frame_spec(serial=True)
    tiny = SearchBudget(max_creations=8, max_depth=200, max_nodes=3)
    result = prove_formula(frame, parse_formula("<><><> ~false"), tiny)
    assert isinstance(result, Exhausted)
    assert not result.complete


def test_deep_goal_needs_creations():
    frame = frame_spec(serial=True)
    result = prove_formula(frame, parse_formula("<><><><> ~false"))
    assert isinstance(result, Proved)
    assert check(CalculusSpec("NestedN", frame), result.proof).ok
    small = SearchBudget(max_creations=2)
    capped = prove_formula(frame, parse_formula("<><><><> ~false"), small)
    assert isinstance(capped, Exhausted)
    assert not capped.complete  # ran out of creations, not of options


def test_prover_handles_transitive_chain_goals():
    frame = frame_spec(paths=[(0, 2)])
    for text in ["<><><>p -> <>p", "<><>p -> <>p"]:
        result = prove_formula(frame, parse_formula(text))
        assert isinstance(result, Proved), text
        assert check(CalculusSpec("NestedN", frame), result.proof).ok


def test_duplicate_root_labels_rejected():
    child = NestedSequent("w0", (), (), (parse_formula("q"),), ())
    seq = NestedSequent("w0", (), (parse_formula("p"),), (), (child,))
    with pytest.raises(DuplicateLabelError):
        prove_sequent(frame_spec(), seq)
