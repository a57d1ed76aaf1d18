"""Relational-rule elimination and the nested reading of refined proofs."""

import pytest

from fomodal.calculi import (AX, DIA_R, RELATIONAL, CalculusSpec, ProofTree,
                             RuleParams, apply_rule, check, g_rule)
from fomodal.refine import (RefineError, labelize, nestify, refine_proof)
from fomodal.sequents import labeled_alpha_eq, parse_labeled
from fomodal.syntax import frame_spec, parse_formula
from fixtures import (EX_FRAME, elimination_display_2, elimination_display_3,
                      elimination_display_4, elimination_initial)


def _uses_relational(proof: ProofTree) -> bool:
    if proof.rule.name in RELATIONAL:
        return True
    return any(_uses_relational(p) for p in proof.premises)


def _same_skeleton(a: ProofTree, b: ProofTree) -> bool:
    if a.rule != b.rule or len(a.premises) != len(b.premises):
        return False
    if not labeled_alpha_eq(a.conclusion, b.conclusion):
        return False
    return all(_same_skeleton(x, y) for x, y in zip(a.premises, b.premises))


def test_elimination_fixtures_check():
    mixed = CalculusSpec("Mixed", EX_FRAME)
    assert check(CalculusSpec("G3", EX_FRAME), elimination_initial()).ok
    assert check(mixed, elimination_display_2()).ok
    assert check(mixed, elimination_display_3()).ok
    assert check(CalculusSpec("RefinedL", EX_FRAME),
                 elimination_display_4()).ok


def test_elimination_walkthrough():
    initial = elimination_initial()
    result = refine_proof(EX_FRAME, initial)
    ops = [(s.op, s.detail) for s in result.steps]
    assert ops == [
        ("retag", "retag 1 rule(s) as p_dia/s_ex1"),
        ("swap", "swap id above s_ex1"),
        ("absorb", "absorb id below ax"),
        ("swap", "swap g(0,2) above s_ex1"),
        ("absorb", "absorb g(0,2) below ax"),
    ]
    assert _same_skeleton(result.steps[1].proof, elimination_display_2())
    assert _same_skeleton(result.steps[3].proof, elimination_display_3())
    assert _same_skeleton(result.proof, elimination_display_4())

    assert not _uses_relational(result.proof)
    assert labeled_alpha_eq(result.proof.conclusion, initial.conclusion)
    assert check(CalculusSpec("RefinedL", EX_FRAME), result.proof).ok


def test_refine_keeps_witness_strings_from_the_walkthrough():
    result = refine_proof(EX_FRAME, elimination_initial())
    after_id_swap = result.steps[1].proof
    s_ex1 = after_id_swap.premises[0]
    assert s_ex1.rule.name == "s_ex1"
    assert s_ex1.params.witness.string() == "b"
    final = result.proof
    assert final.rule.name == "s_ex1"
    assert final.params.witness.string() == "bb"


def test_refine_rejects_broken_input():
    initial = elimination_initial()
    bad = ProofTree(initial.conclusion, initial.rule, initial.params, ())
    with pytest.raises(RefineError):
        refine_proof(EX_FRAME, bad)


def test_refine_handles_duplication_through_or_l():
    # a relational step below or_l must climb into both branches
    from fomodal.calculi import OR_L, P_DIA
    frame = frame_spec(paths=[(0, 2)])
    calc = CalculusSpec("Mixed", frame)
    qr = parse_formula("q | r")
    end = parse_labeled("wRu, uRv, u: q | r |- w: <>q, w: <>r")

    (after_g,) = apply_rule(calc, end, g_rule(0, 2),
                            RuleParams(chain_u=("w",), chain_v=("w", "u", "v")))
    gp = RuleParams(label="u", formula=qr)
    lhs, rhs = apply_rule(calc, after_g, OR_L, gp)
    dq = RuleParams(label="w", formula=parse_formula("<>q"), target="u")
    dr = RuleParams(label="w", formula=parse_formula("<>r"), target="u")
    (lq,) = apply_rule(calc, lhs, DIA_R, dq)
    (rq,) = apply_rule(calc, rhs, DIA_R, dr)
    proof = ProofTree(end, g_rule(0, 2),
                      RuleParams(chain_u=("w",), chain_v=("w", "u", "v")),
                      (ProofTree(after_g, OR_L, gp, (
                          ProofTree(lhs, DIA_R, dq, (
                              ProofTree(lq, AX,
                                        RuleParams(label="u",
                                                   formula=parse_formula("q")),
                                        ()),)),
                          ProofTree(rhs, DIA_R, dr, (
                              ProofTree(rq, AX,
                                        RuleParams(label="u",
                                                   formula=parse_formula("r")),
                                        ()),)),)),))
    assert check(calc, proof).ok
    result = refine_proof(frame, proof)
    assert not _uses_relational(result.proof)
    assert labeled_alpha_eq(result.proof.conclusion, end)
    assert check(CalculusSpec("RefinedL", frame), result.proof).ok


def test_refine_is_identity_on_relation_free_proofs():
    frame = frame_spec(paths=[(0, 2)], inc=True)
    final = elimination_display_4()
    result = refine_proof(frame, final)
    assert result.steps == ()
    assert _same_skeleton(result.proof, final)


def test_nestify_and_labelize_round_trip():
    result = refine_proof(EX_FRAME, elimination_initial())
    nested = nestify(EX_FRAME, result.proof)
    assert check(CalculusSpec("NestedN", EX_FRAME), nested).ok
    back = labelize(EX_FRAME, nested)
    assert check(CalculusSpec("RefinedL", EX_FRAME), back).ok
    assert _same_skeleton(back, result.proof)


def test_nestify_rejects_non_tree_proofs():
    frame = frame_spec()
    calc = CalculusSpec("RefinedL", frame)
    end = parse_labeled("wRv, uRv, v: p |- v: p")
    proof = ProofTree(end, AX, RuleParams(label="v",
                                          formula=parse_formula("p")), ())
    assert check(calc, proof).ok
    with pytest.raises(RefineError):
        nestify(frame, proof)
