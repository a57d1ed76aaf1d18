"""Rewriting systems and language membership."""

import pytest

from fomodal.grammar import (BDIA, DIA, GrammarError, Production, converse_string,
                             derives, empty_system, of_paths, one_step,
                             parse_production, s4, s5, system, union)
from oracles import all_strings, saturated_members


def test_converse_reverses_and_flips():
    assert converse_string("") == ""
    assert converse_string("d") == "b"
    assert converse_string("dbb") == "ddb"
    assert converse_string(converse_string("dbdb")) == "dbdb"


def test_production_validation():
    with pytest.raises(GrammarError):
        Production("x", "d")
    with pytest.raises(GrammarError):
        Production("d", "dx")
    assert str(Production("d", "")) == "d -> eps"


def test_parse_production():
    assert parse_production("d -> bd") == Production("d", "bd")
    assert parse_production("b->eps") == Production("b", "")
    with pytest.raises(GrammarError):
        parse_production("dd -> b")


def test_canonical_systems():
    assert {str(p) for p in s4().productions} == {
        "d -> eps", "b -> eps", "d -> dd", "b -> bb"}
    assert {str(p) for p in s5().productions} == {
        "d -> eps", "b -> eps", "d -> bd", "b -> bd"}
    assert {str(p) for p in of_paths([(1, 1)]).productions} == {
        "d -> bd", "b -> bd"}
    assert {str(p) for p in of_paths([(0, 2)]).productions} == {
        "d -> dd", "b -> bb"}


def test_union_joins_productions():
    joined = union(s4(), of_paths([(0, 2)]))
    assert joined.productions == s4().productions | of_paths([(0, 2)]).productions


def test_one_step():
    assert one_step("d", s4()) == {"", "dd"}
    assert one_step("bd", of_paths([(1, 1)])) == {"bdd", "bbd"}
    assert one_step("", s4()) == set()


def test_directed_language_is_iterated_forward_letter():
    for target in all_strings(6):
        expected = set(target) <= {DIA}
        assert derives(s4(), DIA, target) == expected, target


def test_undirected_language_is_everything():
    for char in (DIA, BDIA):
        for target in all_strings(6):
            assert derives(s5(), char, target), (char, target)


def test_empty_system_language_is_the_letter_itself():
    for char in (DIA, BDIA):
        for target in all_strings(4):
            assert derives(empty_system(), char, target) == (target == char)


def test_derives_matches_closure_oracle():
    systems = [s4(), s5(), of_paths([(1, 1)]), of_paths([(0, 2)]),
               union(s4(), of_paths([(0, 2)]))]
    for sys_ in systems:
        for char in (DIA, BDIA):
            truth = saturated_members(sys_, char, 5)
            for target in all_strings(5):
                assert derives(sys_, char, target) == (target in truth), \
                    (str(sys_), char, target)


def test_derives_rejects_bad_input():
    with pytest.raises(GrammarError):
        derives(s4(), "x", "d")
    with pytest.raises(GrammarError):
        derives(s4(), "d", "dx")


def test_reflexive_path_system_erases():
    # the (0, 0) closure contributes erasing productions
    sys_ = of_paths([(0, 0)])
    assert derives(sys_, DIA, "")
    assert not derives(sys_, DIA, "b")
