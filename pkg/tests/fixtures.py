"""Worked reference proofs used by both the unit and acceptance tests.

The relational-elimination walkthrough lives here: an initial proof in
the ground labeled calculus over increasing domains plus transitivity,
together with the three displays the elimination procedure is expected
to pass through (the originals contain two typos in domain atoms,
corrected here: the conclusions below the id inference must carry
y in D(w), not y in D(v), since id only adds the target atom going up).
"""

from fomodal.calculi import (AX, EXISTS_R, ID, S_EX1, CalculusSpec, ProofTree,
                             RuleParams, apply_rule, g_rule)
from fomodal.propagation import PropPath
from fomodal.sequents import parse_labeled
from fomodal.syntax import frame_spec, parse_formula

EX_FRAME = frame_spec(paths=[(0, 2)], inc=True)

_EXISTS = parse_formula("exists x. p(x)")
_PY = parse_formula("p(y)")


def _chain(calc, end, steps):
    """Stack rule applications bottom-up into a ProofTree ending in ax."""
    seqs = [end]
    for rule, params in steps[:-1]:
        (nxt,) = apply_rule(calc, seqs[-1], rule, params)
        seqs.append(nxt)
    rule, params = steps[-1]
    assert apply_rule(calc, seqs[-1], rule, params) == ()
    tree = ProofTree(seqs[-1], rule, params, ())
    for (r, p), seq in zip(reversed(steps[:-1]), reversed(seqs[:-1])):
        tree = ProofTree(seq, r, p, (tree,))
    return tree


def elimination_initial() -> ProofTree:
    """g(0,2) at the bottom, then id, exists_r, ax."""
    calc = CalculusSpec("G3", EX_FRAME)
    end = parse_labeled("wRu, uRv, y in D(w), v: p(y) |- v: exists x. p(x)")
    return _chain(calc, end, [
        (g_rule(0, 2), RuleParams(chain_u=("w",), chain_v=("w", "u", "v"))),
        (ID, RuleParams(label="w", target="v", variable="y")),
        (EXISTS_R, RuleParams(label="v", formula=_EXISTS, variable="y")),
        (AX, RuleParams(label="v", formula=_PY)),
    ])


def elimination_display_2() -> ProofTree:
    """id permuted above the renamed existential rule."""
    calc = CalculusSpec("Mixed", EX_FRAME)
    end = parse_labeled("wRu, uRv, y in D(w), v: p(y) |- v: exists x. p(x)")
    return _chain(calc, end, [
        (g_rule(0, 2), RuleParams(chain_u=("w",), chain_v=("w", "u", "v"))),
        (S_EX1, RuleParams(label="v", formula=_EXISTS, variable="y",
                           target="w", witness=PropPath(("v", "w"), ("b",)))),
        (ID, RuleParams(label="w", target="v", variable="y")),
        (AX, RuleParams(label="v", formula=_PY)),
    ])


def elimination_display_3() -> ProofTree:
    """id absorbed into the axiom, g(0,2) permuted up."""
    calc = CalculusSpec("Mixed", EX_FRAME)
    end = parse_labeled("wRu, uRv, y in D(w), v: p(y) |- v: exists x. p(x)")
    return _chain(calc, end, [
        (S_EX1, RuleParams(label="v", formula=_EXISTS, variable="y",
                           target="w",
                           witness=PropPath(("v", "u", "w"), ("b", "b")))),
        (g_rule(0, 2), RuleParams(chain_u=("w",), chain_v=("w", "u", "v"))),
        (AX, RuleParams(label="v", formula=_PY)),
    ])


def elimination_display_4() -> ProofTree:
    """All relational rules gone."""
    calc = CalculusSpec("RefinedL", EX_FRAME)
    end = parse_labeled("wRu, uRv, y in D(w), v: p(y) |- v: exists x. p(x)")
    return _chain(calc, end, [
        (S_EX1, RuleParams(label="v", formula=_EXISTS, variable="y",
                           target="w",
                           witness=PropPath(("v", "u", "w"), ("b", "b")))),
        (AX, RuleParams(label="v", formula=_PY)),
    ])


# The propagation example: two successors of w, an existential at one,
# a boxed disjunction at the other (the premise in the original shows
# p OR r where the principal forces q OR r; fixtures use q OR r).

PROP_FRAME = frame_spec(paths=[(1, 1)], inc=True)

PROP_SEQ = parse_labeled(
    "wRv, wRu, y in D(w), z in D(u) |- v: exists x. p(x), u: <>(q | r)")
