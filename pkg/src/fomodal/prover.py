"""Backward proof search in the nested calculus.

The search works on nested sequents and commits to every invertible
step: closure is tried first, then propositional decomposition, then
the reachability rules p_dia and s_ex1 (which keep their principal
formula, so applying them loses nothing; an instance is skipped when
its conclusion formula is already present), then the creating but
still invertible dia_l and exists_l.  Only d and s_ex2 are genuine
choice points and are tried with backtracking, at most once per
component respectively per (principal, target) pair on a branch.

Termination comes from a cap on the number of creating steps (new
components and new variables) per branch, driven by iterative
deepening, plus a loop check on the relabeling-invariant shape of the
sequent.  When a round finishes without ever hitting a cap, the space
has been explored exhaustively and the goal has no proof at any cap,
which Exhausted reports as complete=True.

Every proof found is replayed through the proof checker before being
returned.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .calculi import (AX, BOT_L, D, DIA_L, EXISTS_L, NEG_L, NEG_R, OR_L, OR_R,
                      P_DIA, S_EX1, S_EX2, CalculusSpec, ProofTree, RuleParams,
                      apply_rule, check, rule_set, side_condition)
from .sequents import (NestedSequent, check_unique_labels, fresh_label,
                       shape_key)
from .syntax import (Bottom, Dia, Exists, Formula, FrameSpec, Neg, Or, Pred,
                     fresh_variable, render_formula, substitute)


class ProverError(Exception):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_creations: int = 8
    max_depth: int = 200
    max_nodes: int = 100000


@dataclass(frozen=True)
class Proved:
    proof: ProofTree
    nodes: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Exhausted:
    reason: str
    complete: bool
    nodes: int

    def __bool__(self):
        return False


class _Abort(Exception):
    pass


class _Search:
    def __init__(self, calc: CalculusSpec, budget: SearchBudget, cap: int):
        self.calc = calc
        self.rules = rule_set(calc)
        self.budget = budget
        self.cap = cap
        self.nodes = 0
        self.cut = False

    def run(self, goal: NestedSequent) -> ProofTree | None:
        return self._attack(goal, self.cap, 0, frozenset(), frozenset())

    def _apply(self, seq, rule, params):
        return apply_rule(self.calc, seq, rule, params)

    def _attack(self, seq: NestedSequent, creations: int, depth: int,
                history: frozenset, applied: frozenset) -> ProofTree | None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            self.cut = True
            raise _Abort
        if depth > self.budget.max_depth:
            self.cut = True
            return None

        # closure
        for comp in seq.walk():
            for f in comp.left:
                if isinstance(f, Bottom):
                    return ProofTree(seq, BOT_L, RuleParams(label=comp.label))
                if isinstance(f, Pred) and f in comp.right:
                    return ProofTree(
                        seq, AX, RuleParams(label=comp.label, formula=f))

        def down(rule, params, spent=0, mark=None):
            marked = applied if mark is None else applied | {mark}
            premises = self._apply(seq, rule, params)
            subs = []
            for premise in premises:
                sub = self._attack(premise, creations - spent, depth + 1,
                                   history, marked)
                if sub is None:
                    return None
                subs.append(sub)
            return ProofTree(seq, rule, params, tuple(subs))

        # propositional decomposition, fully invertible
        for comp in seq.walk():
            for f in comp.left:
                if isinstance(f, Neg):
                    return down(NEG_L, RuleParams(label=comp.label, formula=f))
                if isinstance(f, Or):
                    return down(OR_L, RuleParams(label=comp.label, formula=f))
            for f in comp.right:
                if isinstance(f, Neg):
                    return down(NEG_R, RuleParams(label=comp.label, formula=f))
                if isinstance(f, Or):
                    return down(OR_R, RuleParams(label=comp.label, formula=f))

        # reachability rules keep their principal: saturate, at most once
        # per instance on a branch since a second application is redundant
        # by admissibility of contraction
        components = list(seq.walk())
        for comp in components:
            for f in comp.right:
                if not isinstance(f, Dia):
                    continue
                for target in components:
                    akey = ("p_dia", comp.label, f, target.label)
                    if akey in applied or f.body in target.right:
                        continue
                    params = RuleParams(label=comp.label, formula=f,
                                        target=target.label)
                    cond = side_condition(self.calc, P_DIA, seq, params)
                    if cond.holds:
                        return down(P_DIA,
                                    replace(params, witness=cond.witness),
                                    mark=akey)

        theta = sorted({x for comp in components for x in comp.vars})
        for comp in components:
            for f in comp.right:
                if not isinstance(f, Exists):
                    continue
                for y in theta:
                    akey = ("s_ex1", comp.label, f, y)
                    if akey in applied:
                        continue
                    if substitute(f.body, y, f.bound) in comp.right:
                        continue
                    params = RuleParams(label=comp.label, formula=f, variable=y)
                    cond = side_condition(self.calc, S_EX1, seq, params)
                    if cond.holds:
                        return down(S_EX1, replace(params, target=cond.target,
                                                   witness=cond.witness),
                                    mark=akey)

        # creating but invertible: commit when the cap allows
        taken_labels = set(seq.labels())
        for comp in components:
            for f in comp.left:
                if isinstance(f, Dia):
                    if creations == 0:
                        self.cut = True
                        break
                    params = RuleParams(label=comp.label, formula=f,
                                        target=fresh_label(taken_labels))
                    return down(DIA_L, params, spent=1)
                if isinstance(f, Exists):
                    if creations == 0:
                        self.cut = True
                        break
                    y = fresh_variable(f.bound, seq.variables())
                    params = RuleParams(label=comp.label, formula=f, variable=y)
                    return down(EXISTS_L, params, spent=1)

        key = shape_key(seq)
        if key in history:
            return None
        history = history | {key}

        # genuine choice points, backtracking
        if D in self.rules:
            for comp in components:
                akey = ("d", comp.label)
                if akey in applied:
                    continue
                if creations == 0:
                    self.cut = True
                    break
                params = RuleParams(label=comp.label,
                                    target=fresh_label(taken_labels))
                (premise,) = self._apply(seq, D, params)
                sub = self._attack(premise, creations - 1, depth + 1,
                                   history, applied | {akey})
                if sub is not None:
                    return ProofTree(seq, D, params, (sub,))

        if S_EX2 in self.rules:
            for comp in components:
                for f in comp.right:
                    if not isinstance(f, Exists):
                        continue
                    for target in components:
                        akey = ("s_ex2", comp.label, render_formula(f),
                                target.label)
                        if akey in applied:
                            continue
                        if creations == 0:
                            self.cut = True
                            continue
                        y = fresh_variable(f.bound, seq.variables())
                        params = RuleParams(label=comp.label, formula=f,
                                            variable=y, target=target.label)
                        cond = side_condition(self.calc, S_EX2, seq, params)
                        if not cond.holds:
                            continue
                        params = replace(params, witness=cond.witness)
                        (premise,) = self._apply(seq, S_EX2, params)
                        sub = self._attack(premise, creations - 1, depth + 1,
                                           history, applied | {akey})
                        if sub is not None:
                            return ProofTree(seq, S_EX2, params, (sub,))

        return None


def prove_sequent(frame: FrameSpec, goal: NestedSequent,
                  budget: SearchBudget | None = None) -> Proved | Exhausted:
    """Search for a nested proof of the goal over the given frame."""
    budget = budget or SearchBudget()
    check_unique_labels(goal)
    calc = CalculusSpec("NestedN", frame)
    total = 0
    for cap in range(budget.max_creations + 1):
        search = _Search(calc, budget, cap)
        aborted = False
        try:
            found = search.run(goal)
        except _Abort:
            found = None
            aborted = True
        total += search.nodes
        if found is not None:
            report = check(calc, found)
            if not report.ok:
                raise ProverError(f"search produced a broken proof: "
                                  f"{report.message}")
            return Proved(found, total)
        if not search.cut:
            return Exhausted("no proof exists for this goal", True, total)
        if aborted:
            return Exhausted("node limit reached", False, total)
    return Exhausted(f"no proof within {budget.max_creations} creating steps",
                     False, total)


def prove_formula(frame: FrameSpec, phi: Formula,
                  budget: SearchBudget | None = None) -> Proved | Exhausted:
    goal = NestedSequent("w0", (), (), (phi,), ())
    return prove_sequent(frame, goal, budget)
