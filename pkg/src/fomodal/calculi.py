"""Sequent calculi: rule sets, rule application and proof checking.

Three calculi share one rule vocabulary:

* G3: the labeled ground calculus.  Besides the logical rules it takes
  a relational rule per frame condition: d for seriality, g(n,k) per
  closure condition, id and dd for increasing and decreasing domains,
  nd for nonempty domains.
* RefinedL: the labeled calculus with the relational rules other than
  d traded for reachability rules: p_dia propagates a diamond along a
  path whose string the path-condition system derives, s_ex1
  instantiates an existential with an available variable, and s_ex2
  (present for nonempty domains) instantiates with a fresh variable
  placed at a path-connected component.  The plain dia_r and exists_r
  are special cases of p_dia and s_ex1 and are left out.
* NestedN: the same rules read on nested sequents.

A Mixed kind, union of G3 and RefinedL, exists so that the
intermediate stages of rule elimination can be checked.

Rules are applied bottom-up: apply_rule maps a conclusion to the tuple
of premises forced by the given parameters, raising when the principal
formula is absent, a freshness condition fails, or a side condition
does not hold.  The checker replays every node of a proof tree this
way and compares the stored premises against the recomputed ones up to
multiset equality and renaming of bound variables.

Side conditions of the reachability rules are decided on the
propagation graph of the conclusion.  Which rewriting system and start
letter govern availability depends on the domain conditions:

    inc and dec   undirected system, forward letter
    inc only      directed system joined with the path productions, b
    dec only      the same system, d
    neither       a domain atom y in D(w) in the sequent itself
                  (for s_ex2: the target component is w itself)

Rule parameters carry any witness path, so checking revalidates the
stored witness without a new search.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import propagation
from .grammar import BDIA, DIA, ThueSystem, derives, of_paths, s4, s5, union
from .propagation import PropPath, build_graph, witness_path
from .sequents import (LabeledSequent, NestedSequent, labeled_alpha_eq,
                       nested_alpha_eq, to_labeled, without_once)
from .syntax import (Bottom, Dia, Exists, Formula, FrameSpec, Neg, Or, Pred,
                     substitute)


class RuleApplicationError(Exception):
    pass


class RuleNotInCalculus(RuleApplicationError):
    pass


class PrincipalMissing(RuleApplicationError):
    pass


class FreshnessViolation(RuleApplicationError):
    pass


class SideConditionViolation(RuleApplicationError):
    pass


class MalformedParams(RuleApplicationError):
    pass


# ===================================================================
# Rule identifiers and calculus descriptions
# ===================================================================

@dataclass(frozen=True)
class RuleId:
    name: str
    path: tuple[int, int] | None = None

    def __str__(self):
        if self.path is not None:
            return f"g({self.path[0]},{self.path[1]})"
        return self.name


AX = RuleId("ax")
BOT_L = RuleId("bot_l")
NEG_L = RuleId("neg_l")
NEG_R = RuleId("neg_r")
OR_L = RuleId("or_l")
OR_R = RuleId("or_r")
DIA_L = RuleId("dia_l")
DIA_R = RuleId("dia_r")
EXISTS_L = RuleId("exists_l")
EXISTS_R = RuleId("exists_r")
D = RuleId("d")
ID = RuleId("id")
DD = RuleId("dd")
ND = RuleId("nd")
P_DIA = RuleId("p_dia")
S_EX1 = RuleId("s_ex1")
S_EX2 = RuleId("s_ex2")


def g_rule(n: int, k: int) -> RuleId:
    return RuleId("g", (int(n), int(k)))


RELATIONAL = ("g", "id", "dd", "nd")  # the rules refinement eliminates

KINDS = ("G3", "RefinedL", "NestedN", "Mixed")


@dataclass(frozen=True)
class CalculusSpec:
    kind: str
    frame: FrameSpec = field(default_factory=FrameSpec)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown calculus kind {self.kind!r}")


@dataclass(frozen=True)
class RuleParams:
    """Everything a rule instance needs beyond its conclusion.

    label names the principal component or world, target the secondary
    one (the created label for dia_l and d, the receiving label for
    dia_r, p_dia and s_ex2, the label holding the available variable
    for s_ex1, the far end of the relational atom for id and dd).
    chain_u and chain_v instantiate the two premise paths of g(n,k),
    sharing their first label.  witness carries the propagation path a
    reachability rule relies on."""
    label: str | None = None
    target: str | None = None
    formula: Formula | None = None
    variable: str | None = None
    chain_u: tuple[str, ...] | None = None
    chain_v: tuple[str, ...] | None = None
    witness: PropPath | None = None


@dataclass(frozen=True)
class ProofTree:
    conclusion: LabeledSequent | NestedSequent
    rule: RuleId
    params: RuleParams = field(default_factory=RuleParams)
    premises: tuple[ProofTree, ...] = ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def walk(self, path=()):
        yield path, self
        for i, premise in enumerate(self.premises):
            yield from premise.walk(path + (i,))

    def at(self, path) -> ProofTree:
        node = self
        for i in path:
            node = node.premises[i]
        return node


_LOGICAL = (AX, BOT_L, NEG_L, NEG_R, OR_L, OR_R, DIA_L, EXISTS_L)


def rule_set(calc: CalculusSpec) -> frozenset[RuleId]:
    frame = calc.frame
    rules = set(_LOGICAL)
    if frame.serial:
        rules.add(D)
    if calc.kind in ("G3", "Mixed"):
        rules.add(DIA_R)
        rules.add(EXISTS_R)
        rules |= {g_rule(n, k) for n, k in frame.paths}
        if frame.inc:
            rules.add(ID)
        if frame.dec:
            rules.add(DD)
        if frame.nonempty:
            rules.add(ND)
    if calc.kind in ("RefinedL", "NestedN", "Mixed"):
        rules.add(P_DIA)
        rules.add(S_EX1)
        if frame.nonempty:
            rules.add(S_EX2)
    return frozenset(rules)


# ===================================================================
# Side conditions of the reachability rules
# ===================================================================

def propagation_system(frame: FrameSpec) -> ThueSystem:
    return of_paths(frame.paths)


def availability_system(frame: FrameSpec) -> tuple[ThueSystem, str] | None:
    """System and start letter governing availability, or None when
    neither domain-monotonicity condition is present."""
    if frame.inc and frame.dec:
        return (s5(), DIA)
    if frame.inc:
        return (union(s4(), of_paths(frame.paths)), BDIA)
    if frame.dec:
        return (union(s4(), of_paths(frame.paths)), DIA)
    return None


@dataclass(frozen=True)
class Condition:
    holds: bool
    witness: PropPath | None = None
    target: str | None = None
    reason: str = ""


def side_condition(calc: CalculusSpec, rule: RuleId, seq, params: RuleParams) -> Condition:
    """Evaluate the side condition of p_dia, s_ex1 or s_ex2 on the
    given conclusion.  A stored witness is revalidated; otherwise a
    witness is searched for and returned."""
    frame = calc.frame
    lab = to_labeled(seq) if isinstance(seq, NestedSequent) else seq
    graph = build_graph(lab)

    if rule == P_DIA:
        if params.label is None or params.target is None:
            raise MalformedParams("p_dia needs label and target")
        return _path_condition(graph, propagation_system(frame), DIA,
                               params.label, params.target, params.witness)

    if rule == S_EX1:
        if params.label is None or params.variable is None:
            raise MalformedParams("s_ex1 needs label and variable")
        avail = availability_system(frame)
        if avail is None:
            ok = (params.variable, params.label) in lab.dom
            return Condition(ok, None, params.label,
                             "" if ok else
                             f"no atom {params.variable} in D({params.label})")
        system, char = avail
        if params.target is not None:
            if params.variable not in graph.vertices.get(params.target, frozenset()):
                return Condition(False, None, None,
                                 f"{params.variable} not known at {params.target}")
            return _path_condition(graph, system, char, params.label,
                                   params.target, params.witness)
        # search every label that knows the variable
        for target in sorted(propagation.reachable(graph, system, char, params.label)):
            if params.variable in graph.vertices[target]:
                path = witness_path(graph, system, char, params.label, target)
                return Condition(True, path, target)
        return Condition(False, None, None,
                         f"{params.variable} not available for {params.label}")

    if rule == S_EX2:
        if params.label is None or params.target is None:
            raise MalformedParams("s_ex2 needs label and target")
        avail = availability_system(frame)
        if avail is None:
            ok = params.target == params.label
            return Condition(ok, None, params.target,
                             "" if ok else "target must equal the principal label")
        system, char = avail
        return _path_condition(graph, system, char, params.label,
                               params.target, params.witness)

    raise MalformedParams(f"rule {rule} has no side condition")


def _path_condition(graph, system: ThueSystem, char: str, source: str,
                    target: str, stored: PropPath | None) -> Condition:
    if stored is not None:
        if stored.source != source or stored.target != target:
            return Condition(False, None, None,
                             f"witness connects {stored.source} to {stored.target}, "
                             f"wanted {source} to {target}")
        if not graph.validate_path(stored):
            return Condition(False, None, None, "witness uses a missing edge")
        if not derives(system, char, stored.string()):
            return Condition(False, None, None,
                             f"witness string {stored.string() or 'eps'} not derivable")
        return Condition(True, stored, target)
    path = witness_path(graph, system, char, source, target)
    if path is None:
        return Condition(False, None, None,
                         f"no admissible path from {source} to {target}")
    return Condition(True, path, target)


# ===================================================================
# Rule application, labeled
# ===================================================================

def apply_rule(calc: CalculusSpec, seq, rule: RuleId,
               params: RuleParams) -> tuple:
    """Premises of the rule instance, as sequents, in schema order."""
    if rule not in rule_set(calc):
        raise RuleNotInCalculus(f"{rule} is not a rule of {calc.kind} "
                                f"over this frame")
    if calc.kind == "NestedN":
        if not isinstance(seq, NestedSequent):
            raise MalformedParams("NestedN proofs use nested sequents")
        return _apply_nested(calc, seq, rule, params)
    if not isinstance(seq, LabeledSequent):
        raise MalformedParams(f"{calc.kind} proofs use labeled sequents")
    return _apply_labeled(calc, seq, rule, params)


def _need(condition: bool, error, message: str):
    if not condition:
        raise error(message)


def _take(items: tuple, item, what: str) -> tuple:
    try:
        return without_once(items, item)
    except ValueError:
        raise PrincipalMissing(f"{what} not present") from None


def _fresh_label_in_labeled(seq: LabeledSequent, label: str):
    _need(label is not None, MalformedParams, "missing created label")
    _need(label not in seq.labels(), FreshnessViolation,
          f"label {label} already occurs")


def _fresh_var_in_labeled(seq: LabeledSequent, var: str):
    _need(var is not None, MalformedParams, "missing created variable")
    _need(var not in seq.variables(), FreshnessViolation,
          f"variable {var} already occurs")


def _known_label(seq: LabeledSequent, label: str):
    _need(label is not None, MalformedParams, "missing label")
    labels = seq.labels()
    _need(not labels or label in labels, SideConditionViolation,
          f"label {label} does not occur in the conclusion")


def _apply_labeled(calc: CalculusSpec, seq: LabeledSequent, rule: RuleId,
                   p: RuleParams) -> tuple:
    name = rule.name

    if name == "ax":
        _need(isinstance(p.formula, Pred), MalformedParams,
              "ax applies to an atomic formula")
        _need((p.label, p.formula) in seq.left, PrincipalMissing,
              "atom missing on the left")
        _need((p.label, p.formula) in seq.right, PrincipalMissing,
              "atom missing on the right")
        return ()

    if name == "bot_l":
        _need((p.label, Bottom()) in seq.left, PrincipalMissing,
              "falsum missing on the left")
        return ()

    if name == "neg_l":
        _need(isinstance(p.formula, Neg), MalformedParams, "principal must be a negation")
        left = _take(seq.left, (p.label, p.formula), "principal negation")
        return (seq.replace(left=left,
                            right=seq.right + ((p.label, p.formula.body),)),)

    if name == "neg_r":
        _need(isinstance(p.formula, Neg), MalformedParams, "principal must be a negation")
        right = _take(seq.right, (p.label, p.formula), "principal negation")
        return (seq.replace(right=right,
                            left=seq.left + ((p.label, p.formula.body),)),)

    if name == "or_l":
        _need(isinstance(p.formula, Or), MalformedParams, "principal must be a disjunction")
        left = _take(seq.left, (p.label, p.formula), "principal disjunction")
        return (seq.replace(left=left + ((p.label, p.formula.left),)),
                seq.replace(left=left + ((p.label, p.formula.right),)))

    if name == "or_r":
        _need(isinstance(p.formula, Or), MalformedParams, "principal must be a disjunction")
        right = _take(seq.right, (p.label, p.formula), "principal disjunction")
        return (seq.replace(right=right + ((p.label, p.formula.left),
                                           (p.label, p.formula.right))),)

    if name == "dia_l":
        _need(isinstance(p.formula, Dia), MalformedParams, "principal must be a diamond")
        left = _take(seq.left, (p.label, p.formula), "principal diamond")
        _fresh_label_in_labeled(seq, p.target)
        return (seq.replace(rel=seq.rel + ((p.label, p.target),),
                            left=left + ((p.target, p.formula.body),)),)

    if name == "dia_r":
        _need(isinstance(p.formula, Dia), MalformedParams, "principal must be a diamond")
        _need((p.label, p.formula) in seq.right, PrincipalMissing,
              "principal diamond missing on the right")
        _need((p.label, p.target) in seq.rel, SideConditionViolation,
              f"no relational atom {p.label}R{p.target}")
        return (seq.replace(right=seq.right + ((p.target, p.formula.body),)),)

    if name == "exists_l":
        _need(isinstance(p.formula, Exists), MalformedParams,
              "principal must be an existential")
        left = _take(seq.left, (p.label, p.formula), "principal existential")
        _fresh_var_in_labeled(seq, p.variable)
        instance = substitute(p.formula.body, p.variable, p.formula.bound)
        return (seq.replace(dom=seq.dom + ((p.variable, p.label),),
                            left=left + ((p.label, instance),)),)

    if name == "exists_r":
        _need(isinstance(p.formula, Exists), MalformedParams,
              "principal must be an existential")
        _need((p.label, p.formula) in seq.right, PrincipalMissing,
              "principal existential missing on the right")
        _need(p.variable is not None, MalformedParams, "missing instantiating variable")
        _need((p.variable, p.label) in seq.dom, SideConditionViolation,
              f"no atom {p.variable} in D({p.label})")
        instance = substitute(p.formula.body, p.variable, p.formula.bound)
        return (seq.replace(right=seq.right + ((p.label, instance),)),)

    if name == "d":
        _known_label(seq, p.label)
        _fresh_label_in_labeled(seq, p.target)
        return (seq.replace(rel=seq.rel + ((p.label, p.target),)),)

    if name == "g":
        return _apply_g(seq, rule, p)

    if name == "id":
        _need(p.variable is not None, MalformedParams, "missing variable")
        _need((p.label, p.target) in seq.rel, SideConditionViolation,
              f"no relational atom {p.label}R{p.target}")
        _need((p.variable, p.label) in seq.dom, SideConditionViolation,
              f"no atom {p.variable} in D({p.label})")
        return (seq.replace(dom=seq.dom + ((p.variable, p.target),)),)

    if name == "dd":
        _need(p.variable is not None, MalformedParams, "missing variable")
        _need((p.label, p.target) in seq.rel, SideConditionViolation,
              f"no relational atom {p.label}R{p.target}")
        _need((p.variable, p.target) in seq.dom, SideConditionViolation,
              f"no atom {p.variable} in D({p.target})")
        return (seq.replace(dom=seq.dom + ((p.variable, p.label),)),)

    if name == "nd":
        _known_label(seq, p.label)
        _fresh_var_in_labeled(seq, p.variable)
        return (seq.replace(dom=seq.dom + ((p.variable, p.label),)),)

    if name == "p_dia":
        _need(isinstance(p.formula, Dia), MalformedParams, "principal must be a diamond")
        _need((p.label, p.formula) in seq.right, PrincipalMissing,
              "principal diamond missing on the right")
        condition = side_condition(calc, rule, seq, p)
        _need(condition.holds, SideConditionViolation,
              condition.reason or "propagation condition fails")
        return (seq.replace(right=seq.right + ((p.target, p.formula.body),)),)

    if name == "s_ex1":
        _need(isinstance(p.formula, Exists), MalformedParams,
              "principal must be an existential")
        _need((p.label, p.formula) in seq.right, PrincipalMissing,
              "principal existential missing on the right")
        _need(p.variable is not None, MalformedParams, "missing instantiating variable")
        condition = side_condition(calc, rule, seq, p)
        _need(condition.holds, SideConditionViolation,
              condition.reason or "availability condition fails")
        instance = substitute(p.formula.body, p.variable, p.formula.bound)
        return (seq.replace(right=seq.right + ((p.label, instance),)),)

    if name == "s_ex2":
        _need(isinstance(p.formula, Exists), MalformedParams,
              "principal must be an existential")
        _need((p.label, p.formula) in seq.right, PrincipalMissing,
              "principal existential missing on the right")
        _fresh_var_in_labeled(seq, p.variable)
        condition = side_condition(calc, rule, seq, p)
        _need(condition.holds, SideConditionViolation,
              condition.reason or "path condition fails")
        instance = substitute(p.formula.body, p.variable, p.formula.bound)
        return (seq.replace(dom=seq.dom + ((p.variable, p.target),),
                            right=seq.right + ((p.label, instance),)),)

    raise MalformedParams(f"unknown rule {rule}")


def _apply_g(seq: LabeledSequent, rule: RuleId, p: RuleParams) -> tuple:
    n, k = rule.path
    _need(p.chain_u is not None and p.chain_v is not None, MalformedParams,
          "g needs chain_u and chain_v")
    _need(len(p.chain_u) == n + 1, MalformedParams,
          f"chain_u must list {n + 1} labels for g({n},{k})")
    _need(len(p.chain_v) == k + 1, MalformedParams,
          f"chain_v must list {k + 1} labels for g({n},{k})")
    _need(p.chain_u[0] == p.chain_v[0], MalformedParams,
          "both chains start at the same label")
    for chain in (p.chain_u, p.chain_v):
        for a, b in zip(chain, chain[1:]):
            _need((a, b) in seq.rel, SideConditionViolation,
                  f"no relational atom {a}R{b}")
    if n == 0 and k == 0:
        _known_label(seq, p.chain_u[0])
    return (seq.replace(rel=seq.rel + ((p.chain_u[-1], p.chain_v[-1]),)),)


# ===================================================================
# Rule application, nested
# ===================================================================

def _component(seq: NestedSequent, label: str) -> NestedSequent:
    _need(label is not None, MalformedParams, "missing component label")
    node = seq.find(label)
    _need(node is not None, SideConditionViolation,
          f"no component labeled {label}")
    return node


def _fresh_label_in_nested(seq: NestedSequent, label: str):
    _need(label is not None, MalformedParams, "missing created label")
    _need(label not in seq.labels(), FreshnessViolation,
          f"label {label} already occurs")


def _fresh_var_in_nested(seq: NestedSequent, var: str):
    _need(var is not None, MalformedParams, "missing created variable")
    _need(var not in seq.variables(), FreshnessViolation,
          f"variable {var} already occurs")


def _take_component(items: tuple, item, what: str) -> tuple:
    try:
        return without_once(items, item)
    except ValueError:
        raise PrincipalMissing(f"{what} not present") from None


def _apply_nested(calc: CalculusSpec, seq: NestedSequent, rule: RuleId,
                  p: RuleParams) -> tuple:
    name = rule.name

    if name == "ax":
        node = _component(seq, p.label)
        _need(isinstance(p.formula, Pred), MalformedParams,
              "ax applies to an atomic formula")
        _need(p.formula in node.left, PrincipalMissing, "atom missing on the left")
        _need(p.formula in node.right, PrincipalMissing, "atom missing on the right")
        return ()

    if name == "bot_l":
        node = _component(seq, p.label)
        _need(Bottom() in node.left, PrincipalMissing, "falsum missing on the left")
        return ()

    if name == "neg_l":
        _need(isinstance(p.formula, Neg), MalformedParams, "principal must be a negation")
        node = _component(seq, p.label)
        _need(p.formula in node.left, PrincipalMissing, "principal negation not present")
        return (seq.replace_component(p.label, lambda c: NestedSequent(
            c.label, _take_component(c.left, p.formula, "negation"), c.vars,
            c.right + (p.formula.body,), c.children)),)

    if name == "neg_r":
        _need(isinstance(p.formula, Neg), MalformedParams, "principal must be a negation")
        node = _component(seq, p.label)
        _need(p.formula in node.right, PrincipalMissing, "principal negation not present")
        return (seq.replace_component(p.label, lambda c: NestedSequent(
            c.label, c.left + (p.formula.body,), c.vars,
            _take_component(c.right, p.formula, "negation"), c.children)),)

    if name == "or_l":
        _need(isinstance(p.formula, Or), MalformedParams, "principal must be a disjunction")
        node = _component(seq, p.label)
        _need(p.formula in node.left, PrincipalMissing, "principal disjunction not present")

        def with_disjunct(which):
            return seq.replace_component(p.label, lambda c: NestedSequent(
                c.label,
                _take_component(c.left, p.formula, "disjunction") + (which,),
                c.vars, c.right, c.children))
        return (with_disjunct(p.formula.left), with_disjunct(p.formula.right))

    if name == "or_r":
        _need(isinstance(p.formula, Or), MalformedParams, "principal must be a disjunction")
        node = _component(seq, p.label)
        _need(p.formula in node.right, PrincipalMissing, "principal disjunction not present")
        return (seq.replace_component(p.label, lambda c: NestedSequent(
            c.label, c.left, c.vars,
            _take_component(c.right, p.formula, "disjunction")
            + (p.formula.left, p.formula.right),
            c.children)),)

    if name == "dia_l":
        _need(isinstance(p.formula, Dia), MalformedParams, "principal must be a diamond")
        node = _component(seq, p.label)
        _need(p.formula in node.left, PrincipalMissing, "principal diamond not present")
        _fresh_label_in_nested(seq, p.target)
        child = NestedSequent(p.target, (p.formula.body,), (), (), ())
        return (seq.replace_component(p.label, lambda c: NestedSequent(
            c.label, _take_component(c.left, p.formula, "diamond"), c.vars,
            c.right, c.children + (child,))),)

    if name == "exists_l":
        _need(isinstance(p.formula, Exists), MalformedParams,
              "principal must be an existential")
        node = _component(seq, p.label)
        _need(p.formula in node.left, PrincipalMissing, "principal existential not present")
        _fresh_var_in_nested(seq, p.variable)
        instance = substitute(p.formula.body, p.variable, p.formula.bound)
        return (seq.replace_component(p.label, lambda c: NestedSequent(
            c.label,
            _take_component(c.left, p.formula, "existential") + (instance,),
            c.vars + (p.variable,), c.right, c.children)),)

    if name == "d":
        _component(seq, p.label)
        _fresh_label_in_nested(seq, p.target)
        child = NestedSequent(p.target, (), (), (), ())
        return (seq.replace_component(p.label, lambda c: NestedSequent(
            c.label, c.left, c.vars, c.right, c.children + (child,))),)

    if name == "p_dia":
        _need(isinstance(p.formula, Dia), MalformedParams, "principal must be a diamond")
        node = _component(seq, p.label)
        _need(p.formula in node.right, PrincipalMissing, "principal diamond not present")
        _component(seq, p.target)
        condition = side_condition(calc, rule, seq, p)
        _need(condition.holds, SideConditionViolation,
              condition.reason or "propagation condition fails")
        return (seq.replace_component(p.target, lambda c: NestedSequent(
            c.label, c.left, c.vars, c.right + (p.formula.body,), c.children)),)

    if name == "s_ex1":
        _need(isinstance(p.formula, Exists), MalformedParams,
              "principal must be an existential")
        node = _component(seq, p.label)
        _need(p.formula in node.right, PrincipalMissing,
              "principal existential not present")
        _need(p.variable is not None, MalformedParams, "missing instantiating variable")
        condition = side_condition(calc, rule, seq, p)
        _need(condition.holds, SideConditionViolation,
              condition.reason or "availability condition fails")
        instance = substitute(p.formula.body, p.variable, p.formula.bound)
        return (seq.replace_component(p.label, lambda c: NestedSequent(
            c.label, c.left, c.vars, c.right + (instance,), c.children)),)

    if name == "s_ex2":
        _need(isinstance(p.formula, Exists), MalformedParams,
              "principal must be an existential")
        node = _component(seq, p.label)
        _need(p.formula in node.right, PrincipalMissing,
              "principal existential not present")
        _component(seq, p.target)
        _fresh_var_in_nested(seq, p.variable)
        condition = side_condition(calc, rule, seq, p)
        _need(condition.holds, SideConditionViolation,
              condition.reason or "path condition fails")
        instance = substitute(p.formula.body, p.variable, p.formula.bound)
        with_var = seq.replace_component(p.target, lambda c: NestedSequent(
            c.label, c.left, c.vars + (p.variable,), c.right, c.children))
        return (with_var.replace_component(p.label, lambda c: NestedSequent(
            c.label, c.left, c.vars, c.right + (instance,), c.children)),)

    raise MalformedParams(f"unknown rule {rule} for nested sequents")


# ===================================================================
# Proof checking
# ===================================================================

@dataclass(frozen=True)
class CheckReport:
    ok: bool
    node: tuple[int, ...] | None = None
    message: str = ""

    def __bool__(self):
        return self.ok


def _sequents_match(a, b) -> bool:
    if isinstance(a, NestedSequent) != isinstance(b, NestedSequent):
        return False
    if isinstance(a, NestedSequent):
        return nested_alpha_eq(a, b)
    return labeled_alpha_eq(a, b)


def check(calc: CalculusSpec, proof: ProofTree) -> CheckReport:
    """Replay every node; ok when each node's stored premises agree
    with the recomputed ones and every leaf is an axiom."""
    for path, node in proof.walk():
        try:
            premises = apply_rule(calc, node.conclusion, node.rule, node.params)
        except RuleApplicationError as err:
            return CheckReport(False, path, f"{node.rule}: {err}")
        if len(premises) != len(node.premises):
            return CheckReport(
                False, path,
                f"{node.rule}: expected {len(premises)} premises, "
                f"proof has {len(node.premises)}")
        for i, (wanted, given) in enumerate(zip(premises, node.premises)):
            if not _sequents_match(wanted, given.conclusion):
                return CheckReport(
                    False, path + (i,),
                    f"premise {i} of {node.rule} does not match the rule: "
                    f"wanted {wanted}, found {given.conclusion}")
    return CheckReport(True)
