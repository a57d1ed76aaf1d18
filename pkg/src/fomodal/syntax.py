"""Formulas of first-order modal logic and frame class descriptions.

The abstract syntax keeps only the primitive connectives: predicates
applied to variables, falsum, negation, disjunction, the diamond, and
the existential quantifier.  Box, universal quantification, conjunction
and implication are accepted by the parser and immediately expanded:

    []A        ~<>~A
    forall x.A ~exists x.~A
    A & B      ~(~A | ~B)
    A -> B     ~A | B

The concrete syntax is plain ASCII.  Prefix operators bind tightest,
then `&`, then `|`, then `->` (right associative).  A quantifier takes
the longest scope to its right, so `exists x. p(x) | q` quantifies over
the whole disjunction.  Identifiers are letters, digits and underscores
with optional trailing primes; `false`, `exists` and `forall` are
reserved.

Terms are variables only; there are no constants or function symbols.
Predicates may be nullary.  Parsing renames bound variables apart, so
in any formula produced here each `exists` binds a distinct name that
never shadows a free variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache


class FormulaError(Exception):
    """Base class for errors raised while building or parsing formulas."""


class ParseError(FormulaError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at column {position + 1})")
        self.position = position


class ArityError(FormulaError):
    """A predicate name was used with two different arities."""


# ===================================================================
# Abstract syntax
# ===================================================================

@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Pred(Formula):
    name: str
    args: tuple[str, ...] = ()


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Neg(Formula):
    body: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Dia(Formula):
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    bound: str
    body: Formula


def box(body: Formula) -> Formula:
    return Neg(Dia(Neg(body)))


def forall(var: str, body: Formula) -> Formula:
    return Neg(Exists(var, Neg(body)))


def conj(left: Formula, right: Formula) -> Formula:
    return Neg(Or(Neg(left), Neg(right)))


def implies(left: Formula, right: Formula) -> Formula:
    return Or(Neg(left), right)


# ===================================================================
# Variables and substitution
# ===================================================================

@lru_cache(maxsize=None)
def free_vars(phi: Formula) -> frozenset[str]:
    match phi:
        case Pred(args=args):
            return frozenset(args)
        case Bottom():
            return frozenset()
        case Neg(body=body) | Dia(body=body):
            return free_vars(body)
        case Or(left=left, right=right):
            return free_vars(left) | free_vars(right)
        case Exists(bound=bound, body=body):
            return free_vars(body) - {bound}
    raise TypeError(f"not a formula: {phi!r}")


@lru_cache(maxsize=None)
def all_vars(phi: Formula) -> frozenset[str]:
    """Every variable occurring in phi, free or bound."""
    match phi:
        case Pred(args=args):
            return frozenset(args)
        case Bottom():
            return frozenset()
        case Neg(body=body) | Dia(body=body):
            return all_vars(body)
        case Or(left=left, right=right):
            return all_vars(left) | all_vars(right)
        case Exists(bound=bound, body=body):
            return all_vars(body) | {bound}
    raise TypeError(f"not a formula: {phi!r}")


def fresh_variable(base: str, avoid) -> str:
    """Prime base until it avoids every name in avoid."""
    name = base
    while name in avoid:
        name = name + "'"
    return name


def substitute(phi: Formula, new: str, old: str) -> Formula:
    """Replace every free occurrence of the variable old by new.

    Capture is avoided by renaming a binder that would catch new, e.g.
    substituting y for x in `exists y. p(x,y)` renames the binder first
    and yields `exists y'. p(y,y')`.
    """
    match phi:
        case Pred(name=name, args=args):
            return Pred(name, tuple(new if a == old else a for a in args))
        case Bottom():
            return phi
        case Neg(body=body):
            return Neg(substitute(body, new, old))
        case Dia(body=body):
            return Dia(substitute(body, new, old))
        case Or(left=left, right=right):
            return Or(substitute(left, new, old), substitute(right, new, old))
        case Exists(bound=bound, body=body):
            if bound == old or old not in free_vars(body):
                return phi
            if bound == new:
                # binder would capture the incoming variable
                renamed = fresh_variable(bound, all_vars(body) | {new, old})
                body = substitute(body, renamed, bound)
                bound = renamed
            return Exists(bound, substitute(body, new, old))
    raise TypeError(f"not a formula: {phi!r}")


def rename_apart(phi: Formula) -> Formula:
    """Rename binders so each exists binds a distinct, non-shadowing name."""
    def walk(psi: Formula, taken: set[str]) -> Formula:
        match psi:
            case Pred() | Bottom():
                return psi
            case Neg(body=body):
                return Neg(walk(body, taken))
            case Dia(body=body):
                return Dia(walk(body, taken))
            case Or(left=left, right=right):
                return Or(walk(left, taken), walk(right, taken))
            case Exists(bound=bound, body=body):
                if bound in taken:
                    fresh = fresh_variable(bound, taken | all_vars(body))
                    body = substitute(body, fresh, bound)
                    bound = fresh
                taken.add(bound)
                return Exists(bound, walk(body, taken))
        raise TypeError(f"not a formula: {psi!r}")

    return walk(phi, set(free_vars(phi)))


def alpha_canonical(phi: Formula) -> Formula:
    """Rename bound variables to positional names for alpha comparison.

    The chosen names start with '$' and cannot be produced by the
    parser, so canonical forms of distinct inputs never collide by
    accident.
    """
    counter = [0]

    def walk(psi: Formula, env: dict[str, str]) -> Formula:
        match psi:
            case Pred(name=name, args=args):
                return Pred(name, tuple(env.get(a, a) for a in args))
            case Bottom():
                return psi
            case Neg(body=body):
                return Neg(walk(body, env))
            case Dia(body=body):
                return Dia(walk(body, env))
            case Or(left=left, right=right):
                return Or(walk(left, env), walk(right, env))
            case Exists(bound=bound, body=body):
                canon = f"${counter[0]}"
                counter[0] += 1
                inner = dict(env)
                inner[bound] = canon
                return Exists(canon, walk(body, inner))
        raise TypeError(f"not a formula: {psi!r}")

    return walk(phi, {})


def alpha_eq(phi: Formula, psi: Formula) -> bool:
    return alpha_canonical(phi) == alpha_canonical(psi)


def predicate_arities(formulas, arities: dict[str, int] | None = None) -> dict[str, int]:
    """Collect predicate arities, raising ArityError on any clash."""
    if arities is None:
        arities = {}
    for phi in formulas:
        _collect_arities(phi, arities)
    return arities


def _collect_arities(phi: Formula, arities: dict[str, int]) -> None:
    match phi:
        case Pred(name=name, args=args):
            known = arities.get(name)
            if known is None:
                arities[name] = len(args)
            elif known != len(args):
                raise ArityError(
                    f"predicate {name} used with arity {len(args)} and {known}")
        case Bottom():
            pass
        case Neg(body=body) | Dia(body=body):
            _collect_arities(body, arities)
        case Or(left=left, right=right):
            _collect_arities(left, arities)
            _collect_arities(right, arities)
        case Exists(body=body):
            _collect_arities(body, arities)


# ===================================================================
# Frame class descriptions
# ===================================================================

@dataclass(frozen=True)
class FrameSpec:
    """Which frame and domain conditions a problem assumes.

    paths collects pairs (n, k) standing for the closure condition
    `wR^n u and wR^k v imply uRv`; R^0 is equality, so for instance
    (0, 0) forces reflexivity and (0, 2) transitivity.  inc and dec ask
    for domains monotone along the accessibility relation; const domains
    are expressed as inc and dec together.
    """
    serial: bool = False
    paths: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    inc: bool = False
    dec: bool = False
    nonempty: bool = False

    def __post_init__(self):
        for pair in self.paths:
            n, k = pair
            if n < 0 or k < 0:
                raise ValueError(f"negative path condition {pair}")

    @property
    def const(self) -> bool:
        return self.inc and self.dec


def frame_spec(serial=False, paths=(), inc=False, dec=False, const=False,
               nonempty=False) -> FrameSpec:
    """Convenience constructor; const is shorthand for inc and dec."""
    return FrameSpec(serial=serial,
                     paths=frozenset((int(n), int(k)) for n, k in paths),
                     inc=inc or const, dec=dec or const, nonempty=nonempty)


# ===================================================================
# Parsing
# ===================================================================

_KEYWORDS = {"false", "exists", "forall"}


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "<" and text[i:i + 2] == "<>":
            tokens.append(("dia", "<>", i))
            i += 2
        elif c == "[" and text[i:i + 2] == "[]":
            tokens.append(("box", "[]", i))
            i += 2
        elif c == "-" and text[i:i + 2] == "->":
            tokens.append(("arrow", "->", i))
            i += 2
        elif c in "()~|&,.":
            kind = {"(": "lparen", ")": "rparen", "~": "neg", "|": "or",
                    "&": "and", ",": "comma", ".": "dot"}[c]
            tokens.append((kind, c, i))
            i += 1
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            while j < n and text[j] == "'":
                j += 1
            word = text[i:j]
            if word in _KEYWORDS:
                tokens.append((word, word, i))
            else:
                tokens.append(("ident", word, i))
            i = j
        else:
            raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "arrow":
            self.next()
            return implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        phi = self.conjunction()
        while self.peek()[0] == "or":
            self.next()
            phi = Or(phi, self.conjunction())
        return phi

    def conjunction(self) -> Formula:
        phi = self.unary()
        while self.peek()[0] == "and":
            self.next()
            phi = conj(phi, self.unary())
        return phi

    def unary(self) -> Formula:
        kind, _, pos = self.peek()
        if kind == "neg":
            self.next()
            return Neg(self.unary())
        if kind == "dia":
            self.next()
            return Dia(self.unary())
        if kind == "box":
            self.next()
            return box(self.unary())
        if kind in ("exists", "forall"):
            self.next()
            var = self.expect("ident")[1]
            self.expect("dot")
            body = self.formula()  # longest scope
            return Exists(var, body) if kind == "exists" else forall(var, body)
        return self.atom()

    def atom(self) -> Formula:
        kind, value, pos = self.next()
        if kind == "false":
            return Bottom()
        if kind == "lparen":
            phi = self.formula()
            self.expect("rparen")
            return phi
        if kind == "ident":
            if self.peek()[0] != "lparen":
                return Pred(value)
            self.next()
            args = [self.expect("ident")[1]]
            while self.peek()[0] == "comma":
                self.next()
                args.append(self.expect("ident")[1])
            self.expect("rparen")
            return Pred(value, tuple(args))
        raise ParseError(f"expected a formula, found {value!r}", pos)


def parse_formula(text: str) -> Formula:
    parser = _Parser(text)
    phi = parser.formula()
    tok = parser.peek()
    if tok[0] != "end":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    predicate_arities([phi])
    return rename_apart(phi)


# ===================================================================
# Rendering
# ===================================================================

# precedence levels: quantifier scope 0, -> between, | 1, & 2, prefix 3, atom 4
def render_formula(phi: Formula) -> str:
    return _render(phi, 0)


def _render(phi: Formula, ctx: int) -> str:
    match phi:
        case Bottom():
            return "false"
        case Pred(name=name, args=args):
            return name if not args else f"{name}({','.join(args)})"
        case Neg(body=body):
            return "~" + _render(body, 3)
        case Dia(body=body):
            return "<>" + _render(body, 3)
        case Or(left=left, right=right):
            text = f"{_render(left, 1)} | {_render(right, 2)}"
            return f"({text})" if ctx > 1 else text
        case Exists(bound=bound, body=body):
            text = f"exists {bound}. {_render(body, 0)}"
            return f"({text})" if ctx > 0 else text
    raise TypeError(f"not a formula: {phi!r}")
