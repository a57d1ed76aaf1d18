"""String rewriting systems over the two-letter alphabet {d, b}.

The letter d stands for a forward move along an accessibility relation
and b for a backward move; conversing a string reverses it and flips
every letter.  A rewriting system is a finite set of productions whose
left side is a single letter, so the systems are semi-Thue systems that
happen to coincide with context-free grammars in which each letter is
both a terminal and a nonterminal.

Three families of systems matter here:

* directed(): d and b each erase or duplicate, giving the languages
  L(d) = d^n and L(b) = b^n, i.e. plain forward or backward
  reachability;
* undirected(): every letter erases or rewrites to bd, which makes both
  languages the full set of strings, i.e. reachability ignoring edge
  direction;
* of_paths(G): for each pair (n, k) in G the productions d -> b^n d^k
  and b -> b^k d^n, mirroring a frame closure condition that connects
  the endpoints of an n-step and a k-step path.

Membership t in L_S(a) is decided by reading the system as a
context-free grammar and running an Earley recognizer; the brute-force
one-step closure is provided for cross-checking only.  The functions
s4 and s5 are aliases for directed and undirected, following the names
of the modal logics whose reachability they encode.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

DIA = "d"
BDIA = "b"
ALPHABET = (DIA, BDIA)

_CONVERSE = {DIA: BDIA, BDIA: DIA}

_PRETTY = {DIA: "◇", BDIA: "◆"}


class GrammarError(Exception):
    pass


def check_string(s: str) -> str:
    for c in s:
        if c not in _CONVERSE:
            raise GrammarError(f"bad character {c!r} in string {s!r}")
    return s


def converse_char(c: str) -> str:
    try:
        return _CONVERSE[c]
    except KeyError:
        raise GrammarError(f"bad character {c!r}") from None


def converse_string(s: str) -> str:
    """Reverse the string and flip every letter; an involution."""
    return "".join(_CONVERSE[c] for c in reversed(check_string(s)))


# ===================================================================
# Systems
# ===================================================================

@dataclass(frozen=True)
class Production:
    lhs: str
    rhs: str

    def __post_init__(self):
        if self.lhs not in _CONVERSE:
            raise GrammarError(f"production left side must be d or b, got {self.lhs!r}")
        check_string(self.rhs)

    def __str__(self):
        return f"{self.lhs} -> {self.rhs if self.rhs else 'eps'}"


@dataclass(frozen=True)
class ThueSystem:
    productions: frozenset[Production]

    def sorted_productions(self) -> tuple[Production, ...]:
        return tuple(sorted(self.productions, key=lambda p: (p.lhs, len(p.rhs), p.rhs)))

    def __str__(self):
        return "; ".join(str(p) for p in self.sorted_productions())


def system(*rules: tuple[str, str] | Production) -> ThueSystem:
    prods = frozenset(r if isinstance(r, Production) else Production(*r)
                      for r in rules)
    return ThueSystem(prods)


def empty_system() -> ThueSystem:
    return ThueSystem(frozenset())


def directed() -> ThueSystem:
    return system((DIA, ""), (BDIA, ""), (DIA, "dd"), (BDIA, "bb"))


def undirected() -> ThueSystem:
    return system((DIA, ""), (BDIA, ""), (DIA, "bd"), (BDIA, "bd"))


# the traditional names of the logics these reachability notions serve
s4 = directed
s5 = undirected


def of_paths(paths) -> ThueSystem:
    """Productions d -> b^n d^k and b -> b^k d^n for each (n, k)."""
    prods = []
    for n, k in paths:
        if n < 0 or k < 0:
            raise GrammarError(f"negative path condition ({n}, {k})")
        prods.append(Production(DIA, BDIA * n + DIA * k))
        prods.append(Production(BDIA, BDIA * k + DIA * n))
    return ThueSystem(frozenset(prods))


def union(first: ThueSystem, second: ThueSystem) -> ThueSystem:
    return ThueSystem(first.productions | second.productions)


_PRODUCTION_RE = re.compile(r"^\s*([db])\s*->\s*(eps|[db]*)\s*$")


def parse_production(text: str) -> Production:
    """Parse the textual form `d -> bd`; `eps` is the empty right side."""
    m = _PRODUCTION_RE.match(text)
    if not m:
        raise GrammarError(f"cannot parse production {text!r}")
    lhs, rhs = m.groups()
    return Production(lhs, "" if rhs == "eps" else rhs)


def pretty_string(s: str) -> str:
    return "".join(_PRETTY[c] for c in check_string(s)) if s else "ε"


# ===================================================================
# One-step rewriting
# ===================================================================

def one_step(s: str, sys: ThueSystem) -> set[str]:
    """All strings obtained by rewriting one occurrence of a letter."""
    check_string(s)
    out = set()
    for i, c in enumerate(s):
        for prod in sys.productions:
            if prod.lhs == c:
                out.add(s[:i] + prod.rhs + s[i + 1:])
    return out


# ===================================================================
# Derivability as context-free membership
# ===================================================================
#
# Read each letter a as a nonterminal N_a with the productions
#     N_a -> a                    (leave the letter unrewritten)
#     N_a -> N_c1 ... N_ck        for each production a -> c1...ck
# Then t is derivable from a iff N_a generates t.  The recognizer is a
# small Earley chart; nullable nonterminals are precomputed so that the
# predictor can complete empty derivations in place.

@dataclass(frozen=True)
class Cfg:
    """A rewriting system viewed as a grammar with right sides of length
    at most two.

    Nonterminals are integers; start[a] names the nonterminal for the
    letter a.  Helper nonterminals introduced while binarizing remember
    the production they came from in origin, for diagnostics.
    """
    terminal_rules: tuple[tuple[int, str], ...]
    unit_rules: tuple[tuple[int, int], ...]
    binary_rules: tuple[tuple[int, int, int], ...]
    empty_rules: tuple[int, ...]
    nullable: frozenset[int]
    start: tuple[tuple[str, int], ...]
    origin: tuple[tuple[int, Production], ...]

    def start_symbol(self, char: str) -> int:
        for c, n in self.start:
            if c == char:
                return n
        raise GrammarError(f"bad start character {char!r}")


@lru_cache(maxsize=None)
def to_cfg(sys: ThueSystem) -> Cfg:
    start = {DIA: 0, BDIA: 1}
    terminal_rules = [(0, DIA), (1, BDIA)]
    unit_rules = []
    binary_rules = []
    empty_rules = []
    origin = []
    next_nt = 2
    for prod in sys.sorted_productions():
        lhs = start[prod.lhs]
        symbols = [start[c] for c in prod.rhs]
        if not symbols:
            empty_rules.append(lhs)
            continue
        if len(symbols) == 1:
            unit_rules.append((lhs, symbols[0]))
            continue
        # chain the right side into binary pieces
        head = lhs
        while len(symbols) > 2:
            helper = next_nt
            next_nt += 1
            origin.append((helper, prod))
            binary_rules.append((head, symbols[0], helper))
            head = helper
            symbols = symbols[1:]
        binary_rules.append((head, symbols[0], symbols[1]))

    nullable = set(empty_rules)
    changed = True
    while changed:
        changed = False
        for a, c in unit_rules:
            if c in nullable and a not in nullable:
                nullable.add(a)
                changed = True
        for a, c1, c2 in binary_rules:
            if c1 in nullable and c2 in nullable and a not in nullable:
                nullable.add(a)
                changed = True

    return Cfg(terminal_rules=tuple(terminal_rules),
               unit_rules=tuple(unit_rules),
               binary_rules=tuple(binary_rules),
               empty_rules=tuple(empty_rules),
               nullable=frozenset(nullable),
               start=tuple(start.items()),
               origin=tuple(origin))


@lru_cache(maxsize=None)
def _raw_rules(sys: ThueSystem):
    """Earley rules per nonterminal.  Right sides are tuples whose
    elements are nonterminal numbers or literal letters; the rule
    N_a -> a keeps the letter unrewritten."""
    start = {DIA: 0, BDIA: 1}
    rules = {0: [(DIA,)], 1: [(BDIA,)]}
    for prod in sys.sorted_productions():
        rules[start[prod.lhs]].append(tuple(start[c] for c in prod.rhs))
    return rules


def derives(sys: ThueSystem, char: str, target: str) -> bool:
    """Is target derivable from the single letter char in sys?"""
    if char not in _CONVERSE:
        raise GrammarError(f"start must be a single letter d or b, got {char!r}")
    check_string(target)
    return _earley(sys, char, target)


def _earley(sys: ThueSystem, char: str, target: str) -> bool:
    rules = _raw_rules(sys)
    nullable = to_cfg(sys).nullable
    start_nt = 0 if char == DIA else 1
    n = len(target)

    # items (lhs, rhs, dot, from); predicting a nullable nonterminal also
    # advances the dot, which keeps empty-span completions from being lost
    root = ("root", (start_nt,), 0, 0)
    chart: list[set] = [set() for _ in range(n + 1)]
    chart[0].add(root)
    for pos in range(n + 1):
        worklist = list(chart[pos])
        while worklist:
            lhs, rhs, dot, begin = worklist.pop()
            if dot < len(rhs):
                sym = rhs[dot]
                if isinstance(sym, str):
                    if pos < n and target[pos] == sym:
                        chart[pos + 1].add((lhs, rhs, dot + 1, begin))
                    continue
                fresh = [(sym, alt, 0, pos) for alt in rules[sym]]
                if sym in nullable:
                    fresh.append((lhs, rhs, dot + 1, begin))
                for item in fresh:
                    if item not in chart[pos]:
                        chart[pos].add(item)
                        worklist.append(item)
            elif lhs != "root":
                for waiting in list(chart[begin]):
                    wlhs, wrhs, wdot, wbegin = waiting
                    if wdot < len(wrhs) and wrhs[wdot] == lhs:
                        item = (wlhs, wrhs, wdot + 1, wbegin)
                        if item not in chart[pos]:
                            chart[pos].add(item)
                            worklist.append(item)
    return ("root", (start_nt,), 1, 0) in chart[n]
