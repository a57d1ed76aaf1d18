"""Kripke models with world-relative domains, and countermodel search.

A model has finitely many worlds 0..n-1, an accessibility relation, a
domain of individuals per world, and a valuation assigning to each
predicate the tuples satisfying it at each world.  Valuation tuples are
drawn from the union of all domains, so an individual may satisfy a
predicate at a world whose domain does not contain it; quantifiers, by
contrast, range over the domain of the world of evaluation.  Domains
may be empty.

check_frame tests the structural conditions a FrameSpec asks for:
seriality, the closure conditions (n, k) reading `wR^n u and wR^k v
imply uRv`, increasing or decreasing domains along the relation, and
nonempty domains.

Countermodel search enumerates models within given bounds, pruned up
to isomorphism by keeping only the least representative under world
and individual permutations, and returns the first model and world
falsifying the goal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product

from .sequents import LabeledSequent
from .syntax import (Bottom, Dia, Exists, Formula, FrameSpec, Neg, Or, Pred,
                     free_vars, predicate_arities)


class SemanticsError(Exception):
    pass


class InterpretationError(SemanticsError):
    pass


@dataclass(frozen=True)
class KripkeModel:
    """worlds counts the worlds 0..worlds-1; domains[w] is the set of
    individuals existing at w; valuation holds triples
    (predicate name, world, argument tuple)."""
    worlds: int
    rel: frozenset[tuple[int, int]]
    domains: tuple[frozenset[int], ...]
    valuation: frozenset[tuple[str, int, tuple[int, ...]]]

    def __post_init__(self):
        if self.worlds < 1:
            raise SemanticsError("a model needs at least one world")
        if len(self.domains) != self.worlds:
            raise SemanticsError("one domain per world required")
        for w, u in self.rel:
            if not (0 <= w < self.worlds and 0 <= u < self.worlds):
                raise SemanticsError(f"relation pair ({w},{u}) out of range")
        pool = self.individuals()
        for name, w, args in self.valuation:
            if not 0 <= w < self.worlds:
                raise SemanticsError(f"valuation world {w} out of range")
            if not all(a in pool for a in args):
                raise SemanticsError(
                    f"valuation tuple {args} uses individuals outside every domain")

    def individuals(self) -> frozenset[int]:
        out: set[int] = set()
        for d in self.domains:
            out |= d
        return frozenset(out)

    def successors(self, world: int):
        return [u for w, u in self.rel if w == world]


class Evaluator:
    """Truth evaluation against one model, memoized per subformula,
    world and relevant variable assignment."""

    def __init__(self, model: KripkeModel):
        self.model = model
        self._succ = {w: tuple(sorted(model.successors(w)))
                      for w in range(model.worlds)}
        self._cache: dict = {}

    def formula(self, world: int, phi: Formula, assignment=None) -> bool:
        if assignment is None:
            assignment = {}
        missing = free_vars(phi) - set(assignment)
        if missing:
            raise InterpretationError(
                f"unassigned free variables {sorted(missing)}")
        return self._eval(world, phi, assignment)

    def _eval(self, world: int, phi: Formula, assignment: dict) -> bool:
        key = (world, phi,
               tuple(sorted((v, assignment[v]) for v in free_vars(phi))))
        got = self._cache.get(key)
        if got is not None:
            return got
        match phi:
            case Bottom():
                value = False
            case Pred(name=name, args=args):
                tup = tuple(assignment[a] for a in args)
                value = (name, world, tup) in self.model.valuation
            case Neg(body=body):
                value = not self._eval(world, body, assignment)
            case Or(left=left, right=right):
                value = (self._eval(world, left, assignment)
                         or self._eval(world, right, assignment))
            case Dia(body=body):
                value = any(self._eval(u, body, assignment)
                            for u in self._succ[world])
            case Exists(bound=bound, body=body):
                value = False
                for individual in sorted(self.model.domains[world]):
                    inner = dict(assignment)
                    inner[bound] = individual
                    if self._eval(world, body, inner):
                        value = True
                        break
            case _:
                raise TypeError(f"not a formula: {phi!r}")
        self._cache[key] = value
        return value


def eval_formula(model: KripkeModel, world: int, phi: Formula,
                 assignment=None) -> bool:
    return Evaluator(model).formula(world, phi, assignment)


def eval_labeled_sequent(model: KripkeModel, label_interp: dict,
                         var_interp: dict, seq: LabeledSequent,
                         evaluator: Evaluator | None = None) -> bool:
    """A labeled sequent holds under an interpretation when the truth
    of every relational atom, domain atom and left formula forces the
    truth of some right formula."""
    ev = evaluator if evaluator is not None else Evaluator(model)
    try:
        for w, u in seq.rel:
            if (label_interp[w], label_interp[u]) not in model.rel:
                return True
        for x, w in seq.dom:
            if var_interp[x] not in model.domains[label_interp[w]]:
                return True
        for w, phi in seq.left:
            if not ev.formula(label_interp[w], phi, var_interp):
                return True
        for w, phi in seq.right:
            if ev.formula(label_interp[w], phi, var_interp):
                return True
    except KeyError as missing:
        raise InterpretationError(f"uninterpreted name {missing}") from None
    return False


def labeled_sequent_valid(model: KripkeModel, seq: LabeledSequent) -> bool:
    """Does the sequent hold under every interpretation of its labels
    and variables into the model?"""
    labels = sorted(seq.labels())
    needed = {x for x, _ in seq.dom}
    for f in seq.formulas():
        needed |= free_vars(f)
    variables = sorted(needed)
    pool = sorted(model.individuals())
    ev = Evaluator(model)
    if variables and not pool:
        return True  # no way to interpret the variables
    for world_choice in product(range(model.worlds), repeat=len(labels)):
        label_interp = dict(zip(labels, world_choice))
        for indiv_choice in product(pool, repeat=len(variables)):
            var_interp = dict(zip(variables, indiv_choice))
            if not eval_labeled_sequent(model, label_interp, var_interp, seq, ev):
                return False
    return True


# ===================================================================
# Frame conditions
# ===================================================================

def _step_sets(model: KripkeModel, depth: int) -> list[dict[int, set[int]]]:
    """reach[i][w] = worlds reachable from w in exactly i steps."""
    reach = [{w: {w} for w in range(model.worlds)}]
    for _ in range(depth):
        last = reach[-1]
        nxt = {w: set() for w in range(model.worlds)}
        for w in range(model.worlds):
            for mid in last[w]:
                for a, b in model.rel:
                    if a == mid:
                        nxt[w].add(b)
        reach.append(nxt)
    return reach

def check_frame(model: KripkeModel, frame: FrameSpec) -> bool:
    if frame.serial:
        for w in range(model.worlds):
            if not model.successors(w):
                return False
    if frame.paths:
        depth = max(max(n, k) for n, k in frame.paths)
        reach = _step_sets(model, depth)
        for n, k in frame.paths:
            for w in range(model.worlds):
                for u in reach[n][w]:
                    for v in reach[k][w]:
                        if (u, v) not in model.rel:
                            return False
    if frame.inc:
        for w, u in model.rel:
            if not model.domains[w] <= model.domains[u]:
                return False
    if frame.dec:
        for w, u in model.rel:
            if not model.domains[u] <= model.domains[w]:
                return False
    if frame.nonempty:
        for d in model.domains:
            if not d:
                return False
    return True


# ===================================================================
# Enumeration and countermodel search
# ===================================================================

def permute_model(model: KripkeModel, world_perm, indiv_perm) -> KripkeModel:
    """Isomorphic copy under a world permutation and an individual
    permutation, each given as a mapping."""
    return KripkeModel(
        worlds=model.worlds,
        rel=frozenset((world_perm[w], world_perm[u]) for w, u in model.rel),
        domains=tuple(
            frozenset(indiv_perm[i] for i in model.domains[old])
            for old in _inverse(world_perm, model.worlds)),
        valuation=frozenset(
            (name, world_perm[w], tuple(indiv_perm[i] for i in args))
            for name, w, args in model.valuation))


def _inverse(perm, size):
    inv = [0] * size
    for old in range(size):
        inv[perm[old]] = old
    return inv


def _structure_key(rel, domains):
    return (tuple(sorted(rel)), tuple(tuple(sorted(d)) for d in domains))


def _canonical_structure(rel, domains, pool_size):
    """Is (rel, domains) the least representative of its isomorphism
    class under world and individual permutations?"""
    n = len(domains)
    mine = _structure_key(rel, domains)
    for wp in permutations(range(n)):
        for ip in permutations(range(pool_size)):
            moved_rel = {(wp[w], wp[u]) for w, u in rel}
            inv = _inverse(wp, n)
            moved_dom = tuple(frozenset(ip[i] for i in domains[inv[w]])
                              for w in range(n))
            if _structure_key(moved_rel, moved_dom) < mine:
                return False
    return True


def _domain_choices(n, pool_size):
    """All assignments of subsets of 0..pool_size-1 to n worlds whose
    union is the whole pool."""
    pool = list(range(pool_size))
    subsets = []
    for bits in range(1 << pool_size):
        subsets.append(frozenset(i for i in pool if bits >> i & 1))
    for choice in product(subsets, repeat=n):
        union = set()
        for d in choice:
            union |= d
        if len(union) == pool_size:
            yield tuple(choice)


@lru_cache(maxsize=8)
def _all_structures(max_worlds: int, max_individuals: int) -> tuple:
    out = []
    for n in range(1, max_worlds + 1):
        pairs = [(w, u) for w in range(n) for u in range(n)]
        for pool_size in range(max_individuals + 1):
            for domains in _domain_choices(n, pool_size):
                for bits in range(1 << len(pairs)):
                    rel = frozenset(pairs[i] for i in range(len(pairs))
                                    if bits >> i & 1)
                    if _canonical_structure(rel, domains, pool_size):
                        out.append((n, rel, domains))
    return tuple(out)


def enumerate_structures(max_worlds: int, max_individuals: int,
                         frame: FrameSpec | None = None):
    """(worlds, rel, domains) triples satisfying the frame conditions,
    one per isomorphism class, in order of increasing size."""
    for n, rel, domains in _all_structures(max_worlds, max_individuals):
        if frame is not None:
            probe = KripkeModel(n, rel, domains, frozenset())
            if not check_frame(probe, frame):
                continue
        yield n, rel, domains


def enumerate_valuations(signature: dict[str, int], worlds: int, pool):
    """All valuations for the signature over the given worlds and
    individual pool."""
    atoms = []
    for name in sorted(signature):
        arity = signature[name]
        for w in range(worlds):
            for args in product(sorted(pool), repeat=arity):
                atoms.append((name, w, args))
    for bits in range(1 << len(atoms)):
        yield frozenset(atoms[i] for i in range(len(atoms)) if bits >> i & 1)


def enumerate_models(signature: dict[str, int], max_worlds: int,
                     max_individuals: int, frame: FrameSpec | None = None):
    for n, rel, domains in enumerate_structures(max_worlds, max_individuals, frame):
        pool = set()
        for d in domains:
            pool |= d
        for valuation in enumerate_valuations(signature, n, pool):
            yield KripkeModel(n, rel, domains, valuation)


def find_countermodel(phi: Formula, frame: FrameSpec, max_worlds: int = 3,
                      max_individuals: int = 2):
    """First (model, world) falsifying the closed formula phi on a
    frame satisfying the conditions, or None within the bounds."""
    if free_vars(phi):
        raise SemanticsError(
            f"countermodel search needs a closed formula, free: {sorted(free_vars(phi))}")
    signature = predicate_arities([phi])
    for model in enumerate_models(signature, max_worlds, max_individuals, frame):
        ev = Evaluator(model)
        for w in range(model.worlds):
            if not ev.formula(w, phi):
                return model, w
    return None
