"""Propagation graphs and string-constrained reachability.

A sequent induces a graph whose vertices are its labels, each carrying
the set of variables known to exist there, and whose edges record the
relational atoms: wRu contributes a forward edge (w, d, u) and a
backward edge (u, b, w).  A path spells out a string of d's and b's,
and a rewriting system S picks out the paths whose string lies in the
language of a start letter.  Reachability under that constraint is what
licenses the propagation and availability side conditions of the
refined calculi.

The solver reads S as a context-free grammar in the binarized form
produced by grammar.to_cfg and saturates reachability triples
(nonterminal, source, target) with a worklist, the standard CFL
reachability construction.  Each derived triple remembers one
derivation, so a concrete witness path can be read back without any
further search.  Results are cached per graph and system; graphs are
immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import grammar
from .grammar import DIA, BDIA, ThueSystem, converse_string, to_cfg
from .sequents import LabeledSequent, NestedSequent, to_labeled


class PropagationError(Exception):
    pass


@dataclass(frozen=True)
class PropPath:
    """A walk through a propagation graph: n labels joined by n-1
    letters.  The empty path at w is PropPath((w,), ())."""
    labels: tuple[str, ...]
    chars: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) == 0:
            raise PropagationError("a path visits at least one label")
        if len(self.chars) != len(self.labels) - 1:
            raise PropagationError(
                f"{len(self.labels)} labels need {len(self.labels) - 1} letters, "
                f"got {len(self.chars)}")
        for c in self.chars:
            grammar.check_string(c)

    @property
    def source(self) -> str:
        return self.labels[0]

    @property
    def target(self) -> str:
        return self.labels[-1]

    def string(self) -> str:
        return "".join(self.chars)

    def converse(self) -> PropPath:
        return PropPath(tuple(reversed(self.labels)),
                        tuple(grammar.converse_char(c) for c in reversed(self.chars)))

    def steps(self):
        for i, c in enumerate(self.chars):
            yield (self.labels[i], c, self.labels[i + 1])

    def __str__(self):
        if not self.chars:
            return f"{self.source} (empty path)"
        out = [self.labels[0]]
        for w, c, u in self.steps():
            out.append(grammar.pretty_string(c))
            out.append(u)
        return ", ".join(out)


def empty_path(label: str) -> PropPath:
    return PropPath((label,), ())


def edge_path(source: str, char: str, target: str) -> PropPath:
    return PropPath((source, target), (char,))


def join_paths(first: PropPath, second: PropPath) -> PropPath:
    if first.target != second.source:
        raise PropagationError(
            f"paths do not meet: {first.target} vs {second.source}")
    return PropPath(first.labels + second.labels[1:], first.chars + second.chars)


class PropagationGraph:
    """Vertices with their variable sets and directed labeled edges."""

    def __init__(self, vertices: dict[str, frozenset[str]], edges):
        self.vertices = dict(vertices)
        self.edges = frozenset(edges)
        for w, c, u in self.edges:
            if w not in self.vertices or u not in self.vertices:
                raise PropagationError(f"edge ({w},{c},{u}) leaves the vertex set")
            grammar.check_string(c)
        self._closures: dict[ThueSystem, _Closure] = {}

    def has_edge(self, source: str, char: str, target: str) -> bool:
        return (source, char, target) in self.edges

    def validate_path(self, path: PropPath) -> bool:
        if path.source not in self.vertices:
            return False
        return all(step in self.edges for step in path.steps())

    def closure(self, system: ThueSystem) -> "_Closure":
        got = self._closures.get(system)
        if got is None:
            got = _Closure(self, system)
            self._closures[system] = got
        return got

    def __str__(self):
        verts = ", ".join(f"({w}, {{{', '.join(sorted(xs))}}})"
                          for w, xs in sorted(self.vertices.items()))
        edges = ", ".join(f"({w}, {grammar.pretty_string(c)}, {u})"
                          for w, c, u in sorted(self.edges))
        return f"vertices: {verts}; edges: {edges}"


@lru_cache(maxsize=None)
def build_graph(seq) -> PropagationGraph:
    """Graph of a sequent: one vertex per label occurring anywhere in
    it, so reachability questions make sense even at labels that carry
    only formulas."""
    if isinstance(seq, NestedSequent):
        seq = to_labeled(seq)
    if not isinstance(seq, LabeledSequent):
        raise TypeError(f"cannot build a propagation graph from {seq!r}")
    vertices = {}
    for label in seq.labels():
        vertices[label] = frozenset(x for x, w in seq.dom if w == label)
    edges = set()
    for w, u in seq.rel:
        edges.add((w, DIA, u))
        edges.add((u, BDIA, w))
    return PropagationGraph(vertices, edges)


class _Closure:
    """All triples (nonterminal, source, target) for one graph and one
    rewriting system, with one remembered derivation per triple."""

    def __init__(self, graph: PropagationGraph, system: ThueSystem):
        self.graph = graph
        self.system = system
        self.cfg = to_cfg(system)
        self.back: dict[tuple, tuple] = {}
        self.by_source: dict[tuple, set[str]] = {}
        self._saturate()

    def _record(self, triple, reason, worklist):
        if triple in self.back:
            return
        self.back[triple] = reason
        nt, u, v = triple
        self.by_source.setdefault((nt, u), set()).add(v)
        worklist.append(triple)

    def _saturate(self):
        cfg = self.cfg
        units_by_rhs: dict[int, list[int]] = {}
        for a, b in cfg.unit_rules:
            units_by_rhs.setdefault(b, []).append(a)
        bin_by_first: dict[int, list[tuple[int, int]]] = {}
        bin_by_second: dict[int, list[tuple[int, int]]] = {}
        for a, b, c in cfg.binary_rules:
            bin_by_first.setdefault(b, []).append((a, c))
            bin_by_second.setdefault(c, []).append((a, b))

        worklist: list[tuple] = []
        for nt, letter in cfg.terminal_rules:
            for edge in sorted(self.graph.edges):
                w, c, u = edge
                if c == letter:
                    self._record((nt, w, u), ("edge", edge), worklist)
        for nt in sorted(cfg.nullable):
            for v in sorted(self.graph.vertices):
                self._record((nt, v, v), ("empty",), worklist)

        # index facts by (nonterminal, source) and (nonterminal, target)
        outgoing: dict[tuple, set[tuple]] = {}
        incoming: dict[tuple, set[tuple]] = {}
        for triple in list(self.back):
            nt, u, v = triple
            outgoing.setdefault((nt, u), set()).add(triple)
            incoming.setdefault((nt, v), set()).add(triple)

        while worklist:
            triple = worklist.pop()
            nt, u, v = triple
            outgoing.setdefault((nt, u), set()).add(triple)
            incoming.setdefault((nt, v), set()).add(triple)
            for a in units_by_rhs.get(nt, ()):
                self._record((a, u, v), ("unit", triple), worklist)
            for a, second in bin_by_first.get(nt, ()):
                for other in list(outgoing.get((second, v), ())):
                    self._record((a, u, other[2]), ("bin", triple, other), worklist)
            for a, first in bin_by_second.get(nt, ()):
                for other in list(incoming.get((first, u), ())):
                    self._record((a, other[1], v), ("bin", other, triple), worklist)

    def targets(self, char: str, source: str) -> frozenset[str]:
        nt = self.cfg.start_symbol(char)
        return frozenset(self.by_source.get((nt, source), ()))

    def witness(self, char: str, source: str, target: str) -> PropPath | None:
        nt = self.cfg.start_symbol(char)
        triple = (nt, source, target)
        if triple not in self.back:
            return None
        return self._expand(triple)

    def _expand(self, triple) -> PropPath:
        reason = self.back[triple]
        kind = reason[0]
        if kind == "empty":
            return empty_path(triple[1])
        if kind == "edge":
            w, c, u = reason[1]
            return edge_path(w, c, u)
        if kind == "unit":
            return self._expand(reason[1])
        return join_paths(self._expand(reason[1]), self._expand(reason[2]))


def reachable(graph_or_seq, system: ThueSystem, char: str, source: str) -> frozenset[str]:
    """Labels u such that some path from source to u spells a string in
    the language of char under system; source itself is included
    exactly when the empty string is in that language."""
    graph = _as_graph(graph_or_seq)
    if source not in graph.vertices:
        raise PropagationError(f"unknown label {source}")
    return graph.closure(system).targets(char, source)


def witness_path(graph_or_seq, system: ThueSystem, char: str, source: str,
                 target: str) -> PropPath | None:
    """Some path witnessing reachability, or None.  The witness is
    valid but not necessarily shortest."""
    graph = _as_graph(graph_or_seq)
    if source not in graph.vertices:
        raise PropagationError(f"unknown label {source}")
    if target not in graph.vertices:
        return None
    return graph.closure(system).witness(char, source, target)


def available(seq, system: ThueSystem, char: str, label: str) -> frozenset[str]:
    """Variables known to exist at some label reachable from label
    under the string constraint."""
    graph = _as_graph(seq)
    out: set[str] = set()
    for target in reachable(graph, system, char, label):
        out |= graph.vertices[target]
    return frozenset(out)


def _as_graph(thing) -> PropagationGraph:
    if isinstance(thing, PropagationGraph):
        return thing
    return build_graph(thing)
