"""JSON encoding of formulas, sequents, proofs, frames and models.

Formulas travel as their ASCII rendering and are parsed back on read,
so the schemas stay readable and independent of the AST layout.  Every
from_json function validates its input and raises JsonError with a
message naming the offending key.
"""

from __future__ import annotations

import re

from .calculi import ProofTree, RuleId, RuleParams
from .grammar import GrammarError, ThueSystem, parse_production, system
from .propagation import PropPath
from .semantics import KripkeModel
from .sequents import LabeledSequent, NestedSequent
from .syntax import Formula, FormulaError, FrameSpec, parse_formula, render_formula


class JsonError(Exception):
    pass


def _expect(obj, kind, what: str):
    if not isinstance(obj, kind):
        name = kind.__name__ if isinstance(kind, type) else "value"
        raise JsonError(f"{what}: expected {name}, got {type(obj).__name__}")
    return obj


def _formula(text, what: str) -> Formula:
    _expect(text, str, what)
    try:
        return parse_formula(text)
    except FormulaError as err:
        raise JsonError(f"{what}: {err}") from None


# ===================================================================
# Frames
# ===================================================================

def frame_to_json(frame: FrameSpec) -> dict:
    return {"serial": frame.serial,
            "paths": sorted(list(p) for p in frame.paths),
            "inc": frame.inc, "dec": frame.dec, "nonempty": frame.nonempty}


def frame_from_json(obj) -> FrameSpec:
    _expect(obj, dict, "frame")
    paths = []
    for pair in obj.get("paths", []):
        _expect(pair, list, "frame.paths entry")
        if len(pair) != 2 or not all(isinstance(n, int) and n >= 0 for n in pair):
            raise JsonError(f"frame.paths entry {pair!r} is not a pair of naturals")
        paths.append((pair[0], pair[1]))
    return FrameSpec(serial=bool(obj.get("serial", False)),
                     paths=frozenset(paths),
                     inc=bool(obj.get("inc", False)),
                     dec=bool(obj.get("dec", False)),
                     nonempty=bool(obj.get("nonempty", False)))


# ===================================================================
# Sequents
# ===================================================================

def sequent_to_json(seq) -> dict:
    if isinstance(seq, NestedSequent):
        return {"kind": "nested",
                "label": seq.label,
                "left": [render_formula(f) for f in seq.left],
                "vars": list(seq.vars),
                "right": [render_formula(f) for f in seq.right],
                "children": [sequent_to_json(c) for c in seq.children]}
    if isinstance(seq, LabeledSequent):
        return {"kind": "labeled",
                "rel": [list(pair) for pair in seq.rel],
                "dom": [list(pair) for pair in seq.dom],
                "left": [[w, render_formula(f)] for w, f in seq.left],
                "right": [[w, render_formula(f)] for w, f in seq.right]}
    raise JsonError(f"not a sequent: {type(seq).__name__}")


def _labeled_pairs(obj, what: str):
    _expect(obj, list, what)
    out = []
    for entry in obj:
        _expect(entry, list, f"{what} entry")
        if len(entry) != 2:
            raise JsonError(f"{what} entry {entry!r} is not a pair")
        out.append((_expect(entry[0], str, f"{what} label"),
                    _formula(entry[1], f"{what} formula")))
    return tuple(out)


def sequent_from_json(obj):
    _expect(obj, dict, "sequent")
    kind = obj.get("kind")
    if kind == "labeled":
        atoms = []
        for key in ("rel", "dom"):
            pairs = []
            for entry in _expect(obj.get(key, []), list, key):
                _expect(entry, list, f"{key} entry")
                if len(entry) != 2 or not all(isinstance(x, str) for x in entry):
                    raise JsonError(f"{key} entry {entry!r} is not a pair of names")
                pairs.append(tuple(entry))
            atoms.append(tuple(pairs))
        return LabeledSequent(rel=atoms[0], dom=atoms[1],
                              left=_labeled_pairs(obj.get("left", []), "left"),
                              right=_labeled_pairs(obj.get("right", []), "right"))
    if kind == "nested":
        label = _expect(obj.get("label", "w0"), str, "label")
        left = tuple(_formula(t, "left formula")
                     for t in _expect(obj.get("left", []), list, "left"))
        right = tuple(_formula(t, "right formula")
                      for t in _expect(obj.get("right", []), list, "right"))
        vars_ = tuple(_expect(v, str, "vars entry")
                      for v in _expect(obj.get("vars", []), list, "vars"))
        children = tuple(sequent_from_json(c)
                         for c in _expect(obj.get("children", []), list, "children"))
        for child in children:
            if not isinstance(child, NestedSequent):
                raise JsonError("children of a nested sequent must be nested")
        return NestedSequent(label, left, vars_, right, children)
    raise JsonError(f"sequent.kind must be 'labeled' or 'nested', got {kind!r}")


# ===================================================================
# Rules, parameters, proofs
# ===================================================================

def rule_to_json(rule: RuleId) -> str:
    return str(rule)


def rule_from_json(obj) -> RuleId:
    text = _expect(obj, str, "rule")
    m = re.fullmatch(r"g\((\d+),\s*(\d+)\)", text)
    if m:
        return RuleId("g", (int(m.group(1)), int(m.group(2))))
    if re.fullmatch(r"[a-z_0-9]+", text):
        return RuleId(text)
    raise JsonError(f"cannot read rule name {text!r}")


def path_to_json(path: PropPath) -> dict:
    return {"labels": list(path.labels), "chars": list(path.chars)}


def path_from_json(obj) -> PropPath:
    _expect(obj, dict, "path")
    labels = tuple(_expect(x, str, "path label")
                   for x in _expect(obj.get("labels"), list, "path.labels"))
    chars = tuple(_expect(c, str, "path char")
                  for c in _expect(obj.get("chars"), list, "path.chars"))
    return PropPath(labels, chars)


def params_to_json(params: RuleParams) -> dict:
    out = {}
    for key in ("label", "target", "variable"):
        value = getattr(params, key)
        if value is not None:
            out[key] = value
    if params.formula is not None:
        out["formula"] = render_formula(params.formula)
    for key in ("chain_u", "chain_v"):
        value = getattr(params, key)
        if value is not None:
            out[key] = list(value)
    if params.witness is not None:
        out["witness"] = path_to_json(params.witness)
    return out


def params_from_json(obj) -> RuleParams:
    _expect(obj, dict, "params")
    known = {"label", "target", "variable", "formula", "chain_u", "chain_v",
             "witness"}
    for key in obj:
        if key not in known:
            raise JsonError(f"unknown params key {key!r}")
    chains = {}
    for key in ("chain_u", "chain_v"):
        if key in obj:
            chains[key] = tuple(_expect(x, str, f"{key} label")
                                for x in _expect(obj[key], list, key))
    return RuleParams(
        label=obj.get("label"),
        target=obj.get("target"),
        formula=_formula(obj["formula"], "params.formula") if "formula" in obj else None,
        variable=obj.get("variable"),
        chain_u=chains.get("chain_u"),
        chain_v=chains.get("chain_v"),
        witness=path_from_json(obj["witness"]) if "witness" in obj else None)


def proof_to_json(tree: ProofTree) -> dict:
    return {"conclusion": sequent_to_json(tree.conclusion),
            "rule": rule_to_json(tree.rule),
            "params": params_to_json(tree.params),
            "premises": [proof_to_json(p) for p in tree.premises]}


def proof_from_json(obj) -> ProofTree:
    _expect(obj, dict, "proof node")
    if "conclusion" not in obj or "rule" not in obj:
        raise JsonError("proof node needs 'conclusion' and 'rule'")
    premises = tuple(proof_from_json(p)
                     for p in _expect(obj.get("premises", []), list, "premises"))
    return ProofTree(sequent_from_json(obj["conclusion"]),
                     rule_from_json(obj["rule"]),
                     params_from_json(obj.get("params", {})),
                     premises)


# ===================================================================
# Rewriting systems and models
# ===================================================================

def system_to_json(sys: ThueSystem) -> list:
    return [str(p) for p in sys.sorted_productions()]


def system_from_json(obj) -> ThueSystem:
    _expect(obj, list, "system")
    try:
        return system(*(parse_production(_expect(t, str, "production"))
                        for t in obj))
    except GrammarError as err:
        raise JsonError(str(err)) from None


def model_to_json(model: KripkeModel) -> dict:
    return {"worlds": model.worlds,
            "rel": sorted(list(p) for p in model.rel),
            "domains": [sorted(d) for d in model.domains],
            "valuation": sorted([name, world, list(args)]
                                for name, world, args in model.valuation)}


def model_from_json(obj) -> KripkeModel:
    _expect(obj, dict, "model")
    worlds = _expect(obj.get("worlds"), int, "model.worlds")
    rel = set()
    for entry in _expect(obj.get("rel", []), list, "model.rel"):
        _expect(entry, list, "model.rel entry")
        if len(entry) != 2 or not all(isinstance(x, int) for x in entry):
            raise JsonError(f"model.rel entry {entry!r} is not a world pair")
        rel.add(tuple(entry))
    domains = []
    for dom in _expect(obj.get("domains", []), list, "model.domains"):
        _expect(dom, list, "model.domains entry")
        domains.append(frozenset(_expect(i, int, "individual") for i in dom))
    valuation = set()
    for entry in _expect(obj.get("valuation", []), list, "model.valuation"):
        _expect(entry, list, "model.valuation entry")
        if len(entry) != 3:
            raise JsonError(f"model.valuation entry {entry!r} is not a triple")
        name, world, args = entry
        _expect(name, str, "valuation predicate")
        _expect(world, int, "valuation world")
        _expect(args, list, "valuation arguments")
        valuation.add((name, world,
                       tuple(_expect(a, int, "valuation argument") for a in args)))
    return KripkeModel(worlds, frozenset(rel), tuple(domains),
                       frozenset(valuation))
