"""Loading knowledge bases and grounding them into facts."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from ..errors import KBError, UnknownSymbol
from ..geometry import get_backend
from .ground import Grounder, ObjectInfo
from .syntax import (
    CONSTRUCTORS,
    PRIMITIVE_REFS,
    Atom,
    Const,
    Equation,
    Func,
    Num,
    Rule,
    mentions,
    parse_rule,
    parse_rules,
    strip_comment,
)

__all__ = [
    "Grounding", "KnowledgeBase", "ObjectLabel", "Rule", "check_kb", "format_kb",
    "instantiate", "load_kb", "parse_kb", "parse_rule", "rules_mentioning", "shipped_kb",
]

VERTICES = ("A", "B", "C")


@dataclass(frozen=True, order=True)
class ObjectLabel:
    kind: str
    name: str


@dataclass(frozen=True)
class Grounding:
    """Ground facts and objects of an instantiated knowledge base."""

    objects: dict  # name -> ObjectInfo, canonical objects only
    facts: frozenset
    origin: dict  # fact -> rule id that produced it
    canonical: dict  # every object name ever used -> canonical name

    def kind(self, name: str) -> str:
        return self.objects[self.canonical[name]].kind


@dataclass(frozen=True)
class KnowledgeBase:
    rules: tuple = ()
    vocabulary: tuple = ()
    geometry: str | None = None
    grounding: Grounding | None = field(default=None, compare=False, repr=False)
    # the authored KB this one was instantiated from
    source: "KnowledgeBase | None" = field(default=None, compare=False, repr=False)

    @property
    def primitives(self) -> list[Rule]:
        return [r for r in self.rules if r.sort == "primitive"]

    def rule(self, rule_id: str) -> Rule:
        for r in self.rules:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)

    def active(self, rule: Rule) -> bool:
        return self.geometry is None or rule.geometry in ("absolute", self.geometry)

    def without(self, *rule_ids: str) -> "KnowledgeBase":
        """The authored KB minus some rules; instantiate again before solving."""
        base = self.source or self
        drop = set(rule_ids)
        missing = drop - {r.id for r in base.rules}
        if missing:
            raise KeyError(", ".join(sorted(missing)))
        return KnowledgeBase(tuple(r for r in base.rules if r.id not in drop),
                             base.vocabulary, base.geometry)

    def digest(self) -> str:
        h = hashlib.sha256((self.geometry or "").encode())
        h.update(format_kb(self).encode())
        return h.hexdigest()[:16]


def _vocabulary(rules) -> tuple:
    vocab = [ObjectLabel("point", v) for v in VERTICES]
    for r in rules:
        if _is_named_definition(r):
            vocab.append(ObjectLabel(CONSTRUCTORS[r.conclusion.rhs.name][0], r.conclusion.lhs.name))
    return tuple(vocab)


def _is_named_definition(rule: Rule) -> bool:
    c = rule.conclusion
    return (rule.sort == "definition" and not rule.premises and isinstance(c, Equation)
            and isinstance(c.lhs, Const))


def parse_kb(text: str, geometry: str | None = None) -> KnowledgeBase:
    """Parse KB source; ``include`` lines must have been expanded already."""
    rules = parse_rules(text)
    vocab = _vocabulary(rules)
    names = {v.name for v in vocab}
    seen = set(VERTICES)
    for r in rules:
        used = mentions(r)
        if _is_named_definition(r):
            used = used - {r.conclusion.lhs.name}
        unknown = used - names
        if unknown:
            raise UnknownSymbol(f"rule {r.id} (line {r.line}) uses undeclared {sorted(unknown)}")
        early = used - seen
        if _is_named_definition(r) and early:
            raise UnknownSymbol(f"definition {r.id} uses {sorted(early)} before it is defined")
        if _is_named_definition(r):
            seen.add(r.conclusion.lhs.name)
    return KnowledgeBase(tuple(rules), vocab, geometry)


_INCLUDE = re.compile(r'^include\s+"([^"]+)"$')


def _expand(path: Path, stack: tuple = ()) -> str:
    if path in stack:
        raise KBError(f"include cycle through {path}")
    out = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        m = _INCLUDE.match(strip_comment(raw))
        if m:
            out.append(_expand(path.parent / m.group(1), stack + (path,)))
        else:
            out.append(raw)
    return "\n".join(out)


def _geometry_of(text: str) -> str | None:
    m = re.search(r"^#\s*geometry:\s*(\w+)", text, re.M)
    return m.group(1) if m else None


def load_kb(path: str | Path) -> KnowledgeBase:
    path = Path(path)
    text = _expand(path)
    return parse_kb(text, _geometry_of(path.read_text(encoding="utf-8")))


def shipped_kb(geometry: str) -> KnowledgeBase:
    get_backend(geometry)
    with resources.as_file(resources.files("absolver") / "data" / f"{geometry}.kb") as p:
        return load_kb(p)


def format_kb(kb: KnowledgeBase) -> str:
    lines = []
    if kb.geometry:
        lines.append(f"# geometry: {kb.geometry}")
    lines.extend(str(r) for r in kb.rules)
    return "\n".join(lines) + "\n"


def check_kb(kb: KnowledgeBase) -> list[str]:
    """Problems that make ``kb`` unusable with its geometry; empty when fine."""
    problems = []
    if kb.geometry:
        backend = get_backend(kb.geometry)
        for r in kb.rules:
            if r.geometry not in ("absolute", kb.geometry):
                problems.append(f"rule {r.id} is tagged {r.geometry} in a {kb.geometry} base")
            ref = r.primitive_ref
            if ref is not None and ref not in backend.primitives and kb.active(r):
                problems.append(f"primitive {r.id} ({ref}) is not available in {kb.geometry} geometry")
    try:
        ground(kb)
    except KBError as e:
        problems.append(str(e))
    return problems


def rules_mentioning(kb: KnowledgeBase, label) -> list[Rule]:
    name = label.name if isinstance(label, ObjectLabel) else label
    if name not in {v.name for v in kb.vocabulary}:
        raise UnknownSymbol(f"{name!r} is not in the vocabulary")
    return [r for r in kb.rules if name in mentions(r)]


# --- grounding -------------------------------------------------------------

_GROUND_CACHE: dict[str, Grounding] = {}


def ground(kb: KnowledgeBase, max_aux: int | None = None) -> Grounding:
    key = kb.digest() + f":{max_aux}"
    if key in _GROUND_CACHE:
        return _GROUND_CACHE[key]
    g = Grounder() if max_aux is None else Grounder(max_aux=max_aux)
    rules = [r for r in kb.rules if kb.active(r) and r.sort != "primitive"]
    for r in rules:
        if _is_named_definition(r):
            g.define(r)
    others = [r for r in rules if not _is_named_definition(r)]
    while True:
        before = (len(g.index), g.n_aux, len(g.live_objects()))
        for r in others:
            if r.premises:
                g.fire(r)
            else:
                g.explicit = True
                g.conclude(r.conclusion, {}, r.id)
                g.explicit = False
        while g.merge_pass():
            pass
        if (len(g.index), g.n_aux, len(g.live_objects())) == before:
            break
    objects = {}
    for n in g.live_objects():
        o = g.objects[n]
        objects[n] = replace(o, args=g._canon_args(o.args))
    result = Grounding(objects, frozenset(g.index.facts), dict(g.origin),
                       {n: g.find(n) for n in g.objects})
    _GROUND_CACHE[key] = result
    return result


def _const(v):
    return Num(v) if not isinstance(v, str) else Const(v)


def instantiate(kb: KnowledgeBase, problem=None) -> KnowledgeBase:
    """Return ``kb`` extended with every ground object and fact it implies.

    Auxiliary objects become derived definitions and facts become derived
    lemmas, each with an id ``<source rule>_d<k>``. The grounding does not
    depend on the given points, so ``problem`` only has to be consistent
    with the KB's geometry.
    """
    if problem is not None and kb.geometry and problem.geometry != kb.geometry:
        raise KBError(f"a {kb.geometry} knowledge base cannot serve a {problem.geometry} problem")
    if kb.grounding is not None:
        return kb
    gr = ground(kb)
    stated = set()
    for r in kb.rules:
        if not r.premises and isinstance(r.conclusion, Atom) and all(
                isinstance(a, (Const, Num)) for a in r.conclusion.args):
            stated.add((r.conclusion.pred,) + tuple(
                gr.canonical.get(a.name, a.name) if isinstance(a, Const) else a.value
                for a in r.conclusion.args))
    counters: dict[str, int] = {}
    derived = []
    vocab = list(kb.vocabulary)
    names = {v.name for v in vocab}

    def next_id(src: str) -> str:
        counters[src] = counters.get(src, 0) + 1
        return f"{src}_d{counters[src]}"

    geom_of = {r.id: r.geometry for r in kb.rules}
    for name, o in gr.objects.items():
        if o.aux:
            vocab.append(ObjectLabel(o.kind, name))
            names.add(name)
            derived.append(Rule(next_id(o.origin or "aux"), "definition", geom_of.get(o.origin, "absolute"),
                                Equation(Const(name), Func(o.ctor, tuple(_const(a) for a in o.args)))))
    for fact in sorted(gr.facts, key=str):
        if fact in stated:
            continue
        src = gr.origin.get(fact) or "axiom"
        derived.append(Rule(next_id(src), "lemma", geom_of.get(src, "absolute"),
                            Atom(fact[0], tuple(_const(a) for a in fact[1:]))))
    return KnowledgeBase(kb.rules + tuple(derived), tuple(vocab), kb.geometry, gr, kb)


__all__ += ["ground", "ObjectInfo", "PRIMITIVE_REFS"]
