"""Abstract syntax of the knowledge-base language and its parser.

Grammar (one rule per line, ``#`` starts a comment)::

    rule       := kind id "[" geom "]" ":" conclusion ("<-" premise ("," premise)*)?
    kind       := "primitive" | "definition" | "lemma"
    geom       := "euclidean" | "hyperbolic" | "absolute"
    conclusion := atom | term "=" term
    premise    := atom
    atom       := pred "(" term ("," term)* ")"
    term       := "?"name | name | rational | func "(" term ("," term)* ")"

``?X`` is a variable, bare names are vocabulary constants, ``2/3`` or ``-1``
are exact rationals. A line ``include "file.kb"`` splices another file in
(handled by :func:`absolver.kb.load_kb`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

from ..errors import DuplicateRuleId, KBSyntaxError, UnknownSymbol

PREDICATES = {
    # name: allowed arities
    "known": {1},
    "on": {2},
    "distinct": {2},
    "perp": {2},
    "parallel": {2, 3},
    "hyperparallel_foot": {3},
    "midpoint_of": {3},
    "symmetric": {3},
    "ratio": {5},
    "angle_eq": {3},
    "reflection_line": {3},
    "reflection_point": {3},
    "chord": {3},
    "center": {2},
}

# constructor name -> (result sort, argument sorts); "n" marks a rational
CONSTRUCTORS = {
    "line": ("line", ("point", "point")),
    "circle": ("circle", ("point", "point")),
    "intersect": ("point", ("curve", "curve")),
    "intersect_other": ("point", ("curve", "curve", "point")),
    "perpendicular": ("line", ("point", "line")),
    "perp_bisector": ("line", ("point", "point")),
    "parallel_through": ("line", ("point", "line")),
    "limiting_parallel": ("line", ("point", "point", "point")),
    "hyperparallel": ("line", ("point", "point", "point")),
    "ratio_point": ("point", ("point", "point", "point", "n")),
    "midpoint": ("point", ("point", "point")),
    "symmetric_point": ("point", ("point", "point")),
    "reflect_point": ("point", ("point", "line")),
    "reflect_line": ("line", ("line", "point")),
    "angle_bisector": ("line", ("point", "point", "point")),
}

# numeric helper functions usable inside ratio arguments
ARITH = {"inv", "one_minus", "neg"}

PRIMITIVE_REFS = {
    "line": "1",
    "circle": "2",
    "intersect": "3",
    "intersect_other": "3",
    "perpendicular": "4",
    "perp_bisector": "5",
    "parallel_through": "6",
    "limiting_parallel": "6a",
    "hyperparallel": "6b",
    "ratio_point": "7",
    "midpoint": "7a",
    "symmetric_point": "7b",
    "reflect_point": "8",
    "reflect_line": "9",
}

KINDS = ("primitive", "definition", "lemma")
GEOMETRIES = ("euclidean", "hyperbolic", "absolute")


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return "?" + self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Num:
    value: Fraction

    def __str__(self) -> str:
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class Func:
    name: str
    args: tuple

    def __str__(self) -> str:
        return f"{self.name}({', '.join(map(str, self.args))})"


Term = Union[Var, Const, Num, Func]


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple

    def __str__(self) -> str:
        return f"{self.pred}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Equation:
    """``lhs = rhs``: the object ``lhs`` is the one built by ``rhs``."""

    lhs: Term
    rhs: Func

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class Rule:
    id: str
    sort: str
    geometry: str
    conclusion: Union[Atom, Equation]
    premises: tuple = ()
    line: int = field(default=0, compare=False)

    @property
    def scope(self) -> str:
        return "general" if variables(self) else "instantiated"

    @property
    def primitive_ref(self) -> str | None:
        if self.sort == "primitive" and isinstance(self.conclusion, Equation):
            return PRIMITIVE_REFS.get(self.conclusion.rhs.name)
        return None

    def __str__(self) -> str:
        s = f"{self.sort} {self.id} [{self.geometry}]: {self.conclusion}"
        if self.premises:
            s += " <- " + ", ".join(map(str, self.premises))
        return s


def term_vars(t) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    elif isinstance(t, (Func, Atom)):
        for a in t.args:
            yield from term_vars(a)
    elif isinstance(t, Equation):
        yield from term_vars(t.lhs)
        yield from term_vars(t.rhs)


def term_consts(t) -> Iterator[Const]:
    if isinstance(t, Const):
        yield t
    elif isinstance(t, (Func, Atom)):
        for a in t.args:
            yield from term_consts(a)
    elif isinstance(t, Equation):
        yield from term_consts(t.lhs)
        yield from term_consts(t.rhs)


def variables(rule: Rule) -> set[Var]:
    out = set(term_vars(rule.conclusion))
    for p in rule.premises:
        out.update(term_vars(p))
    return out


def mentions(rule: Rule) -> set[str]:
    """Constant names occurring anywhere in the rule."""
    out = {c.name for c in term_consts(rule.conclusion)}
    for p in rule.premises:
        out.update(c.name for c in term_consts(p))
    return out


# --- tokenizer / parser ----------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t]+)
  | (?P<arrow><-)
  | (?P<num>-?\d+(?:/\d+)?)
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<name>[A-Za-z_Ͱ-Ͽ][A-Za-z0-9_Ͱ-Ͽ]*)
  | (?P<punct>[()\[\],:=])
""", re.VERBOSE)


class _Parser:
    def __init__(self, text: str, lineno: int):
        self.lineno = lineno
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise KBSyntaxError(f"unexpected character {text[pos]!r}", lineno, pos + 1)
            if m.lastgroup != "ws":
                self.toks.append((m.lastgroup, m.group(), pos + 1))
            pos = m.end()
        self.i = 0

    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", 0)

    def _col(self) -> int:
        kind, _, col = self._peek()
        return col if kind != "eof" else (self.toks[-1][2] + len(self.toks[-1][1]) if self.toks else 1)

    def _expect(self, kind: str, value: str | None = None) -> str:
        k, v, _ = self._peek()
        if k != kind or (value is not None and v != value):
            want = value or kind
            raise KBSyntaxError(f"expected {want!r}, found {v or 'end of line'!r}", self.lineno, self._col())
        self.i += 1
        return v

    def _accept(self, kind: str, value: str | None = None) -> bool:
        k, v, _ = self._peek()
        if k == kind and (value is None or v == value):
            self.i += 1
            return True
        return False

    def term(self):
        k, v, _ = self._peek()
        if k == "var":
            self.i += 1
            return Var(v[1:])
        if k == "num":
            self.i += 1
            return Num(Fraction(v))
        if k == "name":
            self.i += 1
            if self._accept("punct", "("):
                args = self._args()
                if v not in CONSTRUCTORS and v not in ARITH:
                    raise UnknownSymbol(f"unknown constructor {v!r} on line {self.lineno}")
                return Func(v, args)
            return Const(v)
        raise KBSyntaxError(f"expected a term, found {v or 'end of line'!r}", self.lineno, self._col())

    def _args(self) -> tuple:
        args = [self.term()]
        while self._accept("punct", ","):
            args.append(self.term())
        self._expect("punct", ")")
        return tuple(args)

    def atom(self) -> Atom:
        col = self._col()
        pred = self._expect("name")
        self._expect("punct", "(")
        args = self._args()
        if pred not in PREDICATES:
            raise UnknownSymbol(f"unknown predicate {pred!r} on line {self.lineno}, col {col}")
        if len(args) not in PREDICATES[pred]:
            raise KBSyntaxError(f"{pred} takes {sorted(PREDICATES[pred])} arguments", self.lineno, col)
        return Atom(pred, args)

    def conclusion(self):
        start = self.i
        k, v, _ = self._peek()
        # an equation starts with a term followed by '='
        if k in ("var", "name"):
            nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else ("eof", "", 0)
            if nxt[:2] == ("punct", "="):
                lhs = self.term()
                self._expect("punct", "=")
                rhs = self.term()
                if not isinstance(rhs, Func) or rhs.name not in CONSTRUCTORS:
                    raise KBSyntaxError("right-hand side must be a construction", self.lineno, self._col())
                return Equation(lhs, rhs)
        self.i = start
        return self.atom()

    def rule(self) -> Rule:
        sort = self._expect("name")
        if sort not in KINDS:
            raise KBSyntaxError(f"unknown rule kind {sort!r}", self.lineno, 1)
        rid = self._expect("name")
        self._expect("punct", "[")
        geom = self._expect("name")
        if geom not in GEOMETRIES:
            raise KBSyntaxError(f"unknown geometry {geom!r}", self.lineno, self._col())
        self._expect("punct", "]")
        self._expect("punct", ":")
        concl = self.conclusion()
        premises = []
        if self._accept("arrow"):
            premises.append(self.atom())
            while self._accept("punct", ","):
                premises.append(self.atom())
        if self._peek()[0] != "eof":
            raise KBSyntaxError(f"trailing input {self._peek()[1]!r}", self.lineno, self._col())
        rule = Rule(rid, sort, geom, concl, tuple(premises), self.lineno)
        _check_range_restricted(rule, self.lineno)
        return rule


def _check_range_restricted(rule: Rule, lineno: int) -> None:
    bound = set()
    for p in rule.premises:
        bound.update(term_vars(p))
    free = set(term_vars(rule.conclusion)) - bound
    if free:
        names = ", ".join(sorted(str(v) for v in free))
        raise KBSyntaxError(f"variables {names} occur only in the conclusion", lineno, 1)
    if rule.sort == "primitive":
        concl = rule.conclusion
        if not isinstance(concl, Equation) or concl.rhs.name not in PRIMITIVE_REFS:
            raise KBSyntaxError("a primitive must conclude 'X = construction(...)'", lineno, 1)


def parse_rule(text: str, lineno: int = 1) -> Rule:
    return _Parser(text, lineno).rule()


def strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_rules(text: str) -> list[Rule]:
    rules: list[Rule] = []
    seen: dict[str, int] = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = strip_comment(raw)
        if not line or line.startswith("include "):
            continue
        rule = parse_rule(line, n)
        if rule.id in seen:
            raise DuplicateRuleId(f"rule id {rule.id!r} on line {n} already defined on line {seen[rule.id]}")
        seen[rule.id] = n
        rules.append(rule)
    return rules
