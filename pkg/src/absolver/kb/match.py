"""Conjunctive matching of rule premises against an indexed set of ground facts."""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .syntax import Atom, Const, Func, Num, Var

Fact = tuple  # (pred, arg, ...), args are object names or Fractions


class FactIndex:
    def __init__(self, facts: Iterable[Fact] = ()):
        self.facts: set[Fact] = set()
        self.by_pred: dict[str, list[Fact]] = defaultdict(list)
        self.by_arg: dict[tuple, list[Fact]] = defaultdict(list)
        self.by_obj: dict[object, list[Fact]] = defaultdict(list)
        for f in facts:
            self.add(f)

    def add(self, fact: Fact) -> bool:
        if fact in self.facts:
            return False
        self.facts.add(fact)
        self.by_pred[fact[0]].append(fact)
        for i, a in enumerate(fact[1:]):
            self.by_arg[(fact[0], i, a)].append(fact)
        for a in set(fact[1:]):
            self.by_obj[a].append(fact)
        return True

    def __contains__(self, fact: Fact) -> bool:
        return fact in self.facts

    def __len__(self) -> int:
        return len(self.facts)

    def candidates(self, pred: str, bound: dict[int, object]) -> list[Fact]:
        if not bound:
            return self.by_pred.get(pred, [])
        best = None
        for i, v in bound.items():
            lst = self.by_arg.get((pred, i, v), [])
            if best is None or len(lst) < len(best):
                best = lst
        return best


def _value(t, env):
    if isinstance(t, Var):
        return env.get(t.name, _UNBOUND)
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Func):
        return eval_arith(t, env)
    raise TypeError(t)


_UNBOUND = object()


def eval_arith(t: Func, env) -> object:
    vals = [_value(a, env) for a in t.args]
    if any(v is _UNBOUND for v in vals):
        return _UNBOUND
    (v,) = vals
    if not isinstance(v, Fraction):
        raise TypeError(f"{t.name} needs a rational argument")
    if t.name == "inv":
        return 1 / v
    if t.name == "one_minus":
        return 1 - v
    if t.name == "neg":
        return -v
    raise KeyError(t.name)


Builtin = Callable[[Atom, dict], Iterator[dict]]
INF = float("inf")


def match(premises: tuple, index: FactIndex, env: dict | None = None,
          builtins: dict | None = None) -> Iterator[dict]:
    """Yield every variable binding satisfying all premises.

    ``builtins`` maps predicate names to generators that extend or filter a
    binding; such predicates are never looked up in ``index``. A value may
    be a pair ``(generator, size)`` where ``size(atom, env)`` estimates how
    many bindings the generator yields for a partially bound atom. Builtins
    without a size are only run once fully bound.
    """
    table = {}
    for k, v in (builtins or {}).items():
        table[k] = v if isinstance(v, tuple) else (v, None)
    yield from _match(list(premises), index, dict(env or {}), table)


def _bound(atom: Atom, env) -> dict:
    out = {}
    for i, a in enumerate(atom.args):
        v = _value(a, env)
        if v is not _UNBOUND:
            out[i] = v
    return out


def _cost(atom: Atom, env, index: FactIndex, builtins) -> float:
    bound = _bound(atom, env)
    full = len(bound) == len(atom.args)
    if atom.pred in builtins:
        _, size = builtins[atom.pred]
        if full:
            return 0
        return size(atom, env) if size else INF
    if full:
        return 0
    return len(index.candidates(atom.pred, bound))


def _match(todo: list, index: FactIndex, env: dict, builtins) -> Iterator[dict]:
    if not todo:
        yield env
        return
    costs = [_cost(a, env, index, builtins) for a in todo]
    best_i = min(range(len(todo)), key=costs.__getitem__)
    atom = todo[best_i]
    rest = todo[:best_i] + todo[best_i + 1:]
    if atom.pred in builtins:
        gen, _ = builtins[atom.pred]
        for env2 in gen(atom, env):
            yield from _match(rest, index, env2, builtins)
        return
    bound = _bound(atom, env)
    for fact in index.candidates(atom.pred, bound):
        if len(fact) - 1 != len(atom.args):
            continue
        env2 = env
        ok = True
        for i, a in enumerate(atom.args):
            v = fact[i + 1]
            if i in bound:
                if bound[i] != v:
                    ok = False
                    break
                continue
            if isinstance(a, Var):
                cur = env2.get(a.name, _UNBOUND)
                if cur is _UNBOUND:
                    if env2 is env:
                        env2 = dict(env)
                    env2[a.name] = v
                elif cur != v:
                    ok = False
                    break
            else:
                ok = False
                break
        if ok:
            yield from _match(rest, index, env2, builtins)


def distinct_builtin(atom: Atom, env) -> Iterator[dict]:
    x, y = (_value(a, env) for a in atom.args)
    if x is _UNBOUND or y is _UNBOUND:
        raise ValueError(f"distinct/2 needs bound arguments in {atom}")
    if x != y:
        yield env
