"""Grounding of a knowledge base: named objects, auxiliary objects and facts.

Every construction term (``line(B, C)``, ``reflect_point(B, sc)``, ...)
resolves to one object name. A term first resolves to an existing object
that provably equals it (by the incidence facts at hand); failing that an
auxiliary object ``aux<k>_<constructor>`` is created. Creating or naming an
object adds the facts its construction guarantees.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InstantiationBudgetExceeded, KBError, UnknownSymbol
from .match import FactIndex, _UNBOUND, distinct_builtin, eval_arith, match
from .syntax import ARITH, CONSTRUCTORS, Const, Equation, Num, Rule, Var

# constructors whose arguments can be listed in any order
SYMMETRIC_CTORS = {"line", "midpoint", "perp_bisector", "intersect"}

MAX_AUX = 1000
MAX_FACTS = 20000
# an auxiliary object built from objects of generation g has generation g + 1
MAX_GENERATION = 2


@dataclass(frozen=True)
class ObjectInfo:
    name: str
    kind: str  # point | line | circle
    ctor: str | None  # None for the vertices A, B, C
    args: tuple = ()
    aux: bool = False
    origin: str = ""
    generation: int = 0


class Grounder:
    def __init__(self, max_aux: int = MAX_AUX, max_facts: int = MAX_FACTS,
                 max_generation: int = MAX_GENERATION):
        self.objects: dict[str, ObjectInfo] = {}
        self.alias: dict[tuple, str] = {}
        self.parent: dict[str, str] = {}
        self.index = FactIndex()
        self.origin: dict[tuple, str] = {}
        self.max_aux = max_aux
        self.max_facts = max_facts
        self.max_generation = max_generation
        self.n_aux = 0
        self.explicit = False
        for name in ("A", "B", "C"):
            self.objects[name] = ObjectInfo(name, "point", None)
            self.parent[name] = name

    # --- objects ----------------------------------------------------------
    def find(self, name: str) -> str:
        root = name
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[name] != root:
            self.parent[name], name = root, self.parent[name]
        return root

    def kind(self, name: str) -> str:
        return self.objects[name].kind

    def generation(self, name: str) -> int:
        return self.objects[self.find(name)].generation

    def live_objects(self) -> list[str]:
        return [n for n in self.objects if self.find(n) == n]

    def add_fact(self, fact: tuple, origin: str) -> bool:
        fact = self._canon_fact(fact)
        if fact in self.index:
            return False
        if len(self.index) >= self.max_facts:
            raise InstantiationBudgetExceeded(f"more than {self.max_facts} derived facts")
        self.index.add(fact)
        self.origin.setdefault(fact, origin)
        return True

    def _canon_fact(self, fact: tuple) -> tuple:
        return (fact[0],) + tuple(self.find(a) if isinstance(a, str) else a for a in fact[1:])

    def _canon_args(self, args: tuple) -> tuple:
        return tuple(self.find(a) if isinstance(a, str) else a for a in args)

    def _key(self, ctor: str, args: tuple) -> tuple:
        args = self._canon_args(args)
        if ctor in SYMMETRIC_CTORS:
            args = tuple(sorted(args, key=str))
        return (ctor,) + args

    # --- term resolution --------------------------------------------------
    def resolve(self, term, env: dict, origin: str):
        """Object name (or rational) denoted by ``term``; None if it may not be created."""
        if isinstance(term, Var):
            v = env.get(term.name, _UNBOUND)
            if v is _UNBOUND:
                raise KBError(f"unbound variable {term}")
            return v
        if isinstance(term, Num):
            return term.value
        if isinstance(term, Const):
            if term.name not in self.objects:
                raise UnknownSymbol(f"unknown object {term.name!r}")
            return self.find(term.name)
        if term.name in ARITH:
            try:
                return eval_arith(term, env)
            except ZeroDivisionError:
                return None
        args = []
        for a in term.args:
            r = self.resolve(a, env, origin)
            if r is None:
                return None
            args.append(r)
        return self.construct(term.name, tuple(args), origin)

    def construct(self, ctor: str, args: tuple, origin: str, create: bool = True):
        args = self._canon_args(args)
        key = self._key(ctor, args)
        if key in self.alias:
            return self.find(self.alias[key])
        found = self.lookup(ctor, args)
        if found is not None:
            self.alias[key] = found
            return found
        if not create or self._degenerate(ctor, args):
            return None
        if self.explicit:
            # terms written out in a lemma are built whatever their depth
            gen = 1
        else:
            gen = 1 + max((self.generation(a) for a in args if isinstance(a, str)), default=0)
            if gen > self.max_generation:
                return None
        if self.n_aux >= self.max_aux:
            raise InstantiationBudgetExceeded(f"more than {self.max_aux} auxiliary objects")
        self.n_aux += 1
        name = f"aux{self.n_aux}_{ctor}"
        self.objects[name] = ObjectInfo(name, CONSTRUCTORS[ctor][0], ctor, args, True, origin, gen)
        self.parent[name] = name
        self.alias[key] = name
        self.axioms(name, ctor, args, origin)
        return name

    def _degenerate(self, ctor: str, args: tuple) -> bool:
        """True when ``ctor(args)`` is ill-sorted or has coinciding arguments."""
        names = [a for a in args if isinstance(a, str)]
        if ctor in ("line", "circle", "perp_bisector", "intersect") and len(set(names)) < len(names):
            return True
        return self.sort_error(ctor, args) is not None

    def sort_error(self, ctor: str, args: tuple) -> str | None:
        sig = CONSTRUCTORS[ctor][1]
        if len(sig) != len(args):
            return f"{ctor} takes {len(sig)} arguments"
        for a, s in zip(args, sig):
            if s == "n":
                if isinstance(a, str):
                    return f"{ctor} expects a number, got {a}"
                continue
            if not isinstance(a, str):
                return f"{ctor} expects a {s}, got {a}"
            k = self.kind(a)
            if (s == "curve" and k == "point") or (s != "curve" and k != s):
                return f"{ctor} expects a {s} but {a} is a {k}"
        return None

    def _facts(self, pred: str, bound: dict) -> list[tuple]:
        return [f for f in self.index.candidates(pred, bound)
                if all(f[i + 1] == v for i, v in bound.items())]

    def lookup(self, ctor: str, args: tuple):
        """An existing object provably equal to ``ctor(args)``, or None."""
        on = lambda p, o: ("on", p, o) in self.index  # noqa: E731
        if ctor == "line":
            x, y = args
            for f in self._facts("on", {0: x}):
                if self.kind(f[2]) == "line" and on(y, f[2]):
                    return f[2]
        elif ctor == "circle":
            x, y = args
            for f in self._facts("center", {0: x}):
                if on(y, f[2]):
                    return f[2]
        elif ctor == "intersect":
            l1, l2 = args
            if self.kind(l1) == "line" and self.kind(l2) == "line":
                for f in self._facts("on", {1: l1}):
                    if on(f[1], l2):
                        return f[1]
        elif ctor == "perpendicular":
            p, m = args
            for f in self._facts("perp", {1: m}):
                if on(p, f[1]):
                    return f[1]
        elif ctor == "parallel_through":
            p, m = args
            if on(p, m):
                return m
            for f in self._facts("parallel", {1: m}):
                if len(f) == 3 and on(p, f[1]):
                    return f[1]
        elif ctor == "midpoint":
            x, y = args
            if x == y:
                return x
            for f in self._facts("midpoint_of", {1: x, 2: y}) + self._facts("midpoint_of", {1: y, 2: x}):
                return f[1]
        elif ctor == "symmetric_point":
            x, m = args
            if x == m:
                return x
            for f in self._facts("midpoint_of", {0: m, 1: x}):
                return f[3]
        elif ctor == "ratio_point":
            x, z, w, r = args
            if r == 0:
                return x
            if r == 1 and x == z:
                return w
            for f in self._facts("ratio", {0: x, 2: z, 3: w, 4: r}):
                return f[2]
        elif ctor == "reflect_point":
            p, m = args
            if on(p, m):
                return p
            for f in self._facts("reflection_point", {0: p, 1: m}):
                return f[3]
            for f in self._facts("reflection_point", {1: m, 2: p}):
                return f[1]
        elif ctor == "reflect_line":
            m, p = args
            if on(p, m):
                return m
            for f in self._facts("reflection_line", {0: m, 1: p}):
                return f[3]
            for f in self._facts("reflection_line", {1: p, 2: m}):
                return f[1]
        elif ctor == "perp_bisector":
            x, y = args
            for f in self._facts("reflection_point", {0: x, 2: y}):
                return f[2]
            base = self.construct("line", (x, y), "", create=False)
            mid = self.construct("midpoint", (x, y), "", create=False)
            if base is not None and mid is not None:
                for f in self._facts("perp", {1: base}):
                    if on(mid, f[1]):
                        return f[1]
        elif ctor == "hyperparallel":
            p, x, y = args
            base = self.construct("line", (x, y), "", create=False)
            if base is not None:
                for f in self._facts("hyperparallel_foot", {1: base, 2: p}):
                    return f[1]
        elif ctor == "angle_bisector":
            x, v, y = args
            l1 = self.construct("line", (v, x), "", create=False)
            l2 = self.construct("line", (v, y), "", create=False)
            if l1 is not None and l2 is not None:
                for f in self._facts("angle_eq", {0: l1, 2: l2}) + self._facts("angle_eq", {0: l2, 2: l1}):
                    if on(v, f[2]):
                        return f[2]
        return None

    def axioms(self, name: str, ctor: str, args: tuple, origin: str) -> None:
        """Facts guaranteed by building ``name`` as ``ctor(args)``."""
        def add(*fact):
            self.add_fact(fact, origin)

        def sub(c, *a):
            return self.construct(c, a, origin)

        if ctor == "line":
            add("on", args[0], name)
            add("on", args[1], name)
        elif ctor == "circle":
            add("center", args[0], name)
            add("on", args[1], name)
        elif ctor in ("intersect", "intersect_other"):
            add("on", name, args[0])
            add("on", name, args[1])
        elif ctor == "perpendicular":
            add("on", args[0], name)
            add("perp", name, args[1])
        elif ctor == "perp_bisector":
            x, y = args
            for f in self._facts("reflection_point", {0: x, 2: y}):
                return f[2]
            base, mid = sub("line", x, y), sub("midpoint", x, y)
            if base is not None:
                add("perp", name, base)
            if mid is not None:
                add("on", mid, name)
        elif ctor == "parallel_through":
            add("on", args[0], name)
            add("parallel", name, args[1])
        elif ctor == "limiting_parallel":
            p, x, y = args
            add("on", p, name)
            add("parallel", name, x, y)
        elif ctor == "hyperparallel":
            p, x, y = args
            add("on", p, name)
            base = sub("line", x, y)
            if base is not None:
                add("hyperparallel_foot", name, base, p)
        elif ctor == "ratio_point":
            x, z, w, r = args
            add("ratio", x, name, z, w, r)
        elif ctor == "midpoint":
            add("midpoint_of", name, args[0], args[1])
        elif ctor == "symmetric_point":
            add("midpoint_of", args[1], args[0], name)
        elif ctor == "reflect_point":
            add("reflection_point", args[0], args[1], name)
        elif ctor == "reflect_line":
            add("reflection_line", args[0], args[1], name)
        elif ctor == "angle_bisector":
            x, v, y = args
            add("on", v, name)
            l1, l2 = sub("line", v, x), sub("line", v, y)
            if l1 is not None and l2 is not None:
                add("angle_eq", l1, name, l2)
        else:  # pragma: no cover - the parser rejects unknown constructors
            raise KBError(f"no axioms for {ctor}")

    # --- rules ------------------------------------------------------------
    def define(self, rule: Rule) -> None:
        """Register a named object ``name = ctor(args)``."""
        eq = rule.conclusion
        name, ctor = eq.lhs.name, eq.rhs.name
        if name in self.objects:
            raise KBError(f"object {name!r} defined twice (line {rule.line})")
        args = []
        for a in eq.rhs.args:
            r = self.resolve(a, {}, rule.id)
            if r is None:
                raise KBError(f"cannot build the arguments of {name}")
            args.append(r)
        args = tuple(args)
        err = self.sort_error(ctor, args)
        if err:
            raise KBError(f"{err} (line {rule.line})")
        self.objects[name] = ObjectInfo(name, CONSTRUCTORS[ctor][0], ctor, args, False, rule.id, 0)
        self.parent[name] = name
        key = self._key(ctor, args)
        existing = self.alias.get(key)
        self.alias[key] = name
        if existing is not None:
            self.union(name, existing)
        self.axioms(name, ctor, args, rule.id)

    def conclude(self, concl, env: dict, origin: str) -> bool:
        if isinstance(concl, Equation):
            lhs = self.resolve(concl.lhs, env, origin)
            rhs = self.resolve(concl.rhs, env, origin)
            if lhs is None or rhs is None or self.find(lhs) == self.find(rhs):
                return False
            self.union(lhs, rhs)
            return True
        args = []
        for a in concl.args:
            r = self.resolve(a, env, origin)
            if r is None:
                return False
            args.append(r)
        return self.add_fact((concl.pred,) + tuple(args), origin)

    def fire(self, rule: Rule) -> int:
        """Apply a rule to every current match; returns the number of new facts."""
        envs = list(match(rule.premises, self.index, {}, {"distinct": distinct_builtin}))
        new = 0
        for env in envs:
            # earlier conclusions may have merged objects bound in env
            env = {k: self.find(v) if isinstance(v, str) else v for k, v in env.items()}
            if self.conclude(rule.conclusion, env, rule.id):
                new += 1
        return new

    # --- merging ----------------------------------------------------------
    def union(self, x: str, y: str, reindex: bool = True) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        ox, oy = self.objects[rx], self.objects[ry]
        if ox.kind != oy.kind:
            raise KBError(f"cannot identify {ox.kind} {rx} with {oy.kind} {ry}")
        if not ox.aux and not oy.aux:
            raise KBError(f"the knowledge base identifies distinct objects {rx} and {ry}")
        # named objects win, then the older auxiliary object
        if not oy.aux or (ox.aux and _aux_number(ry) < _aux_number(rx)):
            rx, ry = ry, rx
        self.parent[ry] = rx
        gen = min(self.objects[rx].generation, self.objects[ry].generation)
        if gen < self.objects[rx].generation:
            o = self.objects[rx]
            self.objects[rx] = ObjectInfo(o.name, o.kind, o.ctor, o.args, o.aux, o.origin, gen)
        if reindex:
            self._reindex()
        return True

    def _reindex(self) -> None:
        old, old_origin = self.index, self.origin
        self.index = FactIndex()
        self.origin = {}
        for fact in sorted(old.facts, key=str):
            cf = self._canon_fact(fact)
            self.index.add(cf)
            self.origin.setdefault(cf, old_origin.get(fact, ""))
        self.alias = {self._key(k[0], k[1:]): self.find(v) for k, v in self.alias.items()}

    def merge_pass(self) -> bool:
        """Identify the objects the incidence facts force to be equal; True if any were."""
        changed = False
        pts_on: dict[str, set] = {}
        for f in self.index.by_pred.get("on", []):
            pts_on.setdefault(f[2], set()).add(f[1])
        lines = sorted(o for o in pts_on if self.kind(o) == "line")
        seen: dict[tuple, str] = {}
        for ln in lines:
            pts = sorted(pts_on[ln])
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    other = seen.setdefault((pts[i], pts[j]), ln)
                    if other != ln and self.find(pts[i]) != self.find(pts[j]):
                        changed |= self.union(other, ln, reindex=False)
        seen = {}
        on_lines: dict[str, list] = {}
        for ln in lines:
            for p in pts_on[ln]:
                on_lines.setdefault(p, []).append(ln)
        for p in sorted(on_lines):
            ls = sorted(on_lines[p])
            for i in range(len(ls)):
                for j in range(i + 1, len(ls)):
                    other = seen.setdefault((ls[i], ls[j]), p)
                    if other != p and self.find(ls[i]) != self.find(ls[j]):
                        changed |= self.union(other, p, reindex=False)
        centers: dict[str, list] = {}
        for f in self.index.by_pred.get("center", []):
            centers.setdefault(f[1], []).append(f[2])
        for c in sorted(centers):
            ks = sorted(centers[c])
            for i in range(len(ks)):
                for j in range(i + 1, len(ks)):
                    if pts_on.get(ks[i], set()) & pts_on.get(ks[j], set()):
                        changed |= self.union(ks[i], ks[j], reindex=False)
        # parallel lines with a common point coincide
        for f in sorted(self.index.by_pred.get("parallel", []), key=str):
            if len(f) == 3 and f[1] != f[2] and pts_on.get(f[1], set()) & pts_on.get(f[2], set()):
                changed |= self.union(f[1], f[2], reindex=False)
        # one perpendicular to a line through each point
        perps: dict[str, list] = {}
        for f in self.index.by_pred.get("perp", []):
            perps.setdefault(f[2], []).append(f[1])
        for m in sorted(perps):
            ls = sorted(set(perps[m]))
            for i in range(len(ls)):
                for j in range(i + 1, len(ls)):
                    if pts_on.get(ls[i], set()) & pts_on.get(ls[j], set()):
                        changed |= self.union(ls[i], ls[j], reindex=False)
        # an auxiliary object equals whatever its definition now looks up to
        for name in sorted(self.live_objects(), key=_aux_number):
            o = self.objects[name]
            if not o.aux:
                continue
            args = self._canon_args(o.args)
            if self._degenerate(o.ctor, args):
                continue
            found = self.lookup(o.ctor, args)
            if found is not None and self.find(found) != self.find(name):
                changed |= self.union(name, found, reindex=False)
        if changed:
            self._reindex()
        return changed


def _aux_number(name: str) -> int:
    return int(name[3:].split("_", 1)[0]) if name.startswith("aux") else -1
