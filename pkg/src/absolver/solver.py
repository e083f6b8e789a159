"""Greedy forward search for ruler-and-compass constructions.

Starting from the given points, the search repeatedly applies the first
primitive rule (in knowledge-base order) that can build a new object
relevant to the goal, until the vertices are all constructed or nothing
else applies. Classification adds a redundancy test and a numeric check
for problems whose givens are tied by a constraint.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AbsolverError, GeometryError, NondegeneracyViolated, StepFailed
from .geometry import Point, get_backend
from .kb import KnowledgeBase, instantiate
from .kb.match import _UNBOUND, FactIndex, _value, distinct_builtin, match
from .kb.syntax import CONSTRUCTORS, Equation, Var
from .plan import GOALS, Plan, Problem, Step, nondegeneracy_of, simplify
from .validator import (
    apply_op,
    evaluate_objects,
    execute_steps,
    incidence,
    residual,
    sample_triangle,
)

__all__ = [
    "LocusDependent", "Redundant", "Search", "Solved", "Unsolved", "classify",
    "next_step", "simplify", "solve",
]

MAX_STEPS = 10000
TIME_LIMIT = 60.0

# numeric confirmation of a constraint among the givens
LOCUS_TRIALS = 6
LOCUS_JITTER = 0.02
HOLDS_TOL = 1e-7
BROKEN_TOL = 1e-5


# --- outcomes ---------------------------------------------------------------

@dataclass
class Solved:
    plan: Plan
    status = "solved"


@dataclass
class Redundant:
    witness: str  # the given point derivable from the other two
    plan: Plan  # construction of the witness from the others
    status = "redundant"


@dataclass
class LocusDependent:
    constraint: str
    plan: Plan  # steps taken before the constraint was found
    status = "locus_dependent"


@dataclass
class Unsolved:
    reason: str
    plan: Plan | None = None
    status = "unsolved"


# --- search -------------------------------------------------------------------

def _fmt_key(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return v


def _input_key(inputs: tuple) -> tuple:
    return tuple(_fmt_key(a) for a in inputs)


@dataclass(order=True)
class _Candidate:
    key: tuple
    op: str = field(compare=False)
    inputs: tuple = field(compare=False)
    outputs: tuple = field(compare=False)
    rule: str = field(compare=False)
    branching: bool = field(compare=False, default=False)
    uses: tuple = field(compare=False, default=())


class Search:
    """State of one greedy search over a grounded knowledge base."""

    def __init__(self, kb: KnowledgeBase, given, goals=GOALS,
                 max_steps: int = MAX_STEPS, time_limit: float = TIME_LIMIT):
        if kb.grounding is None:
            kb = instantiate(kb)
        self.kb = kb
        self.gr = kb.grounding
        self.index = FactIndex(sorted(self.gr.facts, key=str))
        backend = get_backend(kb.geometry) if kb.geometry else None
        self.rules = [r for r in kb.primitives if kb.active(r)
                      and (backend is None or r.primitive_ref in backend.primitives)]
        self.given = tuple(self.gr.canonical.get(g, g) for g in given)
        self.goals = tuple(self.gr.canonical.get(g, g) for g in goals)
        self.known: set = set(self.given)
        self.steps: list[Step] = []
        self.max_steps = max_steps
        self.time_limit = time_limit
        self.builtins = {
            "distinct": distinct_builtin,
            "known": (self._known_builtin, lambda atom, env: len(self.known)),
        }
        self.exhausted = ""

    # the `known` predicate enumerates or tests the constructed objects
    def _known_builtin(self, atom, env):
        arg = atom.args[0]
        cur = _value(arg, env)
        if cur is not _UNBOUND:
            if cur in self.known:
                yield env
            return
        for k in sorted(self.known, key=str):
            e = dict(env)
            e[arg.name] = k
            yield e

    def done(self) -> bool:
        return all(g in self.known for g in self.goals)

    def relevant(self, name: str) -> bool:
        """Goals, and objects tied by some fact to a still unknown object."""
        if name in self.goals:
            return True
        for f in self.index.by_obj.get(name, ()):
            for a in f[1:]:
                if isinstance(a, str) and a != name and a not in self.known:
                    return True
        return False

    def _kind(self, name) -> str:
        return self.gr.objects[name].kind

    def _sorts_ok(self, op: str, inputs: tuple) -> bool:
        sig = CONSTRUCTORS[op][1]
        for a, s in zip(inputs, sig):
            if s == "n":
                continue
            if not isinstance(a, str) or a not in self.gr.objects:
                return False
            k = self._kind(a)
            if (s == "curve" and k == "point") or (s != "curve" and k != s):
                return False
        return True

    def _uses(self, rule, env) -> tuple:
        used = []
        for atom in rule.premises:
            if atom.pred in self.builtins:
                continue
            fact = (atom.pred,) + tuple(_value(a, env) for a in atom.args)
            src = self.gr.origin.get(fact)
            if src and src not in used:
                used.append(src)
        return tuple(used)

    def _common_points(self, k: str, l: str) -> list:
        on_k = {f[1] for f in self.index.by_arg.get(("on", 1, k), ())}
        return sorted(p for p in {f[1] for f in self.index.by_arg.get(("on", 1, l), ())} & on_k
                      if self._kind(p) == "point")

    def candidates(self, rule, want_known: bool = False):
        """Applications of one primitive rule.

        With ``want_known`` false these are the applications building a new
        relevant object; otherwise those whose output is already known
        (used to detect re-derivations).
        """
        concl = rule.conclusion
        assert isinstance(concl, Equation) and isinstance(concl.lhs, Var)
        op = concl.rhs.name
        out_kind = CONSTRUCTORS[op][0]
        seen = set()
        for env in _match_all(rule, self.index, self.builtins):
            out = env[concl.lhs.name]
            inputs = tuple(_value(a, env) for a in concl.rhs.args)
            if not isinstance(out, str) or self._kind(out) != out_kind:
                continue
            if (out in self.known) != want_known:
                continue
            if not self._sorts_ok(op, inputs):
                continue
            if op in ("line", "perp_bisector", "intersect") and inputs[0] == inputs[1]:
                continue
            if op == "intersect" and inputs[0] > inputs[1] and self._kind(inputs[1]) != "point":
                # both argument orders match; keep one
                inputs = (inputs[1], inputs[0])
            key = (out, op, inputs)
            if key in seen:
                continue
            seen.add(key)
            outputs, branching = (out,), False
            if op == "intersect":
                common = self._common_points(*inputs)
                has_circle = "circle" in (self._kind(inputs[0]), self._kind(inputs[1]))
                unknown = [p for p in common if p not in self.known]
                if not want_known:
                    if not has_circle:
                        if len(unknown) != 1:
                            continue
                    elif any(p in self.known for p in common) and len(unknown) == 1:
                        continue  # the other-point rule covers this
                    elif len(unknown) == 2:
                        outputs = tuple(unknown)
                    elif len(unknown) == 1:
                        branching = True
                    else:
                        continue
                elif has_circle:
                    branching = True
            if not want_known and not any(self.relevant(o) for o in outputs):
                continue
            # named objects before auxiliary ones, then by argument names
            aux = all(o.startswith("aux") for o in outputs)
            yield _Candidate((aux,) + _input_key(inputs) + tuple(outputs), op, inputs, outputs,
                             rule.id, branching, self._uses(rule, env))

    def next_step(self) -> Step | None:
        if self.done():
            return None
        for rule in self.rules:
            best = min(self.candidates(rule), default=None)
            if best is not None:
                return Step(len(self.steps) + 1, best.op, best.inputs, best.outputs, best.rule,
                            nondegeneracy_of(best.op, best.inputs), best.branching, best.uses)
        return None

    def apply(self, step: Step) -> None:
        self.steps.append(step)
        self.known.update(step.outputs)

    def run(self) -> bool:
        start = time.monotonic()
        while not self.done():
            if len(self.steps) >= self.max_steps:
                self.exhausted = f"step budget of {self.max_steps} exhausted"
                return False
            if time.monotonic() - start > self.time_limit:
                self.exhausted = f"time limit of {self.time_limit:g}s exhausted"
                return False
            step = self.next_step()
            if step is None:
                return False
            self.apply(step)
        return True

    def objects(self) -> dict:
        out = {}
        for name, o in self.gr.objects.items():
            out[name] = (o.kind, o.ctor, o.args)
        return out

    def plan(self, problem: Problem, goals=None, status: str = "solved") -> Plan:
        used = set(problem.given)
        for s in self.steps:
            used.update(s.outputs)
            used.update(s.object_inputs)
        objs = {k: v for k, v in self.objects().items() if k in used}
        return Plan(problem, tuple(self.steps), tuple(goals or self.goals), objs, status)


def _match_all(rule, index, builtins):
    return match(rule.premises, index, {}, builtins)


def _prepare(kb: KnowledgeBase, problem: Problem) -> KnowledgeBase:
    if kb.geometry and kb.geometry != problem.geometry:
        raise AbsolverError(f"a {kb.geometry} knowledge base cannot solve a {problem.geometry} problem")
    return kb if kb.grounding is not None else instantiate(kb, problem)


def next_step(kb: KnowledgeBase, known, goals=GOALS) -> Step | None:
    """The step the search would take with ``known`` objects already built."""
    kb = kb if kb.grounding is not None else instantiate(kb)
    s = Search(kb, tuple(known), goals)
    return s.next_step()


def solve(problem: Problem, kb: KnowledgeBase, max_steps: int = MAX_STEPS,
          time_limit: float = TIME_LIMIT):
    """Search for a construction; returns Solved or Unsolved without classifying further."""
    kb = _prepare(kb, problem)
    s = Search(kb, problem.given, GOALS, max_steps, time_limit)
    if s.run():
        return Solved(simplify(s.plan(problem)))
    return Unsolved(s.exhausted or "no applicable rule", s.plan(problem, status="unsolved"))


# --- classification ------------------------------------------------------------

def _redundancy(problem: Problem, kb: KnowledgeBase, max_steps, time_limit):
    # derived labels first: a vertex is rarely the natural witness
    for x in reversed(problem.given):
        others = tuple(g for g in problem.given if g != x)
        s = Search(kb, others, (x,), max_steps, time_limit)
        if s.run():
            plan = simplify(s.plan(problem, goals=(x,), status="redundant"))
            return Redundant(x, plan)
    return None


def _constraints(search: Search) -> list[tuple]:
    """Relations among constructed objects that the knowledge base asserts.

    Each is ``("on", P, K)`` or ``("rederive", X, op, inputs)``; the given
    points come first so that the reported constraint is the most direct.
    """
    known = search.known
    out = []
    for f in search.index.by_pred.get("on", ()):
        p, k = f[1], f[2]
        if p in known and k in known:
            out.append(("on", p, k))
    produced = {(s.op, s.inputs) for s in search.steps}
    for rule in search.rules:
        for c in search.candidates(rule, want_known=True):
            if (c.op, c.inputs) not in produced:
                out.append(("rederive", c.outputs[0], c.op, c.inputs))
    given = set(search.given)

    def rank(c):
        objs = [c[1], c[2]] if c[0] == "on" else [c[1], *[a for a in c[3] if isinstance(a, str)]]
        return (-sum(o in given for o in objs), c[0] != "on", str(c))

    return sorted(set(out), key=rank)


def _constraint_residual(backend, c, vals) -> float | None:
    try:
        if c[0] == "on":
            if c[1] not in vals or c[2] not in vals:
                return None
            return incidence(backend, vals[c[1]], vals[c[2]])
        _, x, op, inputs = c
        if x not in vals or any(isinstance(a, str) and a not in vals for a in inputs):
            return None
        res = apply_op(backend, op, tuple(vals[a] if isinstance(a, str) else a for a in inputs))
    except GeometryError:
        return None
    if not res:
        return math.inf
    return min(residual(backend, r, vals[x]) for r in res)


def _nearest(reference: dict):
    def pick(outs, choices):
        def cost(ch):
            return sum(math.dist(v, reference[o]) if o in reference else 0.0
                       for o, v in zip(outs, ch))
        return min(choices, key=cost)
    return pick


def _jitter(rng: random.Random, p: Point, geometry: str) -> Point:
    for _ in range(100):
        t = rng.uniform(0.0, 2.0 * math.pi)
        q = Point(p.x + LOCUS_JITTER * math.cos(t), p.y + LOCUS_JITTER * math.sin(t))
        if geometry == "euclidean" or q.x * q.x + q.y * q.y < 0.95:
            return q
    return p


def confirm_constraint(problem: Problem, search: Search, constraints, seed: int = 0):
    """First constraint that holds on true triangles and breaks on perturbed givens."""
    if not constraints:
        return None
    geometry = problem.geometry
    backend = get_backend(geometry)
    rng = random.Random(seed)
    objects = search.objects()
    holds = {c: 0 for c in constraints}
    breaks = {c: 0 for c in constraints}
    tested = {c: 0 for c in constraints}
    failed = set()
    for _ in range(LOCUS_TRIALS):
        tri, pts = sample_triangle(rng, geometry, problem.given)
        truth = evaluate_objects(objects, tri)
        givens = {g: pts[g] for g in problem.given}
        try:
            exact = execute_steps(search.steps, givens, geometry, _nearest(truth))[0]
        except (NondegeneracyViolated, StepFailed):
            continue
        moved = {g: _jitter(rng, p, geometry) for g, p in givens.items()}
        try:
            perturbed = execute_steps(search.steps, moved, geometry, _nearest(exact))[0]
        except (NondegeneracyViolated, StepFailed):
            perturbed = None
        for c in constraints:
            if c in failed:
                continue
            r = _constraint_residual(backend, c, exact)
            if r is None:
                continue
            if r > HOLDS_TOL:
                failed.add(c)
                continue
            holds[c] += 1
            if perturbed is not None:
                rp = _constraint_residual(backend, c, perturbed)
                if rp is not None:
                    tested[c] += 1
                    breaks[c] += rp > BROKEN_TOL
    for c in constraints:
        if c in failed or holds[c] < 2 or tested[c] < 2:
            continue
        if breaks[c] * 3 >= tested[c] * 2:
            return c
    return None


def describe_constraint(c) -> str:
    if c[0] == "on":
        return f"on({c[1]}, {c[2]})"
    _, x, op, inputs = c
    args = ", ".join(_fmt_key(a) if isinstance(a, Fraction) else a for a in inputs)
    return f"{x} = {op}({args})"


def classify(problem: Problem, kb: KnowledgeBase, max_steps: int = MAX_STEPS,
             time_limit: float = TIME_LIMIT, seed: int = 0):
    """Classify a problem into one of the four outcome types."""
    kb = _prepare(kb, problem)
    red = _redundancy(problem, kb, max_steps, time_limit)
    if red is not None:
        return red
    s = Search(kb, problem.given, GOALS, max_steps, time_limit)
    if s.run():
        return Solved(simplify(s.plan(problem)))
    if s.exhausted:
        return Unsolved(s.exhausted, s.plan(problem, status="unsolved"))
    c = confirm_constraint(problem, s, _constraints(s), seed)
    if c is not None:
        return LocusDependent(describe_constraint(c), s.plan(problem, status="locus_dependent"))
    return Unsolved("no applicable rule", s.plan(problem, status="unsolved"))
