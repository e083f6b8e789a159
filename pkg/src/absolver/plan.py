"""Construction plans and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import AbsolverError, GoalsNotConstructed
from .kb.syntax import CONSTRUCTORS, PRIMITIVE_REFS
from .triangle import LABELS

PLAN_VERSION = "plan/1"
GOALS = ("A", "B", "C")

_PRETTY = {"kappa": "κ"}


@dataclass(frozen=True)
class Problem:
    given: tuple
    geometry: str

    def __post_init__(self):
        given = tuple(self.given)
        if len(given) != 3 or len(set(given)) != 3:
            raise AbsolverError(f"a problem needs three distinct points, got {given}")
        bad = [g for g in given if g not in LABELS]
        if bad:
            raise AbsolverError(f"unknown significant points {bad}")
        if self.geometry not in ("euclidean", "hyperbolic"):
            raise AbsolverError(f"unknown geometry {self.geometry!r}")
        object.__setattr__(self, "given", tuple(sorted(given, key=LABELS.index)))

    @classmethod
    def parse(cls, points: str, geometry: str) -> "Problem":
        return cls(tuple(p.strip() for p in points.split(",") if p.strip()), geometry)

    @property
    def id(self) -> str:
        return "_".join(self.given)

    def __str__(self) -> str:
        return "{" + ", ".join(self.given) + "}"


def fmt_value(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return str(v)


def parse_value(s: str):
    if s and (s[0].isdigit() or s[0] == "-"):
        return Fraction(s)
    return s


@dataclass(frozen=True)
class Step:
    index: int
    op: str
    inputs: tuple
    outputs: tuple
    justification: str = ""
    nondegeneracy: tuple = ()
    branching: bool = False  # a single point picked out of two intersections
    uses: tuple = ()  # rules behind the facts that made the step applicable

    @property
    def primitive(self) -> str:
        return PRIMITIVE_REFS[self.op]

    @property
    def object_inputs(self) -> tuple:
        return tuple(a for a in self.inputs if isinstance(a, str))

    def to_dict(self) -> dict:
        d = {
            "index": self.index,
            "primitive": self.primitive,
            "op": self.op,
            "inputs": [fmt_value(a) for a in self.inputs],
            "justification": self.justification,
            "uses": list(self.uses),
            "nondegeneracy": list(self.nondegeneracy),
            "branching": self.branching,
        }
        if len(self.outputs) == 1:
            d["output"] = self.outputs[0]
        else:
            d["outputs"] = list(self.outputs)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Step":
        outputs = (d["output"],) if "output" in d else tuple(d["outputs"])
        op = d["op"]
        if op not in CONSTRUCTORS:
            raise AbsolverError(f"unknown operation {op!r}")
        return cls(d["index"], op, tuple(parse_value(a) for a in d["inputs"]), outputs,
                   d.get("justification", ""), tuple(d.get("nondegeneracy", ())),
                   d.get("branching", False), tuple(d.get("uses", ())))


def nondegeneracy_of(op: str, inputs: tuple) -> tuple:
    """Conditions under which the primitive ``op`` applied to ``inputs`` yields a result."""
    s = [fmt_value(a) for a in inputs]
    if op in ("line", "circle", "perp_bisector"):
        return (f"distinct({s[0]}, {s[1]})",)
    if op == "intersect":
        return (f"distinct({s[0]}, {s[1]})", f"meet({s[0]}, {s[1]})")
    if op == "intersect_other":
        return (f"distinct({s[0]}, {s[1]})", f"meet({s[0]}, {s[1]})")
    if op == "ratio_point":
        return (f"distinct({s[1]}, {s[2]})",)
    if op in ("limiting_parallel", "hyperparallel"):
        return (f"distinct({s[1]}, {s[2]})", f"off_line({s[0]}, {s[1]}, {s[2]})")
    if op == "angle_bisector":
        return (f"not_collinear({s[0]}, {s[1]}, {s[2]})",)
    return ()


@dataclass(frozen=True)
class Plan:
    problem: Problem
    steps: tuple = ()
    goals: tuple = GOALS
    # object name -> (kind, constructor, args) for every object the plan builds
    objects: dict = field(default_factory=dict, compare=False)
    status: str = "solved"

    def constructed(self) -> set:
        out = set(self.problem.given)
        for s in self.steps:
            out.update(s.outputs)
        return out

    def check_well_formed(self) -> None:
        have = set(self.problem.given)
        for i, s in enumerate(self.steps):
            if s.index != i + 1:
                raise AbsolverError(f"step {s.index} is out of sequence")
            missing = [a for a in s.object_inputs if a not in have]
            if missing:
                raise AbsolverError(f"step {s.index} uses {missing} before they are built")
            have.update(s.outputs)

    def to_dict(self) -> dict:
        return {
            "version": PLAN_VERSION,
            "problem": list(self.problem.given),
            "geometry": self.problem.geometry,
            "goals": list(self.goals),
            "status": self.status,
            "steps": [s.to_dict() for s in self.steps],
            "objects": {k: {"kind": v[0], "definition": _definition(v)}
                        for k, v in sorted(self.objects.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Plan":
        if d.get("version") != PLAN_VERSION:
            raise AbsolverError(f"unsupported plan version {d.get('version')!r}")
        problem = Problem(tuple(d["problem"]), d["geometry"])
        steps = tuple(Step.from_dict(s) for s in d["steps"])
        objects = {k: _parse_definition(v["kind"], v["definition"]) for k, v in d.get("objects", {}).items()}
        plan = cls(problem, steps, tuple(d.get("goals", GOALS)), objects, d.get("status", "solved"))
        plan.check_well_formed()
        return plan

    @classmethod
    def from_json(cls, text: str) -> "Plan":
        return cls.from_dict(json.loads(text))


def _definition(v) -> str:
    kind, ctor, args = v
    if ctor is None:
        return ""
    return f"{ctor}({', '.join(fmt_value(a) for a in args)})"


def _parse_definition(kind: str, text: str):
    if not text:
        return (kind, None, ())
    ctor, rest = text.split("(", 1)
    args = tuple(parse_value(a.strip()) for a in rest.rstrip(")").split(",") if a.strip())
    return (kind, ctor, args)


def simplify(plan: Plan) -> Plan:
    """Keep only the steps the goals depend on, in their original order."""
    missing = [g for g in plan.goals if g not in plan.constructed()]
    if missing:
        raise GoalsNotConstructed(f"{missing} are never constructed")
    needed = set(plan.goals)
    keep = []
    for s in reversed(plan.steps):
        if needed & set(s.outputs):
            keep.append(s)
            needed.difference_update(s.outputs)
            needed.update(s.object_inputs)
    keep.reverse()
    steps = tuple(replace(s, index=i + 1) for i, s in enumerate(keep))
    used = set(plan.problem.given)
    for s in steps:
        used.update(s.outputs)
        used.update(s.object_inputs)
    objects = {k: v for k, v in plan.objects.items() if k in used}
    return replace(plan, steps=steps, objects=objects)


def display_name(name: str, objects: dict | None = None) -> str:
    """Typeset-style label: ``Ma`` -> ``M_a``, auxiliary objects by their construction."""
    if name in _PRETTY:
        return _PRETTY[name]
    if name in LABELS or not name.startswith("aux"):
        if len(name) == 2 and name[1] in "abc":
            return f"{name[0]}_{name[1]}"
        return name
    if not objects or name not in objects:
        return name
    _, ctor, args = objects[name]
    d = [display_name(a, objects) if isinstance(a, str) else fmt_value(a) for a in args]
    if ctor == "line":
        return d[0] + d[1]
    if ctor == "circle":
        return f"k({d[0]}, {d[1]})"
    if ctor == "midpoint":
        return f"M({d[0]}, {d[1]})"
    if ctor in ("reflect_line", "reflect_point"):
        # both read "image of the first argument in the second"
        return f"s_{{{d[1]}}}({d[0]})"
    if ctor == "symmetric_point":
        return f"s_{{{d[1]}}}({d[0]})"
    if ctor == "perp_bisector":
        return f"m({d[0]}, {d[1]})"
    if ctor == "perpendicular":
        return f"p({d[0]}, {d[1]})"
    if ctor == "intersect":
        return f"{d[0]}∩{d[1]}"
    return f"{ctor}({', '.join(d)})"
