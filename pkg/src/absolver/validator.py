"""Numeric execution and validation of construction plans.

Plans are run on the backends against sampled triangles. A trial passes
when one of the candidate triangles produced by the plan (two-point
intersections branch) equals the sampled triangle, up to the relabelings
that leave the problem's given points unchanged.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import permutations

from .errors import (
    AbsolverError,
    DegenerateTriangle,
    GeometryError,
    NondegeneracyViolated,
    StepFailed,
)
from .geometry import Direction, Point, get_backend
from .plan import GOALS, Plan, Step
from .triangle import TriangleInstance, is_nondegenerate, significant_points

EUCLIDEAN_BOX = 1.0
HYPERBOLIC_RADIUS = 0.9
POINT_TOL = 1e-9


# --- single operations --------------------------------------------------------

def _direction_towards(backend, x: Point, y: Point, line) -> Direction:
    """Ideal end of the h-line XY reached by walking from X through Y."""
    ends = backend.ideal_endpoints(line)
    e = min(ends, key=lambda e: math.dist(e, y) - math.dist(e, x))
    return Direction.of(*e)


def apply_op(backend, op: str, args: tuple) -> list:
    """All results of one construction; several only for intersections."""
    if op == "line":
        return [backend.line_through(*args)]
    if op == "circle":
        return [backend.circle_center_point(*args)]
    if op == "intersect":
        return backend.intersect(*args)
    if op == "intersect_other":
        k, l, q = args
        pts = backend.intersect(k, l)
        if len(pts) < 2:
            return []
        return [max(pts, key=lambda p: math.dist(p, q))]
    if op == "perpendicular":
        return [backend.perpendicular_through(*args)]
    if op == "perp_bisector":
        return [backend.perp_bisector(*args)]
    if op == "parallel_through":
        return [backend.parallel_through(*args)]
    if op == "limiting_parallel":
        p, x, y = args
        line = backend.line_through(x, y)
        return [backend.limiting_parallel(p, line, _direction_towards(backend, x, y, line))]
    if op == "hyperparallel":
        p, x, y = args
        return [backend.hyperparallel_at_foot(p, backend.line_through(x, y))]
    if op == "ratio_point":
        return [backend.ratio_point(*args)]
    if op == "midpoint":
        return [backend.midpoint(*args)]
    if op == "symmetric_point":
        return [backend.symmetric_point(*args)]
    if op == "reflect_point":
        return [backend.reflect_point_in_line(*args)]
    if op == "reflect_line":
        return [backend.reflect_line_in_point(*args)]
    if op == "angle_bisector":
        return [backend.angle_bisector(*args)]
    raise AbsolverError(f"unknown operation {op!r}")


def residual(backend, u, v) -> float:
    """Distance-like mismatch between two values of the same sort."""
    return backend.gap(u, v)


def incidence(backend, p, curve) -> float:
    return backend.gcircle(curve).distance(p.z)


# --- evaluation of named objects ---------------------------------------------

def evaluate_objects(objects: dict, triangle: TriangleInstance) -> dict:
    """Coordinates of every object from its definition; unevaluable ones are skipped.

    ``objects`` maps names to (kind, constructor, args) with A, B, C having
    no constructor. Intersections with two results are skipped as ambiguous.
    """
    backend = get_backend(triangle.geometry)
    values = {"A": triangle.A, "B": triangle.B, "C": triangle.C}
    pending = [n for n, o in objects.items() if n not in values and o[1] is not None]
    while pending:
        rest = []
        for name in pending:
            _, ctor, args = objects[name]
            if any(isinstance(a, str) and a not in values for a in args):
                rest.append(name)
                continue
            try:
                res = apply_op(backend, ctor, tuple(values[a] if isinstance(a, str) else a for a in args))
            except GeometryError:
                res = []
            if len(res) == 1:
                values[name] = res[0]
        if len(rest) == len(pending):
            break
        pending = rest
    return values


# --- plan execution -------------------------------------------------------------

def _check_conditions(backend, step: Step, vals: dict) -> None:
    for cond in step.nondegeneracy:
        pred, rest = cond.split("(", 1)
        names = [a.strip() for a in rest.rstrip(")").split(",")]
        objs = [vals[n] for n in names if n in vals]
        if len(objs) != len(names):
            continue
        ok = True
        if pred == "distinct":
            ok = residual(backend, objs[0], objs[1]) > POINT_TOL
        elif pred == "off_line":
            p, x, y = objs
            ok = math.dist(x, y) > POINT_TOL and incidence(backend, p, backend.line_through(x, y)) > POINT_TOL
        elif pred == "not_collinear":
            x, v, y = objs
            try:
                ok = incidence(backend, y, backend.line_through(x, v)) > POINT_TOL
            except GeometryError:
                ok = False
        if not ok:
            raise NondegeneracyViolated(step.index, cond)


def run_step(backend, step: Step, vals: dict, pick=None) -> list[dict]:
    """Apply one step to one branch of values; returns the successor branches.

    ``pick(name, candidates)`` may choose among intersection points instead
    of branching over all of them.
    """
    _check_conditions(backend, step, vals)
    try:
        args = tuple(vals[a] if isinstance(a, str) else a for a in step.inputs)
    except KeyError as e:
        raise StepFailed(step.index, f"missing value for {e.args[0]}") from None
    try:
        res = apply_op(backend, step.op, args)
    except GeometryError as e:
        raise StepFailed(step.index, e) from e
    if not res:
        raise NondegeneracyViolated(step.index, f"no intersection for {step.outputs}")
    outs = step.outputs
    if len(outs) == 2:
        if len(res) != 2:
            raise NondegeneracyViolated(step.index, "tangent intersection")
        choices = [(res[0], res[1]), (res[1], res[0])]
    else:
        choices = [(r,) for r in res]
    if pick is not None and len(choices) > 1:
        choices = [pick(outs, choices)]
    branches = []
    for ch in choices:
        nv = dict(vals)
        nv.update(zip(outs, ch))
        branches.append(nv)
    return branches


def execute_steps(steps, givens: dict, geometry: str, pick=None) -> list[dict]:
    backend = get_backend(geometry)
    branches = [dict(givens)]
    last_error = None
    for step in steps:
        nxt = []
        for vals in branches:
            try:
                nxt.extend(run_step(backend, step, vals, pick))
            except NondegeneracyViolated as e:
                last_error = e
            except StepFailed as e:
                if isinstance(e.cause, GeometryError):
                    last_error = NondegeneracyViolated(step.index, str(e.cause))
                else:
                    raise
        branches = nxt
        if not branches:
            raise last_error or NondegeneracyViolated(step.index, "no branch survives")
    return branches


def execute_plan(plan: Plan, givens: dict) -> list[tuple]:
    """Candidate (A, B, C) triples produced by a plan from given coordinates."""
    missing = [g for g in plan.problem.given if g not in givens]
    if missing:
        raise AbsolverError(f"coordinates missing for {missing}")
    branches = execute_steps(plan.steps, {g: givens[g] for g in plan.problem.given},
                             plan.problem.geometry)
    out = []
    for vals in branches:
        if all(g in vals for g in GOALS):
            cand = tuple(vals[g] for g in GOALS)
            if cand not in out:
                out.append(cand)
    return out


def plan_instance(plan: Plan, seed: int = 0) -> tuple[TriangleInstance, dict]:
    """A sampled triangle and the values of every object the plan builds on it.

    Among branching intersections the branch reproducing the sampled
    triangle is kept; sampling is retried until a non-degenerate run exists.
    """
    rng = random.Random(seed)
    geometry = plan.problem.geometry
    last = None
    for _ in range(100):
        t, pts = sample_triangle(rng, geometry, plan.problem.given)
        try:
            branches = execute_steps(plan.steps, {g: pts[g] for g in plan.problem.given}, geometry)
        except NondegeneracyViolated as e:
            last = e
            continue
        truth = (t.A, t.B, t.C)

        def score(vals):
            if not all(g in vals for g in plan.goals):
                return 0.0
            if tuple(plan.goals) != GOALS:
                return sum(math.dist(vals[g], pts[g]) for g in plan.goals)
            return match_residual(tuple(vals[g] for g in GOALS), truth, plan.problem.given)

        return t, min(branches, key=score)
    raise last or DegenerateTriangle("no admissible instance")


# --- symmetry of a problem -----------------------------------------------------

_INDEX_SWAP = {"A": "a", "B": "b", "C": "c"}


def relabel(label: str, perm: dict) -> str:
    """Apply a permutation of the indices a, b, c to a significant point label."""
    if label in ("A", "B", "C"):
        return perm[label.lower()].upper()
    if len(label) == 2 and label[1] in "abc":
        return label[0] + perm[label[1]]
    return label


def symmetries(given) -> list[dict]:
    """Index permutations that map the given set to itself (identity first)."""
    out = []
    for p in permutations("abc"):
        perm = dict(zip("abc", p))
        if {relabel(g, perm) for g in given} == set(given):
            out.append(perm)
    return out


def match_residual(cand, truth, given) -> float:
    best = math.inf
    for perm in symmetries(given):
        order = [relabel(v, perm) for v in GOALS]
        r = max(math.dist(cand[i], truth[GOALS.index(order[i])]) for i in range(3))
        best = min(best, r)
    return best


# --- sampling ----------------------------------------------------------------------

def sample_vertex(rng: random.Random, geometry: str) -> Point:
    if geometry == "euclidean":
        return Point(rng.uniform(0.0, EUCLIDEAN_BOX), rng.uniform(0.0, EUCLIDEAN_BOX))
    r = HYPERBOLIC_RADIUS * math.sqrt(rng.random())
    t = rng.uniform(0.0, 2.0 * math.pi)
    return Point(r * math.cos(t), r * math.sin(t))


def sample_triangle(rng: random.Random, geometry: str, required=(), max_tries: int = 10000):
    """A random nondegenerate triangle whose points ``required`` all exist."""
    for _ in range(max_tries):
        t = TriangleInstance(*(sample_vertex(rng, geometry) for _ in range(3)), geometry)
        if not is_nondegenerate(t):
            continue
        try:
            pts = significant_points(t)
        except DegenerateTriangle:
            continue
        if all(r in pts for r in required):
            return t, pts
    raise DegenerateTriangle(f"no admissible {geometry} triangle in {max_tries} samples")


# --- validation ----------------------------------------------------------------------

@dataclass
class ValidationReport:
    trials: int = 0
    passes: int = 0
    branch_resolved: int = 0  # passes where the match was not the first candidate
    filtered: int = 0  # trials excluded by a non-degeneracy condition
    max_residual: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def evaluated(self) -> int:
        return self.trials - self.filtered

    @property
    def pass_rate(self) -> float:
        return self.passes / self.evaluated if self.evaluated else 0.0

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "passes": self.passes,
            "branch_resolved": self.branch_resolved,
            "nondegeneracy_filtered": self.filtered,
            "pass_rate": self.pass_rate,
            "max_residual": self.max_residual,
            "failures": self.failures,
        }


def validate(plan: Plan, trials: int = 100, seed: int = 0, tol: float = 1e-6) -> ValidationReport:
    rng = random.Random(seed)
    report = ValidationReport()
    geometry = plan.problem.geometry
    for trial in range(trials):
        report.trials += 1
        t, pts = sample_triangle(rng, geometry, plan.problem.given)
        truth = (t.A, t.B, t.C)
        try:
            cands = execute_plan(plan, pts)
        except NondegeneracyViolated:
            report.filtered += 1
            continue
        except StepFailed as e:
            report.failures.append({"trial": trial, "error": str(e)})
            continue
        res = [match_residual(c, truth, plan.problem.given) for c in cands]
        best = min(res, default=math.inf)
        if best <= tol:
            report.passes += 1
            report.max_residual = max(report.max_residual, best)
            if res.index(best) > 0:
                report.branch_resolved += 1
        else:
            report.failures.append({"trial": trial, "residual": best if math.isfinite(best) else None})
    return report


__all__ = [
    "ValidationReport", "apply_op", "evaluate_objects", "execute_plan", "execute_steps",
    "incidence", "match_residual", "plan_instance", "relabel", "residual", "sample_triangle",
    "symmetries",
    "validate",
]
