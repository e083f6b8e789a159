"""Plan output: English step lists, construction scripts, SVG figures and an HTML site.

Construction script grammar::

    script     = { header } , { step | where } ;
    header     = "#" , key , ":" , text , NL ;          (* geometry, given, goals, status *)
    step       = outputs , "=" , op , "(" , args , ")" , [ annotation ] , NL ;
    where      = "# where" , name , "=" , ctor , "(" , args , ")" , NL ;
    outputs    = name , [ "," , name ] ;
    args       = arg , { "," , arg } ;
    arg        = name | integer , "/" , integer ;
    annotation = "#" , "by" , rule , [ ";" , "uses" , rule , { "," , rule } ] , [ ";" , "branching" ] ;

Names are written with subscripts (``M_a`` for ``Ma``); ``where`` lines
define auxiliary objects so their display names survive a round trip.
Blank lines and other comment lines are ignored.
"""

from __future__ import annotations

import html
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import AbsolverError, IoFailure, MissingCoordinates
from .geometry import Arc, Circle, Diameter, Line, Point, get_backend
from .kb.syntax import CONSTRUCTORS
from .plan import GOALS, Plan, Problem, Step, display_name, fmt_value, nondegeneracy_of
from .validator import apply_op, plan_instance

__all__ = [
    "RenderedFigure", "build_compendium", "format_text", "parse_script", "render_svg",
    "to_script", "to_text",
]


# --- natural language ------------------------------------------------------------------

def _kind(plan: Plan, name: str) -> str:
    if name in plan.objects:
        return plan.objects[name][0]
    for s in plan.steps:
        if name in s.outputs:
            return CONSTRUCTORS[s.op][0]
    return "point"


def _sentence(plan: Plan, step: Step) -> str:
    n = lambda x: display_name(x, plan.objects)  # noqa: E731
    a = [n(x) if isinstance(x, str) else fmt_value(x) for x in step.inputs]
    out = [n(x) for x in step.outputs]
    op = step.op
    if op == "line":
        return f"Construct the line {out[0]} through the points {a[0]} and {a[1]}"
    if op == "circle":
        return f"Construct the circle {out[0]} centered at point {a[0]} passing through point {a[1]}"
    if op in ("intersect", "intersect_other"):
        k0, k1 = (_kind(plan, x) for x in step.inputs[:2])
        what = f"the {k0} {a[0]} and the {k1} {a[1]}"
        if len(out) == 2:
            return f"Construct the intersection points {out[0]} and {out[1]} of {what}"
        s = f"Construct the intersection point {out[0]} of {what}"
        if op == "intersect_other":
            return s + f" other than {a[2]}"
        return s + " (one of the two)" if step.branching else s
    if op == "perpendicular":
        return f"Construct the line {out[0]} perpendicular to the line {a[1]} passing through point {a[0]}"
    if op == "parallel_through":
        return f"Construct the line {out[0]} parallel to the line {a[1]} passing through point {a[0]}"
    if op == "perp_bisector":
        return f"Construct the perpendicular bisector {out[0]} of the segment {a[0]}{a[1]}"
    if op == "limiting_parallel":
        return (f"Construct the line {out[0]} through point {a[0]} limiting parallel to the line "
                f"{a[1]}{a[2]} in the direction from {a[1]} to {a[2]}")
    if op == "hyperparallel":
        return (f"Construct the line {out[0]} through point {a[0]} perpendicular to the "
                f"perpendicular dropped from {a[0]} to the line {a[1]}{a[2]}")
    if op == "ratio_point":
        base = f"{a[0]}{out[0]}/{a[1]}{a[2]}"
        return f"Construct the point {out[0]} for which holds {base} = {a[3]}"
    if op == "midpoint":
        return f"Construct the midpoint {out[0]} of the segment {a[0]}{a[1]}"
    if op == "symmetric_point":
        return f"Construct the point {out[0]} symmetric to {a[0]} wrt. point {a[1]}"
    if op == "reflect_point":
        return f"Construct the point {out[0]} symmetric to {a[0]} wrt. the line {a[1]}"
    if op == "reflect_line":
        return (f"Construct the line {out[0]} that is image of the line {a[0]} "
                f"under the reflection wrt. point {a[1]}")
    if op == "angle_bisector":
        return f"Construct the bisector {out[0]} of the angle {a[0]}{a[1]}{a[2]}"
    raise AbsolverError(f"no wording for operation {op!r}")


def to_text(plan: Plan) -> list[str]:
    """One sentence per step; all but the last end in a semicolon."""
    sentences = [_sentence(plan, s) for s in plan.steps]
    return [s + (";" if i < len(sentences) - 1 else ".") for i, s in enumerate(sentences)]


def format_text(plan: Plan) -> str:
    lines = [f"Problem {plan.problem} ({plan.problem.geometry})"]
    lines += [f"Step {i}. {s}" for i, s in enumerate(to_text(plan), 1)]
    return "\n".join(lines) + "\n"


# --- construction scripts -----------------------------------------------------------------

_SUBSCRIPTED = re.compile(r"^([A-Z])_([abc])$")


def _script_name(name: str) -> str:
    if len(name) == 2 and name[0].isupper() and name[1] in "abc":
        return f"{name[0]}_{name[1]}"
    return name


def _plain_name(text: str) -> str:
    m = _SUBSCRIPTED.match(text)
    return m.group(1) + m.group(2) if m else text


def _script_arg(a) -> str:
    return fmt_value(a) if isinstance(a, Fraction) else _script_name(a)


def to_script(plan: Plan) -> str:
    lines = [
        "# absolver construction script",
        f"# geometry: {plan.problem.geometry}",
        f"# given: {', '.join(_script_name(g) for g in plan.problem.given)}",
        f"# goals: {', '.join(_script_name(g) for g in plan.goals)}",
        f"# status: {plan.status}",
    ]
    for s in plan.steps:
        note = [f"by {s.justification}"] if s.justification else []
        if s.uses:
            note.append("uses " + ", ".join(s.uses))
        if s.branching:
            note.append("branching")
        body = (f"{', '.join(_script_name(o) for o in s.outputs)} = "
                f"{s.op}({', '.join(_script_arg(a) for a in s.inputs)})")
        lines.append(body + (f"  # {'; '.join(note)}" if note else ""))
    for name, (kind, ctor, args) in sorted(plan.objects.items()):
        if name.startswith("aux") and ctor:
            lines.append(f"# where {name} = {ctor}({', '.join(_script_arg(a) for a in args)})")
    return "\n".join(lines) + "\n"


_CALL = re.compile(r"^([\w, ]+?)\s*=\s*(\w+)\((.*)\)$")


def _parse_args(text: str) -> tuple:
    out = []
    for a in (x.strip() for x in text.split(",")):
        if not a:
            continue
        out.append(Fraction(a) if a[0].isdigit() or a[0] == "-" else _plain_name(a))
    return tuple(out)


def parse_script(text: str) -> Plan:
    """Read a script produced by :func:`to_script` back into a plan."""
    header, steps, objects = {}, [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("# where "):
            m = _CALL.match(line[len("# where "):])
            if not m:
                raise AbsolverError(f"line {lineno}: malformed definition")
            ctor = m.group(2)
            if ctor not in CONSTRUCTORS:
                raise AbsolverError(f"line {lineno}: unknown constructor {ctor!r}")
            objects[m.group(1).strip()] = (CONSTRUCTORS[ctor][0], ctor, _parse_args(m.group(3)))
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if sep:
                header[key.strip()] = value.strip()
            continue
        body, _, note = line.partition("#")
        m = _CALL.match(body.strip())
        if not m:
            raise AbsolverError(f"line {lineno}: expected 'outputs = op(args)'")
        outputs = tuple(_plain_name(o.strip()) for o in m.group(1).split(","))
        op = m.group(2)
        if op not in CONSTRUCTORS:
            raise AbsolverError(f"line {lineno}: unknown operation {op!r}")
        inputs = _parse_args(m.group(3))
        rule, uses, branching = "", (), False
        for part in (p.strip() for p in note.split(";")):
            if part.startswith("by "):
                rule = part[3:].strip()
            elif part.startswith("uses "):
                uses = tuple(u.strip() for u in part[5:].split(","))
            elif part == "branching":
                branching = True
        steps.append(Step(len(steps) + 1, op, inputs, outputs, rule,
                          nondegeneracy_of(op, inputs), branching, uses))
    try:
        geometry = header["geometry"]
        given = tuple(_plain_name(g.strip()) for g in header["given"].split(","))
    except KeyError as e:
        raise AbsolverError(f"script lacks the {e.args[0]!r} header") from None
    goals = tuple(_plain_name(g.strip()) for g in header.get("goals", ", ".join(GOALS)).split(","))
    used = set(given)
    for s in steps:
        used.update(s.outputs)
    plan = Plan(Problem(given, geometry), tuple(steps), goals,
                {k: v for k, v in objects.items() if k in used}, header.get("status", "solved"))
    plan.check_well_formed()
    return plan


# --- SVG ----------------------------------------------------------------------------------

SIZE = 600
DISC_RADIUS = 280.0


def _num(v: float) -> str:
    s = f"{v:.9f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


@dataclass(frozen=True)
class RenderedFigure:
    svg: str
    # (name, kind) for every plan object drawn, in drawing order
    elements: tuple
    # screen-space (cx, cy, r) of every h-line drawn as an arc
    arcs: tuple
    # model -> screen: (x, y) -> (ox + scale * x, oy - scale * y)
    scale: float
    origin: tuple

    def to_model(self, sx: float, sy: float) -> tuple[float, float]:
        return ((sx - self.origin[0]) / self.scale, (self.origin[1] - sy) / self.scale)

    def model_arcs(self) -> list[tuple[float, float, float]]:
        out = []
        for cx, cy, r in self.arcs:
            x, y = self.to_model(cx, cy)
            out.append((x, y, r / self.scale))
        return out


class _Canvas:
    def __init__(self, scale: float, origin: tuple):
        self.scale = scale
        self.ox, self.oy = origin
        self.parts: list[str] = []
        self.arcs: list[tuple] = []

    def xy(self, p) -> tuple[float, float]:
        return self.ox + self.scale * p[0], self.oy - self.scale * p[1]

    def add(self, s: str) -> None:
        self.parts.append(s)


_STYLE = """
.absolute { fill: none; stroke: #444; stroke-width: 1.2 }
.triangle { fill: none; stroke: #000; stroke-width: 2 }
.curve { fill: none; stroke: #1f5fa8; stroke-width: 1.2 }
.aux { fill: none; stroke: #888; stroke-width: 1; stroke-dasharray: 6 4 }
.point { fill: #000 }
.given { fill: #c0392b; stroke: #000; stroke-width: 0.8 }
.label { font-family: serif; font-size: 14px; fill: #222 }
.given-label { font-family: serif; font-size: 14px; font-weight: bold; fill: #c0392b }
""".strip()


def _clip_line(line: Line, box: tuple) -> tuple | None:
    """Segment of an infinite line inside the model rectangle ``box``."""
    (nx, ny), c = line.normal, line.offset
    x0, y0, x1, y1 = box
    pts = []
    if abs(ny) > 1e-12:
        for x in (x0, x1):
            y = (c - nx * x) / ny
            if y0 - 1e-12 <= y <= y1 + 1e-12:
                pts.append((x, y))
    if abs(nx) > 1e-12:
        for y in (y0, y1):
            x = (c - ny * y) / nx
            if x0 - 1e-12 <= x <= x1 + 1e-12:
                pts.append((x, y))
    if len(pts) < 2:
        return None
    pts.sort()
    return pts[0], pts[-1]


def _sweep(canvas: _Canvas, p, mid, q) -> int:
    """SVG sweep flag for the circular arc from p through mid to q."""
    (ax, ay), (bx, by), (cx, cy) = canvas.xy(p), canvas.xy(mid), canvas.xy(q)
    cross = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
    return 1 if cross > 0 else 0


def _arc_path(canvas: _Canvas, arc: Arc, p, q, mid) -> str:
    r = arc.radius * canvas.scale
    (x1, y1), (x2, y2) = canvas.xy(p), canvas.xy(q)
    large = 1 if _arc_angle(arc, p, q, mid) > math.pi else 0
    return (f"M {_num(x1)} {_num(y1)} A {_num(r)} {_num(r)} 0 {large} "
            f"{_sweep(canvas, p, mid, q)} {_num(x2)} {_num(y2)}")


def _arc_angle(arc: Arc, p, q, mid) -> float:
    c = complex(*arc.center)
    ang = lambda z: math.atan2((z - c).imag, (z - c).real)  # noqa: E731
    a, b, m = ang(complex(*p)), ang(complex(*q)), ang(complex(*mid))
    span = (b - a) % (2 * math.pi)
    return span if (m - a) % (2 * math.pi) <= span else 2 * math.pi - span


def _draw_hline(canvas: _Canvas, line, cls: str, p=None, q=None) -> tuple:
    """Draw an h-line, or its segment between p and q; returns a label anchor."""
    backend = get_backend("hyperbolic")
    if p is None:
        p, q = backend.ideal_endpoints(line)
    if isinstance(line, Diameter):
        (x1, y1), (x2, y2) = canvas.xy(p), canvas.xy(q)
        canvas.add(f'<line class="{cls}" x1="{_num(x1)}" y1="{_num(y1)}" '
                   f'x2="{_num(x2)}" y2="{_num(y2)}"/>')
        return ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
    c = complex(*line.center)
    # the arc point between p and q lies on the side of the chord facing the origin
    chord_mid = (complex(*p) + complex(*q)) / 2
    d = chord_mid - c
    mid = c + line.radius * d / abs(d)
    canvas.add(f'<path class="{cls}" d="{_arc_path(canvas, line, p, q, (mid.real, mid.imag))}"/>')
    cx, cy = canvas.xy(line.center)
    canvas.arcs.append((cx, cy, line.radius * canvas.scale))
    return (mid.real, mid.imag)


def _draw_curve(canvas: _Canvas, geometry: str, obj, cls: str, box) -> tuple | None:
    if isinstance(obj, Circle):
        cx, cy = canvas.xy(obj.center)
        canvas.add(f'<circle class="{cls}" cx="{_num(cx)}" cy="{_num(cy)}" '
                   f'r="{_num(obj.radius * canvas.scale)}"/>')
        return (obj.center[0] + obj.radius * 0.7071, obj.center[1] + obj.radius * 0.7071)
    if geometry == "hyperbolic":
        return _draw_hline(canvas, obj, cls)
    seg = _clip_line(obj, box)
    if seg is None:
        return None
    (x1, y1), (x2, y2) = canvas.xy(seg[0]), canvas.xy(seg[1])
    canvas.add(f'<line class="{cls}" x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" y2="{_num(y2)}"/>')
    t = 0.3
    return (seg[0][0] + t * (seg[1][0] - seg[0][0]), seg[0][1] + t * (seg[1][1] - seg[0][1]))


def _complete(plan: Plan, instance: dict) -> dict:
    """Fill in curves the instance lacks by replaying their steps; points are required."""
    vals = dict(instance)
    backend = get_backend(plan.problem.geometry)
    names = list(plan.problem.given) + [o for s in plan.steps for o in s.outputs]
    for s in plan.steps:
        if all(o in vals for o in s.outputs):
            continue
        if CONSTRUCTORS[s.op][0] == "point":
            missing = [o for o in s.outputs if o not in vals]
            raise MissingCoordinates(f"no coordinates for {', '.join(missing)}")
        try:
            args = tuple(vals[a] if isinstance(a, str) else a for a in s.inputs)
        except KeyError as e:
            raise MissingCoordinates(f"no coordinates for {e.args[0]}") from None
        vals[s.outputs[0]] = apply_op(backend, s.op, args)[0]
    missing = [n for n in names if n not in vals]
    if missing:
        raise MissingCoordinates(f"no coordinates for {', '.join(missing)}")
    return vals


def _frame(geometry: str, vals: dict, names: list) -> tuple[float, tuple, tuple]:
    if geometry == "hyperbolic":
        box = (-1.0, -1.0, 1.0, 1.0)
        return DISC_RADIUS, (SIZE / 2, SIZE / 2), box
    xs, ys = [], []
    for n in names:
        v = vals[n]
        if isinstance(v, Point):
            xs.append(v.x)
            ys.append(v.y)
        elif isinstance(v, Circle):
            xs += [v.center[0] - v.radius, v.center[0] + v.radius]
            ys += [v.center[1] - v.radius, v.center[1] + v.radius]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    margin = 0.08 * span
    x0, x1, y0, y1 = x0 - margin, x1 + margin, y0 - margin, y1 + margin
    span = max(x1 - x0, y1 - y0)
    scale = SIZE / span
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    box = (cx - span / 2, cy - span / 2, cx + span / 2, cy + span / 2)
    return scale, (SIZE / 2 - scale * cx, SIZE / 2 + scale * cy), box


def render_svg(plan: Plan, instance: dict) -> RenderedFigure:
    """Draw the plan's objects on concrete coordinates.

    ``instance`` maps object names to values; points must all be present,
    curves missing from it are recomputed from their step.
    """
    geometry = plan.problem.geometry
    vals = _complete(plan, instance)
    names = list(plan.problem.given) + [o for s in plan.steps for o in s.outputs]
    scale, origin, box = _frame(geometry, vals, names)
    canvas = _Canvas(scale, origin)
    canvas.add(f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" '
               f'height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">')
    canvas.add(f"<style>\n{_STYLE}\n</style>")
    canvas.add(f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#fff"/>')
    if geometry == "hyperbolic":
        canvas.add(f'<circle class="absolute" cx="{_num(SIZE / 2)}" cy="{_num(SIZE / 2)}" '
                   f'r="{_num(DISC_RADIUS)}"/>')
    labels = []
    elements = []
    curves = [n for n in names if not isinstance(vals[n], Point)]
    points = [n for n in names if isinstance(vals[n], Point)]
    for n in curves:
        cls = "aux" if n.startswith("aux") else "curve"
        anchor = _draw_curve(canvas, geometry, vals[n], cls, box)
        elements.append((n, "curve"))
        if anchor is not None:
            labels.append((n, anchor, "label"))
    if all(g in vals and isinstance(vals[g], Point) for g in GOALS):
        backend = get_backend(geometry)
        for p, q in (("A", "B"), ("B", "C"), ("C", "A")):
            P, Q = vals[p], vals[q]
            if geometry == "hyperbolic":
                _draw_hline(canvas, backend.line_through(P, Q), "triangle", P, Q)
            else:
                (x1, y1), (x2, y2) = canvas.xy(P), canvas.xy(Q)
                canvas.add(f'<line class="triangle" x1="{_num(x1)}" y1="{_num(y1)}" '
                           f'x2="{_num(x2)}" y2="{_num(y2)}"/>')
    given = set(plan.problem.given)
    for n in points:
        x, y = canvas.xy(vals[n])
        cls = "given" if n in given else "point"
        canvas.add(f'<circle class="{cls}" cx="{_num(x)}" cy="{_num(y)}" r="{4 if n in given else 3}"/>')
        elements.append((n, "point"))
        labels.append((n, vals[n], "given-label" if n in given else "label"))
    for n, at, cls in labels:
        x, y = canvas.xy(at)
        text = html.escape(display_name(n, plan.objects))
        canvas.add(f'<text class="{cls}" x="{_num(x + 5)}" y="{_num(y - 5)}">{text}</text>')
    canvas.add("</svg>")
    return RenderedFigure("\n".join(canvas.parts) + "\n", tuple(elements), tuple(canvas.arcs),
                          scale, origin)


def instance_for(plan: Plan, seed: int = 0) -> dict:
    """Coordinates for every plan object on a sampled triangle."""
    return plan_instance(plan, seed)[1]


# --- compendium ----------------------------------------------------------------------------

_PAGE_CSS = ("body { font-family: sans-serif; max-width: 60em; margin: 2em auto } "
             "pre { background: #f4f4f4; padding: 1em } td, th { padding: 0.2em 0.8em }")


def _page(title: str, body: str) -> str:
    return (f'<!DOCTYPE html>\n<html lang="en">\n<head>\n<meta charset="utf-8">\n'
            f"<title>{html.escape(title)}</title>\n<style>{_PAGE_CSS}</style>\n</head>\n"
            f"<body>\n{body}\n</body>\n</html>\n")


def _problem_page(report, i: int) -> tuple[str, str]:
    e = report.entries[i]
    pid = "_".join(e.problem)
    title = f"{{{', '.join(e.problem)}}} in {report.geometry} geometry"
    parts = [f"<h1>{html.escape(title)}</h1>",
             f"<p>Status: <b>{html.escape(e.status)}</b> (expected: {html.escape(e.expected)})</p>"]
    if e.detail:
        parts.append(f"<p>{html.escape(e.detail)}</p>")
    if e.plan and e.status == "solved":
        plan = Plan.from_dict(e.plan)
        items = "\n".join(f"<li>{html.escape(s)}</li>" for s in to_text(plan))
        parts.append(f"<h2>Construction</h2>\n<ol>\n{items}\n</ol>")
        parts.append(f"<h2>Script</h2>\n<pre>{html.escape(to_script(plan))}</pre>")
        try:
            fig = render_svg(plan, instance_for(plan))
            parts.append(f"<h2>Figure</h2>\n{fig.svg}")
        except AbsolverError as err:
            parts.append(f"<p>No figure: {html.escape(str(err))}</p>")
        if e.validation:
            v = e.validation
            parts.append(f"<p>Numeric check: {v['passes']} of {v['trials']} trials passed.</p>")
    nav = []
    if i > 0:
        prev = "_".join(report.entries[i - 1].problem)
        nav.append(f'<a href="construction_{prev}.html">previous</a>')
    nav.append('<a href="index.html">index</a>')
    if i + 1 < len(report.entries):
        nxt = "_".join(report.entries[i + 1].problem)
        nav.append(f'<a href="construction_{nxt}.html">next</a>')
    parts.append("<p>" + " | ".join(nav) + "</p>")
    return pid, _page(title, "\n".join(parts))


def build_compendium(report, outdir) -> list[Path]:
    """Write ``index.html`` plus one page per problem; returns the files written."""
    out = Path(outdir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        written = []
        rows = []
        for i, e in enumerate(report.entries):
            pid, text = _problem_page(report, i)
            path = out / f"construction_{pid}.html"
            path.write_text(text, encoding="utf-8")
            written.append(path)
            rows.append(f'<tr><td><a href="construction_{pid}.html">{html.escape(", ".join(e.problem))}'
                        f"</a></td><td>{e.status}</td><td>{e.steps or ''}</td></tr>")
        totals = "\n".join(f"<tr><td>{k}</td><td>{v}</td></tr>" for k, v in report.totals.items())
        excluded = ""
        if report.excluded:
            excluded = "<p>Excluded: " + html.escape("; ".join(", ".join(t) for t in report.excluded)) + "</p>"
        body = (f"<h1>Triangle constructions, {html.escape(report.geometry)} geometry</h1>\n"
                f"<p>Knowledge base {html.escape(report.kb_hash[:12])}, "
                f"{len(report.entries)} problems.</p>\n"
                f"<h2>Totals</h2>\n<table>\n{totals}\n</table>\n{excluded}\n"
                f"<h2>Problems</h2>\n<table>\n<tr><th>given</th><th>status</th><th>steps</th></tr>\n"
                + "\n".join(rows) + "\n</table>")
        index = out / "index.html"
        index.write_text(_page(f"{report.geometry} compendium", body), encoding="utf-8")
    except OSError as err:
        raise IoFailure(f"cannot write compendium to {out}: {err}") from err
    return [index] + written
