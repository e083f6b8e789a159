import re
from fractions import Fraction

import pytest

from absolver.corpus import CorpusReport, run_corpus
from absolver.emitters import (
    build_compendium,
    format_text,
    instance_for,
    parse_script,
    render_svg,
    to_script,
    to_text,
)
from absolver.errors import IoFailure, MissingCoordinates
from absolver.geometry import Point
from absolver.plan import Plan, Problem, Step, nondegeneracy_of
from absolver.solver import solve

GOLDEN = [("euclidean", "A,O,G"), ("hyperbolic", "Ma,Mb,Mc"), ("hyperbolic", "A,Ma,Hb")]


@pytest.fixture(scope="module")
def plans(kbs):
    return {pts: solve(Problem.parse(pts, g), kbs[g]).plan for g, pts in GOLDEN}


def one_step(op, inputs, outputs, given=("A", "B", "C"), geometry="euclidean"):
    step = Step(1, op, inputs, outputs, "p_x", nondegeneracy_of(op, inputs))
    return Plan(Problem(given, geometry), (step,), goals=outputs)


class TestText:
    def test_midpoint_triangle_step4(self, plans):
        assert to_text(plans["Ma,Mb,Mc"])[3] == "Construct the point B symmetric to C wrt. point M_a;"

    def test_reflected_side_step3(self, plans):
        assert to_text(plans["A,Ma,Hb"])[2] == (
            "Construct the line s_{M_a}(b) that is image of the line b under the reflection "
            "wrt. point M_a;")

    def test_example_opening(self, plans):
        text = to_text(plans["A,O,G"])
        assert text[0].startswith("Construct the point M_a for which holds")
        assert text[-1] == "Construct the intersection points B and C of the line a and the circle κ."

    def test_empty(self):
        assert to_text(Plan(Problem(("A", "B", "C"), "euclidean"))) == []

    def test_punctuation(self, plans):
        for plan in plans.values():
            text = to_text(plan)
            assert all(s.endswith(";") for s in text[:-1]) and text[-1].endswith(".")
            assert len(text) == len(plan.steps)

    def test_numbered(self, plans):
        lines = format_text(plans["Ma,Mb,Mc"]).splitlines()
        assert [ln.split(".")[0] for ln in lines if ln.startswith("Step")] == [
            f"Step {k}" for k in range(1, 6)]


class TestScript:
    def test_midpoint_line(self):
        script = to_script(one_step("midpoint", ("B", "C"), ("Ma",)))
        assert "Ma = midpoint(B, C)" not in script
        assert re.search(r"^M_a = midpoint\(B, C\)(  #.*)?$", script, re.M)

    def test_ratio_line(self):
        plan = one_step("ratio_point", ("O", "O", "G", Fraction(3)), ("H",), given=("O", "G", "I"))
        assert re.search(r"^H = ratio_point\(O, O, G, 3/1\)(  #.*)?$", to_script(plan), re.M)

    @pytest.mark.parametrize("pts", [p for _, p in GOLDEN])
    def test_round_trip(self, plans, pts):
        plan = plans[pts]
        again = parse_script(to_script(plan))
        assert again == plan
        assert again.steps == plan.steps
        assert to_script(again) == to_script(plan)

    def test_rejects_garbage(self):
        with pytest.raises(Exception):
            parse_script("# absolver construction script\nthis is not a step\n")


class TestSvg:
    @pytest.mark.parametrize("pts", [p for _, p in GOLDEN])
    def test_deterministic(self, plans, pts):
        plan = plans[pts]
        a = render_svg(plan, instance_for(plan, seed=1)).svg
        b = render_svg(plan, instance_for(plan, seed=1)).svg
        assert a == b and a.startswith("<svg") and a.rstrip().endswith("</svg>")

    @pytest.mark.parametrize("pts", [p for _, p in GOLDEN])
    def test_each_object_once(self, plans, pts):
        plan = plans[pts]
        fig = render_svg(plan, instance_for(plan))
        names = [n for n, _ in fig.elements]
        want = list(plan.problem.given) + [o for s in plan.steps for o in s.outputs]
        assert sorted(names) == sorted(want) and len(set(names)) == len(names)
        assert len(re.findall(r'<text class="(?:label|given-label)"', fig.svg)) == len(want)

    def test_given_styling(self, plans):
        fig = render_svg(plans["Ma,Mb,Mc"], instance_for(plans["Ma,Mb,Mc"]))
        assert fig.svg.count('class="given"') == 3

    @pytest.mark.parametrize("pts", ["Ma,Mb,Mc", "A,Ma,Hb"])
    def test_arcs_orthogonal(self, plans, pts):
        plan = plans[pts]
        fig = render_svg(plan, instance_for(plan))
        assert 'class="absolute"' in fig.svg
        assert fig.model_arcs()
        for x, y, r in fig.model_arcs():
            assert abs(x * x + y * y - r * r - 1) < 1e-6

    def test_midpoint_triangle_figure(self, plans):
        fig = render_svg(plans["Ma,Mb,Mc"], instance_for(plans["Ma,Mb,Mc"]))
        assert ("a", "curve") in fig.elements and ("b", "curve") in fig.elements
        assert fig.svg.count('class="triangle"') == 3

    def test_euclidean_figure(self, plans):
        fig = render_svg(plans["A,O,G"], instance_for(plans["A,O,G"]))
        curves = {n for n, k in fig.elements if k == "curve"}
        assert {"kappa", "ha", "a"} <= curves
        assert 'class="absolute"' not in fig.svg and "κ" in fig.svg

    def test_missing_point(self, plans):
        plan = plans["Ma,Mb,Mc"]
        inst = instance_for(plan)
        del inst["C"]
        with pytest.raises(MissingCoordinates):
            render_svg(plan, inst)

    def test_curves_recomputed(self, plans):
        plan = plans["Ma,Mb,Mc"]
        inst = instance_for(plan)
        full = render_svg(plan, inst).svg
        points = {k: v for k, v in inst.items() if isinstance(v, Point)}
        assert render_svg(plan, points).svg == full


@pytest.fixture(scope="module")
def report(hyper_kb):
    return run_corpus(hyper_kb, problems=[("Ma", "Mb", "Mc"), ("A", "Ma", "Hb"), ("A", "B", "Mc"),
                                          ("A", "B", "O"), ("A", "B", "G")], trials=5)


class TestCompendium:
    def test_pages(self, report, tmp_path):
        paths = build_compendium(report, tmp_path)
        names = sorted(p.name for p in paths)
        assert "index.html" in names
        assert "construction_Ma_Mb_Mc.html" in names
        assert len([n for n in names if n.startswith("construction_")]) == len(report.entries)
        page = (tmp_path / "construction_Ma_Mb_Mc.html").read_text(encoding="utf-8")
        assert "<svg" in page and "symmetric to C wrt. point M_a" in page
        index = (tmp_path / "index.html").read_text(encoding="utf-8")
        for status, n in report.totals.items():
            assert f"<tr><td>{status}</td><td>{n}</td></tr>" in index

    def test_byte_identical(self, report, tmp_path):
        a = {p.name: p.read_bytes() for p in build_compendium(report, tmp_path / "one")}
        b = {p.name: p.read_bytes() for p in build_compendium(report, tmp_path / "two")}
        assert a == b

    def test_from_saved_report(self, report, tmp_path):
        again = CorpusReport.from_json(report.to_json())
        a = {p.name: p.read_bytes() for p in build_compendium(report, tmp_path / "one")}
        b = {p.name: p.read_bytes() for p in build_compendium(again, tmp_path / "two")}
        assert a == b

    def test_empty(self, tmp_path):
        paths = build_compendium(CorpusReport("hyperbolic", "0" * 16, []), tmp_path)
        assert [p.name for p in paths] == ["index.html"]
        index = paths[0].read_text(encoding="utf-8")
        for status in ("solved", "unsolved", "redundant", "locus_dependent", "budget_exhausted"):
            assert f"<tr><td>{status}</td><td>0</td></tr>" in index

    def test_unwritable(self, report, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        with pytest.raises(IoFailure):
            build_compendium(report, blocker)
