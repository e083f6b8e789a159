"""Wernick's corpus of triangle construction problems and a regression runner."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations, permutations

from .errors import AbsolverError
from .kb import KnowledgeBase, instantiate
from .plan import Problem
from .solver import MAX_STEPS, TIME_LIMIT, classify
from .triangle import LABELS
from .validator import relabel, validate

STATUSES = ("solved", "unsolved", "redundant", "locus_dependent", "budget_exhausted")
EXPECTED = ("solvable", "unsolvable", "redundant", "locus_dependent", "unknown", "excluded")
TRIVIAL = ("A", "B", "C")


def _order(triple) -> tuple:
    return tuple(sorted(triple, key=LABELS.index))


def enumerate_all() -> list[tuple]:
    """Every 3-subset of the 16 labels, each in label order, sorted."""
    return [tuple(c) for c in combinations(LABELS, 3)]


def _rank(triple) -> tuple:
    return tuple(LABELS.index(x) for x in triple)


def relabelings(triple) -> list[tuple]:
    """The six images of ``triple`` under permutations of the indices a, b, c."""
    return [_order(tuple(relabel(x, dict(zip("abc", p))) for x in triple))
            for p in permutations("abc")]


def canonicalize(triple) -> tuple:
    """Least relabeling of ``triple`` in label order."""
    for x in triple:
        if x not in LABELS:
            raise AbsolverError(f"unknown significant point {x!r}")
    return min(relabelings(triple), key=_rank)


def orbits() -> list[tuple]:
    """Canonical forms of all 560 triples, trivial {A, B, C} included."""
    return sorted({canonicalize(t) for t in enumerate_all()}, key=_rank)


def problem_classes() -> list[tuple]:
    """Significantly different problems: every orbit except the one giving the triangle."""
    return [t for t in orbits() if t != TRIVIAL]


def uses_centroid(triple) -> bool:
    return "G" in triple


# --- expected statuses ---------------------------------------------------------------

@dataclass(frozen=True)
class CorpusEntry:
    triple: tuple
    canonical: tuple
    expected_status: dict  # geometry -> one of EXPECTED
    note: str = ""


def expected_statuses() -> dict:
    """Shipped expectations keyed by the canonical triple."""
    text = (resources.files("absolver") / "data" / "expected.json").read_text(encoding="utf-8")
    data = json.loads(text)
    return {tuple(e["problem"]): e for e in data["entries"]}


def corpus_entries() -> list[CorpusEntry]:
    table = expected_statuses()
    out = []
    for t in enumerate_all():
        c = canonicalize(t)
        e = table.get(c, {})
        exp = {g: e.get(g, "unknown") for g in ("euclidean", "hyperbolic")}
        out.append(CorpusEntry(t, c, exp, e.get("note", "")))
    return out


# --- running --------------------------------------------------------------------------

@dataclass
class ProblemResult:
    problem: tuple
    status: str
    detail: str = ""
    steps: int = 0
    plan: dict | None = None
    validation: dict | None = None
    expected: str = "unknown"
    runtime: float = field(default=0.0, compare=False)

    def to_dict(self, timings: bool = False) -> dict:
        d = {
            "problem": list(self.problem),
            "id": "_".join(self.problem),
            "status": self.status,
            "detail": self.detail,
            "steps": self.steps,
            "expected": self.expected,
            "plan": self.plan,
            "validation": self.validation,
        }
        if timings:
            d["runtime"] = round(self.runtime, 4)
        return d


@dataclass
class CorpusReport:
    geometry: str
    kb_hash: str
    entries: list
    excluded: list = field(default_factory=list)

    @property
    def totals(self) -> dict:
        t = {s: 0 for s in STATUSES}
        for e in self.entries:
            t[e.status] += 1
        return t

    def by_status(self, status: str) -> list[tuple]:
        return [e.problem for e in self.entries if e.status == status]

    def entry(self, triple) -> ProblemResult:
        c = canonicalize(triple)
        for e in self.entries:
            if e.problem == c:
                return e
        raise KeyError(c)

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "geometry": self.geometry,
            "kb_hash": self.kb_hash,
            "totals": self.totals,
            "excluded": ["_".join(t) for t in self.excluded],
            "entries": [e.to_dict(timings) for e in self.entries],
        }

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["problem", "status", "detail", "steps", "expected", "pass_rate"])
        for e in self.entries:
            rate = "" if not e.validation else f"{e.validation['pass_rate']:.4f}"
            w.writerow([" ".join(e.problem), e.status, e.detail, e.steps, e.expected, rate])
        return buf.getvalue()

    @classmethod
    def from_dict(cls, d: dict) -> "CorpusReport":
        entries = [ProblemResult(tuple(e["problem"]), e["status"], e.get("detail", ""),
                                 e.get("steps", 0), e.get("plan"), e.get("validation"),
                                 e.get("expected", "unknown"), e.get("runtime", 0.0))
                   for e in d["entries"]]
        excluded = [tuple(x.split("_")) for x in d.get("excluded", [])]
        return cls(d["geometry"], d["kb_hash"], entries, excluded)

    @classmethod
    def from_json(cls, text: str) -> "CorpusReport":
        return cls.from_dict(json.loads(text))


def run_problem(triple, kb: KnowledgeBase, geometry: str, max_steps: int = MAX_STEPS,
                time_limit: float = TIME_LIMIT, trials: int = 100, seed: int = 0) -> ProblemResult:
    start = time.monotonic()
    problem = Problem(triple, geometry)
    out = classify(problem, kb, max_steps, time_limit, seed)
    res = ProblemResult(problem.given, out.status)
    if out.status == "solved":
        res.steps = len(out.plan.steps)
        res.plan = out.plan.to_dict()
        if trials:
            res.validation = validate(out.plan, trials=trials, seed=seed).to_dict()
    elif out.status == "redundant":
        res.detail = out.witness
        res.plan = out.plan.to_dict()
        res.steps = len(out.plan.steps)
    elif out.status == "locus_dependent":
        res.detail = out.constraint
    else:
        res.detail = out.reason
        if "exhausted" in out.reason:
            res.status = "budget_exhausted"
    res.runtime = time.monotonic() - start
    return res


_WORKER_KB: KnowledgeBase | None = None


def _init_worker(kb: KnowledgeBase) -> None:
    global _WORKER_KB
    _WORKER_KB = instantiate(kb)


def _run_in_worker(args) -> ProblemResult:
    return run_problem(args[0], _WORKER_KB, *args[1:])


def run_corpus(kb: KnowledgeBase, geometry: str | None = None, max_steps: int = MAX_STEPS,
               time_limit: float = TIME_LIMIT, jobs: int = 1, trials: int = 100, seed: int = 0,
               problems=None) -> CorpusReport:
    """Classify every canonical problem and validate every construction found.

    In hyperbolic geometry problems involving the centroid are skipped and
    listed as excluded.
    """
    geometry = geometry or kb.geometry
    if geometry is None:
        raise AbsolverError("no geometry given and the knowledge base names none")
    if kb.geometry and kb.geometry != geometry:
        raise AbsolverError(f"a {kb.geometry} knowledge base cannot serve {geometry} problems")
    todo = [canonicalize(t) for t in problems] if problems is not None else problem_classes()
    todo = sorted(set(todo), key=_rank)
    excluded = []
    if geometry == "hyperbolic":
        excluded = [t for t in todo if uses_centroid(t)]
        todo = [t for t in todo if not uses_centroid(t)]
    table = expected_statuses()
    authored = kb.source or kb
    args = [(t, geometry, max_steps, time_limit, trials, seed) for t in todo]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(authored,)) as ex:
            results = list(ex.map(_run_in_worker, args, chunksize=4))
    else:
        ikb = instantiate(kb)
        results = [run_problem(a[0], ikb, *a[1:]) for a in args]
    for r in results:
        r.expected = table.get(r.problem, {}).get(geometry, "unknown")
    results.sort(key=lambda r: _rank(r.problem))
    return CorpusReport(geometry, authored.digest(), results, excluded)
