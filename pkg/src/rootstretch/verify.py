"""Bundled fixtures and the end-to-end verification run.

Each check is registered under a tag naming the result it exercises.  A
fixture whose diagram fails validation records that failure and is skipped
by every other check; the rest of the run continues.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .arrangements import char_poly_finite_field, char_poly_mobius
from .classes import build_class_graph, check_theorem, downset_polynomial, n_zero
from .diagram import CoxeterDiagram, DiagramError, ElasticData, stretch_diagram, validate
from .roots import (
    canonical_expression,
    depth,
    downset,
    generate_positive_roots,
    is_reduced,
    is_root,
    reduced_expressions,
)
from .shards import (
    UnresolvedSubsystem,
    fractures_bruteforce,
    fractures_from_expression,
    shard_count,
    stable_charpoly,
)
from .stretch import (
    CASE2,
    CASE3,
    check_type1,
    classify_cover,
    depth_growth_rate,
    expand_expression,
    squish_root,
    stretch_root,
    stretched,
    type1_expression,
    verify_stretched_cover,
)

TAGS = (
    "validate",
    "posets",
    "stretchingroots",
    "lineardepth",
    "stretchedcovers",
    "systematicexpression",
    "stableposet",
    "polynomialgrowth",
    "fracturelist",
    "charpoly",
    "athanasiadis",
)

# systems small enough for exhaustive per-root checks
_SMALL = {"A_2", "A_3", "A_4", "B_2", "B_3", "D_4"}
AFFINE_DEPTH = 8


# fixtures -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Fixture:
    name: str
    diagram: CoxeterDiagram
    data: ElasticData
    roots: dict
    finite: bool = True


def fixture_names() -> list:
    folder = resources.files("rootstretch") / "fixtures"
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def load_fixture(name) -> Fixture:
    """Load a bundled fixture by name, or any diagram file by path."""
    path = Path(str(name))
    if path.suffix == ".json" and path.exists():
        text = path.read_text()
        name = path.stem
    else:
        res = resources.files("rootstretch") / "fixtures" / f"{name}.json"
        if not res.is_file():
            raise FileNotFoundError(f"no fixture named {name!r}")
        text = res.read_text()
    doc = json.loads(text)
    G = CoxeterDiagram.from_json(doc)
    if G.elastic is None:
        raise DiagramError(f"fixture {name} has no elastic data")
    roots = {k: tuple(v) for k, v in doc.get("roots", {}).items()}
    return Fixture(str(name), G, G.elastic, roots, bool(doc.get("finite", True)))


# report ---------------------------------------------------------------------------------


@dataclass
class Check:
    tag: str
    params: dict
    passed: bool
    details: str = ""


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def tags(self) -> set:
        return {c.tag for c in self.checks}

    def add(self, tag, params, passed, details=""):
        self.checks.append(Check(tag, params, bool(passed), details))

    def to_json(self) -> dict:
        return {
            "summary": {"total": len(self.checks), "passed": self.passed, "failed": self.failed,
                        "seconds": round(self.seconds, 3)},
            "checks": [
                {"tag": c.tag, "params": c.params, "pass": c.passed, "details": c.details}
                for c in self.checks
            ],
        }

    def table(self) -> str:
        rows = []
        for tag in TAGS:
            mine = [c for c in self.checks if c.tag == tag]
            if not mine:
                continue
            bad = [c for c in mine if not c.passed]
            rows.append(f"{tag:22s} {len(mine) - len(bad):5d}/{len(mine):<5d} {'ok' if not bad else 'FAIL'}")
            for c in bad[:5]:
                rows.append(f"    {c.params} {c.details}")
        rows.append(f"{'total':22s} {self.passed:5d}/{len(self.checks):<5d} ({self.seconds:.1f}s)")
        return "\n".join(rows)


@dataclass
class VerifyConfig:
    fixtures: tuple | None = None  # None: every bundled fixture
    tags: tuple | None = None  # None: every tag


# individual checks -----------------------------------------------------------------------


def _positive_roots(fx: Fixture):
    bound = 100 if fx.finite else AFFINE_DEPTH
    return generate_positive_roots(fx.diagram, bound).roots


def _check_validate(fx, rep):
    for n in (0, 1, 3):
        H = stretch_diagram(fx.diagram, fx.data, n)
        problems = validate(H)
        rep.add("validate", {"fixture": fx.name, "n": n}, not problems and len(H) == len(fx.diagram) + n,
                "; ".join(problems))


def _check_posets(fx, rep):
    sl = generate_positive_roots(fx.diagram, 100 if fx.finite else AFFINE_DEPTH)
    d = sl.depth_of()
    graded = all(d[up] == d[lo] + 1 for lo, _, up in sl.cover_edges)
    positive = all(min(r) >= 0 for r in sl.roots)
    rep.add("posets", {"fixture": fx.name, "property": "graded"}, graded and positive)
    family, n = fx.name.split("_")[0], len(fx.diagram)
    expected = {"A": n * (n + 1) // 2, "D": n * (n - 1), "B": n * n}.get(family)
    if fx.finite and expected is not None:
        rep.add("posets", {"fixture": fx.name, "property": "count"}, len(sl) == expected and sl.complete,
                f"{len(sl)} roots, expected {expected}")


def _check_stretchingroots(fx, rep):
    bad = []
    roots = _positive_roots(fx)
    for root in roots:
        for n in range(4):
            if not is_root(stretched(fx.diagram, fx.data, n), stretch_root(fx.diagram, root, fx.data, n)):
                bad.append((root, n))
        if squish_root(fx.diagram, stretch_root(fx.diagram, root, fx.data, 1), fx.data) != root:
            bad.append((root, "squish"))
    rep.add("stretchingroots", {"fixture": fx.name, "roots": len(roots)}, not bad, str(bad[:3]))


def _check_lineardepth(fx, rep):
    roots = _positive_roots(fx) if fx.finite else list(fx.roots.values())
    bad = []
    for root in roots:
        t = depth_growth_rate(fx.diagram, root, fx.data)
        d0 = depth(fx.diagram, root)
        for n in range(4):
            got = depth(stretched(fx.diagram, fx.data, n), stretch_root(fx.diagram, root, fx.data, n))
            if got != t * n + d0:
                bad.append((root, n, got, t * n + d0))
    rep.add("lineardepth", {"fixture": fx.name, "roots": len(roots)}, not bad, str(bad[:3]))


def _check_stretchedcovers(fx, rep):
    expect = {"case2": CASE2, "case3": CASE3}
    for label, root in fx.roots.items():
        if label not in expect:
            continue
        tri = classify_cover(fx.diagram, root, fx.data)
        rep.add("stretchedcovers", {"fixture": fx.name, "root": list(root), "property": "case"},
                tri.case == expect[label], f"case {tri.case}")
        for n in (1, 2, 3):
            chk = verify_stretched_cover(fx.diagram, root, fx.data, n)
            want = (True, 2 * n + 1) if tri.case == CASE2 else (False, 1)
            rep.add("stretchedcovers", {"fixture": fx.name, "root": list(root), "n": n},
                    (chk.comparable, chk.depth_delta) == want, f"{chk}")


def _check_systematic(fx, rep):
    roots = _positive_roots(fx) if fx.name in _SMALL else list(fx.roots.values())
    bad = []
    for root in roots:
        try:
            expr = type1_expression(fx.diagram, root, fx.data)
            check_type1(expr)
            if expr.t != depth_growth_rate(fx.diagram, root, fx.data):
                bad.append((root, "t"))
            for n in (1, 2):
                H = stretched(fx.diagram, fx.data, expr.n0 + n)
                word = expand_expression(expr, n)
                target = stretch_root(fx.diagram, root, fx.data, expr.n0 + n)
                if not is_reduced(H, word) or len(word) != depth(H, target):
                    bad.append((root, n))
        except AssertionError as exc:
            bad.append((root, str(exc)))
    rep.add("systematicexpression", {"fixture": fx.name, "roots": len(roots)}, not bad, str(bad[:3]))


def _check_stableposet(fx, rep, poly=False):
    roots = _positive_roots(fx) if fx.name in _SMALL else list(fx.roots.values())
    for root in roots:
        P = build_class_graph(fx.diagram, root, fx.data)
        n0 = n_zero(P)
        if not poly:
            ok = all(check_theorem(P, n) for n in range(n0 + 1, n0 + 3))
            rep.add("stableposet", {"fixture": fx.name, "root": list(root), "n0": n0}, ok)
            continue
        p = downset_polynomial(P)
        bad = []
        for n in range(p.threshold, p.threshold + 3):
            H = stretched(fx.diagram, fx.data, n)
            size = len(downset(H, stretch_root(fx.diagram, root, fx.data, n)))
            if p(n) != size:
                bad.append((n, str(p(n)), size))
        rep.add("polynomialgrowth", {"fixture": fx.name, "root": list(root), "p": str(p)}, not bad, str(bad))


def _check_fracturelist(fx, rep):
    if not fx.finite or len(fx.diagram) > 5:
        roots = list(fx.roots.values())
    else:
        roots = _positive_roots(fx)
    bad = []
    unresolved = 0
    for root in roots:
        fe = fractures_from_expression(fx.diagram, canonical_expression(fx.diagram, root))
        try:
            bound = None if fx.finite else depth(fx.diagram, root) + 4
            fb = fractures_bruteforce(fx.diagram, root, bound)
        except UnresolvedSubsystem:
            unresolved += 1
            continue
        if fe != fb:
            bad.append(root)
        if fx.name in _SMALL:
            for word in reduced_expressions(fx.diagram, root, limit=50):
                if fractures_from_expression(fx.diagram, word) != fe:
                    bad.append((root, word))
    rep.add("fracturelist", {"fixture": fx.name, "roots": len(roots), "unresolved": unresolved}, not bad,
            str(bad[:3]))


def _check_charpoly(fx, rep):
    if not fx.finite or len(fx.diagram) > 6:
        return
    for label, root in fx.roots.items():
        try:
            sc = stable_charpoly(fx.diagram, root, fx.data)
        except (AssertionError, RuntimeError) as exc:
            rep.add("charpoly", {"fixture": fx.name, "root": list(root)}, False, str(exc))
            continue
        direct = [shard_count(fx.diagram, root, fx.data, n) for n in sc.validated]
        closed = [sc.shards(n) for n in sc.validated]
        rep.add("charpoly", {"fixture": fx.name, "root": list(root), "n": list(sc.validated),
                             "e": sc.e, "t": sc.t}, direct == closed, f"direct {direct} closed {closed}")


def _check_athanasiadis(fx, rep):
    if not fx.finite or len(fx.diagram) > 5:
        return
    root = next(iter(fx.roots.values()))
    for n in (0, 1, 2):
        H = stretched(fx.diagram, fx.data, n)
        top = stretch_root(fx.diagram, root, fx.data, n)
        arr = fractures_from_expression(H, canonical_expression(H, top)).arrangement()
        if not len(arr):
            continue
        ok = char_poly_mobius(arr) == char_poly_finite_field(arr)
        rep.add("athanasiadis", {"fixture": fx.name, "root": list(root), "n": n}, ok)


_RUNNERS = {
    "validate": _check_validate,
    "posets": _check_posets,
    "stretchingroots": _check_stretchingroots,
    "lineardepth": _check_lineardepth,
    "stretchedcovers": _check_stretchedcovers,
    "systematicexpression": _check_systematic,
    "stableposet": _check_stableposet,
    "polynomialgrowth": lambda fx, rep: _check_stableposet(fx, rep, poly=True),
    "fracturelist": _check_fracturelist,
    "charpoly": _check_charpoly,
    "athanasiadis": _check_athanasiadis,
}

# which fixtures each expensive tag looks at by default
_SCOPE = {
    "stretchingroots": lambda fx: fx.finite and len(fx.diagram) <= 5,
    "lineardepth": lambda fx: not fx.finite or len(fx.diagram) <= 5,
    "stretchedcovers": lambda fx: any(k in fx.roots for k in ("case2", "case3")),
    "systematicexpression": lambda fx: fx.finite,
    "stableposet": lambda fx: fx.name in _SMALL or not fx.finite,
    "polynomialgrowth": lambda fx: fx.name in _SMALL,
}


def run_verify(config: VerifyConfig | None = None) -> VerificationReport:
    config = config or VerifyConfig()
    tags = tuple(config.tags) if config.tags else TAGS
    unknown = [t for t in tags if t not in _RUNNERS]
    if unknown:
        raise ValueError(f"unknown tags: {', '.join(unknown)}")
    names = tuple(config.fixtures) if config.fixtures else tuple(fixture_names())
    rep = VerificationReport()
    start = time.perf_counter()
    for name in names:
        try:
            fx = load_fixture(name)
        except (DiagramError, KeyError, ValueError) as exc:
            rep.add("validate", {"fixture": str(name)}, False, f"unreadable: {exc}")
            continue
        problems = validate(fx.diagram)  # includes the elastic data
        for label, root in fx.roots.items():
            if not is_root(fx.diagram, root):
                problems.append(f"bundled root {label} {list(root)} is not a root")
        if problems:
            rep.add("validate", {"fixture": fx.name}, False, "; ".join(problems))
            continue
        for tag in tags:
            if tag in _SCOPE and not config.fixtures and not _SCOPE[tag](fx):
                continue
            try:
                _RUNNERS[tag](fx, rep)
            except Exception as exc:  # a crash is a failed check, not an aborted run
                rep.add(tag, {"fixture": fx.name}, False, f"{type(exc).__name__}: {exc}")
    rep.seconds = time.perf_counter() - start
    return rep
