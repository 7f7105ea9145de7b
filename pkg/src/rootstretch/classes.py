"""Stretching classes, the graph P of classes below a root, and the
polynomial counting downsets of stretched roots.

A class is written on some ``st_m(G)``: a full coefficient vector plus an
optional run ``lo..hi`` of starred path positions.  Its members on ``st_n(G)``
repeat each starred value one or more times so that the path has ``n + 1``
entries.  For set-level work (equality, intersection, counting) a class is
reduced to its *run form*: the off-path values and the path as a sequence of
``(value, min_count, unbounded)`` runs with no two neighbouring runs equal.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from math import comb

from numpy.polynomial import Polynomial

from .diagram import CoxeterDiagram, DiagramError, ElasticData
from .roots import NotARootError, _reflect, downset, is_root
from .stretch import side_sums, stretch_root, stretched


class Rejected(ValueError):
    """An operation does not apply to a class; ``reason`` says why."""

    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


# run forms ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunForm:
    off: tuple  # values on G minus x, in G order
    runs: tuple  # ((value, min_count, unbounded), ...)

    @property
    def ell(self) -> int:
        return sum(1 for _, _, u in self.runs if u)

    @property
    def fixed(self) -> int:
        return sum(k for _, k, _ in self.runs)

    def size(self, n: int) -> int:
        """Number of members on ``st_n(G)``."""
        free = n + 1 - self.fixed
        if self.ell == 0:
            return int(free == 0)
        if free < 0:
            return 0
        return comb(free + self.ell - 1, self.ell - 1)


def _collapse(path, stars):
    runs = []
    for j, v in enumerate(path):
        starred = stars is not None and stars[0] <= j <= stars[1]
        if runs and runs[-1][0] == v:
            val, k, u = runs[-1]
            runs[-1] = (val, k + 1, u or starred)
        else:
            runs.append((v, 1, starred))
    return tuple(runs)


def _intersect_runs(a: RunForm, b: RunForm):
    if a.off != b.off or len(a.runs) != len(b.runs):
        return None
    out = []
    for (v1, k1, u1), (v2, k2, u2) in zip(a.runs, b.runs):
        if v1 != v2:
            return None
        if u1 and u2:
            out.append((v1, max(k1, k2), True))
        elif u1 or u2:
            lo, exact = (k1, k2) if u1 else (k2, k1)
            if lo > exact:
                return None
            out.append((v1, exact, False))
        elif k1 == k2:
            out.append((v1, k1, False))
        else:
            return None
    return RunForm(a.off, tuple(out))


# stretching classes ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StretchingClass:
    """Coefficients ``values`` on ``st_m(G)`` with starred path positions ``stars``.

    ``stars`` is an inclusive pair ``(lo, hi)`` of path indices or None.
    """

    diagram: CoxeterDiagram
    data: ElasticData
    m: int
    values: tuple
    stars: tuple | None

    def __post_init__(self):
        if len(self.values) != len(self.diagram) + self.m:
            raise DiagramError("class values do not fit st_m(G)")
        if self.stars is not None:
            lo, hi = self.stars
            if not 0 <= lo <= hi <= self.m:
                raise ValueError(f"star range {self.stars} outside the path")
            path = self.path
            if any(path[j] == path[j + 1] for j in range(lo, hi)):
                raise ValueError("adjacent starred values coincide")

    @property
    def px(self) -> int:
        return self.diagram.index(self.data.x)

    @property
    def path(self) -> tuple:
        return self.values[self.px:self.px + self.m + 1]

    @property
    def off(self) -> tuple:
        return self.values[:self.px] + self.values[self.px + self.m + 1:]

    @property
    def ell(self) -> int:
        return 0 if self.stars is None else self.stars[1] - self.stars[0] + 1

    @property
    def host(self) -> CoxeterDiagram:
        return stretched(self.diagram, self.data, self.m)

    def run_form(self) -> RunForm:
        return RunForm(self.off, _collapse(self.path, self.stars))

    def key(self):
        return self.run_form()

    def __eq__(self, other):
        return isinstance(other, StretchingClass) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def weighted_sums(self) -> tuple:
        """(weighted left sum, weighted right sum) of the starred run."""
        lo, hi = self.stars
        path = self.path
        if lo == 0:
            S_L = side_sums(self.diagram, self._g_values(), self.data)[0]
        else:
            S_L = path[lo - 1]
        if hi == self.m:
            S_R = side_sums(self.diagram, self._g_values(), self.data)[1]
        else:
            S_R = path[hi + 1]
        return S_L, S_R

    def _g_values(self):
        # values indexed like G; only off-path entries are ever read
        return self.values[:self.px] + (None,) + self.values[self.px + self.m + 1:]

    def monotone_tuple(self) -> tuple:
        """(sum of weighted sums, sum of endpoint coefficients, sum of coefficients)."""
        if self.stars is None:
            return (0, 0, sum(self.values))
        lo, hi = self.stars
        path = self.path
        return (sum(self.weighted_sums()), path[lo] + path[hi], sum(self.values))

    def notation(self) -> str:
        path = "".join(
            f" {v}*" if self.stars and self.stars[0] <= j <= self.stars[1] else f" {v}"
            for j, v in enumerate(self.path)
        )
        left = self.values[:self.px]
        right = self.values[self.px + self.m + 1:]
        return f"{','.join(map(str, left))} |{path} | {','.join(map(str, right))}"

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "values": list(self.values),
            "stars": list(self.stars) if self.stars is not None else None,
            "notation": self.notation(),
        }

    def __repr__(self):
        return f"StretchingClass({self.notation()})"


def root_class(diagram: CoxeterDiagram, root, data: ElasticData) -> StretchingClass:
    """The class ``a*`` of all stretches of ``root``."""
    return StretchingClass(diagram, data, 0, tuple(root), (0, 0))


def members(cls: StretchingClass, n: int) -> set:
    """Functions on ``st_n(G)`` lying in ``cls``."""
    out = set()
    left = cls.values[:cls.px]
    right = cls.values[cls.px + cls.m + 1:]
    path = cls.path
    if cls.stars is None:
        return {cls.values} if n == cls.m else out
    lo, hi = cls.stars
    ell = hi - lo + 1
    total = n - cls.m + ell  # path slots shared by the starred values
    if total < ell:
        return out
    for cuts in itertools.combinations(range(1, total), ell - 1):
        bounds = (0,) + cuts + (total,)
        mid = []
        for j in range(ell):
            mid.extend([path[lo + j]] * (bounds[j + 1] - bounds[j]))
        out.add(left + path[:lo] + tuple(mid) + path[hi + 1:] + right)
    return out


def class_size(cls, n: int) -> int:
    """``binom(n - m + l - 1, l - 1)``; for ``l = 0`` the indicator of ``n = m``."""
    if isinstance(cls, RunForm):
        return cls.size(n)
    if cls.ell == 0:
        return int(n == cls.m)
    top = n - cls.m + cls.ell - 1
    return comb(top, cls.ell - 1) if top >= 0 else 0


# the four operations --------------------------------------------------------------------


def apply_op(cls: StretchingClass, op: int, param) -> StretchingClass:
    """Apply operation ``op`` (1-4) to ``cls``.

    ``param`` is a vertex name for operations 1 and 2 and a side ``"L"`` or
    ``"R"`` for operations 3 and 4.  Raises Rejected when the operation does
    not apply.
    """
    H = cls.host
    px = cls.px
    if cls.stars is None:
        raise Rejected("class has no starred run")
    lo, hi = cls.stars
    if op in (1, 2):
        k = H.index(param)
        j = k - px  # path index when 0 <= j <= m
        on_path = 0 <= j <= cls.m
        starred = on_path and lo <= j <= hi
        if op == 1 and starred:
            raise Rejected("operation 1 needs a vertex without an asterisk")
        if op == 2 and not (starred and lo < j < hi):
            raise Rejected("operation 2 needs an internal starred vertex")
        new = _reflect(H, cls.values, k)
        if new[k] >= cls.values[k]:
            raise Rejected("reflection does not decrease the coefficient")
        if new[k] < 0:
            raise Rejected("negative coefficient")
        return StretchingClass(cls.diagram, cls.data, cls.m, new, cls.stars)
    if param not in ("L", "R"):
        raise Rejected(f"side must be L or R, got {param!r}")
    path = cls.path
    if op == 3:
        S_L, S_R = cls.weighted_sums()
        if param == "L":
            S, at, end = S_L, px + lo, path[lo]
        else:
            S, at, end = S_R, px + hi + 1, path[hi]
        if not S < end:
            raise Rejected("weighted sum is not smaller than the endpoint")
        if S < 0:
            raise Rejected("negative coefficient")
        values = cls.values[:at] + (S,) + cls.values[at:]
        return StretchingClass(cls.diagram, cls.data, cls.m + 1, values, (lo, hi + 1))
    if op == 4:
        if lo == hi:
            raise Rejected("operation 4 needs more than one asterisk")
        j, nbr = (lo, lo + 1) if param == "L" else (hi, hi - 1)
        k = px + j
        new = _reflect(H, cls.values, k)
        if new[k] >= cls.values[k]:
            raise Rejected("reflection does not decrease the coefficient")
        if new[k] < 0:
            raise Rejected("negative coefficient")
        stars = (lo, hi)
        if new[k] >= path[nbr]:
            stars = (lo + 1, hi) if param == "L" else (lo, hi - 1)
        return StretchingClass(cls.diagram, cls.data, cls.m, new, stars)
    raise Rejected(f"unknown operation {op}")


def candidate_ops(cls: StretchingClass):
    H = cls.host
    for v in H.vertices:
        yield 1, v
    for v in H.vertices:
        yield 2, v
    for op in (3, 4):
        for side in ("L", "R"):
            yield op, side


# the graph P --------------------------------------------------------------------------


@dataclass
class ClassGraph:
    diagram: CoxeterDiagram
    data: ElasticData
    root: tuple
    nodes: list  # discovery order; nodes[0] is the root class
    arrows: list = field(default_factory=list)  # (source, op, param, target) indices

    @property
    def root_node(self) -> StretchingClass:
        return self.nodes[0]

    @property
    def max_stars(self) -> int:
        return max(c.ell for c in self.nodes)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.diagram.vertices),
            "elastic": self.data.to_json(),
            "root": list(self.root),
            "nodes": [c.to_json() for c in self.nodes],
            "arrows": [{"source": s, "op": op, "param": p, "target": t} for s, op, p, t in self.arrows],
            "n0": n_zero(self),
        }

    def to_dot(self) -> str:
        lines = ["digraph P {", "  node [shape=box, fontname=monospace];"]
        for i, c in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{c.notation()}"];')
        for s, op, p, t in self.arrows:
            lines.append(f'  n{s} -> n{t} [label="({op}) {p}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_class_graph(diagram: CoxeterDiagram, root, data: ElasticData) -> ClassGraph:
    """Close ``root*`` under the four operations.

    Classes with equal member sets are merged, keeping the first notation
    found.  Every arrow is checked to lower the monotone tuple, and the result
    is checked to be acyclic.
    """
    root = tuple(root)
    if min(root, default=0) < 0 or not is_root(diagram, root):
        raise NotARootError(f"{root} is not a positive root")
    start = root_class(diagram, root, data)
    nodes = [start]
    index = {start.key(): 0}
    arrows = []
    queue = [0]
    while queue:
        s = queue.pop(0)
        src = nodes[s]
        for op, param in candidate_ops(src):
            try:
                dst = apply_op(src, op, param)
            except Rejected:
                continue
            if not dst.monotone_tuple() < src.monotone_tuple():
                raise AssertionError(f"operation {op} at {param} did not lower the tuple: {src} -> {dst}")
            key = dst.key()
            if key not in index:
                index[key] = len(nodes)
                nodes.append(dst)
                queue.append(index[key])
            arrows.append((s, op, param, index[key]))
    graph = ClassGraph(diagram, data, root, nodes, arrows)
    ts = TopologicalSorter({i: set() for i in range(len(nodes))})
    for s, _, _, t in arrows:
        ts.add(t, s)
    try:
        tuple(ts.static_order())
    except CycleError as exc:
        raise AssertionError(f"class graph has a cycle: {exc.args[1]}") from None
    return graph


def n_zero(graph: ClassGraph) -> int:
    """Largest stretch length among single-star classes."""
    return max((c.m for c in graph.nodes if c.ell == 1), default=0)


def stable_downset(graph: ClassGraph, n: int) -> set:
    out = set()
    for c in graph.nodes:
        out |= members(c, n)
    return out


# intersections and the downset polynomial ------------------------------------------------


def _from_runs(diagram, data, form: RunForm):
    """A class notation realising ``form`` (stars on the unbounded runs)."""
    px = diagram.index(data.x)
    path, stars = [], []
    unb = [i for i, (_, _, u) in enumerate(form.runs) if u]
    for i, (v, k, u) in enumerate(form.runs):
        if not u:
            path.extend([v] * k)
            continue
        if i == unb[-1] and i != unb[0]:
            # last run of the starred block: star first, fixed copies after
            stars.append(len(path))
            path.extend([v] * k)
        else:
            path.extend([v] * (k - 1))
            stars.append(len(path))
            path.append(v)
    values = form.off[:px] + tuple(path) + form.off[px:]
    span = (stars[0], stars[-1]) if stars else None
    return StretchingClass(diagram, data, len(path) - 1, values, span)


def intersect_classes(c1: StretchingClass, c2: StretchingClass):
    """None when disjoint, a root tuple when a single function, else a class."""
    if c1.diagram != c2.diagram or c1.data != c2.data:
        raise DiagramError("classes live over different diagrams")
    form = _intersect_runs(c1.run_form(), c2.run_form())
    if form is None:
        return None
    cls = _from_runs(c1.diagram, c1.data, form)
    if cls.stars is None:
        return cls.values
    return cls


@dataclass(frozen=True)
class DownsetPolynomial:
    """``p(n)`` with exact rational coefficients (ascending powers of n)."""

    coefficients: tuple
    degree: int
    n0: int
    threshold: int  # p(n) = |downset st_n(root)| for n >= threshold

    def __call__(self, n):
        return sum(c * Fraction(n) ** k for k, c in enumerate(self.coefficients))

    def __str__(self):
        terms = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("n" if k == 1 else f"n^{k}")
            coef = str(c) if (k == 0 or abs(c) != 1) else ("-" if c < 0 else "")
            if mono and coef not in ("", "-"):
                coef += "*"
            terms.append(f"{coef}{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


def _binomial_poly(shift: int, k: int) -> Polynomial:
    """``binom(n + shift, k)`` as a polynomial in n."""
    p = Polynomial([Fraction(1)])
    for j in range(k):
        p = p * Polynomial([Fraction(shift - j, j + 1), Fraction(1, j + 1)])
    return p


def intersection_closure(forms) -> list:
    family = list(dict.fromkeys(forms))
    seen = set(family)
    frontier = list(family)
    while frontier:
        fresh = []
        for a in frontier:
            for b in family:
                c = _intersect_runs(a, b)
                if c is not None and c not in seen:
                    seen.add(c)
                    fresh.append(c)
        family.extend(fresh)
        frontier = fresh
    return family


def union_weights(forms) -> dict:
    """Weights ``c(Y)`` on the intersection closure with ``|U| = sum c(Y)|Y|``.

    Satisfies ``sum_{Y >= Z} c(Y) = 1`` for every ``Z`` in the closure.
    """
    family = intersection_closure(forms)
    above = {
        z: [y for y in family if y != z and _intersect_runs(y, z) == z] for z in family
    }
    weights = {}
    for z in sorted(family, key=lambda f: len(above[f])):
        weights[z] = 1 - sum(weights[y] for y in above[z])
    return weights


def union_size(forms, n: int) -> int:
    return sum(w * f.size(n) for f, w in union_weights(forms).items())


def downset_polynomial(graph: ClassGraph) -> DownsetPolynomial:
    """Inclusion-exclusion over the node classes, in the binomial basis."""
    weights = union_weights(c.run_form() for c in graph.nodes)
    n0 = n_zero(graph)
    total = Polynomial([Fraction(0)])
    threshold = n0 + 1
    for form, w in weights.items():
        if w == 0:
            continue
        ell = form.ell
        if ell == 0:
            # a single function: present only at one n, so only past it is the count polynomial
            threshold = max(threshold, form.fixed)
            continue
        # size(n) = binom(n + 1 - fixed + ell - 1, ell - 1), exact once the top is >= 0
        shift = ell - form.fixed
        threshold = max(threshold, -shift)
        total = total + w * _binomial_poly(shift, ell - 1)
    coeffs = [Fraction(c) for c in total.coef]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return DownsetPolynomial(tuple(coeffs), len(coeffs) - 1, n0, threshold)


def check_theorem(graph: ClassGraph, n: int) -> bool:
    """Compare the class union with a direct downset computation on ``st_n``."""
    H = stretched(graph.diagram, graph.data, n)
    top = stretch_root(graph.diagram, graph.root, graph.data, n)
    return stable_downset(graph, n) == downset(H, top)
