"""Stretching and squishing roots, the cover trichotomy, depth growth rates and
type (1) reduced expressions.

Throughout, ``st_N(G)`` is laid out with the path ``x.0 .. x.N`` occupying the
slot of ``x`` in the vertex order of ``G``.  Re-stretching ``st_N(G)`` at a path
vertex ``x.i`` by ``m`` gives ``st_{N+m}(G)`` again, so every construction here
stays inside that one family and keeps canonical vertex names.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .diagram import (
    CoxeterDiagram,
    DiagramError,
    ElasticData,
    induced_elastic_data,
    path_name,
    stretch_diagram,
    validate_elastic,
)
from .roots import (
    NotARootError,
    _descend,
    _reflect,
    _simple_index,
    canonical_expression,
    depth,
    is_root,
    leq,
    pairing,
    replay,
)

CASE1, CASE2, CASE3 = 1, 2, 3


@lru_cache(maxsize=256)
def stretched(diagram: CoxeterDiagram, data: ElasticData, n: int) -> CoxeterDiagram:
    return stretch_diagram(diagram, data, n)


def _slot(diagram, data):
    problems = validate_elastic(diagram, data)
    if problems:
        raise DiagramError("; ".join(problems))
    return diagram.index(data.x)


def stretch_root(diagram: CoxeterDiagram, root, data: ElasticData, n: int) -> tuple:
    """Repeat the value at ``x`` along ``x.0 .. x.n``."""
    if len(root) != len(diagram):
        raise DiagramError("root and diagram sizes differ")
    px = _slot(diagram, data)
    root = tuple(root)
    return root[:px] + (root[px],) * (n + 1) + root[px + 1:]


def restretch(vector, at: int, m: int) -> tuple:
    """Repeat entry ``at`` of ``vector`` ``m`` extra times."""
    vector = tuple(vector)
    return vector[:at] + (vector[at],) * (m + 1) + vector[at + 1:]


def _restretch_index(k, at, m):
    return k if k < at else k + m


def squish_root(diagram: CoxeterDiagram, vector, data: ElasticData) -> tuple:
    """Collapse ``x.0, x.1`` of a root of ``st_1(G)`` back to ``x``."""
    px = _slot(diagram, data)
    vector = tuple(vector)
    if len(vector) != len(diagram) + 1:
        raise DiagramError("vector must live on st_1(G)")
    if vector[px] != vector[px + 1]:
        raise ValueError(f"values at x.0 and x.1 differ ({vector[px]} != {vector[px + 1]})")
    if not is_root(stretched(diagram, data, 1), vector):
        raise NotARootError(f"{vector} is not a root of st_1")
    return vector[:px + 1] + vector[px + 2:]


# the trichotomy -------------------------------------------------------------------


@dataclass(frozen=True)
class Trichotomy:
    case: int
    S_L: int
    S_R: int
    b: int
    swapped: bool = False  # True when the original right side was the "< b" side

    @property
    def b_prime(self) -> int:
        return self.S_L + self.S_R - self.b


def side_sums(diagram: CoxeterDiagram, root, data: ElasticData) -> tuple:
    S_L = sum(-diagram.A(data.x, y) * root[diagram.index(y)] for y in data.left)
    S_R = sum(-diagram.A(data.x, z) * root[diagram.index(z)] for z in data.right)
    return S_L, S_R


def classify_cover(diagram: CoxeterDiagram, root, data: ElasticData) -> Trichotomy:
    """Which case of the trichotomy the cover ``s_x(root) < root`` falls in."""
    _slot(diagram, data)
    b = root[diagram.index(data.x)]
    S_L, S_R = side_sums(diagram, root, data)
    if S_L + S_R - b >= b:
        raise ValueError("reflecting at the elastic vertex does not lower this root")
    if S_L + S_R - b < 0:
        raise ValueError("reflecting the simple root at x leaves the positive roots")
    swapped = False
    if not S_L < b:
        S_L, S_R, swapped = S_R, S_L, True
    if S_R == b:
        case = CASE1
    elif S_R < b:
        case = CASE2
    else:
        case = CASE3
    return Trichotomy(case, S_L, S_R, b, swapped)


@dataclass(frozen=True)
class CoverCheck:
    comparable: bool
    depth_delta: int


def verify_stretched_cover(diagram: CoxeterDiagram, root, data: ElasticData, n: int) -> CoverCheck:
    """Measure the stretched cover directly in ``st_n`` (no use of the trichotomy)."""
    classify_cover(diagram, root, data)  # precondition check
    lower = _reflect(diagram, tuple(root), diagram.index(data.x))
    H = stretched(diagram, data, n)
    up = stretch_root(diagram, root, data, n)
    low = stretch_root(diagram, lower, data, n)
    comparable = leq(H, low, up) or leq(H, up, low)
    return CoverCheck(comparable, depth(H, up) - depth(H, low))


def depth_growth_rate(diagram: CoxeterDiagram, root, data: ElasticData) -> int:
    """Slope ``t`` in ``depth(st_n(root)) = t*n + depth(root)``.

    Walks the canonical descent and adds 1, 2 or 0 at each reflection at ``x``
    according to its case; a descent ending at ``a_x`` contributes 1.
    """
    px = _slot(diagram, data)
    cur = tuple(root)
    t = 0
    for i, lower in _descend(diagram, cur):
        if i == px:
            t += {CASE1: 1, CASE2: 2, CASE3: 0}[classify_cover(diagram, cur, data).case]
        cur = lower
    if _simple_index(cur) == px:
        t += 1
    return t


# type (1) expressions ---------------------------------------------------------------


@dataclass(frozen=True)
class Type1Expression:
    """Reduced expression for ``st_{n0}(root)`` whose reflections at ``pivot``
    all fall in case 1 for the elastic data induced by ``pivot``.

    ``word = (y0, y1, ..., yl)`` means ``s_yl ... s_y1 (a_y0)`` on ``st_{n0}(G)``.
    """

    diagram: CoxeterDiagram
    data: ElasticData
    root: tuple
    n0: int
    pivot: str
    word: tuple
    t: int

    @property
    def pivot_index(self) -> int:
        return int(self.pivot.rsplit(".", 1)[1])

    @property
    def pivot_data(self) -> ElasticData:
        return induced_elastic_data(self.diagram, self.data, self.n0, self.pivot_index)

    @property
    def stretched_diagram(self) -> CoxeterDiagram:
        return stretched(self.diagram, self.data, self.n0)


def _path_chain(lo, m, ascending):
    seq = list(range(lo, lo + m + 1))
    return seq if ascending else seq[::-1]


def type1_expression(diagram: CoxeterDiagram, root, data: ElasticData) -> Type1Expression:
    """Build a type (1) expression by induction on the pivot coefficient.

    A case 1 reflection at the pivot is kept.  A case 2 or 3 reflection is
    resolved by stretching the pivot once and moving the pivot onto the copy on
    the smaller side, where the same reflection becomes case 1.  Each
    recursion lowers the pivot coefficient, so ``n0 <= root[x]``.
    """
    px = _slot(diagram, data)
    root = tuple(root)
    if not is_root(diagram, root) or min(root) < 0:
        raise NotARootError(f"{root} is not a positive root")
    bound = root[px]

    def build(N, i, gamma):
        if N > bound:
            raise RuntimeError("type (1) construction exceeded its stretch bound")
        H = stretched(diagram, data, N)
        p = px + i
        if gamma[p] == 0:
            return N, i, [H.index(v) for v in canonical_expression(H, gamma)]
        steps = []
        cur = gamma
        hit_pivot = False
        for idx, lower in _descend(H, gamma, avoid=p):
            if idx == p:
                hit_pivot = True
                break
            steps.append(idx)
            cur = lower
        if not hit_pivot:
            # descended to a_p without reflecting at the pivot
            return N, i, [_simple_index(cur)] + steps[::-1]
        pd = induced_elastic_data(diagram, data, N, i)
        tri = classify_cover(H, cur, pd)
        if tri.case == CASE1:
            delta = _reflect(H, cur, p)
            N2, i2, word = build(N, i, delta)
            m = N2 - N
            chain = [_restretch_index(k, p, m) for k in steps]
            chain += _path_chain(p, m, ascending=not tri.swapped)
            return N2, i2, word + chain[::-1]
        # cases 2 and 3: stretch once, pivot moves to the copy on the small side
        i0 = i + 1 if tri.swapped else i
        p0 = px + i0
        H1 = stretched(diagram, data, N + 1)
        cur1 = restretch(cur, p, 1)
        steps1 = [_restretch_index(k, p, 1) for k in steps]
        tri1 = classify_cover(H1, cur1, induced_elastic_data(diagram, data, N + 1, i0))
        assert tri1.case == CASE1
        delta = _reflect(H1, cur1, p0)
        N2, i2, word = build(N + 1, i0, delta)
        m = N2 - (N + 1)
        chain = [_restretch_index(k, p0, m) for k in steps1]
        chain += _path_chain(p0, m, ascending=not tri1.swapped)
        return N2, i2, word + chain[::-1]

    N, i, word = build(0, 0, stretch_root(diagram, root, data, 0))
    H = stretched(diagram, data, N)
    names = tuple(H.vertices[k] for k in word)
    pivot = path_name(data.x, i)
    return Type1Expression(diagram, data, root, N, pivot, names, names.count(pivot))


def expand_expression(expr: Type1Expression, n: int) -> tuple:
    """Reduced expression for ``st_{n0+n}(root)`` obtained by replacing each
    pivot letter with a sweep over its ``n + 1`` copies."""
    G, data = expr.diagram, expr.data
    px = G.index(data.x)
    H = expr.stretched_diagram
    big = stretched(G, data, expr.n0 + n)
    p = px + expr.pivot_index
    pd = expr.pivot_data
    out = []
    cur = None
    for pos, v in enumerate(expr.word):
        k = H.index(v)
        if pos == 0:
            cur = tuple(1 if j == k else 0 for j in range(len(H)))
            if k == p:
                out.extend(_path_chain(p, n, ascending=False))
            else:
                out.append(_restretch_index(k, p, n))
            continue
        cur = _reflect(H, cur, k)
        if k != p:
            out.append(_restretch_index(k, p, n))
            continue
        tri = classify_cover(H, cur, pd)
        if tri.case != CASE1:
            raise ValueError("expression is not of type (1) at its pivot")
        # downward sweep starts on the small side; the word runs upward
        out.extend(_path_chain(p, n, ascending=tri.swapped))
    return tuple(big.vertices[k] for k in out)


def pivot_cases(expr: Type1Expression) -> list:
    """Trichotomy of every pivot reflection (start letter excluded)."""
    H = expr.stretched_diagram
    p = H.index(expr.pivot)
    cur = None
    out = []
    for pos, v in enumerate(expr.word):
        k = H.index(v)
        if pos == 0:
            cur = tuple(1 if j == k else 0 for j in range(len(H)))
            continue
        if pairing(H, k, cur) >= 0:
            raise ValueError("word is not reduced")
        cur = _reflect(H, cur, k)
        if k == p:
            out.append(classify_cover(H, cur, expr.pivot_data))
    return out


def check_type1(expr: Type1Expression) -> None:
    """Raise AssertionError unless ``expr`` satisfies its invariants."""
    H = expr.stretched_diagram
    target = stretch_root(expr.diagram, expr.root, expr.data, expr.n0)
    assert replay(H, expr.word) == target, "word does not replay to the stretched root"
    assert len(expr.word) == depth(H, target), "word is not reduced"
    assert all(tri.case == CASE1 for tri in pivot_cases(expr)), "pivot reflection outside case 1"
