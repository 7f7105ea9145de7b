"""Fractures and shards of root hyperplanes, and their stable behaviour under
stretching.

Hyperplanes live in the dual space: a root ``g`` gives ``g⊥ = {f : f(g) = 0}``.
A fracture of ``a⊥`` is ``a⊥ ∩ g⊥`` for a root ``g`` cutting ``a``; it is
identified by the image of ``g`` in a fixed lattice basis of ``a⊥`` (the same
vector that :func:`restrict_to_hyperplane` produces), so two cutting roots
giving the same codimension-2 subspace compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np
from numpy.polynomial import Polynomial

from .arrangements import (
    CharPoly,
    RationalArrangement,
    _chi_from_lattice,
    char_poly_mobius,
    intersection_lattice,
    region_count,
    restrict_to_hyperplane,
)
from .diagram import CoxeterDiagram, ElasticData
from .lattice import canonical, kernel_basis, rank
from .roots import (
    NotARootError,
    _reflect,
    canonical_expression,
    depth,
    generate_positive_roots,
    is_reduced,
    is_root,
    replay,
    root_reflection,
    simple_root,
)
from .stretch import (
    Type1Expression,
    depth_growth_rate,
    expand_expression,
    stretch_root,
    stretched,
    type1_expression,
)

DEFAULT_SLACK = 4


class UnresolvedSubsystem(RuntimeError):
    """A rank 2 subsystem could not be shown complete below the depth bound."""


# rank 2 subsystems ------------------------------------------------------------------------


def _plane_coords(a, b):
    """Pick two coordinates where ``a, b`` are independent."""
    d = len(a)
    for i in range(d):
        for j in range(i + 1, d):
            det = a[i] * b[j] - a[j] * b[i]
            if det:
                return i, j, det
    raise ValueError("roots are linearly dependent")


def _in_plane(a, b, g, ij):
    """Coefficients ``(s, t)`` with ``g = s a + t b``, or None."""
    i, j, det = ij
    s = Fraction(g[i] * b[j] - g[j] * b[i], det)
    t = Fraction(a[i] * g[j] - a[j] * g[i], det)
    if all(s * x + t * y == z for x, y, z in zip(a, b, g)):
        return s, t
    return None


def _extreme_pair(coords: dict):
    """The two members spanning the cone of all members (by exact cross products)."""
    items = list(coords.items())

    def cross(u, w):
        return u[0] * w[1] - u[1] * w[0]

    lo = [g for g, u in items if all(cross(u, w) >= 0 for _, w in items)]
    hi = [g for g, u in items if all(cross(u, w) <= 0 for _, w in items)]
    if len(lo) != 1 or len(hi) != 1:
        raise ValueError("members do not lie in a pointed cone")
    return lo[0], hi[0]


@dataclass(frozen=True)
class Rank2Subsystem:
    span_basis: tuple
    members: frozenset
    fundamental: tuple | None  # None when the bound was not shown sufficient
    complete: bool

    def is_fundamental(self, root) -> bool:
        if self.fundamental is None:
            raise UnresolvedSubsystem(f"subsystem spanned by {self.span_basis} is unresolved")
        return tuple(root) in self.fundamental


@lru_cache(maxsize=64)
def _slice(diagram: CoxeterDiagram, bound: int):
    return generate_positive_roots(diagram, bound)


def _closed_under_reflections(diagram, members):
    full = set(members) | {tuple(-c for c in g) for g in members}
    for u in members:
        for g in members:
            if root_reflection(diagram, u, g) not in full:
                return False
    return True


def rank2_members(diagram: CoxeterDiagram, a, b, depth_bound: int | None = None) -> Rank2Subsystem:
    """Positive roots of depth at most ``depth_bound`` in ``span{a, b}``.

    The fundamental pair is reported when the member list is known to be the
    whole subsystem: either the depth-bounded slice exhausted the positive
    roots (finite type), or the members are closed under their own
    reflections and the search at ``bound + slack`` finds nothing new.
    """
    a, b = tuple(a), tuple(b)
    ij = _plane_coords(a, b)
    if depth_bound is None:
        depth_bound = max(depth(diagram, a), depth(diagram, b)) + DEFAULT_SLACK
    sl = _slice(diagram, depth_bound)
    coords = {}
    for g in sl.roots:
        st = _in_plane(a, b, g, ij)
        if st is not None:
            coords[g] = st
    complete = sl.complete
    if not complete and _closed_under_reflections(diagram, coords):
        wider = _slice(diagram, depth_bound + DEFAULT_SLACK)
        complete = all(g in coords for g in wider.roots if _in_plane(a, b, g, ij) is not None)
    fundamental = _extreme_pair(coords) if complete else None
    return Rank2Subsystem((a, b), frozenset(coords), fundamental, complete)


def cuts(diagram: CoxeterDiagram, g, a, depth_bound: int | None = None) -> bool:
    """True when ``g⊥`` is basic and ``a⊥`` is not in their rank 2 subarrangement."""
    R = rank2_members(diagram, g, a, depth_bound)
    return R.is_fundamental(g) and not R.is_fundamental(a)


# fracture sets -----------------------------------------------------------------------------


def fracture_key(K, g) -> tuple:
    return canonical(tuple(sum(k * c for k, c in zip(row, g)) for row in K))


@dataclass(frozen=True)
class FractureSet:
    carrier: tuple
    normals: tuple  # one cutting root per fracture
    fractures: frozenset  # canonical restrictions to carrier⊥

    def __eq__(self, other):
        return isinstance(other, FractureSet) and self.carrier == other.carrier and self.fractures == other.fractures

    def __hash__(self):
        return hash((self.carrier, self.fractures))

    def __len__(self):
        return len(self.fractures)

    def arrangement(self) -> RationalArrangement:
        """The fracture arrangement inside ``carrier⊥``."""
        return restrict_to_hyperplane(self.normals, self.carrier)


def make_fracture_set(carrier, normals) -> FractureSet:
    carrier = tuple(carrier)
    K = kernel_basis(carrier)
    reps = {}
    for g in normals:
        key = fracture_key(K, g)
        if not any(key):
            raise ValueError(f"cutting normal {g} is parallel to {carrier}")
        reps.setdefault(key, tuple(g))
    return FractureSet(carrier, tuple(reps.values()), frozenset(reps))


def expression_normals(diagram: CoxeterDiagram, expression) -> list:
    """``s_yl ... s_y(k+1) (a_yk)`` for ``k = l, ..., 1`` (no deduplication)."""
    idx = [diagram.index(v) for v in expression]
    out = []
    for k in range(len(idx) - 1, 0, -1):
        v = simple_root(diagram, idx[k])
        for j in range(k + 1, len(idx)):
            v = _reflect(diagram, v, idx[j])
        out.append(v)
    return out


def fractures_from_expression(diagram: CoxeterDiagram, expression) -> FractureSet:
    if not expression or not is_reduced(diagram, expression):
        raise ValueError("expression is not reduced")
    root = replay(diagram, expression)
    return make_fracture_set(root, expression_normals(diagram, expression))


def fractures_bruteforce(diagram: CoxeterDiagram, root, depth_bound: int | None = None) -> FractureSet:
    """All fractures from the cut relation, scanning positive roots up to the bound.

    Roots are grouped by the plane they span with ``root``; within a plane
    where ``root`` is not fundamental, both fundamental roots cut it and give
    the same fracture.
    """
    root = tuple(root)
    if min(root) < 0 or not is_root(diagram, root):
        raise NotARootError(f"{root} is not a positive root")
    if depth_bound is None:
        depth_bound = depth(diagram, root) + DEFAULT_SLACK
    sl = _slice(diagram, depth_bound)
    K = kernel_basis(root)
    planes = {}
    for g in sl.roots:
        if g == root:
            continue
        planes.setdefault(fracture_key(K, g), []).append(g)
    cutting = []
    for key, group in planes.items():
        if sl.complete:
            ij = _plane_coords(root, group[0])
            coords = {g: _in_plane(root, group[0], g, ij) for g in group + [root]}
            fundamental = _extreme_pair(coords)
        else:
            R = rank2_members(diagram, root, group[0], depth_bound)
            if R.fundamental is None:
                raise UnresolvedSubsystem(f"plane through {root} and {group[0]} unresolved")
            fundamental = R.fundamental
        if root not in fundamental:
            cutting.append(fundamental[0])
    return make_fracture_set(root, cutting)


# the beta basis ----------------------------------------------------------------------------


def beta_change_of_basis(diagram: CoxeterDiagram, data: ElasticData, n: int):
    """``(to_beta, to_alpha)`` acting on coefficient columns of ``st_n(G)``.

    ``b_y = a_y`` off the path and ``b_{x_i} = a_{x_0} + ... + a_{x_i}``.
    """
    size = len(diagram) + n
    px = diagram.index(data.x)
    to_alpha = np.eye(size, dtype=np.int64)  # columns: beta vectors in alpha coordinates
    for i in range(n + 1):
        to_alpha[px:px + i + 1, px + i] = 1
    to_beta = np.eye(size, dtype=np.int64)
    for i in range(n):
        to_beta[px + i, px + i + 1] = -1
    assert (to_beta @ to_alpha == np.eye(size, dtype=np.int64)).all()
    return to_beta, to_alpha


def to_beta_coords(diagram: CoxeterDiagram, data: ElasticData, n: int, v) -> tuple:
    px = diagram.index(data.x)
    v = list(v)
    out = list(v)
    for i in range(n):
        out[px + i] = v[px + i] - v[px + i + 1]
    return tuple(out)


def reflection_matrix(diagram: CoxeterDiagram, vertex) -> np.ndarray:
    """Matrix of ``s_vertex`` on alpha coordinates (columns are images of simple roots)."""
    i = diagram.index(vertex)
    size = len(diagram)
    M = np.eye(size, dtype=np.int64)
    for j in range(size):
        M[i, j] -= diagram.cartan[i][j]
    return M


# stable fracture form --------------------------------------------------------------------


def _beta_normals(diagram, data, n, expr):
    H = stretched(diagram, data, n)
    word = expand_expression(expr, n - expr.n0)
    return word, {canonical(to_beta_coords(diagram, data, n, g)) for g in expression_normals(H, word)}


def _split(v, px, n, r):
    """(off, left block, middle, right block) of a beta-coordinate vector."""
    off = v[:px] + v[px + n + 1:]
    path = v[px:px + n + 1]
    return off, path[:r + 1], path[r + 1:n - r], path[n - r:]


@dataclass(frozen=True)
class StableFractureForm:
    """For ``n >= 2r + 1`` the fracture normals of ``st_n(root)`` in the beta
    basis are the ``f`` vectors and ``g - b_{x_j}`` for ``r < j < n - r``.

    Each ``f`` or ``g`` is ``(off, left, right)``: coefficients on the
    vertices of ``G`` other than ``x``, on ``b_{x_0..x_r}``, and on
    ``b_{x_{n-r}..x_n}``.
    """

    diagram: CoxeterDiagram
    data: ElasticData
    root: tuple
    r: int
    f_list: tuple
    g_list: tuple
    t: int
    expression: Type1Expression
    validated: tuple = ()

    @property
    def e(self) -> int:
        return 2 * self.r + 1

    @property
    def s(self) -> int:
        return len(self.f_list)

    def _assemble(self, n, off, left, right, middle):
        px = self.diagram.index(self.data.x)
        path = list(left) + list(middle) + list(right)
        return tuple(off[:px]) + tuple(path) + tuple(off[px:])

    def instantiate(self, n: int) -> set:
        """Beta-coordinate normals (canonical up to sign) predicted at ``n``."""
        if n < self.e:
            raise ValueError(f"form is valid only for n >= {self.e}")
        width = n - 2 * self.r - 1
        out = set()
        for off, left, right in self.f_list:
            out.add(canonical(self._assemble(n, off, left, right, [0] * width)))
        for off, left, right in self.g_list:
            for j in range(width):
                mid = [0] * width
                mid[j] = -1
                out.add(canonical(self._assemble(n, off, left, right, mid)))
        return out

    def describe(self) -> dict:
        x = self.data.x
        names = [v for v in self.diagram.vertices if v != x]

        def term(vec):
            off, left, right = vec
            parts = []
            for name, c in zip(names, off):
                parts.append((c, f"b_{name}"))
            for i, c in enumerate(left):
                parts.append((c, f"b_{x}.{i}"))
            for k, c in enumerate(right):
                k = self.r - k
                parts.append((c, f"b_{x}.n" if k == 0 else f"b_{x}.(n-{k})"))
            s = " ".join(f"{'+' if c > 0 else '-'} {abs(c) if abs(c) != 1 else ''}{b}" for c, b in parts if c)
            s = s.strip()
            return (s[2:] if s.startswith("+ ") else s) or "0"

        return {
            "r": self.r,
            "e": self.e,
            "t": self.t,
            "f": [term(f) for f in self.f_list],
            "g": [term(g) for g in self.g_list],
        }


def _extract(normals, px, n, r):
    fs, gs = set(), {}
    for v in normals:
        off, left, mid, right = _split(v, px, n, r)
        nz = [j for j, c in enumerate(mid) if c]
        if not nz:
            fs.add((off, left, right))
            continue
        if len(nz) != 1 or abs(mid[nz[0]]) != 1:
            return None
        if mid[nz[0]] == 1:
            off, left, right = (tuple(-c for c in p) for p in (off, left, right))
        gs.setdefault(nz[0], set()).add((off, left, right))
    width = n - 2 * r - 1
    gsets = [frozenset(gs.get(j, ())) for j in range(width)]
    if any(g != gsets[0] for g in gsets):
        return None
    return tuple(sorted(fs)), tuple(sorted(gsets[0]))


def stable_fracture_form(
    diagram: CoxeterDiagram, root, data: ElasticData, cap: int = 12, checks: int = 2
) -> StableFractureForm:
    """Read off the uniform fracture description from expanded type (1) expressions.

    At each ``N`` the smallest ``r`` whose split is consistent is tried, and
    accepted only if it predicts the exact normal sets at ``N+1 .. N+checks``.
    """
    root = tuple(root)
    expr = type1_expression(diagram, root, data)
    px = diagram.index(data.x)
    t = depth_growth_rate(diagram, root, data)
    cache = {}

    def actual(n):
        if n not in cache:
            cache[n] = _beta_normals(diagram, data, n, expr)[1]
        return cache[n]

    for N in range(max(expr.n0, 1) + 1, expr.n0 + cap + 1):
        for r in range(N // 2):
            parts = _extract(actual(N), px, N, r)
            if parts is None:
                continue
            form = StableFractureForm(diagram, data, root, r, parts[0], parts[1], t, expr)
            later = tuple(range(N + 1, N + checks + 1))
            if all(form.instantiate(m) == actual(m) for m in later):
                return StableFractureForm(
                    diagram, data, root, r, parts[0], parts[1], t, expr, (N,) + later
                )
    raise RuntimeError(f"fracture form did not stabilise by n = {expr.n0 + cap}")


# stable characteristic polynomial --------------------------------------------------------------


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _mu_partition(blocks_per_merge):
    out = 1
    for k in blocks_per_merge:
        out *= (-1) ** (k - 1) * factorial(k - 1)
    return out


def char_poly_in_subspace(normals, constraints, dim) -> Polynomial:
    """Point-count polynomial of the complement of ``normals`` inside
    ``{u : <c, u> = 0 for c in constraints}``; zero if a normal vanishes there."""
    constraints = [tuple(c) for c in constraints if any(c)]
    rk = rank(constraints) if constraints else 0
    sub_dim = dim - rk
    if not normals:
        return Polynomial([Fraction(0)] * sub_dim + [Fraction(1)])
    levels = intersection_lattice(normals, dim, base=constraints)
    if levels[0][0]:
        return Polynomial([Fraction(0)])
    coeffs = _chi_from_lattice(levels, len(normals), sub_dim)
    return Polynomial([Fraction(c) for c in coeffs])


def _evaluate(poly, x):
    return sum(Fraction(c) * Fraction(x) ** k for k, c in enumerate(poly.coef))


@dataclass(frozen=True)
class StableCharPoly:
    form: StableFractureForm
    p: dict  # k -> Polynomial (k = 1..t, or {0: ...} when t = 0)
    validated: tuple = ()

    @property
    def e(self) -> int:
        return self.form.e

    @property
    def t(self) -> int:
        return self.form.t

    def chi(self, n: int) -> CharPoly:
        if n < self.e:
            raise ValueError(f"formula holds for n >= {self.e}")
        total = Polynomial([Fraction(0)])
        for k, pk in self.p.items():
            total = total + pk * Polynomial([Fraction(-k), Fraction(1)]) ** (n - self.e)
        return CharPoly.from_polynomial(total)

    def shards(self, n: int) -> int:
        """Closed form ``(-1)^(d-e-1) sum_k p_k(-1) (k+1)^(n-e)``."""
        d = len(self.form.diagram)
        total = sum(_evaluate(pk, -1) * (k + 1) ** (n - self.e) for k, pk in self.p.items())
        sign = -1 if (d - self.e - 1) % 2 else 1
        val = sign * total
        assert val.denominator == 1
        return int(val)

    def coefficients(self) -> dict:
        return {k: [int(c) for c in CharPoly.from_polynomial(pk).coefficients] for k, pk in self.p.items()}


def stable_charpoly(diagram: CoxeterDiagram, root, data: ElasticData, validate: int = 3, form=None) -> StableCharPoly:
    """Stratify the complement of the ``f`` arrangement by the equality
    pattern of the ``g`` values and count each stratum by Möbius inversion
    over set partitions.

    The assembled formula is compared with the Möbius characteristic
    polynomial of the actual fracture arrangement at ``validate``
    consecutive ``n`` starting from the first stabilised one.
    """
    if form is None:
        form = stable_fracture_form(diagram, root, data)
    r = form.r
    px = diagram.index(data.x)
    d = len(diagram)
    dim = d - 1 + 2 * (r + 1)
    root = tuple(root)
    b = root[px]
    alpha = tuple(root[:px] + root[px + 1:]) + (0,) * (r + 1) + (0,) * r + (b,)

    def flat(vec):
        off, left, right = vec
        return tuple(off) + tuple(left) + tuple(right)

    fs = [flat(f) for f in form.f_list]
    gs = [flat(g) for g in form.g_list]
    t = len(gs)

    def count(partition):
        cons = [alpha]
        for block in partition:
            for i, j in zip(block, block[1:]):
                cons.append(tuple(x - y for x, y in zip(gs[i], gs[j])))
        return char_poly_in_subspace(fs, cons, dim)

    if t == 0:
        p = {0: count([])}
    else:
        cache = {}

        def N(part):
            key = tuple(sorted(tuple(sorted(b)) for b in part))
            if key not in cache:
                cache[key] = count(key)
            return cache[key]

        p = {k: Polynomial([Fraction(0)]) for k in range(1, t + 1)}
        for pi in set_partitions(range(t)):
            exact = Polynomial([Fraction(0)])
            for merge in set_partitions(range(len(pi))):
                sigma = [[i for blk in m for i in pi[blk]] for m in merge]
                exact = exact + _mu_partition([len(m) for m in merge]) * N(sigma)
            p[len(pi)] = p[len(pi)] + exact
    result = StableCharPoly(form, p)
    start = max(form.validated[0], form.e)
    checked = []
    for n in range(start, start + validate):
        direct = fracture_charpoly(diagram, root, data, n)
        predicted = result.chi(n)
        if predicted != direct:
            raise AssertionError(f"n={n}: predicted {predicted}, direct {direct}")
        checked.append(n)
    return StableCharPoly(form, p, tuple(checked))


# direct shard counts ------------------------------------------------------------------------


def fracture_set_at(diagram: CoxeterDiagram, root, data: ElasticData, n: int) -> FractureSet:
    H = stretched(diagram, data, n)
    top = stretch_root(diagram, root, data, n)
    return fractures_from_expression(H, canonical_expression(H, top))


def fracture_charpoly(diagram: CoxeterDiagram, root, data: ElasticData, n: int) -> CharPoly:
    fs = fracture_set_at(diagram, root, data, n)
    arr = fs.arrangement()
    return char_poly_mobius(arr)


def shard_count(diagram: CoxeterDiagram, root, data: ElasticData | None = None, n: int = 0) -> int:
    """Regions of the fracture arrangement in ``st_n(root)⊥``; ``data=None`` means no stretching."""
    if data is None:
        fs = fractures_from_expression(diagram, canonical_expression(diagram, tuple(root)))
    else:
        fs = fracture_set_at(diagram, root, data, n)
    if not len(fs):
        return 1
    return region_count(char_poly_mobius(fs.arrangement()))
