"""Reflections, positive-root generation and the root poset.

Roots are tuples of integers in the vertex order of their diagram.  A
reflection at ``v`` changes only the ``v`` coordinate:

    s_v(b)[v] = sum_{y ~ v} -A[v][y] * b[y]  -  b[v]

which is ``b - (a_v, b) a_v`` with ``(a_v, b) = sum_j A[v][j] b[j]``.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field

from .diagram import CoxeterDiagram, DiagramError


class NotARootError(ValueError):
    pass


def pairing(diagram: CoxeterDiagram, i: int, root) -> int:
    """``(a_i, root)``; positive exactly when reflecting at ``i`` lowers the root."""
    return 2 * root[i] + sum(a * root[j] for j, a in diagram._nbrs[i])


def _reflect(diagram, root, i):
    new = list(root)
    new[i] = sum(-a * root[j] for j, a in diagram._nbrs[i]) - root[i]
    return tuple(new)


def reflect(diagram: CoxeterDiagram, root, vertex) -> tuple:
    i = diagram.index(vertex)
    if len(root) != len(diagram):
        raise DiagramError(f"vector has {len(root)} entries, diagram has {len(diagram)} vertices")
    return _reflect(diagram, tuple(root), i)


def simple_root(diagram: CoxeterDiagram, vertex) -> tuple:
    i = diagram.index(vertex)
    return tuple(1 if j == i else 0 for j in range(len(diagram)))


def _simple_index(root):
    """Index of the nonzero entry if ``root`` is a simple root, else None."""
    nz = [i for i, c in enumerate(root) if c]
    if len(nz) == 1 and root[nz[0]] == 1:
        return nz[0]
    return None


def descents(diagram: CoxeterDiagram, root) -> list:
    """Vertex indices where reflecting strictly lowers ``root``."""
    return [i for i in range(len(root)) if pairing(diagram, i, root) > 0]


def _descend(diagram, root, avoid=None):
    """Yield (index, lower root) pairs of a canonical descent to a simple root.

    Takes the smallest decreasing index, but postpones ``avoid`` while any
    other descent exists.  Raises NotARootError if the descent gets stuck.
    """
    root = tuple(root)
    if any(c < 0 for c in root) or not any(root):
        raise NotARootError(f"{root} is not a positive root")
    while _simple_index(root) is None:
        ds = descents(diagram, root)
        if avoid is not None and len(ds) > 1 and avoid in ds:
            ds.remove(avoid)
        if not ds:
            raise NotARootError(f"descent stuck at non-simple vector {root}")
        i = ds[0]
        root = _reflect(diagram, root, i)
        if any(c < 0 for c in root):
            raise NotARootError("descent left the positive cone")
        yield i, root


def depth(diagram: CoxeterDiagram, root) -> int:
    """Length of a reduced expression for ``root`` counting the starting simple root.

    Every strictly decreasing reflection lowers depth by exactly one, so any
    descent to a simple root has length ``depth - 1``.
    """
    return 1 + sum(1 for _ in _descend(diagram, root))


def canonical_expression(diagram: CoxeterDiagram, root, avoid=None) -> tuple:
    """A reduced expression ``(y0, y1, ..., yl)`` meaning s_yl ... s_y1 (a_y0).

    Entries are vertex names.
    """
    steps = list(_descend(diagram, root, avoid=avoid))
    bottom = steps[-1][1] if steps else tuple(root)
    start = _simple_index(bottom)
    word = [start] + [i for i, _ in reversed(steps)]
    return tuple(diagram.vertices[i] for i in word)


def is_root(diagram: CoxeterDiagram, vector) -> bool:
    """Membership in the real root system generated by the simple roots.

    Positive vectors are tested by greedy descent: for a genuine positive root
    every decreasing reflection stays inside the positive roots, so getting
    stuck (or leaving the positive cone) proves non-membership.  Backtracking
    is never needed.
    """
    v = tuple(int(c) for c in vector)
    if len(v) != len(diagram) or not any(v):
        return False
    if all(c <= 0 for c in v):
        v = tuple(-c for c in v)
    elif not all(c >= 0 for c in v):
        return False
    try:
        for _ in _descend(diagram, v):
            pass
    except NotARootError:
        return False
    return True


def replay(diagram: CoxeterDiagram, expression) -> tuple:
    """Evaluate ``s_yl ... s_y1 (a_y0)`` for ``expression = (y0, ..., yl)``."""
    if not expression:
        raise ValueError("empty expression")
    root = simple_root(diagram, expression[0])
    for v in expression[1:]:
        root = _reflect(diagram, root, diagram.index(v))
    return root


def is_reduced(diagram: CoxeterDiagram, expression) -> bool:
    """True when every step of ``expression`` goes up a cover."""
    root = simple_root(diagram, expression[0])
    for v in expression[1:]:
        i = diagram.index(v)
        if pairing(diagram, i, root) >= 0:
            return False
        root = _reflect(diagram, root, i)
    return True


# the root poset -----------------------------------------------------------------


@dataclass
class PosetSlice:
    """Depth-bounded piece of the root poset.

    ``levels[k]`` holds the roots of depth ``k + 1`` sorted lexicographically;
    ``cover_edges`` holds ``(lower, vertex, upper)`` triples.
    """

    diagram: CoxeterDiagram
    levels: list
    cover_edges: set = field(default_factory=set)
    complete: bool = False  # True once a level came out empty (finite type)

    @property
    def roots(self) -> list:
        return [r for level in self.levels for r in level]

    def __len__(self):
        return sum(len(level) for level in self.levels)

    def depth_of(self) -> dict:
        return {r: k + 1 for k, level in enumerate(self.levels) for r in level}

    def to_json(self) -> dict:
        return {
            "vertices": list(self.diagram.vertices),
            "levels": [[list(r) for r in level] for level in self.levels],
            "covers": [
                {"lower": list(lo), "vertex": v, "upper": list(up)}
                for lo, v, up in sorted(self.cover_edges)
            ],
            "complete": self.complete,
        }

    def to_dot(self) -> str:
        def name(r):
            return "".join(map(str, r)) if max(r) < 10 else ",".join(map(str, r))

        lines = ["digraph rootposet {", "  rankdir=BT;", "  node [shape=plaintext];"]
        for k, level in enumerate(self.levels):
            lines.append("  { rank=same; " + " ".join(f'"{name(r)}";' for r in level) + " }")
        for lo, v, up in sorted(self.cover_edges):
            lines.append(f'  "{name(lo)}" -> "{name(up)}" [label="s_{v}", arrowhead=none];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def depth_cap(max_depth: int) -> int:
    cap = os.environ.get("ROOTSTRETCH_MAX_DEPTH")
    if cap:
        return min(max_depth, int(cap))
    return max_depth


def generate_positive_roots(diagram: CoxeterDiagram, max_depth: int) -> PosetSlice:
    """Breadth-first closure upward from the simple roots.

    Each root of depth ``d`` is covered by ``s_v(b)`` exactly when
    ``(a_v, b) < 0``; gradedness puts every cover between consecutive levels.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    max_depth = depth_cap(max_depth)
    n = len(diagram)
    level = sorted(simple_root(diagram, i) for i in range(n))
    levels = [level]
    covers = set()
    complete = False
    while len(levels) < max_depth:
        nxt = set()
        for root in level:
            for i in range(n):
                if pairing(diagram, i, root) < 0:
                    up = _reflect(diagram, root, i)
                    nxt.add(up)
                    covers.add((root, diagram.vertices[i], up))
        if not nxt:
            complete = True
            break
        level = sorted(nxt)
        levels.append(level)
    else:
        # one more look to tell whether the slice already exhausts the poset
        complete = not any(pairing(diagram, i, r) < 0 for r in level for i in range(n))
    return PosetSlice(diagram, levels, covers, complete)


def downset(diagram: CoxeterDiagram, root) -> set:
    """All positive roots below ``root`` in the root poset (including it)."""
    root = tuple(root)
    if not is_root(diagram, root) or min(root) < 0:
        raise NotARootError(f"{root} is not a positive root")
    seen = {root}
    queue = deque([root])
    while queue:
        b = queue.popleft()
        if _simple_index(b) is not None:
            continue
        for i in descents(diagram, b):
            low = _reflect(diagram, b, i)
            if low not in seen:
                seen.add(low)
                queue.append(low)
    return seen


def leq(diagram: CoxeterDiagram, lower, upper) -> bool:
    """Root-poset comparison ``lower <= upper``."""
    lower, upper = tuple(lower), tuple(upper)
    if lower == upper:
        return True
    if any(a > b for a, b in zip(lower, upper)):
        return False
    return lower in downset(diagram, upper)


def interval(diagram: CoxeterDiagram, lower, upper) -> set:
    """Roots ``g`` with ``lower <= g <= upper``."""
    down = downset(diagram, upper)
    return {g for g in down if leq(diagram, lower, g)}


def reduced_expressions(diagram: CoxeterDiagram, root, limit: int | None = None) -> list:
    """Reduced expressions for ``root`` as vertex-name tuples ``(y0, ..., yl)``.

    These are the saturated chains from a simple root up to ``root``; at most
    ``limit`` are returned, in lexicographic order of the underlying index
    sequences read from the top down.
    """
    root = tuple(root)
    if not is_root(diagram, root) or min(root) < 0:
        raise NotARootError(f"{root} is not a positive root")
    out = []
    names = diagram.vertices

    def walk(b, suffix):
        if limit is not None and len(out) >= limit:
            return
        s = _simple_index(b)
        if s is not None:
            out.append(tuple(names[i] for i in [s] + suffix))
            return
        for i in descents(diagram, b):
            walk(_reflect(diagram, b, i), [i] + suffix)
            if limit is not None and len(out) >= limit:
                return

    walk(root, [])
    return out


def count_reduced_expressions(diagram: CoxeterDiagram, root) -> int:
    """Number of saturated chains from the simple roots up to ``root``."""
    memo = {}

    def count(b):
        if b in memo:
            return memo[b]
        if _simple_index(b) is not None:
            return 1
        total = sum(count(_reflect(diagram, b, i)) for i in descents(diagram, b))
        memo[b] = total
        return total

    return count(tuple(root))


def root_reflection(diagram: CoxeterDiagram, root, vector) -> tuple:
    """Apply the reflection ``s_root = w s_i w^{-1}`` where ``root = w a_i``."""
    root = tuple(root)
    if min(root) < 0:
        root = tuple(-c for c in root)  # s_{-b} = s_b
    expr = canonical_expression(diagram, root)
    v = tuple(vector)
    idx = [diagram.index(y) for y in expr]
    for i in reversed(idx[1:]):
        v = _reflect(diagram, v, i)
    v = _reflect(diagram, v, idx[0])
    for i in idx[1:]:
        v = _reflect(diagram, v, i)
    return v


def bilinear(diagram: CoxeterDiagram, u, v) -> int:
    """``(u, v)`` with ``(a_i, a_j) = A[i][j]`` extended bilinearly."""
    A = diagram.cartan
    return sum(u[i] * A[i][j] * v[j] for i in range(len(u)) if u[i] for j in range(len(v)) if v[j])
