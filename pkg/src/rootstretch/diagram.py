"""Coxeter diagrams with crystallographic Cartan matrices, elastic data and
the stretching operation on both.

Vertices are strings.  Stretching an elastic vertex ``x`` by ``n`` replaces it
with the path ``x.0 - x.1 - ... - x.n`` placed where ``x`` used to sit in the
vertex order, so stretched root vectors read left to right like the diagram.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

INFINITY = 0  # JSON encoding of the label m = oo

# A_ij * A_ji for each finite crystallographic label
_LABEL_PRODUCT = {3: 1, 4: 2, 6: 3}


class DiagramError(ValueError):
    pass


def path_name(x: str, i: int) -> str:
    return f"{x}.{i}"


@dataclass(frozen=True)
class ElasticData:
    x: str
    left: frozenset
    right: frozenset

    def __init__(self, x, left=(), right=()):
        object.__setattr__(self, "x", str(x))
        object.__setattr__(self, "left", frozenset(map(str, left)))
        object.__setattr__(self, "right", frozenset(map(str, right)))

    def swapped(self) -> "ElasticData":
        return ElasticData(self.x, self.right, self.left)

    def to_json(self) -> dict:
        return {"x": self.x, "left": sorted(self.left), "right": sorted(self.right)}


@dataclass(frozen=True, eq=False)
class CoxeterDiagram:
    """A Coxeter diagram together with a full integer Cartan matrix.

    ``cartan`` is stored row-major in vertex order.  Edge labels are kept
    separately (``edges`` maps ``frozenset({u, v})`` to ``m``) because they
    are part of the input format, but all computations go through the matrix.
    """

    vertices: tuple
    cartan: tuple
    edges: dict = field(default_factory=dict)
    elastic: ElasticData | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "cartan", tuple(tuple(int(a) for a in row) for row in self.cartan))
        index = {v: i for i, v in enumerate(self.vertices)}
        if len(index) != len(self.vertices):
            raise DiagramError("duplicate vertex names")
        object.__setattr__(self, "_index", index)
        nbrs = []
        for i, row in enumerate(self.cartan):
            nbrs.append(tuple((j, a) for j, a in enumerate(row) if j != i and a != 0))
        object.__setattr__(self, "_nbrs", tuple(nbrs))

    # construction -------------------------------------------------------

    @classmethod
    def from_cartan(cls, vertices, cartan, elastic=None) -> "CoxeterDiagram":
        """Build a diagram whose edge labels are read off the Cartan matrix."""
        cartan = [list(map(int, row)) for row in cartan]
        vertices = [str(v) for v in vertices]
        edges = {}
        for i in range(len(vertices)):
            for j in range(i + 1, len(vertices)):
                prod = cartan[i][j] * cartan[j][i]
                if cartan[i][j] == 0 and cartan[j][i] == 0:
                    continue
                edges[frozenset((vertices[i], vertices[j]))] = {1: 3, 2: 4, 3: 6}.get(prod, INFINITY)
        return cls(tuple(vertices), tuple(map(tuple, cartan)), edges, elastic)

    # queries ------------------------------------------------------------

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, CoxeterDiagram):
            return NotImplemented
        return (self.vertices, self.cartan, self.edges) == (other.vertices, other.cartan, other.edges)

    def __hash__(self):
        return hash((self.vertices, self.cartan))

    def index(self, v) -> int:
        if isinstance(v, (int, np.integer)):
            if not 0 <= v < len(self.vertices):
                raise DiagramError(f"vertex index {v} out of range")
            return int(v)
        try:
            return self._index[str(v)]
        except KeyError:
            raise DiagramError(f"unknown vertex {v!r}") from None

    def A(self, u, v) -> int:
        return self.cartan[self.index(u)][self.index(v)]

    def neighbors(self, v) -> list:
        return [self.vertices[j] for j, _ in self._nbrs[self.index(v)]]

    def label(self, u, v) -> int:
        if u == v:
            return 1
        return self.edges.get(frozenset((str(u), str(v))), 2)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.cartan, dtype=np.int64)

    def with_elastic(self, data: ElasticData) -> "CoxeterDiagram":
        return CoxeterDiagram(self.vertices, self.cartan, dict(self.edges), data)

    def relabel(self, mapping: dict) -> "CoxeterDiagram":
        """Rename vertices (keeping order); ``mapping`` may be partial."""
        new = [mapping.get(v, v) for v in self.vertices]
        edges = {frozenset(mapping.get(v, v) for v in k): m for k, m in self.edges.items()}
        return CoxeterDiagram(tuple(new), self.cartan, edges)

    # serialization -------------------------------------------------------

    def to_json(self) -> dict:
        doc = {
            "vertices": list(self.vertices),
            "edges": [
                {"u": u, "v": v, "m": m}
                for key, m in sorted(self.edges.items(), key=lambda kv: sorted(kv[0]))
                for u, v in [sorted(key, key=self.index)]
            ],
            "cartan": {
                f"{u},{v}": self.cartan[i][j]
                for i, u in enumerate(self.vertices)
                for j, v in enumerate(self.vertices)
                if i != j and self.cartan[i][j] != 0
            },
        }
        if self.elastic is not None:
            doc["elastic"] = self.elastic.to_json()
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "CoxeterDiagram":
        try:
            vertices = [str(v) for v in doc["vertices"]]
        except (KeyError, TypeError):
            raise DiagramError("diagram document needs a 'vertices' list") from None
        index = {v: i for i, v in enumerate(vertices)}
        n = len(vertices)
        cartan = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        edges = {}
        for e in doc.get("edges", []):
            u, v, m = str(e["u"]), str(e["v"]), int(e.get("m", 3))
            if u not in index or v not in index:
                raise DiagramError(f"edge {u}-{v} names an unknown vertex")
            edges[frozenset((u, v))] = m
            if m == 3:
                # simply-laced default, overridable through "cartan"
                cartan[index[u]][index[v]] = cartan[index[v]][index[u]] = -1
        for key, value in doc.get("cartan", {}).items():
            u, v = (s.strip() for s in key.split(","))
            if u not in index or v not in index:
                raise DiagramError(f"cartan entry {key!r} names an unknown vertex")
            cartan[index[u]][index[v]] = int(value)
        elastic = None
        if doc.get("elastic"):
            el = doc["elastic"]
            elastic = ElasticData(el["x"], el.get("left", ()), el.get("right", ()))
        return cls(tuple(vertices), tuple(map(tuple, cartan)), edges, elastic)


def load_diagram(path) -> CoxeterDiagram:
    with open(path) as fh:
        return CoxeterDiagram.from_json(json.load(fh))


def save_diagram(diagram: CoxeterDiagram, path) -> None:
    Path(path).write_text(json.dumps(diagram.to_json(), indent=2) + "\n")


# validation ---------------------------------------------------------------


def validate(diagram: CoxeterDiagram) -> list:
    """Return a list of human-readable invariant violations (empty if valid)."""
    problems = []
    verts = diagram.vertices
    A = diagram.cartan
    n = len(verts)
    if any(len(row) != n for row in A):
        return ["cartan matrix is not square"]
    for i in range(n):
        if A[i][i] != 2:
            problems.append(f"diagonal must be 2 at {verts[i]} (found {A[i][i]})")
    for i in range(n):
        for j in range(i + 1, n):
            u, v = verts[i], verts[j]
            a, b = A[i][j], A[j][i]
            m = diagram.label(u, v)
            if a > 0 or b > 0:
                problems.append(f"off-diagonal entries must be <= 0 at {u},{v}")
            if (a == 0) != (b == 0):
                problems.append(f"A[{u},{v}] and A[{v},{u}] must vanish together")
            if m == 2:
                if a != 0 or b != 0:
                    problems.append(f"{u},{v} carry no edge but have nonzero cartan entries")
                continue
            if a == 0:
                problems.append(f"edge {u}-{v} labelled {m} but cartan entries vanish")
                continue
            if m in _LABEL_PRODUCT:
                if a * b != _LABEL_PRODUCT[m]:
                    problems.append(
                        f"A[{u},{v}]*A[{v},{u}] = {a * b} but label {m} needs {_LABEL_PRODUCT[m]}"
                    )
            elif m == INFINITY:
                if a * b < 4:
                    problems.append(f"infinite label on {u}-{v} needs A_ij*A_ji >= 4 (found {a * b})")
            else:
                problems.append(f"label {m} on {u}-{v} is not crystallographic")
    for key in diagram.edges:
        if any(v not in diagram._index for v in key):
            problems.append(f"edge {sorted(key)} names an unknown vertex")
    if diagram.elastic is not None:
        problems.extend(validate_elastic(diagram, diagram.elastic))
    return problems


def validate_elastic(diagram: CoxeterDiagram, data: ElasticData) -> list:
    if data.x not in diagram._index:
        return [f"elastic vertex {data.x!r} is not in the diagram"]
    problems = []
    nbrs = set(diagram.neighbors(data.x))
    if data.left & data.right:
        problems.append("left and right neighbour sets overlap")
    if (data.left | data.right) != nbrs:
        problems.append(
            f"left/right must partition the neighbours {sorted(nbrs)} of {data.x}"
        )
    return problems


def _check_data(diagram, data):
    problems = validate_elastic(diagram, data)
    if problems:
        raise DiagramError("; ".join(problems))


def admissible_elastic_data(diagram: CoxeterDiagram):
    """Every elastic datum of the diagram: each vertex, each ordered split."""
    out = []
    for x in diagram.vertices:
        nbrs = diagram.neighbors(x)
        for mask in range(2 ** len(nbrs)):
            left = [y for k, y in enumerate(nbrs) if mask >> k & 1]
            right = [y for k, y in enumerate(nbrs) if not mask >> k & 1]
            out.append(ElasticData(x, left, right))
    return out


# stretching -----------------------------------------------------------------


def stretched_vertices(diagram: CoxeterDiagram, data: ElasticData, n: int) -> tuple:
    out = []
    for v in diagram.vertices:
        if v == data.x:
            out.extend(path_name(v, i) for i in range(n + 1))
        else:
            out.append(v)
    return tuple(out)


def stretch_cartan(diagram: CoxeterDiagram, data: ElasticData, n: int) -> np.ndarray:
    """The ``n``-stretched Cartan matrix in the order of ``stretched_vertices``."""
    if n < 0:
        raise DiagramError("stretch length must be nonnegative")
    _check_data(diagram, data)
    x = data.x
    names = stretched_vertices(diagram, data, n)
    pos = {v: i for i, v in enumerate(names)}
    size = len(names)
    out = np.zeros((size, size), dtype=np.int64)
    off = [v for v in diagram.vertices if v != x]
    for y in off:
        for z in off:
            out[pos[y], pos[z]] = diagram.A(y, z)
    first, last = pos[path_name(x, 0)], pos[path_name(x, n)]
    for z in data.left:
        out[first, pos[z]] = diagram.A(x, z)
        out[pos[z], first] = diagram.A(z, x)
    for z in data.right:
        out[last, pos[z]] = diagram.A(x, z)
        out[pos[z], last] = diagram.A(z, x)
    for i in range(n + 1):
        out[first + i, first + i] = 2
        if i < n:
            out[first + i, first + i + 1] = out[first + i + 1, first + i] = -1
    return out


def stretch_diagram(diagram: CoxeterDiagram, data: ElasticData, n: int) -> CoxeterDiagram:
    cartan = stretch_cartan(diagram, data, n)
    names = stretched_vertices(diagram, data, n)
    x = data.x
    edges = {}
    for key, m in diagram.edges.items():
        if x not in key:
            edges[key] = m
            continue
        (z,) = tuple(key - {x})
        end = path_name(x, 0) if z in data.left else path_name(x, n)
        edges[frozenset((end, z))] = m
    for i in range(n):
        edges[frozenset((path_name(x, i), path_name(x, i + 1)))] = 3
    return CoxeterDiagram(names, cartan.tolist(), edges)


def induced_elastic_data(diagram: CoxeterDiagram, data: ElasticData, n0: int, i: int) -> ElasticData:
    """Elastic data on ``st_{n0}(G)`` induced by the path vertex ``x_i``."""
    if not 0 <= i <= n0:
        raise DiagramError(f"path index {i} outside 0..{n0}")
    _check_data(diagram, data)
    x = data.x
    left = data.left if i == 0 else {path_name(x, i - 1)}
    right = data.right if i == n0 else {path_name(x, i + 1)}
    return ElasticData(path_name(x, i), left, right)


def is_isomorphic_under(g: CoxeterDiagram, h: CoxeterDiagram, mapping: dict) -> bool:
    """Check that ``mapping`` (vertex of g -> vertex of h) is a diagram isomorphism."""
    if len(g) != len(h) or set(mapping) != set(g.vertices):
        return False
    if set(mapping.values()) != set(h.vertices):
        return False
    return all(
        g.A(u, v) == h.A(mapping[u], mapping[v]) for u in g.vertices for v in g.vertices
    )


# standard families ------------------------------------------------------------


def _chain(n):
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        A[i][i] = 2
        if i + 1 < n:
            A[i][i + 1] = A[i + 1][i] = -1
    return A


def cartan_type(family: str, n: int) -> CoxeterDiagram:
    """Finite-type diagrams A_n, B_n, C_n, D_n, E_6..E_8, F_4, G_2 and the
    affine star D~4.

    Vertices are "1".."n".  ``D_n`` is ordered fork-first so that its highest
    root reads ``1,1,2,...,2,1``: vertices 1 and 2 hang off vertex 3, which
    starts the chain 3-4-...-n.
    """
    family = family.upper()
    names = [str(i + 1) for i in range(n)]
    if family == "A":
        A = _chain(n)
    elif family in ("B", "C"):
        if n < 2:
            raise DiagramError(f"{family}_n needs n >= 2")
        A = _chain(n)
        # B: last simple root short; C: last simple root long
        if family == "B":
            A[n - 1][n - 2] = -2
        else:
            A[n - 2][n - 1] = -2
    elif family == "D":
        if n < 4:
            raise DiagramError("D_n needs n >= 4")
        A = [[0] * n for _ in range(n)]
        for i in range(n):
            A[i][i] = 2
        for a, b in [(0, 2), (1, 2)] + [(k, k + 1) for k in range(2, n - 1)]:
            A[a][b] = A[b][a] = -1
    elif family == "E":
        if n not in (6, 7, 8):
            raise DiagramError("E_n needs n in 6..8")
        A = [row + [0] for row in _chain(n - 1)] + [[0] * n]
        A[n - 1][n - 1] = 2
        A[2][n - 1] = A[n - 1][2] = -1
    elif family == "F" and n == 4:
        A = _chain(4)
        A[2][1] = -2
    elif family == "G" and n == 2:
        A = [[2, -1], [-3, 2]]
    elif family in ("D~", "AFFINE_D") and n == 4:
        # star: center "3" with leaves 1, 2, 4, 5
        A = [[2 if i == j else 0 for j in range(5)] for i in range(5)]
        for leaf in (0, 1, 3, 4):
            A[leaf][2] = A[2][leaf] = -1
        names = [str(i + 1) for i in range(5)]
    else:
        raise DiagramError(f"unsupported type {family}{n}")
    return CoxeterDiagram.from_cartan(names, A)


def star(left: int, right: int, center: str = "x") -> tuple:
    """Simply-laced star with ``left + right`` leaves and its natural elastic data.

    Leaves are named l1.., r1..; the vertex order is left leaves, center,
    right leaves.
    """
    ls = [f"l{i + 1}" for i in range(left)]
    rs = [f"r{i + 1}" for i in range(right)]
    names = ls + [center] + rs
    c = left
    A = [[2 if i == j else 0 for j in range(len(names))] for i in range(len(names))]
    for k in range(len(names)):
        if k != c:
            A[k][c] = A[c][k] = -1
    return CoxeterDiagram.from_cartan(names, A), ElasticData(center, ls, rs)
