"""Central hyperplane arrangements with integer normals.

Characteristic polynomials come from two independent routes: the Möbius
function of the intersection poset (exact, over Q) and point counts in the
complement over finite fields, interpolated across several primes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np
from numpy.polynomial import Polynomial

from .lattice import (
    canonical,
    count_square_minors,
    hadamard_bound,
    kernel_basis,
    max_minor,
    primes_above,
)

DIRECT_BUDGET = 4_000_000  # prefixes enumerated per prime by the direct counter
_SAFE = 1 << 31


class InterpolationMismatch(ArithmeticError):
    pass


@dataclass(frozen=True)
class RationalArrangement:
    """Hyperplanes ``{v : <n, v> = 0}`` in ``Q^dim``.

    Normals are stored primitive with first nonzero entry positive, without
    repeats, in first-seen order.
    """

    dim: int
    normals: tuple = ()

    def __post_init__(self):
        seen = []
        for v in self.normals:
            v = tuple(int(c) for c in v)
            if len(v) != self.dim:
                raise ValueError(f"normal {v} does not have {self.dim} entries")
            if not any(v):
                raise ValueError("zero normal")
            c = canonical(v)
            if c not in seen:
                seen.append(c)
        object.__setattr__(self, "normals", tuple(seen))

    def __len__(self):
        return len(self.normals)

    @classmethod
    def coordinate(cls, k: int) -> "RationalArrangement":
        return cls(k, [tuple(int(i == j) for j in range(k)) for i in range(k)])

    @classmethod
    def braid(cls, k: int) -> "RationalArrangement":
        """``z_i = z_j`` for ``i < j`` in ``Q^k``."""
        vecs = []
        for i, j in combinations(range(k), 2):
            v = [0] * k
            v[i], v[j] = 1, -1
            vecs.append(v)
        return cls(k, vecs)

    def matrix(self) -> np.ndarray:
        return np.array(self.normals, dtype=np.int64).reshape(len(self.normals), self.dim)

    def to_json(self) -> dict:
        return {"dim": self.dim, "normals": [list(v) for v in self.normals]}

    @classmethod
    def from_json(cls, doc: dict) -> "RationalArrangement":
        return cls(int(doc["dim"]), [tuple(v) for v in doc.get("normals", [])])


@dataclass(frozen=True)
class CharPoly:
    """``chi(q) = sum coefficients[k] q^k``."""

    coefficients: tuple

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, q):
        return sum(c * q**k for k, c in enumerate(self.coefficients))

    def descending(self) -> list:
        return list(reversed(self.coefficients))

    def __str__(self):
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            coef = str(abs(c)) if (abs(c) != 1 or k == 0) else ""
            sep = "*" if coef and mono else ""
            parts.append(("- " if c < 0 else "+ ") + coef + sep + mono)
        s = " ".join(parts) or "0"
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    @classmethod
    def from_polynomial(cls, p) -> "CharPoly":
        coeffs = [Fraction(c) for c in p.coef]
        if any(c.denominator != 1 for c in coeffs):
            raise ValueError("characteristic polynomial with non-integer coefficients")
        out = [int(c) for c in coeffs]
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return cls(tuple(out))

    def to_polynomial(self) -> Polynomial:
        return Polynomial([Fraction(c) for c in self.coefficients])


# restriction -------------------------------------------------------------------------------


def restrict_to_hyperplane(normals, alpha, dim: int | None = None) -> RationalArrangement:
    """The arrangement ``{H ∩ alpha⊥}`` written in a lattice basis of ``alpha⊥``."""
    alpha = tuple(int(c) for c in alpha)
    if dim is None:
        dim = len(alpha)
    K = kernel_basis(alpha)
    out = []
    for h in normals:
        h = tuple(int(c) for c in h)
        if len(h) != dim:
            raise ValueError("normal and alpha dimensions differ")
        r = tuple(sum(k * c for k, c in zip(row, h)) for row in K)
        if not any(r):
            raise ValueError(f"normal {h} is parallel to alpha")
        out.append(r)
    return RationalArrangement(dim - 1, out)


# intersection lattice --------------------------------------------------------------------------


def _normalize_rows(R, p):
    if p is not None:
        R %= p
        for i in range(R.shape[0]):
            nz = np.flatnonzero(R[i])
            if nz.size:
                R[i] = (R[i] * pow(int(R[i, nz[0]]), -1, p)) % p
        return R
    if R.dtype == object:
        from .lattice import primitive

        for i in range(R.shape[0]):
            R[i] = np.array(canonical(primitive(R[i])), dtype=object) if any(R[i]) else R[i]
        return R
    g = np.gcd.reduce(R, axis=1)
    g[g == 0] = 1
    R //= g[:, None]
    # first nonzero entry positive
    first = np.argmax(R != 0, axis=1)
    signs = np.sign(R[np.arange(R.shape[0]), first])
    signs[signs == 0] = 1
    R *= signs[:, None]
    return R


def _eliminate(R, h, p):
    """Reduce every row of ``R`` modulo the row ``h`` (one Gaussian step)."""
    c = int(np.flatnonzero(h)[0])
    if p is None and R.dtype != object and max(np.abs(R).max(), 1) >= _SAFE:
        R = R.astype(object)
        h = h.astype(object)
    out = h[c] * R - np.outer(R[:, c], h)
    return _normalize_rows(out, p)


def intersection_lattice(normals, dim: int, base=(), p: int | None = None) -> list:
    """Flats of the arrangement inside the subspace cut out by ``base``.

    Returns ``levels[k]``: the flats of rank ``k`` (relative to ``base``), each
    encoded as a bitmask of the hyperplanes containing it.  With ``p`` given,
    ranks are taken over ``F_p`` instead of ``Q``.
    """
    H = len(normals)
    R = np.array([list(v) for v in normals], dtype=np.int64).reshape(H, dim)
    B = np.array([list(v) for v in base], dtype=np.int64).reshape(len(base), dim)
    R = _normalize_rows(R.copy(), p)
    B = _normalize_rows(B.copy(), p)
    for i in range(B.shape[0]):
        b = B[i]
        if not b.any():
            continue
        R = _eliminate(R, b, p)
        if i + 1 < B.shape[0]:
            B[i + 1:] = _eliminate(B[i + 1:], b, p)
    bottom = sum(1 << i for i in range(H) if not R[i].any())
    levels = [[bottom]]
    current = {bottom: R}
    while current:
        nxt = {}
        for mask, R in current.items():
            groups = {}
            for i in range(H):
                if not mask >> i & 1:
                    groups.setdefault(R[i].tobytes() if R.dtype != object else tuple(R[i]), []).append(i)
            for idxs in groups.values():
                new = mask
                for i in idxs:
                    new |= 1 << i
                if new not in nxt:
                    nxt[new] = _eliminate(R, R[idxs[0]], p)
        current = nxt
        if nxt:
            levels.append(sorted(nxt))
    return levels


def _mask_words(masks, words):
    arr = np.zeros((len(masks), words), dtype=np.uint64)
    for r, m in enumerate(masks):
        for w in range(words):
            arr[r, w] = (m >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return arr


def mobius_from_levels(levels, nhyper: int) -> list:
    """``mu(0, X)`` for every flat, level by level (same shape as ``levels``)."""
    words = max(1, (nhyper + 63) // 64)
    mus = [[1]]
    lower_masks = _mask_words(levels[0], words)
    lower_mu = np.array([1], dtype=object)
    for level in levels[1:]:
        arr = _mask_words(level, words)
        level_mu = []
        for r in range(len(level)):
            inside = np.all((lower_masks & ~arr[r]) == 0, axis=1)
            level_mu.append(-int(lower_mu[inside].sum()))
        mus.append(level_mu)
        lower_masks = np.vstack([lower_masks, arr])
        lower_mu = np.concatenate([lower_mu, np.array(level_mu, dtype=object)])
    return mus


def _chi_from_lattice(levels, nhyper, dim):
    mus = mobius_from_levels(levels, nhyper)
    coeffs = [0] * (dim + 1)
    for k, level_mu in enumerate(mus):
        coeffs[dim - k] += sum(level_mu)
    return coeffs


def char_poly_mobius(arr: RationalArrangement) -> CharPoly:
    """``chi(q) = sum_X mu(0, X) q^{dim X}`` over the intersection poset."""
    if not arr.normals:
        return CharPoly(tuple([0] * arr.dim + [1]))
    levels = intersection_lattice(arr.normals, arr.dim)
    return CharPoly(tuple(_chi_from_lattice(levels, len(arr), arr.dim)))


def char_poly_within(normals, alpha) -> CharPoly:
    """Characteristic polynomial of ``{H ∩ alpha⊥}`` computed in ambient coordinates."""
    alpha = tuple(int(c) for c in alpha)
    dim = len(alpha)
    normals = [tuple(int(c) for c in h) for h in normals]
    if not normals:
        return CharPoly(tuple([0] * (dim - 1) + [1]))
    levels = intersection_lattice(normals, dim, base=[alpha])
    if levels[0][0]:
        raise ValueError("a normal is parallel to alpha")
    # coincident restrictions: each flat is counted once by its mask, so duplicates are harmless
    return CharPoly(tuple(_chi_from_lattice(levels, len(normals), dim - 1)))


# finite fields --------------------------------------------------------------------------------


def _count_direct(N: np.ndarray, p: int) -> int:
    H, d = N.shape
    last = N[:, -1] % p
    pre = N[:, :-1] % p
    zero_type = last == 0
    inv = np.array([pow(int(c), -1, p) for c in last[~zero_type]], dtype=np.int64)
    pre_z, pre_nz = pre[zero_type], pre[~zero_type]
    total_prefixes = p ** (d - 1)
    count = 0
    chunk = 1 << 18
    for start in range(0, total_prefixes, chunk):
        idx = np.arange(start, min(start + chunk, total_prefixes), dtype=np.int64)
        X = np.empty((idx.size, d - 1), dtype=np.int64)
        rest = idx.copy()
        for j in range(d - 1):
            X[:, j] = rest % p
            rest //= p
        dead = np.zeros(idx.size, dtype=bool)
        if pre_z.shape[0]:
            dead = ((X @ pre_z.T) % p == 0).any(axis=1)
        if pre_nz.shape[0]:
            ex = (-(X @ pre_nz.T) % p) * inv % p
            ex.sort(axis=1)
            distinct = 1 + (np.diff(ex, axis=1) != 0).sum(axis=1)
        else:
            distinct = np.zeros(idx.size, dtype=np.int64)
        count += int(np.where(dead, 0, p - distinct).sum())
    return count


def count_points(arr: RationalArrangement, p: int, method: str = "auto") -> int:
    """Points of ``F_p^dim`` on none of the hyperplanes (reduced mod ``p``).

    ``method`` is ``"direct"`` (enumeration, fibred over the last coordinate),
    ``"lattice"`` (Möbius over the intersection poset taken mod ``p``) or
    ``"auto"``, which enumerates when ``dim <= 6`` and the work is small.
    """
    if not arr.normals:
        return p**arr.dim
    if method == "auto":
        method = "direct" if arr.dim <= 6 and p ** (arr.dim - 1) <= DIRECT_BUDGET else "lattice"
    if method == "direct":
        return _count_direct(arr.matrix(), p)
    levels = intersection_lattice(arr.normals, arr.dim, p=p)
    coeffs = _chi_from_lattice(levels, len(arr), arr.dim)
    return sum(c * p**k for k, c in enumerate(coeffs))


def prime_bound(arr: RationalArrangement) -> int:
    """Every nonzero square minor of the normal matrix is at most this."""
    if not arr.normals:
        return 1
    if count_square_minors(len(arr), arr.dim) <= 20_000:
        return max_minor(arr.normals)
    return hadamard_bound(arr.normals)


def _interpolate(points):
    xs = [Fraction(x) for x, _ in points]
    total = Polynomial([Fraction(0)])
    for i, (xi, yi) in enumerate(points):
        term = Polynomial([Fraction(yi)])
        for j, xj in enumerate(xs):
            if j != i:
                term = term * Polynomial([-xj / (xi - xj), Fraction(1) / (xi - xj)])
        total = total + term
    return total


def char_poly_finite_field(arr: RationalArrangement, primes=None, method: str = "auto") -> CharPoly:
    """Interpolate complement point counts over ``F_p`` for several primes.

    Uses ``dim + 1`` primes for the interpolation and checks the fit against
    any extra primes; by default ``dim + 2`` primes above the minor bound.
    """
    bound = prime_bound(arr)
    if primes is None:
        primes = primes_above(bound, arr.dim + 2)
    primes = list(primes)
    low = [p for p in primes if p <= bound]
    if low:
        raise ValueError(f"primes {low} do not exceed the minor bound {bound}")
    if len(primes) < arr.dim + 1:
        raise ValueError(f"need at least {arr.dim + 1} primes, got {len(primes)}")
    points = [(p, count_points(arr, p, method)) for p in primes]
    fit = _interpolate(points[: arr.dim + 1])
    for p, c in points[arr.dim + 1:]:
        if fit(Fraction(p)) != c:
            raise InterpolationMismatch(f"count {c} at q={p} disagrees with the interpolant")
    try:
        chi = CharPoly.from_polynomial(fit)
    except ValueError as exc:
        raise InterpolationMismatch(str(exc)) from None
    if chi.degree != arr.dim or chi.coefficients[-1] != 1:
        raise InterpolationMismatch(f"interpolant {chi} is not monic of degree {arr.dim}")
    return chi


def region_count(arr_or_chi) -> int:
    """Number of regions, ``(-1)^dim chi(-1)``."""
    chi = arr_or_chi if isinstance(arr_or_chi, CharPoly) else char_poly_mobius(arr_or_chi)
    return (-1) ** chi.degree * chi(-1)
