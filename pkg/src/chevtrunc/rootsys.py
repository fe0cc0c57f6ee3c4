"""Root systems of split simple types A, B, C, D, G in rank <= 4.

Conventions
-----------
* ``cartan_matrix[i][j] = <alpha_i, alpha_j> = alpha_i(h_j)``.
* Roots live in simple-root coordinates, weights in fundamental-weight
  coordinates ``(lambda(h_1), ..., lambda(h_l))``.
* Positive roots are ordered by height, and within one height by decreasing
  coordinate tuple, so the simple roots come first in their natural order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .intlinalg import inverse_q

Weight = tuple
Root = tuple

MAX_RANK = 4


class NotBelow(ValueError):
    """Raised when a weight is not of the form lambda - (sum of positive roots)."""


def _inner_products(kind: str, rank: int) -> list[list[int]]:
    """Symmetric Gram matrix of the simple roots, scaled to be integral."""
    g = [[0] * rank for _ in range(rank)]
    if kind == "A":
        for i in range(rank):
            g[i][i] = 2
            if i + 1 < rank:
                g[i][i + 1] = g[i + 1][i] = -1
    elif kind == "B":
        for i in range(rank):
            g[i][i] = 4 if i < rank - 1 else 2
            if i + 1 < rank:
                g[i][i + 1] = g[i + 1][i] = -2
    elif kind == "C":
        for i in range(rank):
            g[i][i] = 2 if i < rank - 1 else 4
            if i + 1 < rank:
                g[i][i + 1] = g[i + 1][i] = -1 if i + 1 < rank - 1 else -2
    elif kind == "D":
        for i in range(rank):
            g[i][i] = 2
        for i in range(rank - 2):
            g[i][i + 1] = g[i + 1][i] = -1
        g[rank - 3][rank - 1] = g[rank - 1][rank - 3] = -1
    elif kind == "G":
        g = [[2, -3], [-3, 6]]
    return g


_RANKS = {"A": range(1, MAX_RANK + 1), "B": range(2, MAX_RANK + 1),
          "C": range(2, MAX_RANK + 1), "D": range(4, MAX_RANK + 1), "G": (2,)}

_COXETER = {"A": lambda n: n + 1, "B": lambda n: 2 * n, "C": lambda n: 2 * n,
            "D": lambda n: 2 * n - 2, "G": lambda n: 6}

_POSITIVE_COUNT = {"A": lambda n: n * (n + 1) // 2, "B": lambda n: n * n,
                   "C": lambda n: n * n, "D": lambda n: n * (n - 1), "G": lambda n: 6}


@dataclass(frozen=True)
class CartanDatum:
    type_label: str
    rank: int
    cartan_matrix: tuple
    gram: tuple = field(repr=False, compare=False)

    @property
    def name(self) -> str:
        return f"{self.type_label}{self.rank}"


def cartan_datum(label: str, matrix=None) -> CartanDatum:
    """Parse a label such as ``"A2"`` or ``"G2"``.

    If ``matrix`` is given it must equal the Cartan matrix of the named type;
    anything else is rejected with a diagnostic.
    """
    m = re.fullmatch(r"\s*([ABCDGabcdg])\s*(\d+)\s*", label)
    if not m:
        raise ValueError(f"cannot parse root system label {label!r}")
    kind, rank = m.group(1).upper(), int(m.group(2))
    if rank not in _RANKS[kind]:
        raise ValueError(f"type {kind}{rank} is not supported (ranks {list(_RANKS[kind])})")
    gram = _inner_products(kind, rank)
    cartan = tuple(tuple(2 * gram[i][j] // gram[j][j] for j in range(rank)) for i in range(rank))
    if matrix is not None:
        given = tuple(tuple(int(x) for x in row) for row in matrix)
        problems = validate_cartan_matrix(given)
        if problems:
            raise ValueError("invalid Cartan matrix: " + "; ".join(problems))
        if given != cartan:
            raise ValueError(f"matrix {given} is not the Cartan matrix {cartan} of type {kind}{rank}")
    return CartanDatum(kind, rank, cartan, tuple(map(tuple, gram)))


def validate_cartan_matrix(a) -> list[str]:
    """Return a list of violated Cartan-matrix axioms (empty when valid)."""
    n = len(a)
    problems = []
    if any(len(row) != n for row in a):
        return ["matrix is not square"]
    if n > MAX_RANK:
        problems.append(f"rank {n} exceeds {MAX_RANK}")
    for i in range(n):
        if a[i][i] != 2:
            problems.append(f"diagonal entry ({i},{i}) is {a[i][i]}, not 2")
        for j in range(n):
            if i != j and a[i][j] > 0:
                problems.append(f"off-diagonal entry ({i},{j}) is positive")
            if i != j and (a[i][j] == 0) != (a[j][i] == 0):
                problems.append(f"entries ({i},{j}) and ({j},{i}) vanish asymmetrically")
    if problems:
        return problems
    # symmetrize: a[i][j] = 2 (ai,aj)/(aj,aj), so (ai,aj) = a[i][j] * l_j / 2
    lengths = [None] * n
    for start in range(n):
        if lengths[start] is not None:
            continue
        lengths[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i != j and a[i][j] != 0:
                    lj = lengths[i] * Fraction(a[j][i], a[i][j])
                    if lengths[j] is None:
                        lengths[j] = lj
                        stack.append(j)
                    elif lengths[j] != lj:
                        problems.append("matrix is not symmetrizable")
                        return problems
    sym = [[Fraction(a[i][j]) * lengths[j] / 2 for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        minor = [row[:k] for row in sym[:k]]
        if _det_q(minor) <= 0:
            problems.append("symmetrization is not positive definite")
            break
    return problems


def _det_q(m) -> Fraction:
    m = [list(map(Fraction, row)) for row in m]
    n, det = len(m), Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


@dataclass(frozen=True)
class RootSystem:
    datum: CartanDatum
    positive_roots: tuple
    heights: tuple
    simple_root_weights: tuple

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def cartan(self) -> tuple:
        return self.datum.cartan_matrix

    @property
    def name(self) -> str:
        return self.datum.name

    @property
    def highest_root(self) -> Root:
        return self.positive_roots[-1]

    def root_index(self, root: Root) -> int:
        return self._index[tuple(root)]

    def is_root(self, v) -> bool:
        v = tuple(v)
        return v in self._index or tuple(-x for x in v) in self._index

    def is_positive_root(self, v) -> bool:
        return tuple(v) in self._index

    def simple_index(self, j: int) -> int:
        """Position of alpha_j in ``positive_roots``."""
        return self._simple_pos[j]

    def root_weight(self, root: Root) -> Weight:
        """Fundamental-weight coordinates of an element of the root lattice."""
        return tuple(sum(c * self.cartan[i][j] for i, c in enumerate(root)) for j in range(self.rank))

    def pairing(self, weight: Weight, root: Root) -> int:
        """<weight, root> = weight(h_root) for a root given in simple-root coords."""
        return sum(c * m for c, m in zip(self.coroot(root), weight))

    def coroot(self, root: Root) -> tuple:
        """Coordinates of h_root in the basis of simple coroots."""
        root = tuple(root)
        key = root if root in self._index else tuple(-x for x in root)
        cv = self._coroots[key]
        return cv if key == root else tuple(-x for x in cv)

    def norm2(self, root: Root) -> int:
        g = self.datum.gram
        return sum(root[i] * g[i][j] * root[j] for i in range(self.rank) for j in range(self.rank))

    def inner(self, u, v) -> Fraction:
        """Invariant form on weights (fundamental coordinates), same scale as the Gram matrix."""
        cu, cv = self.weight_to_root_coords(u), self.weight_to_root_coords(v)
        g = self.datum.gram
        return sum(cu[i] * g[i][j] * cv[j] for i in range(self.rank) for j in range(self.rank))

    def weight_to_root_coords(self, weight: Weight) -> tuple:
        """Rational simple-root coordinates c with weight = sum c_i alpha_i."""
        inv = self._cinv
        return tuple(sum(inv[i][j] * weight[j] for j in range(self.rank)) for i in range(self.rank))

    @property
    def rho(self) -> Weight:
        return (1,) * self.rank

    @property
    def coxeter_number(self) -> int:
        return self.heights[-1] + 1


def _positive_roots(datum: CartanDatum) -> list[tuple]:
    n, a = datum.rank, datum.cartan_matrix
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                pair = sum(c * a[j][i] for j, c in enumerate(beta))  # <beta, alpha_i>
                image = tuple(c - (pair if j == i else 0) for j, c in enumerate(beta))
                if all(x >= 0 for x in image) and image not in seen:
                    seen.add(image)
                    nxt.append(image)
        frontier = nxt
    return sorted(seen, key=lambda r: (sum(r), tuple(-x for x in r)))


@lru_cache(maxsize=None)
def build_root_system(datum: CartanDatum) -> RootSystem:
    roots = _positive_roots(datum)
    n = datum.rank
    expected = _POSITIVE_COUNT[datum.type_label](n)
    if len(roots) != expected:
        raise ValueError(f"reflection closure gave {len(roots)} positive roots, expected {expected}")
    heights = tuple(sum(r) for r in roots)
    if heights[-1] != _COXETER[datum.type_label](n) - 1:
        raise ValueError("highest root height does not match the Coxeter number")
    weights = tuple(tuple(row) for row in datum.cartan_matrix)
    rs = RootSystem(datum, tuple(roots), heights, weights)
    g = datum.gram
    coroots = {}
    for r in roots:
        n2 = sum(r[i] * g[i][j] * r[j] for i in range(n) for j in range(n))
        cv = []
        for i in range(n):
            num = r[i] * g[i][i]
            if num % n2:
                raise ValueError("coroot is not integral")
            cv.append(num // n2)
        coroots[r] = tuple(cv)
    at = [[datum.cartan_matrix[j][i] for j in range(n)] for i in range(n)]
    object.__setattr__(rs, "_index", {r: k for k, r in enumerate(roots)})
    object.__setattr__(rs, "_simple_pos", [roots.index(tuple(int(i == j) for j in range(n))) for i in range(n)])
    object.__setattr__(rs, "_coroots", coroots)
    object.__setattr__(rs, "_cinv", inverse_q(at))
    return rs


def root_system(label: str) -> RootSystem:
    return build_root_system(cartan_datum(label))


def height(root: Root) -> int:
    return sum(root)


def relative_height(rs: RootSystem, lam: Weight, mu: Weight) -> int:
    """ht(lam - mu); raises :class:`NotBelow` unless lam - mu is a
    non-negative integral combination of simple roots."""
    c = rs.weight_to_root_coords(tuple(x - y for x, y in zip(lam, mu)))
    if any(x < 0 or x.denominator != 1 for x in c):
        raise NotBelow(f"{tuple(mu)} is not below {tuple(lam)}")
    return int(sum(c))


def root_coords_below(rs: RootSystem, lam: Weight, mu: Weight) -> tuple:
    """Integral simple-root coordinates of lam - mu (raises NotBelow)."""
    c = rs.weight_to_root_coords(tuple(x - y for x, y in zip(lam, mu)))
    if any(x < 0 or x.denominator != 1 for x in c):
        raise NotBelow(f"{tuple(mu)} is not below {tuple(lam)}")
    return tuple(int(x) for x in c)


def weight_congruent(lam: Weight, lam2: Weight, p: int, M: int) -> bool:
    if M < 0:
        raise ValueError("M must be non-negative")
    q = p ** M
    return all((x - y) % q == 0 for x, y in zip(lam, lam2))


def subtract_root(rs: RootSystem, weight: Weight, root: Root, times: int = 1) -> Weight:
    w = rs.root_weight(root)
    return tuple(x - times * y for x, y in zip(weight, w))


def add_root(rs: RootSystem, weight: Weight, root: Root, times: int = 1) -> Weight:
    return subtract_root(rs, weight, root, -times)
