"""Cohomology of Gamma_1(p) in SL_2(Z) with Hecke action.

Coefficients are Sym^k twisted by det^m, realised on the basis
w_j = binom(k, j) e_2^(k-j) e_1^j, which is f^(j) v for the highest weight
vector v = e_2^k (the positive root is the lower-left matrix entry, so
Gamma_1(p) sits inside K_*(p)).  With h = diag(1, p) the normalised inverse
lambda~(h) pi(h)^-1 acts on w_j as p^j.

Gamma_1(p) is free for p >= 5; its basis comes from Reidemeister-Schreier on
PSL_2(Z) = <s> * <u>.  Cocycles are inhomogeneous, determined by their values
on that basis, and extended to words by c(xy) = c(x) + x c(y).
"""
from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd

import flint

from .intlinalg import from_flint, rank_q, saturate, solve_q, to_flint
from .trunc import is_prime, vp

log = logging.getLogger(__name__)

SUPPORTED_PRIMES = (5, 7, 11, 13)

Mat2 = tuple  # ((a, b), (c, d))

S_MAT = ((0, -1), (1, 0))
U_MAT = ((0, -1), (1, 1))
IDENT = ((1, 0), (0, 1))


def mul2(x: Mat2, y: Mat2) -> Mat2:
    return ((x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
            (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]))


def det2(x: Mat2):
    return x[0][0] * x[1][1] - x[0][1] * x[1][0]


def inv2(x: Mat2) -> Mat2:
    d = det2(x)
    if d == 1:
        return ((x[1][1], -x[0][1]), (-x[1][0], x[0][0]))
    d = Fraction(d)
    return ((x[1][1] / d, -x[0][1] / d), (-x[1][0] / d, x[0][0] / d))


def neg2(x: Mat2) -> Mat2:
    return ((-x[0][0], -x[0][1]), (-x[1][0], -x[1][1]))


def as_mat2(rows) -> Mat2:
    return ((rows[0][0], rows[0][1]), (rows[1][0], rows[1][1]))


# ------------------------------------------------------------------ weights

@dataclass(frozen=True)
class ReductiveWeight:
    """lambda~ = Sym^k (x) det^m on GL_2; lambda~(diag(a, d)) = a^m d^(k+m)."""
    k: int
    m: int = 0

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be non-negative")

    def value(self, a, d) -> Fraction:
        return Fraction(a) ** self.m * Fraction(d) ** (self.k + self.m)


def kstar_membership(g, p: int) -> bool:
    if det2(g) != 1:
        raise ValueError(f"determinant of {g} is {det2(g)}, not 1")
    return g[0][0] % p == 1 % p and g[1][1] % p == 1 % p and g[1][0] % p == 0


# -------------------------------------------------------- the coefficients

def sym_power(g, k: int, rows: int | None = None, cols: int | None = None) -> list:
    """Matrix of g on Sym^k in the basis w_0..w_k (restricted to the first
    ``rows`` x ``cols`` block).  Entries are exact for rational g."""
    entries = [Fraction(x) for row in g for x in row]
    den = 1
    for x in entries:
        den = den * x.denominator // gcd(den, x.denominator)
    a, b, c, d = (int(x * den) for x in entries)
    rows = k + 1 if rows is None else min(rows, k + 1)
    cols = k + 1 if cols is None else min(cols, k + 1)
    scale = den ** k
    out = [[0] * cols for _ in range(rows)]
    for s in range(cols):
        cs = comb(k, s)
        for t in range(rows):
            acc = 0
            for i in range(max(0, t - s), min(k - s, t) + 1):
                acc += comb(k - s, i) * comb(s, t - i) * b ** i * d ** (k - s - i) * a ** (t - i) * c ** (s - t + i)
            num, dd = acc * cs, comb(k, t) * scale
            out[t][s] = num // dd if num % dd == 0 else Fraction(num, dd)
    return out


def gl2_rep(g, w: ReductiveWeight) -> list:
    dm = Fraction(det2(g)) ** w.m
    return [[x * dm for x in row] for row in sym_power(g, w.k)]


def _int_matrix(m, what: str) -> list:
    out = []
    for row in m:
        r = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise ArithmeticError(f"{what}: non-integral entry {x}")
            r.append(int(x))
        out.append(r)
    return out


# ------------------------------------------------------ Reidemeister-Schreier

def _coset_key(row, p: int) -> tuple:
    c, d = row[0] % p, row[1] % p
    alt = ((-c) % p, (-d) % p)
    return min((c, d), alt)


def _free_reduce(word: list) -> list:
    out = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return out


def _invert(word: list) -> list:
    return [(g, -e) for g, e in reversed(word)]


def _sl2_to_su(g: Mat2) -> list:
    """A word in the letters 's', 'u' equal to g in PSL_2(Z)."""
    (a, b), (c, d) = g
    prefix = []
    while c != 0:
        q = a // c
        # g = T^q S g'  with g' = S^-1 T^-q g
        a, b = a - q * c, b - q * d
        prefix.append(("T", q))
        prefix.append(("S", 1))
        a, b, c, d = c, d, -a, -b
    # now g' = +-[[1, x], [0, 1]] up to sign, i.e. T^(x a)
    prefix.append(("T", b * a))
    letters = []
    for sym, q in prefix:
        if sym == "S":
            letters.append("s")
        elif q > 0:
            letters.extend(["s", "u"] * q)
        elif q < 0:
            letters.extend(["u", "u", "s"] * (-q))
    return letters


class CongruenceGroup:
    """Gamma_1(p) with a free basis and a rewriting map into that basis."""

    def __init__(self, p: int, generators: tuple, rewriter=None):
        self.p = p
        self.generators = tuple(generators)
        self._rewriter = rewriter

    @property
    def rank(self) -> int:
        return len(self.generators)

    def contains(self, g) -> bool:
        return det2(g) == 1 and kstar_membership(g, self.p)

    def word(self, g) -> list:
        if self._rewriter is None:
            raise ValueError("no rewriting map for a user-supplied generator set")
        return self._rewriter(g)

    def evaluate(self, word) -> Mat2:
        out = IDENT
        for j, e in word:
            x = self.generators[j] if e > 0 else inv2(self.generators[j])
            out = mul2(out, x)
        return out


def euler_rank(p: int) -> int:
    """Free rank 1 - chi, chi = -[SL_2(Z) : Gamma_1(p)] / 12 (Gamma_1(p) has no -1)."""
    index = p * p - 1
    if (index) % 12:
        raise ArithmeticError("index not divisible by 12")
    return 1 + index // 12


@lru_cache(maxsize=None)
def free_generators(p: int) -> CongruenceGroup:
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"p = {p} is not supported (choose from {SUPPORTED_PRIMES})")
    letters = {"s": S_MAT, "u": U_MAT}
    start = _coset_key((0, 1), p)
    rep = {start: IDENT}
    tree = set()
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for a in ("s", "u"):
            g = mul2(rep[x], letters[a])
            y = _coset_key(g[1], p)
            if y not in rep:
                rep[y] = g
                tree.add((x, a))
                queue.append(y)
    n = len(rep)
    if n != (p * p - 1) // 2:
        raise ArithmeticError(f"found {n} cosets, expected {(p * p - 1) // 2}")

    def act(x, a):
        return _coset_key(mul2(rep[x], letters[a])[1], p)

    schreier = [(x, a) for x in sorted(rep) for a in ("s", "u")]
    defs: dict = {y: [] for y in tree}

    def expand(word):
        out = []
        for y, e in word:
            if y in defs:
                sub = expand(defs[y])
                out.extend(sub if e > 0 else _invert(sub))
            else:
                out.append((y, e))
        return _free_reduce(out)

    relations = []
    seen = set()
    for x in sorted(rep):
        if x not in seen:
            xs = act(x, "s")
            if xs == x:
                raise ArithmeticError("coset fixed by s: the group has torsion")
            seen.update((x, xs))
            relations.append([((x, "s"), 1), ((xs, "s"), 1)])
    seen = set()
    for x in sorted(rep):
        if x not in seen:
            x1 = act(x, "u")
            x2 = act(x1, "u")
            if x1 == x:
                raise ArithmeticError("coset fixed by u: the group has torsion")
            seen.update((x, x1, x2))
            relations.append([((x, "u"), 1), ((x1, "u"), 1), ((x2, "u"), 1)])
    for rel in relations:
        w = expand(rel)
        counts: dict = {}
        for y, _ in w:
            counts[y] = counts.get(y, 0) + 1
        pick = next((k for k, (y, _) in enumerate(w) if counts[y] == 1), None)
        if pick is None:
            raise ArithmeticError("relation cannot be used to eliminate a generator")
        y, e = w[pick]
        before, after = w[:pick], w[pick + 1:]
        # before y^e after = 1
        sol = _invert(before) + _invert(after) if e > 0 else after + before
        defs[y] = _free_reduce(sol)
    alive = [y for y in schreier if y not in defs]
    if len(alive) != euler_rank(p):
        raise ArithmeticError(f"free rank {len(alive)} disagrees with the Euler characteristic")
    position = {y: j for j, y in enumerate(alive)}

    def schreier_matrix(y):
        x, a = y
        g = mul2(mul2(rep[x], letters[a]), inv2(rep[act(x, a)]))
        if g[0][0] % p != 1:
            g = neg2(g)
        return g

    gens = tuple(schreier_matrix(y) for y in alive)
    for g in gens:
        if not kstar_membership(g, p):
            raise ArithmeticError(f"Schreier generator {g} is not in Gamma_1({p})")

    def rewrite(g) -> list:
        g = as_mat2(g)
        if det2(g) != 1 or not kstar_membership(g, p):
            raise ValueError(f"{g} is not in Gamma_1({p})")
        x = start
        word = []
        for a in _sl2_to_su(g):
            word.append(((x, a), 1))
            x = act(x, a)
        if x != start:
            raise ArithmeticError("coset walk did not return to the trivial coset")
        out = [(position[y], e) for y, e in expand(word)]
        return out

    group = CongruenceGroup(p, gens, rewrite)
    return group


def load_generators(path: str, p: int) -> CongruenceGroup:
    """Generators from a text file, one matrix per line as 'a b c d'."""
    gens = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected four integers")
            a, b, c, d = map(int, parts)
            g = ((a, b), (c, d))
            if det2(g) != 1 or not kstar_membership(g, p):
                raise ValueError(f"{path}:{lineno}: {g} is not in Gamma_1({p})")
            gens.append(g)
    if not gens:
        raise ValueError(f"{path}: no generators")
    return CongruenceGroup(p, tuple(gens))


# -------------------------------------------------------------- Hecke data

def _upper_key(g, p: int) -> int:
    return g[0][1] % p


@dataclass
class HeckeSetup:
    group: CongruenceGroup
    h: Mat2
    reps: list
    perm: list  # perm[j][i] = eta_j(i)
    rho: list  # rho[j][i] = rho_i(eta_j) as a matrix
    rho_words: list  # the same as free words

    @property
    def d(self) -> int:
        return len(self.reps)


def _orbit_keys(group: CongruenceGroup) -> set:
    p = group.p
    seen = {_upper_key(IDENT, p): IDENT}
    queue = deque([IDENT])
    moves = list(group.generators) + [inv2(g) for g in group.generators]
    while queue:
        g = queue.popleft()
        for x in moves:
            y = mul2(g, x)
            key = _upper_key(y, p)
            if key not in seen:
                seen[key] = y
                queue.append(y)
    return set(seen)


def coset_reps(group: CongruenceGroup, shuffle: int | None = None) -> HeckeSetup:
    """Representatives of (h^-1 Gamma h cap Gamma) \\ Gamma for h = diag(1, p).

    The default representatives are [[1, j], [0, 1]]; with ``shuffle`` a seeded
    permutation and left multiplication by elements of h^-1 Gamma h cap Gamma
    give a second, independent system.
    """
    p = group.p
    h = ((1, 0), (0, p))
    keys = _orbit_keys(group)
    if len(keys) != p:
        raise ArithmeticError(f"orbit has {len(keys)} cosets, expected {p}")
    reps = [((1, j), (0, 1)) for j in range(p)]
    if shuffle is not None:
        rng = random.Random(shuffle)
        rng.shuffle(reps)
        small = [((1, p), (0, 1)), ((1, 0), (p, 1)), ((1 + p, -p), (p, 1 - p))]
        new = []
        for g in reps:
            delta = IDENT
            for _ in range(rng.randint(1, 3)):
                x = rng.choice(small)
                delta = mul2(delta, x if rng.random() < 0.5 else inv2(x))
            new.append(mul2(delta, g))
        reps = new
    for i, a in enumerate(reps):
        for b in reps[i + 1:]:
            if _upper_key(mul2(a, inv2(b)), p) == 0:
                raise ArithmeticError("coset representatives are not distinct")
    if {_upper_key(g, p) for g in reps} != keys:
        raise ArithmeticError("coset representatives are incomplete")
    by_key = {_upper_key(g, p): i for i, g in enumerate(reps)}
    hinv = inv2(h)
    perm, rho, words = [], [], []
    for eta in group.generators:
        pj, rj, wj = [], [], []
        for gi in reps:
            j = by_key[_upper_key(mul2(gi, eta), p)]
            x = mul2(mul2(h, mul2(mul2(gi, eta), inv2(reps[j]))), hinv)
            if any(Fraction(v).denominator != 1 for row in x for v in row):
                raise ArithmeticError("twist is not integral")
            x = tuple(tuple(int(v) for v in row) for row in x)
            if not group.contains(x):
                raise ArithmeticError(f"twist {x} is not in Gamma")
            pj.append(j)
            rj.append(x)
            wj.append(group.word(x))
        if sorted(pj) != list(range(p)):
            raise ArithmeticError("eta does not permute the cosets")
        perm.append(pj)
        rho.append(rj)
        words.append(wj)
    return HeckeSetup(group, h, reps, perm, rho, words)


# ------------------------------------------------------- cocycle machinery

class Coefficients:
    """A Gamma-module given by integer matrices on Z^n (optionally mod slots)."""

    def __init__(self, k: int, p: int):
        self.k, self.p = k, p
        self.n = k + 1
        self._cache: dict = {}

    def matrix(self, g) -> flint.fmpz_mat:
        g = as_mat2(g)
        hit = self._cache.get(g)
        if hit is None:
            hit = to_flint(_int_matrix(sym_power(g, self.k), "pi(gamma)"))
            self._cache[g] = hit
        return hit


def fox_matrices(coeff: Coefficients, group: CongruenceGroup, word) -> list:
    """F_j with c(word) = sum_j F_j c(x_j)."""
    n = coeff.n
    F = [flint.fmpz_mat(n, n) for _ in range(group.rank)]
    prefix = flint.fmpz_mat([[int(i == j) for j in range(n)] for i in range(n)])
    for j, e in word:
        if e > 0:
            F[j] += prefix
            prefix = prefix * coeff.matrix(group.generators[j])
        else:
            prefix = prefix * coeff.matrix(inv2(group.generators[j]))
            F[j] -= prefix
    return F


def normalized_inverses(setup: HeckeSetup, w: ReductiveWeight, normalized: bool = True) -> list:
    """lambda~(h) pi~(h gamma_i)^-1 for each representative (rational if not normalized)."""
    a, d = setup.h[0][0], setup.h[1][1]
    scale = w.value(a, d) if normalized else Fraction(1)
    out = []
    for gi in setup.reps:
        m = gl2_rep(inv2(mul2(setup.h, gi)), w)
        out.append([[scale * x for x in row] for row in m])
    return out


def hecke_on_cocycles(setup: HeckeSetup, w: ReductiveWeight) -> list:
    """Integer matrix of the normalised operator on Z^1 = M^g (blocks indexed by generators)."""
    group = setup.group
    coeff = Coefficients(w.k, group.p)
    n, g = coeff.n, group.rank
    N = [to_flint(_int_matrix(m, "normalised Hecke coefficient")) for m in normalized_inverses(setup, w)]
    big = [[0] * (g * n) for _ in range(g * n)]
    for a in range(g):
        acc = [flint.fmpz_mat(n, n) for _ in range(g)]
        for i in range(setup.d):
            F = fox_matrices(coeff, group, setup.rho_words[a][i])
            for j in range(g):
                acc[j] += N[i] * F[j]
        for j in range(g):
            blk = from_flint(acc[j])
            for r in range(n):
                big[a * n + r][j * n:(j + 1) * n] = blk[r]
    return big


def unnormalized_hecke_on_cocycles(setup: HeckeSetup, w: ReductiveWeight) -> list:
    """Same operator without the lambda~(h) factor, in exact rationals."""
    group = setup.group
    coeff = Coefficients(w.k, group.p)
    n, g = coeff.n, group.rank
    N = normalized_inverses(setup, w, normalized=False)
    big = [[Fraction(0)] * (g * n) for _ in range(g * n)]
    for a in range(g):
        for i in range(setup.d):
            F = [from_flint(x) for x in fox_matrices(coeff, group, setup.rho_words[a][i])]
            for j in range(g):
                for r in range(n):
                    for c in range(n):
                        big[a * n + r][j * n + c] += sum(N[i][r][t] * F[j][t][c] for t in range(n))
    return big


def coboundary_columns(group: CongruenceGroup, coeff: Coefficients) -> list:
    """Columns (as vectors in M^g) of m -> ((gamma_j - 1) m)_j."""
    n = coeff.n
    mats = [from_flint(coeff.matrix(x)) for x in group.generators]
    cols = []
    for c in range(n):
        v = []
        for m in mats:
            v.extend(m[r][c] - int(r == c) for r in range(n))
        cols.append(v)
    return cols


def _charpoly(m) -> flint.fmpz_poly:
    if not m:
        return flint.fmpz_poly([1])
    return to_flint(m).charpoly()


def poly_coeffs(poly: flint.fmpz_poly) -> list[int]:
    """Coefficients from the leading one down: [1, a_1, ..., a_n]."""
    return [int(c) for c in reversed(poly.coeffs())]


@dataclass
class H1Hecke:
    g: int
    d: int
    dim_h1: int
    dim_h0: int
    charpoly: list  # leading coefficient first
    charpoly_lattice: list | None = None
    cocycle_matrix: list = field(default=None, repr=False)
    h1_matrix: list | None = field(default=None, repr=False)


def hecke_on_h1(setup: HeckeSetup, w: ReductiveWeight, lattice_route: bool = False) -> H1Hecke:
    """Characteristic polynomial of the normalised operator on H^1(Gamma, L_k(Q_p)).

    Field route: charpoly on Z^1 divided by the charpoly on B^1 = M / M^Gamma.
    Lattice route (optional): the matrix on Z^1 / sat(B^1) over Z.
    """
    group = setup.group
    coeff = Coefficients(w.k, group.p)
    n, g = coeff.n, group.rank
    tz = hecke_on_cocycles(setup, w)
    cp_z = _charpoly(tz)
    # operator on coboundaries: (eta - 1) A m with A = sum_i N_i
    N = [_int_matrix(m, "normalised Hecke coefficient") for m in normalized_inverses(setup, w)]
    A = [[sum(Ni[r][c] for Ni in N) for c in range(n)] for r in range(n)]
    inv_rows = []
    for x in group.generators:
        m = from_flint(coeff.matrix(x))
        inv_rows.extend([[m[r][c] - int(r == c) for c in range(n)] for r in range(n)])
    ns, nullity = to_flint(inv_rows).nullspace()
    fixed = [[int(ns[r, c]) for r in range(n)] for c in range(nullity)]
    cp_a = _charpoly(A)
    if fixed:
        # A preserves M^Gamma; divide out its charpoly there
        basis = [[v[r] for v in fixed] for r in range(n)]
        image = [[sum(A[r][t] * basis[t][c] for t in range(n)) for c in range(len(fixed))] for r in range(n)]
        restricted = solve_q(basis, image)
        cp_fix = flint.fmpq_mat([[flint.fmpq(Fraction(x).numerator, Fraction(x).denominator) for x in row]
                                 for row in restricted]).charpoly()
        q_b, r_b = divmod(flint.fmpq_poly(cp_a), cp_fix)
        if r_b != 0:
            raise ArithmeticError("operator does not preserve the invariants")
        cp_b = flint.fmpz_poly([int(c) for c in q_b.coeffs()])
    else:
        cp_b = cp_a
    q, r = divmod(cp_z, cp_b)
    if r != 0:
        raise ArithmeticError("charpoly on coboundaries does not divide the charpoly on cocycles")
    dim_h0 = len(fixed)
    res = H1Hecke(g, setup.d, g * n - (n - dim_h0), dim_h0, poly_coeffs(q), cocycle_matrix=tz)
    if lattice_route:
        lq = saturate(coboundary_columns(group, coeff), g * n)
        if lq.rank != n - dim_h0:
            raise ArithmeticError("coboundary rank mismatch")
        qm = to_flint(lq.quotient)
        t = qm * to_flint(tz)
        if lq.rank and any(x != 0 for x in (t * to_flint(lq.saturated)).entries()):
            raise ArithmeticError("operator does not preserve the saturated coboundaries")
        hm = t * to_flint(lq.lift)
        res.h1_matrix = from_flint(hm)
        res.charpoly_lattice = poly_coeffs(hm.charpoly()) if hm.nrows() else [1]
    return res


def normalized_hecke_matrix(setup: HeckeSetup, w: ReductiveWeight, coefficients: str = "zp") -> H1Hecke:
    """The normalised operator on Z^1 and H^1 for coefficients "qp" or "zp"."""
    if coefficients not in ("qp", "zp"):
        raise ValueError(f"unknown coefficient choice {coefficients!r}")
    return hecke_on_h1(setup, w, lattice_route=coefficients == "zp")


# ---------------------------------------------------- truncated coefficients

def truncation_slots(k: int, r: int) -> list[int]:
    """Slot exponents r - j for the weights k - 2j with j <= min(k, r)."""
    return [r - j for j in range(min(k, r) + 1)]


def slot_action(g, k: int, r: int, p: int) -> list:
    """Integer matrix of gamma on the slots of L^[r]_k, checked to descend."""
    m = min(k, r) + 1
    blk = _int_matrix(sym_power(as_mat2(g), k, m, m), "pi(gamma)")
    for t in range(m):
        for s in range(m):
            if (blk[t][s] * p ** (r - s)) % p ** (r - t):
                raise ArithmeticError(f"gamma does not preserve the truncating submodule (entry {t},{s})")
    return blk


def h1_exponents(p: int, exps: list, actions: list) -> tuple[int, int]:
    """(v_p #H^1, v_p #H^0) for a free group acting on prod Z/p^e by integer matrices."""
    n, g = len(exps), len(actions)
    if n == 0 or sum(exps) == 0:
        return 0, 0
    rows = g * n
    big = [[0] * (n + rows) for _ in range(rows)]
    for j, m in enumerate(actions):
        for r in range(n):
            for c in range(n):
                big[j * n + r][c] = m[r][c] - int(r == c)
            big[j * n + r][n + j * n + r] = p ** exps[r]
    s = to_flint(big).snf()
    total = 0
    for i in range(rows):
        x = int(s[i, i])
        if x == 0:
            raise ArithmeticError("presentation matrix is not of full rank")
        v = vp(x, p)
        if x != p ** v:
            raise ArithmeticError("elementary divisor is not a power of p")
        total += v
    size = sum(exps)
    return total, total - (g - 1) * size


def h1_cardinality(group: CongruenceGroup, k: int, r: int) -> tuple[int, int]:
    """(v_p #H^1(Gamma, L^[r]_k), v_p #H^0)."""
    p = group.p
    exps = truncation_slots(k, r)
    if r == 0:
        return 0, 0
    actions = [slot_action(x, k, r, p) for x in group.generators]
    return h1_exponents(p, exps, actions)


# -------------------------------------------------------------- checks

def valuation_check(w: ReductiveWeight, p: int) -> bool:
    """v_p of lambda~(h) pi~(h^-1) on the weight space at height j is >= j."""
    h = ((1, 0), (0, p))
    m = gl2_rep(inv2(h), w)
    lam_h = w.value(1, p)
    for t in range(w.k + 1):
        for s in range(w.k + 1):
            x = lam_h * m[t][s]
            if x and vp(x, p) < s:
                return False
    return True


def integrality_check(setup: HeckeSetup, w: ReductiveWeight) -> bool:
    try:
        hecke_on_cocycles(setup, w)
    except ArithmeticError:
        return False
    return True


@dataclass
class AnnihilationReport:
    translates: list  # (i, passed)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.translates)


def annihilation_check(setup: HeckeSetup, w: ReductiveWeight, r: int, normalized: bool = True) -> AnnihilationReport:
    """lambda~(h) pi~(h gamma_i)^-1 maps L(Z, r) into p^r L(Z) for every i."""
    p = setup.group.p
    scale = [p ** max(r - j, 0) for j in range(w.k + 1)]
    out = []
    for i, m in enumerate(normalized_inverses(setup, w, normalized)):
        ok = True
        for row in m:
            for c, x in enumerate(row):
                if x and vp(x * scale[c], p) < r:
                    ok = False
        out.append((i, ok))
    return AnnihilationReport(out)


def free_rank_dimension_check(group: CongruenceGroup, k: int) -> bool:
    """dim H^1 = (g - 1)(k + 1) + dim H^0 from the rank of the coboundary map."""
    coeff = Coefficients(k, group.p)
    cols = coboundary_columns(group, coeff)
    mat = [[c[r] for c in cols] for r in range(len(cols[0]))]
    rk = rank_q(mat)
    n, g = coeff.n, group.rank
    dim_h0 = n - rk
    dim_h1 = g * n - rk
    return dim_h1 == (g - 1) * n + dim_h0 and (dim_h0 == (1 if k == 0 else 0))


def check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
