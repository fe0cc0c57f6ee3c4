"""Chevalley basis, Kostant Z-form and PBW straightening.

PBW monomials are triples ``(a, b, c)`` of exponent tuples standing for
``X_-^a H^b X_+^c`` where

* ``X_-^a = prod_k x_{-beta_k}^{(a_k)}`` in the fixed root order,
* ``H^b = prod_i binom(h_i, b_i)`` over the simple coroots,
* ``X_+^c = prod_k x_{beta_k}^{(c_k)}`` in the fixed root order.

Generators are ``("f", k)``, ``("e", k)`` (root vectors for -beta_k, beta_k)
and ``("h", i)`` (simple coroot).  Straightening works with exact rationals
and memoises left multiplication by a single generator.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial

from .qrep import QModule, commutator, root_vector_matrices
from .rootsys import RootSystem, Weight


def binom(z: int, k: int) -> int:
    """binom(z, k) for any integer z and k >= 0 (falling factorial / k!)."""
    if k < 0:
        return 0
    num = 1
    for t in range(k):
        num *= z - t
    return num // factorial(k)


def eval_toral(b, lam: Weight) -> int:
    out = 1
    for bi, li in zip(b, lam):
        if bi:
            out *= binom(li, bi)
    return out


# ------------------------------------------------------- structure constants

class StructureConstants:
    """Bracket table of a Chevalley basis.

    ``N[(u, v)]`` for roots u, v (simple-root coordinate tuples, either sign)
    with u + v a root gives [x_u, x_v] = N x_{u+v}.  ``coroot[u]`` gives
    [x_u, x_{-u}] = h_u in simple coroots.
    """

    def __init__(self, rs: RootSystem, N: dict, coroot: dict):
        self.rs, self.N, self.coroot = rs, N, coroot

    def roots(self):
        pos = list(self.rs.positive_roots)
        return pos + [tuple(-x for x in r) for r in pos]

    def bracket(self, u, v) -> dict:
        """Bracket of basis elements ('x', root) / ('h', i) as a dict."""
        rs = self.rs
        if u[0] == "h" and v[0] == "h":
            return {}
        if u[0] == "h":
            out = self.bracket(v, u)
            return {k: -c for k, c in out.items()}
        ru = u[1]
        if v[0] == "h":
            # [x_u, h_i] = -u(h_i) x_u
            val = rs.pairing(rs.root_weight(ru), _simple(rs.rank, v[1]))
            return {u: -val} if val else {}
        rv = v[1]
        s = tuple(x + y for x, y in zip(ru, rv))
        if not any(s):
            return {("h", i): c for i, c in enumerate(self.coroot[ru]) if c}
        if (ru, rv) in self.N:
            return {("x", s): self.N[(ru, rv)]}
        return {}

    def basis(self):
        return [("x", r) for r in self.roots()] + [("h", i) for i in range(self.rs.rank)]

    def verify(self) -> None:
        """Antisymmetry, |N| = q+1, sign symmetry and the Jacobi identity."""
        rs = self.rs
        roots = self.roots()
        for u in roots:
            for v in roots:
                s = tuple(x + y for x, y in zip(u, v))
                if rs.is_root(s):
                    n = self.N[(u, v)]
                    if self.N[(v, u)] != -n:
                        raise AssertionError(f"antisymmetry fails for {u}, {v}")
                    q = 0
                    while rs.is_root(tuple(b - (q + 1) * a for a, b in zip(u, v))):
                        q += 1
                    if abs(n) != q + 1:
                        raise AssertionError(f"|N_{u},{v}| = {abs(n)} but q+1 = {q + 1}")
                    nu, nv = tuple(-x for x in u), tuple(-x for x in v)
                    if self.N[(nu, nv)] != -n:
                        raise AssertionError(f"N_-u,-v != -N_u,v for {u}, {v}")
                elif (u, v) in self.N:
                    raise AssertionError("bracket recorded for a non-root sum")
        for u in roots:
            cv = self.coroot[u]
            if tuple(cv) != rs.coroot(u):
                raise AssertionError(f"[x_u, x_-u] != h_u for {u}")
        basis = self.basis()

        def br(x: dict, y: dict) -> dict:
            out: dict = {}
            for a, ca in x.items():
                for b, cb in y.items():
                    for k, v in self.bracket(a, b).items():
                        out[k] = out.get(k, 0) + ca * cb * v
            return {k: v for k, v in out.items() if v}

        for i, a in enumerate(basis):
            for j, b in enumerate(basis):
                if j <= i:
                    continue
                ab = br({a: 1}, {b: 1})
                for c in basis[j + 1:]:
                    tot: dict = {}
                    for part in (br({a: 1}, br({b: 1}, {c: 1})),
                                 br({b: 1}, br({c: 1}, {a: 1})),
                                 br({c: 1}, ab)):
                        for k, v in part.items():
                            tot[k] = tot.get(k, 0) + v
                    if any(tot.values()):
                        raise AssertionError(f"Jacobi fails on {a}, {b}, {c}")


def _simple(n: int, i: int) -> tuple:
    return tuple(int(j == i) for j in range(n))


@lru_cache(maxsize=None)
def build_structure_constants(rs: RootSystem) -> StructureConstants:
    """Chevalley basis read off from the adjoint representation.

    The adjoint module is built from simple generators, the remaining root
    vectors are defined along extraspecial pairs with positive sign, and every
    bracket is then measured as a matrix commutator.
    """
    theta = rs.root_weight(rs.highest_root)
    adj = QModule(rs, theta)
    n_roots = len(rs.positive_roots)
    if adj.dim != 2 * n_roots + rs.rank:
        raise AssertionError("adjoint module has the wrong dimension")
    Es, Fs, Hs = adj.dense()
    pos, neg = root_vector_matrices(rs, Es, Fs)
    mats = {}
    for k, r in enumerate(rs.positive_roots):
        mats[r] = pos[k]
        mats[tuple(-x for x in r)] = neg[k]
    roots = list(mats)
    diag_h = [[Hs[i][d][d] for d in range(adj.dim)] for i in range(rs.rank)]
    N, coroot = {}, {}
    for u in roots:
        for v in roots:
            c = commutator(mats[u], mats[v])
            s = tuple(x + y for x, y in zip(u, v))
            if not any(s):
                if any(c[i][j] for i in range(adj.dim) for j in range(adj.dim) if i != j):
                    raise AssertionError("[x_u, x_-u] is not diagonal")
                coroot[u] = _solve_diagonal(diag_h, [c[d][d] for d in range(adj.dim)])
            elif s in mats:
                target = mats[s]
                ratio = None
                for i in range(adj.dim):
                    for j in range(adj.dim):
                        if target[i][j]:
                            ratio = Fraction(c[i][j]) / Fraction(target[i][j])
                            break
                    if ratio is not None:
                        break
                if ratio is None or ratio.denominator != 1:
                    raise AssertionError(f"non-integral structure constant for {u}, {v}")
                if any(c[i][j] != ratio * target[i][j] for i in range(adj.dim) for j in range(adj.dim)):
                    raise AssertionError(f"[x_u, x_v] is not proportional to x_(u+v) for {u}, {v}")
                N[(u, v)] = int(ratio)
            elif any(x for row in c for x in row):
                raise AssertionError(f"[x_u, x_v] nonzero although u+v is not a root ({u}, {v})")
    sc = StructureConstants(rs, N, coroot)
    sc.verify()
    return sc


def _solve_diagonal(h_diags, target) -> tuple:
    n = len(h_diags)
    from .intlinalg import solve_q
    a = [[h_diags[i][d] for i in range(n)] for d in range(len(target))]
    sol = solve_q(a, [[t] for t in target])
    if any(x[0].denominator != 1 for x in sol):
        raise AssertionError("coroot is not integral in simple coroots")
    return tuple(int(x[0]) for x in sol)


# -------------------------------------------------------------- the algebra

Mono = tuple  # (a, b, c)


class UElement:
    """Sparse combination of PBW monomials with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def __add__(self, other: "UElement") -> "UElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return UElement(out)

    def __sub__(self, other: "UElement") -> "UElement":
        return self + other.scale(-1)

    def scale(self, c) -> "UElement":
        return UElement({k: c * v for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, UElement) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"UElement({self.sorted_terms()})"

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def is_integral(self) -> bool:
        return all(Fraction(v).denominator == 1 for v in self.terms.values())

    def integral(self) -> "UElement":
        if not self.is_integral():
            raise ArithmeticError("non-integral coefficient")
        return UElement({k: int(v) for k, v in self.terms.items()})

    def max_toral_length(self) -> int:
        return max((sum(b) for (_, b, _) in self.terms), default=0)


def _add_into(acc: dict, src: dict, coeff=1) -> None:
    for k, v in src.items():
        acc[k] = acc.get(k, 0) + coeff * v


class KostantForm:
    """Straightening engine for one root system."""

    def __init__(self, rs: RootSystem, sc: StructureConstants | None = None):
        self.rs = rs
        self.sc = sc or build_structure_constants(rs)
        self.s = len(rs.positive_roots)
        self.zero_a = (0,) * self.s
        self.zero_b = (0,) * rs.rank
        roots = rs.positive_roots
        self._pair = [[rs.pairing(rs.root_weight(r), _simple(rs.rank, i)) for i in range(rs.rank)]
                      for r in roots]  # beta_k(h_i)
        self._neg_N = {}
        self._pos_N = {}
        for j, u in enumerate(roots):
            for k, v in enumerate(roots):
                s = tuple(x + y for x, y in zip(u, v))
                if rs.is_positive_root(s):
                    t = rs.root_index(s)
                    self._pos_N[(j, k)] = (self.sc.N[(u, v)], t)
                    self._neg_N[(j, k)] = (self.sc.N[(tuple(-x for x in u), tuple(-x for x in v))], t)
        # [x_{beta_j}, x_{-beta_k}] as a list of (coeff, generator)
        self._mixed = {}
        for j, u in enumerate(roots):
            for k, v in enumerate(roots):
                if j == k:
                    self._mixed[(j, k)] = [(c, ("h", i)) for i, c in enumerate(self.sc.coroot[u]) if c]
                    continue
                d = tuple(x - y for x, y in zip(u, v))
                nv = tuple(-x for x in v)
                if rs.is_positive_root(d):
                    self._mixed[(j, k)] = [(self.sc.N[(u, nv)], ("e", rs.root_index(d)))]
                elif rs.is_positive_root(tuple(-x for x in d)):
                    self._mixed[(j, k)] = [(self.sc.N[(u, nv)], ("f", rs.root_index(tuple(-x for x in d))))]
                else:
                    self._mixed[(j, k)] = []
        self._memo_nil: dict = {}
        self._memo_pos: dict = {}

    # -- nilpotent blocks: x_{+-beta_j} * X^v inside U^- or U^+
    def _lmul_nil(self, sign: str, j: int, v: tuple) -> dict:
        key = (sign, j, v)
        hit = self._memo_nil.get(key)
        if hit is not None:
            return hit
        first = next((i for i, x in enumerate(v) if x), None)
        out: dict = {}
        if first is None or j < first:
            w = list(v)
            w[j] = 1
            out[tuple(w)] = Fraction(1)
        elif j == first:
            w = list(v)
            w[j] += 1
            out[tuple(w)] = Fraction(w[j])
        else:
            n = v[first]
            rest = list(v)
            rest[first] = 0
            rest = tuple(rest)
            # y^(n) (x R)
            for w, c in self._lmul_nil(sign, j, rest).items():
                if any(w[:first]) or w[first]:
                    raise AssertionError("ordering invariant broken")
                w2 = list(w)
                w2[first] = n
                out[tuple(w2)] = out.get(tuple(w2), 0) + c
            table = self._neg_N if sign == "f" else self._pos_N
            hit2 = table.get((j, first))
            if hit2 is not None:
                nconst, z = hit2
                # (N/n!) sum_k y^k z y^(n-1-k) R
                for k in range(n):
                    m = n - 1 - k
                    start = list(rest)
                    start[first] = m
                    cur = {tuple(start): Fraction(factorial(m))}
                    cur = self._nil_apply(sign, z, cur)
                    for _ in range(k):
                        cur = self._nil_apply(sign, first, cur)
                    _add_into(out, cur, Fraction(nconst, factorial(n)))
        out = {k: c for k, c in out.items() if c}
        self._memo_nil[key] = out
        return out

    def _nil_apply(self, sign, j, vecs: dict) -> dict:
        out: dict = {}
        for v, c in vecs.items():
            _add_into(out, self._lmul_nil(sign, j, v), c)
        return out

    # -- H shift: prod binom(h_i - s_i, b_i) expanded in binom(h_i, t)
    def _shift_toral(self, b: tuple, shift: tuple) -> dict:
        choices = []
        for bi, si in zip(b, shift):
            opts = []
            for t in range(bi + 1):
                coef = binom(-si, bi - t)
                if coef:
                    opts.append((t, coef))
            choices.append(opts)
        out: dict = {}
        for combo in product(*choices):
            key = tuple(t for t, _ in combo)
            c = 1
            for _, cc in combo:
                c *= cc
            out[key] = out.get(key, 0) + c
        return out

    # -- single generator on a PBW monomial
    def lmul(self, g: tuple, mono: Mono) -> dict:
        kind, j = g
        a, b, c = mono
        if kind == "f":
            return {(w, b, c): x for w, x in self._lmul_nil("f", j, a).items()}
        if kind == "h":
            s = -sum(ak * self._pair[k][j] for k, ak in enumerate(a) if ak)
            out = {}
            bj = b[j]
            up = list(b)
            up[j] += 1
            out[(a, tuple(up), c)] = Fraction(bj + 1)
            if bj + s:
                out[(a, b, c)] = Fraction(bj + s)
            return out
        if kind == "e":
            return self._lmul_pos(j, mono)
        raise ValueError(f"unknown generator {g!r}")

    def _lmul_pos(self, j: int, mono: Mono) -> dict:
        hit = self._memo_pos.get((j, mono))
        if hit is not None:
            return hit
        a, b, c = mono
        out: dict = {}
        first = next((i for i, x in enumerate(a) if x), None)
        if first is None:
            shifts = self._shift_toral(b, tuple(self._pair[j]))
            pos = self._lmul_nil("e", j, c)
            for bb, cb in shifts.items():
                for cc, cp in pos.items():
                    key = (a, bb, cc)
                    out[key] = out.get(key, 0) + cb * cp
        else:
            n = a[first]
            rest = list(a)
            rest[first] = 0
            rest = tuple(rest)
            inner = self._lmul_pos(j, (rest, b, c))
            cur = {k: v for k, v in inner.items()}
            for _ in range(n):
                cur = self._apply_gen(("f", first), cur)
            _add_into(out, cur, Fraction(1, factorial(n)))
            bracket = self._mixed[(j, first)]
            if bracket:
                for k in range(n):
                    m = n - 1 - k
                    start = list(rest)
                    start[first] = m
                    base = {(tuple(start), b, c): Fraction(factorial(m))}
                    mid: dict = {}
                    for coeff, gen in bracket:
                        _add_into(mid, self._apply_gen(gen, base), coeff)
                    for _ in range(k):
                        mid = self._apply_gen(("f", first), mid)
                    _add_into(out, mid, Fraction(1, factorial(n)))
        out = {k: v for k, v in out.items() if v}
        self._memo_pos[(j, mono)] = out
        return out

    def _apply_gen(self, g: tuple, elem: dict) -> dict:
        out: dict = {}
        for mono, c in elem.items():
            _add_into(out, self.lmul(g, mono), c)
        return out

    # -- public helpers
    def one(self) -> UElement:
        return UElement({(self.zero_a, self.zero_b, self.zero_a): 1})

    def monomial(self, a=None, b=None, c=None) -> UElement:
        return UElement({(tuple(a or self.zero_a), tuple(b or self.zero_b), tuple(c or self.zero_a)): 1})

    def apply_generator(self, g: tuple, x: UElement, power: int = 1, divided: bool = False) -> UElement:
        cur = dict(x.terms)
        for _ in range(power):
            cur = self._apply_gen(g, cur)
        if divided:
            cur = {k: Fraction(v, factorial(power)) for k, v in cur.items()}
        return UElement(cur)

    def left_multiply(self, left: UElement, right: UElement) -> UElement:
        """left * right, both in PBW form, by expanding ``left`` into generators."""
        total: dict = {}
        for (a, b, c), coeff in left.terms.items():
            cur = dict(right.terms)
            den = 1
            for k in reversed(range(self.s)):
                for _ in range(c[k]):
                    cur = self._apply_gen(("e", k), cur)
                den *= factorial(c[k])
            for i in reversed(range(self.rs.rank)):
                for t in range(b[i]):
                    hcur = self._apply_gen(("h", i), cur)
                    _add_into(hcur, cur, -t)
                    cur = hcur
                den *= factorial(b[i])
            for k in reversed(range(self.s)):
                for _ in range(a[k]):
                    cur = self._apply_gen(("f", k), cur)
                den *= factorial(a[k])
            _add_into(total, cur, Fraction(coeff, den))
        return UElement(total)

    def straighten(self, factors) -> UElement:
        """Product of a sequence whose items are generators ``(kind, j)``,
        divided powers ``(kind, j, n)`` or :class:`UElement` values."""
        cur = self.one()
        for f in reversed(list(factors)):
            if isinstance(f, UElement):
                cur = self.left_multiply(f, cur)
            elif len(f) == 3:
                cur = self.apply_generator((f[0], f[1]), cur, f[2], divided=True)
            else:
                cur = self.apply_generator(tuple(f), cur)
        return UElement({k: (int(v) if Fraction(v).denominator == 1 else Fraction(v))
                         for k, v in cur.terms.items()})

    def divided_power_commute(self, k_root: int, k: int, a) -> UElement:
        """x_{beta}^(k) X_-^a with every coefficient certified integral and
        every toral block of length at most k."""
        start = self.monomial(a=a)
        res = self.apply_generator(("e", k_root), start, k, divided=True)
        if not res.is_integral():
            bad = [v for v in res.terms.values() if Fraction(v).denominator != 1]
            raise ArithmeticError(f"non-integral coefficient {bad[0]} in divided-power commutation")
        if res.max_toral_length() > k:
            raise ArithmeticError("toral block longer than the divided power")
        return res.integral()

    # -- action on a Verma module: X_-^a v_lambda
    def verma_apply(self, g: tuple, vec: dict, lam: Weight) -> dict:
        """Generator on a Verma vector {a: coeff} (e kills v, H evaluates)."""
        out: dict = {}
        for a, coeff in vec.items():
            for (a2, b2, c2), x in self.lmul(g, (a, self.zero_b, self.zero_a)).items():
                if any(c2):
                    continue
                val = x * eval_toral(b2, lam) if any(b2) else x
                if val:
                    out[a2] = out.get(a2, 0) + coeff * val
        return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def kostant_form(rs: RootSystem) -> KostantForm:
    return KostantForm(rs)


def divided_power_commute(rs: RootSystem, root, k: int, a) -> UElement:
    kf = kostant_form(rs)
    return kf.divided_power_commute(rs.root_index(tuple(root)), k, tuple(a))


def straighten(rs: RootSystem, factors) -> UElement:
    return kostant_form(rs).straighten(factors)


_TOKEN = re.compile(r"^([efh])(\d+)(?:\^\((\d+)\))?$")


def parse_expression(rs: RootSystem, expr: str) -> list:
    """Parse tokens like ``e1 f2 h1 e3^(2)``; indices count positive roots
    (for e/f) or simple coroots (for h) from 1."""
    factors = []
    for tok in expr.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"cannot parse token {tok!r}")
        kind, idx, power = m.group(1), int(m.group(2)) - 1, m.group(3)
        limit = rs.rank if kind == "h" else len(rs.positive_roots)
        if not 0 <= idx < limit:
            raise ValueError(f"index out of range in {tok!r}")
        if power is not None:
            if kind == "h":
                raise ValueError("divided powers apply to root vectors only")
            factors.append((kind, idx, int(power)))
        else:
            factors.append((kind, idx))
    return factors
