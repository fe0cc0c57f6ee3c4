"""Integral highest-weight modules L_lambda(Z) = V_lambda(Z) / U_lambda(Z).

The Verma lattice V_lambda(Z) has the Z-basis X_-^a v_lambda.  Its maximal
submodule is built weight by weight from

    U(mu) = sum_i f_i U(mu + alpha_i)  +  Q f_i^(m_i+1) v   (if mu = lambda - (m_i+1) alpha_i)

and then saturated in V_lambda(Z, mu).  The quotient coordinates come from the
row Hermite form of the annihilator of U_lambda(Z, mu), so every basis is
reproducible.  Freudenthal and Weyl formulas are kept here as independent
oracles; nothing in the construction calls them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod

from .intlinalg import LatticeQuotient, det_bareiss, hnf_rows, identity, matmul, saturate, zeros
from .pbw import KostantForm, kostant_form
from .rootsys import NotBelow, RootSystem, Weight, relative_height, root_coords_below

DEFAULT_DIM_CAP = 3000


class DimensionCapExceeded(ValueError):
    def __init__(self, dim: int, cap: int):
        super().__init__(f"module has Weyl dimension {dim}, above the cap {cap}")
        self.dim, self.cap = dim, cap


# ------------------------------------------------------------------ oracles

def weyl_dimension(rs: RootSystem, lam: Weight) -> int:
    num = den = 1
    shifted = tuple(x + 1 for x in lam)
    for r in rs.positive_roots:
        num *= rs.pairing(shifted, r)
        den *= rs.pairing(rs.rho, r)
    if num % den:
        raise ArithmeticError("Weyl dimension is not an integer")
    return num // den


def dominant_conjugate(rs: RootSystem, mu: Weight) -> Weight:
    mu = list(mu)
    while True:
        i = next((j for j, x in enumerate(mu) if x < 0), None)
        if i is None:
            return tuple(mu)
        m = mu[i]
        a = rs.simple_root_weights[i]
        mu = [x - m * y for x, y in zip(mu, a)]


def in_weight_hull(rs: RootSystem, lam: Weight, mu: Weight) -> bool:
    """Whether mu is a weight of L_lambda (dominant conjugate below lambda)."""
    try:
        root_coords_below(rs, lam, dominant_conjugate(rs, mu))
    except NotBelow:
        return False
    return True


def freudenthal_multiplicities(rs: RootSystem, lam: Weight) -> dict:
    """Weight multiplicities of L_lambda by Freudenthal's recursion."""
    lam = tuple(lam)
    rho = rs.rho
    lr = tuple(x + y for x, y in zip(lam, rho))
    top = rs.inner(lr, lr)
    roots = [(r, rs.root_weight(r)) for r in rs.positive_roots]
    mult = {lam: 1}
    layer = [lam]
    while layer:
        cand = set()
        for mu in layer:
            for i in range(rs.rank):
                nu = tuple(x - y for x, y in zip(mu, rs.simple_root_weights[i]))
                if nu not in mult and in_weight_hull(rs, lam, nu):
                    cand.add(nu)
        nxt = []
        for mu in sorted(cand, reverse=True):
            total = Fraction(0)
            for _, rw in roots:
                j = 1
                while True:
                    nu = tuple(x + j * y for x, y in zip(mu, rw))
                    if nu not in mult:
                        if not in_weight_hull(rs, lam, nu):
                            break
                    else:
                        total += mult[nu] * rs.inner(nu, rw)
                    j += 1
            mr = tuple(x + y for x, y in zip(mu, rho))
            value = 2 * total / (top - rs.inner(mr, mr))
            if value.denominator != 1:
                raise ArithmeticError(f"Freudenthal gave a non-integer multiplicity at {mu}")
            if value:
                mult[mu] = int(value)
                nxt.append(mu)
        layer = nxt
    return mult


# ---------------------------------------------------------- Verma weights

def kostant_partitions(rs: RootSystem, coords) -> list[tuple]:
    """All a with sum_k a_k beta_k = coords, in decreasing lexicographic order."""
    roots = rs.positive_roots
    s = len(roots)
    out = []

    def rec(k, rest, acc):
        if not any(rest):
            out.append(tuple(acc) + (0,) * (s - k))
            return
        if k == s:
            return
        r = roots[k]
        top = min((x // y for x, y in zip(rest, r) if y), default=0)
        for n in range(top, -1, -1):
            rec(k + 1, tuple(x - n * y for x, y in zip(rest, r)), acc + [n])

    rec(0, tuple(coords), [])
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class VermaWeightSpace:
    lam: Weight
    mu: Weight
    monomials: tuple

    @property
    def dim(self) -> int:
        return len(self.monomials)


def verma_weight_basis(rs: RootSystem, lam: Weight, mu: Weight) -> VermaWeightSpace:
    coords = root_coords_below(rs, lam, mu)
    return VermaWeightSpace(tuple(lam), tuple(mu), tuple(kostant_partitions(rs, coords)))


@dataclass(frozen=True)
class MaximalSubmoduleLattice:
    lam: Weight
    mu: Weight
    basis_matrix: tuple  # columns span U_lambda(Z, mu) inside V_lambda(Z, mu)
    verma_dim: int

    @property
    def rank(self) -> int:
        return len(self.basis_matrix[0]) if self.basis_matrix and self.basis_matrix[0] else 0


# ------------------------------------------------------------- the lattice

class WeightSpaceData:
    __slots__ = ("mu", "ht", "monomials", "index", "quotient", "u_basis")

    def __init__(self, mu, ht, monomials, quotient: LatticeQuotient, u_basis):
        self.mu, self.ht = mu, ht
        self.monomials = monomials
        self.index = {a: i for i, a in enumerate(monomials)}
        self.quotient = quotient
        self.u_basis = u_basis  # list of integer vectors (saturated U basis)

    @property
    def mult(self) -> int:
        return self.quotient.quotient_rank

    def lift(self, j: int) -> list[int]:
        return [row[j] for row in self.quotient.lift]

    def project(self, vec) -> list:
        return [sum(c * v for c, v in zip(row, vec)) for row in self.quotient.quotient]


class HighestWeightLattice:
    """L_lambda(Z) weight space by weight space, down to ``max_height``.

    ``spaces`` holds every mu with 0 <= ht_lambda(mu) <= max_height and
    nonzero multiplicity; ``complete`` says whether the whole module is there.
    """

    def __init__(self, rs: RootSystem, lam: Weight, max_height: int | None = None,
                 dim_cap: int = DEFAULT_DIM_CAP, kf: KostantForm | None = None):
        lam = tuple(int(x) for x in lam)
        if len(lam) != rs.rank:
            raise ValueError(f"weight {lam} has the wrong length for {rs.name}")
        if any(x < 0 for x in lam):
            raise ValueError(f"weight {lam} is not dominant")
        self.rs, self.lam = rs, lam
        self.kf = kf or kostant_form(rs)
        if max_height is None:
            wd = weyl_dimension(rs, lam)
            if wd > dim_cap:
                raise DimensionCapExceeded(wd, dim_cap)
        self.max_height = max_height
        self.spaces: dict = {}
        self._full: set = set()  # weights where U = V (L vanishes) inside the cone
        self._blocks: dict = {}
        self.complete = False
        self._build()

    # -- construction
    def _f_simple(self, i: int, vec: dict) -> dict:
        return self.kf.verma_apply(("f", self.rs.simple_index(i)), vec, self.lam)

    def _build(self):
        rs, lam = self.rs, self.lam
        n = rs.rank
        gens = {}
        for i in range(n):
            a = [0] * len(rs.positive_roots)
            a[rs.simple_index(i)] = lam[i] + 1
            gmu = tuple(x - (lam[i] + 1) * y for x, y in zip(lam, rs.simple_root_weights[i]))
            gens.setdefault(gmu, []).append(tuple(a))
        top = WeightSpaceData(lam, 0, ((0,) * len(rs.positive_roots),), saturate([], 1), [])
        self.spaces[lam] = top
        u_cols: dict = {lam: []}
        layer = [lam]
        ht = 0
        while True:
            ht += 1
            if self.max_height is not None and ht > self.max_height:
                break
            cand = set()
            for mu in layer:
                for i in range(n):
                    cand.add(tuple(x - y for x, y in zip(mu, rs.simple_root_weights[i])))
            new_layer = []
            for mu in sorted(cand, reverse=True):
                vw = verma_weight_basis(rs, lam, mu)
                index = {a: k for k, a in enumerate(vw.monomials)}
                cols = []
                for i in range(n):
                    up = tuple(x + y for x, y in zip(mu, rs.simple_root_weights[i]))
                    if up in self.spaces:
                        src = self.spaces[up]
                        vecs = [dict(zip(src.monomials, v)) for v in u_cols[up]]
                    else:
                        # a weight of the Verma cone that never showed up next to a
                        # weight of L is not a weight of L, so U = V there
                        try:
                            src_mon = verma_weight_basis(rs, lam, up).monomials
                        except NotBelow:
                            continue
                        vecs = [{a: 1} for a in src_mon]
                    for vec in vecs:
                        vec = {a: c for a, c in vec.items() if c}
                        img = self._f_simple(i, vec)
                        col = [0] * vw.dim
                        for a, c in img.items():
                            if Fraction(c).denominator != 1:
                                raise ArithmeticError("f_i left the Verma lattice")
                            col[index[a]] += int(c)
                        if any(col):
                            cols.append(col)
                for a in gens.get(mu, ()):
                    col = [0] * vw.dim
                    col[index[a]] = 1
                    cols.append(col)
                lq = saturate(cols, vw.dim)
                if lq.quotient_rank == 0:
                    self._full.add(mu)
                    continue
                u_basis = [[row[j] for row in lq.saturated] for j in range(lq.rank)]
                self.spaces[mu] = WeightSpaceData(mu, ht, vw.monomials, lq, u_basis)
                u_cols[mu] = u_basis
                new_layer.append(mu)
            if not new_layer:
                self.complete = True
                break
            layer = new_layer

    # -- weights
    def weights(self) -> list:
        """Weights in construction order (by height, then decreasing coordinates)."""
        return list(self.spaces)

    def mult(self, mu) -> int:
        sp = self.spaces.get(tuple(mu))
        return sp.mult if sp else 0

    def height_of(self, mu) -> int:
        return self.spaces[tuple(mu)].ht

    @property
    def dim_total(self) -> int:
        return sum(sp.mult for sp in self.spaces.values())

    def maximal_submodule(self, mu) -> MaximalSubmoduleLattice:
        mu = tuple(mu)
        ht = relative_height(self.rs, self.lam, mu)
        if mu in self.spaces:
            sp = self.spaces[mu]
            cols, dim = sp.u_basis, len(sp.monomials)
        elif mu in self._full or self.complete or (self.max_height is not None and ht < self.max_height):
            # outside the weights of L: the whole Verma weight space
            dim = verma_weight_basis(self.rs, self.lam, mu).dim
            cols = identity(dim)
        else:
            raise KeyError(f"weight {mu} lies below the built range")
        matrix = tuple(tuple(c[i] for c in cols) for i in range(dim))
        return MaximalSubmoduleLattice(self.lam, mu, matrix, dim)

    # -- actions
    def _single_block(self, kind: str, k: int, mu) -> tuple | None:
        """(target weight, integer matrix) of x_{+-beta_k} on L(Z, mu)."""
        key = (kind, k, mu)
        if key in self._blocks:
            return self._blocks[key]
        rs = self.rs
        rw = rs.root_weight(rs.positive_roots[k])
        sign = -1 if kind == "f" else 1
        tgt = tuple(x + sign * y for x, y in zip(mu, rw))
        src = self.spaces[mu]
        out = None
        if tgt in self.spaces:
            dst = self.spaces[tgt]
            mat = zeros(dst.mult, src.mult)
            for j in range(src.mult):
                vec = {a: c for a, c in zip(src.monomials, src.lift(j)) if c}
                img = self.kf.verma_apply((kind, k), vec, self.lam)
                col = [0] * len(dst.monomials)
                for a, c in img.items():
                    if Fraction(c).denominator != 1:
                        raise ArithmeticError("root vector left the lattice")
                    col[dst.index[a]] += int(c)
                proj = dst.project(col)
                for i in range(dst.mult):
                    mat[i][j] = proj[i]
            out = (tgt, mat)
        self._blocks[key] = out
        return out

    def generator_action(self, kind: str, k: int, n: int = 1) -> dict:
        """Blocks of x^(n) for x = e_{beta_k} or f_{beta_k} (``kind`` in 'e', 'f'),
        or h_k (``kind`` = 'h', n ignored): {mu: (target, integer matrix)}."""
        out = {}
        for mu, sp in self.spaces.items():
            if kind == "h":
                out[mu] = (mu, [[mu[k] if i == j else 0 for j in range(sp.mult)] for i in range(sp.mult)])
                continue
            cur_mu, mat = mu, identity(sp.mult)
            ok = True
            for _ in range(n):
                blk = self._single_block(kind, k, cur_mu)
                if blk is None:
                    ok = False
                    break
                cur_mu, b = blk
                mat = matmul(b, mat)
            if not ok:
                continue
            f = factorial(n)
            if any(x % f for row in mat for x in row):
                raise ArithmeticError(f"divided power {kind}{k}^({n}) is not integral on L_lambda(Z)")
            out[mu] = (cur_mu, [[x // f for x in row] for row in mat])
        return out

    # -- dense forms (only for complete modules or the built part)
    def offsets(self) -> dict:
        off, pos = {}, 0
        for mu, sp in self.spaces.items():
            off[mu] = pos
            pos += sp.mult
        return off

    def dense(self, blocks: dict):
        dim = self.dim_total
        off = self.offsets()
        m = zeros(dim, dim)
        for mu, (tgt, mat) in blocks.items():
            r0, c0 = off[tgt], off[mu]
            for i, row in enumerate(mat):
                for j, x in enumerate(row):
                    m[r0 + i][c0 + j] = x
        return m

    def generator_matrix(self, kind: str, k: int, n: int = 1):
        return self.dense(self.generator_action(kind, k, n))

    def chevalley_generator_matrix(self, root, t) -> list:
        """x_root(t) = sum_n t^n rho(x_root^(n)) on the built weight spaces."""
        rs = self.rs
        root = tuple(root)
        if rs.is_positive_root(root):
            kind, k = "e", rs.root_index(root)
        elif rs.is_positive_root(tuple(-x for x in root)):
            kind, k = "f", rs.root_index(tuple(-x for x in root))
        else:
            raise ValueError(f"{root} is not a root")
        dim = self.dim_total
        out = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
        t = Fraction(t)
        n = 1
        while True:
            blocks = self.generator_action(kind, k, n)
            if not blocks:
                break
            m = self.dense(blocks)
            tn = t ** n
            for i in range(dim):
                for j in range(dim):
                    if m[i][j]:
                        out[i][j] += tn * m[i][j]
            n += 1
        return [[x.numerator if x.denominator == 1 else x for x in row] for row in out]

    def serre_check(self) -> bool:
        """[e_i, f_i] = h_i and [h_i, e_j] = <alpha_j, alpha_i> e_j on the built part."""
        if not self.complete:
            raise ValueError("Serre check needs the complete module")
        rs = self.rs
        n = rs.rank
        E = [self.generator_matrix("e", rs.simple_index(i)) for i in range(n)]
        F = [self.generator_matrix("f", rs.simple_index(i)) for i in range(n)]
        H = [self.generator_matrix("h", i) for i in range(n)]
        for i in range(n):
            ef, fe = matmul(E[i], F[i]), matmul(F[i], E[i])
            if [[x - y for x, y in zip(a, b)] for a, b in zip(ef, fe)] != H[i]:
                return False
            for j in range(n):
                he, eh = matmul(H[i], E[j]), matmul(E[j], H[i])
                c = rs.cartan[j][i]
                if [[x - y for x, y in zip(a, b)] for a, b in zip(he, eh)] != [[c * x for x in row] for row in E[j]]:
                    return False
                if i != j and matmul(E[i], F[j]) != matmul(F[j], E[i]):
                    return False
        return True

    def generated_by_negative_part(self) -> bool:
        """Whether every L(Z, mu) is spanned over Z by X_-^a v (a divided-power monomial)."""
        for mu, sp in self.spaces.items():
            if sp.mult == 0:
                continue
            cols = [sp.project([int(a == b) for b in sp.monomials]) for a in sp.monomials]
            h = hnf_rows(cols, sp.mult)
            if len(h) != sp.mult or abs(det_bareiss(h)) != 1:
                return False
        return True


def irreducible_lattice(rs: RootSystem, lam: Weight, max_height: int | None = None,
                        dim_cap: int = DEFAULT_DIM_CAP) -> HighestWeightLattice:
    return HighestWeightLattice(rs, lam, max_height=max_height, dim_cap=dim_cap)


def maximal_submodule(rs: RootSystem, lam: Weight, mu: Weight) -> MaximalSubmoduleLattice:
    ht = relative_height(rs, lam, mu)
    return HighestWeightLattice(rs, lam, max_height=ht).maximal_submodule(mu)


@dataclass(frozen=True)
class WeightLatticeIndex:
    lam0: Weight
    f: int


def weight_lattice_index(rs: RootSystem, lam0: Weight) -> WeightLatticeIndex:
    """Index of the lattice spanned by the weights of L_lam0 in the weight lattice."""
    weights = HighestWeightLattice(rs, lam0).weights()
    h = hnf_rows([list(w) for w in weights], rs.rank)
    if len(h) < rs.rank:
        raise ValueError("weights of the module do not span a full-rank lattice")
    f = abs(prod(h[i][i] for i in range(rs.rank)))
    det_c = abs(det_bareiss([list(r) for r in rs.cartan]))
    if det_c % f:
        raise ArithmeticError("index does not divide the Cartan determinant")
    return WeightLatticeIndex(tuple(lam0), f)
