"""Irreducible highest-weight modules over Q from the simple generators alone.

A weight space is represented through its image under (e_1, ..., e_l): in an
irreducible module a vector of weight below the top that every e_j kills is
zero, so that image map is injective.  Candidates f_i b are computed from the
relations [e_j, f_i] = delta_ij h_i, and a greedy independent subset becomes
the basis.  No PBW straightening is involved anywhere, which is the point:
this module is the independent oracle for the straightening code, and it also
realises the adjoint representation from which the structure constants are
read off.
"""
from __future__ import annotations

from fractions import Fraction

from .intlinalg import independent_columns, solve_q, zeros
from .rootsys import RootSystem, Weight


class QModule:
    """L(lambda) over Q with block matrices for e_i, f_i (simple i).

    ``weights`` lists the weights by depth; ``dims[mu]`` the multiplicity;
    ``E[i][mu]`` maps L_mu -> L_{mu+alpha_i}; ``F[i][mu]`` maps L_mu -> L_{mu-alpha_i}.
    """

    def __init__(self, rs: RootSystem, lam: Weight):
        self.rs = rs
        self.lam = tuple(lam)
        n = rs.rank
        self.alpha = [rs.simple_root_weights[i] for i in range(n)]
        self.dims: dict = {self.lam: 1}
        self.weights: list = [self.lam]
        self.E = [dict() for _ in range(n)]
        self.F = [dict() for _ in range(n)]
        self._build()

    def _up(self, mu, i):
        return tuple(x + y for x, y in zip(mu, self.alpha[i]))

    def _down(self, mu, i):
        return tuple(x - y for x, y in zip(mu, self.alpha[i]))

    def _e_apply(self, j, mu, vec):
        """e_j on a coordinate vector of L_mu (zero if the target is absent)."""
        tgt = self._up(mu, j)
        if tgt not in self.dims:
            return None
        m = self.E[j][mu]
        return [sum(m[r][c] * vec[c] for c in range(len(vec))) for r in range(self.dims[tgt])]

    def _f_apply(self, i, mu, vec):
        tgt = self._down(mu, i)
        if tgt not in self.dims:
            return None
        m = self.F[i][mu]
        return [sum(m[r][c] * vec[c] for c in range(len(vec))) for r in range(self.dims[tgt])]

    def _image_of_candidate(self, mu, i, b):
        """Stacked (e_j f_i b)_j for the basis vector b of L_{mu+alpha_i}."""
        n = self.rs.rank
        src = self._up(mu, i)
        unit = [Fraction(int(k == b)) for k in range(self.dims[src])]
        parts = []
        for j in range(n):
            tgt = self._up(mu, j)
            if tgt not in self.dims:
                continue
            acc = [Fraction(0)] * self.dims[tgt]
            ejb = self._e_apply(j, src, unit)
            if ejb is not None:
                top = self._up(src, j)
                fe = self._f_apply(i, top, ejb)
                if fe is not None:
                    acc = [x + y for x, y in zip(acc, fe)]
            if i == j:
                scalar = src[i]
                acc = [x + scalar * y for x, y in zip(acc, unit)]
            parts.extend(acc)
        return parts

    def _build(self):
        n = self.rs.rank
        layer = [self.lam]
        while layer:
            nxt = []
            seen = set()
            for mu in layer:
                for i in range(n):
                    nu = self._down(mu, i)
                    if nu not in seen:
                        seen.add(nu)
                        nxt.append(nu)
            new_layer = []
            for mu in sorted(nxt, reverse=True):
                cands = []
                for i in range(n):
                    src = self._up(mu, i)
                    if src in self.dims:
                        for b in range(self.dims[src]):
                            cands.append((i, b, self._image_of_candidate(mu, i, b)))
                if not cands or not cands[0][2]:
                    continue
                cols = [[c[2][r] for c in cands] for r in range(len(cands[0][2]))]
                basis = independent_columns(cols)
                if not basis:
                    continue
                self.dims[mu] = len(basis)
                self.weights.append(mu)
                new_layer.append(mu)
                bmat = [[cands[k][2][r] for k in basis] for r in range(len(cands[0][2]))]
                # e_j blocks: rows of the stacked image
                row = 0
                for j in range(n):
                    tgt = self._up(mu, j)
                    if tgt not in self.dims:
                        continue
                    d = self.dims[tgt]
                    self.E[j][mu] = [bmat[row + r][:] for r in range(d)]
                    row += d
                # f_i blocks from L_{mu+alpha_i}
                for i in range(n):
                    src = self._up(mu, i)
                    if src not in self.dims:
                        continue
                    rhs = [[c[2][r] for c in cands if c[0] == i] for r in range(len(cands[0][2]))]
                    self.F[i][src] = solve_q(bmat, rhs)
            layer = new_layer

    # ---- dense matrices on the whole module
    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    def offsets(self) -> dict:
        off, pos = {}, 0
        for mu in self.weights:
            off[mu] = pos
            pos += self.dims[mu]
        return off

    def dense(self) -> tuple[list, list, list]:
        """Dense matrices (E_i, F_i, H_i) over the concatenated weight bases."""
        n, dim, off = self.rs.rank, self.dim, self.offsets()
        Es, Fs, Hs = [], [], []
        for i in range(n):
            e, f, h = zeros(dim, dim), zeros(dim, dim), zeros(dim, dim)
            for mu in self.weights:
                c0 = off[mu]
                for k in range(self.dims[mu]):
                    h[c0 + k][c0 + k] = Fraction(mu[i])
                up = self._up(mu, i)
                if up in self.dims and mu in self.E[i]:
                    r0, blk = off[up], self.E[i][mu]
                    for r in range(len(blk)):
                        for c in range(len(blk[r])):
                            e[r0 + r][c0 + c] = blk[r][c]
                if mu in self.F[i]:
                    dn = self._down(mu, i)
                    r0, blk = off[dn], self.F[i][mu]
                    for r in range(len(blk)):
                        for c in range(len(blk[r])):
                            f[r0 + r][c0 + c] = blk[r][c]
            Es.append(e)
            Fs.append(f)
            Hs.append(h)
        return Es, Fs, Hs


def commutator(a, b):
    n = len(a)
    ab = [[sum(a[i][k] * b[k][j] for k in range(n) if a[i][k]) for j in range(n)] for i in range(n)]
    ba = [[sum(b[i][k] * a[k][j] for k in range(n) if b[i][k]) for j in range(n)] for i in range(n)]
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]


def extraspecial_recipe(rs: RootSystem) -> dict:
    """For every non-simple positive root beta: (i, gamma_index, q) with
    beta = alpha_i + gamma, i minimal, and q maximal with gamma - q alpha_i a root."""
    recipe = {}
    for k, beta in enumerate(rs.positive_roots):
        if sum(beta) == 1:
            continue
        for i in range(rs.rank):
            gamma = tuple(c - int(j == i) for j, c in enumerate(beta))
            if rs.is_positive_root(gamma):
                q = 0
                while rs.is_root(tuple(c - (q + 1) * int(j == i) for j, c in enumerate(gamma))):
                    q += 1
                recipe[k] = (i, rs.root_index(gamma), q)
                break
    return recipe


def root_vector_matrices(rs: RootSystem, Es, Fs) -> tuple[list, list]:
    """Realise x_beta, x_{-beta} for all positive beta from simple generator
    matrices, with x_beta = [x_{alpha_i}, x_gamma]/(q+1) and
    x_{-beta} = -[x_{-alpha_i}, x_{-gamma}]/(q+1)."""
    s = len(rs.positive_roots)
    pos, neg = [None] * s, [None] * s
    for i in range(rs.rank):
        pos[rs.simple_index(i)] = Es[i]
        neg[rs.simple_index(i)] = Fs[i]
    recipe = extraspecial_recipe(rs)
    for k in range(s):
        if pos[k] is not None:
            continue
        i, g, q = recipe[k]
        si = rs.simple_index(i)
        c = commutator(pos[si], pos[g])
        pos[k] = [[Fraction(x, q + 1) if isinstance(x, int) else x / (q + 1) for x in row] for row in c]
        c = commutator(neg[si], neg[g])
        neg[k] = [[-Fraction(x, q + 1) if isinstance(x, int) else -x / (q + 1) for x in row] for row in c]
    return pos, neg


class ModuleAction:
    """Dense root-vector matrices on L(lambda) over Q, for evaluating elements
    of the enveloping algebra factor by factor."""

    def __init__(self, rs: RootSystem, lam: Weight):
        self.rs = rs
        self.module = QModule(rs, lam)
        Es, Fs, Hs = self.module.dense()
        self.pos, self.neg = root_vector_matrices(rs, Es, Fs)
        self.H = Hs
        self.dim = self.module.dim
        self._cache: dict = {}

    def _mul(self, a, b):
        n = self.dim
        return [[sum(a[i][k] * b[k][j] for k in range(n) if a[i][k]) for j in range(n)] for i in range(n)]

    def _identity(self):
        return [[Fraction(int(i == j)) for j in range(self.dim)] for i in range(self.dim)]

    def divided_power(self, kind: str, k: int, n: int):
        key = (kind, k, n)
        if key not in self._cache:
            self._cache[key] = self._divided_power(kind, k, n)
        return self._cache[key]

    def _divided_power(self, kind: str, k: int, n: int):
        base = self.pos[k] if kind == "e" else self.neg[k]
        out = self._identity()
        for t in range(1, n + 1):
            out = [[x / t for x in row] for row in self._mul(base, out)]
        return out

    def toral(self, i: int, b: int):
        """binom(h_i, b) (diagonal)."""
        key = ("h", i, b)
        if key in self._cache:
            return self._cache[key]
        out = self._identity()
        for t in range(b):
            out = [[out[r][c] * (self.H[i][r][r] - t) / (t + 1) if r == c else out[r][c]
                    for c in range(self.dim)] for r in range(self.dim)]
        self._cache[key] = out
        return out

    def monomial(self, a, b, c):
        out = self._identity()
        for k, n in enumerate(a):
            if n:
                out = self._mul(out, self.divided_power("f", k, n))
        for i, n in enumerate(b):
            if n:
                out = self._mul(out, self.toral(i, n))
        for k, n in enumerate(c):
            if n:
                out = self._mul(out, self.divided_power("e", k, n))
        return out

    def element(self, terms: dict):
        """Matrix of sum coeff * X_-^a H^b X_+^c."""
        out = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for (a, b, c), coeff in terms.items():
            m = self.monomial(a, b, c)
            out = [[x + coeff * y for x, y in zip(r1, r2)] for r1, r2 in zip(out, m)]
        return out

    def product(self, factors):
        """Matrix of a product of factors (kind, k) or (kind, k, n), no straightening."""
        out = self._identity()
        for f in factors:
            kind, k = f[0], f[1]
            n = f[2] if len(f) == 3 else 1
            if kind == "h":
                m = [[self.H[k][r][c] for c in range(self.dim)] for r in range(self.dim)]
                for _ in range(n):
                    out = self._mul(out, m)
            else:
                out = self._mul(out, self.divided_power(kind, k, n))
        return out
