"""Truncations L^[r]_lambda(Z) = L_lambda(Z) / L_lambda(Z, r) and the map Phi.

A truncation is stored through its slots: one per weight mu with
ht_lambda(mu) <= r, of shape (Z/p^(r - ht))^mult.  Endomorphisms are integer
matrices on slot coordinates whose rows are reduced modulo the row's slot
modulus (:class:`SlotMap`); two maps agree on L^[r] exactly when their reduced
matrices agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .hwmod import HighestWeightLattice
from .intlinalg import det_bareiss
from .rootsys import RootSystem, Weight, weight_congruent


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def vp(x, p: int) -> float | int:
    """p-adic valuation of an integer or rational (infinity for 0)."""
    x = Fraction(x)
    if x == 0:
        return float("inf")
    v, num, den = 0, x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def congruence_exponent(p: int, r: int) -> int:
    """ceil(p r / (p - 1)), computed exactly."""
    return ceil(Fraction(p * r, p - 1))


@dataclass(frozen=True)
class TruncationSpec:
    p: int
    r: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.r < 0:
            raise ValueError("r must be non-negative")

    @property
    def modulus(self) -> int:
        return self.p ** self.r

    @property
    def congruence_exponent(self) -> int:
        return congruence_exponent(self.p, self.r)


class WellDefinednessError(ArithmeticError):
    """An integer matrix does not descend to the truncation."""


# --------------------------------------------------------------- slot maps

class SlotMap:
    """Homomorphism between products of cyclic groups Z/m_i given by an integer matrix.

    ``src_mod[j]`` and ``dst_mod[i]`` are the cyclic orders; entry (i, j) is kept
    reduced modulo ``dst_mod[i]``.
    """

    __slots__ = ("src_mod", "dst_mod", "matrix")

    def __init__(self, src_mod, dst_mod, matrix, check: bool = True):
        self.src_mod, self.dst_mod = tuple(src_mod), tuple(dst_mod)
        if check:
            for i, row in enumerate(matrix):
                for j, x in enumerate(row):
                    if (x * self.src_mod[j]) % self.dst_mod[i]:
                        raise WellDefinednessError(
                            f"entry ({i},{j}) = {x} does not descend from Z/{self.src_mod[j]} to Z/{self.dst_mod[i]}")
        self.matrix = [[x % self.dst_mod[i] for x in row] for i, row in enumerate(matrix)]

    @classmethod
    def identity(cls, mods) -> "SlotMap":
        n = len(mods)
        return cls(mods, mods, [[int(i == j) for j in range(n)] for i in range(n)], check=False)

    def __matmul__(self, other: "SlotMap") -> "SlotMap":
        if other.dst_mod != self.src_mod:
            raise ValueError("composition of incompatible slot maps")
        a, b = self.matrix, other.matrix
        n = len(b[0]) if b else 0
        prod_ = [[sum(a[i][k] * b[k][j] for k in range(len(b)) if a[i][k]) for j in range(n)] for i in range(len(a))]
        return SlotMap(other.src_mod, self.dst_mod, prod_, check=False)

    def __add__(self, other: "SlotMap") -> "SlotMap":
        return SlotMap(self.src_mod, self.dst_mod,
                       [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(self.matrix, other.matrix)], check=False)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SlotMap) and self.src_mod == other.src_mod
                and self.dst_mod == other.dst_mod and self.matrix == other.matrix)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.matrix for x in row)

    def is_identity(self) -> bool:
        return self == SlotMap.identity(self.src_mod) if self.src_mod == self.dst_mod else False


# ------------------------------------------------------------- truncations

@dataclass(frozen=True)
class Slot:
    mu: Weight
    ht: int
    rank: int
    exponent: int


def truncating_submodule(L: HighestWeightLattice, spec: TruncationSpec) -> list[tuple]:
    """(mu, scale exponent) for the built weights: p^(r-ht) L(Z, mu) up to height r,
    the whole weight space beyond."""
    out = []
    for mu, sp in L.spaces.items():
        out.append((mu, max(spec.r - sp.ht, 0)))
    if not L.complete and (L.max_height is None or L.max_height < spec.r):
        raise ValueError("lattice not built deep enough for this truncation")
    return out


def _needs_height(L: HighestWeightLattice, h: int) -> None:
    if not L.complete and (L.max_height is None or L.max_height < h):
        raise ValueError(f"lattice must be built to height {h}")


def _generator_kind(rs: RootSystem, root) -> tuple[str, int]:
    root = tuple(root)
    if rs.is_positive_root(root):
        return "e", rs.root_index(root)
    neg = tuple(-x for x in root)
    if rs.is_positive_root(neg):
        return "f", rs.root_index(neg)
    raise ValueError(f"{root} is not a root")


@dataclass
class TruncatedModule:
    lattice: HighestWeightLattice
    spec: TruncationSpec
    slots: list = field(default_factory=list)

    def __post_init__(self):
        _needs_height(self.lattice, self.spec.r)
        self.slots = [Slot(mu, sp.ht, sp.mult, self.spec.r - sp.ht)
                      for mu, sp in self.lattice.spaces.items() if sp.ht <= self.spec.r]
        self._offset = {}
        pos = 0
        for s in self.slots:
            self._offset[s.mu] = pos
            pos += s.rank
        self.dim = pos
        self.moduli = tuple(self.spec.p ** s.exponent for s in self.slots for _ in range(s.rank))

    @property
    def lam(self) -> Weight:
        return self.lattice.lam

    @property
    def cardinality_exponent(self) -> int:
        return sum(s.rank * s.exponent for s in self.slots)

    def slot_of(self, mu) -> Slot | None:
        return next((s for s in self.slots if s.mu == tuple(mu)), None)

    def offset(self, mu) -> int:
        return self._offset[tuple(mu)]

    def from_blocks(self, blocks: dict, scale=1) -> SlotMap:
        """Slot map of ``scale`` times a block operator on L(Z) ({mu: (target, matrix)})."""
        m = [[0] * self.dim for _ in range(self.dim)]
        for mu, (tgt, mat) in blocks.items():
            if mu not in self._offset or tgt not in self._offset:
                continue
            r0, c0 = self._offset[tgt], self._offset[mu]
            for i, row in enumerate(mat):
                for j, x in enumerate(row):
                    m[r0 + i][c0 + j] += scale * x
        return SlotMap(self.moduli, self.moduli, m)

    def s_generator_action(self, kind: str, k: int, n: int) -> SlotMap:
        """f_{beta_k}^(n) (``kind`` = 'f') or p^(n ht beta_k) e_{beta_k}^(n) (``kind`` = 'e')."""
        rs = self.lattice.rs
        if kind == "f":
            return self.from_blocks(self.lattice.generator_action("f", k, n))
        if kind == "e":
            scale = self.spec.p ** (n * rs.heights[k])
            if scale % self.spec.modulus == 0:
                return SlotMap(self.moduli, self.moduli, [[0] * self.dim for _ in range(self.dim)], check=False)
            return self.from_blocks(self.lattice.generator_action("e", k, n), scale)
        raise ValueError(f"unknown S-generator kind {kind!r}")

    def kstar_element_action(self, word) -> SlotMap:
        """Product of x_root(t) over the letters (root, t) of ``word``, reduced mod p^r.

        Letters need v_p(t) >= ht(root) for positive roots and v_p(t) >= 0 for
        negative ones.  A letter ("torus", (u_1, ..., u_l)) with p-adic units u_i
        is the coroot torus element, acting on weight mu by prod u_i^mu_i.
        """
        rs, p, mod = self.lattice.rs, self.spec.p, self.spec.modulus
        out = SlotMap.identity(self.moduli)
        for root, t in word:
            if isinstance(root, str) and root == "torus":
                out = out @ self._torus(t)
                continue
            kind, k = _generator_kind(rs, root)
            t = Fraction(t)
            if t == 0:
                continue
            need = rs.heights[k] if kind == "e" else 0
            if vp(t, p) < need:
                raise ValueError(f"letter ({tuple(root)}, {t}) violates v_p(t) >= {need}")
            step = SlotMap.identity(self.moduli)
            n = 1
            while True:
                blocks = {mu: b for mu, b in self.lattice.generator_action(kind, k, n).items()
                          if mu in self._offset and b[0] in self._offset}
                if not blocks:
                    break
                # keep the exact power of p in t^n so divisibility is checked honestly
                exact = t ** n
                v = vp(exact, p)
                unit = exact / Fraction(p) ** v
                scale = p ** v * (unit.numerator * pow(unit.denominator, -1, mod * p ** v) % (mod * p ** v))
                step = step + self.from_blocks(blocks, scale)
                n += 1
            out = out @ step
        return out

    def _torus(self, units) -> SlotMap:
        p, mod = self.spec.p, self.spec.modulus
        units = [Fraction(u) for u in units]
        if len(units) != self.lattice.rs.rank or any(u == 0 or vp(u, p) != 0 for u in units):
            raise ValueError(f"torus letter {units} needs {self.lattice.rs.rank} p-adic units")
        res = [u.numerator * pow(u.denominator, -1, mod) % mod for u in units]
        blocks = {}
        for s in self.slots:
            c = 1
            for u, m in zip(res, s.mu):
                c = c * pow(u, m, mod) % mod
            blocks[s.mu] = (s.mu, [[c if i == j else 0 for j in range(s.rank)] for i in range(s.rank)])
        return self.from_blocks(blocks)

    def describe(self) -> dict:
        return {
            "cardinality_exponent": self.cardinality_exponent,
            "slots": [{"mu": list(s.mu), "ht": s.ht, "rank": s.rank, "exponent": s.exponent} for s in self.slots],
        }


def build_truncation(L: HighestWeightLattice, spec: TruncationSpec) -> TruncatedModule:
    return TruncatedModule(L, spec)


def s_generators(rs: RootSystem, r: int, n_max: int | None = None) -> list[tuple]:
    """The finite S-generator set: f^(n) and p^(n ht) e^(n) for n = 1..n_max (default r)."""
    n_max = r if n_max is None else n_max
    gens = []
    for k in range(len(rs.positive_roots)):
        for n in range(1, n_max + 1):
            gens.append(("f", k, n))
            gens.append(("e", k, n))
    return gens


def generator_name(rs: RootSystem, g: tuple) -> str:
    kind, k, n = g
    root = "+".join(f"{c}a{i + 1}" if c > 1 else f"a{i + 1}" for i, c in enumerate(rs.positive_roots[k]) if c)
    if kind == "f":
        return f"f[{root}]^({n})"
    return f"p^{n * rs.heights[k]} e[{root}]^({n})"


@dataclass
class InvarianceReport:
    entries: list  # (generator name, passed)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.entries)


def s_invariance_check(L: HighestWeightLattice, spec: TruncationSpec, n_max: int | None = None) -> InvarianceReport:
    """Whether every S-generator with n <= n_max maps L(Z, r) into L(Z, r), by
    exact divisibility of the integer blocks (deep sources included)."""
    rs, p, r = L.rs, spec.p, spec.r
    n_max = r + 2 if n_max is None else n_max
    theta_ht = rs.heights[-1]
    _needs_height(L, r + n_max * theta_ht)
    entries = []
    for g in s_generators(rs, r, n_max):
        kind, k, n = g
        scale = p ** (n * rs.heights[k]) if kind == "e" else 1
        ok = True
        for mu, (tgt, mat) in L.generator_action(kind, k, n).items():
            a, b = L.height_of(mu), L.height_of(tgt)
            src_scale, dst_scale = max(r - a, 0), max(r - b, 0)
            for row in mat:
                for x in row:
                    if (scale * x * p ** src_scale) % (p ** dst_scale):
                        ok = False
        entries.append((generator_name(rs, g), ok))
    return InvarianceReport(entries)


def kstar_invariance_check(L: HighestWeightLattice, spec: TruncationSpec, word) -> bool:
    """Exponentials of valid K_*(p) letters preserve L(Z_p, r) (full integer matrices)."""
    rs, p, r = L.rs, spec.p, spec.r
    if not L.complete:
        raise ValueError("K_*(p) invariance check needs the complete module")
    heights = [L.height_of(mu) for mu, sp in L.spaces.items() for _ in range(sp.mult)]
    for root, t in word:
        kind, k = _generator_kind(rs, root)
        need = rs.heights[k] if kind == "e" else 0
        if vp(t, p) < need:
            raise ValueError(f"letter ({tuple(root)}, {t}) violates v_p(t) >= {need}")
        m = L.chevalley_generator_matrix(root, t)
        for i, row in enumerate(m):
            for j, x in enumerate(row):
                if x == 0:
                    continue
                # image of p^(r - ht_j) e_j must lie in p^(r - ht_i) L(Z)
                if vp(x, p) + max(r - heights[j], 0) < max(r - heights[i], 0):
                    return False
    return True


# --------------------------------------------------------------------- Phi

class HypothesisError(ValueError):
    def __init__(self, failed: list[str]):
        super().__init__("hypotheses violated: " + "; ".join(failed))
        self.failed = failed


def phi_hypotheses(rs: RootSystem, lam: Weight, lam2: Weight, spec: TruncationSpec, moved) -> dict:
    moved = set(moved)
    M = spec.congruence_exponent
    return {
        "equal_off_moved": all(lam[i] == lam2[i] for i in range(rs.rank) if i not in moved),
        "large_on_moved": all(lam[i] > spec.r and lam2[i] > spec.r for i in moved),
        "congruent": weight_congruent(lam, lam2, spec.p, M),
        "congruence_exponent": M,
    }


@dataclass
class PhiMap:
    source: TruncatedModule
    target: TruncatedModule
    blocks: dict  # mu -> integer matrix L(Z, mu) -> L'(Z, mu')
    hypotheses: dict
    shape_match: bool
    well_defined: bool
    bijective: bool

    def as_slot_map(self) -> SlotMap:
        src, dst = self.source, self.target
        m = [[0] * src.dim for _ in range(dst.dim)]
        shift = tuple(y - x for x, y in zip(src.lam, dst.lam))
        for s in src.slots:
            tgt = tuple(x + y for x, y in zip(s.mu, shift))
            r0, c0 = dst.offset(tgt), src.offset(s.mu)
            for i, row in enumerate(self.blocks[s.mu]):
                for j, x in enumerate(row):
                    m[r0 + i][c0 + j] = x
        return SlotMap(src.moduli, dst.moduli, m)


def phi_isomorphism(rs: RootSystem, lam: Weight, lam2: Weight, spec: TruncationSpec, moved,
                    enforce: bool = True, lattices: tuple | None = None) -> PhiMap:
    """The map X_-^a v_lambda -> X_-^a v_lambda' on truncations of length r.

    With ``enforce`` the three hypotheses are required; without it the map is
    still built when shapes agree, so negative controls can be examined.
    """
    lam, lam2 = tuple(lam), tuple(lam2)
    hyp = phi_hypotheses(rs, lam, lam2, spec, moved)
    failed = [k for k in ("equal_off_moved", "large_on_moved", "congruent") if not hyp[k]]
    if enforce and failed:
        raise HypothesisError(failed)
    if lattices is None:
        lattices = (HighestWeightLattice(rs, lam, max_height=spec.r),
                    HighestWeightLattice(rs, lam2, max_height=spec.r))
    T, T2 = TruncatedModule(lattices[0], spec), TruncatedModule(lattices[1], spec)
    shift = tuple(y - x for x, y in zip(lam, lam2))
    p = spec.p
    shape = len(T.slots) == len(T2.slots)
    if shape:
        for s in T.slots:
            s2 = T2.slot_of(tuple(x + y for x, y in zip(s.mu, shift)))
            if s2 is None or (s2.rank, s2.exponent, s2.ht) != (s.rank, s.exponent, s.ht):
                shape = False
                break
    if not shape:
        if enforce:
            raise ArithmeticError("truncations under Phi have different shapes")
        return PhiMap(T, T2, {}, hyp, False, False, False)
    blocks, well, bij = {}, True, True
    for s in T.slots:
        sp = T.lattice.spaces[s.mu]
        sp2 = T2.lattice.spaces[tuple(x + y for x, y in zip(s.mu, shift))]
        if sp.monomials != sp2.monomials:
            raise AssertionError("Verma monomial bases differ at matching depth")
        mod = p ** s.exponent
        mat = [[0] * s.rank for _ in range(s.rank)]
        for j in range(s.rank):
            col = sp2.project(sp.lift(j))
            for i in range(s.rank):
                mat[i][j] = col[i]
        blocks[s.mu] = mat
        if mod > 1:
            for u in sp.u_basis:
                if any(x % mod for x in sp2.project(u)):
                    well = False
            if det_bareiss(mat) % p == 0:
                bij = False
    if enforce and not (well and bij):
        raise ArithmeticError("Phi does not descend to an isomorphism of truncations")
    return PhiMap(T, T2, blocks, hyp, True, well, bij)


@dataclass
class ConstancyReport:
    entries: list  # (generator name, passed)
    hypotheses: dict
    shape_match: bool

    @property
    def equivariant(self) -> bool:
        return all(ok for _, ok in self.entries)

    @property
    def verdict(self) -> str:
        if not self.shape_match:
            return "fail"
        return "pass" if self.equivariant else "fail"


def local_constancy_check(phi: PhiMap) -> ConstancyReport:
    """Phi g = g Phi on L^[r] for every S-generator with n <= r (n = r vanishes)."""
    if not phi.shape_match:
        return ConstancyReport([], phi.hypotheses, False)
    T, T2 = phi.source, phi.target
    rs, r = T.lattice.rs, T.spec.r
    if r == 0:
        return ConstancyReport([], phi.hypotheses, True)
    P = phi.as_slot_map()
    entries = []
    for g in s_generators(rs, r):
        a = T.s_generator_action(*g)
        b = T2.s_generator_action(*g)
        entries.append((generator_name(rs, g), P @ a == b @ P))
    return ConstancyReport(entries, phi.hypotheses, True)
