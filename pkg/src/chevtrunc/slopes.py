"""Slopes over Z_p: Newton polygons, slope dimensions and the divisibility bounds."""
from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction


from .arithcoh import (
    HeckeSetup,
    ReductiveWeight,
    coset_reps,
    free_generators,
    h1_cardinality,
    hecke_on_h1,
)
from .intlinalg import SmithForm, elementary_divisors, solve_q, smith_normal_form, to_flint
from .trunc import vp

log = logging.getLogger(__name__)

__all__ = [
    "NewtonPolygon", "SlopeProfile", "charpoly", "berkowitz", "newton_polygon",
    "newton_slopes", "slope_dimension", "smith_normal_form", "SmithForm",
    "verify_dimension_bound", "prop65_pipeline", "uniform_bound", "reduce_weight",
    "lambda_set_exponents", "period_exponent", "slope_count", "HypothesisViolation", "worker_count",
]


class HypothesisViolation(ValueError):
    pass


def worker_count() -> int:
    env = os.environ.get("CHEVTRUNC_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"CHEVTRUNC_THREADS must be an integer, got {env!r}") from None
        return max(1, min(n, cap))
    return min(4, cap)


# ----------------------------------------------------------- polynomials

def charpoly(T) -> list[int]:
    """det(X - T), leading coefficient first."""
    if not T:
        return [1]
    return [int(c) for c in reversed(to_flint(T).charpoly().coeffs())]


def berkowitz(T) -> list[int]:
    """Division-free characteristic polynomial (oracle for ``charpoly``)."""
    n = len(T)
    if n == 0:
        return [1]
    poly = [1, -T[0][0]]
    for r in range(1, n):
        row = T[r][:r]
        v = [T[i][r] for i in range(r)]
        toeplitz = [1, -T[r][r]]
        for _ in range(r):
            toeplitz.append(-sum(x * y for x, y in zip(row, v)))
            v = [sum(T[i][j] * v[j] for j in range(r)) for i in range(r)]
        poly = [sum(toeplitz[i - j] * poly[j] for j in range(min(i, r) + 1)) for i in range(r + 2)]
    return poly


@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple  # (i, v_p(a_i)) with None for zero coefficients
    vertices: tuple
    segments: tuple  # (slope, horizontal length)
    infinite: int  # order of vanishing at X = 0


@dataclass(frozen=True)
class SlopeProfile:
    pairs: tuple  # (slope, multiplicity), slopes increasing
    infinite: int = 0

    @property
    def dim(self) -> int:
        return sum(d for _, d in self.pairs) + self.infinite

    def d(self, beta) -> int:
        beta = Fraction(beta)
        return sum(m for a, m in self.pairs if a <= beta)

    def as_dict(self) -> dict:
        return {a: m for a, m in self.pairs}


def newton_polygon(poly, p: int) -> NewtonPolygon:
    coeffs = [int(c) for c in poly]
    if not any(coeffs):
        raise ValueError("zero polynomial")
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    n = len(coeffs) - 1
    z = 0
    while coeffs[n - z] == 0:
        z += 1
    points = tuple((i, None if c == 0 else vp(c, p)) for i, c in enumerate(coeffs))
    pts = [(i, v) for i, v in points[: n - z + 1] if v is not None]
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        if segs and segs[-1][0] == slope:
            segs[-1] = (slope, segs[-1][1] + x2 - x1)
        else:
            segs.append((slope, x2 - x1))
    return NewtonPolygon(points, tuple(hull), tuple(segs), z)


def newton_slopes(poly, p: int) -> SlopeProfile:
    np_ = newton_polygon(poly, p)
    return SlopeProfile(tuple(np_.segments), np_.infinite)


def slope_dimension(T, beta, p: int) -> int:
    beta = Fraction(beta)
    if beta < 0:
        raise ValueError("beta must be non-negative")
    return newton_slopes(charpoly(T), p).d(beta)


# ----------------------------------------------------- lattice bounds

@dataclass
class DimensionBoundReport:
    p: int
    beta: Fraction
    r: int
    slopes: SlopeProfile
    lhs: Fraction
    rhs: int
    divisors: list
    negative_terms: list  # slopes alpha <= beta with r - alpha < 0
    bound_holds: bool
    corollary_checked: bool
    corollary_holds: bool | None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.bound_holds and self.corollary_holds is not False


def verify_dimension_bound(T, p: int, beta, r: int, sublattice=None) -> DimensionBoundReport:
    """Sum d_i (r - alpha_i) over slopes <= beta against v_p #((L / p^r) / ker T).

    ``sublattice`` is an optional basis (columns) of a T-stable lattice; the
    operator is restricted to it first.
    """
    beta = Fraction(beta)
    if sublattice is not None:
        B = [list(map(int, row)) for row in sublattice]
        TB = [[sum(T[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))] for i in range(len(T))]
        Tr = solve_q(B, TB)
        if Tr is None or any(Fraction(x).denominator != 1 for row in Tr for x in row):
            raise ValueError("the sublattice is not T-stable")
        T = [[int(x) for x in row] for row in Tr]
    prof = newton_slopes(charpoly(T), p)
    notes = []
    negative = [a for a, _ in prof.pairs if a <= beta and r - a < 0]
    if negative:
        notes.append(f"slopes {[str(a) for a in negative]} exceed r = {r}; inequality kept as displayed")
    lhs = sum((m * (r - a) for a, m in prof.pairs if a <= beta), Fraction(0))
    divs = elementary_divisors(T) if T else []
    rhs = sum(max(r - vp(x, p), 0) for x in divs if x != 0)
    corollary = r > beta + 1
    cor_ok = None
    if corollary:
        cor_ok = prof.d(beta) <= rhs
    else:
        notes.append("r <= beta + 1: corollary check skipped")
    return DimensionBoundReport(p, beta, r, prof, lhs, rhs, divs, negative, lhs <= rhs, corollary, cor_ok, notes)


# ----------------------------------------------------- the cohomology side

@dataclass
class SlopeBoundReport:
    p: int
    k: int
    m: int
    beta: Fraction
    r: int
    charpoly: list
    slopes: SlopeProfile
    d: int
    exponent: int

    @property
    def passed(self) -> bool:
        return self.d <= self.exponent


def _check_hypothesis(beta: Fraction, r: int) -> None:
    if not r > beta + 1:
        raise HypothesisViolation(f"need r > beta + 1, got r = {r}, beta = {beta}")


def _setup(p: int, setup: HeckeSetup | None) -> HeckeSetup:
    return setup if setup is not None else coset_reps(free_generators(p))


def slope_count(p: int, k: int, m: int, beta, setup: HeckeSetup | None = None) -> tuple:
    """(charpoly, slope profile, d(beta)) of the normalised operator on H^1(Gamma, L_k(Q_p))."""
    res = hecke_on_h1(_setup(p, setup), ReductiveWeight(k, m))
    prof = newton_slopes(res.charpoly, p)
    return res.charpoly, prof, prof.d(Fraction(beta))


def prop65_pipeline(p: int, k: int, m: int, beta, r: int, setup: HeckeSetup | None = None) -> SlopeBoundReport:
    beta = Fraction(beta)
    _check_hypothesis(beta, r)
    setup = _setup(p, setup)
    cp, prof, d = slope_count(p, k, m, beta, setup)
    e, _ = h1_cardinality(setup.group, k, r)
    return SlopeBoundReport(p, k, m, beta, r, cp, prof, d, e)


def period_exponent(p: int, r: int) -> int:
    """ceil(p r / (p - 1))."""
    return -(-p * r // (p - 1))


def reduce_weight(k: int, p: int, r: int, f: int = 1) -> int:
    """The representative of k in [0, r + p^M f] obtained by subtracting multiples of p^M f."""
    period = p ** period_exponent(p, r) * f
    if k <= r + period:
        return k
    return r + 1 + (k - r - 1) % period


@dataclass
class SweepEntry:
    k: int
    k_reduced: int
    d: int
    exponent: int
    exponent_reduced: int
    C: int

    @property
    def constant(self) -> bool:
        return self.exponent == self.exponent_reduced

    @property
    def passed(self) -> bool:
        return self.d <= self.C and self.d <= self.exponent and self.constant


@dataclass
class UniformBoundReport:
    p: int
    beta: Fraction
    r: int
    f: int
    C: int
    lambda_set_size: int
    sweep: list

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.sweep)


def _sweep_point(args):
    p, k, m, beta = args
    return slope_count(p, k, m, beta)[2]


def lambda_set_exponents(p: int, r: int, f: int = 1) -> list[int]:
    """E(k') for every k' in the representative set [0, r + p^M f]."""
    group = free_generators(p)
    top = r + p ** period_exponent(p, r) * f
    return [h1_cardinality(group, k, r)[0] for k in range(top + 1)]


def uniform_bound(p: int, beta, r: int, k_range, m: int = 0, f: int | None = None,
                  workers: int | None = None) -> UniformBoundReport:
    beta = Fraction(beta)
    _check_hypothesis(beta, r)
    if f is None:
        from .hwmod import weight_lattice_index
        from .rootsys import root_system
        f = weight_lattice_index(root_system("A1"), (1,)).f
    table = lambda_set_exponents(p, r, f)
    C = max(table)
    ks = list(k_range)
    workers = worker_count() if workers is None else workers
    jobs = [(p, k, m, beta) for k in ks]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            ds = list(ex.map(_sweep_point, jobs))
    else:
        ds = [_sweep_point(j) for j in jobs]
    group = free_generators(p)
    sweep = []
    for k, d in zip(ks, ds):
        kr = reduce_weight(k, p, r, f)
        e = h1_cardinality(group, k, r)[0]
        sweep.append(SweepEntry(k, kr, d, e, table[kr], C))
    return UniformBoundReport(p, beta, r, f, C, len(table), sweep)
