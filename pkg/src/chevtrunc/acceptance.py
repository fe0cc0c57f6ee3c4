"""The acceptance grid, shared by ``chevtrunc accept`` and the test suite.

Each criterion returns a :class:`CriterionResult`; ``passed`` is the verdict,
``details`` records every sub-check so a failure can be traced.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .arithcoh import (
    ReductiveWeight,
    annihilation_check,
    coset_reps,
    free_generators,
    hecke_on_h1,
    integrality_check,
    valuation_check,
)
from .hwmod import HighestWeightLattice, freudenthal_multiplicities, weyl_dimension
from .pbw import kostant_form
from .qrep import ModuleAction
from .rootsys import root_system
from .slopes import prop65_pipeline, uniform_bound, verify_dimension_bound
from .trunc import (
    HypothesisError,
    TruncationSpec,
    build_truncation,
    local_constancy_check,
    phi_isomorphism,
    s_invariance_check,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float
    budget: float
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:>2} {verdict}  {self.title}  ({self.seconds:.1f}s, budget {self.budget:.0f}s)"


def _timed(number, title, budget, fn) -> CriterionResult:
    t0 = time.perf_counter()
    passed, details = fn()
    return CriterionResult(number, title, passed, time.perf_counter() - t0, budget, details)


# ------------------------------------------------------------------ 1

S_INVARIANCE_TYPES = ("A1", "A2", "B2")
S_INVARIANCE_PRIMES = (2, 3, 5)
S_INVARIANCE_R = (1, 2)
S_INVARIANCE_MAX = 4


def _s_invariance():
    failures, count = [], 0
    for label in S_INVARIANCE_TYPES:
        rs = root_system(label)
        theta = rs.heights[-1]
        for lam in product(range(S_INVARIANCE_MAX + 1), repeat=rs.rank):
            depth = max(S_INVARIANCE_R) * (1 + theta) + 2 * theta
            L = HighestWeightLattice(rs, lam, max_height=depth)
            for p, r in product(S_INVARIANCE_PRIMES, S_INVARIANCE_R):
                rep = s_invariance_check(L, TruncationSpec(p, r))
                count += 1
                if not rep.passed:
                    failures.append({"type": label, "weight": list(lam), "p": p, "r": r,
                                     "generators": [g for g, ok in rep.entries if not ok]})
    return not failures, {"cases": count, "failures": failures}


# ------------------------------------------------------------------ 2

STRAIGHTENING_CASES = (("A1", (3,)), ("A2", (1, 1)), ("B2", (1, 1)), ("G2", (1, 0)))
STRAIGHTENING_TRIALS = 200


def _straightening(seed: int = 0):
    rng = random.Random(seed)
    out, ok = {}, True
    for label, lam in STRAIGHTENING_CASES:
        rs = root_system(label)
        kf = kostant_form(rs)
        oracle = ModuleAction(rs, lam)
        s = len(rs.positive_roots)
        integral = sound = 0
        for _ in range(STRAIGHTENING_TRIALS):
            k = rng.randrange(s)
            n = rng.randint(1, 3)
            a = tuple(rng.randint(0, 2) for _ in range(s))
            try:
                res = kf.divided_power_commute(k, n, a)
            except ArithmeticError:
                continue
            integral += 1
            lhs = oracle.product([("e", k, n)] + [("f", j, a[j]) for j in range(s) if a[j]])
            if lhs == oracle.element(res.terms):
                sound += 1
        out[label] = {"trials": STRAIGHTENING_TRIALS, "integral": integral, "sound": sound}
        ok &= integral == sound == STRAIGHTENING_TRIALS
    return ok, out


# ------------------------------------------------------------------ 3

DIMENSION_CASES = (
    ("A1", (0,)), ("A1", (1,)), ("A1", (5,)),
    ("A2", (1, 0)), ("A2", (0, 1)), ("A2", (1, 1)), ("A2", (2, 1)), ("A2", (2, 2)),
    ("B2", (1, 0)), ("B2", (0, 1)), ("B2", (1, 1)), ("B2", (2, 1)),
    ("G2", (1, 0)), ("G2", (0, 1)),
    ("A3", (1, 0, 0)), ("A3", (1, 0, 1)),
)


def _dimensions():
    rows, ok = [], True
    for label, lam in DIMENSION_CASES:
        rs = root_system(label)
        L = HighestWeightLattice(rs, lam)
        mult = {mu: L.mult(mu) for mu in L.weights()}
        good = L.dim_total == weyl_dimension(rs, lam) and mult == freudenthal_multiplicities(rs, lam)
        rows.append({"type": label, "weight": list(lam), "dim": L.dim_total, "oracles": good})
        ok &= good
    rs = root_system("A2")
    a = HighestWeightLattice(rs, (1, 0)).dim_total
    adj = HighestWeightLattice(rs, (1, 1))
    pinned = a == 3 and adj.dim_total == 8 and adj.mult((0, 0)) == 2
    return ok and pinned, {"modules": rows, "pinned": pinned}


# ------------------------------------------------------------------ 4

def _cardinalities():
    a1 = build_truncation(HighestWeightLattice(root_system("A1"), (10,), max_height=2), TruncationSpec(5, 2))
    a2 = build_truncation(HighestWeightLattice(root_system("A2"), (3, 3), max_height=2), TruncationSpec(5, 2))
    z = build_truncation(HighestWeightLattice(root_system("A2"), (3, 3), max_height=0), TruncationSpec(5, 0))
    got = {"A1": a1.cardinality_exponent, "A2": a2.cardinality_exponent, "r0": z.cardinality_exponent}
    return got == {"A1": 3, "A2": 4, "r0": 0}, got


# ------------------------------------------------------------------ 5

CONSTANCY_POSITIVE = (("A1", (10,), (135,), (0,)), ("A2", (3, 3), (128, 3), (0,)))
# congruent modulo p^2 only
CONSTANCY_NEGATIVE = (("A1", (10,), (35,), (0,)), ("A2", (3, 3), (28, 3), (0,)))
# congruent modulo p^0 only
CONSTANCY_SHARP = (("A1", (10,), (11,), (0,)), ("A2", (3, 3), (4, 3), (0,)))


def _constancy_case(label, lam, lam2, moved, enforce):
    spec = TruncationSpec(5, 2)
    try:
        phi = phi_isomorphism(root_system(label), lam, lam2, spec, moved, enforce=enforce)
    except (HypothesisError, ArithmeticError) as exc:
        return {"type": label, "weights": [list(lam), list(lam2)], "equivariant": False, "error": str(exc)}
    rep = local_constancy_check(phi)
    return {"type": label, "weights": [list(lam), list(lam2)], "equivariant": rep.equivariant,
            "failing": [g for g, ok in rep.entries if not ok], "verdict": rep.verdict}


def _constancy():
    pos = [_constancy_case(*c, enforce=True) for c in CONSTANCY_POSITIVE]
    neg = [_constancy_case(*c, enforce=False) for c in CONSTANCY_NEGATIVE]
    sharp = [_constancy_case(*c, enforce=False) for c in CONSTANCY_SHARP]
    ok = all(x["equivariant"] for x in pos) and all(not x["equivariant"] for x in neg)
    return ok, {"positive": pos, "negative_control": neg, "sharp_control": sharp}


# ------------------------------------------------------------------ 6

def _hecke_integrality():
    setup = coset_reps(free_generators(5))
    rows, ok = [], setup.group.rank == 3
    for k in range(11):
        w = ReductiveWeight(k, 0)
        row = {
            "k": k,
            "valuations": valuation_check(w, 5),
            "integral": integrality_check(setup, w),
            "annihilation": all(annihilation_check(setup, w, r).passed for r in range(4)),
            "unnormalized_fails": not annihilation_check(setup, w, 2, normalized=False).passed,
        }
        good = row["valuations"] and row["integral"] and row["annihilation"]
        if k >= 1:
            good &= row["unnormalized_fails"]
        ok &= good
        rows.append(row)
    return ok, {"rank": setup.group.rank, "rows": rows}


# ------------------------------------------------------------------ 7

def _conjugate(T, U, Uinv):
    n = len(T)
    mul = lambda a, b: [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    return mul(mul(U, T), Uinv)


def random_unimodular(n: int, rng: random.Random, steps: int = 12):
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    Uinv = [row[:] for row in U]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        # U <- U (1 + c E_ij), Uinv <- (1 - c E_ij) Uinv
        for row in U:
            row[j] += c * row[i]
        Uinv[i] = [x - c * y for x, y in zip(Uinv[i], Uinv[j])]
    return U, Uinv


def _dimension_bound(seed: int = 1):
    p = 5
    D = [[1, 0, 0], [0, p, 0], [0, 0, p * p]]
    base = verify_dimension_bound(D, p, 2, 3)
    rng = random.Random(seed)
    invariant = 0
    for _ in range(20):
        U, Uinv = random_unimodular(3, rng)
        rep = verify_dimension_bound(_conjugate(D, U, Uinv), p, 2, 3)
        invariant += (rep.lhs, rep.rhs) == (base.lhs, base.rhs)
    jordan = verify_dimension_bound([[p, 1], [0, p]], p, 1, 3)
    ok = base.lhs == base.rhs == 6 and invariant == 20 and jordan.lhs == 4 and jordan.passed
    return ok, {"diagonal": [str(base.lhs), base.rhs], "conjugations_invariant": invariant,
                "jordan": [str(jordan.lhs), jordan.rhs]}


# ------------------------------------------------------------------ 8

PIPELINE_K = (0, 2, 4, 6, 8, 10)


def _pipeline():
    setup = coset_reps(free_generators(5))
    rows = []
    for k in PIPELINE_K:
        rep = prop65_pipeline(5, k, 0, 1, 3, setup=setup)
        rows.append({"k": k, "d": rep.d, "exponent": rep.exponent, "pass": rep.passed})
    return all(r["pass"] for r in rows), {"grid": rows}


# ------------------------------------------------------------------ 9

def _uniform():
    first = uniform_bound(5, 1, 3, range(2, 26))
    second = uniform_bound(5, 1, 3, range(26, 51))
    sweep = first.sweep + second.sweep
    ok = first.C == second.C and first.passed and second.passed
    return ok, {"C": [first.C, second.C], "lambda_set_size": first.lambda_set_size,
                "max_d": max(e.d for e in sweep), "failing_k": [e.k for e in sweep if not e.passed]}


# ------------------------------------------------------------------ 10

REPRESENTATIVE_CASES = ((5, range(0, 7), (11, 29)), (7, range(0, 5), (3,)))


def _representatives():
    rows, ok = [], True
    for p, ks, seeds in REPRESENTATIVE_CASES:
        group = free_generators(p)
        base = coset_reps(group)
        others = [coset_reps(group, shuffle=s) for s in seeds]
        for k in ks:
            w = ReductiveWeight(k, 0)
            ref = hecke_on_h1(base, w).charpoly
            same = all(hecke_on_h1(o, w).charpoly == ref for o in others)
            rows.append({"p": p, "k": k, "same": same})
            ok &= same
    return ok, {"rows": rows}


CRITERIA = (
    (1, "S-invariance of the truncating submodule", 60, _s_invariance),
    (2, "straightening integrality and soundness", 120, _straightening),
    (3, "irreducible lattice dimensions", 30, _dimensions),
    (4, "truncation cardinalities", 10, _cardinalities),
    (5, "local constancy with negative control", 120, _constancy),
    (6, "Hecke integrality and annihilation", 120, _hecke_integrality),
    (7, "lattice dimension bound on synthetic operators", 30, _dimension_bound),
    (8, "slope divisibility pipeline", 600, _pipeline),
    (9, "uniform bound over the weight sweep", 1200, _uniform),
    (10, "coset representative independence", 60, _representatives),
)


def run_criterion(number: int) -> CriterionResult:
    for n, title, budget, fn in CRITERIA:
        if n == number:
            return _timed(n, title, budget, fn)
    raise KeyError(f"no criterion {number}")


def run_all(numbers=None) -> list[CriterionResult]:
    wanted = set(numbers) if numbers else None
    return [_timed(n, t, b, fn) for n, t, b, fn in CRITERIA if wanted is None or n in wanted]
