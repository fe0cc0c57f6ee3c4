import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chevtrunc.arithcoh import coset_reps, free_generators
from chevtrunc.slopes import (
    HypothesisViolation,
    berkowitz,
    charpoly,
    newton_polygon,
    newton_slopes,
    period_exponent,
    prop65_pipeline,
    reduce_weight,
    slope_count,
    slope_dimension,
    verify_dimension_bound,
    worker_count,
)

small_matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-30, 30), min_size=n, max_size=n), min_size=n, max_size=n))


@given(small_matrices)
@settings(max_examples=60)
def test_charpoly_matches_berkowitz(T):
    assert charpoly(T) == berkowitz(T)


def test_charpoly_empty_and_identity():
    assert charpoly([]) == [1]
    assert charpoly([[1, 0], [0, 1]]) == [1, -2, 1]


def test_newton_two_slopes():
    # (X - 1)(X - 5)
    np_ = newton_polygon([1, -6, 5], 5)
    assert np_.segments == ((0, 1), (1, 1))
    assert np_.vertices == ((0, 0), (1, 0), (2, 1))


def test_newton_fractional_slope():
    assert newton_slopes([1, 0, 5], 5).pairs == ((Fraction(1, 2), 2),)
    assert newton_slopes([1, 0, 0, 25], 5).d(Fraction(2, 3)) == 3


def test_newton_zero_root():
    prof = newton_slopes([1, -5, 0, 0], 5)
    assert prof.infinite == 2 and prof.pairs == ((1, 1),)
    assert prof.dim == 3 and prof.d(100) == 1


def test_newton_rejects_zero():
    with pytest.raises(ValueError):
        newton_polygon([0, 0], 3)


def _poly_from_roots(roots):
    poly = [1]
    for a in roots:
        poly = [x - a * y for x, y in zip(poly + [0], [0] + poly)]
    return poly


@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.tuples(st.integers(0, 5), st.integers(1, 40)), min_size=1, max_size=6))
@settings(max_examples=80)
def test_split_polynomial_oracle(p, data):
    roots, expect = [], {}
    for a, u in data:
        u = u * p + 1
        roots.append(p ** a * u)
        expect[a] = expect.get(a, 0) + 1
    prof = newton_slopes(_poly_from_roots(roots), p)
    assert prof.as_dict() == expect


@given(small_matrices, st.sampled_from([2, 3, 5]))
@settings(max_examples=50)
def test_slope_profile_invariants(T, p):
    if not any(charpoly(T)[-1:]) and all(x == 0 for row in T for x in row):
        return
    prof = newton_slopes(charpoly(T), p)
    assert prof.dim == len(T)
    for a, m in prof.pairs:
        assert (a * m).denominator == 1 and a >= 0
    ds = [prof.d(Fraction(b, 2)) for b in range(12)]
    assert ds == sorted(ds)


def test_slope_dimension_rejects_negative_beta():
    with pytest.raises(ValueError):
        slope_dimension([[1]], -1, 5)


def test_dimension_bound_diagonal():
    p = 5
    rep = verify_dimension_bound([[1, 0, 0], [0, p, 0], [0, 0, p * p]], p, 2, 3)
    assert rep.lhs == rep.rhs == 6 and rep.passed
    assert not rep.corollary_checked


def test_dimension_bound_jordan():
    rep = verify_dimension_bound([[5, 1], [0, 5]], 5, 1, 3)
    assert rep.divisors == [1, 25] and rep.lhs == rep.rhs == 4 and rep.passed and rep.corollary_holds


def _unimodular(n, rng):
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [row[:] for row in U]
    for _ in range(10):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        for row in U:
            row[j] += c * row[i]
        V[i] = [x - c * y for x, y in zip(V[i], V[j])]
    return U, V


@given(st.integers(0, 10 ** 6), st.lists(st.integers(0, 3), min_size=2, max_size=4), st.integers(1, 4))
@settings(max_examples=40)
def test_dimension_bound_conjugation_invariant(seed, exps, r):
    p = 3
    n = len(exps)
    D = [[p ** exps[i] if i == j else 0 for j in range(n)] for i in range(n)]
    U, V = _unimodular(n, random.Random(seed))
    mul = lambda a, b: [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    T = mul(mul(U, D), V)
    base, conj = verify_dimension_bound(D, p, 3, r), verify_dimension_bound(T, p, 3, r)
    assert (base.lhs, base.rhs) == (conj.lhs, conj.rhs)
    assert conj.lhs <= conj.rhs


def test_dimension_bound_sublattice():
    T = [[5, 0], [0, 1]]
    rep = verify_dimension_bound(T, 5, 1, 3, sublattice=[[1, 0], [0, 5]])
    assert rep.rhs == 5
    with pytest.raises(ValueError):
        verify_dimension_bound([[0, 1], [1, 0]], 5, 1, 3, sublattice=[[1], [0]])


def test_slope_count_weight_two():
    cp, prof, d = slope_count(5, 0, 0, 0)
    assert cp == [1, -7, 11, -5]
    assert prof.as_dict() == {0: 2, 1: 1} and d == 2


def test_pipeline_grid():
    setup = coset_reps(free_generators(5))
    for k in (0, 4, 10):
        rep = prop65_pipeline(5, k, 0, 1, 3, setup=setup)
        assert rep.passed and rep.d <= rep.exponent


def test_pipeline_rejects_small_r():
    with pytest.raises(HypothesisViolation):
        prop65_pipeline(5, 2, 0, 1, 2)


def test_period_and_reduction():
    assert period_exponent(5, 2) == 3 and period_exponent(5, 3) == 4 and period_exponent(2, 1) == 2
    assert reduce_weight(135, 5, 2) == 10
    assert reduce_weight(20, 5, 2) == 20


@given(st.integers(0, 5000), st.sampled_from([(5, 2), (3, 1), (2, 2)]))
def test_reduction_congruent_and_in_range(k, pr):
    p, r = pr
    period = p ** period_exponent(p, r)
    kr = reduce_weight(k, p, r)
    assert 0 <= kr <= r + period
    assert (k - kr) % period == 0


def test_worker_count(monkeypatch):
    monkeypatch.setenv("CHEVTRUNC_THREADS", "1")
    assert worker_count() == 1
    monkeypatch.setenv("CHEVTRUNC_THREADS", "lots")
    with pytest.raises(ValueError):
        worker_count()
