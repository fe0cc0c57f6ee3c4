from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chevtrunc.intlinalg import (
    det_bareiss,
    elementary_divisors,
    hnf_rows,
    identity,
    matmul,
    saturate,
    smith_normal_form,
)

small_matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=m, max_size=m)))


def test_snf_diag_2_3():
    assert smith_normal_form([[2, 0], [0, 3]]).diagonal == [1, 6]


def test_snf_zero_matrix():
    s = smith_normal_form([[0, 0], [0, 0]])
    assert s.diagonal == [0, 0] and s.rank == 0


def test_snf_unimodular_is_identity():
    assert smith_normal_form([[2, 1], [5, 3]]).diagonal == [1, 1]


@given(small_matrices)
def test_snf_factorisation(a):
    s = smith_normal_form(a)
    assert matmul(matmul(s.U, s.D), s.W) == a
    assert abs(det_bareiss(s.U)) == 1 and abs(det_bareiss(s.W)) == 1
    assert matmul(s.U, s.Uinv) == identity(len(a))
    d = [x for x in s.diagonal if x]
    assert all(x > 0 for x in d)
    assert all(b % a_ == 0 for a_, b in zip(d, d[1:]))
    assert all(x == 0 for x in s.diagonal[len(d):])


@given(small_matrices)
def test_snf_matches_flint(a):
    ours = [x for x in smith_normal_form(a).diagonal if x]
    assert ours == [x for x in elementary_divisors(a) if x]


def test_hnf_rows_spans_same_lattice():
    h = hnf_rows([[2, 4], [3, 5]], 2)
    assert abs(det_bareiss(h)) == 2


def test_saturation_divides_out_torsion():
    lq = saturate([[2, 4, 6]], 3)
    assert lq.rank == 1 and lq.quotient_rank == 2
    assert [row[0] for row in lq.saturated] in ([1, 2, 3], [-1, -2, -3])
    q = lq.quotient
    assert all(sum(q[i][t] * [1, 2, 3][t] for t in range(3)) == 0 for i in range(2))
