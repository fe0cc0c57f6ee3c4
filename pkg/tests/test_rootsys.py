import pytest
from hypothesis import given, strategies as st

from chevtrunc.rootsys import (
    NotBelow,
    cartan_datum,
    height,
    relative_height,
    root_system,
    subtract_root,
    weight_congruent,
)

COUNTS = {"A1": 1, "A2": 3, "B2": 4, "C2": 4, "G2": 6, "A3": 6, "B3": 9, "C3": 9, "D4": 12}


@pytest.mark.parametrize("label,count", sorted(COUNTS.items()))
def test_positive_root_count(label, count):
    rs = root_system(label)
    assert len(rs.positive_roots) == count
    assert max(rs.heights) == rs.coxeter_number - 1
    assert [h for h in rs.heights if h == 1] == [1] * rs.rank


def test_a1():
    rs = root_system("A1")
    assert rs.positive_roots == ((1,),) and rs.heights == (1,)


def test_a2_roots_and_heights():
    rs = root_system("A2")
    assert set(rs.positive_roots) == {(1, 0), (0, 1), (1, 1)}
    assert rs.heights == (1, 1, 2)
    assert height((1, 1)) == 2


def test_g2_max_height():
    rs = root_system("G2")
    assert max(rs.heights) == 5


def test_type_a_height_is_index_gap():
    # alpha_ij = alpha_j + ... + alpha_(i-1) for i > j
    rs = root_system("A3")
    for i in range(4):
        for j in range(i):
            root = tuple(1 if j <= t < i else 0 for t in range(3))
            assert rs.is_positive_root(root)
            assert height(root) == i - j


def test_simple_roots_are_cartan_rows():
    rs = root_system("B2")
    assert rs.simple_root_weights == tuple(tuple(r) for r in rs.cartan)


def test_build_is_deterministic():
    assert root_system("G2").positive_roots == root_system("G2").positive_roots


def test_invalid_matrix_rejected():
    with pytest.raises(ValueError):
        cartan_datum("A2", [[2, -1], [-2, 2]])
    with pytest.raises(ValueError):
        cartan_datum("X3")


def test_relative_height_examples():
    rs = root_system("A2")
    assert relative_height(rs, (3, 3), (3, 3)) == 0
    assert relative_height(rs, (3, 3), (2, 2)) == 2
    a1 = root_system("A1")
    assert all(relative_height(a1, (7,), (7 - 2 * j,)) == j for j in range(8))
    with pytest.raises(NotBelow):
        relative_height(rs, (1, 0), (2, 0))


def test_weight_congruent_examples():
    assert weight_congruent((3, 3), (128, 3), 5, 3)
    assert not weight_congruent((3, 3), (28, 3), 5, 3)
    assert weight_congruent((1, 2), (1, 2), 7, 10)


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3"])
def test_heights_additive(label):
    rs = root_system(label)
    for a in rs.positive_roots:
        for b in rs.positive_roots:
            s = tuple(x + y for x, y in zip(a, b))
            if rs.is_root(s):
                assert height(s) == height(a) + height(b)


@given(st.sampled_from(["A2", "B2", "G2"]), st.data())
def test_relative_height_shift(label, data):
    rs = root_system(label)
    lam = tuple(data.draw(st.integers(0, 4)) for _ in range(rs.rank))
    root = data.draw(st.sampled_from(rs.positive_roots))
    mu = subtract_root(rs, lam, root, data.draw(st.integers(0, 2)))
    below = subtract_root(rs, mu, root)
    assert relative_height(rs, lam, below) == relative_height(rs, lam, mu) + height(root)
