import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from chevtrunc.arithcoh import (
    ReductiveWeight,
    annihilation_check,
    coset_reps,
    euler_rank,
    free_generators,
    free_rank_dimension_check,
    h1_cardinality,
    hecke_on_cocycles,
    hecke_on_h1,
    integrality_check,
    inv2,
    kstar_membership,
    valuation_check,
    load_generators,
    mul2,
    slot_action,
    sym_power,
    truncation_slots,
    unnormalized_hecke_on_cocycles,
)
from chevtrunc.hwmod import HighestWeightLattice
from chevtrunc.rootsys import root_system
from chevtrunc.trunc import TruncationSpec, build_truncation


@pytest.fixture(scope="module")
def setup5():
    return coset_reps(free_generators(5))


def test_kstar_membership():
    assert kstar_membership(((1, 0), (5, 1)), 5)
    assert kstar_membership(((6, 1), (5, 1)), 5)
    assert not kstar_membership(((2, 1), (1, 1)), 5)
    with pytest.raises(ValueError):
        kstar_membership(((2, 0), (0, 1)), 5)


@pytest.mark.parametrize("p,rank", [(5, 3), (7, 5), (11, 11), (13, 15)])
def test_free_ranks(p, rank):
    group = free_generators(p)
    assert group.rank == rank == euler_rank(p)
    assert all(group.contains(g) for g in group.generators)


def test_unsupported_prime():
    with pytest.raises(ValueError):
        free_generators(3)


def _random_gamma1(p, rng, steps=6):
    gens = free_generators(p).generators
    g = ((1, 0), (0, 1))
    for _ in range(steps):
        x = rng.choice(gens)
        g = mul2(g, x if rng.random() < 0.5 else inv2(x))
    return g


@given(st.sampled_from([5, 7]), st.integers(0, 10 ** 6))
@settings(max_examples=40)
def test_rewriting_round_trip(p, seed):
    group = free_generators(p)
    g = _random_gamma1(p, random.Random(seed))
    assert group.evaluate(group.word(g)) == g


def test_rewriting_elementary_matrices():
    group = free_generators(7)
    for g in (((1, 0), (7, 1)), ((1, 0), (-14, 1)), ((8, 1), (7, 1)), ((1, 7), (0, 1))):
        assert group.evaluate(group.word(g)) == g


def test_coset_representatives(setup5):
    assert setup5.d == 5 and setup5.h == ((1, 0), (0, 5))
    for rows in setup5.rho:
        assert all(setup5.group.contains(x) for x in rows)
    for perm in setup5.perm:
        assert sorted(perm) == list(range(5))


def test_eisenstein_weight_two(setup5):
    res = hecke_on_h1(setup5, ReductiveWeight(0, 0))
    assert (res.dim_h1, res.dim_h0) == (3, 1)
    assert res.charpoly == [1, -7, 11, -5]


def test_eisenstein_weight_three(setup5):
    assert hecke_on_h1(setup5, ReductiveWeight(1, 0)).charpoly == [1, -52, 726, -1300, 625]


def test_twist_by_determinant(setup5):
    # det^m multiplies the normalised operator by det(h)^m * det(h^-1)^m = 1
    for k in (0, 2):
        assert hecke_on_h1(setup5, ReductiveWeight(k, 1)).charpoly == hecke_on_h1(setup5, ReductiveWeight(k, 0)).charpoly


@pytest.mark.parametrize("k", [0, 1, 3])
def test_normalisation_scales_by_lambda_h(setup5, k):
    w = ReductiveWeight(k, 0)
    T = hecke_on_cocycles(setup5, w)
    U = unnormalized_hecke_on_cocycles(setup5, w)
    lam = w.value(1, 5)
    assert lam == 5 ** k
    assert all(T[i][j] == lam * U[i][j] for i in range(len(T)) for j in range(len(T)))


@pytest.mark.parametrize("k", range(11))
def test_valuations_and_integrality(setup5, k):
    w = ReductiveWeight(k, 0)
    assert valuation_check(w, 5)
    assert integrality_check(setup5, w)


def test_annihilation(setup5):
    for k in (2, 5, 8):
        w = ReductiveWeight(k, 0)
        for r in range(4):
            assert annihilation_check(setup5, w, r).passed
        assert not annihilation_check(setup5, w, 2, normalized=False).passed
    assert annihilation_check(setup5, ReductiveWeight(4), 0).passed


@pytest.mark.parametrize("p,k", [(5, 0), (5, 4), (7, 3), (11, 2)])
def test_dimension_formula(p, k):
    assert free_rank_dimension_check(free_generators(p), k)


@pytest.mark.parametrize("k", [0, 2, 5])
def test_field_and_lattice_routes_agree(setup5, k):
    res = hecke_on_h1(setup5, ReductiveWeight(k), lattice_route=True)
    assert res.charpoly == res.charpoly_lattice
    assert len(res.charpoly) - 1 == res.dim_h1 == (res.g - 1) * (k + 1) + res.dim_h0


@pytest.mark.parametrize("seed", [3, 17])
def test_representative_independence(setup5, seed):
    other = coset_reps(setup5.group, shuffle=seed)
    assert other.reps != setup5.reps
    for k in (0, 3, 6):
        assert hecke_on_h1(other, ReductiveWeight(k)).charpoly == hecke_on_h1(setup5, ReductiveWeight(k)).charpoly


def _mul(x, y):
    return [[sum(Fraction(x[i][t]) * y[t][j] for t in range(len(y))) for j in range(len(y[0]))] for i in range(len(x))]


@given(st.integers(0, 10 ** 6), st.integers(0, 6))
@settings(max_examples=25)
def test_closed_form_matches_chevalley_product(seed, k):
    g = _random_gamma1(5, random.Random(seed), steps=3)
    (a, b), (c, d) = g
    L = HighestWeightLattice(root_system("A1"), (k,))
    torus = [[Fraction(d) ** (k - 2 * i) if i == j else 0 for j in range(k + 1)] for i in range(k + 1)]
    prod = _mul(_mul(L.chevalley_generator_matrix((-1,), Fraction(b, d)), torus),
                L.chevalley_generator_matrix((1,), Fraction(c, d)))
    assert prod == sym_power(g, k)


@given(st.integers(0, 10 ** 6), st.sampled_from([(4, 2), (10, 2), (7, 3)]))
@settings(max_examples=20)
def test_slot_action_matches_truncation_module(seed, kr):
    k, r = kr
    p = 5
    g = _random_gamma1(p, random.Random(seed), steps=3)
    (a, b), (c, d) = g
    L = HighestWeightLattice(root_system("A1"), (k,), max_height=r)
    T = build_truncation(L, TruncationSpec(p, r))
    word = [((-1,), Fraction(b, d)), ("torus", (d,)), ((1,), Fraction(c, d))]
    got = T.kstar_element_action(word).matrix
    mine = slot_action(g, k, r, p)
    for i, m in enumerate(T.moduli):
        assert [x % m for x in got[i]] == [x % m for x in mine[i]]


def test_truncation_slots():
    assert truncation_slots(10, 2) == [2, 1, 0]
    assert truncation_slots(1, 3) == [3, 2]


def _brute_h1(p, k, r):
    # |H^1| = |M|^(g-1) |M^Gamma| for a free group of rank g
    group = free_generators(p)
    exps = truncation_slots(k, r)
    mods = [p ** e for e in exps]
    acts = [slot_action(x, k, r, p) for x in group.generators]
    fixed = 0
    for v in product(*(range(m) for m in mods)):
        if all(all(sum(A[i][j] * v[j] for j in range(len(v))) % mods[i] == v[i] for i in range(len(v))) for A in acts):
            fixed += 1
    f = 0
    while fixed % p == 0 and fixed > 1:
        fixed //= p
        f += 1
    return (group.rank - 1) * sum(exps) + f, f


@pytest.mark.parametrize("k,r", [(10, 2), (0, 1), (4, 2), (3, 3)])
def test_h1_cardinality_brute_force(k, r):
    assert h1_cardinality(free_generators(5), k, r) == _brute_h1(5, k, r)


def test_h1_cardinality_examples():
    assert h1_cardinality(free_generators(5), 10, 2) == (8, 2)
    assert h1_cardinality(free_generators(5), 0, 1) == (3, 1)
    assert h1_cardinality(free_generators(5), 6, 0) == (0, 0)


def test_load_generators(tmp_path):
    path = tmp_path / "gens.txt"
    path.write_text("# Gamma_1(5)\n" + "\n".join(" ".join(map(str, (a, b, c, d)))
                    for (a, b), (c, d) in free_generators(5).generators) + "\n")
    group = load_generators(str(path), 5)
    assert group.rank == 3
    assert h1_cardinality(group, 10, 2) == (8, 2)
    bad = tmp_path / "bad.txt"
    bad.write_text("2 1 1 1\n")
    with pytest.raises(ValueError):
        load_generators(str(bad), 5)
