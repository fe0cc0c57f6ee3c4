from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chevtrunc.hwmod import (
    DimensionCapExceeded,
    HighestWeightLattice,
    freudenthal_multiplicities,
    maximal_submodule,
    verma_weight_basis,
    weight_lattice_index,
    weyl_dimension,
)
from chevtrunc.intlinalg import det_bareiss, elementary_divisors
from chevtrunc.rootsys import root_system


def test_verma_basis_examples():
    a2 = root_system("A2")
    assert verma_weight_basis(a2, (2, 1), (2, 1)).dim == 1
    assert verma_weight_basis(root_system("A1"), (4,), (2,)).monomials == ((1,),)
    # lambda - alpha1 - alpha2: f1 f2 and f_{1+2}
    assert verma_weight_basis(a2, (1, 1), (0, 0)).dim == 2


def test_maximal_submodule_top_is_zero():
    assert maximal_submodule(root_system("A2"), (2, 1), (2, 1)).rank == 0


def test_maximal_submodule_a1_below_module():
    U = maximal_submodule(root_system("A1"), (2,), (-4,))
    assert U.verma_dim == 1 and U.rank == 1


def test_maximal_submodule_a2_standard():
    rs = root_system("A2")
    U = maximal_submodule(rs, (1, 0), (0, -1))
    assert (U.verma_dim, U.rank) == (2, 1)
    assert HighestWeightLattice(rs, (1, 0)).dim_total == 3


def test_a1_weight_spaces():
    L = HighestWeightLattice(root_system("A1"), (6,))
    assert [(mu, L.mult(mu)) for mu in L.weights()] == [((6 - 2 * j,), 1) for j in range(7)]


def test_a2_adjoint():
    L = HighestWeightLattice(root_system("A2"), (1, 1))
    assert L.dim_total == 8 and L.mult((0, 0)) == 2


@pytest.mark.parametrize("label,lam", [
    ("A1", (5,)), ("A2", (2, 1)), ("A2", (4, 4)), ("B2", (1, 1)), ("B2", (2, 3)),
    ("C2", (1, 2)), ("G2", (1, 0)), ("G2", (0, 1)), ("A3", (1, 0, 1)),
])
def test_dimensions_match_oracles(label, lam):
    rs = root_system(label)
    L = HighestWeightLattice(rs, lam)
    assert L.dim_total == weyl_dimension(rs, lam)
    assert {mu: L.mult(mu) for mu in L.weights()} == freudenthal_multiplicities(rs, lam)


@pytest.mark.parametrize("label,lam", [("A2", (2, 1)), ("B2", (1, 1)), ("G2", (1, 0))])
def test_serre_relations_and_generation(label, lam):
    L = HighestWeightLattice(root_system(label), lam)
    assert L.serre_check()
    assert L.generated_by_negative_part()


@pytest.mark.parametrize("label,lam", [("A2", (2, 2)), ("B2", (1, 2))])
def test_exactness_and_saturation(label, lam):
    L = HighestWeightLattice(root_system(label), lam)
    for mu, sp in L.spaces.items():
        assert len(sp.monomials) == len(sp.u_basis) + sp.mult
        if sp.u_basis:
            cols = [[v[i] for v in sp.u_basis] for i in range(len(sp.monomials))]
            assert all(d in (0, 1) for d in elementary_divisors(cols))


def test_h_acts_by_weight():
    L = HighestWeightLattice(root_system("B2"), (1, 1))
    for i in range(2):
        for mu, (tgt, m) in L.generator_action("h", i).items():
            assert tgt == mu and all(m[r][c] == (mu[i] if r == c else 0) for r in range(len(m)) for c in range(len(m)))


def test_e_kills_highest_weight():
    rs = root_system("A2")
    L = HighestWeightLattice(rs, (2, 1))
    for k in range(len(rs.positive_roots)):
        assert (2, 1) not in L.generator_action("e", k)


def test_sl2_divided_power_action():
    k = 7
    L = HighestWeightLattice(root_system("A1"), (k,))
    f = L.generator_action("f", 0)
    e = L.generator_action("e", 0)
    assert f[(k,)] == ((k - 2,), [[1]])
    for j in range(1, k + 1):
        tgt, m = e[(k - 2 * j,)]
        assert tgt == (k - 2 * j + 2,) and m == [[k - j + 1]]


def test_divided_powers_integral():
    rs = root_system("G2")
    L = HighestWeightLattice(rs, (0, 1))
    for kind in "ef":
        for k in range(len(rs.positive_roots)):
            for n in (1, 2, 3):
                for _, (_, m) in L.generator_action(kind, k, n).items():
                    assert all(isinstance(x, int) for row in m for x in row)


def test_chevalley_generator_standard_reps():
    a1 = HighestWeightLattice(root_system("A1"), (1,))
    assert a1.chevalley_generator_matrix((1,), 7) == [[1, 7], [0, 1]]
    assert a1.chevalley_generator_matrix((1,), 0) == [[1, 0], [0, 1]]
    a2 = HighestWeightLattice(root_system("A2"), (1, 0))
    assert a2.chevalley_generator_matrix((1, 0), 7) == [[1, 7, 0], [0, 1, 0], [0, 0, 1]]


@given(st.sampled_from([("A2", (1, 1)), ("B2", (0, 1)), ("G2", (1, 0))]), st.data())
@settings(max_examples=20)
def test_chevalley_generator_determinant_one(case, data):
    label, lam = case
    rs = root_system(label)
    L = HighestWeightLattice(rs, lam)
    root = data.draw(st.sampled_from(list(rs.positive_roots) + [tuple(-x for x in r) for r in rs.positive_roots]))
    t = Fraction(data.draw(st.integers(-9, 9)), data.draw(st.integers(1, 5)))
    m = L.chevalley_generator_matrix(root, t)
    den = 1
    for row in m:
        for x in row:
            den = den * Fraction(x).denominator
    scaled = [[int(Fraction(x) * den) for x in row] for row in m]
    assert det_bareiss(scaled) == den ** len(m)


def test_weight_lattice_index():
    assert weight_lattice_index(root_system("A1"), (1,)).f == 1
    assert weight_lattice_index(root_system("A1"), (2,)).f == 2
    assert weight_lattice_index(root_system("A2"), (1, 0)).f == 1


def test_dimension_cap():
    with pytest.raises(DimensionCapExceeded):
        HighestWeightLattice(root_system("A2"), (9, 9), dim_cap=100)
