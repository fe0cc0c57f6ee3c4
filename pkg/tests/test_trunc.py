from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chevtrunc.hwmod import HighestWeightLattice
from chevtrunc.rootsys import root_system
from chevtrunc.trunc import (
    HypothesisError,
    SlotMap,
    TruncationSpec,
    WellDefinednessError,
    build_truncation,
    congruence_exponent,
    kstar_invariance_check,
    local_constancy_check,
    phi_isomorphism,
    s_generators,
    s_invariance_check,
    truncating_submodule,
)

A1, A2, B2 = root_system("A1"), root_system("A2"), root_system("B2")


def trunc(rs, lam, p, r, depth=None):
    L = HighestWeightLattice(rs, lam, max_height=r if depth is None else depth)
    return build_truncation(L, TruncationSpec(p, r))


def test_congruence_exponent():
    assert congruence_exponent(5, 2) == 3
    assert congruence_exponent(2, 1) == 2
    assert congruence_exponent(3, 2) == 3


def test_truncating_submodule_scales():
    L = HighestWeightLattice(A1, (6,), max_height=4)
    assert truncating_submodule(L, TruncationSpec(5, 2)) == [((6 - 2 * j,), max(2 - j, 0)) for j in range(5)]
    assert all(e == 0 for _, e in truncating_submodule(L, TruncationSpec(5, 0)))


def test_cardinalities():
    assert trunc(A1, (10,), 5, 2).cardinality_exponent == 3
    a2 = trunc(A2, (3, 3), 5, 2)
    assert a2.cardinality_exponent == 4 and len(a2.slots) == 6
    assert trunc(A2, (3, 3), 5, 0).cardinality_exponent == 0


def test_slot_exponents_decrease():
    T = trunc(B2, (3, 4), 3, 3)
    assert all(s.exponent == 3 - s.ht for s in T.slots)
    assert T.cardinality_exponent == sum(s.rank * s.exponent for s in T.slots)


def test_sl2_slot_actions():
    T = trunc(A1, (10,), 5, 2)
    f = T.s_generator_action("f", 0, 1).matrix
    e = T.s_generator_action("e", 0, 1).matrix
    assert f[1][0] == 1
    assert e[0][1] == (5 * 10) % 25


def test_large_n_positive_generator_vanishes():
    T = trunc(A2, (3, 3), 5, 2)
    for k in range(3):
        assert T.s_generator_action("e", k, 2).is_zero()


def test_slot_map_rejects_ill_defined():
    with pytest.raises(WellDefinednessError):
        SlotMap((5,), (25,), [[1]])


@pytest.mark.parametrize("rs,lam,p,r", [(A1, (4,), 2, 2), (A2, (2, 3), 3, 1), (B2, (1, 2), 5, 2)])
def test_s_invariance(rs, lam, p, r):
    depth = r + (r + 2) * rs.heights[-1]
    L = HighestWeightLattice(rs, lam, max_height=depth)
    assert s_invariance_check(L, TruncationSpec(p, r)).passed


def test_kstar_empty_word_and_letters():
    p, r = 5, 2
    L = HighestWeightLattice(A1, (3,))
    T = build_truncation(L, TruncationSpec(p, r))
    assert T.kstar_element_action([]).is_identity()
    for root, t in (((-1,), 1), ((1,), p), ((1,), Fraction(p, 3))):
        got = T.kstar_element_action([(root, t)])
        full = L.chevalley_generator_matrix(root, t)
        for i in range(T.dim):
            for j in range(T.dim):
                x = Fraction(full[i][j])
                expect = x.numerator * pow(x.denominator, -1, T.moduli[i]) % T.moduli[i]
                assert got.matrix[i][j] % T.moduli[i] == expect
    with pytest.raises(ValueError):
        T.kstar_element_action([((1,), 1)])


def test_kstar_invariance():
    L = HighestWeightLattice(A2, (3, 2))
    word = [((1, 0), 5), ((0, -1), 2), ((1, 1), 25), ((-1, -1), 7)]
    assert kstar_invariance_check(L, TruncationSpec(5, 2), word)


def test_phi_identity():
    phi = phi_isomorphism(A2, (3, 3), (3, 3), TruncationSpec(5, 2), (0,))
    assert all(m == [[int(i == j) for j in range(len(m))] for i in range(len(m))] for m in phi.blocks.values())


def test_phi_positive_cases():
    spec = TruncationSpec(5, 2)
    phi = phi_isomorphism(A2, (3, 3), (128, 3), spec, (0,))
    assert phi.shape_match and phi.source.cardinality_exponent == phi.target.cardinality_exponent == 4
    assert local_constancy_check(phi).verdict == "pass"
    assert local_constancy_check(phi_isomorphism(A1, (10,), (135,), spec, (0,))).verdict == "pass"
    assert local_constancy_check(phi_isomorphism(A1, (4,), (8,), TruncationSpec(2, 1), (0,))).verdict == "pass"


def test_phi_rejects_hypothesis_violation():
    with pytest.raises(HypothesisError) as exc:
        phi_isomorphism(A2, (3, 3), (28, 3), TruncationSpec(5, 2), (0,))
    assert exc.value.failed == ["congruent"]
    with pytest.raises(HypothesisError):
        phi_isomorphism(A2, (3, 3), (128, 4), TruncationSpec(5, 2), (0,))


def test_constancy_vacuous_at_r0():
    phi = phi_isomorphism(A1, (3,), (4,), TruncationSpec(5, 0), (0,))
    rep = local_constancy_check(phi)
    assert rep.entries == [] and rep.verdict == "pass"


def test_congruence_mod_p_r_suffices():
    # the worst generator is p e from height 1 into height 0, so lambda = lambda' mod p^r is enough
    rep = local_constancy_check(phi_isomorphism(A1, (10,), (35,), TruncationSpec(5, 2), (0,), enforce=False))
    assert not rep.hypotheses["congruent"] and rep.equivariant


def test_sharp_negative_control():
    for rs, lam, lam2 in ((A1, (10,), (11,)), (A2, (3, 3), (4, 3))):
        rep = local_constancy_check(phi_isomorphism(rs, lam, lam2, TruncationSpec(5, 2), (0,), enforce=False))
        assert [g for g, ok in rep.entries if not ok] == ["p^1 e[a1]^(1)"]


@given(st.integers(3, 12), st.integers(1, 3), st.sampled_from([2, 3, 5]))
@settings(max_examples=25)
def test_a1_constancy_property(k, shift, p):
    r = 1 if p == 2 else 2
    spec = TruncationSpec(p, r)
    k = max(k, r + 1)
    phi = phi_isomorphism(A1, (k,), (k + shift * p ** spec.congruence_exponent,), spec, (0,))
    assert local_constancy_check(phi).verdict == "pass"


def test_generator_set_contents():
    gens = s_generators(A2, 2)
    assert ("f", 0, 1) in gens and ("e", 2, 2) in gens
