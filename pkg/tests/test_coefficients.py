import random
from fractions import Fraction

import pytest

from forestrep.coefficients import (
    RTensor,
    farley_matches_phi,
    farley_norm,
    farley_phi,
    gram_psd_check,
    partition_function,
    phi_alpha,
    phi_alpha_eval,
    phi_expansion,
    vanishing_scan,
    word_window_tensor,
)
from forestrep.errors import ContractError
from forestrep.oracles import operator_apply, random_elements
from forestrep.ring import ALPHA, BETA, ONE, RingElem
from forestrep.thompson import Perm, VElement, family_gn, named_tree
from forestrep.trees import LEAF, Forest, caret, enumerate_forests, parse_tree


def remark_element() -> VElement:
    t = parse_tree("f3 f1 f1")
    return VElement(t, t, Perm((3, 2, 1, 4)))


def two_symbol_tensor() -> RTensor:
    return RTensor(
        (1, 2),
        {(1, 1, 1): Fraction(3, 5), (1, 2, 2): Fraction(4, 5), (2, 1, 2): Fraction(1)},
    )


# ---------------------------------------------------------------------------
# tensors and the partition function

def test_rtensor_isometry_check():
    two_symbol_tensor()
    with pytest.raises(ContractError):
        RTensor((1,), {(1, 1, 1): Fraction(1, 2)})
    with pytest.raises(ContractError):
        RTensor((1,), {(1, 1, 2): Fraction(1)})
    # symbolic check holds in the ring, hence for every parameter
    RTensor(
        ("", "x"),
        {("", "", ""): ALPHA, ("", "x", "x"): BETA, ("x", "x", ""): ONE},
        check_isometry=True,
    )


def test_partition_function_trivial_forest():
    R = two_symbol_tensor()
    f = Forest((LEAF, LEAF))
    assert partition_function(f, R, (1, 2), (1, 2)) == 1
    assert partition_function(f, R, (1, 2), (2, 1)) == 0


def test_partition_function_single_caret():
    R = RTensor((1,), {(1, 1, 1): Fraction(1)})
    f = Forest((caret(LEAF, LEAF),))
    assert partition_function(f, R, (1,), (1, 1)) == 1


def test_partition_function_boundary_validation():
    R = two_symbol_tensor()
    f = Forest((caret(LEAF, LEAF),))
    with pytest.raises(ContractError):
        partition_function(f, R, (1, 1), (1, 1))
    with pytest.raises(ContractError):
        partition_function(f, R, (1,), (1,))
    with pytest.raises(ContractError):
        partition_function(f, R, (3,), (1, 1))


def test_partition_function_matches_operator_route_small():
    import itertools

    R = two_symbol_tensor()
    for m in range(1, 5):
        for f in enumerate_forests(m):
            for in_idx in itertools.product(R.indices, repeat=f.root_count):
                table = operator_apply(f, R, in_idx)
                for out_idx in itertools.product(R.indices, repeat=m):
                    assert partition_function(f, R, in_idx, out_idx) == table.get(out_idx, 0)


# ---------------------------------------------------------------------------
# the interpolation expansion

def test_phi_expansion_leaf():
    assert phi_expansion(LEAF) == ((ONE, ("",)),)


def test_phi_expansion_full_tree():
    t = parse_tree("f3 f1 f1")
    terms = {words: coeff for coeff, words in phi_expansion(t)}
    a2b = ALPHA * ALPHA * BETA
    assert terms == {
        ("", "", "", ""): ALPHA**3,
        ("", "", "a", "b"): a2b,
        ("a", "b", "", ""): a2b,
        ("a", "b", "a", "b"): ALPHA * BETA * BETA,
        ("aa", "ba", "ab", "bb"): BETA,
    }


def test_phi_expansion_is_isometric_on_vacuum():
    for text in (".", "f1", "f3 f1 f1", "f3 f3 f1 f1", "f4 f3 f2 f1"):
        t = parse_tree(text)
        total = RingElem()
        for coeff, _ in phi_expansion(t):
            total = total + coeff * coeff
        assert total == ONE
        numeric = sum(
            (coeff * coeff for coeff, _ in phi_expansion(t)), RingElem()
        ).eval(Fraction(1, 2))
        assert numeric == 1


def test_window_tensor_agrees_with_expansion():
    from forestrep.trees import enumerate_trees

    for n in range(1, 7):
        for t in enumerate_trees(n):
            terms = phi_expansion(t)
            R = word_window_tensor(w for _, words in terms for w in words)
            f = Forest((t,))
            for coeff, words in terms:
                assert partition_function(f, R, ("",), words) == coeff
            # a boundary outside the expansion support vanishes
            if n >= 2:
                bogus = ("a",) * n
                assert partition_function(f, R, ("",), bogus) == 0


# ---------------------------------------------------------------------------
# phi_alpha

def test_phi_alpha_identity():
    assert phi_alpha(VElement.identity()) == ONE


def test_phi_alpha_generator_is_fourth_power():
    g = VElement(named_tree("d"), named_tree("c"))
    assert phi_alpha(g) == RingElem.term(4, 0)


def test_phi_alpha_remark_element():
    poly = phi_alpha(remark_element())
    expected = RingElem.term(6, 0) + RingElem.term(2, 0) * (ONE - ALPHA * ALPHA) ** 2
    assert poly == expected
    assert poly != RingElem.term(6, 0)
    assert phi_alpha_eval(remark_element(), Fraction(1, 2)) == Fraction(10, 64)


def test_phi_alpha_limits():
    rng = random.Random(2)
    for g in random_elements(20, 6, seed=77, nonidentity=True):
        assert phi_alpha_eval(g, Fraction(0)) == 0
        assert phi_alpha_eval(g, Fraction(1)) == 1
        value = phi_alpha_eval(g, Fraction(rng.randint(0, 8), 8))
        assert 0 <= value <= 1
        assert phi_alpha(g) == phi_alpha(~g)


def test_phi_alpha_eval_contract():
    with pytest.raises(ContractError):
        phi_alpha_eval(VElement.identity(), Fraction(3, 2))
    with pytest.raises(ContractError):
        phi_alpha_eval(VElement.identity(), Fraction(-1, 2))


def test_phi_alpha_beta_free_on_samples():
    for g in random_elements(15, 5, seed=99):
        assert phi_alpha(g).is_beta_free()


def test_phi_alpha_nonvanishing_family():
    lower = Fraction(9, 64)
    for n in range(2, 7):
        value = phi_alpha_eval(family_gn(n), Fraction(1, 2))
        assert value >= lower


def test_phi_alpha_representative_independent():
    # same group element written with inflated trees gives the same polynomial
    from forestrep.oracles import _inflated_representative

    rng = random.Random(41)
    for g in random_elements(8, 4, seed=55):
        raw = _inflated_representative(g, rng)
        assert VElement(*raw) == g
        assert phi_alpha(VElement(*raw)) == phi_alpha(g)


# ---------------------------------------------------------------------------
# comparison family

def test_farley_norm_and_match():
    assert farley_norm(VElement.identity()) == 0
    value = farley_phi(VElement.identity(), Fraction(1, 2))
    assert value.exponent == 0 and value.as_float() == 1.0
    g = VElement(named_tree("d"), named_tree("c"))
    assert farley_norm(g) == 4
    assert farley_matches_phi(g)
    assert not farley_matches_phi(remark_element())
    with pytest.raises(ContractError):
        farley_phi(g, Fraction(-1))


def test_farley_matches_on_rotation_pairs():
    from forestrep.coefficients import reduced_rotation_elements

    for g in reduced_rotation_elements(4):
        assert farley_matches_phi(g)


# ---------------------------------------------------------------------------
# gram matrices

def test_gram_singleton_and_pair():
    assert gram_psd_check([VElement.identity()], Fraction(1, 2)).is_psd
    rot = VElement(caret(LEAF, LEAF), caret(LEAF, LEAF), Perm((2, 1)))
    result = gram_psd_check([VElement.identity(), rot], Fraction(1, 2))
    assert result.is_psd and result.witness is None


def test_gram_random_sets():
    for seed in (1, 2):
        elements = random_elements(6, 5, seed=seed)
        for alpha in (Fraction(1, 4), Fraction(3, 4)):
            assert gram_psd_check(elements, alpha).is_psd


def test_gram_duplicates_singular_but_psd():
    rot = VElement(caret(LEAF, LEAF), caret(LEAF, LEAF), Perm((2, 1)))
    result = gram_psd_check([rot, rot], Fraction(1, 2))
    assert result.is_psd


def test_psd_ldlt_witnesses():
    from forestrep.coefficients import psd_ldlt

    ok = psd_ldlt([[2, 1], [1, 2]])
    assert ok.is_psd and ok.witness is None
    bad = psd_ldlt([[1, 2], [2, 1]])
    assert not bad.is_psd
    assert bad.witness["kind"] == "negative_pivot"
    hollow = psd_ldlt([[0, 1], [1, 0]])
    assert not hollow.is_psd
    assert hollow.witness["kind"] == "zero_pivot_offdiagonal"
    assert psd_ldlt([[0, 0], [0, 0]]).is_psd
    assert psd_ldlt([]).is_psd


def test_gram_alpha_contract():
    with pytest.raises(ContractError):
        gram_psd_check([VElement.identity()], Fraction(2))


# ---------------------------------------------------------------------------
# vanishing scan

def test_vanishing_scan_small():
    rows = vanishing_scan(Fraction(1, 2), 4)
    assert [r.leaves for r in rows] == [1, 2, 3, 4]
    assert rows[0].count == 1 and rows[0].phi_value == 1
    assert rows[2].phi_value == Fraction(1, 16)
    for r in rows:
        assert r.max_deviation == 0
    assert rows[3].phi_value == Fraction(1, 64)


def test_vanishing_scan_contract():
    with pytest.raises(ContractError):
        vanishing_scan(Fraction(1, 2), 20)
    with pytest.raises(ContractError):
        vanishing_scan(Fraction(3, 2), 3)
