from fractions import Fraction

from forestrep.coefficients import RTensor
from forestrep.oracles import (
    check_cyclic_forest_lemma,
    check_partition_operator_agreement,
    check_reduction_soundness,
    check_term_parity,
    check_vacuum_pairing,
    check_word_injectivity,
    forest_split_sequence,
    operator_coefficient,
    random_elements,
)
from forestrep.thompson import Perm, VElement
from forestrep.trees import LEAF, Forest, caret, parse_forest, parse_tree


def test_word_injectivity_small():
    report = check_word_injectivity(6)
    assert report["violations"] == 0
    assert report["instances"] == 1 + 1 + 2 + 5 + 14 + 42


def test_word_injectivity_trivial_case():
    report = check_word_injectivity(2)
    assert report["violations"] == 0


def test_cyclic_forest_lemma_small():
    report = check_cyclic_forest_lemma(5)
    assert report["violations"] == 0
    assert report["matches"] >= report["bound"]  # p = q with zero shift always matches


def test_term_parity_specific_elements():
    t = parse_tree("f3 f1 f1")
    remark = VElement(t, t, Perm((3, 2, 1, 4)))
    report = check_term_parity(elements=[VElement.identity(), remark])
    assert report["violations"] == 0
    # identity contributes its single matched pair, the exchange two more
    assert report["instances"] == 3


def test_term_parity_exhaustive_small():
    report = check_term_parity(max_leaves=4)
    assert report["violations"] == 0
    assert report["instances"] > 0


def test_reduction_soundness_quick():
    report = check_reduction_soundness(samples=60, seed=7)
    assert report["violations"] == 0
    assert report["speculative_candidates"] >= 0


def test_forest_split_sequence_round_trip():
    from forestrep.trees import compose, elementary_forest, trivial_forest

    f = parse_forest("f1 f1;f2 f1")
    rebuilt = trivial_forest(f.root_count)
    for pos in forest_split_sequence(f):
        rebuilt = compose(elementary_forest(pos, rebuilt.leaf_count), rebuilt)
    assert rebuilt == f


def test_operator_coefficient_direct():
    R = RTensor((1,), {(1, 1, 1): Fraction(1)})
    f = Forest((caret(LEAF, LEAF),))
    assert operator_coefficient(f, R, (1,), (1, 1)) == 1


def test_partition_operator_agreement_small():
    R = RTensor(
        (1, 2),
        {(1, 1, 1): Fraction(3, 5), (1, 2, 2): Fraction(4, 5), (2, 1, 2): Fraction(1)},
    )
    report = check_partition_operator_agreement(R, 4)
    assert report["violations"] == 0


def test_vacuum_pairing_small():
    report = check_vacuum_pairing(4)
    assert report["violations"] == 0
    assert report["instances"] > 500


def test_random_elements_deterministic():
    a = random_elements(5, 4, seed=3)
    b = random_elements(5, 4, seed=3)
    assert a == b
    assert all(not g.is_identity() for g in random_elements(5, 4, seed=3, nonidentity=True))
