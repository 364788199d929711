from fractions import Fraction

import pytest

from forestrep.errors import ContractError
from forestrep.ring import ALPHA, BETA, ONE, ZERO, RingElem


def test_beta_square_reduces():
    assert BETA * BETA == ONE - ALPHA * ALPHA
    assert BETA * BETA == RingElem((1, 0, -1))


def test_term_constructor():
    assert RingElem.term(0, 0) == ONE
    assert RingElem.term(1, 0) == ALPHA
    assert RingElem.term(0, 1) == BETA
    assert RingElem.term(2, 2) == ALPHA * ALPHA * (ONE - ALPHA * ALPHA)
    assert RingElem.term(1, 3) == ALPHA * BETA * (ONE - ALPHA * ALPHA)
    assert RingElem.term(3, 2).is_beta_free()  # even beta powers fold away
    assert not RingElem.term(3, 1).is_beta_free()


def test_arithmetic_identities():
    x = (ALPHA + BETA) * (ALPHA - BETA)
    assert x == ALPHA * ALPHA - (ONE - ALPHA * ALPHA)
    assert (ALPHA + 1) * (ALPHA - 1) == ALPHA * ALPHA - 1
    assert 2 * ALPHA == ALPHA + ALPHA
    assert (ALPHA**5) == ALPHA * ALPHA * ALPHA * ALPHA * ALPHA
    assert ZERO + ALPHA == ALPHA
    assert -ALPHA + ALPHA == ZERO
    assert ALPHA**0 == ONE


def test_eval():
    poly = RingElem.term(6, 0) + RingElem.term(2, 4)  # alpha^6 + alpha^2 (1 - alpha^2)^2
    assert poly.eval(Fraction(1, 2)) == Fraction(10, 64)
    assert poly.eval(Fraction(0)) == 0
    assert poly.eval(Fraction(1)) == 1
    with pytest.raises(ContractError):
        BETA.eval(Fraction(1, 2))


def test_coefficients_serialization():
    poly = RingElem.term(6, 0) + RingElem.term(2, 4)
    assert poly.alpha_coefficients() == (0, 0, 1, 0, -2, 0, 2)
    with pytest.raises(ContractError):
        (ALPHA + BETA).alpha_coefficients()


def test_str():
    assert str(ZERO) == "0"
    assert str(ONE) == "1"
    assert str(ALPHA) == "alpha"
    assert str(BETA) == "beta"
    poly = RingElem.term(6, 0) + RingElem.term(2, 4)
    assert str(poly) == "2*alpha^6 - 2*alpha^4 + alpha^2"
    assert str(ALPHA * ALPHA * BETA) == "beta*alpha^2"
    assert str(ONE - ALPHA) == "-alpha + 1"


def test_hash_consistency():
    a = RingElem.term(2, 2)
    b = (ONE - ALPHA * ALPHA) * ALPHA * ALPHA
    assert a == b and hash(a) == hash(b)
