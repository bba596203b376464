from fractions import Fraction

import pytest

from opcoact.core.polyring import (
    MonomialOrder,
    Polynomial,
    format_polynomial,
    poly_eval,
    poly_substitute,
    var,
)
from opcoact.utils.errors import InputError, RingModeError


def X(s: int, i: int) -> Polynomial:
    return Polynomial.variable(var(s, i))


def G(s: int, i: int, pi: int) -> Polynomial:
    return Polynomial.variable(var(s, i, cdeg=pi), graded=True)


def test_zero_terms_are_pruned():
    p = X(1, 1) + X(1, 2) - X(1, 1)
    assert p == X(1, 2)
    assert not (p - p)
    assert (p - p).is_zero()


def test_plain_product_commutes():
    assert X(1, 1) * X(2, 2) == X(2, 2) * X(1, 1)
    assert (X(1, 1) + 1) ** 2 == X(1, 1) * X(1, 1) + 2 * X(1, 1) + 1


def test_odd_variables_anticommute_and_square_to_zero():
    a, b = G(1, 2, 1), G(1, 1, 1)
    assert a * b == -(b * a)
    assert not a * a
    even = G(2, 2, 0)
    assert even * a == a * even


def test_odd_square_written_directly_is_zero():
    odd, even = var(1, 2, cdeg=1), var(1, 1)
    p = Polynomial({((odd, 2),): 1, ((even, 2),): 3}, graded=True)
    assert p == 3 * G(1, 1, 0) * G(1, 1, 0)
    assert Polynomial({((odd, 2),): 1}).terms == {((odd, 2),): 1}


def test_product_follows_written_order():
    a, b = var(1, 2, cdeg=1), var(1, 1, cdeg=1)
    assert Polynomial.product(1, [a, b], graded=True) == -Polynomial.product(1, [b, a], graded=True)
    assert not Polynomial.product(3, [a, a], graded=True)


def test_mixing_ring_modes_is_rejected():
    with pytest.raises(RingModeError):
        X(1, 1) + G(1, 1, 0)


def test_float_coefficients_are_rejected():
    with pytest.raises(InputError):
        Polynomial.constant(0.5)


def test_eval_and_substitute():
    p = X(1, 1) - X(1, 1) * X(2, 2) + X(2, 1) * X(1, 2)
    point = {var(1, 1): 2, var(1, 2): Fraction(1, 2), var(2, 1): 4, var(2, 2): 1}
    assert poly_eval(p, point) == 2
    images = {var(1, 1): X(1, 1), var(1, 2): X(1, 2), var(2, 1): Polynomial(), var(2, 2): Polynomial.constant(1)}
    assert not poly_substitute(p, images)
    with pytest.raises(InputError):
        poly_eval(p, {var(1, 1): 1})


def test_graded_polynomials_cannot_be_evaluated():
    with pytest.raises(RingModeError):
        poly_eval(G(1, 1, 0), {var(1, 1): 1})


def test_rename_block_keeps_coordinates():
    p = X(1, 2) * X(2, 1)
    q = p.rename_block(2)
    assert q.variables() == {var(1, 2, block=2), var(2, 1, block=2)}
    assert q.rename_block(0) == p


def test_degrevlex_and_lex_leading_terms():
    p = X(1, 1) - X(1, 1) * X(2, 2) + X(2, 1) * X(1, 2)
    lead, coeff = p.leading(MonomialOrder.DEGREVLEX)
    assert lead == ((var(1, 2), 1), (var(2, 1), 1))
    assert coeff == 1
    lex_lead, lex_coeff = p.leading(MonomialOrder.LEX)
    assert lex_lead == ((var(1, 1), 1), (var(2, 2), 1))
    assert lex_coeff == -1


def test_format_polynomial():
    p = X(1, 1) - X(1, 1) * X(2, 2) + X(2, 1) * X(1, 2)
    assert format_polynomial(p) == "X[1][2]*X[2][1] - X[1][1]*X[2][2] + X[1][1]"
    assert format_polynomial(Polynomial()) == "0"
    assert format_polynomial(2 * X(1, 1) ** 3) == "2*X[1][1]^3"
    assert format_polynomial(G(1, 2, 1) * G(2, 2, 0)) == "X(0)[2][2]*X(1)[1][2]"
