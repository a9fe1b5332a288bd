from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burau4.braid import DELTA
from burau4.laurent import (
    ONE,
    Q,
    ZERO,
    BurauMatrix,
    LaurentPoly,
    burau_delta_power,
    burau_generator,
    burau_of_word,
    leading,
    reduce_mod,
    row_multiple_leading_nonzero,
    specialize_rational,
)

polys = st.dictionaries(st.integers(-6, 6), st.integers(-9, 9), max_size=5).map(LaurentPoly)
words = st.lists(st.sampled_from([1, 2, 3, -1, -2, -3]), max_size=16)


def mat(rows):
    return BurauMatrix([[LaurentPoly(e) for e in row] for row in rows])


# ---------------------------------------------------------------------------
# polynomials

def test_zero_coefficients_are_dropped():
    p = LaurentPoly({2: 0, 1: 3})
    assert p.terms == {1: 3}
    assert LaurentPoly({}) == ZERO and ZERO.is_zero()


def test_text_form_is_descending():
    p = LaurentPoly({-1: 2, 3: -1, 0: 5})
    assert str(p) == "-1*q^3 + 5*q^0 + 2*q^-1"
    assert LaurentPoly.parse(str(p)) == p


def test_json_round_trip():
    p = LaurentPoly({4: -2, -3: 7})
    assert p.to_json() == [[4, -2], [-3, 7]]
    assert LaurentPoly.from_json(p.to_json()) == p


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert a - a == ZERO
    assert a * ONE == a


@given(polys)
def test_parse_inverts_str(p):
    assert LaurentPoly.parse(str(p)) == p


def test_leading_examples():
    ld = leading(LaurentPoly({5: 3, 1: -1}))
    assert (ld.degree, ld.coefficient) == (5, 3)
    assert leading(ZERO) is None
    ld = leading(burau_of_word([1, 2, 1]).entry(2, 1))
    assert (ld.degree, ld.coefficient) == (2, -1)


def test_reduce_examples():
    assert LaurentPoly({3: 5, 0: -3}).mod(5) == LaurentPoly({0: 2})
    s1 = burau_generator(1)
    assert reduce_mod(s1, 5) == mat([[{1: 1}, {}, {}], [{1: 4}, {0: 1}, {}], [{}, {}, {0: 1}]])
    sq = burau_of_word([1, 1])
    assert sq == mat([[{2: 1}, {}, {}], [{2: -1, 1: -1}, {0: 1}, {}], [{}, {}, {0: 1}]])
    assert reduce_mod(sq, 2) == mat([[{2: 1}, {}, {}], [{2: 1, 1: 1}, {0: 1}, {}], [{}, {}, {0: 1}]])


def test_reduce_mod_rejects_composite():
    with pytest.raises(ValueError):
        reduce_mod(BurauMatrix.identity(), 6)


@given(words, words, st.sampled_from([2, 3, 5, 7]))
@settings(max_examples=40)
def test_reduce_mod_commutes_with_product(u, v, t):
    a, b = burau_of_word(u), burau_of_word(v)
    assert reduce_mod(a @ b, t) == reduce_mod(reduce_mod(a, t) @ reduce_mod(b, t), t)


# ---------------------------------------------------------------------------
# generators and words

def test_generator_matrices_exact():
    assert burau_generator(1) == mat([[{1: 1}, {}, {}], [{1: -1}, {0: 1}, {}], [{}, {}, {0: 1}]])
    assert burau_generator(2) == mat([[{0: 1}, {0: 1}, {}], [{}, {1: 1}, {}], [{}, {1: -1}, {0: 1}]])
    assert burau_generator(3) == mat([[{0: 1}, {}, {}], [{}, {0: 1}, {0: 1}], [{}, {}, {1: 1}]])


@pytest.mark.parametrize("i", [1, 2, 3])
def test_inverse_contract(i):
    assert (burau_generator(i, True) @ burau_generator(i)).is_identity()
    assert (burau_generator(i) @ burau_generator(i, True)).is_identity()


@pytest.mark.parametrize("lhs,rhs", [((1, 2, 1), (2, 1, 2)), ((2, 3, 2), (3, 2, 3)), ((1, 3), (3, 1))])
def test_artin_relations(lhs, rhs):
    assert burau_of_word(lhs) == burau_of_word(rhs)


def test_empty_word_is_identity():
    assert burau_of_word([]).is_identity()


@given(words, words)
@settings(max_examples=60)
def test_homomorphism(u, v):
    assert burau_of_word(u + v) == burau_of_word(u) @ burau_of_word(v)


@given(words)
@settings(max_examples=60)
def test_determinant_is_power_of_q(w):
    e = sum(1 if g > 0 else -1 for g in w)
    assert burau_of_word(w).determinant() == LaurentPoly({e: 1})


# ---------------------------------------------------------------------------
# Delta powers

def test_delta_closed_form_small_cases():
    assert burau_delta_power(0).is_identity()
    assert burau_delta_power(1) == mat([[{}, {}, {1: 1}], [{}, {2: -1}, {}], [{3: 1}, {}, {}]])
    assert burau_delta_power(2) == BurauMatrix.identity().scale(LaurentPoly({4: 1}))
    assert burau_delta_power(2) == burau_of_word(DELTA * 2)


def test_printed_odd_form_differs_from_product():
    printed = mat([[{}, {3: -1}, {}], [{1: -1}, {}, {}], [{}, {}, {2: -1}]])
    assert printed != burau_of_word(DELTA)


@pytest.mark.parametrize("k", range(-6, 7))
def test_delta_power_matches_word(k):
    w = DELTA * k if k >= 0 else tuple(-g for g in reversed(DELTA)) * (-k)
    assert burau_delta_power(k) == burau_of_word(w)


# ---------------------------------------------------------------------------
# specialisation and rows

def test_specialize_examples():
    ident = specialize_rational(BurauMatrix.identity(), 3, 7)
    assert ident == [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    assert specialize_rational(burau_generator(1), 2, 1) == [[2, 0, 0], [-2, 1, 0], [0, 0, 1]]
    assert specialize_rational(burau_of_word(DELTA), 1, 2) == specialize_rational(burau_delta_power(1), 1, 2)


def test_specialize_at_zero_with_negative_powers():
    with pytest.raises(ZeroDivisionError):
        specialize_rational(burau_generator(1, True), 0, 1)


def test_row_multiple_leading_examples():
    assert not row_multiple_leading_nonzero(BurauMatrix.identity(), 1, 5)
    s121 = burau_of_word([1, 2, 1])
    # row 2 is (-q^2, 0, 0); row 3 is (q^2, -q, 1)
    assert [str(s121.entry(2, j)) for j in (1, 2, 3)] == ["-1*q^2", "0", "0"]
    assert not row_multiple_leading_nonzero(s121, 2, 5)
    assert row_multiple_leading_nonzero(s121, 3, 5)
    assert not row_multiple_leading_nonzero(burau_of_word(DELTA), 1, 7)


def test_row_leading_respects_modulus():
    m = mat([[{2: 5, 0: 1}, {1: 1}, {}], [{}, {0: 1}, {}], [{}, {}, {0: 1}]])
    assert row_multiple_leading_nonzero(m, 1, 7)
    assert not row_multiple_leading_nonzero(m, 1, 5)


def test_q_constant():
    assert Q * Q == LaurentPoly({2: 1})
