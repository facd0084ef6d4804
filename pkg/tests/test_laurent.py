import random

import pytest

from ribbonfold.laurent import LaurentPoly


def rand_poly(rng, max_terms=6, max_exp=8, max_coeff=9):
    terms = {}
    for _ in range(rng.randrange(max_terms + 1)):
        terms[rng.randrange(-max_exp, max_exp + 1)] = rng.randrange(-max_coeff, max_coeff + 1)
    return LaurentPoly(terms)


def test_zero_and_one():
    z = LaurentPoly.zero()
    o = LaurentPoly.one()
    assert z.is_zero()
    assert str(z) == "0"
    assert str(o) == "1"
    assert o * o == o
    assert z + o == o
    assert o - o == z


def test_printing_canonical():
    p = LaurentPoly({3: 1, -1: 2, -5: -1})
    assert str(p) == "-A^-5 + 2*A^-1 + A^3"
    assert str(LaurentPoly({1: 1})) == "A"
    assert str(LaurentPoly({1: -1})) == "-A"
    assert str(LaurentPoly({0: -7})) == "-7"
    assert str(LaurentPoly({0: 4, 2: -3})) == "4 - 3*A^2"


def test_normalization_drops_zero_terms():
    p = LaurentPoly({2: 1, 5: 0})
    assert p.coeffs() == {2: 1}
    q = LaurentPoly([(1, 3), (1, -3)])
    assert q.is_zero()


def test_monomial_and_power():
    m = LaurentPoly.monomial(-1, 3)  # -A^3
    assert str(m) == "-A^3"
    assert str(m ** 2) == "A^6"
    assert str(m ** 3) == "-A^9"
    assert m ** 0 == LaurentPoly.one()
    with pytest.raises(ValueError):
        m ** -1


def test_mirror_involution_and_span():
    p = LaurentPoly({-2: 3, 0: 1, 4: -2})
    assert p.mirror() == LaurentPoly({2: 3, 0: 1, -4: -2})
    assert p.mirror().mirror() == p
    assert p.span() == 6
    assert p.min_exp() == -2 and p.max_exp() == 4
    with pytest.raises(ValueError):
        LaurentPoly.zero().span()


def test_ring_axioms_random():
    rng = random.Random(20260818)
    for _ in range(200):
        a, b, c = (rand_poly(rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a + LaurentPoly.zero() == a
        assert a * LaurentPoly.one() == a
        assert a - a == LaurentPoly.zero()
        assert (a * b).mirror() == a.mirror() * b.mirror()
        assert (a + b).mirror() == a.mirror() + b.mirror()


def test_hashable_and_immutable():
    p = LaurentPoly({1: 2})
    q = LaurentPoly({1: 2})
    assert hash(p) == hash(q)
    assert len({p, q}) == 1
    with pytest.raises(AttributeError):
        p._coeffs = {}
