import random

import pytest
from hypothesis import given, settings, strategies as st

from rochehecke.errors import NotInvertible, PrecisionError
from rochehecke.ring import (CyclotomicField, Laurent, cyclotomic_polynomial, field,
                             prime_power, unit_inverse_mod)

F2, F5 = field(2), field(5)


def poly(F, *cs, prec=None):
    return Laurent(F, 0, cs, prec)


def test_monomial_inverse_product():
    assert Laurent.monomial(F5, 1) * Laurent.monomial(F5, -1) == Laurent.const(F5, 1)


def test_polynomial_identity():
    assert poly(F5, 1, 1) * poly(F5, 1, 4) == poly(F5, 1, 0, 4)


def test_truncated_square():
    a = poly(F5, 1, 1, prec=3)
    b = a * a
    assert b.prec == 3
    assert b.coeffs_between(0, 3) == (1, 2, 1)
    with pytest.raises(PrecisionError):
        b.coeff(3)


def test_unit_inverse_examples():
    assert unit_inverse_mod(poly(F2, 1, 1), 3).coeffs_between(0, 3) == (1, 1, 1)
    inv = unit_inverse_mod(Laurent.monomial(F2, 1), 4)
    assert inv.valuation() == -1 and inv.coeff(-1) == 1
    # (2 + t)(a + b t) = 1 mod t^2 over F_5 solved degree by degree
    a = next(x for x in range(5) if (2 * x) % 5 == 1)
    b = next(y for y in range(5) if (2 * y + a) % 5 == 0)
    assert unit_inverse_mod(poly(F5, 2, 1), 2).coeffs_between(0, 2) == (a, b)


def test_unit_inverse_of_zero():
    with pytest.raises(NotInvertible):
        unit_inverse_mod(Laurent.zero(F5), 3)


def test_prime_power():
    assert prime_power(9) == (3, 2)
    with pytest.raises(ValueError):
        prime_power(6)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_field_axioms(q):
    F = field(q)
    els = range(q)
    for a in els:
        assert F.add[a][F.neg[a]] == 0
        if a:
            assert F.mul[a][F.inv[a]] == 1
        for b in els:
            for c in els:
                assert F.mul[a][F.add[b][c]] == F.add[F.mul[a][b]][F.mul[a][c]]
    assert len({F.pow(F.gen, k) for k in range(q - 1)}) == q - 1


def laurents(F, prec=None):
    return st.builds(lambda v, cs: Laurent(F, v, cs, prec), st.integers(-3, 3),
                     st.lists(st.integers(0, F.q - 1), max_size=6))


@settings(max_examples=200, deadline=None)
@given(laurents(F5), laurents(F5), laurents(F5))
def test_ring_axioms_exact(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a


@settings(max_examples=200, deadline=None)
@given(laurents(F5, 8), laurents(F5, 8), laurents(F5, 8))
def test_ring_axioms_truncated(a, b, c):
    # compare below the common precision only
    lhs, rhs = (a * b) * c, a * (b * c)
    P = min(lhs.prec, rhs.prec)
    lo = min(lhs.val_or(P), rhs.val_or(P))
    assert lhs.coeffs_between(lo, P) == rhs.coeffs_between(lo, P)
    lhs, rhs = a * (b + c), a * b + a * c
    P = min(lhs.prec, rhs.prec)
    lo = min(lhs.val_or(P), rhs.val_or(P))
    assert lhs.coeffs_between(lo, P) == rhs.coeffs_between(lo, P)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_unit_inverse_round_trip(q):
    F = field(q)
    rng = random.Random(q)
    for _ in range(250):
        L = rng.randint(1, 12)
        v = rng.randint(-3, 3)
        a = Laurent(F, v, [rng.randrange(1, q)] + [rng.randrange(q) for _ in range(rng.randint(0, 8))])
        prod = a * unit_inverse_mod(a, L)
        assert prod.coeffs_between(min(0, prod.val_or(0)), L) == \
            Laurent.const(F, 1).coeffs_between(min(0, prod.val_or(0)), L)


def test_cyclotomic_examples():
    K6, K4, K3 = CyclotomicField(6), CyclotomicField(4), CyclotomicField(3)
    assert K6.zeta(1) * K6.zeta(5) == K6.one()
    assert K4.zeta(1) * K4.zeta(1) == K4.rational(-1)
    assert (K3.one() + K3.zeta(1) + K3.zeta(2)).is_zero()


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6, 8, 12, 18, 36])
def test_minimal_polynomial_relation(m):
    K = CyclotomicField(m)
    phi = cyclotomic_polynomial(m)
    acc = K.zero()
    for k, a in enumerate(phi):
        acc = acc + K.zeta(k) * K.rational(a)
    assert acc.is_zero()
    assert K.zeta(m) == K.one()
    for a in range(m):
        for b in range(m):
            assert K.zeta(a) * K.zeta(b) == K.zeta(a + b)


def test_rationals_embed_injectively():
    K = CyclotomicField(12)
    vals = [0, 1, -1, 2, 3, 1 / 2, -7 / 3]
    from fractions import Fraction
    images = {K.rational(Fraction(v).limit_denominator()) for v in vals}
    assert len(images) == len(vals)
