import random
from itertools import product
from math import log

import pytest

from rochehecke.errors import CharacterNotTrivialOnTPrime, HomomorphismError, NotRegular
from rochehecke.ring import Laurent, field
from rochehecke.rootdata import gl, iwahori_levels, validate_concave
from rochehecke.torus_char import (QuotientA, TorusCharacter, UnitGroup, character_from_exponents,
                                   conductor, f_mu, gl_conductors, is_regular, levels_from_conductors,
                                   quotient_A, regular_character_with_conductors, t_f_generators,
                                   torus_closure, torus_mul)

from rochehecke.group import build_context

from conftest import context

GL2, GL3 = gl(2), gl(3)
A, MA = (1, -1), (-1, 1)


def units(q, c):
    return UnitGroup(field(q), c)


def test_unit_group_order():
    for q, c in [(2, 1), (2, 3), (3, 2), (4, 2), (5, 1)]:
        U = units(q, c)
        assert U.order == (q - 1) * q ** (c - 1)
        assert len(U.subgroup_closure(U.generators)) == U.order


def value_at(U, chi, coeffs):
    return chi[U.index[tuple(coeffs)]]


def test_conductor_examples():
    U = units(3, 2)
    tame = [chi for chi in U.all_characters(U.exponent)
            if value_at(U, chi, (1, 1)) == 0]
    assert all(conductor(U, chi) == 1 for chi in tame)
    wild = [chi for chi in U.all_characters(U.exponent) if value_at(U, chi, (1, 1)) != 0]
    assert wild and all(conductor(U, chi) == 2 for chi in wild)
    mu, _ = regular_character_with_conductors(U, 2, 2)
    assert conductor(U, mu.ratio(0, 0)) == 1


def test_conductor_matches_brute_force():
    # trivial on 1 + p^k: evaluate on every 1 + b t^k + ...
    U = units(2, 4)
    for chi in U.all_characters(U.exponent):
        brute = next(k for k in range(1, U.c + 1)
                     if all(chi[i] == 0 for i, e in enumerate(U.elements)
                            if e[0] == 1 and not any(e[1:k])))
        assert conductor(U, chi) == brute


def test_regularity_examples():
    U = units(3, 1)
    triv, sign = U.all_characters(U.exponent)
    assert not is_regular(TorusCharacter(U, U.exponent, (triv, triv)))
    assert is_regular(TorusCharacter(U, U.exponent, (triv, sign)))
    assert not is_regular(TorusCharacter(U, U.exponent, (triv, sign, sign)))
    with pytest.raises(NotRegular):
        f_mu(TorusCharacter(U, U.exponent, (sign, sign)), GL2)


def test_f_mu_examples():
    mu, _ = regular_character_with_conductors(units(3, 1), 2, 1)
    assert f_mu(mu, GL2) == iwahori_levels(GL2)
    mu, _ = regular_character_with_conductors(units(3, 2), 2, 2)
    assert dict(f_mu(mu, GL2)) == {A: 1, MA: 1}
    for n in (1, 2, 3, 4):
        f = levels_from_conductors(GL3, {a: n for a in GL3.roots})
        for a in GL3.roots:
            assert f[a] == (n // 2 if GL3.is_positive(a) else (n + 1) // 2)


def test_f_mu_valid_for_every_realized_profile():
    U = units(3, 3)
    chars = U.all_characters(U.exponent)
    seen = set()
    for t in product(chars, repeat=3):
        if len(set(t)) < 3:
            continue
        mu = TorusCharacter(U, U.exponent, t)
        cond = gl_conductors(mu, GL3)
        prof = tuple(cond[a] for a in GL3.positive)
        if prof in seen:
            continue
        seen.add(prof)
        f = f_mu(mu, GL3)
        assert validate_concave(dict(f), GL3) == f
    # conductors of ratios are ultrametric; all such profiles in {1,2,3} occur
    ultra = {p for p in product((1, 2, 3), repeat=3) if sorted(p)[1] == sorted(p)[2]}
    # F_3^x has only two characters, so three pairwise tame ratios cannot all be 1
    assert seen == ultra - {(1, 1, 1)}


def test_t_f_examples():
    mu, _ = regular_character_with_conductors(units(3, 2), 2, 2)
    U = mu.units
    f = f_mu(mu, GL2)
    assert torus_closure(U, t_f_generators(f, U), 2) == {(U.identity, U.identity)}
    U1 = units(3, 1)
    assert torus_closure(U1, t_f_generators(iwahori_levels(GL2), U1), 2) == {(U1.identity,) * 2}
    # Iwahori levels at c=2: {(u, u^-1) : u in 1 + p}
    Tf = torus_closure(U, t_f_generators(iwahori_levels(GL2), U), 2)
    assert len(Tf) == 3
    assert all(U.mul(a, b) == U.identity and U.level(a) >= 1 for a, b in Tf)


@pytest.mark.parametrize("q,N,profile,c", [
    (3, 2, 2, None), (2, 2, 2, None), (3, 2, 1, 2), (2, 2, 1, 3), (3, 3, {(0, 1): 2, (0, 2): 2, (1, 2): 1}, None),
    (4, 2, 2, None)])
def test_tprime_closure_matches_product_form(q, N, profile, c):
    ctx = build_context(q, N, profile, c, allow_nonregular=True)
    A = ctx.A
    assert len(A.tprime) == q ** A.product_form_log_order()
    assert A.order * len(A.tprime) == A.units.order ** N


def test_quotient_examples():
    mu, _ = regular_character_with_conductors(units(3, 2), 2, 2)
    assert quotient_A(mu, f_mu(mu, GL2)).order == 36
    for q in (3, 4, 5):
        mu, _ = regular_character_with_conductors(units(q, 1), 2, 1)
        assert quotient_A(mu, f_mu(mu, GL2)).order == (q - 1) ** 2
    with pytest.raises(CharacterNotTrivialOnTPrime):
        quotient_A(mu_wild(), iwahori_levels(GL2))


def mu_wild():
    mu, _ = regular_character_with_conductors(units(3, 2), 2, 2)
    return mu


def test_quotient_multiplication_is_associative_and_mu_descends():
    A = context(3).A
    rng = random.Random(1)
    for _ in range(500):
        a, b, c = (rng.randrange(A.order) for _ in range(3))
        assert A.mul(A.mul(a, b), c) == A.mul(a, A.mul(b, c))
        assert A.mu_values[A.mul(a, b)] == (A.mu_values[a] + A.mu_values[b]) % A.mu.m


def test_mu_value_examples():
    mu = mu_wild()
    U = mu.units
    assert mu.mu_value((U.identity, U.identity)) == 0
    F = U.F
    diag = [Laurent(F, 0, (1, 1)), Laurent.const(F, 1)]
    assert mu.mu_value_laurent(diag) == mu.tables[0][U.index[(1, 1)]]
    # T_c maps to the identity of (O/p^c)^x
    tail = [Laurent(F, 0, (1, 0, 2, 1)), Laurent(F, 0, (1, 0, 0, 1))]
    assert mu.mu_value_laurent(tail) == 0


@pytest.mark.parametrize("q,c,N", [(3, 2, 2), (2, 3, 2), (5, 1, 3), (4, 2, 2)])
def test_mu_is_multiplicative(q, c, N):
    U = units(q, c)
    rng = random.Random(q * 100 + c)
    chars = U.all_characters(U.exponent)
    mu = TorusCharacter(U, U.exponent, tuple(rng.choice(chars) for _ in range(N)))
    mu.check_homomorphism()
    for _ in range(10000 // 4):
        u = tuple(rng.randrange(U.order) for _ in range(N))
        v = tuple(rng.randrange(U.order) for _ in range(N))
        assert mu.mu_value(torus_mul(U, u, v)) == (mu.mu_value(u) + mu.mu_value(v)) % mu.m


def test_inconsistent_generator_exponents():
    U = units(3, 1)
    with pytest.raises(HomomorphismError):
        U.character_from_generator_exponents([1], 4)
