import random
from fractions import Fraction

import pytest

from rochehecke.cli import Session, SessionConfig, satake_pair
from rochehecke.cosets import LambdaBox
from rochehecke.group import (GroupElement, mu_of_J, random_J, random_Jminus, random_Jplus,
                              t_lambda)
from rochehecke.hecke import (Convolver, b_lambda, build_f_lambda, check_twisted_invariance,
                              cyclotomic, p0_eval, phi_count_oracle, realize, satake, satake_mul,
                              theta_action_eval)
from rochehecke.ring import Laurent
from rochehecke.rootdata import b_lambda_exponent

from conftest import context, enumerator


@pytest.fixture(scope="module")
def basis(ctx32, enum32):
    rng = random.Random(3)
    return {lam: build_f_lambda(lam, ctx32, enum32, rng) for lam in LambdaBox(2, 1)}


def test_f0_is_mu_on_J(ctx32, enum32, basis, rng):
    f0 = basis[(0, 0)]
    K = cyclotomic(ctx32)
    for _ in range(50):
        j = random_J(ctx32, rng)
        assert f0.evaluate(j, enum32.keyer) == K.zeta(mu_of_J(j, ctx32))


def test_values_are_roots_of_unity(ctx32, basis):
    K = cyclotomic(ctx32)
    assert K.m == 6
    f = basis[(1, 0)]
    assert len(f.values((1, 0))) == 108
    for v in f.values((1, 0)):
        p = K.one()
        for _ in range(6):
            p = p * v
        assert p == K.one()


def test_twisted_invariance(ctx32, enum32, basis, rng):
    for lam in [(1, 0), (0, -1), (1, -1)]:
        assert check_twisted_invariance(basis[lam], lam, 200, rng, enum32.keyer) == []


def test_evaluation_off_support_is_zero(ctx32, enum32, basis):
    assert basis[(1, 0)].evaluate(t_lambda(ctx32.F, (0, 1)), enum32.keyer).is_zero()


def test_unit_law(ctx32, enum32, basis, rng):
    conv = Convolver(ctx32)
    f0 = basis[(0, 0)]
    for lam in [(0, 0), (1, 0), (-1, 1)]:
        f = basis[lam]
        T = enum32.table(lam)
        for i in rng.sample(range(len(T)), 4):
            x = T.reps[i]
            assert conv.evaluate(f0, f, x) == f.value(lam, i)
            assert conv.evaluate(f, f0, x) == f.value(lam, i)


def test_inverse_pair_product(ctx32, basis):
    conv = Convolver(ctx32)
    K = cyclotomic(ctx32)
    lam, nu = (1, 0), (-1, 0)
    assert b_lambda_exponent(ctx32.rd, lam) == 1 and b_lambda_exponent(ctx32.rd, nu) == 0
    F = basis[lam].scaled(b_lambda(ctx32, lam))
    G = basis[nu].scaled(b_lambda(ctx32, nu))
    assert conv.evaluate(F, G, GroupElement.identity(ctx32.F, 2)) == K.one()
    assert conv.evaluate(F, G, t_lambda(ctx32.F, (1, -1))).is_zero()


def test_symbolic_satake(ctx32, basis):
    K = cyclotomic(ctx32)
    assert satake(ctx32, (0, 0)).coeffs == {(0, 0): K.one()}
    for lam in LambdaBox(2, 1):
        for nu in LambdaBox(2, 1):
            s = tuple(a + b for a, b in zip(lam, nu))
            prod = satake_mul(ctx32, satake(ctx32, lam), satake(ctx32, nu))
            assert prod.coeffs == satake(ctx32, s).coeffs
    f = realize(ctx32, satake(ctx32, (1, 0)), basis)
    assert f.coef[(1, 0)] == K.rational(Fraction(1, 3))


@pytest.mark.parametrize("lam,nu", [((1, 0), (1, 0)), ((1, 0), (0, 1)), ((0, 1), (-1, 1)),
                                    ((1, -1), (-1, 1)), ((-1, 0), (1, 1))])
def test_satake_pairs(lam, nu):
    s = Session(SessionConfig())
    row = satake_pair(s, lam, nu)
    assert row["equal"], row
    assert row["support_violations"] == []


def test_p0_examples(ctx32, rng):
    F = ctx32.F
    K = cyclotomic(ctx32)
    for _ in range(50):
        j = random_J(ctx32, rng)
        assert p0_eval(j, ctx32) == K.zeta(mu_of_J(j, ctx32))
    u = GroupElement(F, [[Laurent.const(F, 1), Laurent(F, -3, (1, 2))],
                         [Laurent.zero(F), Laurent.const(F, 1)]])
    assert p0_eval(u, ctx32) == K.one()
    low = GroupElement(F, [[Laurent.const(F, 1), Laurent.zero(F)],
                           [Laurent.const(F, 1), Laurent.const(F, 1)]])
    assert p0_eval(low, ctx32).is_zero()


def test_p0_is_right_invariant_under_borel(ctx32, rng):
    """p0(j g b) = mu(j) p0(g) for b in U(F) with trivial torus part."""
    F = ctx32.F
    K = cyclotomic(ctx32)
    for _ in range(50):
        g = random_J(ctx32, rng)
        b = GroupElement(F, [[Laurent.const(F, 1), Laurent(F, rng.randint(-4, 0), (1, 1))],
                             [Laurent.zero(F), Laurent.const(F, 1)]])
        j = random_J(ctx32, rng)
        assert p0_eval(j * g * b, ctx32) == K.zeta(mu_of_J(j, ctx32)) * p0_eval(g, ctx32)


def test_theta_action(ctx32):
    F = ctx32.F
    K = cyclotomic(ctx32)
    I = GroupElement.identity(F, 2)
    for lam in LambdaBox(2, 2):
        assert theta_action_eval(lam, p0_eval, t_lambda(F, lam), ctx32) == K.one()
    g = t_lambda(F, (1, -1))
    assert theta_action_eval((0, 0), p0_eval, g, ctx32) == p0_eval(g, ctx32)


@pytest.mark.parametrize("q,lam,expected", [(3, (0, 1), 1), (3, (-2, 0), 1), (3, (1, 0), 3),
                                            (2, (2, 0), 4), (2, (1, -1), 4), (3, (0, 0), 1)])
def test_phi_examples(q, lam, expected):
    ctx = context(q, 2, 2)
    r = phi_count_oracle(lam, ctx, enumerator(q, 2, 2, box=2))
    assert r["count"] == r["expected"] == expected
    assert r["via_p0"] == cyclotomic(ctx).rational(expected)
    assert b_lambda(ctx, lam) * r["count"] == 1


def test_phi_gl3():
    ctx = context(2, 3, 2)
    enum = enumerator(2, 3, 2)
    for lam in [(1, 0, 0), (1, 0, -1), (0, 0, 1)]:
        r = phi_count_oracle(lam, ctx, enum)
        assert r["count"] == 2 ** b_lambda_exponent(ctx.rd, lam)
