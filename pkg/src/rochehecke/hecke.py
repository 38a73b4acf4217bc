"""Twisted Hecke functions: f_lambda, convolution, the Satake map, p_0 and the counting oracle."""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .cosets import (CosetEnumerator, CosetTable, Factorization, factor_relevant,
                     left_generators, prepared_inverse)
from .errors import FactorizationInconsistent, NotRelevantInBox, SupportOutsideBox
from .group import (GroupElement, JContext, inverse_parts, mu_of_J, random_J, t_lambda)
from .ring import CycScalar, CyclotomicField, Laurent
from .rootdata import b_lambda_exponent


def cyclotomic(ctx: JContext) -> CyclotomicField:
    return CyclotomicField(ctx.mu.m)


def b_lambda(ctx: JContext, lam) -> Fraction:
    return Fraction(1, ctx.q ** b_lambda_exponent(ctx.rd, lam))


@dataclass
class HeckeFunction:
    """A function on G(F)/J' supported on finitely many relevant double cosets.

    On J t^lambda J the value at representative i is ``coef[lambda] * zeta^exps[lambda][i]``.
    """

    ctx: JContext
    tables: dict = field(default_factory=dict)
    coef: dict = field(default_factory=dict)
    exps: dict = field(default_factory=dict)

    @property
    def K(self) -> CyclotomicField:
        return cyclotomic(self.ctx)

    def support(self):
        return [lam for lam, c in self.coef.items() if not c.is_zero()]

    def value(self, lam, i) -> CycScalar:
        return self.coef[lam] * self.K.zeta(self.exps[lam][i])

    def values(self, lam) -> list:
        return [self.value(lam, i) for i in range(len(self.exps[lam]))]

    def scaled(self, s) -> "HeckeFunction":
        s = s if isinstance(s, CycScalar) else self.K.rational(s)
        return HeckeFunction(self.ctx, dict(self.tables), {k: v * s for k, v in self.coef.items()},
                             dict(self.exps))

    def __add__(self, other: "HeckeFunction") -> "HeckeFunction":
        out = HeckeFunction(self.ctx, dict(self.tables), dict(self.coef), dict(self.exps))
        for lam, c in other.coef.items():
            if lam in out.coef:
                if out.exps[lam] != other.exps[lam]:
                    raise ValueError("summands use different basis normalizations")
                out.coef[lam] = out.coef[lam] + c
            else:
                out.tables[lam], out.coef[lam], out.exps[lam] = other.tables[lam], c, other.exps[lam]
        return out

    def evaluate(self, y: GroupElement, keyer) -> CycScalar:
        """Value at y by canonical-key lookup in the support tables."""
        k = keyer.key(y)
        for lam, T in self.tables.items():
            i = T.index.get(k)
            if i is not None:
                return self.value(lam, i)
        return self.K.zero()

    def evaluate_by_factoring(self, y: GroupElement):
        """(lambda, exponent) of y via factorization, or None off the support."""
        try:
            fac = factor_relevant(y, self.ctx)
        except NotRelevantInBox:
            return None
        if fac.lam not in self.coef:
            return None
        return fac


def build_f_lambda(lam, ctx: JContext, enum: CosetEnumerator, rng: random.Random | None = None,
                   factorizations: int = 3) -> HeckeFunction:
    """f_lambda(j t^lambda j') = mu(j j') on the J'-coset table of lambda.

    Each representative is factored ``factorizations`` times: directly and
    through random J-translates j1 g j2, corrected by mu(j1) + mu(j2).
    """
    lam = tuple(lam)
    rng = rng or random.Random(0)
    T = enum.table(lam)
    m = ctx.mu.m
    exps = []
    for g in T.reps:
        e0 = factor_relevant(g, ctx)
        if e0.lam != lam:
            raise FactorizationInconsistent(f"representative of {lam} factors through {e0.lam}")
        for _ in range(factorizations - 1):
            j1, j2 = random_J(ctx, rng, 1), random_J(ctx, rng, 1)
            e = factor_relevant(j1 * g * j2, ctx)
            val = (e.mu - mu_of_J(j1, ctx) - mu_of_J(j2, ctx)) % m
            if e.lam != lam or val != e0.mu:
                raise FactorizationInconsistent(
                    f"f_{lam}: two factorizations of {g!r} give zeta^{e0.mu} and zeta^{val}")
        exps.append(e0.mu)
    if exps[0] != 0:
        raise FactorizationInconsistent(f"f_{lam}(t^lambda) != 1")
    K = cyclotomic(ctx)
    return HeckeFunction(ctx, {lam: T}, {lam: K.one()}, {lam: exps})


def check_twisted_invariance(F: HeckeFunction, lam, samples: int, rng: random.Random, keyer) -> list:
    """value(j g j') = zeta^{mu(j)+mu(j')} value(g), the left side read by key lookup."""
    ctx = F.ctx
    K = F.K
    T = F.tables[lam]
    bad = []
    for _ in range(samples):
        i = rng.randrange(len(T))
        j1, j2 = random_J(ctx, rng, 1), random_J(ctx, rng, 1)
        y = j1 * T.reps[i] * j2
        lhs = F.evaluate(y, keyer)
        rhs = F.value(lam, i) * K.zeta(mu_of_J(j1, ctx) + mu_of_J(j2, ctx))
        if lhs != rhs:
            bad.append((lam, i))
    return bad


class Convolver:
    """(F * G)(x) = (1/|A|) sum over J'-representatives g of supp F of F(g) G(g^{-1} x)."""

    def __init__(self, ctx: JContext):
        self.ctx = ctx
        self._prep = {}

    def _prepared(self, lam, T: CosetTable):
        if lam not in self._prep:
            self._prep[lam] = [prepared_inverse(g, self.ctx) for g in T.reps]
        return self._prep[lam]

    def evaluate(self, F: HeckeFunction, G: HeckeFunction, x: GroupElement) -> CycScalar:
        ctx = self.ctx
        m = ctx.mu.m
        K = cyclotomic(ctx)
        total = K.zero()
        for lam in F.support():
            T = F.tables[lam]
            counts = defaultdict(int)
            for (k, w, adj, w_mu), eF in zip(self._prepared(lam, T), F.exps[lam]):
                try:
                    fac = factor_relevant(adj * x, ctx)
                except NotRelevantInBox:
                    continue
                nu = fac.lam
                if nu not in G.coef:
                    if any(abs(a) > 50 for a in nu):
                        raise SupportOutsideBox(nu)
                    continue
                # G(y) = coef * zeta^{mu(j1 j2)}, since G(t^nu) = coef by normalization
                counts[(nu, (eF + fac.mu - w_mu) % m)] += 1
            by_nu = defaultdict(dict)
            for (nu, e), n in counts.items():
                by_nu[nu][e] = by_nu[nu].get(e, 0) + n
            for nu, c in by_nu.items():
                if G.exps[nu][0] != 0:
                    raise ValueError("G is not normalized at t^nu")
                total = total + F.coef[lam] * G.coef[nu] * K.from_exponents(c)
        return total * K.rational(Fraction(1, ctx.A.order))


@dataclass
class SymbolicHecke:
    """Finite combination sum c_lambda f_lambda."""

    coeffs: dict

    def __mul__(self, other: "SymbolicHecke") -> "SymbolicHecke":
        raise NotImplementedError("use satake_mul with a context")


def satake(ctx: JContext, lam) -> SymbolicHecke:
    """[Theta_lambda] -> b_lambda f_lambda."""
    K = cyclotomic(ctx)
    return SymbolicHecke({tuple(lam): K.rational(b_lambda(ctx, lam))})


def satake_mul(ctx: JContext, a: SymbolicHecke, b: SymbolicHecke) -> SymbolicHecke:
    """Product in H transported from the group algebra of the coweight lattice.

    f_lambda f_nu = b_{lambda+nu} / (b_lambda b_nu) f_{lambda+nu}.
    """
    K = cyclotomic(ctx)
    out = {}
    for l1, c1 in a.coeffs.items():
        for l2, c2 in b.coeffs.items():
            s = tuple(x + y for x, y in zip(l1, l2))
            r = b_lambda(ctx, s) / (b_lambda(ctx, l1) * b_lambda(ctx, l2))
            term = c1 * c2 * K.rational(r)
            out[s] = out[s] + term if s in out else term
    return SymbolicHecke(out)


def realize(ctx: JContext, S: SymbolicHecke, basis: Mapping) -> HeckeFunction:
    """The HeckeFunction sum c_lambda f_lambda from built basis functions."""
    K = cyclotomic(ctx)
    out = HeckeFunction(ctx)
    for lam, c in S.coeffs.items():
        f = basis[lam]
        out = out + HeckeFunction(ctx, {lam: f.tables[lam]}, {lam: c * f.coef[lam]}, {lam: f.exps[lam]})
    return out


# ---------------------------------------------------------------------------
# the family vector p_0 and the counting oracle

def p0_exponent(g: GroupElement, ctx: JContext):
    """Exponent e with p_0(g) = zeta^e, or None when g is not in J B^0.

    g = j^- b with b in B^0 = U(F) T(O) is the LU factorization; it exists
    inside J B^0 iff the lower factor lies in J^- and every pivot is a unit.
    """
    N = g.N
    lev = ctx.levels
    mins = g.leading_minors()
    for d in mins[1:]:
        if not d.c or d.v != 0:
            return None
    for k in range(N - 1):
        for i in range(k + 1, N):
            rows = list(range(k)) + [i]
            mnr = g.minor(rows, range(k + 1))
            if mnr.c and mnr.v < lev[i][k]:
                return None
    U = ctx.units
    idx = [ctx.residue(d) for d in mins]
    tables = ctx.mu.tables
    e = 0
    for k in range(1, N + 1):
        e += tables[k - 1][idx[k]] - tables[k - 1][idx[k - 1]]
    return e % ctx.mu.m


def p0_eval(g: GroupElement, ctx: JContext) -> CycScalar:
    K = cyclotomic(ctx)
    e = p0_exponent(g, ctx)
    return K.zero() if e is None else K.zeta(e)


def theta_action_eval(lam, p, x: GroupElement, ctx: JContext):
    """([Theta_lambda] p)(x) = p(x t^{-lambda})."""
    return p(x * t_lambda(ctx.F, [-a for a in lam]), ctx)


def j_representatives(lam, ctx: JContext, enum: CosetEnumerator) -> list:
    """Elements j_i of J with j_i t^lambda J running over J t^lambda J / J."""
    lam = tuple(lam)
    F = ctx.F
    tl = t_lambda(F, lam)
    gens = left_generators(ctx, lam)
    n = enum.n_trunc
    keyer = enum.jkeyer
    start = GroupElement.identity(F, ctx.N)
    seen = {keyer.key(tl.drop_from(n))}
    reps = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for j in frontier:
            for s in gens:
                h = (s * j).drop_from(n)
                k = keyer.key((h * tl).drop_from(n))
                if k not in seen:
                    seen.add(k)
                    reps.append(h)
                    nxt.append(h)
        frontier = nxt
    return reps


def _udl_lower_valuations(j: GroupElement):
    """Valuations of the strictly lower entries of L in j = U D L (None for zero)."""
    N = j.N
    # j = U D L  <=>  P j P = (P U P)(P D P)(P L P) is an LDU factorization
    P = list(range(N - 1, -1, -1))
    A = GroupElement(j.F, [[j.rows[P[r]][P[s]] for s in range(N)] for r in range(N)])
    out = {}
    for k in range(N):
        for l in range(k + 1, N):
            # U'_{kl} = det A[0..k; 0..k-1, l] / Delta_{k+1}(A), the latter a unit
            mnr = A.minor(range(k + 1), list(range(k)) + [l])
            # (P U' P)_{P[k], P[l]} = L entry at row P[k] > column P[l]
            out[(P[k], P[l])] = mnr.v if mnr.c else None
    return out


def phi_count_oracle(lam, ctx: JContext, enum: CosetEnumerator) -> dict:
    """|{j_i : t^{-lambda} (j_i^-)^{-1} t^lambda in J^-}| over J / (J cap t^lambda J t^{-lambda}).

    Returns the direct count and the same quantity computed as
    sum_i mu(j_i) p_0(t^{-lambda} j_i^{-1} t^lambda).
    """
    lam = tuple(lam)
    reps = j_representatives(lam, ctx, enum)
    lev = ctx.levels
    F = ctx.F
    count = 0
    for j in reps:
        vals = _udl_lower_valuations(j)
        if all(v is None or v >= lev[i][k] + lam[i] - lam[k] for (i, k), v in vals.items()):
            count += 1
    K = cyclotomic(ctx)
    counts = defaultdict(int)
    tl, tml = t_lambda(F, lam), t_lambda(F, [-a for a in lam])
    for j in reps:
        k, w, adj = inverse_parts(j)
        e = p0_exponent(tml * adj * tl, ctx)
        if e is not None:
            counts[(mu_of_J(j, ctx) + e - ctx.scalar_mu(w)) % ctx.mu.m] += 1
    via_p0 = K.from_exponents(counts)
    return {"lambda": list(lam), "representatives": len(reps), "count": count,
            "via_p0": via_p0, "expected": ctx.q ** b_lambda_exponent(ctx.rd, lam)}
