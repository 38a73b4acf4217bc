"""GL_N(F) as matrices of Laurent polynomials; J, J', mu on J, inverses."""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

from .errors import NotInJ, PrecisionError, SingularMatrix
from .ring import FiniteField, Laurent, unit_inverse_mod
from .rootdata import ConcaveLevelFunction, RootDatum
from .torus_char import QuotientA, TorusCharacter, UnitGroup


def _zero(F):
    return Laurent(F, 0, ())


def _one(F):
    return Laurent(F, 0, (1,))


class GroupElement:
    """An N x N matrix of Laurent polynomials, intended to be invertible."""

    __slots__ = ("F", "rows", "__dict__")

    def __init__(self, F: FiniteField, rows):
        self.F = F
        self.rows = tuple(tuple(r) for r in rows)

    # constructors -----------------------------------------------------------
    @classmethod
    def identity(cls, F, N):
        return cls(F, [[_one(F) if i == j else _zero(F) for j in range(N)] for i in range(N)])

    @classmethod
    def diag(cls, F, entries: Sequence[Laurent]):
        N = len(entries)
        return cls(F, [[entries[i] if i == j else _zero(F) for j in range(N)] for i in range(N)])

    @classmethod
    def from_dicts(cls, F, rows):
        """Build from nested lists of {degree: coefficient} dicts (or ints)."""
        def conv(x):
            if isinstance(x, Laurent):
                return x
            if isinstance(x, int):
                return Laurent(F, 0, (F.from_int(x),)) if x % F.p else _zero(F)
            return Laurent.from_dict(F, {int(k): v for k, v in x.items()})
        return cls(F, [[conv(x) for x in r] for r in rows])

    @property
    def N(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __repr__(self):
        return "GroupElement(" + "; ".join(", ".join(map(repr, r)) for r in self.rows) + ")"

    # arithmetic -------------------------------------------------------------
    def __mul__(self, other: "GroupElement") -> "GroupElement":
        A, B = self.rows, other.rows
        N = len(A)
        F = self.F
        out = []
        for i in range(N):
            row = []
            Ai = A[i]
            for j in range(N):
                s = None
                for k in range(N):
                    a = Ai[k]
                    if not a.c and a.prec is None:
                        continue
                    b = B[k][j]
                    if not b.c and b.prec is None:
                        continue
                    p = a * b
                    s = p if s is None else s + p
                row.append(s if s is not None else _zero(F))
            out.append(row)
        return GroupElement(F, out)

    def scale(self, x: Laurent) -> "GroupElement":
        return GroupElement(self.F, [[x * e for e in r] for r in self.rows])

    def shift(self, k: int) -> "GroupElement":
        return GroupElement(self.F, [[e.shift(k) for e in r] for r in self.rows])

    def transpose(self) -> "GroupElement":
        return GroupElement(self.F, list(zip(*self.rows)))

    def drop_from(self, P: int) -> "GroupElement":
        """Exact matrix with every term of degree >= P deleted."""
        return GroupElement(self.F, [[e.drop_from(P) for e in r] for r in self.rows])

    def truncate(self, P: int) -> "GroupElement":
        return GroupElement(self.F, [[e.truncate(P) for e in r] for r in self.rows])

    @property
    def exact(self) -> bool:
        return all(e.prec is None for r in self.rows for e in r)

    def key(self):
        if not self.exact:
            raise TypeError("only exact matrices have a key")
        return tuple(e.key() for r in self.rows for e in r)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def __hash__(self):
        return hash(self.key())

    def min_valuation(self) -> int:
        vals = [e.v for r in self.rows for e in r if e.c]
        return min(vals) if vals else 0

    # determinants -----------------------------------------------------------
    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Laurent:
        return _det([[self.rows[i][j] for j in cols] for i in rows], self.F)

    def leading_minors(self) -> list:
        """Delta_0 = 1, Delta_1, ..., Delta_N."""
        N = self.N
        return [_one(self.F)] + [self.minor(range(k), range(k)) for k in range(1, N + 1)]

    @cached_property
    def det(self) -> Laurent:
        return _det([list(r) for r in self.rows], self.F)

    def adjugate(self) -> "GroupElement":
        N = self.N
        if N == 1:
            return GroupElement(self.F, [[_one(self.F)]])
        out = [[None] * N for _ in range(N)]
        for i in range(N):
            for j in range(N):
                m = self.minor([r for r in range(N) if r != j], [c for c in range(N) if c != i])
                out[i][j] = -m if (i + j) % 2 else m
        return GroupElement(self.F, out)


def _det(m, F) -> Laurent:
    n = len(m)
    if n == 0:
        return _one(F)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    # Laplace expansion along the first row
    total = _zero(F)
    for j in range(n):
        a = m[0][j]
        if not a.c and a.prec is None:
            continue
        sub = [row[:j] + row[j + 1:] for row in m[1:]]
        term = a * _det(sub, F)
        total = total - term if j % 2 else total + term
    return total


def t_lambda(F: FiniteField, lam: Sequence[int]) -> GroupElement:
    return GroupElement.diag(F, [Laurent.monomial(F, k) for k in lam])


def inverse_parts(g: GroupElement):
    """(k, w, t^{-k} adj g) with det g = t^k w; then g^{-1} = w^{-1} t^{-k} adj g."""
    d = g.det
    if not d.c:
        raise SingularMatrix("determinant is zero")
    k = d.valuation()
    w = d.shift(-k)
    return k, w, g.adjugate().shift(-k)


def invert_mod(g: GroupElement, L: int) -> GroupElement:
    """A truncated inverse h with g*h equal to Id in every degree below L."""
    k, w, adj = inverse_parts(g)
    slack = L - g.min_valuation() - adj.min_valuation()
    winv = unit_inverse_mod(w, max(slack, 1))
    h = adj.scale(winv)
    # the precision of g*h entries is >= L by choice of slack
    return h


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JContext:
    """Everything needed to test membership in J, J' and to evaluate mu on J."""

    rd: RootDatum
    f: ConcaveLevelFunction
    mu: TorusCharacter
    A: QuotientA

    @property
    def F(self) -> FiniteField:
        return self.mu.units.F

    @property
    def units(self) -> UnitGroup:
        return self.mu.units

    @property
    def q(self) -> int:
        return self.F.q

    @property
    def N(self) -> int:
        return self.rd.rank

    @property
    def c(self) -> int:
        return self.units.c

    @cached_property
    def levels(self) -> tuple:
        """levels[i][j] = f(e_i - e_j) for i != j, 0 on the diagonal."""
        N = self.N
        out = []
        for i in range(N):
            row = []
            for j in range(N):
                if i == j:
                    row.append(0)
                else:
                    a = [0] * N
                    a[i], a[j] = 1, -1
                    row.append(self.f[tuple(a)])
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def M(self) -> int:
        """Congruence level with K_M inside J'."""
        return max(self.c, max(max(r) for r in self.levels))

    def level_matrix(self):
        return [list(r) for r in self.levels]

    def residue(self, x: Laurent) -> int:
        """Unit-group index of a unit of O modulo t^c."""
        return self.units.index[x.coeffs_between(0, self.c)]

    def mu_bar_entry(self, i: int, x: Laurent) -> int:
        return self.mu.tables[i][self.residue(x)]

    def scalar_mu(self, w: Laurent) -> int:
        """mu of the central element w * Id, w a unit of O."""
        r = self.residue(w)
        return sum(t[r] for t in self.mu.tables) % self.mu.m

    def torus_lift(self, torus: Sequence[int]) -> GroupElement:
        U = self.units
        return GroupElement.diag(self.F, [Laurent(self.F, 0, U.elements[i]) for i in torus])


def make_context(rd: RootDatum, f: ConcaveLevelFunction, mu: TorusCharacter, A: QuotientA | None = None) -> JContext:
    if A is None:
        A = QuotientA(mu, f)
    return JContext(rd, f, mu, A)


# ---------------------------------------------------------------------------
# membership

def _entry_ok(x: Laurent, bound: int) -> bool:
    if x.c:
        return x.v >= bound
    if x.prec is None:
        return True
    if x.prec >= bound:
        return True
    raise PrecisionError(f"entry known only below t^{x.prec}, level {bound} needed")


def _is_unit(x: Laurent) -> bool:
    if x.prec is not None and x.prec < 1:
        raise PrecisionError("constant term unknown")
    return bool(x.c) and x.v == 0


def in_J(g: GroupElement, ctx: JContext) -> bool:
    lev = ctx.levels
    N = g.N
    for i in range(N):
        for j in range(N):
            x = g.rows[i][j]
            if i == j:
                if not _is_unit(x):
                    return False
            elif not _entry_ok(x, lev[i][j]):
                return False
    return True


def _strict(x: Laurent, target: int | None) -> bool:
    """Exact equality with 0 or 1 (target None means 0)."""
    if x.prec is not None:
        raise PrecisionError("exact comparison needs an exact entry")
    if target is None:
        return not x.c
    return x.v == 0 and x.c == (1,)


def _near(x: Laurent, target: int, L: int) -> bool:
    """x congruent to target (0 or 1) modulo t^L."""
    return (x - target).known_zero_below(L) if target else x.known_zero_below(L)


def _triangular_check(g: GroupElement, ctx: JContext, lower: bool, L: int | None) -> bool:
    N = g.N
    for i in range(N):
        for j in range(N):
            x = g.rows[i][j]
            if i == j:
                ok = _strict(x, 1) if L is None else _near(x, 1, L)
            elif (i < j) if lower else (i > j):
                ok = _strict(x, None) if L is None else _near(x, 0, L)
            else:
                continue
            if not ok:
                return False
    return in_J(g, ctx)


def in_Jplus(g: GroupElement, ctx: JContext, L: int | None = None) -> bool:
    """Upper unitriangular with entries in U_{alpha, f(alpha)}.

    Exact matrices are compared exactly; truncated ones modulo t^L.
    """
    if L is None and not g.exact:
        L = min(e.prec for r in g.rows for e in r if e.prec is not None)
    return _triangular_check(g, ctx, lower=False, L=L)


def in_Jminus(g: GroupElement, ctx: JContext, L: int | None = None) -> bool:
    if L is None and not g.exact:
        L = min(e.prec for r in g.rows for e in r if e.prec is not None)
    return _triangular_check(g, ctx, lower=True, L=L)


def in_J0(g: GroupElement, ctx: JContext, L: int | None = None) -> bool:
    if L is None and not g.exact:
        L = min(e.prec for r in g.rows for e in r if e.prec is not None)
    N = g.N
    for i in range(N):
        for j in range(N):
            if i == j:
                if not _is_unit(g.rows[i][i]):
                    return False
            else:
                x = g.rows[i][j]
                if not (_strict(x, None) if L is None else _near(x, 0, L)):
                    return False
    return True


def torus_part(g: GroupElement, ctx: JContext) -> tuple:
    """Unit-group indices of the diagonal factor j0 of g in J, modulo t^c.

    d_k = Delta_k / Delta_{k-1} with Delta_k the leading principal minors.
    """
    U = ctx.units
    mins = g.leading_minors()
    idx = []
    for m in mins:
        if not _is_unit(m):
            raise NotInJ("a leading principal minor is not a unit")
        idx.append(ctx.residue(m))
    return tuple(U.mul(idx[k], U.inverse[idx[k - 1]]) for k in range(1, len(idx)))


def mu_of_J(g: GroupElement, ctx: JContext) -> int:
    """mu(g) = mu-bar(j0) for g = j- j0 j+ in J, as an exponent mod m."""
    if not in_J(g, ctx):
        raise NotInJ(repr(g))
    return ctx.mu.mu_value(torus_part(g, ctx))


def in_Jprime(g: GroupElement, ctx: JContext) -> bool:
    if not in_J(g, ctx):
        return False
    return ctx.A.in_tprime(torus_part(g, ctx))


def iwahori_decompose(g: GroupElement, ctx: JContext, L: int | None = None):
    """g = j- j0 j+ with factors known modulo t^L (default c + max f + 2)."""
    if not in_J(g, ctx):
        raise NotInJ(repr(g))
    if L is None:
        L = ctx.M + 2
    F, N = ctx.F, g.N
    rows = [[e.truncate(L) for e in r] for r in g.rows]
    lower = [[_one(F) if i == j else _zero(F) for j in range(N)] for i in range(N)]
    # Gaussian elimination without pivoting: pivots are units of O
    for k in range(N):
        piv = rows[k][k]
        inv = unit_inverse_mod(piv, L)
        for i in range(k + 1, N):
            m = (rows[i][k] * inv).truncate(L)
            lower[i][k] = m
            rows[i] = [(rows[i][j] - m * rows[k][j]).truncate(L) for j in range(N)]
    diag = [rows[k][k] for k in range(N)]
    upper = []
    for i in range(N):
        inv = unit_inverse_mod(diag[i], L)
        upper.append([_one(F) if i == j else (_zero(F) if j < i else (inv * rows[i][j]).truncate(L))
                      for j in range(N)])
    jm = GroupElement(F, [[x.truncate(L) for x in r] for r in lower])
    j0 = GroupElement.diag(F, diag)
    jp = GroupElement(F, [[x.truncate(L) for x in r] for r in upper])
    return jm, j0, jp


def coset_equal_Jprime(g: GroupElement, h: GroupElement, ctx: JContext) -> bool:
    """g J' == h J', decided exactly.

    g^{-1} h = w^{-1} M with M = t^{-k} adj(g) h exact and w^{-1} central in T(O).
    """
    k, w, adj = inverse_parts(g)
    M = adj * h
    if not in_J(M, ctx):
        return False
    U = ctx.units
    tp = torus_part(M, ctx)
    winv = U.inverse[ctx.residue(w)]
    return ctx.A.in_tprime(tuple(U.mul(x, winv) for x in tp))


# ---------------------------------------------------------------------------
# random elements

def _rand_poly(F, rng: random.Random, lo: int, hi: int) -> Laurent:
    if hi <= lo:
        return _zero(F)
    return Laurent(F, lo, [rng.randrange(F.q) for _ in range(hi - lo)])


def _rand_unit(F, rng, deg):
    return Laurent(F, 0, [rng.randrange(1, F.q)] + [rng.randrange(F.q) for _ in range(deg)])


def random_Jminus(ctx: JContext, rng: random.Random, deg: int = 3) -> GroupElement:
    F, N, lev = ctx.F, ctx.N, ctx.levels
    return GroupElement(F, [[_one(F) if i == j else
                             (_rand_poly(F, rng, lev[i][j], lev[i][j] + deg) if i > j else _zero(F))
                             for j in range(N)] for i in range(N)])


def random_Jplus(ctx: JContext, rng: random.Random, deg: int = 3) -> GroupElement:
    F, N, lev = ctx.F, ctx.N, ctx.levels
    return GroupElement(F, [[_one(F) if i == j else
                             (_rand_poly(F, rng, lev[i][j], lev[i][j] + deg) if i < j else _zero(F))
                             for j in range(N)] for i in range(N)])


def random_J0(ctx: JContext, rng: random.Random, deg: int = 3) -> GroupElement:
    return GroupElement.diag(ctx.F, [_rand_unit(ctx.F, rng, deg) for _ in range(ctx.N)])


def random_J(ctx: JContext, rng: random.Random, deg: int = 3) -> GroupElement:
    return random_Jminus(ctx, rng, deg) * random_J0(ctx, rng, deg) * random_Jplus(ctx, rng, deg)


def random_Jprime(ctx: JContext, rng: random.Random, deg: int = 3) -> GroupElement:
    """J^- t' J^+ with t' drawn from T' (lifted) times a random element of T_c."""
    F, U = ctx.F, ctx.units
    tp = sorted(ctx.A.tprime)
    t = tp[rng.randrange(len(tp))]
    diag = []
    for i in t:
        base = Laurent(F, 0, U.elements[i])
        tail = Laurent(F, 0, [1] + [0] * (ctx.c - 1) + [rng.randrange(F.q) for _ in range(deg)])
        diag.append(base * tail)
    return random_Jminus(ctx, rng, deg) * GroupElement.diag(F, diag) * random_Jplus(ctx, rng, deg)


def random_entrywise_J(ctx: JContext, rng: random.Random, deg: int = 3) -> GroupElement:
    """A matrix drawn directly from the entrywise description of J."""
    F, N, lev = ctx.F, ctx.N, ctx.levels
    return GroupElement(F, [[_rand_unit(F, rng, deg) if i == j else
                             _rand_poly(F, rng, lev[i][j], lev[i][j] + deg)
                             for j in range(N)] for i in range(N)])


def build_context(q: int, N: int, profile=1, c: int | None = None, exponents=None,
                  allow_nonregular: bool = False) -> JContext:
    """Context for GL_N over F_q((t)) from a conductor profile or explicit character.

    ``profile`` is a constant conductor or {(i, j): c_ij}; ``exponents`` gives
    generator exponents per coordinate and overrides the profile search.  When
    no regular character realizes the profile and ``allow_nonregular`` is set,
    the levels come from the profile and mu-bar is trivial (enough for counts).
    """
    from .errors import NotRegular
    from .ring import field
    from .rootdata import gl
    from .torus_char import (character_from_exponents, f_mu, levels_from_conductors,
                             regular_character_with_conductors)
    rd = gl(N)
    if isinstance(profile, int):
        top = profile
    else:
        top = max(profile.values())
    c = c or top
    units = UnitGroup(field(q), c)
    if exponents is not None:
        mu = character_from_exponents(units, exponents)
        return make_context(rd, f_mu(mu, rd), mu)
    try:
        mu, _ = regular_character_with_conductors(units, N, profile)
        return make_context(rd, f_mu(mu, rd), mu)
    except NotRegular:
        if not allow_nonregular:
            raise
    cond = {}
    for a in rd.roots:
        i, j = a.index(1), a.index(-1)
        cond[a] = profile if isinstance(profile, int) else profile.get((i, j), profile.get((j, i)))
    f = levels_from_conductors(rd, cond)
    mu = TorusCharacter(units, units.exponent, tuple((0,) * units.order for _ in range(N)))
    return make_context(rd, f, mu)
