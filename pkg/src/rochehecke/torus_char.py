"""Characters of T(O) = (O^x)^N through T(O)/T_c, conductors, f_mu, T_f, T' and A.

A unit of O/p^c is a tuple ``(a_0, ..., a_{c-1})`` of F_q codes with
``a_0 != 0``.  A character is a full value table (exponents of zeta_m)
indexed by the position of the unit in ``UnitGroup.elements``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Mapping, Sequence

from .errors import CharacterNotTrivialOnTPrime, HomomorphismError, NotRegular
from .ring import FiniteField, Laurent
from .rootdata import ConcaveLevelFunction, RootDatum, validate_concave


def _lcm(a, b):
    return a * b // gcd(a, b)


class UnitGroup:
    """The finite group (O/p^c)^x with explicit element list."""

    def __init__(self, F: FiniteField, c: int):
        if c < 1:
            raise ValueError("level c must be >= 1")
        self.F, self.c = F, c
        q = F.q
        elems = []
        for a0 in range(1, q):
            for rest in product(range(q), repeat=c - 1):
                elems.append((a0,) + rest)
        self.elements = elems
        self.index = {e: i for i, e in enumerate(elems)}
        self.identity = self.index[(1,) + (0,) * (c - 1)]
        self.order = len(elems)
        assert self.order == (q - 1) * q ** (c - 1)
        gens = [(F.gen,) + (0,) * (c - 1)]
        for k in range(1, c):
            for b in F.basis:
                u = [1] + [0] * (c - 1)
                u[k] = b
                gens.append(tuple(u))
        self.generators = [self.index[g] for g in gens]
        n = self.order
        self._table = None
        if n <= 3000:
            self._table = [[self._mul(i, j) for j in range(n)] for i in range(n)]
        self.inverse = [None] * n
        for i in range(n):
            if self.inverse[i] is None:
                j = self._inverse_search(i)
                self.inverse[i], self.inverse[j] = j, i
        self.orders = [self._order(i) for i in range(n)]
        m = 1
        for o in self.orders:
            m = _lcm(m, o)
        self.exponent = m

    def _mul(self, i, j):
        a, b = self.elements[i], self.elements[j]
        F, c = self.F, self.c
        add, mul = F.add, F.mul
        res = [0] * c
        for s, x in enumerate(a):
            if x:
                for t in range(c - s):
                    res[s + t] = add[res[s + t]][mul[x][b[t]]]
        return self.index[tuple(res)]

    def mul(self, i, j):
        if self._table is not None:
            return self._table[i][j]
        return self._mul(i, j)

    def _inverse_search(self, i):
        u = self.elements[i]
        from .ring import _series_inverse
        return self.index[tuple(_series_inverse(self.F, list(u), self.c))]

    def _order(self, i):
        k, x = 1, i
        while x != self.identity:
            x = self.mul(x, i)
            k += 1
        return k

    def level(self, i) -> int:
        """Largest k <= c with the unit congruent to 1 mod t^k (0 if a_0 != 1)."""
        u = self.elements[i]
        if u[0] != 1:
            return 0
        k = 1
        while k < self.c and u[k] == 0:
            k += 1
        return k

    def reduce(self, u: Laurent) -> int:
        """Index of a unit of O (valuation 0) modulo t^c."""
        if u.valuation() != 0:
            raise ValueError(f"{u} is not a unit of O")
        return self.index[u.coeffs_between(0, self.c)]

    def reduce_coeffs(self, coeffs: Sequence[int]) -> int:
        return self.index[tuple(coeffs)]

    def power(self, i, n):
        n %= self.orders[i]
        r = self.identity
        for _ in range(n):
            r = self.mul(r, i)
        return r

    def subgroup_closure(self, gens: Sequence[int]) -> frozenset:
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def character_from_generator_exponents(self, exps: Sequence[int], m: int) -> tuple:
        """Value table of the character sending generator k to zeta_m^exps[k].

        Raises HomomorphismError when the assignment violates a relation.
        """
        if len(exps) != len(self.generators):
            raise HomomorphismError(f"need {len(self.generators)} generator exponents")
        table = [None] * self.order
        table[self.identity] = 0
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, e in zip(self.generators, exps):
                    y = self.mul(x, g)
                    v = (table[x] + e) % m
                    if table[y] is None:
                        table[y] = v
                        nxt.append(y)
                    elif table[y] != v:
                        raise HomomorphismError(
                            f"generator exponents {tuple(exps)} violate a relation at {self.elements[y]}")
            frontier = nxt
        if any(v is None for v in table):
            raise HomomorphismError("generators do not generate the unit group")
        return tuple(table)

    def all_characters(self, m: int) -> list[tuple]:
        """Every character with values in Z/m, ordered by generator exponents."""
        choices = []
        for g in self.generators:
            o = self.orders[g]
            if m % o:
                choices.append([e for e in range(m) if (e * o) % m == 0])
            else:
                choices.append(list(range(0, m, m // o)))
        out = []
        for exps in product(*choices):
            try:
                out.append(self.character_from_generator_exponents(exps, m))
            except HomomorphismError:
                pass
        return out

    def conductor(self, table: Sequence[int]) -> int:
        """Least c' in [1, c] with the character trivial on 1 + p^{c'}."""
        # trivial on 1+p^k iff every unit of level >= k has value 0
        for k in range(1, self.c + 1):
            if all(table[i] == 0 for i in range(self.order) if self.level(i) >= k):
                return k
        return self.c


@dataclass(frozen=True)
class TorusCharacter:
    """mu-bar = (mu_1, ..., mu_N) on T(O)/T_c, values in Z/m."""

    units: UnitGroup
    m: int
    tables: tuple

    @property
    def c(self):
        return self.units.c

    @property
    def N(self):
        return len(self.tables)

    def value(self, i: int, unit_index: int) -> int:
        return self.tables[i][unit_index]

    def mu_value(self, torus: Sequence[int]) -> int:
        """mu-bar of a torus element given as unit indices, as an exponent mod m."""
        return sum(t[u] for t, u in zip(self.tables, torus)) % self.m

    def mu_value_laurent(self, diag: Sequence[Laurent]) -> int:
        U = self.units
        return self.mu_value([U.reduce(d) for d in diag])

    def ratio(self, i: int, j: int) -> tuple:
        """Table of mu-bar o alpha^vee for alpha = e_i - e_j."""
        U = self.units
        return tuple((self.tables[i][x] - self.tables[j][x]) % self.m for x in range(U.order))

    def check_homomorphism(self):
        U = self.units
        for t in self.tables:
            for a in range(U.order):
                for g in U.generators:
                    if t[U.mul(a, g)] != (t[a] + t[g]) % self.m:
                        raise HomomorphismError("table is not multiplicative")


def torus_exponent(units: UnitGroup) -> int:
    """Exponent of T(O)/T_c; the order m of the roots of unity in play."""
    return units.exponent


def conductor(units: UnitGroup, chi: Sequence[int]) -> int:
    return units.conductor(chi)


def gl_conductors(mu: TorusCharacter, rd: RootDatum) -> dict:
    """c_alpha = cond(mu_i / mu_j) for alpha = e_i - e_j."""
    out = {}
    for a in rd.roots:
        i, j = a.index(1), a.index(-1)
        out[a] = mu.units.conductor(mu.ratio(i, j))
    return out


def is_regular(mu: TorusCharacter) -> bool:
    return len(set(mu.tables)) == len(mu.tables)


def f_mu(mu: TorusCharacter, rd: RootDatum) -> ConcaveLevelFunction:
    """floor(c_alpha/2) on positive roots, ceil(c_alpha/2) on negative roots."""
    if not is_regular(mu):
        raise NotRegular("mu-bar has a nontrivial Weyl stabilizer")
    cond = gl_conductors(mu, rd)
    f = {a: (cond[a] // 2 if rd.is_positive(a) else (cond[a] + 1) // 2) for a in rd.roots}
    return validate_concave(f, rd)


def levels_from_conductors(rd: RootDatum, cond: Mapping) -> ConcaveLevelFunction:
    f = {a: (cond[a] // 2 if rd.is_positive(a) else (cond[a] + 1) // 2) for a in rd.roots}
    return validate_concave(f, rd)


# ---------------------------------------------------------------------------
# T_f, T' and A

def _coroot_unit(units: UnitGroup, alpha, u: int, N: int) -> tuple:
    """alpha^vee(u) for alpha = e_i - e_j, as a torus element of unit indices."""
    i, j = alpha.index(1), alpha.index(-1)
    el = [units.identity] * N
    el[i] = u
    el[j] = units.inverse[u]
    return tuple(el)


def torus_mul(units: UnitGroup, a: Sequence[int], b: Sequence[int]) -> tuple:
    return tuple(units.mul(x, y) for x, y in zip(a, b))


def t_f_generators(f: ConcaveLevelFunction, units: UnitGroup) -> list:
    """alpha^vee(1 + b t^k), k >= f(alpha) + f(-alpha), reduced mod T_c."""
    rd = f.rd
    N = rd.rank
    gens = []
    for a in rd.roots:
        ca = f[a] + f[tuple(-x for x in a)]
        for k in range(ca, units.c):
            for b in units.F.basis:
                u = [1] + [0] * (units.c - 1)
                u[k] = b
                g = _coroot_unit(units, a, units.index[tuple(u)], N)
                if g not in gens:
                    gens.append(g)
    return gens


def torus_closure(units: UnitGroup, gens: Sequence[tuple], N: int) -> frozenset:
    ident = (units.identity,) * N
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = torus_mul(units, x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _rank(vectors) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                k = rows[i][col] / rows[r][col]
                rows[i] = [x - k * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def t_f_log_order(f: ConcaveLevelFunction, c: int) -> int:
    """log_q |T_f T_c / T_c| from the filtration by the subtori T_{f,m}.

    T_{f,m} is generated by the coroots with c_alpha <= m and contributes
    (rank T_{f,m} - rank T_{f,m-1}) * (c - m) for 1 <= m < c.
    """
    rd = f.rd
    prev, total = 0, 0
    for m in range(1, c):
        cor = [rd.coroots[a] for a in rd.roots if f[a] + f[tuple(-x for x in a)] <= m]
        r = _rank(cor) if cor else 0
        total += (r - prev) * (c - m)
        prev = r
    return total


class QuotientA:
    """A = J/J' = T(O)/T' with T' = <T_c, T_f>, realized inside T(O/p^c)."""

    def __init__(self, mu: TorusCharacter, f: ConcaveLevelFunction):
        U = mu.units
        N = mu.N
        self.mu, self.f, self.units, self.N = mu, f, U, N
        self.tprime = torus_closure(U, t_f_generators(f, U), N)
        for x in self.tprime:
            if mu.mu_value(x) != 0:
                raise CharacterNotTrivialOnTPrime(f"mu-bar({x}) != 1 on T'")
        class_of = {}
        reps = []
        tp = sorted(self.tprime)
        for x in product(range(U.order), repeat=N):
            if x in class_of:
                continue
            k = len(reps)
            reps.append(x)
            for t in tp:
                class_of[torus_mul(U, x, t)] = k
        self.reps = reps
        self.class_of = class_of
        self.order = len(reps)
        self.mu_values = [mu.mu_value(r) for r in reps]
        assert self.order * len(self.tprime) == U.order ** N

    def mul(self, a: int, b: int) -> int:
        return self.class_of[torus_mul(self.units, self.reps[a], self.reps[b])]

    def in_tprime(self, torus: Sequence[int]) -> bool:
        return tuple(torus) in self.tprime

    def product_form_log_order(self) -> int:
        """log_q |T'/T_c| from the filtration by subtori; compare with the closure."""
        return t_f_log_order(self.f, self.units.c)

    def generators(self) -> list:
        """Torus elements generating A: coordinate-wise unit generators."""
        U = self.units
        gens = []
        for i in range(self.N):
            for g in U.generators:
                el = [U.identity] * self.N
                el[i] = g
                gens.append(tuple(el))
        return gens


def quotient_A(mu: TorusCharacter, f: ConcaveLevelFunction) -> QuotientA:
    return QuotientA(mu, f)


# ---------------------------------------------------------------------------
# construction helpers

def character_from_exponents(units: UnitGroup, exps_per_coord: Sequence[Sequence[int]], m: int | None = None) -> TorusCharacter:
    m = m or units.exponent
    tables = tuple(units.character_from_generator_exponents(e, m) for e in exps_per_coord)
    return TorusCharacter(units, m, tables)


def regular_character_with_conductors(units: UnitGroup, N: int, profile) -> tuple[TorusCharacter, list]:
    """First (lexicographic) regular character whose ratio conductors match ``profile``.

    ``profile`` is an int (constant conductor) or a mapping {(i, j): c_ij}
    over pairs i < j (0-based).  Returns the character and the generator
    exponents chosen per coordinate.
    """
    m = units.exponent
    chars = []
    choices = []
    for g in units.generators:
        o = units.orders[g]
        choices.append(list(range(0, m, m // o)))
    for exps in product(*choices):
        try:
            chars.append((exps, units.character_from_generator_exponents(exps, m)))
        except HomomorphismError:
            pass

    def want(i, j):
        if isinstance(profile, int):
            return profile
        return profile[(i, j)] if (i, j) in profile else profile[(j, i)]

    def cond(t1, t2):
        return units.conductor(tuple((a - b) % m for a, b in zip(t1, t2)))

    chosen = []

    def search(k):
        if k == N:
            return True
        for exps, t in chars:
            if any(t == s for _, s in chosen):
                continue
            if all(cond(s, t) == want(i, k) for i, (_, s) in enumerate(chosen)):
                chosen.append((exps, t))
                if search(k + 1):
                    return True
                chosen.pop()
        return False

    if not search(0):
        raise NotRegular(f"no regular character of (O/p^{units.c})^x with conductor profile {profile}")
    return TorusCharacter(units, m, tuple(t for _, t in chosen)), [list(e) for e, _ in chosen]
