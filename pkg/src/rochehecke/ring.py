"""Exact arithmetic: F_q, truncated Laurent polynomials over F_q, and Q(zeta_m).

Finite-field elements are plain ``int`` codes in ``range(q)``.  For prime
``q`` the code is the residue itself; for ``q = p^e`` the code of
``sum a_i x^i`` is ``sum a_i p^i`` with ``x`` a root of a fixed primitive
polynomial.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping

from .errors import NotInvertible, PrecisionError

# Conway polynomials, coefficients low degree first, monic.
_CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (7, 2): (3, 6, 1),
}


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise ``ValueError`` otherwise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


def _poly_mulmod(a, b, mod, p):
    e = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            res[i + j] = (res[i + j] + x * y) % p
    for k in range(len(res) - 1, e - 1, -1):
        c = res[k]
        if c:
            for i in range(e + 1):
                res[k - e + i] = (res[k - e + i] - c * mod[i]) % p
    return (res + [0] * e)[:e]


def _is_primitive(mod, p):
    e = len(mod) - 1
    order = p**e - 1
    x = [0, 1] + [0] * (e - 2) if e > 1 else [0]
    # x has multiplicative order q-1 iff x^((q-1)/r) != 1 for each prime r | q-1
    def power(n):
        r, b = [1] + [0] * (e - 1), x[:e]
        while n:
            if n & 1:
                r = _poly_mulmod(r, b, mod, p)
            b = _poly_mulmod(b, b, mod, p)
            n >>= 1
        return r
    one = [1] + [0] * (e - 1)
    if power(order) != one:
        return False
    n, r = order, 2
    while r * r <= n:
        if n % r == 0:
            if power(order // r) == one:
                return False
            while n % r == 0:
                n //= r
        r += 1
    if n > 1 and power(order // n) == one:
        return False
    return True


def _find_primitive_poly(p, e):
    if (p, e) in _CONWAY:
        return _CONWAY[(p, e)]
    for code in range(p**e):
        tail = [(code // p**i) % p for i in range(e)]
        if tail[0] == 0:
            continue
        mod = tuple(tail + [1])
        if _is_primitive(list(mod), p):
            return mod
    raise ValueError(f"no primitive polynomial for F_{p}^{e}")


class FiniteField:
    """The field F_q with table-driven arithmetic on integer codes."""

    def __init__(self, q: int):
        p, e = prime_power(q)
        self.q, self.p, self.e = q, p, e
        self.is_prime = e == 1
        self.modulus = None if e == 1 else _find_primitive_poly(p, e)
        if self.is_prime:
            self.add = [[(a + b) % p for b in range(p)] for a in range(p)]
            self.mul = [[(a * b) % p for b in range(p)] for a in range(p)]
        else:
            digits = [[(a // p**i) % p for i in range(e)] for a in range(q)]
            enc = lambda ds: sum(d * p**i for i, d in enumerate(ds))
            self.add = [[enc([(x + y) % p for x, y in zip(digits[a], digits[b])])
                         for b in range(q)] for a in range(q)]
            self.mul = [[enc(_poly_mulmod(digits[a], digits[b], self.modulus, p))
                         for b in range(q)] for a in range(q)]
        self.neg = [next(b for b in range(q) if self.add[a][b] == 0) for a in range(q)]
        self.inv = [0] + [next(b for b in range(1, q) if self.mul[a][b] == 1)
                          for a in range(1, q)]
        self.gen = next(a for a in range(1, q) if self._order(a) == q - 1)
        # F_p-basis 1, x, ..., x^(e-1)
        self.basis = [p**i for i in range(e)]

    def _order(self, a):
        k, x = 1, a
        while x != 1:
            x = self.mul[x][a]
            k += 1
        return k

    def __repr__(self):
        return f"FiniteField({self.q})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self):
        return hash(("F", self.q))

    def sub(self, a, b):
        return self.add[a][self.neg[b]]

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv[a], -n
        r = 1
        while n:
            if n & 1:
                r = self.mul[r][a]
            a = self.mul[a][a]
            n >>= 1
        return r

    def elements(self):
        return range(self.q)

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> F_q."""
        return n % self.p


@lru_cache(maxsize=None)
def field(q: int) -> FiniteField:
    return FiniteField(q)


# ---------------------------------------------------------------------------
# Coefficient-list kernels (lists of codes, index i <-> degree v + i)

def _mul_lists(F, a, b):
    if not a or not b:
        return []
    if F.is_prime:
        p = F.p
        res = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    res[i + j] += x * y
        return [r % p for r in res]
    add, mul = F.add, F.mul
    res = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            mx = mul[x]
            for j, y in enumerate(b):
                res[i + j] = add[res[i + j]][mx[y]]
    return res


def _series_inverse(F, u, n):
    """First ``n`` coefficients of 1/u for a power series ``u`` with u[0] != 0."""
    w0 = F.inv[u[0]]
    if F.is_prime:
        p = F.p
        w = [w0]
        for k in range(1, n):
            s = 0
            for i in range(1, min(k, len(u) - 1) + 1):
                s += u[i] * w[k - i]
            w.append((-w0 * s) % p)
        return w
    add, mul = F.add, F.mul
    w = [w0]
    for k in range(1, n):
        s = 0
        for i in range(1, min(k, len(u) - 1) + 1):
            s = add[s][mul[u[i]][w[k - i]]]
        w.append(F.neg[mul[w0][s]])
    return w


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class Laurent:
    """Laurent polynomial over F_q with an absolute precision window.

    ``prec is None`` means exact.  Otherwise coefficients of degree
    ``>= prec`` are unknown: reading them raises ``PrecisionError``.
    """

    __slots__ = ("F", "v", "c", "prec")

    def __init__(self, F: FiniteField, v: int, coeffs: Iterable[int], prec: int | None = None):
        c = list(coeffs)
        if prec is not None and v + len(c) > prec:
            del c[max(prec - v, 0):]
        start = 0
        while start < len(c) and c[start] == 0:
            start += 1
        end = len(c)
        while end > start and c[end - 1] == 0:
            end -= 1
        self.F = F
        self.c = tuple(c[start:end])
        self.v = v + start if self.c else 0
        self.prec = prec

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, F, prec=None):
        return cls(F, 0, (), prec)

    @classmethod
    def const(cls, F, a, prec=None):
        return cls(F, 0, (a,), prec)

    @classmethod
    def monomial(cls, F, k, a=1, prec=None):
        return cls(F, k, (a,), prec)

    @classmethod
    def from_dict(cls, F, d: Mapping[int, int], prec=None):
        d = {k: a for k, a in d.items() if a}
        if not d:
            return cls(F, 0, (), prec)
        lo, hi = min(d), max(d)
        return cls(F, lo, [d.get(k, 0) for k in range(lo, hi + 1)], prec)

    # inspection -----------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """True iff exactly zero; a truncated element with no known terms raises."""
        if self.c:
            return False
        if self.prec is not None:
            raise PrecisionError("zero test on an element with no known coefficients")
        return True

    def known_zero_below(self, L: int) -> bool:
        """True iff every coefficient of degree < L is known and zero."""
        if self.prec is not None and self.prec < L:
            raise PrecisionError(f"need precision {L}, have {self.prec}")
        return not self.c or self.v >= L

    def valuation(self) -> int:
        if not self.c:
            if self.prec is None:
                raise ValueError("valuation of 0")
            raise PrecisionError("valuation is beyond the known precision")
        return self.v

    def val_or(self, default):
        """Valuation, or ``default`` for the exact zero."""
        if self.c:
            return self.v
        if self.prec is not None:
            return self.prec
        return default

    def degree(self) -> int:
        return self.v + len(self.c) - 1 if self.c else -1

    def coeff(self, d: int) -> int:
        if self.prec is not None and d >= self.prec:
            raise PrecisionError(f"coefficient of t^{d} unknown (precision {self.prec})")
        i = d - self.v
        return self.c[i] if 0 <= i < len(self.c) else 0

    def coeffs_between(self, lo: int, hi: int) -> tuple:
        return tuple(self.coeff(d) for d in range(lo, hi))

    def to_dict(self):
        return {self.v + i: a for i, a in enumerate(self.c) if a}

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Laurent):
            return other
        if isinstance(other, int):
            return Laurent(self.F, 0, (self.F.from_int(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = _min_prec(self.prec, other.prec)
        if not other.c:
            return Laurent(self.F, self.v, self.c, prec) if prec != self.prec else self
        if not self.c:
            return Laurent(self.F, other.v, other.c, prec)
        F = self.F
        lo = min(self.v, other.v)
        hi = max(self.v + len(self.c), other.v + len(other.c))
        res = [0] * (hi - lo)
        for i, a in enumerate(self.c):
            res[self.v - lo + i] = a
        add = F.add
        off = other.v - lo
        for i, b in enumerate(other.c):
            res[off + i] = add[res[off + i]][b]
        return Laurent(F, lo, res, prec)

    __radd__ = __add__

    def __neg__(self):
        neg = self.F.neg
        return Laurent(self.F, self.v, [neg[a] for a in self.c], self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if (not self.c and self.prec is None) or (not other.c and other.prec is None):
            return Laurent(self.F, 0, ())
        # precision: min(P_a + val(b), P_b + val(a))
        pa = None if self.prec is None else self.prec + other.val_or(None)
        pb = None if other.prec is None else other.prec + self.val_or(None)
        prec = _min_prec(pa, pb)
        if not self.c or not other.c:
            return Laurent(self.F, 0, (), prec)
        return Laurent(self.F, self.v + other.v, _mul_lists(self.F, self.c, other.c), prec)

    __rmul__ = __mul__

    def scale(self, a: int):
        """Multiply by the constant ``a`` of F_q."""
        m = self.F.mul[a]
        return Laurent(self.F, self.v, [m[x] for x in self.c], self.prec)

    def shift(self, k: int):
        """Multiply by t^k."""
        return Laurent(self.F, self.v + k, self.c, None if self.prec is None else self.prec + k)

    def truncate(self, P: int):
        """Forget all coefficients of degree >= P."""
        return Laurent(self.F, self.v, self.c, _min_prec(self.prec, P))

    def drop_from(self, P: int):
        """Exact element obtained by deleting the terms of degree >= P."""
        if self.prec is not None and self.prec < P:
            raise PrecisionError(f"need precision {P}, have {self.prec}")
        return Laurent(self.F, self.v, self.c[: max(P - self.v, 0)])

    def unit_part(self, n: int) -> tuple:
        """First ``n`` coefficients of t^{-val} * self (a unit of O)."""
        v = self.valuation()
        return self.coeffs_between(v, v + n)

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        if self.prec is None and other.prec is None:
            return self.v == other.v and self.c == other.c
        P = _min_prec(self.prec, other.prec)
        return (self - other).truncate(P).known_zero_below(P)

    def __hash__(self):
        if self.prec is not None:
            raise TypeError("truncated Laurent elements are unhashable")
        return hash((self.v, self.c))

    def key(self):
        """Hashable exact encoding ``(v, coeffs)``."""
        return (self.v, self.c)

    def __repr__(self):
        if not self.c:
            body = "0"
        else:
            terms = []
            for i, a in enumerate(self.c):
                if a:
                    d = self.v + i
                    mon = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
                    if not mon:
                        terms.append(str(a))
                    elif a == 1:
                        terms.append(mon)
                    else:
                        terms.append(f"{a}*{mon}")
            body = " + ".join(terms)
        return body if self.prec is None else f"{body} + O(t^{self.prec})"


def laurent_mul(a: Laurent, b: Laurent) -> Laurent:
    return a * b


def unit_inverse_mod(a: Laurent, L: int) -> Laurent:
    """``b`` with ``a*b`` equal to 1 in every degree below ``L``."""
    if not a.c:
        if a.prec is None:
            raise NotInvertible("0 is not invertible")
        raise PrecisionError("leading coefficient unknown")
    v = a.v
    if a.prec is not None and a.prec - v < L:
        raise PrecisionError(f"unit part known to t^{a.prec - v}, need t^{L}")
    n = max(L, 0)
    w = _series_inverse(a.F, a.c, n) if n else []
    return Laurent(a.F, -v, w, L - v)


# ---------------------------------------------------------------------------
# Q(zeta_m)

@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple:
    """Integer coefficients of Phi_m, low degree first."""
    num = [-1] + [0] * (m - 1) + [1]          # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num = _int_poly_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _int_poly_div(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = a[k + len(b) - 1]           # b is monic
        out[k] = c
        for i, y in enumerate(b):
            a[k + i] -= c * y
    assert not any(a[: len(b) - 1]), "non-exact division"
    return out


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


class CyclotomicField:
    """Q(zeta_m) in the power basis 1, zeta, ..., zeta^(phi(m)-1)."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("m must be positive")
        self.m = m
        self.phi = cyclotomic_polynomial(m)
        self.dim = len(self.phi) - 1
        # coordinates of zeta^k for 0 <= k < m
        pows = []
        cur = [0] * self.dim
        cur[0] = 1
        for _ in range(m):
            pows.append(tuple(cur))
            cur = [0] + cur
            top = cur.pop()
            if top:
                for i in range(self.dim):
                    cur[i] -= top * self.phi[i]
        self._pow = pows

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.m == self.m

    def __hash__(self):
        return hash(("Q(zeta)", self.m))

    def __repr__(self):
        return f"CyclotomicField({self.m})"

    def zero(self):
        return CycScalar(self, (Fraction(0),) * self.dim)

    def one(self):
        return self.zeta(0)

    def zeta(self, k: int) -> "CycScalar":
        """zeta_m^k."""
        return CycScalar(self, tuple(Fraction(x) for x in self._pow[k % self.m]))

    def rational(self, r) -> "CycScalar":
        r = Fraction(r)
        return CycScalar(self, (r,) + (Fraction(0),) * (self.dim - 1))

    def from_exponents(self, counts: Mapping[int, object]) -> "CycScalar":
        """sum_k counts[k] * zeta^k, counts rational."""
        acc = [Fraction(0)] * self.dim
        for k, w in counts.items():
            if not w:
                continue
            w = Fraction(w)
            for i, x in enumerate(self._pow[k % self.m]):
                if x:
                    acc[i] += w * x
        return CycScalar(self, tuple(acc))


class CycScalar:
    """Element of Q(zeta_m); equality is coefficientwise."""

    __slots__ = ("K", "coeffs")

    def __init__(self, K: CyclotomicField, coeffs):
        self.K = K
        self.coeffs = tuple(coeffs)

    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            return self.K.rational(other)
        if not isinstance(other, CycScalar):
            return NotImplemented
        if other.K.m != self.K.m:
            raise ValueError("mixing different cyclotomic fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return CycScalar(self.K, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.K, (-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return CycScalar(self.K, (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        counts = {}
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        counts[i + j] = counts.get(i + j, 0) + a * b
        return self.K.from_exponents(counts)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def __repr__(self):
        terms = []
        for i, a in enumerate(self.coeffs):
            if a:
                terms.append(f"{a}" if i == 0 else f"{a}*z^{i}")
        return f"({' + '.join(terms) or '0'})_{self.K.m}"

    def to_json(self):
        return [str(a) for a in self.coeffs]
