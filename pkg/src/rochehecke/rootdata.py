"""Root data, coweights, concave level functions and the volume formulas.

Roots are stored as integer functionals on the coweight lattice
``Lambda = Z^rank``; the pairing ``alpha(lambda)`` is a dot product.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .errors import ConcavityViolation, DominanceError, PositivityViolation

Vector = tuple


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _neg(a):
    return tuple(-x for x in a)


@dataclass(frozen=True)
class RootDatum:
    name: str
    rank: int
    roots: tuple                    # all roots, as functionals on Lambda
    positive: tuple                 # Delta_+
    simple: tuple                   # simple roots, in Delta_+
    coroots: Mapping                # root -> coroot (vector in Lambda)
    components: tuple               # ((type letter, rank), ...)
    central_normalization: str = "none"   # "gl": last coordinate fixes the centre
    _root_set: frozenset = field(default=frozenset(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_root_set", frozenset(self.roots))
        for a in self.positive:
            if _neg(a) not in self._root_set or _neg(a) in self.positive:
                raise ValueError(f"bad positive system at {a}")
        for a in self.roots:
            if _dot(a, self.coroots[a]) != 2:
                raise ValueError(f"<{a}, coroot> != 2")

    # basic queries ------------------------------------------------------
    @property
    def negative(self):
        pos = set(self.positive)
        return tuple(a for a in self.roots if a not in pos)

    def is_root(self, a) -> bool:
        return tuple(a) in self._root_set

    def is_positive(self, a) -> bool:
        return tuple(a) in set(self.positive)

    def pair(self, alpha, lam) -> int:
        return _dot(alpha, lam)

    def reflect(self, alpha, lam):
        """s_alpha(lambda) = lambda - alpha(lambda) alpha^vee."""
        k = _dot(alpha, lam)
        cv = self.coroots[tuple(alpha)]
        return tuple(x - k * y for x, y in zip(lam, cv))

    def reflect_root(self, alpha, beta):
        """s_alpha acting on the root beta (dual action)."""
        k = _dot(beta, self.coroots[tuple(alpha)])
        return tuple(b - k * a for a, b in zip(alpha, beta))

    def weyl_generators_permute_roots(self) -> bool:
        return all(self.reflect_root(s, b) in self._root_set for s in self.simple for b in self.roots)

    def root_triples(self):
        """All (alpha, beta) with alpha + beta a root."""
        for a in self.roots:
            for b in self.roots:
                s = _add(a, b)
                if s in self._root_set:
                    yield a, b

    def label(self, alpha) -> str:
        if self.central_normalization == "gl":
            i = alpha.index(1)
            j = alpha.index(-1)
            return f"e{i + 1}-e{j + 1}"
        return str(alpha)

    def from_simple_pairings(self, values: Sequence[int]):
        """The coweight with alpha_i(lambda) = values[i] and trivial central part."""
        if self.central_normalization == "gl":
            n = self.rank
            lam = [0] * n
            for i in range(n - 2, -1, -1):
                lam[i] = lam[i + 1] + values[i]
            return tuple(lam)
        # adjoint coordinates: simple roots are the coordinate functionals
        return tuple(values)


# ---------------------------------------------------------------------------
# constructors

def gl(n: int) -> RootDatum:
    """GL_n with roots e_i - e_j and Delta_+ = {i < j}."""
    def e(i, j):
        v = [0] * n
        v[i], v[j] = 1, -1
        return tuple(v)
    roots = tuple(e(i, j) for i in range(n) for j in range(n) if i != j)
    pos = tuple(e(i, j) for i in range(n) for j in range(i + 1, n))
    simple = tuple(e(i, i + 1) for i in range(n - 1))
    return RootDatum(f"GL_{n}", n, roots, pos, simple, {a: a for a in roots},
                     (("A", n - 1),) if n > 1 else (), "gl")


def _gram(letter: str, r: int):
    G = [[0] * r for _ in range(r)]
    if letter == "A":
        for i in range(r):
            G[i][i] = 2
            if i + 1 < r:
                G[i][i + 1] = G[i + 1][i] = -1
    elif letter == "B":
        for i in range(r):
            G[i][i] = 4 if i < r - 1 else 2
            if i + 1 < r:
                G[i][i + 1] = G[i + 1][i] = -2
    elif letter == "C":
        for i in range(r):
            G[i][i] = 2 if i < r - 1 else 4
            if i + 1 < r:
                G[i][i + 1] = G[i + 1][i] = -1 if i + 1 < r - 1 else -2
    elif letter == "D":
        if r < 3:
            raise ValueError("D_n needs n >= 3")
        for i in range(r):
            G[i][i] = 2
        for i in range(r - 2):
            G[i][i + 1] = G[i + 1][i] = -1
        G[r - 3][r - 1] = G[r - 1][r - 3] = -1
    elif letter == "G":
        if r != 2:
            raise ValueError("G has rank 2")
        G = [[2, -3], [-3, 6]]
    elif letter == "F":
        if r != 4:
            raise ValueError("F has rank 4")
        G = [[4, -2, 0, 0], [-2, 4, -2, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    elif letter == "E":
        if r not in (6, 7, 8):
            raise ValueError("E has rank 6, 7 or 8")
        # Bourbaki labelling: 1-3-4-5-6-7-8 chain, 2 attached to 4
        edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]
        for i in range(r):
            G[i][i] = 2
        for a, b in edges:
            if a <= r and b <= r:
                G[a - 1][b - 1] = G[b - 1][a - 1] = -1
    else:
        raise ValueError(f"unknown type {letter}")
    return G


def cartan_type(letter: str, r: int) -> RootDatum:
    """Adjoint root datum of the given Cartan type.

    Lambda is the coweight lattice in the basis of fundamental coweights,
    so a root with simple-root coordinates ``a`` pairs as ``a . lambda``.
    """
    if letter == "A":
        G = _gram("A", r)
    else:
        G = _gram(letter, r)
    ip = lambda a, b: sum(a[i] * G[i][j] * b[j] for i in range(r) for j in range(r))
    simple = [tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]

    def refl(s, b):
        k = Fraction(2 * ip(b, s), ip(s, s))
        assert k.denominator == 1
        return tuple(x - int(k) * y for x, y in zip(b, s))

    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for b in frontier:
            for s in simple:
                c = refl(s, b)
                if c not in roots:
                    roots.add(c)
                    nxt.append(c)
        frontier = nxt
    roots = tuple(sorted(roots, key=lambda a: (-sum(a) if sum(a) < 0 else 0, sum(a), a)))
    pos = tuple(a for a in roots if all(x >= 0 for x in a))
    coroots = {}
    for a in roots:
        na = ip(a, a)
        cv = []
        for s in simple:
            k = Fraction(2 * ip(s, a), na)
            assert k.denominator == 1
            cv.append(int(k))
        coroots[a] = tuple(cv)
    return RootDatum(f"{letter}_{r}", r, roots, pos, tuple(simple), coroots, ((letter, r),))


# ---------------------------------------------------------------------------
# coweights

def is_dominant(rd: RootDatum, lam) -> bool:
    return all(_dot(a, lam) >= 0 for a in rd.positive)


def is_antidominant(rd: RootDatum, lam) -> bool:
    return all(_dot(a, lam) <= 0 for a in rd.positive)


def dominant_split(rd: RootDatum, lam):
    """Return (lam_plus, lam_minus), both dominant, lam = lam_plus - lam_minus.

    lam_minus is the smallest choice: alpha_i(lam_minus) = max(0, -alpha_i(lam))
    on each simple root, with vanishing central normalization.
    """
    lam = tuple(lam)
    minus = rd.from_simple_pairings([max(0, -_dot(s, lam)) for s in rd.simple])
    plus = _add(lam, minus)
    assert is_dominant(rd, plus) and is_dominant(rd, minus)
    return plus, minus


def weyl_orbit(rd: RootDatum, x, action: str = "coweight"):
    """Orbit of x under the Weyl group generated by the simple reflections.

    ``action="tuple"`` permutes the coordinates of an N-tuple (GL_N acting on
    tuples of coordinate characters).
    """
    x = tuple(x)
    if action == "tuple":
        gens = [lambda v, i=i: v[:i] + (v[i + 1], v[i]) + v[i + 2:] for i in range(len(x) - 1)]
    else:
        gens = [lambda v, s=s: rd.reflect(s, v) for s in rd.simple]
    seen = {x}
    frontier = [x]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = g(v)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


_EXCLUDED = {"B": {2}, "C": {2}, "D": {2}, "F": {2, 3}, "G": {2, 3},
             "E6": {2, 3}, "E7": {2, 3}, "E8": {2, 3, 5}, "A": set()}


def residue_char_check(rd: RootDatum, p: int) -> list[str]:
    """Warnings for each irreducible factor whose excluded primes contain p."""
    out = []
    for letter, r in rd.components:
        key = f"E{r}" if letter == "E" else letter
        if p in _EXCLUDED[key]:
            out.append(f"{letter}_{r}: residue characteristic {p} is excluded")
    return out


def coweight_box(rank: int, bound: int):
    """All integer vectors with |lambda_i| <= bound, in lexicographic order."""
    return [tuple(v) for v in product(range(-bound, bound + 1), repeat=rank)]


# ---------------------------------------------------------------------------
# level functions

class ConcaveLevelFunction(Mapping):
    """Validated f: Delta -> Z with f(a)+f(b) >= f(a+b) and f(a)+f(-a) >= 1."""

    def __init__(self, rd: RootDatum, values: Mapping):
        self.rd = rd
        self._f = {tuple(a): int(values[tuple(a)]) for a in rd.roots}

    def __getitem__(self, alpha):
        return self._f[tuple(alpha)]

    def __iter__(self):
        return iter(self._f)

    def __len__(self):
        return len(self._f)

    def __repr__(self):
        return "f{" + ", ".join(f"{self.rd.label(a)}: {v}" for a, v in self._f.items()) + "}"

    def __eq__(self, other):
        if isinstance(other, ConcaveLevelFunction):
            return self._f == other._f
        return dict(self._f) == dict(other)

    def __hash__(self):
        return hash(tuple(sorted(self._f.items())))

    def max_level(self) -> int:
        return max(self._f.values()) if self._f else 0


def validate_concave(f: Mapping, rd: RootDatum) -> ConcaveLevelFunction:
    missing = [a for a in rd.roots if tuple(a) not in f]
    if missing:
        raise KeyError(f"f undefined on {missing}")
    for a in rd.roots:
        if f[a] + f[_neg(a)] < 1:
            raise PositivityViolation(rd.label(a))
    for a, b in rd.root_triples():
        if f[a] + f[b] < f[_add(a, b)]:
            raise ConcavityViolation(rd.label(a), rd.label(b))
    return ConcaveLevelFunction(rd, f)


def iwahori_levels(rd: RootDatum) -> ConcaveLevelFunction:
    return validate_concave({a: 0 if rd.is_positive(a) else 1 for a in rd.roots}, rd)


def conjugated_levels(f: ConcaveLevelFunction, lam) -> dict:
    """Levels of t^lam J t^-lam: alpha -> f(alpha) + alpha(lam)."""
    return {a: f[a] + _dot(a, lam) for a in f}


def intersection_levels(f: ConcaveLevelFunction, lam) -> dict:
    """Levels of J cap t^lam J t^-lam."""
    return {a: max(f[a], f[a] + _dot(a, lam)) for a in f}


def plus_part_intersection_levels(f: ConcaveLevelFunction, lam, nu) -> dict:
    """Levels of (t^-lam J+ t^lam) cap (t^-nu J+ t^nu), on Delta_+."""
    return {a: f[a] - min(_dot(a, lam), _dot(a, nu)) for a in f.rd.positive}


def log_volume(rd: RootDatum, lam) -> int:
    """log_q vol(J t^lam J) = sum over Delta_+ of |alpha(lam)|."""
    return sum(abs(_dot(a, lam)) for a in rd.positive)


def b_lambda_exponent(rd: RootDatum, lam) -> int:
    """Exponent e with b_lam = q^-e."""
    return sum(max(_dot(a, lam), 0) for a in rd.positive)


def semismall_fiber_dim(rd: RootDatum, lam, nu) -> int:
    if not is_dominant(rd, lam):
        raise DominanceError(f"{lam} is not dominant")
    if not is_antidominant(rd, nu):
        raise DominanceError(f"{nu} is not antidominant")
    twice = log_volume(rd, lam) + log_volume(rd, nu) - log_volume(rd, _add(lam, nu))
    if twice % 2 or twice < 0:
        raise ArithmeticError(f"fiber dimension 1/2*{twice} is not a nonnegative integer")
    return twice // 2


def intersection_dim(rd: RootDatum, lam, nu) -> int:
    """log_q vol(t^-lam J t^lam J cap t^-nu J t^nu J) for dominant lam, nu."""
    if not (is_dominant(rd, lam) and is_dominant(rd, nu)):
        raise DominanceError("intersection_dim needs dominant coweights")
    diff = tuple(b - a for a, b in zip(lam, nu))
    twice = log_volume(rd, nu) + log_volume(rd, lam) - log_volume(rd, diff)
    assert twice % 2 == 0
    return twice // 2
