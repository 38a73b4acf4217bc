"""Dimension bookkeeping for A and relevant orbits, and semismallness certificates."""
from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field

from .cosets import CosetEnumerator, fiber_dimension_oracle
from .errors import DominanceError
from .group import JContext
from .rootdata import (ConcaveLevelFunction, is_antidominant, is_dominant, log_volume,
                       semismall_fiber_dim)
from .torus_char import t_f_log_order


@dataclass(frozen=True)
class ADimension:
    """dim A split into multiplicative (G_m) and additive (G_a) directions."""

    torus_rank: int
    unipotent: int

    @property
    def total(self) -> int:
        return self.torus_rank + self.unipotent

    def order(self, q: int) -> int:
        return (q - 1) ** self.torus_rank * q ** self.unipotent


def dim_A(f: ConcaveLevelFunction, c: int) -> ADimension:
    """A = T(O)/T' with T(O)/T_c of dimension N*c and T'/T_c unipotent.

    Each coordinate of T(O)/T_c contributes one G_m and c-1 copies of G_a;
    the image of T_f removes sum_m (r_m - r_{m-1})(c - m) additive directions.
    """
    N = f.rd.rank
    return ADimension(N, N * (c - 1) - t_f_log_order(f, c))


def context_dim_A(ctx: JContext) -> ADimension:
    d = dim_A(ctx.f, ctx.c)
    if d.order(ctx.q) != ctx.A.order:
        raise AssertionError(f"dim A bookkeeping gives order {d.order(ctx.q)}, closure gives {ctx.A.order}")
    return d


def orbit_dim(rd, lam, dimA: int) -> int:
    """dim of the relevant orbit of lambda: log_q vol + dim A."""
    return log_volume(rd, lam) + dimA


@dataclass
class SemismallRow:
    lam: tuple
    nu: tuple
    fiber_dim_formula: int
    fiber_dim_oracle: list
    bound: int
    passed: bool
    detail: dict = field(default_factory=dict)

    def csv_row(self):
        oracle = self.fiber_dim_oracle[0] if len(set(self.fiber_dim_oracle)) == 1 else "|".join(map(str, self.fiber_dim_oracle))
        return ["(" + ",".join(map(str, self.lam)) + ")", "(" + ",".join(map(str, self.nu)) + ")",
                self.fiber_dim_formula, oracle, self.bound, self.passed]

    def to_json(self):
        return {"lambda": list(self.lam), "nu": list(self.nu),
                "fiber_dim_formula": self.fiber_dim_formula,
                "fiber_dim_oracle": self.fiber_dim_oracle, "bound": self.bound,
                "pass": self.passed, **self.detail}


def semismall_certificate(lam, nu, ctx: JContext, enum: CosetEnumerator, points: int,
                          rng: random.Random) -> SemismallRow:
    """Compare fiber dimensions over sampled x in J t^{lam+nu} J with the formula and the bound.

    X = J^lam x_J J^nu has dimension log_q vol(J t^lam J) + orbit_dim(nu),
    the stratum through x is the orbit of lam+nu, and dim(x) = 0.
    """
    rd = ctx.rd
    lam, nu = tuple(lam), tuple(nu)
    if not is_dominant(rd, lam) or not is_antidominant(rd, nu):
        raise DominanceError(f"need lambda dominant and nu antidominant, got {lam}, {nu}")
    dA = context_dim_A(ctx).total
    s = tuple(a + b for a, b in zip(lam, nu))
    formula = semismall_fiber_dim(rd, lam, nu)
    dim_X = log_volume(rd, lam) + orbit_dim(rd, nu, dA)
    dim_Y = orbit_dim(rd, s, dA)
    twice = dim_X - dim_Y
    bound = twice // 2
    T = enum.table(s)
    oracle = []
    for _ in range(points):
        x = T.reps[rng.randrange(len(T))]
        oracle.append(fiber_dimension_oracle(lam, nu, x, ctx, enum))
    ok = all(d == formula for d in oracle) and all(2 * d <= twice for d in oracle)
    return SemismallRow(lam, nu, formula, oracle, bound, ok,
                        {"dim_X": dim_X, "dim_stratum": dim_Y, "dim_A": dA})


CSV_HEADER = ["lambda", "nu", "fiber_dim_formula", "fiber_dim_oracle", "bound", "pass"]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.csv_row())
    return buf.getvalue()
