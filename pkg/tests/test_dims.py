import random

import pytest

from rochehecke.dims import (ADimension, CSV_HEADER, context_dim_A, dim_A, orbit_dim,
                             rows_to_csv, semismall_certificate)
from rochehecke.errors import DominanceError
from rochehecke.rootdata import gl, is_dominant, log_volume
from rochehecke.group import build_context

from conftest import context, enumerator


@pytest.mark.parametrize("q,N,profile,c", [(3, 2, 2, None), (2, 2, 1, None), (3, 2, 1, 3),
                                           (2, 3, 2, None), (4, 2, 3, None)])
def test_dim_A_matches_order(q, N, profile, c):
    ctx = build_context(q, N, profile, c, allow_nonregular=True)
    d = context_dim_A(ctx)
    assert d.order(q) == ctx.A.order
    assert d.torus_rank == N


def test_dim_A_examples():
    ctx = context(3)
    assert dim_A(ctx.f, ctx.c) == ADimension(2, 2)
    assert ADimension(2, 2).total == 4 and ADimension(2, 2).order(3) == 36


def test_orbit_dim_examples():
    ctx = context(3)
    dA = context_dim_A(ctx).total
    rd = ctx.rd
    assert orbit_dim(rd, (0, 0), dA) == dA
    assert orbit_dim(rd, (1, 0), dA) == 1 + dA
    dom = [lam for lam in [(a, b) for a in range(-2, 3) for b in range(-2, 3)] if is_dominant(rd, lam)]
    for lam in dom:
        assert orbit_dim(rd, lam, dA) - orbit_dim(rd, (0, 0), dA) == log_volume(rd, lam)
        # raising lam by a positive coroot increases the dimension
        up = (lam[0] + 1, lam[1] - 1)
        assert orbit_dim(rd, up, dA) > orbit_dim(rd, lam, dA)


def test_semismall_examples():
    ctx, enum = context(2), enumerator(2)
    rng = random.Random(0)
    row = semismall_certificate((1, 0), (0, 0), ctx, enum, 3, rng)
    assert row.passed and row.fiber_dim_formula == 0
    row = semismall_certificate((1, 0), (-1, 0), ctx, enum, 5, rng)
    assert row.passed and row.fiber_dim_oracle == [1] * 5 and row.bound == 1
    row = semismall_certificate((2, 0), (-1, 0), context(2), enumerator(2, box=2), 3, rng)
    assert row.passed and row.fiber_dim_formula == 1
    with pytest.raises(DominanceError):
        semismall_certificate((0, 1), (-1, 0), ctx, enum, 1, rng)


def test_csv_layout():
    ctx, enum = context(2), enumerator(2)
    row = semismall_certificate((1, 0), (-1, 0), ctx, enum, 2, random.Random(1))
    text = rows_to_csv([row])
    lines = text.splitlines()
    assert lines[0].split(",") == CSV_HEADER
    assert lines[1].endswith(",1,1,1,True")
