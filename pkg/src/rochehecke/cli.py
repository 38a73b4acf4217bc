"""Command line surface: config, suites and versioned reports."""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .cosets import (CosetEnumerator, LambdaBox, auto_truncation, check_coset_product,
                     check_proddom_bijection, volume_oracle)
from .dims import context_dim_A, rows_to_csv, semismall_certificate
from .errors import ConfigError, RocheHeckeError
from .group import build_context
from .hecke import (Convolver, b_lambda, build_f_lambda, check_twisted_invariance, cyclotomic,
                    phi_count_oracle)
from .ring import prime_power
from .rootdata import is_antidominant, is_dominant, residue_char_check
from .torus_char import gl_conductors, is_regular

SCHEMA = "v1"


@dataclass
class Samples:
    products: int = 500
    invariance: int = 500
    decompose: int = 10000
    multiplicative: int = 10000
    fiber_points: int = 5
    satake_extra_points: int = 4


@dataclass
class SessionConfig:
    q: int = 3
    N: int = 2
    conductor: object = 2
    c: int | None = None
    character: list | None = None
    box: int = 1
    n_trunc: object = "auto"
    seed: int = 0
    samples: Samples = field(default_factory=Samples)
    cache_dir: str | None = None
    format: str = "json"

    @classmethod
    def from_dict(cls, d: dict) -> "SessionConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        d = dict(d)
        if "samples" in d:
            sk = {f.name for f in fields(Samples)}
            if set(d["samples"]) - sk:
                raise ConfigError(f"unknown sample keys: {sorted(set(d['samples']) - sk)}")
            d["samples"] = Samples(**d["samples"])
        cfg = cls(**d)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "SessionConfig":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e

    def validate(self):
        try:
            prime_power(self.q)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        if self.N < 2:
            raise ConfigError("N must be at least 2")
        if self.box < 0:
            raise ConfigError("box must be nonnegative")
        if self.n_trunc != "auto" and not isinstance(self.n_trunc, int):
            raise ConfigError("n_trunc must be an integer or 'auto'")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")

    def profile(self):
        """Conductor as an int or {(i, j): c} with 0-based i < j."""
        if isinstance(self.conductor, int):
            return self.conductor
        if isinstance(self.conductor, dict):
            out = {}
            for k, v in self.conductor.items():
                i, j = (int(x) - 1 for x in str(k).split(","))
                out[(min(i, j), max(i, j))] = int(v)
            return out
        raise ConfigError("conductor must be an integer or a mapping 'i,j' -> c")

    def materialized(self) -> dict:
        d = asdict(self)
        return d


class Session:
    """A context, its coset tables and built basis functions."""

    def __init__(self, cfg: SessionConfig, n_trunc: int | None = None):
        self.cfg = cfg
        try:
            self.ctx = build_context(cfg.q, cfg.N, cfg.profile(), cfg.c, cfg.character,
                                     allow_nonregular=cfg.character is None)
        except RocheHeckeError as e:
            raise ConfigError(str(e)) from e
        self.regular = is_regular(self.ctx.mu)
        if n_trunc is None:
            n_trunc = auto_truncation(self.ctx, cfg.box) if cfg.n_trunc == "auto" else cfg.n_trunc
        self.n_trunc = n_trunc
        self.enum = CosetEnumerator(self.ctx, n_trunc, cfg.cache_dir)
        self.basis = {}
        self.box = LambdaBox(cfg.N, cfg.box)

    def rng(self, *tags) -> random.Random:
        return random.Random(":".join([str(self.cfg.seed)] + [str(t) for t in tags]))

    def require_regular(self):
        if not self.regular:
            raise ConfigError("this suite needs a regular character")

    def f(self, lam):
        lam = tuple(lam)
        if lam not in self.basis:
            self.basis[lam] = build_f_lambda(lam, self.ctx, self.enum, self.rng("basis", lam))
        return self.basis[lam]


# ---------------------------------------------------------------------------
# suites; each returns (rows, passed)

def suite_describe(s: Session):
    ctx = s.ctx
    rd = ctx.rd
    conds = gl_conductors(ctx.mu, rd) if s.regular else None
    dA = context_dim_A(ctx)
    row = {
        "root_datum": rd.name,
        "positive_roots": [rd.label(a) for a in rd.positive],
        "f_levels": {rd.label(a): ctx.f[a] for a in rd.roots},
        "conductors": None if conds is None else {rd.label(a): conds[a] for a in rd.roots},
        "level_c": ctx.c,
        "m": ctx.mu.m,
        "A_order": ctx.A.order,
        "dim_A": {"torus_rank": dA.torus_rank, "unipotent": dA.unipotent, "total": dA.total},
        "J_level_matrix": ctx.level_matrix(),
        "unit_generators": [list(ctx.units.elements[g]) for g in ctx.units.generators],
        "character_tables": [list(t) for t in ctx.mu.tables],
        "regular": s.regular,
        "residue_warnings": residue_char_check(rd, ctx.F.p),
        "n_trunc": s.n_trunc,
    }
    return [row], True


def suite_volume(s: Session):
    rows = [volume_oracle(lam, s.ctx, s.enum) for lam in s.box]
    return rows, all(r["match"] for r in rows)


def suite_phi(s: Session):
    rows = []
    K = cyclotomic(s.ctx)
    for lam in s.box:
        r = phi_count_oracle(lam, s.ctx, s.enum)
        b = b_lambda(s.ctx, lam)
        ok = r["count"] == r["expected"] and b * r["count"] == 1 and r["via_p0"] == K.rational(r["expected"])
        rows.append({"lambda": r["lambda"], "representatives": r["representatives"],
                     "count": r["count"], "expected": r["expected"],
                     "via_p0": r["via_p0"].to_json(), "b_times_count": str(b * r["count"]),
                     "pass": ok})
    return rows, all(r["pass"] for r in rows)


def suite_coset_laws(s: Session):
    rows = []
    rd = s.ctx.rd
    n = s.cfg.samples.products
    for lam in s.box:
        for nu in s.box:
            for rep in check_coset_product(lam, nu, s.ctx, s.enum, n, s.rng("laws", lam, nu)):
                rows.append(rep.to_json())
            both_dom = is_dominant(rd, lam) and is_dominant(rd, nu)
            both_anti = is_antidominant(rd, lam) and is_antidominant(rd, nu)
            if both_dom or both_anti:
                rep = check_proddom_bijection(lam, nu, s.ctx, s.enum, s.cfg.samples.fiber_points,
                                              s.rng("proddom", lam, nu))
                rows.append(rep.to_json())
    return rows, all(r["pass"] for r in rows)


def suite_semismall(s: Session):
    rd = s.ctx.rd
    rows = []
    for lam in s.box:
        for nu in s.box:
            if is_dominant(rd, lam) and is_antidominant(rd, nu):
                rows.append(semismall_certificate(lam, nu, s.ctx, s.enum, s.cfg.samples.fiber_points,
                                                  s.rng("semismall", lam, nu)))
    return rows, all(r.passed for r in rows)


def satake_pair(s: Session, lam, nu) -> dict:
    """Compare (b_lam f_lam) * (b_nu f_nu) with b_{lam+nu} f_{lam+nu}.

    Points: every J-coset representative of J t^{lam+nu} J, a few further
    J'-representatives, and t^kappa for the other kappa with the same
    determinant valuation inside the doubled box.
    """
    ctx = s.ctx
    K = cyclotomic(ctx)
    lam, nu = tuple(lam), tuple(nu)
    tot = tuple(a + b for a, b in zip(lam, nu))
    Fl = s.f(lam).scaled(b_lambda(ctx, lam))
    Fn = s.f(nu).scaled(b_lambda(ctx, nu))
    target = s.f(tot)
    bt = K.rational(b_lambda(ctx, tot))
    conv = Convolver(ctx)
    T = target.tables[tot]
    rng = s.rng("satake", lam, nu)
    pts = [i for i, a in enumerate(T.a_index) if a == 0]
    others = [i for i, a in enumerate(T.a_index) if a != 0]
    pts += rng.sample(others, min(len(others), s.cfg.samples.satake_extra_points))
    mismatches = []
    lhs0 = None
    for i in pts:
        lhs = conv.evaluate(Fl, Fn, T.reps[i])
        rhs = bt * K.zeta(target.exps[tot][i])
        if i == 0:
            lhs0 = lhs
        if lhs != rhs:
            mismatches.append(i)
    support_violations = []
    B = 2 * s.cfg.box
    from .group import t_lambda
    for kappa in LambdaBox(ctx.N, B):
        if kappa != tot and sum(kappa) == sum(tot):
            v = conv.evaluate(Fl, Fn, t_lambda(ctx.F, kappa))
            if not v.is_zero():
                support_violations.append(list(kappa))
    return {"lambda": list(lam), "nu": list(nu), "lhs_coeffs": lhs0.to_json(),
            "rhs_coeffs": bt.to_json(), "points": len(pts),
            "mismatched_points": len(mismatches), "support_violations": support_violations,
            "equal": not mismatches and not support_violations and lhs0 == bt}


def _satake_worker(args):
    cfg_dict, n_trunc, pairs = args
    s = Session(SessionConfig.from_dict(cfg_dict), n_trunc)
    return [satake_pair(s, l, n) for l, n in pairs]


def suite_satake(s: Session, jobs: int = 1):
    s.require_regular()
    pairs = [(lam, nu) for lam in s.box for nu in s.box]
    if jobs > 1:
        cfg = s.cfg.materialized()
        chunks = [pairs[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_satake_worker, [(cfg, s.n_trunc, ch) for ch in chunks]))
        by_pair = {}
        for part in parts:
            for r in part:
                by_pair[(tuple(r["lambda"]), tuple(r["nu"]))] = r
        rows = [by_pair[(tuple(l), tuple(n))] for l, n in pairs]
    else:
        rows = [satake_pair(s, l, n) for l, n in pairs]
    # commutativity: both orders gave the same coefficient at t^{lam+nu}
    by = {(tuple(r["lambda"]), tuple(r["nu"])): r["lhs_coeffs"] for r in rows}
    for r in rows:
        r["commutes"] = by[(tuple(r["lambda"]), tuple(r["nu"]))] == by[(tuple(r["nu"]), tuple(r["lambda"]))]
    return rows, all(r["equal"] and r["commutes"] for r in rows)


def suite_properties(s: Session):
    """Iwahori round trip, mu multiplicativity, twisted invariance of f_lambda."""
    from .group import iwahori_decompose, in_J0, in_Jminus, in_Jplus, mu_of_J, random_J
    ctx = s.ctx
    sm = s.cfg.samples
    rng = s.rng("properties")
    fails = {"iwahori": 0, "multiplicative": 0, "invariance": 0}
    for _ in range(sm.decompose):
        g = random_J(ctx, rng, 2)
        jm, j0, jp = iwahori_decompose(g, ctx)
        L = ctx.M + 2
        if not (in_Jminus(jm, ctx) and in_J0(j0, ctx) and in_Jplus(jp, ctx)
                and jm * j0 * jp == g.truncate(L)):
            fails["iwahori"] += 1
    for _ in range(sm.multiplicative):
        g, h = random_J(ctx, rng, 2), random_J(ctx, rng, 2)
        if (mu_of_J(g, ctx) + mu_of_J(h, ctx)) % ctx.mu.m != mu_of_J(g * h, ctx):
            fails["multiplicative"] += 1
    if s.regular:
        for lam in s.box:
            fails["invariance"] += len(check_twisted_invariance(s.f(lam), tuple(lam), sm.invariance,
                                                                s.rng("inv", lam), s.enum.keyer))
    rows = [{"property": k, "failures": v, "pass": v == 0} for k, v in fails.items()]
    return rows, all(r["pass"] for r in rows)


SUITES = {
    "describe": suite_describe,
    "volume-table": suite_volume,
    "phi-oracle": suite_phi,
    "coset-laws": suite_coset_laws,
    "semismall": suite_semismall,
    "verify-satake": suite_satake,
    "properties": suite_properties,
}

STABILITY_SUITES = ("volume-table", "phi-oracle", "semismall", "coset-laws", "verify-satake",
                    "properties")


def _plain(rows):
    return [r.to_json() if hasattr(r, "to_json") else r for r in rows]


def suite_stability(s: Session, suites=STABILITY_SUITES, jobs: int = 1):
    """Rerun suites at N_trunc and N_trunc + 1 and diff the results."""
    other = Session(s.cfg, s.n_trunc + 1)
    rows = []
    for name in suites:
        if name == "verify-satake" and not s.regular:
            continue
        fn = SUITES[name]
        a = _plain(fn(s)[0] if name != "verify-satake" else fn(s, jobs)[0])
        b = _plain(fn(other)[0] if name != "verify-satake" else fn(other, jobs)[0])
        same = json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
        rows.append({"suite": name, "n_trunc": s.n_trunc, "n_trunc_plus_one": other.n_trunc,
                     "identical": same, "pass": same})
    return rows, all(r["pass"] for r in rows)


def run_command(name: str, cfg: SessionConfig, jobs: int = 1, suites=None):
    s = Session(cfg)
    if name == "verify-satake":
        rows, ok = suite_satake(s, jobs)
    elif name == "stability":
        rows, ok = suite_stability(s, tuple(suites or STABILITY_SUITES), jobs=jobs)
    else:
        rows, ok = SUITES[name](s)
    return {"schema": SCHEMA, "command": name, "config": cfg.materialized(),
            "n_trunc": s.n_trunc, "results": _plain(rows), "pass": ok}, rows


def render(report: dict, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if report["command"] == "semismall":
        return rows_to_csv(rows)
    results = report["results"]
    buf = io.StringIO()
    keys = []
    for r in results:
        for k in r:
            if k not in keys:
                keys.append(k)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in results:
        w.writerow([json.dumps(r.get(k), sort_keys=True) if isinstance(r.get(k), (list, dict))
                    else r.get(k) for k in keys])
    return buf.getvalue()


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="rochehecke", description=__doc__)
    ap.add_argument("command", choices=sorted(list(SUITES) + ["stability"]))
    ap.add_argument("--config", help="JSON session config (defaults: GL_2, q=3, conductor 2, box 1)")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--format", choices=["json", "csv"])
    ap.add_argument("--seed", type=int)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--suite", action="append", choices=STABILITY_SUITES,
                    help="suite rerun by 'stability' (repeatable; default: all)")
    args = ap.parse_args(argv)
    try:
        cfg = SessionConfig.load(args.config) if args.config else SessionConfig()
        if args.seed is not None:
            cfg.seed = args.seed
        if args.format:
            cfg.format = args.format
        report, rows = run_command(args.command, cfg, args.jobs, args.suite)
        text = render(report, rows, cfg.format)
    except RocheHeckeError as e:
        failure = {"schema": SCHEMA, "command": args.command, "pass": False,
                   "error": type(e).__name__, "message": str(e)}
        text = json.dumps(failure, sort_keys=True, indent=2) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return 2
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
