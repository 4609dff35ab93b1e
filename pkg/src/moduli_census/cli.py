"""Command-line surface.

Commands: curve, moduli, stable20, ntilde, survey, theory, check.

Polynomial input: comma-separated canonical integer labels of the coefficients,
constant term first, leading 1 implicit (so `--q 3 --poly 1,2,0,0,0` is
y^2 = x^5 + 2x + 1 over F_3).  Big integers are serialized as decimal strings.

Exit codes: 0 success, 2 input validation, 3 unsupported mathematical regime,
4 resource caps, 5 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import tables
from .cache import LPolyCache, resolve_cache_dir
from .checks import run_checks
from .counts import IntegralityError
from .curves import HyperellipticCurve, LPolynomial, jacobian_order, l_polynomial, zeta_value
from .fields import FieldError, make_field
from .hn import CurveContext, RankLimitError
from .polynomials import MonicPoly, is_squarefree
from .stats import (
    FamilyError,
    FamilySpec,
    char_fn_phi,
    moment_h,
    statistic_mnd,
    statistic_ms20,
    statistic_ntilde,
)
from .survey import moment_report, survey_records

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_REGIME = 3
EXIT_CAPS = 4
EXIT_INVARIANT = 5


@dataclass
class RunConfig:
    """Validated arguments of one invocation, serialized next to survey outputs."""

    command: str
    q: int | None = None
    gamma: int | None = None
    poly: str | None = None
    rank: int | None = None
    deg: int | None = None
    z_cut: int | None = None
    degree_bound: int | None = None
    r_max: int | None = None
    tau: list[float] | None = None
    samples: int | None = None
    exhaustive: bool = False
    seed: int | None = None
    threads: int = 1
    out: str | None = None
    summary: str | None = None
    cache_dir: str | None = None
    beta1_variant: str = "exact"
    ntilde_family: str = "base"
    stats: str | None = None
    verbose: bool = False


def _parse_poly(field, poly_arg: str) -> MonicPoly:
    try:
        labels = [int(x) for x in poly_arg.split(",")]
    except ValueError as exc:
        raise FieldError(f"bad --poly value {poly_arg!r}") from exc
    if any(not 0 <= v < field.q for v in labels):
        raise FieldError(f"--poly labels must be in 0..{field.q - 1}")
    return MonicPoly.from_labels(field, labels)


def _prime_power_field(q: int):
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            while q % p == 0 and q > 1:
                q //= p
                e += 1
            if q != 1:
                raise FieldError("q must be a prime power")
            return make_field(p, e)
    raise FieldError("q must be >= 3")


def _curve_from_args(cfg: RunConfig) -> HyperellipticCurve:
    field = _prime_power_field(cfg.q)
    poly = _parse_poly(field, cfg.poly)
    if poly.degree < 5:
        raise FieldError("curve polynomial must have degree >= 5")
    if not is_squarefree(poly):
        from .polynomials import p_derivative, p_gcd

        g = p_gcd(field, poly.full(), p_derivative(field, poly.full()))
        labels = [field.label(c) for c in g]
        raise FieldError(f"polynomial is not squarefree: gcd(F, F') has labels {labels}")
    return HyperellipticCurve(poly)


def _lpoly_with_cache(curve: HyperellipticCurve, cfg: RunConfig) -> LPolynomial:
    cache_dir = resolve_cache_dir(cfg.cache_dir)
    if cache_dir is None:
        return l_polynomial(curve)
    cache = LPolyCache(cache_dir)
    if cache.corrupt_lines and cfg.verbose:
        print(f"cache: {cache.corrupt_lines} corrupt line(s) skipped, recomputing", file=sys.stderr)
    labels = list(curve.F.labels)
    hit = cache.get(curve.field.q, curve.gamma, labels)
    if hit is not None:
        return LPolynomial(curve.field.q, curve.genus, hit)
    L = l_polynomial(curve)
    cache.put(curve.field.q, curve.gamma, labels, L.coeffs)
    return L


def cmd_curve(cfg: RunConfig) -> int:
    curve = _curve_from_args(cfg)
    scans_before = tables.SCAN_COUNT
    L = _lpoly_with_cache(curve, cfg)
    ctx = CurveContext.from_lpolynomial(L)
    report = {
        "q": curve.field.q,
        "gamma": curve.gamma,
        "g": curve.genus,
        "F": list(curve.F.labels),
        "N": {str(m): str(L.point_count(m)) for m in range(1, curve.genus + 3)},
        "L": [str(c) for c in L.coeffs],
        "NJ": str(ctx.nj),
        "NJ2": str(jacobian_order(L, 2)),
        "zeta": {str(k): f"{zeta_value(L, k).numerator}/{zeta_value(L, k).denominator}" for k in (2, 3, 4)},
    }
    if cfg.verbose:
        report["point_scans"] = tables.SCAN_COUNT - scans_before
    _emit(report, cfg)
    return EXIT_OK


def cmd_moduli(cfg: RunConfig) -> int:
    curve = _curve_from_args(cfg)
    ctx = CurveContext.from_lpolynomial(_lpoly_with_cache(curve, cfg))
    value, raw, centered = statistic_mnd(ctx, curve.gamma, cfg.rank, cfg.deg)
    _emit(
        {
            "q": curve.field.q,
            "rank": cfg.rank,
            "deg": cfg.deg,
            "count": str(value),
            "raw_statistic": float(raw),
            "centered_statistic": float(centered),
        },
        cfg,
    )
    return EXIT_OK


def cmd_stable20(cfg: RunConfig) -> int:
    curve = _curve_from_args(cfg)
    ctx = CurveContext.from_curve(curve)
    value, raw, centered = statistic_ms20(ctx, curve.gamma, cfg.beta1_variant)
    _emit(
        {
            "q": curve.field.q,
            "count": str(value),
            "raw_statistic": float(raw),
            "centered_statistic": float(centered),
            "variant": cfg.beta1_variant,
        },
        cfg,
    )
    return EXIT_OK


def cmd_ntilde(cfg: RunConfig) -> int:
    curve = _curve_from_args(cfg)
    ctx = CurveContext.from_curve(curve)
    value, raw, centered, gap = statistic_ntilde(ctx, curve.gamma, cfg.beta1_variant)
    _emit(
        {
            "q": curve.field.q,
            "count": str(value),
            "raw_statistic": float(raw),
            "centered_statistic": float(centered),
            "gap_statistic": float(gap),
            "variant": cfg.beta1_variant,
        },
        cfg,
    )
    return EXIT_OK


def _spec_from_config(cfg: RunConfig) -> FamilySpec:
    stats = tuple(s for s in (cfg.stats or "mnd(2,1)").split(";") if s)
    return FamilySpec(
        q=cfg.q,
        gamma=cfg.gamma,
        exhaustive=cfg.exhaustive,
        count=cfg.samples or 0,
        seed=cfg.seed or 0,
        z_cut=cfg.z_cut or 0,
        statistics=stats,
        ntilde_family=cfg.ntilde_family,
        beta_variant=cfg.beta1_variant,
        r_max=cfg.r_max or 2,
        degree_bound=cfg.degree_bound or 12,
    )


def cmd_survey(cfg: RunConfig) -> int:
    spec = _spec_from_config(cfg)
    spec.validate()
    records = survey_records(spec, threads=cfg.threads)
    report = moment_report(spec, records)
    out = Path(cfg.out) if cfg.out else None
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
        with open(out.with_suffix(out.suffix + ".config.json"), "w", encoding="utf-8") as fh:
            json.dump(asdict(cfg), fh, sort_keys=True, indent=2)
    summary_rows = [
        {
            "statistic": row.statistic,
            "r": row.r,
            "empirical": repr(row.empirical),
            "theoretical": repr(row.theoretical),
            "tail": repr(row.tail),
            "tolerance": repr(row.tolerance),
            "pass": str(row.passed).lower(),
        }
        for row in report.rows
    ]
    if cfg.summary:
        with open(cfg.summary, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(
                fh, fieldnames=["statistic", "r", "empirical", "theoretical", "tail", "tolerance", "pass"]
            )
            writer.writeheader()
            writer.writerows(summary_rows)
    _emit({"records": len(records), "rows": summary_rows, "all_passed": report.all_passed}, cfg)
    return EXIT_OK if report.all_passed else EXIT_INVARIANT


def cmd_theory(cfg: RunConfig, which: str) -> int:
    if which == "hr":
        rows = []
        for r in range(1, (cfg.r_max or 2) + 1):
            value, tail = moment_h(cfg.q, r, cfg.degree_bound or 12)
            rows.append({"r": r, "value": repr(value), "tail": repr(tail)})
        _emit({"q": cfg.q, "H": rows}, cfg)
        return EXIT_OK
    rows = []
    for tau in cfg.tau or [0.0]:
        val = char_fn_phi(cfg.q, tau, cfg.degree_bound or 12, cfg.r_max or 3)
        rows.append({"tau": tau, "re": repr(val.real), "im": repr(val.imag)})
    _emit({"q": cfg.q, "phi": rows}, cfg)
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    results = run_checks(cfg.beta1_variant)
    width = max(len(name) for name, _, _ in results)
    ok_all = True
    for name, ok, detail in results:
        ok_all &= ok
        print(f"{name.ljust(width)}  {'PASS' if ok else 'FAIL'}  {detail}")
    return EXIT_OK if ok_all else EXIT_INVARIANT


def _emit(payload: dict, cfg: RunConfig) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moduli-census",
        description="Exact F_q-point counts of moduli of bundles over hyperelliptic curves",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, poly=False, family=False):
        sp.add_argument("--q", type=int, required=True, help="base field size (odd prime power)")
        if poly:
            sp.add_argument(
                "--poly",
                required=True,
                help="coefficient labels of monic F, constant first, leading 1 implicit",
            )
        if family:
            sp.add_argument("--gamma", type=int, required=True, help="degree of the sampled F")
            sp.add_argument("--samples", type=int, default=0)
            sp.add_argument("--exhaustive", action="store_true")
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--threads", type=int, default=1)
            sp.add_argument("--Z", dest="z_cut", type=int, default=0, help="truncation (default gamma)")
            sp.add_argument(
                "--stats",
                default="mnd(2,1)",
                help="semicolon-separated: mnd(n,d), ms20, ntilde, deltaZ",
            )
            sp.add_argument("--ntilde-family", choices=("base", "square"), default="base")
        sp.add_argument("--out", default=None)
        sp.add_argument("--cache-dir", default=None, help=f"overridden by ${'MODULI_CENSUS_CACHE'}")
        sp.add_argument("--beta1-variant", choices=("exact", "reference"), default="exact")
        sp.add_argument("--verbose", action="store_true")

    sp = sub.add_parser("curve", help="point counts, L-polynomial, zeta data of one curve")
    common(sp, poly=True)

    sp = sub.add_parser("moduli", help="N_q(M_L(n,d)) for gcd(n,d)=1")
    common(sp, poly=True)
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--deg", type=int, required=True)

    sp = sub.add_parser("stable20", help="N_q of the stable rank-2 trivial-determinant locus")
    common(sp, poly=True)

    sp = sub.add_parser("ntilde", help="N_q of the smooth model over the rank-2 moduli")
    common(sp, poly=True)

    sp = sub.add_parser("survey", help="family survey: JSONL records + CSV moment summary")
    common(sp, family=True)
    sp.add_argument("--r-max", type=int, default=2)
    sp.add_argument("--degree-bound", type=int, default=12)
    sp.add_argument("--summary", default=None, help="CSV summary path")

    sp = sub.add_parser("theory", help="theoretical moments H(r) or characteristic function")
    sp.add_argument("what", choices=("hr", "phi"))
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--r", dest="r_max", type=int, default=2)
    sp.add_argument("--r-max", dest="r_max", type=int)
    sp.add_argument("--degree-bound", type=int, default=12)
    sp.add_argument("--tau", type=float, action="append")
    sp.add_argument("--out", default=None)
    sp.add_argument("--verbose", action="store_true")

    sp = sub.add_parser("check", help="run the invariant suite")
    sp.add_argument("--beta1-variant", choices=("exact", "reference"), default="exact")
    sp.add_argument("--cache-dir", default=None)
    sp.add_argument("--verbose", action="store_true")

    return parser


def _config_from_namespace(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    for key in vars(cfg):
        if hasattr(ns, key):
            setattr(cfg, key, getattr(ns, key))
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = _config_from_namespace(ns)
    try:
        if ns.command == "curve":
            return cmd_curve(cfg)
        if ns.command == "moduli":
            return cmd_moduli(cfg)
        if ns.command == "stable20":
            return cmd_stable20(cfg)
        if ns.command == "ntilde":
            return cmd_ntilde(cfg)
        if ns.command == "survey":
            return cmd_survey(cfg)
        if ns.command == "theory":
            return cmd_theory(cfg, ns.what)
        if ns.command == "check":
            return cmd_check(cfg)
        parser.error(f"unknown command {ns.command}")
    except (FieldError, ValueError) as exc:
        if isinstance(exc, RankLimitError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_REGIME
        if isinstance(exc, FamilyError) and "cap" in str(exc):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CAPS
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MemoryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPS
    except (IntegralityError, ArithmeticError) as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
