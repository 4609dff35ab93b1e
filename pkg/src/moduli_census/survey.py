"""Survey driver: per-curve records, empirical vs theoretical moment reports.

Records are pure functions of (FamilySpec, index); parallel execution
partitions the index range and reassembles results in index order, so the
serialized output is byte-identical for any worker count (exercised by the
determinism tests).  Exact quantities are serialized as decimal strings,
high-precision reals as 36-digit strings.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .curves import HyperellipticCurve, l_polynomial
from .fields import extension_field
from .hn import CurveContext
from .polynomials import MonicPoly
from . import tables
from .stats import (
    PRECISION_BITS,
    FamilyError,
    FamilySpec,
    delta_z,
    enumerate_family,
    moment_h,
    parse_statistic,
    sample_curve,
    sampling_field,
    statistic_jacobian_surrogate,
    statistic_mnd,
    statistic_ms20,
    statistic_ntilde,
)

SCHEMA_VERSION = 1

GAUSSIAN_TOLERANCES = {"mean": 0.05, "var": 0.15, "skew": 0.2, "kurt": 0.4}


def _fmt(x: mpmath.mpf) -> str:
    return mpmath.nstr(x, 36, strip_zeros=False)


def scale_factor(spec: FamilySpec, stat: str) -> float:
    """CLT scaling: q^{3/2} for the moduli statistics, q for the rank-2 model."""
    if stat.startswith("mnd") or stat == "ms20":
        return float(spec.q) ** 1.5
    if stat == "ntilde":
        return float(spec.q)
    raise FamilyError(f"no scaling defined for {stat!r}")


def build_record(spec: FamilySpec, index: int, poly) -> dict:
    """All requested statistics for one curve, JSON-ready."""
    curve = HyperellipticCurve(poly)
    needs_torsion = spec.ntilde_family == "base" and any(
        parse_statistic(s)[0] == "ntilde" for s in spec.statistics
    )
    if needs_torsion:
        ctx = CurveContext.from_curve(curve)
    else:
        ctx = CurveContext.from_lpolynomial(l_polynomial(curve))
    record: dict = {
        "schema": SCHEMA_VERSION,
        "index": index,
        "q": curve.field.q,
        "gamma": curve.gamma,
        "g": curve.genus,
        "F": list(poly.labels),
        "L": [str(c) for c in ctx.L.coeffs],
        "NJ": str(ctx.nj),
        "stats": {},
    }
    if spec.ntilde_family == "square":
        nj, centered = statistic_jacobian_surrogate(ctx, spec.gamma)
        record["stats"]["ntilde"] = {"count": str(nj), "centered": _fmt(centered)}
        return record
    for name in spec.statistics:
        kind, args = parse_statistic(name)
        if kind == "mnd":
            n, d = args
            value, raw, centered = statistic_mnd(ctx, spec.gamma, n, d)
            record["stats"][name] = {
                "count": str(value),
                "raw": _fmt(raw),
                "centered": _fmt(centered),
            }
        elif kind == "ms20":
            value, raw, centered = statistic_ms20(ctx, spec.gamma, spec.beta_variant)
            record["stats"][name] = {
                "count": str(value),
                "raw": _fmt(raw),
                "centered": _fmt(centered),
            }
        elif kind == "ntilde":
            value, raw, centered, gap = statistic_ntilde(ctx, spec.gamma, spec.beta_variant)
            record["stats"][name] = {
                "count": str(value),
                "raw": _fmt(raw),
                "centered": _fmt(centered),
                "gap": _fmt(gap),
            }
        elif kind == "deltaZ":
            dz = delta_z(curve, ctx, spec.z_value())
            record["stats"][name] = {
                "value": f"{dz.numerator}/{dz.denominator}",
                "float": repr(float(dz)),
            }
    return record


def _family_polys(spec: FamilySpec):
    if spec.exhaustive:
        return list(enumerate_family(spec))
    return None


def _warm_tables(spec: FamilySpec) -> None:
    """Build the field tables in the parent so forked workers share them."""
    base = sampling_field(spec)
    g = (spec.gamma - 1) // 2
    for m in range(2, g + 1):
        if base.q**m <= tables.MAX_TABLE_Q:
            tables.level_scan(base, m, extension_field(base, m))


def _chunk_worker(args) -> list[dict]:
    spec, indices, codes = args
    out = []
    if codes is None:
        for i in indices:
            out.append(build_record(spec, i, sample_curve(spec, i)))
    else:
        base = sampling_field(spec)
        for i in indices:
            poly = MonicPoly.from_code(base, spec.gamma, codes[i])
            out.append(build_record(spec, i, poly))
    return out


def survey_records(spec: FamilySpec, threads: int = 1) -> list[dict]:
    """All records in index order, identical for any thread count."""
    spec.validate()
    if spec.exhaustive:
        polys = _family_polys(spec)
        codes = [p.code for p in polys]
        n = len(codes)
    else:
        codes = None
        n = spec.count
    indices = list(range(n))
    if threads <= 1:
        return _chunk_worker((spec, indices, codes))
    _warm_tables(spec)
    chunk = max(1, (n + 4 * threads - 1) // (4 * threads))
    jobs = [
        (spec, indices[i : i + chunk], codes) for i in range(0, n, chunk)
    ]
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(threads) as pool:
        results = pool.map(_chunk_worker, jobs)
    return [rec for block in results for rec in block]


@dataclass
class ReportRow:
    statistic: str
    r: str
    empirical: float
    theoretical: float
    tail: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.empirical - self.theoretical) <= self.tolerance + self.tail


@dataclass
class MomentReport:
    rows: list[ReportRow]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows)


def _scaled_moments(values: list[mpmath.mpf], scale: float) -> dict[str, float]:
    n = len(values)
    s = mpmath.mpf(scale)
    xs = [v * s for v in values]
    mean = sum(xs) / n
    c2 = sum((x - mean) ** 2 for x in xs) / n
    c3 = sum((x - mean) ** 3 for x in xs) / n
    c4 = sum((x - mean) ** 4 for x in xs) / n
    sd = mpmath.sqrt(c2)
    return {
        "mean": float(mean),
        "var": float(c2),
        "skew": float(c3 / sd**3) if c2 > 0 else 0.0,
        "kurt": float(c4 / c2**2) if c2 > 0 else 0.0,
    }


def moment_report(spec: FamilySpec, records: list[dict]) -> MomentReport:
    """Empirical-vs-theoretical rows for every requested statistic."""
    rows: list[ReportRow] = []
    n = len(records)
    with mpmath.workprec(PRECISION_BITS):
        stats = ("ntilde",) if spec.ntilde_family == "square" else spec.statistics
        for name in stats:
            kind = "ntilde" if spec.ntilde_family == "square" else parse_statistic(name)[0]
            if kind == "deltaZ":
                vals = [Fraction(rec["stats"][name]["value"]) for rec in records]
                r_upper = min(max(spec.r_max, 2), 3)
                for r in range(1, r_upper + 1):
                    emp = sum(v**r for v in vals) / n
                    theo, tail = moment_h(spec.q, r, spec.degree_bound)
                    tol = 0.01 * r + float(spec.q) ** (-spec.z_value())
                    rows.append(ReportRow(name, f"m{r}", float(emp), theo, tail, tol))
                continue
            vals = [mpmath.mpf(rec["stats"][name]["centered"]) for rec in records]
            scaled = _scaled_moments(vals, scale_factor(spec, name))
            targets = {"mean": 0.0, "var": 1.0, "skew": 0.0, "kurt": 3.0}
            for key in ("mean", "var", "skew", "kurt"):
                rows.append(
                    ReportRow(
                        name,
                        key,
                        scaled[key],
                        targets[key],
                        0.0,
                        GAUSSIAN_TOLERANCES[key],
                    )
                )
    return MomentReport(rows)


def survey(spec: FamilySpec, threads: int = 1) -> tuple[list[dict], MomentReport]:
    records = survey_records(spec, threads)
    return records, moment_report(spec, records)


class SchemaError(ValueError):
    """Record stream with an unknown schema version."""


def load_records(path) -> list[dict]:
    """Read a survey JSONL file, rejecting unknown schema versions."""
    import json

    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if rec.get("schema") != SCHEMA_VERSION:
                raise SchemaError(
                    f"{path}:{lineno}: schema {rec.get('schema')!r} unsupported "
                    f"(expected {SCHEMA_VERSION})"
                )
            records.append(rec)
    return records
