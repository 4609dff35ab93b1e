"""The invariant suite behind `moduli-census check`: a fast pass/fail matrix.

Each check is a small self-contained validation with an independent oracle
where one exists; the suite is a subset of the full test suite sized to run in
seconds on reference inputs.
"""

from __future__ import annotations

from fractions import Fraction

from ._util import CounterStream
from .counts import IntegralityError, count_desingularization, count_ml, count_ms20, count_ms20_assembly, projective_count
from .curves import HyperellipticCurve, count_points, l_polynomial
from .fields import make_field, quadratic_character
from .hn import (
    CurveContext,
    c11_closed_form,
    c111_closed_form,
    c12_closed_form,
    c21_closed_form,
    c_l,
    c_l_box_oracle,
    compositions,
)
from .polynomials import MonicPoly, is_squarefree, prime_powers_of_degree
from .stats import delta_z, moment_h_compositions, moment_h_primepowers


def _random_curve(field, gamma: int, seed: int, idx: int) -> HyperellipticCurve:
    for attempt in range(10**6):
        stream = CounterStream("check-curve", seed, idx, attempt)
        labels = [stream.randint(field.q) for _ in range(gamma)]
        f = MonicPoly.from_labels(field, labels)
        if is_squarefree(f):
            return HyperellipticCurve(f)
    raise RuntimeError("sampling failed")


def check_field_laws() -> tuple[bool, str]:
    for (p, e) in ((3, 1), (3, 2), (5, 1), (7, 1), (3, 4)):
        f = make_field(p, e)
        els = [f.from_label(i) for i in range(f.q)]
        one = f.one()
        fixed = 0
        for a in els:
            if f.pow(a, f.p) == a:
                fixed += 1
            if not f.is_zero(a) and f.mul(a, f.inv(a)) != one:
                return False, f"inverse law fails in F_{f.q}"
        if fixed != f.p:
            return False, f"Frobenius fixes {fixed} != {f.p} elements in F_{f.q}"
        chi = [quadratic_character(f.element(i)) for i in range(f.q)]
        if sum(chi) != 0 or chi.count(1) != (f.q - 1) // 2:
            return False, f"character counts wrong in F_{f.q}"
    return True, "group laws, Frobenius, character counts"


def check_prime_polynomial_theorem() -> tuple[bool, str]:
    for q, p, e in ((3, 3, 1), (5, 5, 1)):
        f = make_field(p, e)
        for m in range(1, 5):
            total = sum(pp.mangoldt for pp in prime_powers_of_degree(f, m))
            if total != q**m:
                return False, f"sum of mangoldt != {q}^{m}"
    return True, "sum of mangoldt = q^m for q in {3,5}, m <= 4"


def check_golden_closed_forms() -> tuple[bool, str]:
    f3 = make_field(3, 1)
    ctx = CurveContext.from_curve(HyperellipticCurve(MonicPoly.from_labels(f3, [1, 2, 0, 0, 0])))
    for d in (0, 1, 2):
        if c_l(ctx, (1, 1, 1), d) != c111_closed_form(ctx, d):
            return False, f"C(1,1,1;{d}) mismatch"
        if c_l(ctx, (2, 1), d) != c21_closed_form(ctx, d):
            return False, f"C(2,1;{d}) mismatch"
        if c_l(ctx, (1, 2), d) != c12_closed_form(ctx, d):
            return False, f"C(1,2;{d}) mismatch"
    if c_l(ctx, (1, 1), 0) != c11_closed_form(ctx, 0):
        return False, "C(1,1;0) mismatch"
    return True, "cone engine equals rank-3 closed forms"


def check_box_oracle() -> tuple[bool, str]:
    f3 = make_field(3, 1)
    ctx = CurveContext.from_curve(HyperellipticCurve(MonicPoly.from_labels(f3, [1, 2, 0, 0, 0])))
    for comp in list(compositions(3)) + [(1, 1)]:
        engine = c_l(ctx, comp, 1)
        value, tail = c_l_box_oracle(ctx, comp, 1, 25)
        if abs(engine - value) > tail:
            return False, f"box oracle disagrees for {comp}"
    return True, "engine within certified tail of the box oracle"


def check_integrality(variant: str = "exact") -> tuple[bool, str]:
    flips = []
    for q in (3, 5):
        field = make_field(q, 1)
        for idx in range(3):
            curve = _random_curve(field, 5, 101, idx)
            ctx = CurveContext.from_curve(curve)
            try:
                count_ml(ctx, 2, 1)
                count_ml(ctx, 3, 1)
                ms = count_ms20(ctx, variant)
                if count_ms20_assembly(ctx, variant) != ms.exact:
                    return False, "two-route disagreement for count_ms20"
                count_desingularization(ctx, variant)
            except IntegralityError as exc:
                flips.append(f"q={q} idx={idx}: {exc}")
    if flips:
        return False, f"integrality failures ({len(flips)}): {flips[0]}"
    return True, f"count_ml/count_ms20/desingularization integral [{variant}]"


def check_genus2_oracle() -> tuple[bool, str]:
    for q in (3, 5):
        field = make_field(q, 1)
        for idx in range(3):
            curve = _random_curve(field, 5, 77, idx)
            ctx = CurveContext.from_curve(curve)
            oracle = projective_count(q, 3) - Fraction(ctx.nj + ctx.L.p_minus_one(), 2)
            if count_ms20(ctx, "exact").exact != oracle:
                return False, f"genus-2 stable count != P^3 oracle at q={q}"
            if count_desingularization(ctx, "exact").value != projective_count(q, 3):
                return False, f"genus-2 smooth model count != N(P^3) at q={q}"
    return True, "genus-2 counts match the projective-space oracle"


def check_delta_z_paths() -> tuple[bool, str]:
    field = make_field(3, 1)
    for idx in range(5):
        curve = _random_curve(field, 5, 55, idx)
        ctx = CurveContext.from_curve(curve)
        try:
            delta_z(curve, ctx, 5)
        except ArithmeticError as exc:
            return False, str(exc)
    return True, "character and spectral paths agree exactly"


def check_moment_forms() -> tuple[bool, str]:
    for r in (1, 2):
        v1, t1 = moment_h_primepowers(3, r, 8)
        v2, t2 = moment_h_compositions(3, r, 8)
        if abs(v1 - v2) > t1 + t2:
            return False, f"H({r}) cross-form disagreement"
    return True, "H(r) truncated forms agree within certified tails"


def check_lpoly_roundtrip() -> tuple[bool, str]:
    field = make_field(3, 1)
    curve = _random_curve(field, 5, 33, 0)
    L = l_polynomial(curve)
    for m in (3, 4):
        if L.point_count(m) != count_points(curve, m, force_scalar=True):
            return False, f"N_{m} round-trip failed"
    return True, "functional-equation extension reproduces brute-force counts"


ALL_CHECKS = [
    ("field-laws", check_field_laws),
    ("prime-polynomial-theorem", check_prime_polynomial_theorem),
    ("lpoly-roundtrip", check_lpoly_roundtrip),
    ("golden-closed-forms", check_golden_closed_forms),
    ("box-oracle", check_box_oracle),
    ("integrality", check_integrality),
    ("genus2-oracle", check_genus2_oracle),
    ("delta-z-paths", check_delta_z_paths),
    ("moment-forms", check_moment_forms),
]


def run_checks(variant: str = "exact") -> list[tuple[str, bool, str]]:
    out = []
    for name, fn in ALL_CHECKS:
        if fn is check_integrality:
            ok, detail = check_integrality(variant)
        else:
            ok, detail = fn()
        out.append((name, ok, detail))
    return out
