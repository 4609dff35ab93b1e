"""Family statistics: sampling, centered statistics, Delta_Z, theoretical moments.

The probability space is the set of squarefree monic F of degree gamma over F_q
with the uniform measure.  Sampling is counter-based (seed, index, attempt), so
records are pure functions of the spec and identical under any parallel
schedule.  Exact integer/rational quantities are computed first; logarithms are
taken at 128-bit mantissa precision (mpmath) and doubles appear only at the
reporting boundary.

Delta_Z has two independent evaluations that must agree exactly as rationals:

  character path   sum over prime powers of mangoldt * (F/P)^k, weighted
                   q^{-2m}/m per degree m;
  spectral path    sum over degrees of (N_m - q^m - 1 - delta_even) via the
                   power sums of the L-polynomial.

The theoretical moment H(r) also has two independent truncated evaluations
(prime-power tuples with square product vs. compositions over distinct
irreducibles) with certified geometric tail bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

import mpmath

from ._util import CounterStream
from .counts import count_desingularization, count_ml, count_ms20
from .curves import HyperellipticCurve
from .fields import FieldSpec, make_field
from .hn import CurveContext
from .polynomials import (
    MonicPoly,
    irreducible_count,
    is_squarefree,
    legendre_poly,
    prime_powers_of_degree,
)

PRECISION_BITS = 128
SAMPLE_ATTEMPT_CAP = 10**6
EXHAUSTIVE_CAP = 10**7

KNOWN_STATISTICS = ("mnd", "ms20", "ntilde", "deltaZ")


class FamilyError(ValueError):
    """Invalid family specification or resource cap violation."""


@dataclass(frozen=True)
class FamilySpec:
    """One survey configuration; every output is a pure function of this."""

    q: int
    gamma: int
    exhaustive: bool = False
    count: int = 0
    seed: int = 0
    z_cut: int = 0  # 0: default Z = gamma
    statistics: tuple[str, ...] = ("mnd(2,1)",)
    ntilde_family: str = "base"  # "base" | "square" (Jacobian surrogate over F_{q^2})
    beta_variant: str = "exact"
    r_max: int = 2
    degree_bound: int = 12

    def z_value(self) -> int:
        return self.z_cut if self.z_cut >= 1 else self.gamma

    def validate(self) -> None:
        if self.gamma < 5:
            raise FamilyError("gamma must be >= 5 (genus >= 2)")
        if self.ntilde_family not in ("base", "square"):
            raise FamilyError("ntilde_family must be 'base' or 'square'")
        if not self.exhaustive and self.count < 1:
            raise FamilyError("sample mode needs a positive count")
        for name in self.statistics:
            parse_statistic(name)


def parse_statistic(name: str) -> tuple[str, tuple[int, ...]]:
    """'mnd(2,1)' -> ('mnd', (2, 1)); bare names pass through."""
    name = name.strip()
    if name.startswith("mnd"):
        inner = name[3:].strip("() ")
        try:
            n, d = (int(x) for x in inner.split(","))
        except ValueError as exc:
            raise FamilyError(f"bad statistic spec {name!r}") from exc
        return "mnd", (n, d)
    if name in ("ms20", "ntilde", "deltaZ"):
        return name, ()
    raise FamilyError(f"unknown statistic {name!r}")


def sampling_field(spec: FamilySpec) -> FieldSpec:
    """Base field of the sampled curves (q^2 in the square ntilde family)."""
    if spec.ntilde_family == "square":
        return _field_of_order(spec.q * spec.q)
    return _field_of_order(spec.q)


def _field_of_order(q: int) -> FieldSpec:
    for p in range(2, q + 1):
        e = 0
        qq = q
        while qq % p == 0:
            qq //= p
            e += 1
        if qq == 1 and e >= 1:
            return make_field(p, e)
        if q % p == 0:
            break
    raise FamilyError(f"{q} is not a prime power")


def sample_curve(spec: FamilySpec, index: int) -> MonicPoly:
    """Uniform squarefree monic of degree gamma, by rejection; deterministic."""
    fieldspec = sampling_field(spec)
    for attempt in range(SAMPLE_ATTEMPT_CAP):
        stream = CounterStream("curve", spec.seed, index, attempt)
        labels = [stream.randint(fieldspec.q) for _ in range(spec.gamma)]
        f = MonicPoly.from_labels(fieldspec, labels)
        if is_squarefree(f):
            return f
    raise FamilyError("rejection sampling exceeded the attempt cap")


def enumerate_family(spec: FamilySpec):
    """Every squarefree monic of degree gamma, by ascending coefficient code."""
    fieldspec = sampling_field(spec)
    total = fieldspec.q**spec.gamma
    if total > EXHAUSTIVE_CAP:
        raise FamilyError(f"exhaustive family of size {total} exceeds the cap")
    for code in range(total):
        f = MonicPoly.from_code(fieldspec, spec.gamma, code)
        if is_squarefree(f):
            yield f


def family_size(q: int, gamma: int) -> int:
    """#squarefree monic of degree gamma: q^gamma - q^(gamma-1)."""
    return q**gamma - q ** (gamma - 1)


# ---------------------------------------------------------------------------
# Delta_Z, two paths
# ---------------------------------------------------------------------------

def delta_z_spectral(ctx_or_L, gamma: int, z_cut: int) -> Fraction:
    """sum_{m<=Z} q^{-2m} m^{-1} (N_m - q^m - 1 - delta_even) from power sums."""
    L = ctx_or_L.L if isinstance(ctx_or_L, CurveContext) else ctx_or_L
    delta = 1 if gamma % 2 == 0 else 0
    total = Fraction(0)
    for m in range(1, z_cut + 1):
        total += Fraction(-L.power_sum(m) - delta, m * L.q ** (2 * m))
    return total


def delta_z_charsum(F: MonicPoly, z_cut: int) -> Fraction:
    """sum over finite prime powers of mangoldt(f) (F/P)^k, same weights."""
    if z_cut < 1:
        raise ValueError("Z must be >= 1")
    q = F.field.q
    total = Fraction(0)
    for m in range(1, z_cut + 1):
        acc = 0
        for pp in prime_powers_of_degree(F.field, m):
            chi = legendre_poly(F, pp.base)
            if chi == 0:
                continue
            acc += pp.mangoldt * (chi if pp.exponent % 2 else 1)
        total += Fraction(acc, m * q ** (2 * m))
    return total


def delta_z(curve: HyperellipticCurve, ctx: CurveContext, z_cut: int) -> Fraction:
    """Both paths, which must agree exactly; returns the common value."""
    spectral = delta_z_spectral(ctx, curve.gamma, z_cut)
    chars = delta_z_charsum(curve.F, z_cut)
    if spectral != chars:
        raise ArithmeticError(
            f"Delta_Z path disagreement: spectral {spectral} vs characters {chars}"
        )
    return spectral


# ---------------------------------------------------------------------------
# centered statistics (exact count -> high-precision log)
# ---------------------------------------------------------------------------

def _log_fraction(x: Fraction) -> mpmath.mpf:
    return mpmath.log(mpmath.mpf(x.numerator)) - mpmath.log(mpmath.mpf(x.denominator))


def mnd_centering(q: int, n: int, gamma: int) -> mpmath.mpf:
    """log(q^{n^2-1} / prod_{k=2}^n (q^{k-1}-1)(q^k-1)) - delta_even * log prod (1-q^-k)."""
    num = Fraction(q) ** (n * n - 1)
    den = Fraction(1)
    for k in range(2, n + 1):
        den *= (q ** (k - 1) - 1) * (q**k - 1)
    const = _log_fraction(num / den)
    if gamma % 2 == 0:
        corr = Fraction(1)
        for k in range(2, n + 1):
            corr *= 1 - Fraction(1, q**k)
        const -= _log_fraction(corr)
    return const


def statistic_mnd(ctx: CurveContext, gamma: int, n: int, d: int) -> tuple[int, mpmath.mpf, mpmath.mpf]:
    """(count, raw, centered): raw = log N - (n^2-1)(g-1) log q."""
    with mpmath.workprec(PRECISION_BITS):
        count = count_ml(ctx, n, d)
        raw = mpmath.log(mpmath.mpf(count.value)) - (n * n - 1) * (ctx.genus - 1) * mpmath.log(ctx.q)
        centered = raw - mnd_centering(ctx.q, n, gamma)
        return count.value, raw, centered


def statistic_ms20(ctx: CurveContext, gamma: int, variant: str = "exact") -> tuple[int, mpmath.mpf, mpmath.mpf]:
    with mpmath.workprec(PRECISION_BITS):
        q = ctx.q
        count = count_ms20(ctx, variant)
        raw = mpmath.log(mpmath.mpf(count.value)) - 3 * (ctx.genus - 1) * mpmath.log(q)
        const = _log_fraction(Fraction(q**3, (q - 1) ** 2 * (q + 1)))
        centered = raw - const
        if gamma % 2 == 0:
            centered += _log_fraction(1 - Fraction(1, q * q))
        return count.value, raw, centered


def statistic_ntilde(
    ctx: CurveContext, gamma: int, variant: str = "exact"
) -> tuple[int, mpmath.mpf, mpmath.mpf, mpmath.mpf]:
    """(count, raw, centered, gap): raw = log N(Ntilde) - (4g-4) log q.

    gap subtracts the base-changed Jacobian term log N_{q^2}(J) - 2g log q,
    the quantity the raw statistic tracks up to log(1/2) + O(1/q).
    """
    with mpmath.workprec(PRECISION_BITS):
        q = ctx.q
        count = count_desingularization(ctx, variant)
        raw = mpmath.log(mpmath.mpf(count.value)) - (4 * ctx.genus - 4) * mpmath.log(q)
        centered = raw
        if gamma % 2 == 0:
            centered += _log_fraction(1 - Fraction(1, q * q))
        nj2 = ctx.nj * ctx.L.p_minus_one()
        gap = raw - (mpmath.log(mpmath.mpf(nj2)) - 2 * ctx.genus * mpmath.log(q))
        return count.value, raw, centered, gap


def statistic_jacobian_surrogate(ctx: CurveContext, gamma: int) -> tuple[int, mpmath.mpf]:
    """log N_Q(J) - g log Q (+ even-degree correction) over the curve's own field."""
    with mpmath.workprec(PRECISION_BITS):
        nj = ctx.nj
        centered = mpmath.log(mpmath.mpf(nj)) - ctx.genus * mpmath.log(ctx.q)
        if gamma % 2 == 0:
            centered += _log_fraction(1 - Fraction(1, ctx.q))
        return nj, centered


# ---------------------------------------------------------------------------
# theoretical moments H(r): two truncated forms with certified tails
# ---------------------------------------------------------------------------

def _uv(q: int, delta: int) -> tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]:
    x = mpmath.mpf(1) / mpmath.mpf(q) ** (2 * delta)
    u = -mpmath.log(1 - x)
    v = mpmath.log(1 + x)
    w = 1 / (1 + mpmath.mpf(1) / mpmath.mpf(q) ** delta)  # lim P(gcd(F,P)=1)
    return u, v, w


def _compositions_of(r: int, parts: int):
    if parts == 1:
        yield (r,)
        return
    for first in range(1, r - parts + 2):
        for rest in _compositions_of(r - first, parts - 1):
            yield (first,) + rest


def moment_h_compositions(q: int, r: int, degree_bound: int) -> tuple[float, float]:
    """H(r), distinct-irreducible/composition form, truncated at deg P <= D.

    Returns (value, certified tail bound for the truncation).
    """
    if r < 1 or r > 6:
        raise ValueError("r must be in 1..6")
    with mpmath.workprec(PRECISION_BITS):
        D = degree_bound
        counts = {d: irreducible_count(q, d) for d in range(1, D + 1)}
        uvw = {d: _uv(q, d) for d in range(1, D + 1)}
        total = mpmath.mpf(0)
        for m in range(1, r + 1):
            pref = mpmath.mpf(math.factorial(r)) / (2**m * math.factorial(m))
            block = mpmath.mpf(0)
            for lam in _compositions_of(r, m):
                for degs in iproduct(range(1, D + 1), repeat=m):
                    # ordered tuples of distinct primes with these slot degrees
                    used: dict[int, int] = {}
                    weight = 1
                    for dd in degs:
                        k = used.get(dd, 0)
                        weight *= counts[dd] - k
                        used[dd] = k + 1
                    if weight <= 0:
                        continue
                    term = mpmath.mpf(weight)
                    for dd, ll in zip(degs, lam):
                        u, v, w = uvw[dd]
                        term *= (u**ll + (-1) ** ll * v**ll) / math.factorial(ll) * w
                    block += term
            total += pref * block
        tail = _h_tail_bound(q, r, D)
        return float(total), tail


def _h_tail_bound(q: int, r: int, degree_bound: int) -> float:
    """Valid bound on the mass of tuples with some prime degree > D.

    Per slot, the tail sum over primes of degree > D is below
    t = 2 c1^2 sum_{d>D} q^{-3d} (both the lambda = 1 and lambda >= 2 factor
    families are below 2 c1^2 x^2 with x = q^{-2d} and pi(d) <= q^d/d); a full
    slot sum is below S = 2 c1^2 q^{-3}/(1-q^{-3}).  Any term has at most r
    slots, so the omitted mass is below r! * r * S^(r-1) * t (worst pairing of
    prefactors, all below 1).
    """
    c1 = 1.0 / (1.0 - q**-2.0)
    ratio = q**-3.0
    t = 2.0 * c1 * c1 * ratio ** (degree_bound + 1) / (1.0 - ratio)
    s_full = 2.0 * c1 * c1 * ratio / (1.0 - ratio)
    bound = math.factorial(r) * r * max(s_full, 1.0) ** (r - 1) * t
    return bound * 2.0


def moment_h_primepowers(q: int, r: int, degree_bound: int) -> tuple[float, float]:
    """H(r), prime-power-tuple form: ordered tuples (f_1..f_r), product a square.

    Slots are grouped by the prime they share (set partitions); each block of
    size lam assigned to a prime of degree d carries the truncated sum over
    exponent vectors (k_1..k_lam), all k_i >= 1, k_1+...+k_lam even, of
    prod x^{k_i}/k_i with x = q^{-2d}, times the coprimality weight
    1/(1+q^{-d}).  Evaluated as a power series product over degrees.
    """
    if r < 1 or r > 6:
        raise ValueError("r must be in 1..6")
    with mpmath.workprec(PRECISION_BITS):
        D = degree_bound
        series = [mpmath.mpf(0)] * (r + 1)
        series[0] = mpmath.mpf(1)

        def series_mul(a, b):
            out = [mpmath.mpf(0)] * (r + 1)
            for i, ai in enumerate(a):
                if ai == 0:
                    continue
                for j, bj in enumerate(b):
                    if i + j <= r and bj != 0:
                        out[i + j] += ai * bj
            return out

        def series_pow(a, n):
            out = [mpmath.mpf(0)] * (r + 1)
            out[0] = mpmath.mpf(1)
            base = a
            while n:
                if n & 1:
                    out = series_mul(out, base)
                base = series_mul(base, base)
                n >>= 1
            return out

        kcap_tail = 0.0
        for d in range(1, D + 1):
            x = mpmath.mpf(1) / mpmath.mpf(q) ** (2 * d)
            w = 1 / (1 + mpmath.mpf(1) / mpmath.mpf(q) ** d)
            kcap = max(2 * r, (80 // d) + 2)
            # block[lam]: sum over (k_1..k_lam), k_i in 1..kcap, total even, of
            # prod x^{k_i}/k_i -- a DP over (slots, total-exponent parity) that
            # tracks the truncated series coefficients explicitly.
            xpow = [x**k for k in range(kcap + 1)]
            even = [mpmath.mpf(0)] * (kcap + 1)
            odd = [mpmath.mpf(0)] * (kcap + 1)
            even[0] = mpmath.mpf(1)
            block = [mpmath.mpf(0)] * (r + 1)
            for lam in range(1, r + 1):
                new_even = [mpmath.mpf(0)] * (kcap + 1)
                new_odd = [mpmath.mpf(0)] * (kcap + 1)
                for t in range(kcap + 1):
                    ev, od = even[t], odd[t]
                    if ev == 0 and od == 0:
                        continue
                    for k in range(1, kcap + 1 - t):
                        coef = xpow[k] / k
                        if k % 2:
                            new_even[t + k] += od * coef
                            new_odd[t + k] += ev * coef
                        else:
                            new_even[t + k] += ev * coef
                            new_odd[t + k] += od * coef
                even, odd = new_even, new_odd
                block[lam] = sum(even) * w / math.factorial(lam)
            pi_d = irreducible_count(q, d)
            factor = [mpmath.mpf(0)] * (r + 1)
            factor[0] = mpmath.mpf(1)
            for lam in range(1, r + 1):
                factor[lam] = block[lam]
            series = series_mul(series, series_pow(factor, pi_d))
            # omitted exponent mass per prime and block: below
            # x^((kcap+1)/2) * L^lambda with L = -log(1 - sqrt(x)) < 1, so L^1
            # dominates every block size
            kx = float(x) ** ((kcap + 1) / 2.0)
            kcap_tail += float(pi_d) * kx * (-math.log(1.0 - float(x) ** 0.5))
        value = mpmath.mpf(math.factorial(r)) * series[r]
        tail = _h_tail_bound(q, r, D) + math.factorial(r) * r * kcap_tail * 4.0
        return float(value), tail


def moment_h(q: int, r: int, degree_bound: int) -> tuple[float, float]:
    """The two truncated forms, which must agree within the summed tails."""
    v1, t1 = moment_h_primepowers(q, r, degree_bound)
    v2, t2 = moment_h_compositions(q, r, degree_bound)
    if abs(v1 - v2) > t1 + t2:
        raise ArithmeticError(
            f"H({r}) cross-form disagreement: {v1} vs {v2} beyond tails {t1 + t2}"
        )
    return v2, t1 + t2


def char_fn_phi(q: int, tau: float, degree_bound: int, r_max: int) -> complex:
    """Truncated characteristic function of the limiting fixed-q distribution.

    1 + sum_r (1/2^r r!) sum over ordered distinct irreducible tuples of
    prod ((1-|P|^-2)^{-i tau} + (1+|P|^-2)^{-i tau} - 2) / (1+|P|^-1),
    truncated at deg P <= degree_bound and r <= r_max.
    """
    with mpmath.workprec(PRECISION_BITS):
        D = degree_bound
        counts = {d: irreducible_count(q, d) for d in range(1, D + 1)}
        it = mpmath.mpc(0, 1) * mpmath.mpf(tau)
        psi = {}
        for d in range(1, D + 1):
            x = mpmath.mpf(1) / mpmath.mpf(q) ** (2 * d)
            w = 1 / (1 + mpmath.mpf(1) / mpmath.mpf(q) ** d)
            psi[d] = (mpmath.exp(-it * mpmath.log(1 - x)) + mpmath.exp(-it * mpmath.log(1 + x)) - 2) * w
        total = mpmath.mpc(1, 0)
        for r in range(1, r_max + 1):
            pref = mpmath.mpf(1) / (2**r * math.factorial(r))
            block = mpmath.mpc(0, 0)
            for degs in iproduct(range(1, D + 1), repeat=r):
                used: dict[int, int] = {}
                weight = 1
                for dd in degs:
                    k = used.get(dd, 0)
                    weight *= counts[dd] - k
                    used[dd] = k + 1
                if weight <= 0:
                    continue
                term = mpmath.mpc(weight, 0)
                for dd in degs:
                    term *= psi[dd]
                block += term
            total += pref * block
        return complex(total)
