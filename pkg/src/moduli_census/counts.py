"""The headline integers: N_q(M_L(n,d)), N_q(M^s_O(2,0)), N_q of the desingularization.

Every count is assembled in exact rationals and must clear its denominator; a
fractional result aborts, since integrality transitively certifies the field
arithmetic, the point counts, the Newton identities, the cone engine and the
zeta values.

Two strata models are supported for the rank-2 degree-0 boundary:

  "exact"     strata sizes honor the F_q-rationality of 2-torsion: with
              K0 = #J[2](F_q), A = (N_q(J) - K0)/2 inverse pairs over F_q,
              B = (P(-1) - K0)/2 pairs swapped by Frobenius (P the numerator
              of the zeta function).  All divisions are provably exact, the
              2-torsion order cancels from N_q(M^s), and at genus 2 the
              counts collapse to the projective 3-space oracle.
  "reference" the literature model with all 2^{2g} two-torsion classes
              treated as rational and B = (N_{q^2}(J) - N_q(J))/2; kept for
              diagnosis behind the --beta1-variant flag.  Generically
              non-integral, which is the observable difference.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .hn import N_MAX, CurveContext, RankLimitError, siegel_mass, unstable_mass

Variant = str  # "exact" | "reference"


class IntegralityError(ArithmeticError):
    """A count failed to clear its denominator (pipeline bug or wrong model)."""


@dataclass(frozen=True)
class ModuliCount:
    kind: str
    value: int
    exact: Fraction

    def __post_init__(self):
        if self.exact.denominator != 1 or self.exact <= 0:
            raise IntegralityError(f"{self.kind}: {self.exact} is not a positive integer")


@dataclass(frozen=True)
class KummerStrata:
    size_a: int
    size_b: int
    size_k0: int
    variant: Variant


def _require_two_torsion(ctx: CurveContext) -> int:
    t = getattr(ctx, "two_torsion_order", None)
    if t is None:
        raise ValueError(
            "context lacks the rational 2-torsion order; build it from a curve "
            "(CurveContext must carry two_torsion_order for boundary strata)"
        )
    return t


def _halve_exact(n: Fraction | int, what: str) -> Fraction:
    v = Fraction(n, 2)
    if v.denominator != 1:
        raise IntegralityError(f"{what} is not an even integer; strata model violated")
    return v


def count_ml(ctx: CurveContext, n: int, d: int) -> ModuliCount:
    """N_q(M_L(n,d)) for gcd(n,d) = 1: Siegel mass minus unstable strata, times q-1."""
    if not 2 <= n <= N_MAX:
        raise RankLimitError(f"rank must be in 2..{N_MAX}")
    if gcd(n, d) != 1:
        raise RankLimitError(
            "count_ml requires gcd(n, d) = 1; the strictly-semistable boundary "
            "is only implemented for rank 2, degree 0 (count_ms20)"
        )
    exact = (ctx.q - 1) * (siegel_mass(ctx, n) - unstable_mass(ctx, n, d))
    if exact.denominator != 1:
        raise IntegralityError(f"count_ml({n},{d}) = {exact} is not an integer")
    return ModuliCount(f"coprime({n},{d})", int(exact), exact)


def projective_count(q: int, k: int) -> int:
    """N_q(P^k) = (q^{k+1} - 1)/(q - 1)."""
    if k < 0:
        raise ValueError("projective dimension must be >= 0")
    return (q ** (k + 1) - 1) // (q - 1)


def grassmannian_count(q: int, k: int, n_dim: int) -> int:
    """Gaussian binomial [n_dim choose k]_q: F_q-points of G(k, n_dim)."""
    if not 0 <= k <= n_dim:
        raise ValueError("need 0 <= k <= n_dim")
    num = den = 1
    for i in range(k):
        num *= q ** (n_dim - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def kummer_strata(ctx: CurveContext, variant: Variant = "exact") -> KummerStrata:
    """Sizes of the rank-2 trivial-determinant boundary strata over F_q."""
    nj = ctx.nj
    if variant == "exact":
        k0 = _require_two_torsion(ctx)
        a = _halve_exact(nj - k0, "N_q(J) - #J[2](F_q)")
        b = _halve_exact(ctx.L.p_minus_one() - k0, "P(-1) - #J[2](F_q)")
        return KummerStrata(int(a), int(b), k0, variant)
    if variant == "reference":
        k0 = 2 ** (2 * ctx.genus)
        a = _halve_exact(nj - k0, "N_q(J) - 2^{2g}")
        b = _halve_exact(jacobian_order_2(ctx) - nj, "N_{q^2}(J) - N_q(J)")
        return KummerStrata(int(a), int(b), k0, variant)
    raise ValueError(f"unknown variant {variant!r}")


def jacobian_order_2(ctx: CurveContext) -> int:
    return ctx.nj * ctx.L.p_minus_one()


def beta_prime_20(ctx: CurveContext) -> Fraction:
    """Unstable mass of rank 2 degree 0: N_q(J) q^{g-1} / ((q-1)^3 (q+1))."""
    q = ctx.q
    return Fraction(ctx.nj) * ctx.qpow(ctx.genus - 1) / ((q - 1) ** 3 * (q + 1))


def _strata_sizes(ctx: CurveContext, variant: Variant) -> tuple[Fraction, Fraction, Fraction]:
    """(A, B, K0) as exact rationals (reference sizes may be half-integers)."""
    nj = ctx.nj
    if variant == "exact":
        k0 = Fraction(_require_two_torsion(ctx))
        return Fraction(nj - k0, 2), Fraction(ctx.L.p_minus_one() - k0, 2), k0
    if variant == "reference":
        k0 = Fraction(2 ** (2 * ctx.genus))
        return Fraction(nj - k0, 2), Fraction(jacobian_order_2(ctx) - nj, 2), k0
    raise ValueError(f"unknown variant {variant!r}")


def beta1(ctx: CurveContext, variant: Variant = "exact") -> Fraction:
    """Mass of the non-nodal strictly-semistable boundary (split + both extensions)."""
    q = ctx.q
    a, b, _ = _strata_sizes(ctx, variant)
    pg2 = projective_count(q, ctx.genus - 2)
    return a / (q - 1) ** 2 + Fraction(2 * a * pg2, 1) / (q - 1) + b / (q * q - 1)


def beta2(ctx: CurveContext, variant: Variant = "exact") -> Fraction:
    """Mass over the nodal classes (split xi + xi plus nilpotent extensions)."""
    q = ctx.q
    _, _, k0 = _strata_sizes(ctx, variant)
    n_gl2 = (q * q - 1) * (q * q - q)
    pg1 = projective_count(q, ctx.genus - 1)
    return k0 / n_gl2 + k0 * Fraction(pg1, q * (q - 1))


def count_ms20(ctx: CurveContext, variant: Variant = "exact") -> ModuliCount:
    """N_q(M^s_O(2,0)) via the closed form, cross-checked against the mass assembly.

    exact:     q^{3g-3} zeta(2) - (2q^{g+1}-q^2+1)/(2(q-1)^2(q+1)) N_q(J) - P(-1)/(2(q+1))
    reference: q^{3g-3} zeta(2) - (q^{g+1}-q^2+q)/((q-1)^2(q+1)) N_q(J)
               - N_{q^2}(J)/(2(q+1)) - 2^{2g}/(2(q+1))
    """
    q, g = ctx.q, ctx.genus
    t1 = ctx.qpow(3 * g - 3) * ctx.zeta(2)
    if variant == "exact":
        closed = (
            t1
            - Fraction(2 * q ** (g + 1) - q * q + 1, 2 * (q - 1) ** 2 * (q + 1)) * ctx.nj
            - Fraction(ctx.L.p_minus_one(), 2 * (q + 1))
        )
    elif variant == "reference":
        closed = (
            t1
            - Fraction(q ** (g + 1) - q * q + q, (q - 1) ** 2 * (q + 1)) * ctx.nj
            - Fraction(jacobian_order_2(ctx), 2 * (q + 1))
            - Fraction(2 ** (2 * g), 2 * (q + 1))
        )
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if closed.denominator != 1 or closed < 0:
        raise IntegralityError(f"count_ms20[{variant}] = {closed} is not a nonnegative integer")
    return ModuliCount("stable20", int(closed), closed)


def count_ms20_assembly(ctx: CurveContext, variant: Variant = "exact") -> Fraction:
    """Independent route: q^{3g-3} zeta(2) - (q-1)(beta' + beta1 + beta2)."""
    t1 = ctx.qpow(3 * ctx.genus - 3) * ctx.zeta(2)
    return t1 - (ctx.q - 1) * (beta_prime_20(ctx) + beta1(ctx, variant) + beta2(ctx, variant))


def desingularization_assembly(ctx: CurveContext, variant: Variant = "exact") -> Fraction:
    """Raw stratum assembly for the smooth model (no integrality assertion):
    stable part plus the Kummer-fibered Y stratum plus the Grassmannian strata
    over the rational nodes."""
    q, g = ctx.q, ctx.genus
    stable = count_ms20_assembly(ctx, variant)
    a, b, k0 = _strata_sizes(ctx, variant)
    pg2 = projective_count(q, g - 2)
    y = a * pg2 * pg2 + b * projective_count(q * q, g - 2)
    g3 = grassmannian_count(q, 3, g) if g >= 3 else 0  # G(3, 2) is empty
    nodes = k0 * (q ** (g - 2) * grassmannian_count(q, 2, g) + g3)
    return stable + y + nodes


def count_desingularization(ctx: CurveContext, variant: Variant = "exact") -> ModuliCount:
    """N_q of the smooth model: stable part plus Kummer- and Grassmannian-fibered strata."""
    total = count_ms20(ctx, variant).exact + (
        desingularization_assembly(ctx, variant) - count_ms20_assembly(ctx, variant)
    )
    if total.denominator != 1 or total <= 0:
        raise IntegralityError(f"count_desingularization[{variant}] = {total} not integral")
    return ModuliCount("desingularization", int(total), total)
