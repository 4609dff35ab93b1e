"""Exact Harder-Narasimhan stratum masses and semistable masses.

The unstable-stratum mass for a rank composition (n_1, ..., n_m) and total
degree d is an infinite cone sum over degree vectors with strictly decreasing
slopes.  It is evaluated exactly by:

  (a) reparametrizing by the slope gaps e_k = d_k n_{k+1} - d_{k+1} n_k >= 1,
      under which sum_{i<j}(d_i n_j - d_j n_i) = sum_k e_k c_k with
      c_k = N_{<=k} N_{>k} / (n_k n_{k+1}) >= 1;
  (b) enumerating residue classes of (e_1, ..., e_{m-1}) modulo
      M_k = n * n_k * n_{k+1}, which is enough to fix integrality of the
      recovered d_i and their residues mod n_i;
  (c) summing each admissible class as a product of geometric series with
      integer q-exponent steps M_k c_k = n N_{<=k} N_{>k} >= 2.

Everything is a Fraction; no floating point enters this module.  The direct
box-summation oracle plus a certified geometric tail bound lives alongside and
is compared against the class engine in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb

from .curves import HyperellipticCurve, LPolynomial, jacobian_order, l_polynomial, zeta_value

N_MAX = 6  # residue-class enumeration stays tiny up to rank 6; documented hard limit


class RankLimitError(ValueError):
    """Composition or rank outside the supported range."""


@dataclass
class CurveContext:
    """Exact zeta data of one curve, shared by all mass computations.

    two_torsion_order (#J[2](F_q)) requires the curve equation, so it is only
    present on contexts built via from_curve; the boundary strata need it.
    """

    q: int
    genus: int
    L: LPolynomial
    nj: int
    two_torsion_order: int | None = None
    zetas: dict[int, Fraction] = field(default_factory=dict)
    beta_table: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    @classmethod
    def from_lpolynomial(cls, L: LPolynomial) -> "CurveContext":
        return cls(q=L.q, genus=L.genus, L=L, nj=jacobian_order(L, 1))

    @classmethod
    def from_curve(cls, curve: HyperellipticCurve) -> "CurveContext":
        ctx = cls.from_lpolynomial(l_polynomial(curve))
        ctx.two_torsion_order = rational_two_torsion_order(curve)
        # #J[2](F_q) divides both #J(F_q) and #ker(Frob + 1)
        assert ctx.nj % ctx.two_torsion_order == 0
        assert ctx.L.p_minus_one() % ctx.two_torsion_order == 0
        return ctx

    def zeta(self, k: int) -> Fraction:
        z = self.zetas.get(k)
        if z is None:
            z = zeta_value(self.L, k)
            self.zetas[k] = z
        return z

    def qpow(self, n: int) -> Fraction:
        return Fraction(self.q) ** n


def rational_two_torsion_order(curve: HyperellipticCurve) -> int:
    """#J[2](F_q), from the Frobenius orbits on the branch points.

    J[2] is the even-subset module of the 2g+2 branch points modulo
    complementation; sigma-fixed classes {S, S^c} come from sigma-stable even
    unions of orbits plus, when every orbit size is even and g is odd, the
    anti-stable subsets with sigma(S) = S^c (two per orbit).
    """
    from .polynomials import squarefree_part_degrees

    degs = squarefree_part_degrees(curve.F)
    if curve.gamma % 2 == 1:
        degs = degs + [1]  # the branch point at infinity, a fixed orbit
    r = len(degs)
    all_even = all(d % 2 == 0 for d in degs)
    stable = 2**r if all_even else 2 ** (r - 1)
    anti = 2**r if all_even and (curve.genus % 2 == 1) else 0
    return (stable + anti) // 2


def compositions(n: int, min_parts: int = 2):
    """Ordered compositions of n with at least min_parts parts."""
    def rec(rest: int, acc: tuple[int, ...]):
        if rest == 0:
            if len(acc) >= min_parts:
                yield acc
            return
        for part in range(1, rest + 1):
            yield from rec(rest - part, acc + (part,))

    yield from rec(n, ())


def euler_exponent(parts, degrees, g: int) -> int:
    """chi = sum_{i<j} (d_i n_j - d_j n_i) + sum_{i<j} n_i n_j (1 - g)."""
    if len(parts) != len(degrees):
        raise ValueError("parts and degrees must have equal length")
    m = len(parts)
    chi = 0
    for i in range(m):
        for j in range(i + 1, m):
            chi += degrees[i] * parts[j] - degrees[j] * parts[i]
            chi += parts[i] * parts[j] * (1 - g)
    return chi


def _degrees_from_gaps(parts, d: int, gaps) -> list[Fraction] | None:
    """Recover (d_1..d_m) from slope gaps; None when not integral."""
    m = len(parts)
    n = sum(parts)
    shift = Fraction(0)
    prefix = 0
    for k in range(m - 1):
        prefix += parts[k]
        shift += Fraction(gaps[k] * prefix, parts[k] * parts[k + 1])
    u_last = Fraction(d - shift, n)
    slopes = [u_last] * m
    acc = Fraction(0)
    for k in range(m - 2, -1, -1):
        acc += Fraction(gaps[k], parts[k] * parts[k + 1])
        slopes[k] = u_last + acc
    degrees = []
    for ni, u in zip(parts, slopes):
        di = ni * u
        if di.denominator != 1:
            return None
        degrees.append(int(di))
    return degrees


def c_l(ctx: CurveContext, comp, d: int, class_scale: int = 1) -> Fraction:
    """Unstable stratum mass C_L(n_1..n_m; d), exact.

    class_scale multiplies every residue modulus; the value must not depend on
    it (exercised by the consistency tests).
    """
    comp = tuple(int(x) for x in comp)
    m = len(comp)
    if m < 2:
        raise RankLimitError("composition needs at least two parts")
    n = sum(comp)
    if n > N_MAX:
        raise RankLimitError(f"total rank {n} exceeds the supported limit {N_MAX}")
    q, g = ctx.q, ctx.genus

    prefixes = []
    acc = 0
    for k in range(m - 1):
        acc += comp[k]
        prefixes.append(acc)
    # c_k = N_{<=k} N_{>k} / (n_k n_{k+1}); integer step per class: M_k c_k
    cks = [Fraction(prefixes[k] * (n - prefixes[k]), comp[k] * comp[k + 1]) for k in range(m - 1)]
    moduli = [class_scale * n * comp[k] * comp[k + 1] for k in range(m - 1)]
    steps = [int(moduli[k] * cks[k]) for k in range(m - 1)]
    for k in range(m - 1):
        assert moduli[k] * cks[k] == steps[k] and steps[k] >= 2

    s2 = sum(comp[i] * comp[j] for i in range(m) for j in range(i + 1, m))
    pref = Fraction(ctx.nj) ** (m - 1) * Fraction(q) ** ((g - 1) * s2)
    geom = Fraction(1)
    for st in steps:
        geom /= 1 - Fraction(1, q**st)

    total = Fraction(0)
    for eps in product(*(range(1, M + 1) for M in moduli)):
        degrees = _degrees_from_gaps(comp, d, eps)
        if degrees is None:
            continue
        e_exp = sum(eps[k] * cks[k] for k in range(m - 1))
        assert e_exp.denominator == 1
        term = Fraction(1, q ** int(e_exp))
        for ni, di in zip(comp, degrees):
            term *= beta(ctx, ni, di)
        total += term
    return pref * geom * total


def c_l_box_oracle(ctx: CurveContext, comp, d: int, radius: int) -> tuple[Fraction, Fraction]:
    """Direct summation over the degree box max_i |d_i - n_i d/n| <= radius.

    Returns (partial sum, certified tail bound): every omitted cone point has
    sum_k e_k c_k > x with x = n_1 n_m radius / max(n_i), each c_k >= 1, and at
    most comb(s-1, m-2) cone points have e-coordinate sum s, so the omitted
    mass is below prefactor * (q^-x * sum_{s<=x} comb + exact negative-binomial
    tail beyond x).  All bounds are exact rationals.
    """
    comp = tuple(int(x) for x in comp)
    m = len(comp)
    if m < 2:
        raise RankLimitError("composition needs at least two parts")
    if radius < 1:
        raise ValueError("radius must be >= 1")
    n = sum(comp)
    q, g = ctx.q, ctx.genus

    centers = [Fraction(ni * d, n) for ni in comp]
    pref_term = Fraction(ctx.nj) ** (m - 1)
    total = Fraction(0)

    def recurse(i: int, chosen: list[int]) -> None:
        nonlocal total
        if i == m - 1:
            dm = d - sum(chosen)
            if abs(Fraction(dm) - centers[-1]) > radius:
                return
            # slope of the last part must lie strictly below the previous one
            if dm * comp[m - 2] >= chosen[-1] * comp[m - 1]:
                return
            degrees = chosen + [dm]
            chi = euler_exponent(comp, degrees, g)
            term = pref_term * Fraction(q) ** (-chi)
            for ni, di in zip(comp, degrees):
                term *= beta(ctx, ni, di)
            total += term
            return
        lo = math.ceil(centers[i] - radius)
        hi = math.floor(centers[i] + radius)
        if i > 0:
            # d_i / n_i < d_{i-1} / n_{i-1}, i.e. d_i n_{i-1} < d_{i-1} n_i
            c = chosen[-1] * comp[i]
            b = comp[i - 1]
            hi = min(hi, -((-c) // b) - 1)
        for di in range(lo, hi + 1):
            recurse(i + 1, chosen + [di])

    recurse(0, [])

    # certified bound on the omitted cone mass
    s2 = sum(comp[i] * comp[j] for i in range(m) for j in range(i + 1, m))
    betamax = Fraction(1)
    for ni in comp:
        betamax *= max(beta(ctx, ni, r) for r in range(ni))
    pref = Fraction(ctx.nj) ** (m - 1) * Fraction(q) ** ((g - 1) * s2) * betamax
    x = Fraction(comp[0] * comp[-1] * radius, max(comp))
    xf = math.floor(x)
    r = m - 2
    head_count = sum(comb(s - 1, r) for s in range(1, xf + 1))
    t = Fraction(1, q)
    full = t ** (r + 1) / (1 - t) ** (r + 1)
    partial = sum(comb(s - 1, r) * t**s for s in range(r + 1, xf + 1))
    tail_nb = full - partial
    bound = pref * (head_count * t**xf + tail_nb)
    return total, bound


def siegel_mass(ctx: CurveContext, n: int) -> Fraction:
    """Total fixed-determinant mass: q^{(n^2-1)(g-1)} prod_{k=2}^n zeta(k) / (q-1)."""
    if not 1 <= n <= N_MAX:
        raise RankLimitError(f"rank must be in 1..{N_MAX}")
    val = ctx.qpow((n * n - 1) * (ctx.genus - 1)) / (ctx.q - 1)
    for k in range(2, n + 1):
        val *= ctx.zeta(k)
    return val


def unstable_mass(ctx: CurveContext, n: int, d: int) -> Fraction:
    return sum(c_l(ctx, comp, d) for comp in compositions(n))


def beta(ctx: CurveContext, n: int, d: int) -> Fraction:
    """Semistable fixed-determinant mass beta(n, d); depends on d only mod n."""
    if not 1 <= n <= N_MAX:
        raise RankLimitError(f"rank must be in 1..{N_MAX}")
    if n == 1:
        return Fraction(1, ctx.q - 1)
    key = (n, d % n)
    val = ctx.beta_table.get(key)
    if val is None:
        val = siegel_mass(ctx, n) - unstable_mass(ctx, n, d % n)
        if val <= 0:
            raise ArithmeticError("semistable mass must be positive; pipeline bug")
        ctx.beta_table[key] = val
    return val


# ---------------------------------------------------------------------------
# rank-3 closed forms (golden references for the engine)
# ---------------------------------------------------------------------------

def c11_closed_form(ctx: CurveContext, d: int) -> Fraction:
    """C_L(1,1; d): N_J q^{g-1} / ((q-1)^3 (q+1)), times q when d is odd."""
    q = ctx.q
    base = Fraction(ctx.nj) * ctx.qpow(ctx.genus - 1) / ((q - 1) ** 3 * (q + 1))
    return base * (q if d % 2 else 1)


def c111_closed_form(ctx: CurveContext, d: int) -> Fraction:
    """C_L(1,1,1; d) via the exact double geometric sum (residue-aware)."""
    q = ctx.q
    if d % 3 == 0:
        sigma = Fraction(q**4 - q**2 + 1, (q**2 - 1) * (q**6 - 1))
    else:
        sigma = Fraction(q**2, (q**2 - 1) * (q**6 - 1))
    return Fraction(ctx.nj) ** 2 * ctx.qpow(3 * (ctx.genus - 1)) / (q - 1) ** 3 * sigma


def c21_closed_form(ctx: CurveContext, d: int) -> Fraction:
    """C_L(2,1; d) = N_J q^{2(g-1)} (q^{2r} beta(2,0) + s_r beta(2,1)) / ((q-1)(q^6-1))."""
    q = ctx.q
    r = d % 3
    s = (q**3, q**5, q)[r]
    num = ctx.qpow(2 * r) * beta(ctx, 2, 0) + s * beta(ctx, 2, 1)
    return Fraction(ctx.nj) * ctx.qpow(2 * (ctx.genus - 1)) * num / ((q - 1) * (q**6 - 1))


def c12_closed_form(ctx: CurveContext, d: int) -> Fraction:
    """C_L(1,2; d) = C_L(2,1; -d) (dual filtration reverses ranks, negates degree)."""
    return c21_closed_form(ctx, -d)
