"""Hyperelliptic curves y^2 = F(x), point counts, and exact zeta data.

The numerator of the zeta function is reconstructed from the point counts
N_1..N_g via Newton's identities and extended by the functional equation
a_{2g-i} = q^{g-i} a_i; every division along the way must be exact (a failed
division signals a counting bug and aborts).  All downstream quantities --
power sums for any m, Jacobian orders N_{q^r}(J) = prod(1 - alpha^r), zeta
values zeta_X(k) -- are derived from the integer coefficient vector alone.
"""

from __future__ import annotations

from fractions import Fraction

from . import tables
from .fields import FieldSpec, embed_raw, extension_field, quadratic_character_raw
from .polynomials import MonicPoly, is_squarefree


class HyperellipticCurve:
    """Squarefree monic F of degree >= 5 over odd q; genus g = floor((gamma-1)/2)."""

    __slots__ = ("field", "F", "genus", "gamma", "delta_even", "_ext_cache", "_level_cache")

    def __init__(self, F: MonicPoly):
        if F.degree < 5:
            raise ValueError("degree must be >= 5 for genus >= 2")
        if not is_squarefree(F):
            raise ValueError("F must be squarefree")
        self.field = F.field
        self.F = F
        self.gamma = F.degree
        self.genus = (F.degree - 1) // 2
        self.delta_even = 1 if F.degree % 2 == 0 else 0
        self._ext_cache: dict[int, FieldSpec] = {}
        self._level_cache: dict[int, _LevelData] = {}

    @classmethod
    def from_labels(cls, field: FieldSpec, labels) -> "HyperellipticCurve":
        return cls(MonicPoly.from_labels(field, labels))

    def points_at_infinity(self) -> int:
        # monic F: the leading coefficient 1 is a square in every extension
        return 2 if self.gamma % 2 == 0 else 1

    def extension(self, m: int, seed: int = 0) -> FieldSpec:
        ext = self._ext_cache.get(m)
        if ext is None:
            ext = extension_field(self.field, m, seed)
            self._ext_cache[m] = ext
        return ext

    def __repr__(self) -> str:
        return f"HyperellipticCurve(q={self.field.q}, F_labels={list(self.F.labels)})"


def _affine_chi_sum_scalar(curve: HyperellipticCurve, ext: FieldSpec) -> int:
    """Straight x-scan: sum of chi(F(x)) over all x in ext (exhaustive, exact)."""
    tables.bump_scan_count()
    base = curve.field
    coeffs = [embed_raw(base, ext, c) for c in curve.F.full()]
    total = 0
    for label in range(ext.q):
        x = ext.from_label(label)
        acc = ext.zero()
        for c in reversed(coeffs):
            acc = ext.add(ext.mul(acc, x), c)
        total += quadratic_character_raw(ext, acc)
    return total


class _LevelData:
    """Per-level exact-degree scan results for one curve."""

    __slots__ = ("chi_rep_sum", "zero_rep_count", "rep_count")

    def __init__(self, chi_rep_sum: int, zero_rep_count: int, rep_count: int):
        self.chi_rep_sum = chi_rep_sum
        self.zero_rep_count = zero_rep_count
        self.rep_count = rep_count


def _level_data(curve: HyperellipticCurve, d: int) -> _LevelData:
    base = curve.field
    if d == 1:
        tables.bump_scan_count()
        s = z = 0
        for label in range(base.q):
            v = curve.F.evaluate(base.from_label(label))
            c = quadratic_character_raw(base, v)
            s += c
            z += c == 0
        return _LevelData(s, z, base.q)
    ext = curve.extension(d)
    scan = tables.level_scan(base, d, ext)
    s, z = scan.chi_sum(list(curve.F.labels) + [1])
    return _LevelData(s, z, scan.rep_count)


def count_points(curve: HyperellipticCurve, m: int, force_scalar: bool = False) -> int:
    """N_m: points of the smooth projective model over F_{q^m}.

    N_m = q^m + sum_x chi_m(F(x)) + points at infinity.  The vectorized path
    assembles the affine character sum from exact-degree orbit scans:
    chi_m restricted to F_{q^d}^* is chi_d when m/d is odd and trivial when
    m/d is even.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    base = curve.field
    if force_scalar or base.q**m > tables.MAX_TABLE_Q:
        ext = curve.extension(m)
        affine = ext.q + _affine_chi_sum_scalar(curve, ext)
        return affine + curve.points_at_infinity()
    total = 0
    for d in range(1, m + 1):
        if m % d:
            continue
        data = _level_data_cached(curve, d)
        if (m // d) % 2 == 1:
            total += d * data.chi_rep_sum if d > 1 else data.chi_rep_sum
        else:
            nonzero = data.rep_count - data.zero_rep_count
            total += d * nonzero if d > 1 else nonzero
    return base.q**m + total + curve.points_at_infinity()


def _level_data_cached(curve: HyperellipticCurve, d: int) -> _LevelData:
    data = curve._level_cache.get(d)
    if data is None:
        data = _level_data(curve, d)
        curve._level_cache[d] = data
    return data


class LPolynomial:
    """P(t) = sum a_i t^i of degree 2g with a_0 = 1 and the functional equation."""

    __slots__ = ("q", "genus", "coeffs")

    def __init__(self, q: int, genus: int, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != 2 * genus + 1:
            raise ValueError("coefficient vector must have length 2g + 1")
        if coeffs[0] != 1:
            raise ValueError("a_0 must be 1")
        for i in range(genus + 1):
            if coeffs[2 * genus - i] != q ** (genus - i) * coeffs[i]:
                raise ValueError("functional equation violated")
        self.q = q
        self.genus = genus
        self.coeffs = coeffs

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LPolynomial)
            and (self.q, self.genus, self.coeffs) == (other.q, other.genus, other.coeffs)
        )

    def __hash__(self) -> int:
        return hash((self.q, self.genus, self.coeffs))

    def __repr__(self) -> str:
        return f"LPolynomial(q={self.q}, g={self.genus}, a={list(self.coeffs)})"

    def power_sum(self, m: int) -> int:
        """s_m = sum alpha_l^m via the log-derivative recurrence, exact."""
        return _power_sums(self, m)[m]

    def point_count(self, m: int) -> int:
        """N_m recovered from the power sums: N_m = q^m + 1 - s_m."""
        return self.q**m + 1 - self.power_sum(m)

    def evaluate(self, t: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def jacobian_order(self, r: int = 1) -> int:
        return jacobian_order(self, r)

    def p_minus_one(self) -> int:
        """P(-1) = prod(1 + alpha_l) = #ker(Frobenius + 1) on the Jacobian."""
        v = self.evaluate(Fraction(-1))
        assert v.denominator == 1 and v > 0
        return int(v)


def _power_sums(L: LPolynomial, m: int) -> list[int]:
    """s_1..s_m (index 0 unused) from the coefficients of P."""
    a = L.coeffs
    deg = len(a) - 1
    s = [0] * (m + 1)
    for k in range(1, m + 1):
        acc = -k * a[k] if k <= deg else 0
        for j in range(1, min(k, deg) + 1):
            acc -= a[j] * s[k - j]
        s[k] = acc
    return s


def power_sum(L: LPolynomial, m: int) -> int:
    if m < 1:
        raise ValueError("m must be >= 1")
    return L.power_sum(m)


def l_polynomial(curve: HyperellipticCurve, force_scalar: bool = False) -> LPolynomial:
    """Reconstruct P(t) from N_1..N_g; extend with the functional equation."""
    q, g = curve.field.q, curve.genus
    s = [0] * (g + 1)
    for m in range(1, g + 1):
        s[m] = q**m + 1 - count_points(curve, m, force_scalar=force_scalar)
    a = [0] * (2 * g + 1)
    a[0] = 1
    for k in range(1, g + 1):
        acc = 0
        for j in range(0, k):
            acc += a[j] * s[k - j]
        if acc % k:
            raise ArithmeticError("Newton identity division not exact; counting bug")
        a[k] = -acc // k
    for i in range(0, g):
        a[2 * g - i] = q ** (g - i) * a[i]
    return LPolynomial(q, g, a)


def jacobian_order(L: LPolynomial, r: int = 1) -> int:
    """N_{q^r}(J) = prod_l (1 - alpha_l^r), exact via Newton on {alpha_l^r}."""
    if r < 1:
        raise ValueError("r must be >= 1")
    g2 = 2 * L.genus
    ps = _power_sums(L, r * g2)
    e = [0] * (g2 + 1)
    e[0] = 1
    for k in range(1, g2 + 1):
        acc = 0
        for j in range(1, k + 1):
            acc += (-1) ** (j - 1) * e[k - j] * ps[r * j]
        if acc % k:
            raise ArithmeticError("elementary symmetric recovery not exact")
        e[k] = acc // k
    total = 0
    for k in range(0, g2 + 1):
        total += (-1) ** k * e[k]
    if total <= 0:
        raise ArithmeticError("Jacobian order must be positive")
    return total


def zeta_value(L: LPolynomial, k: int) -> Fraction:
    """zeta_X(k) = P(q^-k) / ((1 - q^-k)(1 - q^(1-k))), exact and positive."""
    if k < 2:
        raise ValueError("zeta_X has poles at k <= 1")
    q = L.q
    t = Fraction(1, q**k)
    val = L.evaluate(t) / ((1 - t) * (1 - Fraction(1, q ** (k - 1))))
    assert val > 0
    return val


def zeta_log_tail_bound(q: int, k: int, Z: int, g: int) -> float:
    """Bound for the degree->infinity tail of log zeta_X(k) truncated at Z.

    (2g/(Z+1)) * q^{-(2k-1)(Z+1)/2} / (1 - q^{-(2k-1)/2}); the Z = 1 case
    simplifies to 2g / (q^{2k-1} - q^{(2k-1)/2}).
    """
    if Z < 1 or k < 2:
        raise ValueError("need Z >= 1 and k >= 2")
    if Z == 1:
        return 2.0 * g / (q ** (2 * k - 1) - q ** ((2 * k - 1) / 2))
    ratio = q ** (-(2 * k - 1) / 2)
    return (2.0 * g / (Z + 1)) * ratio ** (Z + 1) / (1.0 - ratio)


def weil_interval(q: int, r: int, g: int) -> tuple[float, float]:
    sq = (q**r) ** 0.5
    return ((sq - 1) ** (2 * g), (sq + 1) ** (2 * g))
