"""Monic polynomial arithmetic over F_q.

General polynomials are lists of raw field elements (constant term first, no
trailing zeros); `MonicPoly` wraps the domain objects (curve equations,
characters, irreducibles) storing only c_0..c_{d-1} with the leading 1 implicit.

Enumeration of monic irreducibles runs a product sieve on canonical integer
codes (sum c_i q^i over coefficient labels) with small q x q add/mul label
tables, so streams are deterministic: degree ascending, code ascending within a
degree.  Everything else is straight schoolbook arithmetic; degrees stay small.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._util import divisors, factorize, moebius
from .fields import FieldElement, FieldError, FieldSpec

Poly = list  # list of raw elements, constant first, normalized


# ---------------------------------------------------------------------------
# general-coefficient helpers
# ---------------------------------------------------------------------------

def p_trim(field: FieldSpec, a: Poly) -> Poly:
    while a and field.is_zero(a[-1]):
        a.pop()
    return a


def p_add(field: FieldSpec, a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = field.add(out[i], c)
    return p_trim(field, out)


def p_sub(field: FieldSpec, a: Poly, b: Poly) -> Poly:
    out = list(a) + [field.zero()] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = field.sub(out[i], c)
    return p_trim(field, out)


def p_mul(field: FieldSpec, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if field.is_zero(ai):
            continue
        for j, bj in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(ai, bj))
    return p_trim(field, out)


def p_divmod(field: FieldSpec, a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    a = list(a)
    db, lead_inv = len(b) - 1, field.inv(b[-1])
    quot = [field.zero()] * max(0, len(a) - db)
    while len(a) > db:
        c = field.mul(a[-1], lead_inv)
        off = len(a) - 1 - db
        quot[off] = c
        if not field.is_zero(c):
            for j in range(db + 1):
                a[off + j] = field.sub(a[off + j], field.mul(c, b[j]))
        a.pop()
    return p_trim(field, quot), p_trim(field, a)


def p_rem(field: FieldSpec, a: Poly, b: Poly) -> Poly:
    return p_divmod(field, a, b)[1]


def p_gcd(field: FieldSpec, a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(f, 0) is the monic normalization of f."""
    a, b = list(a), list(b)
    while b:
        a, b = b, p_rem(field, a, b)
    if a:
        inv = field.inv(a[-1])
        a = [field.mul(c, inv) for c in a]
    return a


def p_derivative(field: FieldSpec, a: Poly) -> Poly:
    out = []
    for i in range(1, len(a)):
        k = i % field.p
        scale = field.from_label(k) if field.e > 1 else (k,)
        out.append(field.mul(a[i], scale))
    return p_trim(field, out)


def p_powmod(field: FieldSpec, a: Poly, n: int, mod: Poly) -> Poly:
    result = [field.one()]
    base = p_rem(field, list(a), mod)
    while n:
        if n & 1:
            result = p_rem(field, p_mul(field, result, base), mod)
        base = p_rem(field, p_mul(field, base, base), mod)
        n >>= 1
    return result


def p_eval(field: FieldSpec, a: Poly, x) -> tuple:
    acc = field.zero()
    for c in reversed(a):
        acc = field.add(field.mul(acc, x), c)
    return acc


def _x_poly(field: FieldSpec) -> Poly:
    return [field.zero(), field.one()]


# ---------------------------------------------------------------------------
# MonicPoly
# ---------------------------------------------------------------------------

class MonicPoly:
    """Monic polynomial over a FieldSpec; coeffs are c_0..c_{d-1}, leading 1 implicit."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs):
        self.field = field
        self.coeffs = tuple(
            c.coeffs if isinstance(c, FieldElement) else tuple(c) for c in coeffs
        )

    @classmethod
    def from_labels(cls, field: FieldSpec, labels) -> "MonicPoly":
        return cls(field, [field.from_label(int(v)) for v in labels])

    @classmethod
    def from_code(cls, field: FieldSpec, degree: int, code: int) -> "MonicPoly":
        labels = []
        for _ in range(degree):
            labels.append(code % field.q)
            code //= field.q
        return cls.from_labels(field, labels)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(self.field.label(c) for c in self.coeffs)

    @property
    def code(self) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * self.field.q + self.field.label(c)
        return out

    def full(self) -> Poly:
        """All coefficients including the leading 1."""
        return list(self.coeffs) + [self.field.one()]

    def norm(self) -> int:
        """|f| = q^deg f."""
        return self.field.q**self.degree

    def evaluate(self, x) -> tuple:
        return p_eval(self.field, self.full(), x)

    def __mul__(self, other: "MonicPoly") -> "MonicPoly":
        if self.field.key != other.field.key:
            raise FieldError("mixed-field polynomials")
        prod = p_mul(self.field, self.full(), other.full())
        return MonicPoly(self.field, prod[:-1])

    def __pow__(self, k: int) -> "MonicPoly":
        out = MonicPoly(self.field, [])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MonicPoly)
            and self.field.key == other.field.key
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field.key, self.coeffs))

    def __repr__(self) -> str:
        return f"MonicPoly(q={self.field.q}, labels={list(self.labels)})"


def is_squarefree(f: MonicPoly) -> bool:
    """gcd(f, f') = 1; in odd characteristic the f' = 0 case gives gcd = f != 1."""
    if f.degree < 1:
        raise ValueError("degree must be >= 1")
    g = p_gcd(f.field, f.full(), p_derivative(f.field, f.full()))
    return len(g) == 1


def is_irreducible(f: MonicPoly) -> bool:
    """Rabin's criterion over F_q."""
    field, d = f.field, f.degree
    if d < 1:
        raise ValueError("degree must be >= 1")
    if d == 1:
        return True
    mod = f.full()
    x = _x_poly(field)
    frob = p_powmod(field, x, field.q**d, mod)
    if p_sub(field, frob, x):
        return False
    for ell in factorize(d):
        diff = p_sub(field, p_powmod(field, x, field.q ** (d // ell), mod), x)
        if len(p_gcd(field, diff, mod)) != 1:
            return False
    return True


def irreducible_count(q: int, m: int) -> int:
    """Number of monic irreducibles of degree m over F_q: (1/m) sum mu(r) q^(m/r)."""
    total = sum(moebius(r) * q ** (m // r) for r in divisors(m))
    assert total % m == 0
    return total // m


# ---------------------------------------------------------------------------
# enumeration sieve
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _label_tables(key) -> tuple[np.ndarray, np.ndarray]:
    field = _FIELDS_BY_KEY[key]
    q = field.q
    add = np.zeros((q, q), dtype=np.int32)
    mul = np.zeros((q, q), dtype=np.int32)
    elems = [field.from_label(i) for i in range(q)]
    for i in range(q):
        for j in range(q):
            add[i, j] = field.label(field.add(elems[i], elems[j]))
            mul[i, j] = field.label(field.mul(elems[i], elems[j]))
    return add, mul


_FIELDS_BY_KEY: dict[tuple, FieldSpec] = {}


def _register(field: FieldSpec) -> tuple:
    _FIELDS_BY_KEY.setdefault(field.key, field)
    return field.key


@lru_cache(maxsize=None)
def _irreducible_codes(key, degree: int) -> tuple[int, ...]:
    """Codes of all monic irreducibles of one degree, ascending (product sieve)."""
    field = _FIELDS_BY_KEY[key]
    q, m = field.q, degree
    if m == 1:
        return tuple(range(q))
    add, mul = _label_tables(key)
    composite = np.zeros(q**m, dtype=bool)
    digit_cache: dict[int, np.ndarray] = {}

    def digits(b: int) -> np.ndarray:
        arr = digit_cache.get(b)
        if arr is None:
            codes = np.arange(q**b, dtype=np.int64)
            arr = np.empty((q**b, b), dtype=np.int32)
            for i in range(b):
                arr[:, i] = (codes // q**i) % q
            digit_cache[b] = arr
        return arr

    for a in range(1, m // 2 + 1):
        b = m - a
        gd = digits(b)
        powers = q ** np.arange(m, dtype=np.int64)
        for pcode in _irreducible_codes(key, a):
            pc = [(pcode // q**i) % q for i in range(a)] + [1]
            # product coefficients of (P, monic deg a) x (G, monic deg b), positions 0..m-1
            prod_codes = np.zeros(q**b, dtype=np.int64)
            for k in range(m):
                acc = np.zeros(q**b, dtype=np.int32)
                for i in range(max(0, k - b), min(a, k) + 1):
                    j = k - i
                    gj = gd[:, j] if j < b else None
                    if gj is None:  # G's leading coefficient 1
                        term = np.full(q**b, pc[i], dtype=np.int32)
                    else:
                        term = mul[pc[i], gj] if pc[i] != 1 else gj.astype(np.int32)
                    acc = add[acc, term]
                prod_codes += acc.astype(np.int64) * powers[k]
            composite[prod_codes] = True
    return tuple(int(c) for c in np.flatnonzero(~composite))


def irreducibles_upto(field: FieldSpec, max_degree: int):
    """Every monic irreducible of degree <= max_degree exactly once.

    Order: degree ascending, canonical integer code ascending within a degree
    (coefficient labels, constant term least significant).
    """
    if max_degree < 1:
        raise ValueError("max degree must be >= 1")
    key = _register(field)
    for m in range(1, max_degree + 1):
        for code in _irreducible_codes(key, m):
            yield MonicPoly.from_code(field, m, code)


def irreducibles_of_degree(field: FieldSpec, m: int) -> list[MonicPoly]:
    key = _register(field)
    return [MonicPoly.from_code(field, m, code) for code in _irreducible_codes(key, m)]


# ---------------------------------------------------------------------------
# prime powers and the polynomial Legendre symbol
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimePower:
    """f = P^k with P monic irreducible; mangoldt is deg P."""

    base: MonicPoly
    exponent: int

    @property
    def degree(self) -> int:
        return self.base.degree * self.exponent

    @property
    def mangoldt(self) -> int:
        return self.base.degree


def prime_powers_of_degree(field: FieldSpec, m: int):
    """All f = P^k with k * deg P = m; sum of mangoldt over the stream is q^m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    for d in divisors(m):
        k = m // d
        for P in irreducibles_of_degree(field, d):
            yield PrimePower(P, k)


def legendre_poly(F: MonicPoly, P: MonicPoly) -> int:
    """(F/P) in {-1, 0, +1}: 0 iff P | F, else F^((|P|-1)/2) mod P."""
    field = F.field
    if P.field.key != field.key:
        raise FieldError("mixed-field polynomials")
    v = p_powmod(field, F.full(), (P.norm() - 1) // 2, P.full())
    if not v:
        return 0
    if len(v) == 1:
        if v[0] == field.one():
            return 1
        if v[0] == field.neg(field.one()):
            return -1
    raise ValueError("legendre_poly requires irreducible P")


def irreducible_factor_count(f: MonicPoly) -> int:
    """Number of distinct monic irreducible factors (f squarefree: all factors).

    Distinct-degree splitting: iterate w <- w^q mod f, peel gcd(w - x, f).
    """
    field = f.field
    work = f.full()
    count = 0
    w = _x_poly(field)
    d = 0
    while len(work) - 1 >= 1:
        d += 1
        if 2 * d > len(work) - 1:
            count += 1  # what remains is irreducible
            break
        w = p_powmod(field, w, field.q, work)
        g = p_gcd(field, p_sub(field, w, _x_poly(field)), work)
        if len(g) > 1:
            count += (len(g) - 1) // d
            work, rem = p_divmod(field, work, g)
            assert not rem
            w = p_rem(field, w, work)
    return count


def squarefree_part_degrees(f: MonicPoly) -> list[int]:
    """Degrees of the distinct irreducible factors of squarefree f (via DDF)."""
    field = f.field
    work = f.full()
    out = []
    w = _x_poly(field)
    d = 0
    while len(work) - 1 >= 1:
        d += 1
        if 2 * d > len(work) - 1:
            out.append(len(work) - 1)
            break
        w = p_powmod(field, w, field.q, work)
        g = p_gcd(field, p_sub(field, w, _x_poly(field)), work)
        if len(g) > 1:
            out.extend([d] * ((len(g) - 1) // d))
            work, rem = p_divmod(field, work, g)
            assert not rem
            w = p_rem(field, w, work)
    return out
