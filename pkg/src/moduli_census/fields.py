"""Arithmetic in F_{p^e} for odd p, including the extension levels F_{q^m}.

Extensions of F_q = F_{p^e} are represented as single towers F_{p^{e*m}} over the
prime field (one modulus per level), with cached subfield embeddings resolved by
finding a root of the base modulus inside the extension.  Elements are coefficient
tuples over F_p ("raw" form); `FieldElement` is a thin operator wrapper around a
raw tuple plus its owning `FieldSpec`.

Everything here is scalar and exact; the vectorized scan tables live in tables.py.
"""

from __future__ import annotations

from ._util import CounterStream, factorize, is_prime

Raw = tuple  # coefficient tuple over F_p, length e, constant term first


class FieldError(ValueError):
    """Invalid field construction or mixed-field operation."""


# ---------------------------------------------------------------------------
# Minimal F_p[x] helpers (int lists, constant first) for modulus search only.
# General F_q[x] machinery lives in polynomials.py; these avoid the circular
# dependency and only ever run at field-construction time.
# ---------------------------------------------------------------------------

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    return _fp_rem(res, mod, p)


def _fp_rem(a: list[int], mod: list[int], p: int) -> list[int]:
    a = list(a)
    d = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(a) > d:
        c = a[-1] * inv_lead % p
        if c:
            off = len(a) - 1 - d
            for j in range(d + 1):
                a[off + j] = (a[off + j] - c * mod[j]) % p
        a.pop()
    return _fp_trim(a)


def _fp_powmod(a: list[int], n: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _fp_rem(a, mod, p)
    while n:
        if n & 1:
            result = _fp_mulmod(result, base, mod, p)
        base = _fp_mulmod(base, base, mod, p)
        n >>= 1
    return result


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_rem(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _fp_minus_x(a: list[int], p: int) -> list[int]:
    out = list(a) + [0] * max(0, 2 - len(a))
    out[1] = (out[1] - 1) % p
    return _fp_trim(out)


def _fp_is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's criterion for monic f of degree >= 1 over F_p."""
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    if _fp_minus_x(_fp_powmod(x, p**d, f, p), p):
        return False  # x^{p^d} != x mod f
    for ell in factorize(d):
        diff = _fp_minus_x(_fp_powmod(x, p ** (d // ell), f, p), p)
        if len(_fp_gcd(diff, f, p)) != 1:
            return False
    return True


class FieldSpec:
    """F_{p^e} with an explicit monic irreducible modulus (empty for e = 1).

    Raw elements are coefficient tuples of length e over F_p; the canonical
    integer label of (c_0, ..., c_{e-1}) is sum c_i p^i.
    """

    __slots__ = ("p", "e", "modulus", "q", "_mod_full", "key")

    def __init__(self, p: int, e: int, modulus: tuple[int, ...] = ()):
        if not is_prime(p) or p == 2:
            raise FieldError(f"p = {p} is not an odd prime")
        if e < 1:
            raise FieldError(f"extension degree must be >= 1, got {e}")
        if e == 1:
            if modulus:
                raise FieldError("prime field takes no modulus")
        else:
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree e")
            if not _fp_is_irreducible([c % p for c in modulus], p):
                raise FieldError("modulus is not irreducible over F_p")
        self.p = p
        self.e = e
        self.modulus = tuple(c % p for c in modulus)
        self.q = p**e
        self._mod_full = list(self.modulus) if e > 1 else []
        self.key = (p, e, self.modulus)

    # -- raw arithmetic ------------------------------------------------------

    def zero(self) -> Raw:
        return (0,) * self.e

    def one(self) -> Raw:
        return (1,) + (0,) * (self.e - 1)

    def from_label(self, label: int) -> Raw:
        if not 0 <= label < self.q:
            raise FieldError(f"label {label} out of range for q = {self.q}")
        out = []
        for _ in range(self.e):
            out.append(label % self.p)
            label //= self.p
        return tuple(out)

    def label(self, a: Raw) -> int:
        out = 0
        for c in reversed(a):
            out = out * self.p + c
        return out

    def add(self, a: Raw, b: Raw) -> Raw:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: Raw, b: Raw) -> Raw:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a: Raw) -> Raw:
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a: Raw, b: Raw) -> Raw:
        p = self.p
        if self.e == 1:
            return (a[0] * b[0] % p,)
        conv = [0] * (2 * self.e - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] = (conv[i + j] + ai * bj) % p
        rem = _fp_rem(conv, self._mod_full, p)
        return tuple(rem) + (0,) * (self.e - len(rem))

    def inv(self, a: Raw) -> Raw:
        if not any(a):
            raise ZeroDivisionError("inversion of zero field element")
        if self.e == 1:
            return (pow(a[0], self.p - 2, self.p),)
        return self.pow(a, self.q - 2)

    def pow(self, a: Raw, n: int) -> Raw:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one()
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def is_zero(self, a: Raw) -> bool:
        return not any(a)

    def frobenius(self, a: Raw) -> Raw:
        return self.pow(a, self.p)

    def elements(self):
        """All raw elements in label order (exhaustive; test-scale fields only)."""
        for label in range(self.q):
            yield self.from_label(label)

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self and value.field.key != self.key:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FieldElement(self, self.from_label(value % self.q))
        return FieldElement(self, tuple(int(c) % self.p for c in value))

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, e={self.e}, q={self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


class FieldElement:
    """Element of a FieldSpec: owner reference plus reduced coefficient tuple."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Raw):
        self.field = field
        self.coeffs = coeffs

    def _check(self, other: "FieldElement") -> None:
        if self.field.key != other.field.key:
            raise FieldError("mixed-field operands")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.add(self.coeffs, other.coeffs))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.sub(self.coeffs, other.coeffs))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.coeffs, other.coeffs))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, self.field.neg(self.coeffs))

    def __pow__(self, n: int) -> "FieldElement":
        return FieldElement(self.field, self.field.pow(self.coeffs, n))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.coeffs))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self * other.inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def label(self) -> int:
        return self.field.label(self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.field.key == other.field.key
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field.key, self.coeffs))

    def __repr__(self) -> str:
        return f"<{self.label} in F_{self.field.q}>"


def make_field(p: int, e: int, seed: int = 0) -> FieldSpec:
    """F_{p^e} with a modulus found by seeded randomized search.

    Deterministic for fixed (p, e, seed); different seeds generally produce
    different moduli (all counting outputs must agree regardless).
    """
    if not is_prime(p) or p == 2:
        raise FieldError(f"p = {p} is not an odd prime")
    if e < 1:
        raise FieldError(f"extension degree must be >= 1, got {e}")
    if e == 1:
        return FieldSpec(p, 1)
    stream = CounterStream("field-modulus", p, e, seed)
    while True:
        cand = [stream.randint(p) for _ in range(e)] + [1]
        if cand[0] == 0:
            continue
        if _fp_is_irreducible(cand, p):
            return FieldSpec(p, e, tuple(cand))


def quadratic_character(a: FieldElement) -> int:
    """0 for zero, +1 for nonzero squares, -1 otherwise (a^((Q-1)/2))."""
    f = a.field
    if f.is_zero(a.coeffs):
        return 0
    v = f.pow(a.coeffs, (f.q - 1) // 2)
    if v == f.one():
        return 1
    if v == f.neg(f.one()):
        return -1
    raise ArithmeticError("character value not +-1; field invariants violated")


def quadratic_character_raw(field: FieldSpec, a: Raw) -> int:
    if field.is_zero(a):
        return 0
    v = field.pow(a, (field.q - 1) // 2)
    return 1 if v == field.one() else -1


_GENERATOR_CACHE: dict[tuple, Raw] = {}


def multiplicative_generator(field: FieldSpec) -> Raw:
    """A fixed generator of F_Q^*, found by seeded search with exact order checks."""
    g = _GENERATOR_CACHE.get(field.key)
    if g is not None:
        return g
    n = field.q - 1
    primes = list(factorize(n))
    stream = CounterStream("field-generator", field.key)
    while True:
        cand = field.from_label(1 + stream.randint(field.q - 1))
        if all(field.pow(cand, n // ell) != field.one() for ell in primes):
            _GENERATOR_CACHE[field.key] = cand
            return cand


_EMBED_CACHE: dict[tuple, Raw] = {}


def embedding_root(base: FieldSpec, ext: FieldSpec) -> Raw:
    """Image of base's generator-of-representation x inside ext.

    The root of the base modulus is located inside the unique subfield of order
    base.q by scanning powers of ext's multiplicative generator (exhaustive over
    that subfield); mathematically a root always exists when base.e | ext.e.
    """
    cache_key = (base.key, ext.key)
    root = _EMBED_CACHE.get(cache_key)
    if root is not None:
        return root
    if base.p != ext.p or ext.e % base.e:
        raise FieldError(f"no embedding of F_{base.q} into F_{ext.q}")
    if base.e == 1:
        root = ext.zero()  # unused; prime-field elements embed as constants
        _EMBED_CACHE[cache_key] = root
        return root
    gamma = multiplicative_generator(ext)
    step = (ext.q - 1) // (base.q - 1)
    delta = ext.pow(gamma, step)
    mod = base.modulus
    cand = ext.one()
    for _ in range(base.q - 1):
        # evaluate the base modulus at cand via Horner with F_p coefficients
        acc = ext.zero()
        for c in reversed(mod):
            acc = ext.mul(acc, cand)
            if c:
                acc = ext.add(acc, tuple((c if i == 0 else 0) for i in range(ext.e)))
        if ext.is_zero(acc):
            _EMBED_CACHE[cache_key] = cand
            return cand
        cand = ext.mul(cand, delta)
    raise ArithmeticError("no root of base modulus in extension; arithmetic bug")


def embed_raw(base: FieldSpec, ext: FieldSpec, a: Raw) -> Raw:
    """Ring-homomorphic image of a base element inside ext."""
    if base.key == ext.key:
        return a
    if base.e == 1:
        embedding_root(base, ext)  # validates compatibility
        return (a[0],) + (0,) * (ext.e - 1)
    rho = embedding_root(base, ext)
    acc = ext.zero()
    for c in reversed(a):
        acc = ext.mul(acc, rho)
        if c:
            acc = ext.add(acc, (c,) + (0,) * (ext.e - 1))
    return acc


def embed(base: FieldSpec, ext: FieldSpec, a: FieldElement) -> FieldElement:
    if a.field.key != base.key:
        raise FieldError("element does not belong to the declared base field")
    return FieldElement(ext, embed_raw(base, ext, a.coeffs))


def extension_field(base: FieldSpec, m: int, seed: int = 0) -> FieldSpec:
    """The degree-m extension F_{q^m} of base, as a tower over the prime field."""
    if m < 1:
        raise FieldError("extension degree must be >= 1")
    if m == 1:
        return base
    return make_field(base.p, base.e * m, seed)
