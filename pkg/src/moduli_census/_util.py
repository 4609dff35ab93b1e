"""Small shared helpers: deterministic counter-based randomness and integer factoring.

All randomness in the package flows through `counter_bytes`/`CounterStream` so that
every build artifact (field moduli, sampled curves, surveys) is a pure function of
explicit seeds, independent of thread/process scheduling.
"""

from __future__ import annotations

import hashlib
import math


def counter_bytes(*key: object) -> bytes:
    """32 deterministic bytes from a structured key."""
    material = "\x1f".join(str(k) for k in key)
    return hashlib.sha256(material.encode("utf-8")).digest()


class CounterStream:
    """Deterministic stream of uniform integers keyed by (namespace, *key).

    Values are produced by hashing (key, block-counter); the stream is stateless
    across processes and identical regardless of consumption pattern.
    """

    def __init__(self, *key: object) -> None:
        self._key = key
        self._block = 0
        self._buf = b""

    def _refill(self) -> None:
        self._buf += counter_bytes(*self._key, self._block)
        self._block += 1

    def bits(self, nbytes: int) -> int:
        while len(self._buf) < nbytes:
            self._refill()
        chunk, self._buf = self._buf[:nbytes], self._buf[nbytes:]
        return int.from_bytes(chunk, "big")

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        nbytes = (n.bit_length() + 15) // 8
        bound = (256**nbytes // n) * n
        while True:
            x = self.bits(nbytes)
            if x < bound:
                return x % n

    def digits(self, count: int, radix: int) -> list[int]:
        return [self.randint(radix) for _ in range(count)]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (fixed witness set)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """One nontrivial factor of composite odd n."""
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"factoring {n} failed")


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: multiplicity}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out: dict[int, int] = {}
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        for p in (2, 3, 5, 7, 11, 13):
            if m % p == 0:
                out[p] = out.get(p, 0) + 1
                stack.append(m // p)
                break
        else:
            d = _pollard_rho(m)
            stack.append(d)
            stack.append(m // d)
    return out


def moebius(n: int) -> int:
    mu = 1
    for _, k in factorize(n).items():
        if k > 1:
            return 0
        mu = -mu
    return mu


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, k in factorize(n).items():
        ds = [d * p**i for d in ds for i in range(k + 1)]
    return sorted(ds)
