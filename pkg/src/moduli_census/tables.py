"""Vectorized affine scans for point counting.

For each extension level F_{q^m} we build multiplicative log/Zech tables once
(per process) and evaluate y^2 = F(x) character sums over one representative per
Frobenius orbit of exact degree m, entirely in the log domain:

  * elements are g^l for a fixed generator g; the only per-step gather during a
    Horner pass is the Zech lookup log(1 + g^k);
  * chi(g^l) = +1 iff l is even, so the final character is bit arithmetic;
  * exact-degree-m orbit representatives are the logs l minimal in
    {l q^j mod (Q-1)} that avoid every proper subfield (pure index arithmetic).

The scalar path in curves.py computes the same sums element by element; the two
are cross-checked in the test suite on every small field.
"""

from __future__ import annotations

import numpy as np

from .fields import FieldSpec, embed_raw, multiplicative_generator

MAX_TABLE_Q = 1 << 23  # largest field a log table is built for

SCAN_COUNT = 0  # number of vectorized/scalar level scans performed (cache diagnostics)


def bump_scan_count() -> None:
    global SCAN_COUNT
    SCAN_COUNT += 1


class FieldTable:
    """Discrete-log tables for one tower level F_{p^n}."""

    def __init__(self, field: FieldSpec):
        if field.q > MAX_TABLE_Q:
            raise MemoryError(f"field of size {field.q} exceeds the table cap")
        self.field = field
        p, n, Q = field.p, field.e, field.q
        gen = multiplicative_generator(field)

        # exp table by block doubling on digit rows
        digits = np.zeros((Q - 1, n), dtype=np.int64)
        digits[0, 0] = 1  # g^0 = 1
        size = 1
        gpow = gen  # g^(2^t) as raw
        while size < Q - 1:
            take = min(size, Q - 1 - size)
            mat = self._mul_matrix(gpow)
            digits[size : size + take] = (digits[:take] @ mat) % p
            size += take
            gpow = field.mul(gpow, gpow)
        packer = p ** np.arange(n, dtype=np.int64)
        exp = (digits @ packer).astype(np.int32)
        log = np.zeros(Q, dtype=np.int32)
        log[exp] = np.arange(Q - 1, dtype=np.int32)

        # zech[k] = log(1 + g^k); ZSENT where 1 + g^k = 0
        plus_one = exp + 1 - p * (digits[:, 0] == p - 1).astype(np.int32)
        self.ZSENT = Q - 1
        zech = np.where(plus_one == 0, self.ZSENT, log[plus_one]).astype(np.int32)

        self.exp = exp
        self.log = log
        self.zech = zech
        self.gen = gen

    def _mul_matrix(self, a) -> np.ndarray:
        """Matrix of multiplication by a in the power basis (rows: images of x^j)."""
        field = self.field
        n = field.e
        if n == 1:
            return np.array([[a[0]]], dtype=np.int64)
        x = tuple(1 if i == 1 else 0 for i in range(n))
        mat = np.zeros((n, n), dtype=np.int64)
        xj = a
        for j in range(n):
            mat[j, :] = xj
            xj = field.mul(xj, x)
        return mat

    def raw_to_id(self, a) -> int:
        return self.field.label(a)

    def log_of_raw(self, a) -> int:
        if not any(a):
            raise ZeroDivisionError("log of zero")
        return int(self.log[self.raw_to_id(a)])


class LevelScan:
    """Exact-degree-m orbit representatives of F_{q^m} over a base F_q."""

    def __init__(self, base: FieldSpec, m: int, table: FieldTable):
        self.base = base
        self.m = m
        self.table = table
        q = base.q
        Q = table.field.q
        order = Q - 1
        logs = np.arange(order, dtype=np.int64)
        exact = np.ones(order, dtype=bool)
        for d in range(1, m):
            if m % d == 0:
                exact &= (logs % (order // (q**d - 1))) != 0
        keep = exact.copy()
        conj = logs.copy()
        for _ in range(m - 1):
            conj = (conj * q) % order
            keep &= logs <= conj
        self.rep_logs = logs[exact & keep].astype(np.int32)
        self.rep_count = int(self.rep_logs.size)

        # embedded base-field coefficient logs (None marks the zero element)
        emb: list[int | None] = []
        for label in range(q):
            raw = embed_raw(base, table.field, base.from_label(label))
            emb.append(None if not any(raw) else table.log_of_raw(raw))
        self.coeff_logs = emb

    def chi_sum(self, coeff_labels) -> tuple[int, int]:
        """(sum of chi_m(F(x)) over reps, count of reps with F(x) = 0).

        coeff_labels: base-field labels of F's coefficients, constant first,
        including the leading coefficient.  Log-domain Horner: the only gather
        per step is the Zech lookup for the add-coefficient stage.
        """
        bump_scan_count()
        t = self.table
        order = np.int32(t.field.q - 1)
        lx = self.rep_logs
        logs = [self.coeff_logs[int(c)] for c in coeff_labels]
        top = logs[-1]
        if top is None:
            raise ValueError("leading coefficient must be nonzero")
        vlog = np.full(lx.shape, top, dtype=np.int32)
        vzero = np.zeros(lx.shape, dtype=bool)
        scratch = np.empty(lx.shape, dtype=np.int32)
        for lc in reversed(logs[:-1]):
            vlog += lx
            vlog -= np.multiply(order, vlog >= order, dtype=np.int32)
            if lc is None:
                continue
            np.subtract(vlog, np.int32(lc), out=scratch)
            scratch += np.multiply(order, scratch < 0, dtype=np.int32)
            z = t.zech[scratch]
            np.add(z, np.int32(lc), out=scratch)
            scratch -= np.multiply(order, scratch >= order, dtype=np.int32)
            newzero = z == t.ZSENT
            newzero &= ~vzero
            np.copyto(scratch, np.int32(lc), where=vzero)
            vlog, scratch = scratch, vlog
            vzero = newzero
        chi = 1 - 2 * (vlog & 1)
        chi[vzero] = 0
        return int(chi.sum()), int(np.count_nonzero(vzero))


_TABLE_CACHE: dict[tuple, FieldTable] = {}
_SCAN_CACHE: dict[tuple, LevelScan] = {}


def field_table(field: FieldSpec) -> FieldTable:
    tab = _TABLE_CACHE.get(field.key)
    if tab is None:
        tab = FieldTable(field)
        _TABLE_CACHE[field.key] = tab
    return tab


def level_scan(base: FieldSpec, m: int, ext: FieldSpec) -> LevelScan:
    key = (base.key, m, ext.key)
    scan = _SCAN_CACHE.get(key)
    if scan is None:
        scan = LevelScan(base, m, field_table(ext))
        _SCAN_CACHE[key] = scan
    return scan


def clear_caches() -> None:
    _TABLE_CACHE.clear()
    _SCAN_CACHE.clear()
