from __future__ import annotations

import pytest

from moduli_census._util import CounterStream
from moduli_census.curves import HyperellipticCurve
from moduli_census.fields import make_field
from moduli_census.hn import CurveContext
from moduli_census.polynomials import MonicPoly, is_squarefree


def random_squarefree(field, gamma: int, seed: int, idx: int) -> MonicPoly:
    """Deterministic squarefree monic of degree gamma (test helper)."""
    for attempt in range(10**6):
        stream = CounterStream("test-curve", seed, idx, attempt)
        labels = [stream.randint(field.q) for _ in range(gamma)]
        f = MonicPoly.from_labels(field, labels)
        if is_squarefree(f):
            return f
    raise RuntimeError("sampling failed")


def random_curve(field, gamma: int, seed: int, idx: int) -> HyperellipticCurve:
    return HyperellipticCurve(random_squarefree(field, gamma, seed, idx))


@pytest.fixture(scope="session")
def f3():
    return make_field(3, 1)


@pytest.fixture(scope="session")
def f5():
    return make_field(5, 1)


@pytest.fixture(scope="session")
def f7():
    return make_field(7, 1)


@pytest.fixture(scope="session")
def f9():
    return make_field(3, 2)


@pytest.fixture(scope="session")
def pinned_curve(f3):
    """y^2 = x^5 + 2x + 1 over F_3: N_1 = 7, L = 1 + 3t + 7t^2 + 9t^3 + 9t^4."""
    return HyperellipticCurve(MonicPoly.from_labels(f3, [1, 2, 0, 0, 0]))


@pytest.fixture(scope="session")
def pinned_ctx(pinned_curve):
    return CurveContext.from_curve(pinned_curve)
