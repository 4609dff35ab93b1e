from __future__ import annotations

import pytest

from moduli_census.fields import (
    FieldError,
    embed,
    extension_field,
    make_field,
    multiplicative_generator,
    quadratic_character,
)


def test_make_field_rejects_bad_input():
    with pytest.raises(FieldError):
        make_field(2, 1)
    with pytest.raises(FieldError):
        make_field(9, 1)
    with pytest.raises(FieldError):
        make_field(15, 2)
    with pytest.raises(FieldError):
        make_field(3, 0)


def test_prime_field_basics():
    f3 = make_field(3, 1)
    assert f3.q == 3 and f3.modulus == ()


def test_frobenius_fixed_point_identity_f81():
    f81 = make_field(3, 4)
    assert f81.q == 81
    for label in range(81):
        a = f81.from_label(label)
        assert f81.pow(a, 81) == a


def test_multiplicative_group_order_f49():
    f49 = make_field(7, 2)
    g = multiplicative_generator(f49)
    # exhaustive order check: g generates all 48 nonzero elements
    seen = set()
    x = f49.one()
    for _ in range(48):
        x = f49.mul(x, g)
        seen.add(x)
    assert len(seen) == 48
    assert f49.pow(g, 48) == f49.one()
    for d in (2, 3, 4, 6, 8, 12, 16, 24):
        assert f49.pow(g, d) != f49.one()


@pytest.mark.parametrize("p,e", [(3, 1), (5, 1), (7, 1), (3, 2), (3, 4), (5, 2)])
def test_field_laws_exhaustive(p, e):
    f = make_field(p, e)
    els = [f.from_label(i) for i in range(f.q)]
    one, zero = f.one(), f.zero()
    fixed = 0
    for a in els:
        assert f.add(a, zero) == a
        assert f.mul(a, one) == a
        if not f.is_zero(a):
            assert f.mul(a, f.inv(a)) == one
        if f.pow(a, p) == a:
            fixed += 1
    # Frobenius fixes exactly the prime field
    assert fixed == p
    # Frobenius is additive and multiplicative (spot pairs)
    import itertools

    for a, b in itertools.islice(itertools.product(els, els), 200):
        assert f.pow(f.add(a, b), p) == f.add(f.pow(a, p), f.pow(b, p))
        assert f.pow(f.mul(a, b), p) == f.mul(f.pow(a, p), f.pow(b, p))


def test_inverse_exhaustive_f9(f9):
    one = f9.one()
    for label in range(1, 9):
        a = f9.from_label(label)
        assert f9.mul(a, f9.inv(a)) == one


def test_small_products():
    f7 = make_field(7, 1)
    assert (f7.element(3) * f7.element(5)).label == 1  # 15 mod 7


def test_mixed_field_and_zero_inverse_errors(f3, f5):
    with pytest.raises(FieldError):
        f3.element(1) + f5.element(1)
    with pytest.raises(ZeroDivisionError):
        f3.element(0).inverse()


@pytest.mark.parametrize("p,e", [(3, 1), (5, 1), (7, 1), (3, 2)])
def test_quadratic_character_counts(p, e):
    f = make_field(p, e)
    chi = [quadratic_character(f.element(i)) for i in range(f.q)]
    assert chi[0] == 0
    assert chi[1] == 1
    assert sum(chi) == 0
    assert chi.count(1) == (f.q - 1) // 2


def test_quadratic_character_f7_value(f7):
    # squares of F_7 are {1, 2, 4}
    assert quadratic_character(f7.element(3)) == -1
    for s in (1, 2, 4):
        assert quadratic_character(f7.element(s)) == 1


def test_embed_is_ring_homomorphism_exhaustive(f5):
    f25 = make_field(5, 2)
    for i in range(5):
        for j in range(5):
            a, b = f5.element(i), f5.element(j)
            assert embed(f5, f25, a * b) == embed(f5, f25, a) * embed(f5, f25, b)
            assert embed(f5, f25, a + b) == embed(f5, f25, a) + embed(f5, f25, b)
    assert embed(f5, f25, f5.element(0)).is_zero()
    assert embed(f5, f25, f5.element(1)) == f25.element(1)


def test_embed_preserves_multiplicative_order(f3, f9):
    # 2 has order 2 in F_3; its image must square to 1 and not be 1
    img = embed(f3, f9, f3.element(2))
    assert img * img == f9.element(1)
    assert img != f9.element(1)


def test_embed_tower_f9_to_f81(f9):
    f81 = make_field(3, 4)
    for i in range(9):
        for j in range(9):
            a, b = f9.element(i), f9.element(j)
            assert embed(f9, f81, a * b) == embed(f9, f81, a) * embed(f9, f81, b)


def test_embed_incompatible_degrees(f9):
    f27 = make_field(3, 3)
    with pytest.raises(FieldError):
        embed(f9, f27, f9.element(1))


def test_extension_field_degrees(f3):
    assert extension_field(f3, 1) is f3
    assert extension_field(f3, 3).q == 27


def test_different_seeds_give_different_moduli():
    a = make_field(3, 4, seed=0)
    b = make_field(3, 4, seed=1)
    assert a.q == b.q == 81
    assert a.modulus != b.modulus  # distinct irreducible moduli, same field up to isomorphism
