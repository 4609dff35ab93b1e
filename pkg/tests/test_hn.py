from __future__ import annotations

from fractions import Fraction

import pytest

from conftest import random_curve
from moduli_census.fields import make_field
from moduli_census.hn import (
    CurveContext,
    RankLimitError,
    beta,
    c11_closed_form,
    c111_closed_form,
    c12_closed_form,
    c21_closed_form,
    c_l,
    c_l_box_oracle,
    compositions,
    euler_exponent,
    siegel_mass,
)


def test_euler_exponent_closed_forms():
    g = 3
    for d1, d2, d3 in ((5, 2, -1), (0, -1, -2), (7, 1, 0)):
        assert euler_exponent((1, 1, 1), (d1, d2, d3), g) == 2 * (d1 - d3) + 3 * (1 - g)
    for d1, d in ((4, 5), (0, 1), (-3, 2)):
        assert euler_exponent((2, 1), (d1, d - d1), g) == 3 * d1 - 2 * d + 2 * (1 - g)
    assert euler_exponent((4,), (7,), g) == 0


def test_compositions_of_four():
    comps = set(compositions(4))
    assert comps == {(1, 1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1), (1, 3), (3, 1), (2, 2)}


def test_c11_closed_form_even_degree(pinned_ctx):
    q, g, nj = 3, 2, pinned_ctx.nj
    assert c_l(pinned_ctx, (1, 1), 0) == Fraction(nj * q ** (g - 1), (q - 1) ** 3 * (q + 1))
    assert c_l(pinned_ctx, (1, 1), 0) == c11_closed_form(pinned_ctx, 0)
    assert c_l(pinned_ctx, (1, 1), 1) == c11_closed_form(pinned_ctx, 1)
    assert c_l(pinned_ctx, (1, 1), 2) == c_l(pinned_ctx, (1, 1), 0)


@pytest.mark.parametrize("q", [3, 5])
def test_rank3_closed_forms_on_random_curves(q):
    field = make_field(q, 1)
    for idx in range(3):
        ctx = CurveContext.from_curve(random_curve(field, 5, 41, idx))
        for d in (0, 1, 2):
            assert c_l(ctx, (1, 1, 1), d) == c111_closed_form(ctx, d)
            assert c_l(ctx, (2, 1), d) == c21_closed_form(ctx, d)
            assert c_l(ctx, (1, 2), d) == c12_closed_form(ctx, d)
            assert c_l(ctx, (1, 1, 1), d) > 0
            assert c_l(ctx, (2, 1), d) > 0


def test_dual_composition_symmetry(pinned_ctx):
    """C(1,2; d) = C(2,1; -d) exactly; equality at d = 0 mod 3 only."""
    for d in range(-3, 4):
        assert c_l(pinned_ctx, (1, 2), d) == c_l(pinned_ctx, (2, 1), -d)
    assert c_l(pinned_ctx, (1, 2), 0) == c_l(pinned_ctx, (2, 1), 0)
    assert c_l(pinned_ctx, (1, 2), 3) == c_l(pinned_ctx, (2, 1), 3)
    assert c_l(pinned_ctx, (1, 2), 1) == c_l(pinned_ctx, (2, 1), 2)


def test_class_scale_invariance(pinned_ctx):
    """Residue-modulus choice inside the class enumeration cannot change values."""
    for comp in ((1, 1), (2, 1), (1, 1, 1), (2, 2), (1, 1, 2)):
        for d in (0, 1):
            base = c_l(pinned_ctx, comp, d)
            assert c_l(pinned_ctx, comp, d, class_scale=2) == base
            assert c_l(pinned_ctx, comp, d, class_scale=3) == base


def test_box_oracle_r60_tiny_tail(pinned_ctx):
    value, tail = c_l_box_oracle(pinned_ctx, (1, 1), 0, 60)
    assert tail < Fraction(1, 10**20)
    assert abs(c_l(pinned_ctx, (1, 1), 0) - value) <= tail


def test_box_oracle_monotone_in_radius(pinned_ctx):
    prev = Fraction(0)
    for radius in (2, 4, 8, 16):
        value, _ = c_l_box_oracle(pinned_ctx, (2, 1), 1, radius)
        assert value >= prev
        prev = value


def test_box_oracle_matches_closed_form(pinned_ctx):
    value, tail = c_l_box_oracle(pinned_ctx, (2, 1), 1, 40)
    assert abs(c21_closed_form(pinned_ctx, 1) - value) <= tail


@pytest.mark.parametrize("q,curves", [(3, 3), (5, 2)])
def test_engine_box_agreement_all_comps(q, curves):
    field = make_field(q, 1)
    for idx in range(curves):
        ctx = CurveContext.from_curve(random_curve(field, 5, 42, idx))
        for n in (2, 3, 4):
            for comp in compositions(n):
                for d in (0, 1, 2, 3):
                    engine = c_l(ctx, comp, d)
                    value, tail = c_l_box_oracle(ctx, comp, d, 25)
                    assert abs(engine - value) <= tail, (comp, d)


def test_beta_basics(pinned_ctx):
    q = pinned_ctx.q
    assert beta(pinned_ctx, 1, 5) == Fraction(1, q - 1)
    # Siegel assembly: beta(2,0) + C(1,1;0) equals the full rank-2 mass
    assert beta(pinned_ctx, 2, 0) + c_l(pinned_ctx, (1, 1), 0) == siegel_mass(pinned_ctx, 2)
    for d in (0, 1):
        assert beta(pinned_ctx, 2, d) == beta(pinned_ctx, 2, d + 2)
    for n in (2, 3, 4):
        for d in range(n):
            assert beta(pinned_ctx, n, d) > 0


def test_beta_residue_modulus_consistency(pinned_ctx):
    """Recomputing beta with scaled class moduli yields the identical rational."""
    fresh = CurveContext.from_lpolynomial(pinned_ctx.L)
    direct = beta(fresh, 3, 1)
    rescaled = siegel_mass(fresh, 3) - sum(
        c_l(fresh, comp, 1, class_scale=2) for comp in compositions(3)
    )
    assert direct == rescaled


def test_rank_limits(pinned_ctx):
    with pytest.raises(RankLimitError):
        c_l(pinned_ctx, (7,), 0)
    with pytest.raises(RankLimitError):
        c_l(pinned_ctx, (4, 3), 0)
    with pytest.raises(RankLimitError):
        beta(pinned_ctx, 7, 0)
