from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeeman_zones.exactalg import (
    ExactPoly,
    GaussianRational,
    ModelParams,
    apply_box_conjugated,
    apply_box_oracle,
    as_fraction,
    format_rational,
    gaussian_moment,
    gram_schmidt_zone,
    inner_product,
    magnetic_basis,
)
from zeeman_zones.zones import ito_poly

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)
gaussians = st.builds(GaussianRational, fractions, fractions)


def poly_strategy(max_deg=4):
    keys = st.tuples(st.integers(0, max_deg), st.integers(0, max_deg))
    return st.dictionaries(keys, gaussians, max_size=6).map(ExactPoly)


Z = ExactPoly.monomial(1, 0)
ZB = ExactPoly.monomial(0, 1)


def test_as_fraction_and_format():
    assert as_fraction("1/2") == Fraction(1, 2)
    assert as_fraction(0.5) == Fraction(1, 2)
    assert as_fraction(3) == 3
    assert format_rational(Fraction(-3, 4)) == "-3/4"
    assert format_rational(Fraction(2)) == "2/1"
    with pytest.raises(TypeError):
        as_fraction(object())


@settings(max_examples=80, deadline=None)
@given(gaussians, gaussians, gaussians)
def test_gaussian_rationals_form_a_field(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if b:
        assert (a / b) * b == a


@settings(max_examples=60, deadline=None)
@given(poly_strategy(), poly_strategy())
def test_derivatives_are_derivations(p, q):
    assert (p * q).d_dz() == p.d_dz() * q + p * q.d_dz()
    assert (p * q).d_dzbar() == p.d_dzbar() * q + p * q.d_dzbar()
    assert p.conjugate().conjugate() == p


@settings(max_examples=40, deadline=None)
@given(poly_strategy(3), st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(3)]), st.sampled_from([1, -1]))
def test_conjugated_operator_matches_raw_oracle(p, lam, orientation):
    params = ModelParams(lam=lam, orientation=orientation)
    assert apply_box_conjugated(p, params) == apply_box_oracle(p, params)


@settings(max_examples=40, deadline=None)
@given(poly_strategy(3), poly_strategy(3))
def test_inner_product_is_hermitian(p, q):
    lam = Fraction(3, 2)
    assert inner_product(p, q, lam) == inner_product(q, p, lam).conjugate()
    assert inner_product(p, p, lam).im == 0
    assert inner_product(p, p, lam).re >= 0


def test_operator_examples():
    params = ModelParams()
    one = ExactPoly.constant(1)
    assert apply_box_conjugated(one, params) == one.scale(-6)
    assert apply_box_conjugated(Z, params) == Z.scale(-10)
    assert apply_box_conjugated(ZB, params) == ZB.scale(-6)
    zb2 = ExactPoly.monomial(0, 2)
    assert apply_box_conjugated(zb2, ModelParams(lam=2)) == zb2.scale(-20)
    # without the field term the constant drops to -2 lam
    assert apply_box_conjugated(one, ModelParams(include_field_term=False)) == one.scale(-2)


def test_orientation_swaps_roles():
    params = ModelParams(orientation=-1)
    assert apply_box_conjugated(ZB, params) == ZB.scale(-10)
    assert apply_box_conjugated(Z, params) == Z.scale(-6)


def test_gaussian_moments():
    assert gaussian_moment(2, 2, Fraction(1)) == 2
    assert gaussian_moment(3, 3, Fraction(1, 2)) == factorial(3) * 16
    assert gaussian_moment(1, 2, Fraction(1)) == 0


def test_gram_schmidt_examples():
    gs = gram_schmidt_zone(2, 3, 1)
    expected = [
        ExactPoly.monomial(0, 2),
        ExactPoly({(1, 2): 1, (0, 1): -2}),
        ExactPoly({(2, 2): 1, (1, 1): -4, (0, 0): 2}),
    ]
    assert gs[:3] == expected
    assert gram_schmidt_zone(1, 1, Fraction(1, 2))[1] == ExactPoly({(1, 1): 1, (0, 0): -2})
    for p, poly in enumerate(gs):
        assert poly == ito_poly(p, 2, 1)


def test_magnetic_basis_and_orthogonality():
    assert magnetic_basis(2, 2) == [ExactPoly.monomial(2, 0), ExactPoly.monomial(3, 1)]
    assert magnetic_basis(-1, 2) == [ExactPoly.monomial(0, 1), ExactPoly.monomial(1, 2)]
    lam = Fraction(3)
    zone = gram_schmidt_zone(3, 6, lam)
    for i, p in enumerate(zone):
        for q in zone[i + 1:]:
            assert not inner_product(p, q, lam)


def test_json_round_trip_and_repr():
    p = ExactPoly({(2, 1): GaussianRational(Fraction(1, 3), Fraction(-2)), (0, 0): 5})
    assert ExactPoly.from_json(p.to_json()) == p
    assert "z" in repr(p)
    assert p.degree == 3
    assert p.coeff(0, 0) == GaussianRational(Fraction(5))
    assert not ExactPoly.zero()


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(lam=0)
    with pytest.raises(ValueError):
        ModelParams(kappa=0)
    with pytest.raises(ValueError):
        ModelParams(orientation=2)
    with pytest.raises(ValueError):
        apply_box_conjugated(Z, ModelParams(kappa=2))
