import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeeman_zones.exactalg import ModelParams
from zeeman_zones.kernels import (
    SingularTimeError,
    global_trace_ball,
    partition_closed_form,
    partition_spectral,
    partition_zonal,
    point_spread,
    schrodinger_global,
    schrodinger_zonal,
    spectral_kernel_oracle,
    wiener_global,
    wiener_zonal,
    zonal_trace_numeric,
)
from zeeman_zones.quadrature import plane_trapezoid

LAM = ModelParams(lam=Fraction(3, 2))
Z0, W0 = 0.3 + 0.2j, -0.1 + 0.5j
coords = st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False)

# Reference values from 30-digit mpmath evaluation of the closed forms.
POINT_SPREAD_REF = {
    0: 0.38303233606857108 - 0.099846866737923571j,
    1: 0.23939521004285693 - 0.062404291711202233j,
    2: 0.12269004514696419 - 0.031982199501991146j,
}


@pytest.mark.parametrize("a", [0, 1, 2])
def test_point_spread_frozen_values(a):
    assert point_spread(a, LAM, Z0, W0).value == pytest.approx(POINT_SPREAD_REF[a], rel=1e-14)


def test_global_kernels_frozen_values():
    assert wiener_global(0.7, Z0, W0, LAM).value == pytest.approx(0.14495435153958541 + 0.037785942486756751j,
                                                                  rel=1e-13)
    assert schrodinger_global(0.7, Z0, W0, LAM).value == pytest.approx(
        0.097610451127245591 - 0.25732930584767312j, rel=1e-13)


def test_partition_frozen_values():
    params = ModelParams(lam=Fraction(3, 2), kappa=2)
    assert partition_zonal(2, 0.7, params) == pytest.approx(0.47705171803998719, rel=1e-14)
    assert partition_zonal(2, 0.7, params, "schrodinger") == pytest.approx(-0.99677966764505402, rel=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), coords, coords)
def test_point_spread_hermitian_and_diagonal(a, z, w):
    k_zw = point_spread(a, LAM, z, w).value
    k_wz = point_spread(a, LAM, w, z).value
    assert k_zw == pytest.approx(np.conj(k_wz), rel=1e-12, abs=1e-14)
    # diagonal is the zone's density lam/pi (one state per magnetic number)
    assert point_spread(a, LAM, z, z).value == pytest.approx(1.5 / math.pi, rel=1e-13)
    # Cauchy-Schwarz for a positive kernel
    assert abs(k_zw) <= 1.5 / math.pi * (1 + 1e-12)


def test_point_spread_matches_spectral_sum_many_particles():
    params = ModelParams(kappa=2)
    z = np.array([0.3 + 0.2j, 0.1j])
    w = np.array([-0.1 + 0.5j, 0.2])
    for a in range(3):
        assert point_spread(a, params, z, w).value == pytest.approx(
            spectral_kernel_oracle(a, params, z, w, 60), abs=1e-13)


def test_mirror_orientation_conjugates_arguments():
    plus = ModelParams()
    minus = ModelParams(orientation=-1)
    val = point_spread(1, minus, Z0, W0).value
    assert val == pytest.approx(point_spread(1, plus, np.conj(Z0), np.conj(W0)).value, rel=1e-15)
    assert val == pytest.approx(np.conj(point_spread(1, plus, Z0, W0).value), rel=1e-15)


@pytest.mark.parametrize("a", [0, 1, 2])
def test_zonal_heat_kernel_spectral_matches_closed_and_limits(a):
    params = ModelParams()
    if a == 0:
        assert wiener_zonal(0, 0.4, Z0, W0, params, method="spectral").value == pytest.approx(
            wiener_zonal(0, 0.4, Z0, W0, params).value, abs=1e-14)
    kv = wiener_zonal(a, 1e-7, Z0, W0, params)
    assert kv.value == pytest.approx(point_spread(a, params, Z0, W0).value, rel=1e-5)
    assert kv.abs_err <= 1e-14


def test_global_kernel_is_sum_of_zonal_kernels():
    params = ModelParams()
    total = sum(wiener_zonal(a, 0.7, Z0, W0, params).value for a in range(60))
    assert total == pytest.approx(wiener_global(0.7, Z0, W0, params).value, abs=1e-13)


def test_schrodinger_zonal_is_heat_kernel_at_imaginary_time():
    params = ModelParams()
    closed = schrodinger_zonal(0, 0.9, Z0, W0, params).value
    spectral = schrodinger_zonal(0, 0.9, Z0, W0, params, method="spectral")
    assert closed == pytest.approx(spectral.value, abs=1e-13)
    q = cmath.exp(-2j * 0.9)
    manual = cmath.exp(-0.9j) / math.pi * cmath.exp(-0.5 * (abs(Z0) ** 2 + abs(W0) ** 2) + q * Z0 * np.conj(W0))
    assert closed == pytest.approx(manual, rel=1e-14)


def test_global_heat_kernel_semigroup_by_quadrature():
    params = ModelParams()
    lhs = plane_trapezoid(lambda u: wiener_global(0.4, Z0, u, params).value * wiener_global(0.5, u, W0, params).value,
                          9.0, 181)
    assert lhs == pytest.approx(wiener_global(0.9, Z0, W0, params).value, abs=1e-12)


def test_global_trace_density():
    params = ModelParams()
    res = global_trace_ball(0.5, 2.0, params)
    assert res.value == pytest.approx(4.0 * math.pi / (2 * math.pi * math.sinh(0.5)), rel=1e-12)


def test_caustic_raises():
    with pytest.raises(SingularTimeError):
        schrodinger_global(math.pi, Z0, W0, ModelParams())
    with pytest.raises(SingularTimeError):
        partition_zonal(0, math.pi / 2, ModelParams(lam=2), "schrodinger")


def test_argument_validation():
    with pytest.raises(ValueError):
        wiener_global(0.0, Z0, W0, ModelParams())
    with pytest.raises(ValueError):
        wiener_zonal(1, 0.5, Z0, W0, ModelParams(), method="closed")
    with pytest.raises(ValueError):
        point_spread(-1, ModelParams(), Z0, W0)
    with pytest.raises(ValueError):
        point_spread(0, ModelParams(kappa=2), Z0, W0)
    with pytest.raises(ValueError):
        partition_spectral(0, 1j, ModelParams())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), st.integers(1, 3), st.floats(0.1, 5.0))
def test_partition_spectral_sum_property(a, kappa, lt):
    params = ModelParams(kappa=kappa)
    val, bound = partition_spectral(a, lt, params)
    closed = partition_zonal(a, lt, params)
    assert abs(val - closed) <= 1e-12 * closed
    assert bound <= 1e-14 * closed


def test_abel_regularised_schrodinger_partition():
    params = ModelParams(kappa=2)
    t = 0.8
    target = partition_zonal(1, t, params, "schrodinger")
    dists = []
    for eta in (0.5, 0.1, 0.01, 0.001):
        tau = t * complex(eta, 1)
        val, _ = partition_spectral(1, tau, params)
        assert val == pytest.approx(partition_closed_form(1, tau, params), rel=1e-10)
        dists.append(abs(val - target))
    assert dists == sorted(dists, reverse=True)
    assert dists[-1] < 1e-2 * abs(target)


def test_fock_trace_by_quadrature_matches_partition():
    for kappa in (1, 2):
        params = ModelParams(kappa=kappa, lam=2)
        res = zonal_trace_numeric(0.6, params)
        assert res.value == pytest.approx(partition_zonal(0, 0.6, params), rel=1e-10)
