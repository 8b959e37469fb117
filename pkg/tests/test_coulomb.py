import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeeman_zones.coulomb import (
    ZoneOperatorMatrix,
    bethe_velocity,
    bethe_velocity_squared_exact,
    coulomb_diag_fock,
    coulomb_diag_fock_exact,
    coulomb_matrix_element,
    fluctuation,
    fluctuation_composed_kernel,
    fock_energy_gap_identity,
    log_potential_closed_form,
    log_potential_diag,
    radial_moment_ratio_exact,
    trace_divergence_report,
    transmission_matrix,
    zone_state,
)
from zeeman_zones.exactalg import ModelParams
from zeeman_zones.quadrature import integrate_adaptive
from zeeman_zones.zones import eigenstate

SQRT_PI = math.sqrt(math.pi)

# <phi_1, (1/r) phi_2> from 30-digit mpmath radial quadrature, lambda = 1.
MATRIX_REF = [
    ((1, 1), (0, 0), -0.88622692545275801),
    ((2, 1), (1, 0), -0.31332853432887506),
    ((1, 1), (1, 1), 1.329340388179137),
    ((3, 2), (3, 2), 0.70621208122016654),
    ((0, 2), (0, 2), 0.66467019408956851),
    ((4, 2), (2, 0), 0.10175642642225639),
]


def test_fock_diagonal_examples():
    assert coulomb_diag_fock(0) == pytest.approx(SQRT_PI, rel=1e-15)
    assert coulomb_diag_fock(1) == pytest.approx(SQRT_PI / 2, rel=1e-15)
    assert coulomb_diag_fock_exact(5) == Fraction(63, 256)
    assert coulomb_diag_fock(5, lam=4.0, Q=2.0) == pytest.approx(2 * math.sqrt(4 * math.pi) * 63 / 256, rel=1e-15)
    # log-Gamma branch continues the rational branch
    assert coulomb_diag_fock(31) == pytest.approx(SQRT_PI * float(coulomb_diag_fock_exact(31)), rel=1e-14)
    with pytest.raises(ValueError):
        coulomb_diag_fock(-1)


@pytest.mark.parametrize("s1,s2,ref", MATRIX_REF)
def test_matrix_elements_frozen(s1, s2, ref):
    val, err = coulomb_matrix_element(s1, s2)
    assert val == pytest.approx(ref, abs=1e-12)
    assert err < 1e-10


def test_matrix_element_scales_with_lambda_and_Q():
    val, _ = coulomb_matrix_element((1, 1), (1, 1), ModelParams(lam=3, Q=2.0))
    assert val == pytest.approx(2 * 2.3024850928795991, abs=1e-12)


@pytest.mark.parametrize("m", [0, 3, 10])
def test_radial_and_polar_paths_agree(m):
    params = ModelParams(lam=Fraction(1, 2))
    radial, _ = coulomb_matrix_element((m + 1, 1), (m + 1, 1), params)
    polar, _ = coulomb_matrix_element((m + 1, 1), (m + 1, 1), params, method="polar")
    assert abs(radial - polar) < 1e-8


def test_accepts_eigenstates_and_selection_rule():
    val, err = coulomb_matrix_element(eigenstate(0, 0), eigenstate(1, 0))
    assert (val, err) == (0.0, 0.0)
    val, _ = coulomb_matrix_element(eigenstate(0, 0), eigenstate(1, 0), method="polar")
    assert abs(val) < 1e-10


def test_zone_operator_is_diagonal_by_quadrature():
    params = ModelParams()
    for a in (1, 2):
        for m1, m2 in ((0, 1), (-1, 1), (2, 4)):
            val, _ = coulomb_matrix_element((a + m1, a), (a + m2, a), params, method="polar")
            assert abs(val) < 1e-10


def test_transmission_structure():
    mat = transmission_matrix(0, 0, range(4))
    for m in range(4):
        assert mat.entries[m] == pytest.approx(coulomb_diag_fock(m), abs=1e-10)
    assert zone_state(2, -3) is None
    assert -3 not in transmission_matrix(2, 2, [-3, -2]).entries
    assert -2 in transmission_matrix(2, 2, [-3, -2]).entries
    v01 = transmission_matrix(0, 1, range(-2, 5))
    v10 = transmission_matrix(1, 0, range(-2, 5))
    assert sorted(v01.entries) == [0, 1, 2, 3, 4]
    for m in v01.entries:
        assert v01.entries[m] == pytest.approx(v10.entries[m].conjugate(), abs=1e-10)
    assert v01.rows()[0][:3] == (0, 1, 0)


def test_zone_operator_matrix_validation():
    with pytest.raises(ValueError):
        ZoneOperatorMatrix(0, 0, {0: 1j})
    with pytest.raises(ValueError):
        ZoneOperatorMatrix(0, 0, {0: math.inf})
    with pytest.raises(ValueError):
        ZoneOperatorMatrix(-1, 0)
    with pytest.raises(ValueError):
        ZoneOperatorMatrix(0, 0, potential="yukawa")


def test_fluctuation():
    assert fluctuation(0, 0, 0) == pytest.approx(math.pi, rel=1e-12)
    assert fluctuation(2, 0, -1) is None
    assert fluctuation(0, 1, 0) == pytest.approx(math.pi / 4, rel=1e-12)


@pytest.mark.parametrize("a,b,m", [(0, 1, 0), (1, 0, 0), (1, 2, -1)])
def test_fluctuation_matches_composed_kernel(a, b, m):
    assert fluctuation_composed_kernel(a, b, m) == pytest.approx(fluctuation(a, b, m), abs=1e-7)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 6))
def test_fluctuation_non_negative(a, b, m):
    val = fluctuation(a, b, m)
    if min(a, b) + m < 0:
        assert val is None
    else:
        assert val >= 0


def test_divergence_report_structure():
    rep = trace_divergence_report(0, 20_000, 0.1)
    assert 0.99 <= rep["stirling_ratio"] <= 1.01
    # sum E_m grows like 2 Q sqrt(lam) sqrt(M)
    assert rep["sum_ratio_sqrtM"] == pytest.approx(1.0, abs=0.02)
    assert rep["sum_ratio_model"] == pytest.approx(SQRT_PI * rep["sum_ratio_sqrtM"], rel=1e-12)
    # E_m^2 ~ 1/m: each doubling adds about ln 2
    assert rep["square_sum_doubling_gap"] == pytest.approx(math.log(2), rel=1e-3)
    # the block ratio of the convergent sum approaches 2^{-eps/2} < 1
    assert rep["condensation_ratio"] == pytest.approx(rep["condensation_limit"], rel=1e-4)
    assert rep["condensation_ratio"] < 1
    with pytest.raises(ValueError):
        trace_divergence_report(0, 50)
    with pytest.raises(ValueError):
        trace_divergence_report(1, 1000)


def test_divergence_report_scaling():
    base = trace_divergence_report(0, 1000)
    scaled = trace_divergence_report(0, 1000, lam=4.0, Q=3.0)
    assert scaled["sum_E"] == pytest.approx(6 * base["sum_E"], rel=1e-13)
    assert scaled["stirling_ratio"] == pytest.approx(base["stirling_ratio"], rel=1e-13)


def test_log_potential_examples():
    assert log_potential_closed_form(0) == pytest.approx(-0.5772156649015329 / 2, rel=1e-14)
    rows = log_potential_diag(10)
    assert rows[10][2] == pytest.approx(1.1758762945333607, rel=1e-13)
    assert rows[10][1] == pytest.approx(rows[10][2], abs=1e-10)
    vals = [q for _, q, _ in log_potential_diag(100)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(0.5 * math.log(100), abs=0.01)


def test_log_potential_matrix_element_matches_closed_form():
    val, _ = coulomb_matrix_element((4, 0), (4, 0), potential="log2d")
    assert val == pytest.approx(log_potential_closed_form(4), abs=1e-10)


def test_bethe_velocity():
    assert bethe_velocity(1, 1) == 1.0
    assert bethe_velocity(4, 1) == 2.0
    for l in range(1, 8):
        for lam in (Fraction(1), Fraction(1, 3), Fraction(5, 2)):
            assert bethe_velocity_squared_exact(l, lam) == l * lam
    with pytest.raises(ValueError):
        bethe_velocity(0)


def test_energy_gap_identity_and_moment_ratios():
    assert coulomb_diag_fock_exact(0) - coulomb_diag_fock_exact(1) == coulomb_diag_fock_exact(1)
    assert all(fock_energy_gap_identity(m) for m in range(1, 60))
    for m in range(1, 11):
        ratio = radial_moment_ratio_exact(m, Fraction(7, 3))
        assert ratio == Fraction(2 * m - 1, 2 * m)
        assert coulomb_diag_fock_exact(m) / coulomb_diag_fock_exact(m - 1) == ratio


@pytest.mark.parametrize("m", [1, 4, 9])
def test_moment_ratio_by_quadrature(m):
    def moment(n):
        return integrate_adaptive(lambda r: r**n * math.exp(-r * r), 0, math.inf, 1e-14, rel_tol=1e-14).value

    num = moment(2 * m) / moment(2 * m - 2)
    den = moment(2 * m + 1) / moment(2 * m - 1)
    assert num / den == pytest.approx((2 * m - 1) / (2 * m), rel=1e-12)
