"""Zonal Coulomb operators, their spectra and the associated diagnostics.

A zone a meets the magnetic subspace M_m in the single state (p, q) =
(a + m, a), which is absent when a + m < 0.  A radial potential therefore
acts on zone eigenstates through one number per m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional, Union

import numpy as np

from .exactalg import ExactPoly, ModelParams, as_fraction, inner_product
from .kernels import point_spread
from .quadrature import gauss_legendre, integrate_adaptive, polar_quadrature
from .special import central_binomial_ratio_exact, digamma, log_gamma_ratio_G
from .zones import EigenState, eigenfunction_values, radial_profile

__all__ = [
    "ZoneOperatorMatrix",
    "zone_state",
    "coulomb_diag_fock",
    "coulomb_diag_fock_exact",
    "coulomb_matrix_element",
    "transmission_matrix",
    "fluctuation",
    "fluctuation_composed_kernel",
    "trace_divergence_report",
    "log_potential_diag",
    "log_potential_closed_form",
    "bethe_velocity",
    "bethe_velocity_squared_exact",
    "fock_energy_gap_identity",
    "radial_moment_ratio_exact",
]

Potential = Literal["coulomb3d", "log2d"]
_POTENTIALS = ("coulomb3d", "log2d")


@dataclass(frozen=True)
class ZoneOperatorMatrix:
    """V^(a,b): one entry per magnetic number m where both zones meet M_m."""

    a: int
    b: int
    entries: dict = field(default_factory=dict)
    potential: str = "coulomb3d"
    abs_err: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("zone indices must be non-negative")
        if self.potential not in _POTENTIALS:
            raise ValueError(f"unknown potential {self.potential!r}")
        for m, v in self.entries.items():
            if not np.isfinite(complex(v)):
                raise ValueError(f"entry at m={m} is not finite")
            if self.potential == "coulomb3d" and complex(v).imag != 0:
                raise ValueError("coulomb3d entries must be real")

    def rows(self):
        """(a, b, m, re, im, abs_err) in increasing m."""
        out = []
        for m in sorted(self.entries):
            v = complex(self.entries[m])
            out.append((self.a, self.b, m, v.real, v.imag, self.abs_err.get(m, 0.0)))
        return out


def zone_state(a: int, m: int) -> Optional[tuple[int, int]]:
    """(p, q) of the zone-a member of M_m, or None when the intersection is empty."""
    if a < 0:
        raise ValueError("zone index must be non-negative")
    p = a + m
    return (p, a) if p >= 0 else None


def coulomb_diag_fock_exact(m: int) -> Fraction:
    """(2m)! / (2^{2m} (m!)^2), the rational part of the Fock-zone eigenvalue."""
    return central_binomial_ratio_exact(m)


def coulomb_diag_fock(m: int, lam=1.0, Q: float = 1.0) -> float:
    """E_m = Q sqrt(pi lam) (2m)!/(2^{2m} (m!)^2) on the Fock zone."""
    if m < 0:
        raise ValueError("m must be non-negative")
    lam = float(lam)
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if m <= 30:
        g = float(coulomb_diag_fock_exact(m))
    else:
        lg, _ = log_gamma_ratio_G(m)
        g = math.exp(lg)
    return Q * math.sqrt(math.pi * lam) * g


def _potential_fn(potential: str, Q: float):
    if potential == "coulomb3d":
        return lambda r: Q / r
    if potential == "log2d":
        return lambda r: Q * np.log(r)
    raise ValueError(f"unknown potential {potential!r}")


def _pq(state) -> tuple[int, int]:
    if isinstance(state, EigenState):
        return state.qn.p, state.qn.q
    p, q = state
    return int(p), int(q)


def _radial_scale(p1, q1, p2, q2, lam):
    # radius beyond which both profiles are negligible
    top = max(p1, q1, p2, q2)
    return (math.sqrt(2 * top + 1) + 9.0) / math.sqrt(lam)


def coulomb_matrix_element(state1, state2, params: Optional[ModelParams] = None,
                           potential: Potential = "coulomb3d", method: str = "radial",
                           tol: float = 1e-12) -> tuple[complex, float]:
    """<phi_1, V phi_2> = int conj(phi_1) V phi_2 dA over unit-normalised states.

    ``method="radial"`` returns an exact 0 for different magnetic numbers and
    otherwise integrates 2 pi int R_1 R_2 V(r) r dr adaptively.
    ``method="polar"`` is the independent full 2D quadrature oracle.
    Returns (value, error estimate).
    """
    params = params or ModelParams()
    lam = params.lam_float
    p1, q1 = _pq(state1)
    p2, q2 = _pq(state2)
    V = _potential_fn(potential, params.Q)
    if method == "radial":
        if p1 - q1 != p2 - q2:
            return 0.0, 0.0

        def f(r):
            return 2.0 * math.pi * r * V(r) * radial_profile(p1, q1, r, lam) * radial_profile(p2, q2, r, lam)

        peak = math.sqrt(max(p1, p2, 1) / lam)
        res = integrate_adaptive(f, 0.0, math.inf, tol, rel_tol=1e-14, vectorized=True,
                                 breakpoints=(0.5 * peak, peak, 2.0 * peak))
        return float(res.value), res.abs_error_estimate
    if method == "polar":
        orient = params.orientation
        radius = _radial_scale(p1, q1, p2, q2, lam)

        def g(z):
            return (np.conj(eigenfunction_values(p1, q1, z, lam, orient)) * V(np.abs(z))
                    * eigenfunction_values(p2, q2, z, lam, orient))

        val = polar_quadrature(g, radius, n_r=400, n_theta=2 * (abs(p1 - q1) + abs(p2 - q2)) + 64,
                               r_panels=20)
        return val, 0.0
    raise ValueError(f"unknown method {method!r}")


def transmission_matrix(a: int, b: int, m_range, params: Optional[ModelParams] = None,
                        potential: Potential = "coulomb3d", method: str = "radial") -> ZoneOperatorMatrix:
    """V^(a,b) with entry <phi_m^(b), V phi_m^(a)> for each m whose intersections exist."""
    params = params or ModelParams()
    entries, errs = {}, {}
    for m in m_range:
        sa, sb = zone_state(a, m), zone_state(b, m)
        if sa is None or sb is None:
            continue
        val, err = coulomb_matrix_element(sb, sa, params, potential, method)
        entries[m] = complex(val).real if potential in _POTENTIALS else val
        errs[m] = err
    return ZoneOperatorMatrix(a, b, entries, potential, errs)


def fluctuation(a: int, b: int, m: int, params: Optional[ModelParams] = None,
                potential: Potential = "coulomb3d") -> Optional[float]:
    """Eigenvalue |V^(a,b)_m|^2 of V^(b,a) V^(a,b) on the zone-a state at m."""
    mat = transmission_matrix(a, b, [m], params, potential)
    if m not in mat.entries:
        return None
    return abs(mat.entries[m]) ** 2


def fluctuation_composed_kernel(a: int, b: int, m: int, params: Optional[ModelParams] = None,
                                n_v: int = 80, n_u: int = 240, n_theta: int = 96) -> float:
    """Oracle for the fluctuation through the composed kernel.

    g(v) = int delta^(b)(v, u) V(u) phi^(a)(u) du is the zone-b image of
    V phi^(a); the fluctuation eigenvalue is ||g||^2.  Both integrals are
    done by fixed 2D rules (no use of the selection rule).  The image lies
    in M_m, so |g| is radial and the outer integral is one-dimensional.
    """
    params = params or ModelParams()
    if params.kappa != 1:
        raise ValueError("composed-kernel oracle is implemented for kappa = 1")
    sa = zone_state(a, m)
    if sa is None or zone_state(b, m) is None:
        raise ValueError("zones do not meet this magnetic subspace")
    lam = params.lam_float
    V = _potential_fn("coulomb3d", params.Q)
    radius = (math.sqrt(2 * (a + b + abs(m)) + 1) + 9.0) / math.sqrt(lam)
    # inner rule in polar coordinates: r dr dtheta, r cancels 1/r singularity
    edges = np.linspace(0.0, radius, 13)
    ur, uw = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = gauss_legendre(max(2, n_u // 12), lo, hi)
        ur.append(x)
        uw.append(w)
    ur, uw = np.concatenate(ur), np.concatenate(uw)
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    u = ur[:, None] * np.exp(1j * theta)[None, :]
    weights = (uw * ur)[:, None] * (2.0 * np.pi / n_theta)
    src = V(np.abs(u)) * eigenfunction_values(*sa, u, lam, params.orientation) * weights

    vr, vw = gauss_legendre(n_v, 0.0, radius)
    total = 0.0
    for r, w in zip(vr, vw):
        ker = point_spread(b, params, r + 0j, u).value
        g = np.sum(ker * src)
        total += 2.0 * math.pi * r * w * abs(g) ** 2
    return float(total)


def _log_g_array(M: int) -> np.ndarray:
    # ln G_m for m = 0..M via G_m = G_{m-1} (1 - 1/(2m))
    j = np.arange(1, M + 1, dtype=float)
    return np.concatenate([[0.0], np.cumsum(np.log1p(-0.5 / j))])


def trace_divergence_report(a: int = 0, M_max: int = 10_000, epsilon: float = 0.1,
                            lam: float = 1.0, Q: float = 1.0) -> dict:
    """Partial sums of E_m, E_m^2, E_m^{2+eps} for the Fock-zone Coulomb operator.

    Diagnostics:
      * ``stirling_ratio``: E_m sqrt(pi m) / (Q sqrt(pi lam)) at m = min(5000, M_max);
      * ``sum_ratio_model``: sum_{m<=M} E_m / (2 Q sqrt(lam) sqrt(M/pi));
      * ``sum_ratio_sqrtM``: the same sum over 2 Q sqrt(lam) sqrt(M), the
        leading asymptotic of sum E_m;
      * ``square_sum_doubling_gap``: sum_{M<m<=2M} E_m^2, about Q^2 lam ln 2;
      * ``last_increment``: E_M^{2+eps}, the size of the last added term;
      * ``doubling_tail``: sum_{M<m<=2M} E_m^{2+eps};
      * ``condensation_ratio``: ratio of consecutive dyadic block sums of
        E_m^{2+eps}, which tends to 2^{-eps/2} < 1 (convergent series).
    """
    if a != 0:
        raise ValueError("trace diagnostics use the Fock-zone closed form (a = 0)")
    if M_max < 100:
        raise ValueError("M_max must be >= 100")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    lg = _log_g_array(2 * M_max)
    log_e = math.log(Q * math.sqrt(math.pi * lam)) + lg
    E = np.exp(log_e)
    s = 2.0 + epsilon
    pow_e = np.exp(s * log_e)
    sq_e = np.exp(2.0 * log_e)
    M = M_max
    m_st = min(5000, M)
    s1 = math.fsum(E[: M + 1])
    blocks = [math.fsum(pow_e[2**j: 2 ** (j + 1)]) for j in range(int(math.log2(2 * M)))]
    return {
        "a": a,
        "M_max": M,
        "epsilon": epsilon,
        "lambda": lam,
        "Q": Q,
        "sum_E": s1,
        "sum_E2": math.fsum(sq_e[: M + 1]),
        "sum_E_pow": math.fsum(pow_e[: M + 1]),
        "stirling_m": m_st,
        "stirling_ratio": float(E[m_st] * math.sqrt(math.pi * m_st) / (Q * math.sqrt(math.pi * lam))),
        "sum_ratio_model": s1 / (2.0 * Q * math.sqrt(lam) * math.sqrt(M / math.pi)),
        "sum_ratio_sqrtM": s1 / (2.0 * Q * math.sqrt(lam) * math.sqrt(M)),
        "square_sum_doubling_gap": math.fsum(sq_e[M + 1: 2 * M + 1]),
        "last_increment": float(pow_e[M]),
        "doubling_tail": math.fsum(pow_e[M + 1: 2 * M + 1]),
        "condensation_ratio": blocks[-1] / blocks[-2],
        "condensation_limit": 2.0 ** (-epsilon / 2.0),
    }


def log_potential_closed_form(m: int) -> float:
    """<ln r>_m = psi(m+1)/2 for the normalised Fock state (lambda = 1)."""
    return 0.5 * digamma(m + 1)


def log_potential_diag(m_max: int, tol: float = 1e-12) -> list[tuple[int, float, float]]:
    """(m, quadrature, closed form) for <ln r>_m, m = 0..m_max.

    The expectation is
        int r^{2m+1} ln r e^{-r^2} dr / int r^{2m+1} e^{-r^2} dr,
    integrated with the normalised weight 2 r^{2m+1} e^{-r^2} / m!.
    """
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    out = []
    for m in range(m_max + 1):
        lg = math.lgamma(m + 1)

        def f(r, m=m, lg=lg):
            r = np.asarray(r, dtype=float)
            with np.errstate(divide="ignore"):
                lr = np.log(r)
            w = np.exp((2 * m + 1) * lr - r * r - lg + math.log(2.0))
            return np.where(r > 0, w * lr, 0.0)

        peak = math.sqrt(m + 0.5)
        res = integrate_adaptive(f, 0.0, math.inf, tol, vectorized=True, breakpoints=(1.0, peak))
        out.append((m, float(res.value), log_potential_closed_form(m)))
    return out


def bethe_velocity_squared_exact(l: int, lam=1) -> Fraction:
    """|d_z z^l|^2 / |z^l|^2 in the Gaussian-weighted norm, exactly."""
    if l < 1:
        raise ValueError("l must be >= 1")
    lam = as_fraction(lam)
    zl = ExactPoly.monomial(l, 0)
    d = zl.d_dz()
    return inner_product(d, d, lam).re / inner_product(zl, zl, lam).re


def bethe_velocity(l: int, lam=1.0) -> float:
    """Velocity matrix element sqrt(l lam) from lowering z^l."""
    if l < 1:
        raise ValueError("l must be >= 1")
    lam_f = float(lam)
    if not lam_f > 0:
        raise ValueError("lambda must be positive")
    return math.sqrt(l * lam_f)


def fock_energy_gap_identity(m: int) -> bool:
    """E_{m-1} - E_m == E_m / (2m - 1), checked on the exact rational parts."""
    if m < 1:
        raise ValueError("m must be >= 1")
    g1, g0 = coulomb_diag_fock_exact(m - 1), coulomb_diag_fock_exact(m)
    return g1 - g0 == g0 / (2 * m - 1)


def _moment_ratio(n: int, lam: Fraction) -> Fraction:
    # I(n)/I(n-2) with I(n) = int_0^inf r^n e^{-lam r^2} dr (integration by parts)
    return Fraction(n - 1) / (2 * lam)


def radial_moment_ratio_exact(m: int, lam=1) -> Fraction:
    """E_m / E_{m-1} from Gaussian radial moments.

    E_m is proportional to I(2m)/I(2m+1), so the ratio is
    [I(2m)/I(2m-2)] / [I(2m+1)/I(2m-1)] = (2m-1)/(2m).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    lam = as_fraction(lam)
    return _moment_ratio(2 * m, lam) / _moment_ratio(2 * m + 1, lam)
