"""Quantum numbers, explicit eigenfunctions, the radial ODE and zone spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Optional, Sequence

import numpy as np

from .exactalg import (
    ExactPoly,
    ModelParams,
    apply_box_conjugated,
    as_fraction,
    format_rational,
    inner_product,
)
from .special import laguerre_array

__all__ = [
    "QuantumNumbers",
    "qn_convert",
    "ito_poly",
    "laguerre_eigenfunction",
    "EigenState",
    "eigenstate",
    "radial_ode_apply",
    "laguerre_operator",
    "radial_eigen_solve",
    "eigenvalue",
    "landau_energy",
    "SpectralLine",
    "enumerate_zone_spectrum",
    "eigenfunction_values",
    "radial_profile",
]


@dataclass(frozen=True)
class QuantumNumbers:
    p: int
    q: int
    tau: int
    m: int
    l: int
    n: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p < 0 or q < 0:
            raise ValueError("p and q must be non-negative")
        if (self.tau, self.m, self.l, self.n) != (p + q, p - q, abs(p - q), min(p, q)):
            raise ValueError(f"inconsistent quantum numbers {self}")

    @classmethod
    def from_pq(cls, p: int, q: int) -> "QuantumNumbers":
        return cls(p, q, p + q, p - q, abs(p - q), min(p, q))

    @classmethod
    def from_radial(cls, n: int, l: int, m_sign: int = 1) -> "QuantumNumbers":
        if n < 0 or l < 0:
            raise ValueError("n and l must be non-negative")
        if m_sign not in (1, -1):
            raise ValueError("m_sign must be +1 or -1")
        if m_sign > 0:
            return cls.from_pq(n + l, n)
        return cls.from_pq(n, n + l)

    @property
    def zone(self) -> int:
        return self.q

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "tau": self.tau, "m": self.m, "l": self.l, "n": self.n}


def qn_convert(*, p: Optional[int] = None, q: Optional[int] = None, n: Optional[int] = None,
               l: Optional[int] = None, m_sign: Optional[int] = None) -> QuantumNumbers:
    """Populate all quantum numbers from (p, q) or from (n, l, sign of m).

    When both forms are given they must agree.
    """
    out = None
    if p is not None or q is not None:
        if p is None or q is None:
            raise ValueError("both p and q are required")
        out = QuantumNumbers.from_pq(p, q)
    if n is not None or l is not None:
        if n is None or l is None:
            raise ValueError("both n and l are required")
        sign = 1 if m_sign is None else m_sign
        radial = QuantumNumbers.from_radial(n, l, sign)
        if out is not None and out != radial:
            raise ValueError(f"(p, q) = ({p}, {q}) is inconsistent with (n, l, sign) = ({n}, {l}, {sign})")
        out = radial
    if out is None:
        raise ValueError("no quantum numbers given")
    return out


def ito_poly(p: int, q: int, lam=1) -> ExactPoly:
    """Complex Hermite polynomial with weight lambda:

        sum_s (-1)^s p! q! / (s! (p-s)! (q-s)!) lam^{-s} z^{p-s} zbar^{q-s}.
    """
    if p < 0 or q < 0:
        raise ValueError("p and q must be non-negative")
    lam = as_fraction(lam)
    terms = {}
    for s in range(min(p, q) + 1):
        c = Fraction((-1) ** s * factorial(p) * factorial(q),
                     factorial(s) * factorial(p - s) * factorial(q - s)) / lam**s
        terms[(p - s, q - s)] = c
    return ExactPoly(terms)


def laguerre_eigenfunction(n: int, l: int, m_sign: int = 1, lam=1) -> ExactPoly:
    """(-1)^n n! lam^{-n} L_n^(l)(lam z zbar) z^l  (zbar^l when m_sign < 0)."""
    if n < 0 or l < 0:
        raise ValueError("n and l must be non-negative")
    lam = as_fraction(lam)
    terms = {}
    for i in range(n + 1):
        c = Fraction((-1) ** n * factorial(n) * comb(n + l, n - i) * (-1) ** i, factorial(i))
        c *= lam ** (i - n)
        key = (i + l, i) if m_sign > 0 else (i, i + l)
        terms[key] = c
    return ExactPoly(terms)


@dataclass(frozen=True)
class EigenState:
    qn: QuantumNumbers
    poly: ExactPoly
    norm_sq: Fraction
    eigenvalue: Fraction
    lam: Fraction

    def check(self, params: Optional[ModelParams] = None) -> bool:
        params = params or ModelParams(lam=self.lam)
        return apply_box_conjugated(self.poly, params) == self.poly.scale(self.eigenvalue)

    def to_json(self) -> dict:
        return {
            "qn": self.qn.to_json(),
            "poly": self.poly.to_json(),
            "norm_sq_over_pi": format_rational(self.norm_sq),
            "eigenvalue": format_rational(self.eigenvalue),
            "lambda": format_rational(self.lam),
        }


def eigenstate(p: int, q: int, params: Optional[ModelParams] = None) -> EigenState:
    params = params or ModelParams()
    poly = ito_poly(p, q, params.lam)
    if params.orientation < 0:
        poly = poly.conjugate()
    norm = inner_product(poly, poly, params.lam)
    qn = QuantumNumbers.from_pq(p, q)
    return EigenState(qn, poly, norm.re, eigenvalue(p, params), params.lam)


# --- radial ODE -------------------------------------------------------------
# Univariate exact polynomials are tuples of Fractions, index = power of t.


def _trim(u):
    u = list(u)
    while u and u[-1] == 0:
        u.pop()
    return tuple(Fraction(c) for c in u)


def _deriv(u):
    return tuple(Fraction(i) * u[i] for i in range(1, len(u)))


def _add(*polys):
    n = max((len(p) for p in polys), default=0)
    return _trim(sum(p[i] if i < len(p) else 0 for p in polys) for i in range(n))


def _scale(u, c):
    return tuple(Fraction(c) * x for x in u)


def _times_t(u):
    return (Fraction(0),) + tuple(u) if u else ()


def laguerre_operator(u: Sequence, alpha) -> tuple:
    """Lambda_alpha u = t u'' + (alpha + 1 - t) u'."""
    u = _trim(u)
    d1 = _deriv(u)
    d2 = _deriv(d1)
    alpha = as_fraction(alpha)
    return _add(_times_t(d2), _scale(d1, alpha + 1), _scale(_times_t(d1), -1))


def radial_ode_apply(u: Sequence, l_tilde: int, p_tilde, k: int) -> tuple:
    """4 t u'' + (2k + 4 l~ - 4t) u' - (4 p~ + 3k) u, exactly."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    u = _trim(u)
    d1 = _deriv(u)
    d2 = _deriv(d1)
    p_tilde = as_fraction(p_tilde)
    return _add(
        _scale(_times_t(d2), 4),
        _scale(d1, 2 * k + 4 * l_tilde),
        _scale(_times_t(d1), -4),
        _scale(u, -(4 * p_tilde + 3 * k)),
    )


def radial_eigen_solve(n: int, l_tilde: int, k: int, p_tilde=0) -> tuple[tuple, Fraction]:
    """Monic degree-n polynomial eigenfunction of the radial operator.

    Coefficients come from Lambda_alpha u = -n u with alpha = k/2 + l~ - 1:
    matching t^j gives c_j (n - j) = -(j+1)(j+1+alpha) c_{j+1}.
    Returns (coefficients, eigenvalue -(4n + 4p~ + 3k)).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    alpha = Fraction(k, 2) + l_tilde - 1
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    for j in range(n - 1, -1, -1):
        c[j] = -(j + 1) * (j + 1 + alpha) * c[j + 1] / (n - j)
    return tuple(c), -(4 * n + 4 * as_fraction(p_tilde) + 3 * k)


# --- spectrum ---------------------------------------------------------------


def eigenvalue(p: int, params: ModelParams):
    """-((4p + 2 kappa) lam + [4 kappa lam^2]) of Box on holomorphic degree p."""
    if p < 0:
        raise ValueError("p must be non-negative")
    lam, kappa = params.lam, params.kappa
    val = (4 * p + 2 * kappa) * lam
    if params.include_field_term:
        val += 4 * kappa * lam * lam
    return -val


def landau_energy(p: int, params: ModelParams):
    """(2p + kappa) lam, the level of H = -Box/2 without the field term."""
    if p < 0:
        raise ValueError("p must be non-negative")
    return (2 * p + params.kappa) * params.lam


@dataclass(frozen=True)
class SpectralLine:
    energy: Fraction
    multiplicity: int
    p: int

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")

    def to_json(self) -> dict:
        return {"p": self.p, "energy": format_rational(self.energy), "multiplicity": self.multiplicity}


def zone_multiplicity(a: int, p: int, kappa: int) -> int:
    return comb(a + kappa - 1, a) * comb(p + kappa - 1, p)


def enumerate_zone_spectrum(a: int, params: ModelParams, p_max: int) -> list[SpectralLine]:
    if a < 0 or p_max < 0:
        raise ValueError("a and p_max must be non-negative")
    return [SpectralLine(landau_energy(p, params), zone_multiplicity(a, p, params.kappa), p)
            for p in range(p_max + 1)]


# --- floating-point eigenfunctions -----------------------------------------


def radial_profile(p: int, q: int, r, lam: float):
    """Real radial factor R with phi_pq(r e^{i theta}) = R(r) e^{i (p-q) theta}.

    phi_pq is the unit-normalised eigenfunction
    sqrt(lam/pi) H_pq(w) e^{-|w|^2/2} / sqrt(p! q!),  w = sqrt(lam) z.
    """
    r = np.asarray(r, dtype=float)
    lam = float(lam)
    n, l = min(p, q), abs(p - q)
    x = lam * r * r
    with np.errstate(divide="ignore"):
        logr = np.log(np.sqrt(lam) * r)
    log_pref = 0.5 * math.log(lam / math.pi) + 0.5 * (math.lgamma(n + 1) - math.lgamma(n + l + 1))
    if l == 0:
        mag = np.exp(log_pref - 0.5 * x)
    else:
        mag = np.where(r > 0, np.exp(log_pref + l * logr - 0.5 * x), 0.0)
    return (-1) ** n * mag * laguerre_array(n, l, x)


def eigenfunction_values(p: int, q: int, z, lam: float, orientation: int = 1):
    """Unit-normalised phi_pq at complex points z (numpy broadcasting)."""
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    phase = np.exp(1j * (p - q) * np.angle(z))
    val = radial_profile(p, q, r, lam) * phase
    return val if orientation > 0 else np.conj(val)
