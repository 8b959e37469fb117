"""Special functions: log-Gamma, digamma, Laguerre polynomials, the central
binomial Gamma ratio and its Stirling surrogates.

Everything here is double precision except the ``*_exact`` twins, which work
in :class:`fractions.Fraction` arithmetic.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

__all__ = [
    "DomainError",
    "StirlingVariant",
    "log_gamma",
    "digamma",
    "laguerre",
    "laguerre_sum",
    "laguerre_exact",
    "laguerre_recurrence_exact",
    "laguerre_array",
    "central_binomial_ratio_exact",
    "gamma_ratio_G",
    "log_gamma_ratio_G",
    "stirling_S",
    "stirling_factorial",
]

EULER_GAMMA = 0.57721566490153286061
LN2 = math.log(2.0)
LN_PI = math.log(math.pi)


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


class StirlingVariant(enum.Enum):
    """Family n! ~ sqrt((2n + c) pi) n^n e^-n, selected by the constant c."""

    PLAIN = 0.0
    THIRD = 1.0 / 3.0
    INV_PI = 1.0 / math.pi

    @property
    def c(self) -> float:
        return self.value


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"log_gamma requires finite x > 0, got {x!r}")
    return math.lgamma(x)


# Bernoulli numbers B_2..B_14 as used by the digamma asymptotic series.
_DIGAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def digamma(x: float) -> float:
    """psi(x) = d/dx ln Gamma(x), x > 0.

    Upward recurrence to x >= 10, then the Bernoulli asymptotic series.
    """
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"digamma requires finite x > 0, got {x!r}")
    shift = 0.0
    while x < 10.0:
        shift -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for c in _DIGAMMA_COEFFS:
        series += c * power
        power *= inv2
    return shift + math.log(x) - 0.5 / x - series


# --- double-double helpers for the scalar Laguerre recurrence ---------------

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a, b):
    p = a * b
    t = _SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    e += al + bl
    return _two_sum(s, e)


def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e += ah * bl + al * bh
    return _two_sum(p, e)


def _dd_div_d(ah, al, b):
    q1 = ah / b
    p, e = _two_prod(q1, b)
    r = ((ah - p) - e + al) / b
    return _two_sum(q1, r)


def laguerre(n: int, alpha: float, t: float) -> float:
    """Generalised Laguerre polynomial L_n^(alpha)(t) by three-term recurrence.

    The recurrence runs in double-double arithmetic so the result stays
    accurate next to roots, where plain doubles lose relative precision.
    """
    if n < 0:
        raise DomainError("laguerre requires n >= 0")
    if n == 0:
        return 1.0
    alpha = float(alpha)
    t = float(t)
    # L_1 = 1 + alpha - t
    l0 = (1.0, 0.0)
    s = _two_sum(1.0, alpha)
    l1 = _dd_add(s[0], s[1], -t, 0.0)
    for k in range(1, n):
        a = _dd_add(*_two_sum(2.0 * k + 1.0, alpha), -t, 0.0)
        b = _two_sum(k, alpha)
        x = _dd_mul(a[0], a[1], l1[0], l1[1])
        y = _dd_mul(b[0], b[1], l0[0], l0[1])
        num = _dd_add(x[0], x[1], -y[0], -y[1])
        l0, l1 = l1, _dd_div_d(num[0], num[1], k + 1.0)
    return l1[0] + l1[1]


def laguerre_sum(n: int, alpha: float, t: float) -> float:
    """L_n^(alpha)(t) from the explicit binomial sum.

    The sum is accumulated exactly in rationals (``alpha`` and ``t`` are
    converted without rounding) and rounded once at the end.
    """
    if n < 0:
        raise DomainError("laguerre requires n >= 0")
    return float(laguerre_exact(n, Fraction(alpha), Fraction(t)))


def _gen_binom(x: Fraction, k: int) -> Fraction:
    # C(x, k) for rational x and integer k >= 0
    out = Fraction(1)
    for i in range(k):
        out = out * (x - i) / (i + 1)
    return out


def laguerre_exact(n: int, alpha, t) -> Fraction:
    """Exact explicit sum  sum_i C(n+alpha, n-i) (-t)^i / i!."""
    if n < 0:
        raise DomainError("laguerre requires n >= 0")
    alpha = Fraction(alpha)
    t = Fraction(t)
    if alpha.denominator == 1 and alpha >= 0:
        a = int(alpha)
        coeffs = [Fraction(comb(n + a, n - i), factorial(i)) for i in range(n + 1)]
    else:
        coeffs = [_gen_binom(n + alpha, n - i) / factorial(i) for i in range(n + 1)]
    total = Fraction(0)
    power = Fraction(1)
    for c in coeffs:
        total += c * power
        power *= -t
    return total


def laguerre_recurrence_exact(n: int, alpha, t) -> Fraction:
    """Exact three-term recurrence, the rational twin of :func:`laguerre`."""
    if n < 0:
        raise DomainError("laguerre requires n >= 0")
    alpha = Fraction(alpha)
    t = Fraction(t)
    if n == 0:
        return Fraction(1)
    l0, l1 = Fraction(1), 1 + alpha - t
    for k in range(1, n):
        l0, l1 = l1, ((2 * k + 1 + alpha - t) * l1 - (k + alpha) * l0) / (k + 1)
    return l1


def laguerre_array(n: int, alpha: float, t) -> np.ndarray:
    """Vectorised L_n^(alpha)(t) over a numpy array (plain double recurrence).

    Used by the eigenfunction evaluators, where n is the zone index and stays
    small.
    """
    t = np.asarray(t, dtype=float)
    if n < 0:
        raise DomainError("laguerre requires n >= 0")
    l0 = np.ones_like(t)
    if n == 0:
        return l0
    l1 = 1.0 + alpha - t
    for k in range(1, n):
        l0, l1 = l1, ((2 * k + 1 + alpha - t) * l1 - (k + alpha) * l0) / (k + 1)
    return l1


# --- Gamma ratio G_k = Gamma(2k+1) / (4^k Gamma(k+1)^2) = Gamma(k+1/2)/(sqrt(pi) k!)


def central_binomial_ratio_exact(k: int) -> Fraction:
    """(2k)! / (2^{2k} (k!)^2) as an exact rational."""
    if k < 0:
        raise DomainError("k must be >= 0")
    return Fraction(comb(2 * k, k), 4**k)


@lru_cache(maxsize=None)
def _bernoulli_numbers(nmax: int) -> tuple:
    b = [Fraction(0)] * (nmax + 1)
    b[0] = Fraction(1)
    for m in range(1, nmax + 1):
        b[m] = -sum(comb(m + 1, j) * b[j] for j in range(m)) / (m + 1)
    return tuple(b)


def _bernoulli_poly(n: int, x: Fraction) -> Fraction:
    b = _bernoulli_numbers(n)
    return sum(comb(n, k) * b[k] * x ** (n - k) for k in range(n + 1))


@lru_cache(maxsize=None)
def _ratio_series_coeffs(nterms: int = 14) -> tuple:
    # ln(Gamma(k+1/2)/Gamma(k+1)) = -1/2 ln k + sum_n c_n k^-n
    half, one = Fraction(1, 2), Fraction(1)
    out = []
    for n in range(1, nterms + 1):
        diff = _bernoulli_poly(n + 1, half) - _bernoulli_poly(n + 1, one)
        out.append(float((-1) ** (n + 1) * diff / (n * (n + 1))))
    return tuple(out)


_SERIES_THRESHOLD = 40.0


def log_gamma_ratio_G(k: float) -> tuple[float, float]:
    """(ln G_k, d/dk ln G_k) for k >= 0."""
    k = float(k)
    if not k >= 0.0 or math.isinf(k):
        raise DomainError(f"gamma ratio requires finite k >= 0, got {k!r}")
    if k < _SERIES_THRESHOLD:
        lg = math.lgamma(k + 0.5) - math.lgamma(k + 1.0) - 0.5 * LN_PI
        return lg, digamma(k + 0.5) - digamma(k + 1.0)
    inv = 1.0 / k
    val = 0.0
    der = 0.0
    power = inv
    for n, c in enumerate(_ratio_series_coeffs(), start=1):
        val += c * power
        der -= n * c * power * inv
        power *= inv
    return -0.5 * math.log(k) - 0.5 * LN_PI + val, -0.5 * inv + der


def gamma_ratio_G(k: float) -> tuple[float, float]:
    """G_k = Gamma(2k+1)/(2^{2k} Gamma(k+1)^2) and its k-derivative.

    dG_k = G_k (2 psi(2k+1) - 2 psi(k+1) - 2 ln 2), evaluated through the
    equivalent duplication form psi(k+1/2) - psi(k+1).
    """
    lg, dlg = log_gamma_ratio_G(k)
    g = math.exp(lg)
    return g, g * dlg


def stirling_S(k: float, variant: StirlingVariant = StirlingVariant.INV_PI) -> tuple[float, float]:
    """Stirling surrogate S_k for sqrt(pi) G_k and its exact derivative.

    S_k = (4k + c)^{1/2} / (2k + c); the PLAIN variant (c = 0) is 1/sqrt(k)
    and is undefined at k = 0.
    """
    k = float(k)
    if not k >= 0.0 or math.isinf(k):
        raise DomainError(f"stirling_S requires finite k >= 0, got {k!r}")
    c = variant.c
    if c == 0.0:
        if k == 0.0:
            raise DomainError("plain Stirling surrogate diverges at k = 0")
        s = 1.0 / math.sqrt(k)
        return s, -0.5 * s / k
    root = math.sqrt(4.0 * k + c)
    den = 2.0 * k + c
    return root / den, -4.0 * k / (root * den * den)


def stirling_factorial(n: float, variant: StirlingVariant = StirlingVariant.PLAIN) -> float:
    """sqrt((2n + c) pi) n^n e^-n, with 0^0 = 1."""
    n = float(n)
    if n < 0:
        raise DomainError("stirling_factorial requires n >= 0")
    pow_term = 1.0 if n == 0 else math.exp(n * math.log(n) - n)
    return math.sqrt((2.0 * n + variant.c) * math.pi) * pow_term
