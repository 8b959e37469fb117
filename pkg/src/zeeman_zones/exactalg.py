"""Exact polynomial algebra in (z, zbar) over the Gaussian rationals.

Polynomials stand for functions P(z, zbar) e^{-lambda |z|^2 / 2}; the Landau
operator is applied either through its conjugated form on P alone or, as an
independent oracle, by carrying the Gaussian factor through every derivative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping

__all__ = [
    "GaussianRational",
    "ExactPoly",
    "ModelParams",
    "as_fraction",
    "format_rational",
    "apply_box_conjugated",
    "apply_box_oracle",
    "gaussian_moment",
    "inner_product",
    "gram_schmidt_zone",
    "magnetic_basis",
]


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions, "p/q" strings or decimal strings exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, slots=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return cls(as_fraction(x.real), as_fraction(x.imag))
        return cls(as_fraction(x), Fraction(0))

    def __add__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.of(other))

    def __rsub__(self, other):
        return GaussianRational.of(other) - self

    def __mul__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.of(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        n = self * o.conjugate()
        return GaussianRational(n.re / d, n.im / d)

    def __rtruediv__(self, other):
        return GaussianRational.of(other) / self

    def __eq__(self, other):
        try:
            o = GaussianRational.of(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"

    def to_json(self) -> list:
        return [format_rational(self.re), format_rational(self.im)]



@dataclass(frozen=True)
class ExactPoly:
    """Finite sum  sum c_ij z^i zbar^j  with Gaussian-rational coefficients."""

    terms: Mapping[tuple[int, int], GaussianRational] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), c in dict(self.terms).items():
            if i < 0 or j < 0:
                raise ValueError("exponents must be non-negative")
            c = GaussianRational.of(c)
            if c:
                clean[(int(i), int(j))] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    # construction -------------------------------------------------------
    @classmethod
    def monomial(cls, i: int, j: int, coeff=1) -> "ExactPoly":
        return cls({(i, j): GaussianRational.of(coeff)})

    @classmethod
    def constant(cls, c) -> "ExactPoly":
        return cls.monomial(0, 0, c)

    @classmethod
    def zero(cls) -> "ExactPoly":
        return cls({})

    # ring operations ----------------------------------------------------
    def __add__(self, other: "ExactPoly") -> "ExactPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, GaussianRational()) + c
        return ExactPoly(out)

    def __neg__(self):
        return ExactPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "ExactPoly":
        if not isinstance(other, ExactPoly):
            return self.scale(other)
        out: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, GaussianRational()) + c1 * c2
        return ExactPoly(out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "ExactPoly":
        c = GaussianRational.of(c)
        return ExactPoly({k: v * c for k, v in self.terms.items()})

    def d_dz(self) -> "ExactPoly":
        return ExactPoly({(i - 1, j): c * i for (i, j), c in self.terms.items() if i > 0})

    def d_dzbar(self) -> "ExactPoly":
        return ExactPoly({(i, j - 1): c * j for (i, j), c in self.terms.items() if j > 0})

    def shift(self, di: int, dj: int) -> "ExactPoly":
        """Multiply by z^di zbar^dj."""
        return ExactPoly({(i + di, j + dj): c for (i, j), c in self.terms.items()})

    def conjugate(self) -> "ExactPoly":
        """Complex conjugate function: swaps the roles of z and zbar."""
        return ExactPoly({(j, i): c.conjugate() for (i, j), c in self.terms.items()})

    # inspection ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, ExactPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(i + j for i, j in self.terms)

    def coeff(self, i: int, j: int) -> GaussianRational:
        return self.terms.get((i, j), GaussianRational())

    def ratio_to(self, other: "ExactPoly"):
        """Scalar c with self == c * other, or None if not proportional."""
        if not other:
            return None
        if set(self.terms) != set(other.terms):
            return None
        key = next(iter(other.terms))
        c = self.terms[key] / other.terms[key]
        return c if other.scale(c) == self else None

    def evaluate(self, z: complex) -> complex:
        zb = z.conjugate()
        return sum(complex(c) * z**i * zb**j for (i, j), c in self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "ExactPoly(0)"
        parts = []
        for (i, j), c in self.terms.items():
            mono = "".join(s for s in (
                "" if i == 0 else ("z" if i == 1 else f"z^{i}"),
                "" if j == 0 else ("zb" if j == 1 else f"zb^{j}"),
            ))
            parts.append(f"{c!r}{('*' + mono) if mono else ''}")
        return "ExactPoly(" + " + ".join(parts) + ")"

    def to_json(self) -> dict:
        return {"terms": [[i, j, *c.to_json()] for (i, j), c in self.terms.items()]}

    @classmethod
    def from_json(cls, data: dict) -> "ExactPoly":
        return cls({(int(i), int(j)): GaussianRational(Fraction(re), Fraction(im))
                    for i, j, re, im in data["terms"]})


@dataclass(frozen=True)
class ModelParams:
    """Magnetic/Coulomb configuration of one invariant subspace.

    lam is the spectral parameter (pi |Z_gamma|), kappa the particle count
    k/2, Q the Coulomb strength.  orientation +1 selects the operator whose
    Fock zone is holomorphic, -1 its mirror image.
    """

    lam: Fraction = Fraction(1)
    kappa: int = 1
    Q: float = 1.0
    orientation: int = 1
    include_field_term: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lam", as_fraction(self.lam))
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if int(self.kappa) != self.kappa or self.kappa < 1:
            raise ValueError("kappa must be an integer >= 1")
        if not self.Q >= 0:
            raise ValueError("Q must be non-negative")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    @property
    def lam_float(self) -> float:
        return float(self.lam)


def apply_box_conjugated(P: ExactPoly, params: ModelParams) -> ExactPoly:
    """Q with  Box_lambda(P e^{-lam|z|^2/2}) = Q e^{-lam|z|^2/2}  (kappa = 1).

    Orientation +1:  Q = 4 P_{z zbar} - 4 lam z P_z - (2 lam [+ 4 lam^2]) P;
    orientation -1 exchanges z and zbar in the first-order term.
    """
    if params.kappa != 1:
        raise ValueError("the symbolic operator is defined for kappa = 1 only")
    lam = params.lam
    const = 2 * lam + (4 * lam * lam if params.include_field_term else 0)
    lap = P.d_dz().d_dzbar().scale(4)
    if params.orientation == 1:
        first = P.d_dz().shift(1, 0)
    else:
        first = P.d_dzbar().shift(0, 1)
    return lap - first.scale(4 * lam) - P.scale(const)


@dataclass(frozen=True)
class _GaussTimesPoly:
    """poly * exp(c z zbar) with exact rational c."""

    poly: ExactPoly
    c: Fraction

    def d_dz(self):
        return _GaussTimesPoly(self.poly.d_dz() + self.poly.shift(0, 1).scale(self.c), self.c)

    def d_dzbar(self):
        return _GaussTimesPoly(self.poly.d_dzbar() + self.poly.shift(1, 0).scale(self.c), self.c)

    def mul_poly(self, q: ExactPoly):
        return _GaussTimesPoly(self.poly * q, self.c)

    def scale(self, k):
        return _GaussTimesPoly(self.poly.scale(k), self.c)

    def __add__(self, other):
        if other.c != self.c:
            raise ValueError("Gaussian exponents differ")
        return _GaussTimesPoly(self.poly + other.poly, self.c)


def apply_box_oracle(P: ExactPoly, params: ModelParams) -> ExactPoly:
    """Independent evaluation of Box_lambda on P e^{-lam|z|^2/2}.

    Applies Laplacian 4 d_z d_zbar, the rotation generator
    D = i(z d_z - zbar d_zbar) with weight +-2 lam i, and the potential
    -4 lam^2 (1 + |z|^2/4) to the product function, then drops the Gaussian.
    """
    if params.kappa != 1:
        raise ValueError("the symbolic operator is defined for kappa = 1 only")
    lam = params.lam
    f = _GaussTimesPoly(P, -lam / 2)
    i_unit = GaussianRational(Fraction(0), Fraction(1))
    z = ExactPoly.monomial(1, 0)
    zb = ExactPoly.monomial(0, 1)

    laplacian = f.d_dz().d_dzbar().scale(4)
    rot = (f.d_dz().mul_poly(z) + f.d_dzbar().mul_poly(zb).scale(-1)).scale(i_unit)
    angular = rot.scale(i_unit * (2 * lam * params.orientation))
    potential_poly = ExactPoly.monomial(1, 1, -lam * lam)
    if params.include_field_term:
        potential_poly = potential_poly + ExactPoly.constant(-4 * lam * lam)
    potential = f.mul_poly(potential_poly)
    return (laplacian + angular + potential).poly


def gaussian_moment(i: int, j: int, lam) -> Fraction:
    """m with  int_C z^i zbar^j e^{-lam|z|^2} dA = m * pi."""
    lam = as_fraction(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if i != j:
        return Fraction(0)
    return Fraction(factorial(i)) / lam ** (i + 1)


def inner_product(P: ExactPoly, R: ExactPoly, lam) -> GaussianRational:
    """<P e^{-lam r^2/2}, R e^{-lam r^2/2}> in units of pi (linear in P)."""
    lam = as_fraction(lam)
    total = GaussianRational()
    # conj(z^k zbar^l) = z^l zbar^k, so the integrand monomial is z^{i+l} zbar^{j+k}
    for (i, j), c1 in P.terms.items():
        for (k, l), c2 in R.terms.items():
            if i + l == j + k:
                total = total + c1 * c2.conjugate() * gaussian_moment(i + l, j + k, lam)
    return total


def magnetic_basis(m: int, count: int) -> list[ExactPoly]:
    """First ``count`` monomials of the magnetic subspace M_m, in increasing
    antiholomorphic degree."""
    if m >= 0:
        return [ExactPoly.monomial(m + n, n) for n in range(count)]
    return [ExactPoly.monomial(n, n - m) for n in range(count)]


def _gram_schmidt(basis: Iterable[ExactPoly], lam) -> list[ExactPoly]:
    out: list[ExactPoly] = []
    norms: list[GaussianRational] = []
    for b in basis:
        v = b
        for u, nu in zip(out, norms):
            v = v - u.scale(inner_product(b, u, lam) / nu)
        nv = inner_product(v, v, lam)
        if not nv:
            raise ArithmeticError("Gram-Schmidt pivot vanished")
        out.append(v)
        norms.append(nv)
    return out


def gram_schmidt_zone(a: int, j_max: int, lam) -> list[ExactPoly]:
    """Zone-``a`` members with holomorphic degree p = 0..j_max.

    Within each magnetic subspace M_{p-a} the monomials are orthogonalised
    in increasing antiholomorphic degree; the member of zone a is the
    output whose leading monomial is z^p zbar^a.  Outputs are not
    normalised (leading coefficient 1).
    """
    if a < 0 or j_max < 0:
        raise ValueError("a and j_max must be non-negative")
    lam = as_fraction(lam)
    out = []
    for p in range(j_max + 1):
        m = p - a
        count = a + 1 if m >= 0 else p + 1
        out.append(_gram_schmidt(magnetic_basis(m, count), lam)[-1])
    return out
