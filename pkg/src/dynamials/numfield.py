"""Exact arithmetic in cyclic extensions of the rationals.

Quadratic fields ``Q(sqrt(d))`` are fully supported. Higher-degree cyclic
extensions are accepted through an explicit presentation: a monic integer
minimal polynomial together with the image of the primitive element under a
generator of the Galois group.

Elements are stored as coordinate tuples of :class:`fractions.Fraction` in
the power basis ``1, x, ..., x^(n-1)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

import sympy

Number = Union[int, Fraction]

DEFAULT_PELL_BOUND = 10**6


class FieldError(ValueError):
    """Invalid field data or an illegal operation (e.g. division by zero)."""


class FundamentalUnitError(RuntimeError):
    """The unit search exceeded its coordinate bound."""


def is_squarefree(d: int) -> bool:
    if d == 0:
        return False
    return all(k == 1 for k in sympy.factorint(abs(d)).values())


def _poly_mul(f: Sequence[Fraction], g: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if not fi:
            continue
        for j, gj in enumerate(g):
            out[i + j] += fi * gj
    return out


def _poly_reduce(f: list[Fraction], modulus: Sequence[int]) -> list[Fraction]:
    """Remainder of ``f`` modulo a monic polynomial (coefficients low to high)."""
    n = len(modulus) - 1
    f = list(f)
    for top in range(len(f) - 1, n - 1, -1):
        c = f[top]
        if not c:
            continue
        shift = top - n
        for i in range(n + 1):
            f[shift + i] -= c * modulus[i]
    f = f[:n]
    f.extend([Fraction(0)] * (n - len(f)))
    return f


@dataclass(frozen=True, repr=False)
class CyclicExtension:
    """A cyclic Galois extension E/Q presented by ``Q[x]/(minpoly)``.

    ``galois_generator`` holds the power-basis coordinates of theta(x).
    ``d`` is set only for quadratic fields built by :func:`make_quadratic_field`.
    """

    degree: int
    minimal_polynomial: tuple[int, ...]
    galois_generator: tuple[Fraction, ...]
    discriminant: int | None = None
    d: int | None = None
    _orbit: tuple[tuple[Fraction, ...], ...] = field(
        default=(), init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        n = self.degree
        if n < 1 or len(self.minimal_polynomial) != n + 1 or self.minimal_polynomial[-1] != 1:
            raise FieldError("minimal polynomial must be monic of the stated degree")
        if len(self.galois_generator) != n:
            raise FieldError("Galois generator must have n power-basis coordinates")
        # theta^k(x) for k = 0..n-1, reused by every Galois application
        x = [Fraction(0)] * n
        if n > 1:
            x[1] = Fraction(1)
        orbit = [tuple(x)]
        current = tuple(x)
        for _ in range(n):
            current = tuple(self._compose(current, self.galois_generator))
            orbit.append(current)
        if n > 1:
            if orbit[n] != orbit[0]:
                raise FieldError("Galois generator does not have order dividing n")
            if any(orbit[k] == orbit[0] for k in range(1, n)):
                raise FieldError("Galois generator is not of exact order n")
            image = self._evaluate(self.minimal_polynomial, self.galois_generator)
            if any(image):
                raise FieldError("Galois generator does not map x to a root of the minimal polynomial")
        object.__setattr__(self, "_orbit", tuple(orbit[:n]))

    # -- construction helpers -------------------------------------------------

    def _evaluate(self, coeffs: Sequence[Number], at: Sequence[Fraction]) -> list[Fraction]:
        """Horner evaluation of a rational polynomial at a field element (coords)."""
        n = self.degree
        acc = [Fraction(0)] * n
        for c in reversed(coeffs):
            acc = _poly_reduce(_poly_mul(acc, at), self.minimal_polynomial)
            acc[0] += c
        return acc

    def _compose(self, f: Sequence[Fraction], at: Sequence[Fraction]) -> list[Fraction]:
        return self._evaluate(f, at)

    # -- element constructors -------------------------------------------------

    def element(self, coords: Iterable[Number]) -> FieldElement:
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) > self.degree:
            raise FieldError("too many coordinates")
        coords += (Fraction(0),) * (self.degree - len(coords))
        return FieldElement(self, coords)

    def __call__(self, *coords: Number) -> FieldElement:
        return self.element(coords)

    @property
    def zero(self) -> FieldElement:
        return self.element(())

    @property
    def one(self) -> FieldElement:
        return self.element((1,))

    @property
    def gen(self) -> FieldElement:
        """The primitive element x (sqrt(d) for quadratic fields)."""
        return self.element((0, 1)) if self.degree > 1 else self.element((0,))

    @property
    def is_quadratic(self) -> bool:
        return self.d is not None

    @property
    def omega(self) -> FieldElement:
        """Second element of the integral basis {1, omega} of a quadratic field."""
        if self.d is None:
            raise FieldError("omega is only defined for quadratic fields")
        if self.d % 4 == 1:
            return self.element((Fraction(1, 2), Fraction(1, 2)))
        return self.element((0, 1))

    def spec(self) -> str:
        if self.d is not None:
            return f"Q(sqrt,{self.d})"
        x = sympy.Symbol("x")
        poly = sympy.Poly(list(reversed(self.minimal_polynomial)), x).as_expr()
        theta = sum(sympy.Rational(c.numerator, c.denominator) * x**i
                    for i, c in enumerate(self.galois_generator))
        text = f"{sympy.sstr(poly)};{sympy.sstr(sympy.expand(theta))}"
        return "Q[x]/(" + text.replace("**", "^").replace(" ", "") + ")"

    def __str__(self) -> str:
        return self.spec()

    def __repr__(self) -> str:
        return f"CyclicExtension({self.spec()!r})"


@dataclass(frozen=True)
class FieldElement:
    parent: CyclicExtension
    coords: tuple[Fraction, ...]

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.parent != self.parent:
                raise FieldError("elements belong to different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.parent.element((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.parent, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self.parent, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self.parent.d
        if d is not None:
            # x^2 = d
            (a, b), (c, e) = self.coords, other.coords
            return FieldElement(self.parent, (a * c + d * b * e, a * e + b * c))
        product = _poly_mul(self.coords, other.coords)
        return FieldElement(self.parent, tuple(_poly_reduce(product, self.parent.minimal_polynomial)))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        return inv(self)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * inv(other)

    def __rtruediv__(self, other):
        return inv(self) * other

    def __pow__(self, k: int) -> FieldElement:
        base = self if k >= 0 else inv(self)
        acc = self.parent.one
        for bit in bin(abs(k))[2:]:
            acc = acc * acc
            if bit == "1":
                acc = acc * base
        return acc

    def __bool__(self) -> bool:
        return any(self.coords)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        if isinstance(other, FieldElement):
            return self.parent == other.parent and self.coords == other.coords
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.parent, self.coords))

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"FieldElement({self.parent.spec()}, {format_element(self)})"


# -- fields -------------------------------------------------------------------


def make_quadratic_field(d: int) -> CyclicExtension:
    """Return ``Q(sqrt(d))`` with theta the nontrivial automorphism."""
    d = int(d)
    if d in (0, 1) or not is_squarefree(d):
        raise FieldError(f"d = {d} must be a squarefree integer other than 0 and 1")
    disc = d if d % 4 == 1 else 4 * d
    return CyclicExtension(
        degree=2,
        minimal_polynomial=(-d, 0, 1),
        galois_generator=(Fraction(0), Fraction(-1)),
        discriminant=disc,
        d=d,
    )


def make_presented_field(minimal_polynomial: Sequence[int], galois_generator: Sequence[Number]) -> CyclicExtension:
    """Build a cyclic extension from (minimal polynomial, theta(x)).

    Coefficients are listed from the constant term upward. Irreducibility is
    checked with sympy; the Galois data is checked on construction.
    """
    coeffs = tuple(int(c) for c in minimal_polynomial)
    n = len(coeffs) - 1
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(coeffs)), x, domain="QQ")
    if n < 1 or not poly.is_irreducible:
        raise FieldError("minimal polynomial must be irreducible over Q")
    theta = tuple(Fraction(c) for c in galois_generator)
    theta += (Fraction(0),) * (n - len(theta))
    disc = int(sympy.discriminant(poly.as_expr(), x))
    return CyclicExtension(degree=n, minimal_polynomial=coeffs, galois_generator=theta, discriminant=disc)


_QUAD_RE = re.compile(r"^\s*Q\s*\(\s*sqrt\s*,\s*(-?\d+)\s*\)\s*$")
_PRESENTED_RE = re.compile(r"^\s*Q\s*\[\s*x\s*\]\s*/\s*\(\s*([^;]+);([^)]+)\)\s*$")


def parse_field(spec: str) -> CyclicExtension:
    """Parse ``"Q(sqrt,d)"`` or ``"Q[x]/(poly;theta)"``."""
    m = _QUAD_RE.match(spec)
    if m:
        return make_quadratic_field(int(m.group(1)))
    m = _PRESENTED_RE.match(spec)
    if not m:
        raise FieldError(f"unrecognised field specification {spec!r}")
    x = sympy.Symbol("x")
    try:
        poly = sympy.Poly(sympy.sympify(m.group(1).replace("^", "**")), x)
        theta = sympy.Poly(sympy.sympify(m.group(2).replace("^", "**")), x)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
        raise FieldError(f"cannot parse {spec!r}: {exc}") from exc
    coeffs = poly.all_coeffs()[::-1]
    if coeffs[-1] != 1 or any(not c.is_integer for c in coeffs):
        raise FieldError("minimal polynomial must be monic with integer coefficients")
    theta_coeffs = [Fraction(int(c.p), int(c.q)) for c in theta.all_coeffs()[::-1]]
    if len(theta_coeffs) >= len(coeffs):
        raise FieldError("theta must be given reduced modulo the minimal polynomial")
    return make_presented_field([int(c) for c in coeffs], theta_coeffs)


# -- Galois action, norm, trace ------------------------------------------------


def galois_apply(x: FieldElement, k: int = 1) -> FieldElement:
    """theta^k(x); k may be negative."""
    E = x.parent
    k %= E.degree
    if k == 0:
        return x
    if E.d is not None:
        return FieldElement(E, (x.coords[0], -x.coords[1]))
    image = E._orbit[k]
    return FieldElement(E, tuple(E._evaluate(x.coords, image)))


def conjugates(x: FieldElement) -> list[FieldElement]:
    return [galois_apply(x, k) for k in range(x.parent.degree)]


def norm(x: FieldElement) -> Fraction:
    acc = x.parent.one
    for c in conjugates(x):
        acc = acc * c
    if not acc.is_rational():
        raise ArithmeticError(f"norm of {x} left the base field; Galois presentation is broken")
    return acc.coords[0]


def trace(x: FieldElement) -> Fraction:
    acc = x.parent.zero
    for c in conjugates(x):
        acc = acc + c
    if not acc.is_rational():
        raise ArithmeticError(f"trace of {x} left the base field; Galois presentation is broken")
    return acc.coords[0]


def inv(x: FieldElement) -> FieldElement:
    if not x:
        raise ZeroDivisionError("inverse of zero field element")
    others = x.parent.one
    for c in conjugates(x)[1:]:
        others = others * c
    return others * Fraction(1, norm(x))


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def neg(x: FieldElement) -> FieldElement:
    return -x


def characteristic_polynomial(x: FieldElement) -> list[Fraction]:
    """Coefficients (low to high) of prod_k (T - theta^k(x))."""
    E = x.parent
    poly = [E.one]
    for c in conjugates(x):
        shifted = [E.zero] + poly
        scaled = [-c * p for p in poly] + [E.zero]
        poly = [s + t for s, t in zip(shifted, scaled)]
    out = []
    for p in poly:
        if not p.is_rational():
            raise ArithmeticError("characteristic polynomial is not rational")
        out.append(p.coords[0])
    return out


def is_integral(x: FieldElement) -> bool:
    return all(c.denominator == 1 for c in characteristic_polynomial(x))


# -- quadratic orders -----------------------------------------------------------


@dataclass(frozen=True)
class QuadOrderBasis:
    """The integral basis {1, omega} of a quadratic field."""

    d: int

    @property
    def omega_shift(self) -> bool:
        return self.d % 4 == 1

    @property
    def omega_trace(self) -> int:
        return 1 if self.omega_shift else 0

    @property
    def omega_norm(self) -> int:
        return (1 - self.d) // 4 if self.omega_shift else -self.d

    def to_omega(self, x: FieldElement) -> tuple[Fraction, Fraction]:
        """Coordinates (u, v) with x = u + v*omega."""
        r, s = x.coords
        if self.omega_shift:
            return r - s, 2 * s
        return r, s

    def from_omega(self, E: CyclicExtension, u: Number, v: Number) -> FieldElement:
        if self.omega_shift:
            return E.element((Fraction(u) + Fraction(v, 2), Fraction(v, 2)))
        return E.element((u, v))

    def is_integral(self, x: FieldElement) -> bool:
        return all(c.denominator == 1 for c in self.to_omega(x))


def order_basis(E: CyclicExtension) -> QuadOrderBasis:
    if E.d is None:
        raise FieldError("ring of integers is only implemented for quadratic fields")
    return QuadOrderBasis(E.d)


def fundamental_unit(E: CyclicExtension, bound: int = DEFAULT_PELL_BOUND) -> FieldElement:
    """Smallest unit eps > 1 of the ring of integers of a real quadratic field.

    Walks the continued fraction of omega (or sqrt(d)) and returns the first
    convergent giving a unit. Raises :class:`FundamentalUnitError` once the
    denominator passes ``bound``.
    """
    if E.d is None or E.d <= 1:
        raise FieldError("fundamental_unit needs a real quadratic field")
    d = E.d
    basis = order_basis(E)
    # expand xi = (P + sqrt(d)) / Q with Q | d - P^2
    if basis.omega_shift:
        P, Q = 1, 2
    else:
        P, Q = 0, 1
    r = math.isqrt(d)
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while True:
        a = (P + r) // Q
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        if q > bound:
            raise FundamentalUnitError(f"no unit of Q(sqrt({d})) with coordinates below {bound}")
        # candidate unit u + v*omega built from the convergent p/q of omega
        if basis.omega_shift:
            X, Y = 2 * p - q, q
            if X > 0 and abs(X * X - d * Y * Y) == 4:
                return E.element((Fraction(X, 2), Fraction(Y, 2)))
        elif abs(p * p - d * q * q) == 1:
            return E.element((p, q))
        P = a * Q - P
        Q = (d - P * P) // Q


# -- formatting -------------------------------------------------------------------


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_element(x: FieldElement) -> str:
    """Human-readable form, e.g. ``2+i``, ``1/2+1/2*sqrt5``, ``x^2-2``."""
    E = x.parent
    if E.d == -1:
        gen = "i"
    elif E.d is not None:
        gen = f"sqrt{E.d}" if E.d > 0 else f"sqrt({E.d})"
    else:
        gen = "x"
    terms = []
    for k, c in enumerate(x.coords):
        if not c:
            continue
        if k == 0:
            terms.append(_fmt_frac(c))
            continue
        mono = gen if k == 1 else f"{gen}^{k}"
        if c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{_fmt_frac(c)}*{mono}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def element_to_json(x: FieldElement) -> list[str]:
    return [_fmt_frac(c) for c in x.coords]


def element_from_json(E: CyclicExtension, coords: Sequence[str]) -> FieldElement:
    return E.element(Fraction(c) for c in coords)
