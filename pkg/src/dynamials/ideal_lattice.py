"""Integral ideals of quadratic rings of integers.

An ideal is held in Hermite normal form ``(a, b, c)`` meaning the lattice
``a*Z + (b + c*omega)*Z`` inside ``O_E = Z[omega]``. Everything here works on
integer coordinates with respect to the basis ``{1, omega}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable

import sympy
from sympy.ntheory import sqrt_mod

from .numfield import CyclicExtension, FieldElement, FieldError, order_basis, parse_field

Vec = tuple[int, int]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_s, old_t, old_r


def lattice_hnf(vectors: Iterable[Vec]) -> tuple[int, int, int]:
    """HNF (a, b, c) of the Z-span of integer vectors in Z^2.

    The span must have full rank.
    """
    a = 0
    b, c = 0, 0
    for x, y in vectors:
        if y == 0:
            a = gcd(a, x)
            continue
        if c == 0:
            b, c = x, y
            if c < 0:
                b, c = -b, -c
            continue
        s, t, g = _xgcd(c, y)
        # the old pivot row minus a multiple of the new one lands on the first axis
        residue = b * (y // g) - x * (c // g)
        b, c = s * b + t * x, g
        a = gcd(a, residue)
    if a == 0 or c == 0:
        raise ValueError("lattice is not of full rank")
    a = abs(a)
    return a, b % a, c


def _omega_mul(u: Vec, v: Vec, t: int, nm: int) -> Vec:
    x1, y1 = u
    x2, y2 = v
    return x1 * x2 - nm * y1 * y2, x1 * y2 + x2 * y1 + t * y1 * y2


@dataclass(frozen=True, order=False)
class QuadIdeal:
    """A nonzero integral ideal ``a*Z + (b + c*omega)*Z`` of O_E."""

    parent: CyclicExtension
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.parent.d is None:
            raise FieldError("ideals are only implemented for quadratic fields")
        a, b, c = self.a, self.b, self.c
        if not (a >= 1 and c >= 1 and 0 <= b < a and a % c == 0 and b % c == 0):
            raise ValueError(f"({a}, {b}, {c}) is not in Hermite normal form")
        for g in self.basis:
            if not self.contains(self._times_omega(g)):
                raise ValueError(f"({a}, {b}, {c}) is not closed under multiplication by omega")

    @property
    def _omega_data(self) -> tuple[int, int]:
        basis = order_basis(self.parent)
        return basis.omega_trace, basis.omega_norm

    def _times_omega(self, v: Vec) -> Vec:
        t, nm = self._omega_data
        return _omega_mul(v, (0, 1), t, nm)

    @property
    def basis(self) -> tuple[Vec, Vec]:
        return (self.a, 0), (self.b, self.c)

    @property
    def norm(self) -> int:
        return self.a * self.c

    @property
    def hnf(self) -> tuple[int, int, int]:
        return self.a, self.b, self.c

    def contains(self, v: Vec) -> bool:
        x, y = v
        if y % self.c:
            return False
        return (x - (y // self.c) * self.b) % self.a == 0

    def contains_ideal(self, other: QuadIdeal) -> bool:
        return all(self.contains(g) for g in other.basis)

    def contains_element(self, x: FieldElement) -> bool:
        u, v = order_basis(self.parent).to_omega(x)
        if u.denominator != 1 or v.denominator != 1:
            return False
        return self.contains((int(u), int(v)))

    def is_unit(self) -> bool:
        return self.norm == 1

    def conjugate(self) -> QuadIdeal:
        t, _ = self._omega_data
        # conj(b + c*omega) = (b + c*t) - c*omega
        gens = [(self.a, 0), (self.b + self.c * t, -self.c)]
        return ideal_from_lattice(self.parent, gens)

    def __mul__(self, other: QuadIdeal) -> QuadIdeal:
        return ideal_product(self, other)

    def __pow__(self, k: int) -> QuadIdeal:
        acc = unit_ideal(self.parent)
        for _ in range(k):
            acc = acc * self
        return acc

    def sort_key(self) -> tuple[int, int, int]:
        return self.a, self.b, self.c

    def label(self) -> str:
        return f"{self.a},{self.b},{self.c}"

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "field": self.parent.spec()}

    @classmethod
    def from_json(cls, data: dict) -> QuadIdeal:
        return cls(parse_field(data["field"]), int(data["a"]), int(data["b"]), int(data["c"]))

    def __str__(self) -> str:
        return f"[{self.a}, {self.b}+{self.c}w]"


def ideal_from_lattice(E: CyclicExtension, vectors: Iterable[Vec]) -> QuadIdeal:
    a, b, c = lattice_hnf(vectors)
    return QuadIdeal(E, a, b, c)


def unit_ideal(E: CyclicExtension) -> QuadIdeal:
    return QuadIdeal(E, 1, 0, 1)


def principal_ideal(E: CyclicExtension, *generators: FieldElement) -> QuadIdeal:
    """The ideal generated by integral elements of E."""
    basis = order_basis(E)
    t, nm = basis.omega_trace, basis.omega_norm
    vecs = []
    for g in generators:
        u, v = basis.to_omega(g)
        if u.denominator != 1 or v.denominator != 1:
            raise FieldError(f"{g} is not an algebraic integer")
        vec = (int(u), int(v))
        vecs.append(vec)
        vecs.append(_omega_mul(vec, (0, 1), t, nm))
    return ideal_from_lattice(E, vecs)


def ideal_product(I: QuadIdeal, J: QuadIdeal) -> QuadIdeal:
    if I.parent != J.parent:
        raise FieldError("ideals belong to different fields")
    t, nm = I._omega_data
    gens = [_omega_mul(g, h, t, nm) for g in I.basis for h in J.basis]
    return ideal_from_lattice(I.parent, gens)


# -- prime ideals ---------------------------------------------------------------


@dataclass(frozen=True)
class PrimeIdeal:
    base: QuadIdeal
    p: int
    f: int
    e: int

    @property
    def norm(self) -> int:
        return self.p**self.f

    def sort_key(self) -> tuple:
        return (self.p, self.base.sort_key())

    def to_json(self) -> dict:
        return {"ideal": self.base.to_json(), "p": self.p, "f": self.f, "e": self.e}

    @classmethod
    def from_json(cls, data: dict) -> PrimeIdeal:
        return cls(QuadIdeal.from_json(data["ideal"]), int(data["p"]), int(data["f"]), int(data["e"]))


@dataclass(frozen=True)
class Splitting:
    p: int
    type: str  # "split" | "inert" | "ramified"
    primes: tuple[PrimeIdeal, ...]


def kronecker_symbol(D: int, p: int) -> int:
    """Kronecker symbol (D/p) for a prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    return sympy.legendre_symbol(D % p, p) if D % p else 0


def _omega_roots_mod(E: CyclicExtension, p: int) -> list[int]:
    """Roots of the minimal polynomial of omega modulo p."""
    basis = order_basis(E)
    t, nm = basis.omega_trace, basis.omega_norm
    if p == 2:
        return [r for r in range(2) if (r * r - t * r + nm) % 2 == 0]
    disc = t * t - 4 * nm
    half = pow(2, -1, p)
    roots = {((t + s) * half) % p for s in sqrt_mod(disc % p, p, all_roots=True)}
    return sorted(roots)


def split_prime(E: CyclicExtension, p: int) -> Splitting:
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    symbol = kronecker_symbol(E.discriminant, p)
    if symbol == -1:
        prime = PrimeIdeal(QuadIdeal(E, p, 0, p), p, f=2, e=1)
        return Splitting(p, "inert", (prime,))
    roots = _omega_roots_mod(E, p)
    # (p, omega - r) has HNF p*Z + (-r + omega)*Z
    ideals = sorted((QuadIdeal(E, p, (-r) % p, 1) for r in roots), key=QuadIdeal.sort_key)
    if symbol == 0:
        assert len(ideals) == 1
        return Splitting(p, "ramified", (PrimeIdeal(ideals[0], p, f=1, e=2),))
    assert len(ideals) == 2
    return Splitting(p, "split", tuple(PrimeIdeal(I, p, f=1, e=1) for I in ideals))


# -- enumeration and factorization ------------------------------------------------


def _ideals_of_prime_power(E: CyclicExtension, p: int, k: int) -> list[QuadIdeal]:
    s = split_prime(E, p)
    if s.type == "inert":
        if k % 2:
            return []
        return [s.primes[0].base ** (k // 2)]
    if s.type == "ramified":
        return [s.primes[0].base ** k]
    P, Q = (q.base for q in s.primes)
    return [P**i * Q ** (k - i) for i in range(k + 1)]


def ideals_of_norm(E: CyclicExtension, m: int) -> list[QuadIdeal]:
    """All integral ideals of O_E with index m, sorted by HNF."""
    if m < 1:
        raise ValueError("m must be positive")
    choices = [_ideals_of_prime_power(E, p, k) for p, k in sorted(sympy.factorint(m).items())]
    out = []
    for combo in itertools.product(*choices):
        acc = unit_ideal(E)
        for J in combo:
            acc = acc * J
        out.append(acc)
    return sorted(out, key=QuadIdeal.sort_key)


@dataclass(frozen=True)
class IdealFactorization:
    factors: tuple[tuple[PrimeIdeal, int], ...]

    def product(self, E: CyclicExtension) -> QuadIdeal:
        acc = unit_ideal(E)
        for P, k in self.factors:
            acc = acc * P.base**k
        return acc

    def to_json(self) -> list[dict]:
        return [{"prime": P.to_json(), "exponent": k} for P, k in self.factors]

    @classmethod
    def from_json(cls, data: list[dict]) -> IdealFactorization:
        return cls(tuple((PrimeIdeal.from_json(item["prime"]), int(item["exponent"])) for item in data))


def _valuation(I: QuadIdeal, P: QuadIdeal, limit: int) -> int:
    k = 0
    power = P
    while k < limit and power.contains_ideal(I):
        k += 1
        power = power * P
    return k


def factor_ideal(I: QuadIdeal) -> IdealFactorization:
    E = I.parent
    factors: list[tuple[PrimeIdeal, int]] = []
    for p, k in sorted(sympy.factorint(I.norm).items()):
        s = split_prime(E, p)
        if s.type == "inert":
            factors.append((s.primes[0], k // 2))
        elif s.type == "ramified":
            factors.append((s.primes[0], k))
        else:
            P, Q = s.primes
            kp = _valuation(I, P.base, k)
            for prime, exp in ((P, kp), (Q, k - kp)):
                if exp:
                    factors.append((prime, exp))
    factors.sort(key=lambda item: item[0].sort_key())
    return IdealFactorization(tuple(factors))
