"""Cyclic algebras C(a) = E<u> with u*alpha = theta(alpha)*u and u^n = a.

Elements are written ``sum_i c_i u^i`` with coefficients ``c_i`` in E. The
module also provides the regular representation over E, the Wedderburn
division test and local invariants of quaternion symbol algebras over Q.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import sympy

from .numfield import (
    CyclicExtension,
    FieldElement,
    FieldError,
    Number,
    element_from_json,
    element_to_json,
    format_element,
    galois_apply,
    norm,
    parse_field,
)

INFINITY = "inf"
Place = Union[int, str]

DEFAULT_NORM_BUDGET = 64
DEFAULT_SEARCH_BOUND = 6


@dataclass(frozen=True, repr=False)
class CyclicAlgebra:
    extension: CyclicExtension
    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        if self.a == 0:
            raise ValueError("the parameter a must be nonzero")

    @property
    def degree(self) -> int:
        return self.extension.degree

    @property
    def dimension(self) -> int:
        return self.degree**2

    def element(self, coeffs: Iterable[FieldElement | Number]) -> AlgebraElement:
        E = self.extension
        cs = []
        for c in coeffs:
            cs.append(c if isinstance(c, FieldElement) else E.element((c,)))
        if len(cs) > self.degree:
            raise ValueError("too many coefficients")
        cs.extend([E.zero] * (self.degree - len(cs)))
        return AlgebraElement(self, tuple(cs))

    def embed(self, alpha: FieldElement | Number) -> AlgebraElement:
        return self.element([alpha])

    @property
    def one(self) -> AlgebraElement:
        return self.embed(1)

    @property
    def zero(self) -> AlgebraElement:
        return self.element([])

    @property
    def u(self) -> AlgebraElement:
        if self.degree == 1:
            return self.embed(self.a)
        return self.element([0, 1])

    def spec(self) -> str:
        return f"C({_fmt(self.a)};{self.extension.spec()})"

    def __repr__(self) -> str:
        return f"CyclicAlgebra({self.spec()!r})"

    def __str__(self) -> str:
        return self.spec()


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


_ALGEBRA_RE = re.compile(r"^\s*C\s*\(\s*([^;]+?)\s*;\s*(.+)\)\s*$")


def parse_algebra(spec: str) -> CyclicAlgebra:
    """Parse ``"C(a;<field spec>)"``."""
    m = _ALGEBRA_RE.match(spec)
    if not m:
        raise ValueError(f"unrecognised algebra specification {spec!r}")
    try:
        a = Fraction(m.group(1))
    except ValueError as exc:
        raise ValueError(f"bad parameter in {spec!r}") from exc
    return make_cyclic_algebra(parse_field(m.group(2)), a)


def make_cyclic_algebra(E: CyclicExtension, a: Number) -> CyclicAlgebra:
    return CyclicAlgebra(E, Fraction(a))


@dataclass(frozen=True)
class AlgebraElement:
    parent: CyclicAlgebra
    coeffs: tuple[FieldElement, ...]

    def _coerce(self, other) -> AlgebraElement:
        if isinstance(other, AlgebraElement):
            if other.parent != self.parent:
                raise ValueError("elements belong to different algebras")
            return other
        if isinstance(other, (FieldElement, int, Fraction)):
            return self.parent.embed(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraElement(self.parent, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.parent, tuple(-x for x in self.coeffs))

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
        return alg_mul(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return alg_mul(other, self)

    def __pow__(self, k: int) -> AlgebraElement:
        if k < 0:
            return alg_inverse(self) ** (-k)
        acc = self.parent.one
        for _ in range(k):
            acc = acc * self
        return acc

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, FieldElement)):
            other = self.parent.embed(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.parent == other.parent and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.parent, self.coeffs))

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("u" if i == 1 else f"u^{i}")
            body = format_element(c)
            terms.append(body if not mono else f"({body})*{mono}")
        return " + ".join(terms) or "0"

    def to_json(self) -> list[list[str]]:
        return [element_to_json(c) for c in self.coeffs]


def alg_mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Product under u^i c = theta^i(c) u^i and u^i u^j = a^{(i+j) div n} u^{(i+j) mod n}."""
    A = x.parent
    if y.parent != A:
        raise ValueError("elements belong to different algebras")
    n = A.degree
    out = [A.extension.zero] * n
    for i, ci in enumerate(x.coeffs):
        if not ci:
            continue
        for j, dj in enumerate(y.coeffs):
            if not dj:
                continue
            term = ci * galois_apply(dj, i)
            wrap, k = divmod(i + j, n)
            if wrap:
                term = term * (A.a**wrap)
            out[k] = out[k] + term
    return AlgebraElement(A, tuple(out))


# -- matrices over E ---------------------------------------------------------------

Matrix = list[list[FieldElement]]


def mat_identity(E: CyclicExtension, n: int) -> Matrix:
    return [[E.one if i == j else E.zero for j in range(n)] for i in range(n)]


def mat_mul(X: Matrix, Y: Matrix) -> Matrix:
    E = X[0][0].parent
    n, m, k = len(X), len(Y), len(Y[0])
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = E.zero
            for t in range(m):
                if X[i][t] and Y[t][j]:
                    acc = acc + X[i][t] * Y[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_add(X: Matrix, Y: Matrix) -> Matrix:
    return [[x + y for x, y in zip(rx, ry)] for rx, ry in zip(X, Y)]


def mat_scale(X: Matrix, c: FieldElement) -> Matrix:
    return [[c * x for x in row] for row in X]


def mat_inverse(X: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises ZeroDivisionError if X is singular."""
    E = X[0][0].parent
    n = len(X)
    work = [list(row) + ident for row, ident in zip(X, mat_identity(E, n))]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        scale = work[col][col].inverse()
        work[col] = [scale * v for v in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                factor = work[r][col]
                work[r] = [v - factor * w for v, w in zip(work[r], work[col])]
    return [row[n:] for row in work]


def mat_det(X: Matrix) -> FieldElement:
    E = X[0][0].parent
    n = len(X)
    work = [list(row) for row in X]
    det = E.one
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            return E.zero
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        det = det * work[col][col]
        inv_p = work[col][col].inverse()
        for r in range(col + 1, n):
            if work[r][col]:
                factor = work[r][col] * inv_p
                work[r] = [v - factor * w for v, w in zip(work[r], work[col])]
    return det


def matrix_rep(x: AlgebraElement) -> Matrix:
    """Faithful n x n representation over E of ``sum c_i u^i``.

    alpha -> diag(theta^{-i}(alpha)) and u -> the shift with 1 at (i+1, i) and
    a at (0, n-1), so entry (r, s) is theta^{-r}(c_{r-s mod n}), times a above
    the diagonal.
    """
    A = x.parent
    E = A.extension
    n = A.degree
    a = E.element((A.a,))
    out = []
    for r in range(n):
        row = []
        for s in range(n):
            c = x.coeffs[(r - s) % n]
            entry = galois_apply(c, -r) if c else E.zero
            row.append(entry * a if r < s and entry else entry)
        out.append(row)
    return out


def from_matrix(A: CyclicAlgebra, M: Matrix) -> AlgebraElement:
    """Inverse of :func:`matrix_rep` on its image (reads the first column)."""
    return A.element(galois_apply(M[i][0], i) for i in range(A.degree))


def reduced_norm(x: AlgebraElement) -> Fraction:
    det = mat_det(matrix_rep(x))
    if not det.is_rational():
        raise ArithmeticError("reduced norm is not rational")
    return det.coords[0]


def quaternion_conjugate(x: AlgebraElement) -> AlgebraElement:
    """x-bar = theta(c0) - c1*u for degree-2 algebras."""
    if x.parent.degree != 2:
        raise ValueError("quaternion conjugate needs a degree-2 algebra")
    c0, c1 = x.coeffs
    return x.parent.element([galois_apply(c0), -c1])


def alg_inverse(x: AlgebraElement) -> AlgebraElement:
    if x.parent.degree == 2:
        nrd = reduced_norm(x)
        if nrd == 0:
            raise ZeroDivisionError(f"{x} is a zero divisor")
        return quaternion_conjugate(x) * Fraction(1, nrd)
    return from_matrix(x.parent, mat_inverse(matrix_rep(x)))


# -- Hilbert symbols and Hasse invariants -------------------------------------------


def _square_class_integer(q: Fraction) -> int:
    """An integer in the same square class as the nonzero rational q."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("Hilbert symbol arguments must be nonzero")
    return q.numerator * q.denominator


def _split_off(x: int, p: int) -> tuple[int, int]:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def normalize_place(place) -> Place:
    if isinstance(place, str):
        if place.strip().lower() in ("inf", "infinity", "oo", "∞", "real"):
            return INFINITY
        place = int(place)
    if place == math.inf:
        return INFINITY
    place = int(place)
    if not sympy.isprime(place):
        raise ValueError(f"{place} is not a prime or infinity")
    return place


def hilbert_symbol(a: Number, b: Number, place) -> int:
    """(a, b)_v in {+1, -1} for nonzero rationals a, b."""
    place = normalize_place(place)
    x = _square_class_integer(Fraction(a))
    y = _square_class_integer(Fraction(b))
    if place == INFINITY:
        return -1 if x < 0 and y < 0 else 1
    p = place
    alpha, u = _split_off(x, p)
    beta, v = _split_off(y, p)
    if p == 2:
        def eps(t):
            return ((t % 4) - 1) // 2  # 0 for t = 1 mod 4, 1 for t = 3 mod 4

        def omega(t):
            return 0 if t % 8 in (1, 7) else 1

        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    lu = sympy.legendre_symbol(u % p, p)
    lv = sympy.legendre_symbol(v % p, p)
    return sign * lu**beta * lv**alpha


def candidate_places(*values: Number) -> list[Place]:
    """Places where a symbol of the given rationals can be nontrivial."""
    primes = {2}
    for q in values:
        q = Fraction(q)
        for part in (q.numerator, q.denominator):
            primes.update(sympy.primefactors(abs(part)))
    return sorted(primes) + [INFINITY]


@dataclass(frozen=True)
class HasseProfile:
    places: tuple[tuple[Place, Fraction], ...]

    @property
    def ramified_places(self) -> list[Place]:
        return [v for v, inv in self.places if inv]

    def as_dict(self) -> dict[Place, Fraction]:
        return dict(self.places)

    def invariant_sum(self) -> Fraction:
        return sum((inv for _, inv in self.places), Fraction(0)) % 1

    def to_json(self) -> dict:
        return {
            "ramified_places": self.ramified_places,
            "invariants": {str(v): _fmt(inv) for v, inv in self.places},
        }

    @classmethod
    def from_json(cls, data: dict) -> HasseProfile:
        items = []
        for key, inv in data["invariants"].items():
            place = INFINITY if key == INFINITY else int(key)
            items.append((place, Fraction(inv)))
        return cls(_sorted_places(items))


def _sorted_places(items) -> tuple[tuple[Place, Fraction], ...]:
    return tuple(sorted(items, key=lambda item: (item[0] == INFINITY, 0 if item[0] == INFINITY else item[0])))


def symbol_profile(a: Number, b: Number) -> HasseProfile:
    items = []
    for v in candidate_places(a, b):
        if hilbert_symbol(a, b, v) == -1:
            items.append((v, Fraction(1, 2)))
    profile = HasseProfile(_sorted_places(items))
    if profile.invariant_sum() != 0:
        raise ArithmeticError("Hasse invariants violate reciprocity")
    return profile


def hasse_profile(A: CyclicAlgebra) -> HasseProfile:
    """Local invariants of the quaternion algebra (d, a) over Q."""
    d = A.extension.d
    if A.degree != 2 or d is None:
        raise ValueError("Hasse profiles are implemented for quaternion algebras C(a; Q(sqrt,d)) only")
    return symbol_profile(d, A.a)


# -- Wedderburn norm criterion -------------------------------------------------------


@dataclass(frozen=True)
class DivisionVerdict:
    status: str  # "division" | "not_division" | "unknown"
    witness_k: int | None = None
    witness_gamma: FieldElement | None = None
    search_bound: int | None = None

    def to_json(self) -> dict:
        witness = None
        if self.witness_gamma is not None:
            witness = {
                "k": self.witness_k,
                "gamma": element_to_json(self.witness_gamma),
                "gamma_text": format_element(self.witness_gamma),
            }
        return {"status": self.status, "witness": witness, "search_bound": self.search_bound}

    @classmethod
    def from_json(cls, data: dict, E: CyclicExtension) -> DivisionVerdict:
        w = data.get("witness")
        gamma = element_from_json(E, w["gamma"]) if w else None
        return cls(data["status"], w["k"] if w else None, gamma, data.get("search_bound"))


def _rational_square_root(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _rational_root(q: Fraction, n: int) -> Fraction | None:
    if q <= 0 and n % 2 == 0:
        return None if q < 0 else Fraction(0)
    sign = -1 if q < 0 else 1
    roots = []
    for part in (abs(q.numerator), q.denominator):
        r = sympy.integer_nthroot(part, n)
        if not r[1]:
            return None
        roots.append(int(r[0]))
    return sign * Fraction(roots[0], roots[1])


def quadratic_norm_witness(E: CyclicExtension, a: Fraction, budget: int) -> FieldElement | None:
    """gamma = (X + Y sqrt d)/Z with N(gamma) = a, scanning Z, then |Y|, up to budget."""
    d = E.d
    for Z in range(1, budget + 1):
        for Y in range(0, budget + 1):
            X = _rational_square_root(a * Z * Z + d * Y * Y)
            if X is not None and X.denominator == 1:
                return E.element((X / Z, Fraction(Y, Z)))
    return None


def _box_search(A: CyclicAlgebra, bound: int) -> tuple[int, FieldElement] | None:
    E, n, a = A.extension, A.degree, A.a
    for coords in itertools.product(range(-bound, bound + 1), repeat=n):
        if not any(coords):
            continue
        gamma = E.element(coords)
        nm = norm(gamma)
        for k in range(1, n):
            z = _rational_root(nm / a**k, n)
            if z is not None and z != 0:
                return k, gamma * Fraction(1, z)
    return None


def is_division(A: CyclicAlgebra, bound: int | None = None) -> DivisionVerdict:
    """Wedderburn's criterion: division iff no a^k (0 < k < n) is a norm from E.

    Exact for quadratic fields via Hilbert symbols; a bounded search for a
    norm witness otherwise.
    """
    if A.degree == 1:
        return DivisionVerdict("division")
    E = A.extension
    if A.a == 1:
        return DivisionVerdict("not_division", 1, E.one, bound)
    if E.d is not None:
        budget = DEFAULT_NORM_BUDGET if bound is None else bound
        if hasse_profile(A).ramified_places:
            return DivisionVerdict("division", search_bound=budget)
        gamma = quadratic_norm_witness(E, A.a, budget)
        if gamma is None:
            return DivisionVerdict("not_division", search_bound=budget)
        return DivisionVerdict("not_division", 1, gamma, budget)
    bound = DEFAULT_SEARCH_BOUND if bound is None else bound
    hit = _box_search(A, bound)
    if hit is None:
        return DivisionVerdict("unknown", search_bound=bound)
    return DivisionVerdict("not_division", hit[0], hit[1], bound)
