"""Symbolic calculus on the noncommutative torus VU = e^{2 pi i theta} UV.

Monomials carry their scalar factor as two exact exponents: a rational
multiple of pi (kept mod 2) and an integer multiple of 2*pi*theta, where
theta is a formal symbol.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .numfield import (
    DEFAULT_PELL_BOUND,
    CyclicExtension,
    FieldError,
    fundamental_unit,
    norm,
    trace,
)


@dataclass(frozen=True)
class WeylMonomial:
    """e^{i pi phase_pi} e^{2 pi i theta phase_theta} U^exp_u V^exp_v."""

    phase_pi: Fraction = Fraction(0)
    phase_theta: int = 0
    exp_u: int = 0
    exp_v: int = 0

    def __post_init__(self):
        object.__setattr__(self, "phase_pi", Fraction(self.phase_pi) % 2)

    def __mul__(self, other: WeylMonomial) -> WeylMonomial:
        return weyl_mul(self, other)


U = WeylMonomial(exp_u=1)
V = WeylMonomial(exp_v=1)


def weyl_mul(x: WeylMonomial, y: WeylMonomial) -> WeylMonomial:
    # V^b U^c = e^{2 pi i theta bc} U^c V^b
    return WeylMonomial(
        phase_pi=x.phase_pi + y.phase_pi,
        phase_theta=x.phase_theta + y.phase_theta + x.exp_v * y.exp_u,
        exp_u=x.exp_u + y.exp_u,
        exp_v=x.exp_v + y.exp_v,
    )


@dataclass(frozen=True)
class IntMatrix2:
    a: int
    b: int
    c: int
    d: int

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __mul__(self, other: IntMatrix2) -> IntMatrix2:
        return IntMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    @classmethod
    def parse(cls, text: str) -> IntMatrix2:
        parts = [int(p) for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError("matrix needs four comma-separated integers a,b,c,d")
        return cls(*parts)


# generator of the copy of Z inside Out(A_theta)
SHIFT = IntMatrix2(1, 1, 0, 1)


def substituted_generators(M: IntMatrix2) -> tuple[WeylMonomial, WeylMonomial]:
    """U' = e^{pi i ac} U^a V^c and V' = e^{pi i bd} U^b V^d."""
    U1 = WeylMonomial(Fraction(M.a * M.c), 0, M.a, M.c)
    V1 = WeylMonomial(Fraction(M.b * M.d), 0, M.b, M.d)
    return U1, V1


def weyl_substitute(M: IntMatrix2) -> int:
    """The q with V'U' = e^{2 pi i theta q} U'V' after substituting M."""
    U1, V1 = substituted_generators(M)
    left = weyl_mul(V1, U1)
    right = weyl_mul(U1, V1)
    if (left.phase_pi, left.exp_u, left.exp_v) != (right.phase_pi, right.exp_u, right.exp_v):
        raise ArithmeticError("transformed generators differ by more than a theta phase")
    q = left.phase_theta - right.phase_theta
    if q != M.det:
        raise ArithmeticError(f"phase multiplier {q} differs from det = {M.det}")
    return q


# -- real multiplication ---------------------------------------------------------------


@dataclass(frozen=True)
class RMData:
    field: CyclicExtension
    p: int
    k: int
    matrix: IntMatrix2

    def __post_init__(self):
        M = self.matrix
        if (M.b, M.c, M.d) != (self.p, -1, 0) or M.det != self.p:
            raise ValueError("matrix must have the shape [[t, p], [-1, 0]] with determinant p")

    @property
    def t(self) -> int:
        return self.matrix.a

    def to_json(self) -> dict:
        return {"matrix": self.matrix.rows(), "det": self.matrix.det}


def unit_power_traces(E: CyclicExtension, k: int, bound: int = DEFAULT_PELL_BOUND) -> list[int]:
    """[tr(eps^0), ..., tr(eps^k)] by t_{j+1} = tr(eps) t_j - N(eps) t_{j-1}."""
    eps = fundamental_unit(E, bound)
    t1, n = int(trace(eps)), int(norm(eps))
    out = [2, t1]
    while len(out) <= k:
        out.append(t1 * out[-1] - n * out[-2])
    return out[: k + 1]


def rm_matrix(E: CyclicExtension, p: int, k: int, bound: int = DEFAULT_PELL_BOUND) -> RMData:
    if E.d is None or E.d <= 1:
        raise FieldError("rm_matrix needs a real quadratic field")
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("exponent must be positive")
    t = unit_power_traces(E, k, bound)[k]
    M = IntMatrix2(t, p, -1, 0)
    assert M.det == p
    return RMData(E, p, k, M)


@dataclass(frozen=True)
class CayleyHamiltonCheck:
    trace: int
    det: int
    residual: IntMatrix2

    @property
    def holds(self) -> bool:
        return self.residual == IntMatrix2(0, 0, 0, 0)


def rm_cayley_hamilton(r: RMData) -> CayleyHamiltonCheck:
    L = r.matrix
    L2 = L * L
    t, p = r.t, r.p
    residual = IntMatrix2(L2.a - t * L.a + p, L2.b - t * L.b, L2.c - t * L.c, L2.d - t * L.d + p)
    check = CayleyHamiltonCheck(t, p, residual)
    if not check.holds:
        raise ArithmeticError(f"L^2 - tL + pI = {residual.rows()} is not zero")
    return check


@dataclass(frozen=True)
class RMTorus:
    """The torus with real multiplication by the real quadratic field ``field``."""

    field: CyclicExtension

    def __post_init__(self):
        if self.field.d is None or self.field.d <= 1:
            raise FieldError("real multiplication needs a real quadratic field")

    def spec(self) -> str:
        return f"A_RM({self.field.spec()})"
