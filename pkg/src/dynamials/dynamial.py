"""The dynamial semigroup D_m = R x_alpha mZ and crossed-product rewriting.

Only the index m enters the semigroup arithmetic: D_m * D_n = D_{mn}. The
ring R is carried along as a :class:`RingDescriptor` so that products of
dynamials over different rings are rejected.

Crossed products are handled syntactically. :func:`normalize_crossed_product`
rewrites ``Cross(Algebra(C(a)), mZ)`` into ``Cross(Cross(Ideal(I), Gal(n)), Z)``,
one normal form per ideal I of norm m.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import sympy

from .cyclic_algebra import CyclicAlgebra, parse_algebra
from .ideal_lattice import IdealFactorization, QuadIdeal, factor_ideal, ideals_of_norm
from .numfield import CyclicExtension, parse_field
from .rm_torus import RMTorus

KINDS = ("cyclic_algebra", "rm_torus", "abstract")


@dataclass(frozen=True)
class RingDescriptor:
    kind: str
    payload: Union[CyclicAlgebra, RMTorus, str]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ring kind {self.kind!r}")
        expected = {"cyclic_algebra": CyclicAlgebra, "rm_torus": RMTorus, "abstract": str}[self.kind]
        if not isinstance(self.payload, expected):
            raise TypeError(f"{self.kind} ring needs a {expected.__name__} payload")

    @classmethod
    def algebra(cls, A: CyclicAlgebra) -> RingDescriptor:
        return cls("cyclic_algebra", A)

    @classmethod
    def torus(cls, T: RMTorus) -> RingDescriptor:
        return cls("rm_torus", T)

    @classmethod
    def abstract(cls, label: str) -> RingDescriptor:
        return cls("abstract", label)

    def spec(self) -> str:
        if self.kind == "abstract":
            return self.payload
        return self.payload.spec()

    def __str__(self) -> str:
        return self.spec()


_RM_RE = re.compile(r"^\s*A_RM\s*\((.+)\)\s*$")


def parse_ring(spec: str) -> RingDescriptor:
    """``C(a;field)`` -> cyclic algebra, ``A_RM(field)`` -> RM torus, anything else abstract."""
    text = spec.strip()
    if text.startswith("C("):
        return RingDescriptor.algebra(parse_algebra(text))
    m = _RM_RE.match(text)
    if m:
        return RingDescriptor.torus(RMTorus(parse_field(m.group(1))))
    if not text:
        raise ValueError("empty ring label")
    return RingDescriptor.abstract(text)


@dataclass(frozen=True)
class Dynamial:
    ring: RingDescriptor
    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"index must be a positive integer, got {self.m!r}")

    def __mul__(self, other: Dynamial) -> Dynamial:
        return product(self, other)

    def __str__(self) -> str:
        return f"D_{self.m}({self.ring})"


def make_dynamial(ring: RingDescriptor, m: int) -> Dynamial:
    return Dynamial(ring, m)


def product(x: Dynamial, y: Dynamial) -> Dynamial:
    """D_{m1} D_{m2} = D_{m1 m2}; the index groups add as m1 Z + m2 Z."""
    if x.ring != y.ring:
        raise ValueError("dynamials over different rings cannot be multiplied")
    return Dynamial(x.ring, x.m * y.m)


def index(x: Dynamial) -> int:
    return x.m


@dataclass(frozen=True)
class DynamialFactorization:
    ring: RingDescriptor
    prime_powers: tuple[tuple[int, int], ...]

    @property
    def minimal_factors(self) -> tuple[int, ...]:
        return tuple(p for p, k in self.prime_powers for _ in range(k))

    @property
    def m(self) -> int:
        out = 1
        for p, k in self.prime_powers:
            out *= p**k
        return out

    def factors(self) -> list[Dynamial]:
        return [Dynamial(self.ring, p**k) for p, k in self.prime_powers]

    def product(self) -> Dynamial:
        acc = Dynamial(self.ring, 1)
        for f in self.factors():
            acc = acc * f
        return acc

    def to_json(self) -> dict:
        return {"ring": self.ring.spec(), "m": self.m, "prime_powers": [list(pk) for pk in self.prime_powers]}

    @classmethod
    def from_json(cls, data: dict) -> DynamialFactorization:
        out = cls(parse_ring(data["ring"]), tuple((int(p), int(k)) for p, k in data["prime_powers"]))
        if out.m != data["m"]:
            raise ValueError("prime powers do not multiply to m")
        return out


def factorize(x: Dynamial) -> DynamialFactorization:
    return DynamialFactorization(x.ring, tuple(sorted(sympy.factorint(x.m).items())))


def is_minimal(x: Dynamial) -> bool:
    return bool(sympy.isprime(x.m))


def is_syndetic(subgroup_index: int | str) -> bool:
    """A subgroup of a discrete group is syndetic iff its index is finite."""
    if isinstance(subgroup_index, str):
        if subgroup_index.strip().lower() in ("infinite", "inf", "∞"):
            return False
        subgroup_index = int(subgroup_index)
    if subgroup_index < 1:
        raise ValueError("index must be a positive integer or 'infinite'")
    return True


# -- crossed-product expressions -----------------------------------------------------


@dataclass(frozen=True)
class ZGroup:
    """The subgroup mZ of Z (m = 1 is Z itself)."""

    m: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("mZ needs m >= 1")

    def text(self) -> str:
        return "Z" if self.m == 1 else f"{self.m}Z"


@dataclass(frozen=True)
class Galois:
    n: int

    def text(self) -> str:
        return f"Gal({self.n})"


Group = Union[ZGroup, Galois]


@dataclass(frozen=True)
class RingOfIntegers:
    field: CyclicExtension

    def text(self) -> str:
        return f"O({self.field.spec()})"


@dataclass(frozen=True)
class IdealTerm:
    ideal: QuadIdeal

    def text(self) -> str:
        I = self.ideal
        return f"Ideal({I.parent.spec()};{I.norm};{I.label()})"


@dataclass(frozen=True)
class AlgebraTerm:
    algebra: CyclicAlgebra

    def text(self) -> str:
        return f"Algebra({self.algebra.spec()})"


@dataclass(frozen=True)
class Cross:
    inner: "Expr"
    group: Group

    def text(self) -> str:
        return f"Cross({self.inner.text()},{self.group.text()})"


Expr = Union[RingOfIntegers, IdealTerm, AlgebraTerm, Cross]


@dataclass(frozen=True)
class NoClassicalCounterpart:
    """R1 was demanded for mZ over E but E has no ideal of norm m."""

    field: CyclicExtension
    m: int

    def to_json(self) -> dict:
        return {"error": "no classical counterpart", "field": self.field.spec(), "m": self.m}


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


def _parse_group(text: str) -> Group:
    text = text.strip()
    if text == "Z":
        return ZGroup(1)
    m = re.fullmatch(r"(\d+)\s*Z", text)
    if m:
        return ZGroup(int(m.group(1)))
    m = re.fullmatch(r"Gal\s*\(\s*(\d+)\s*\)", text)
    if m:
        return Galois(int(m.group(1)))
    raise ValueError(f"unknown group {text!r}")


def parse_expr(text: str) -> Expr:
    """Inverse of ``expr.text()``."""
    text = text.strip()
    m = re.fullmatch(r"(\w+)\s*\((.*)\)", text, flags=re.S)
    if not m:
        raise ValueError(f"cannot parse expression {text!r}")
    head, body = m.group(1), m.group(2)
    if head == "Cross":
        args = _split_top(body, ",")
        if len(args) != 2:
            raise ValueError("Cross takes two arguments")
        return Cross(parse_expr(args[0]), _parse_group(args[1]))
    if head == "O":
        return RingOfIntegers(parse_field(body))
    if head == "Algebra":
        return AlgebraTerm(parse_algebra(body))
    if head == "Ideal":
        args = _split_top(body, ";")
        if len(args) != 3:
            raise ValueError("Ideal takes field;norm;a,b,c")
        a, b, c = (int(v) for v in args[2].split(","))
        ideal = QuadIdeal(parse_field(args[0]), a, b, c)
        if ideal.norm != int(args[1]):
            raise ValueError("stated norm does not match the ideal")
        return IdealTerm(ideal)
    raise ValueError(f"unknown constructor {head!r}")


@dataclass(frozen=True)
class Signature:
    """Quantities every rewrite must conserve."""

    field: str | None
    index: int
    galois_order: int
    z_rank: int


def signature(e: Expr) -> Signature:
    if isinstance(e, RingOfIntegers):
        return Signature(e.field.spec(), 1, 1, 0)
    if isinstance(e, IdealTerm):
        return Signature(e.ideal.parent.spec(), e.ideal.norm, 1, 0)
    if isinstance(e, AlgebraTerm):
        return Signature(e.algebra.extension.spec(), 1, e.algebra.degree, 0)
    s = signature(e.inner)
    if isinstance(e.group, ZGroup):
        return Signature(s.field, s.index * e.group.m, s.galois_order, s.z_rank + 1)
    return Signature(s.field, s.index, s.galois_order * e.group.n, s.z_rank)


def is_normal_form(e: Expr) -> bool:
    return (
        isinstance(e, Cross)
        and e.group == ZGroup(1)
        and isinstance(e.inner, Cross)
        and isinstance(e.inner.group, Galois)
        and isinstance(e.inner.inner, IdealTerm)
    )


def _r3_expand_algebra(e: Expr) -> Expr:
    """C(a) -> O_E x_theta G."""
    if isinstance(e, AlgebraTerm):
        A = e.algebra
        return Cross(RingOfIntegers(A.extension), Galois(A.degree))
    if isinstance(e, Cross):
        return Cross(_r3_expand_algebra(e.inner), e.group)
    return e


def _r2_commute_inward(e: Expr) -> Expr:
    """(X x G) x mZ -> (X x mZ) x G for X not yet an ideal."""
    if isinstance(e, Cross):
        inner = _r2_commute_inward(e.inner)
        if (
            isinstance(e.group, ZGroup)
            and isinstance(inner, Cross)
            and isinstance(inner.group, Galois)
            and not isinstance(inner.inner, IdealTerm)
        ):
            return Cross(Cross(inner.inner, e.group), inner.group)
        return Cross(inner, e.group)
    return e


def _r1_localize(e: Expr) -> list[Expr] | NoClassicalCounterpart:
    """O_E x mZ -> I x Z for each ideal I of norm m."""
    if not isinstance(e, Cross):
        return [e]
    if isinstance(e.inner, RingOfIntegers) and isinstance(e.group, ZGroup):
        E = e.inner.field
        if E.d is None:
            raise ValueError("ideal localisation needs a quadratic field")
        ideals = ideals_of_norm(E, e.group.m)
        if not ideals:
            return NoClassicalCounterpart(E, e.group.m)
        return [Cross(IdealTerm(I), ZGroup(1)) for I in ideals]
    inner = _r1_localize(e.inner)
    if isinstance(inner, NoClassicalCounterpart):
        return inner
    return [Cross(x, e.group) for x in inner]


def _r4_restore_order(e: Expr) -> Expr:
    """(I x Z) x G -> (I x G) x Z."""
    if isinstance(e, Cross):
        inner = _r4_restore_order(e.inner)
        if (
            isinstance(e.group, Galois)
            and isinstance(inner, Cross)
            and inner.group == ZGroup(1)
            and isinstance(inner.inner, IdealTerm)
        ):
            return Cross(Cross(inner.inner, e.group), inner.group)
        return Cross(inner, e.group)
    return e


def normalize_crossed_product(e: Expr) -> tuple[Expr, ...] | NoClassicalCounterpart:
    """Rewrite with R3, R2, R1 and a final reordering; one result per ideal choice."""
    step = _r2_commute_inward(_r3_expand_algebra(e))
    expanded = _r1_localize(step)
    if isinstance(expanded, NoClassicalCounterpart):
        return expanded
    out = {_r4_restore_order(x) for x in expanded}
    return tuple(sorted(out, key=lambda x: x.text()))


# -- localisation at ideals ------------------------------------------------------------


@dataclass(frozen=True)
class LocalizedDynamial:
    ideal: QuadIdeal
    factorization: IdealFactorization
    expr: Expr

    def to_json(self) -> dict:
        return {
            "ideal": self.ideal.to_json(),
            "factorization": self.factorization.to_json(),
            "expr": self.expr.text(),
        }


def _algebra_of(x: Dynamial) -> CyclicAlgebra:
    if x.ring.kind != "cyclic_algebra":
        raise ValueError("localisation needs a dynamial over a cyclic algebra")
    A = x.ring.payload
    if A.extension.d is None:
        raise ValueError("localisation needs a quadratic maximal subfield")
    return A


def localize(x: Dynamial) -> list[LocalizedDynamial]:
    """One entry per ideal I_E of norm m, with C_m(a) x Z = (I_E x_theta G) x Z."""
    A = _algebra_of(x)
    E, n = A.extension, A.degree
    out = []
    for I in ideals_of_norm(E, x.m):
        expr = Cross(Cross(IdealTerm(I), Galois(n)), ZGroup(1))
        out.append(LocalizedDynamial(I, factor_ideal(I), expr))
    return out
