"""Combinatorial surface knot/link descriptors attached to dynamials.

A dynamial D_m over a cyclic algebra with quadratic maximal subfield E gives
one descriptor per ideal of norm m in O_E. The components of a descriptor
are the distinct prime ideals in that ideal's factorization, each labelled
by (p, f, e, k). No genus or embedding data is recorded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import sympy

from .dynamial import Dynamial, localize
from .ideal_lattice import IdealFactorization, QuadIdeal, factor_ideal


@dataclass(frozen=True)
class Component:
    p: int
    f: int
    e: int
    k: int
    prime_hnf: tuple[int, int, int] | None = None

    def to_json(self) -> dict:
        out = {"p": self.p, "f": self.f, "e": self.e, "k": self.k}
        if self.prime_hnf is not None:
            out["prime"] = list(self.prime_hnf)
        return out

    @classmethod
    def from_json(cls, data: dict) -> Component:
        hnf = tuple(data["prime"]) if "prime" in data else None
        return cls(int(data["p"]), int(data["f"]), int(data["e"]), int(data["k"]), hnf)


def _kind(components: tuple[Component, ...]) -> str:
    if not components:
        return "empty"
    return "knot" if len(components) == 1 else "link"


@dataclass(frozen=True)
class SurfaceLinkDescriptor:
    ambient: str
    ideal_choice: Optional[QuadIdeal]
    components: tuple[Component, ...]
    kind: str

    def __post_init__(self):
        if self.kind != _kind(self.components):
            raise ValueError(f"kind {self.kind!r} does not match {len(self.components)} components")
        if self.ideal_choice is not None:
            total = 1
            for c in self.components:
                total *= c.p ** (c.f * c.k)
            if total != self.ideal_choice.norm:
                raise ValueError("component norms do not multiply to the ideal norm")

    @property
    def component_norm(self) -> int:
        total = 1
        for c in self.components:
            total *= c.p ** (c.f * c.k)
        return total

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient,
            "ideal": self.ideal_choice.to_json() if self.ideal_choice is not None else None,
            "components": [c.to_json() for c in self.components],
            "kind": self.kind,
        }

    @classmethod
    def from_json(cls, data: dict) -> SurfaceLinkDescriptor:
        ideal = QuadIdeal.from_json(data["ideal"]) if data.get("ideal") else None
        comps = tuple(Component.from_json(c) for c in data["components"])
        return cls(data["ambient"], ideal, comps, data["kind"])


def components_of(fact: IdealFactorization) -> tuple[Component, ...]:
    return tuple(Component(P.p, P.f, P.e, k, P.base.hnf) for P, k in fact.factors)


def spin(
    link_components: Iterable[Component | tuple[int, int, int, int]],
    ambient: str = "",
    ideal: QuadIdeal | None = None,
) -> SurfaceLinkDescriptor:
    """Carry link data from the 3-dimensional side to a surface descriptor.

    The component combinatorics are passed through unchanged.
    """
    comps = tuple(c if isinstance(c, Component) else Component(*c) for c in link_components)
    comps = tuple(sorted(comps, key=lambda c: (c.p, c.prime_hnf or ())))
    return SurfaceLinkDescriptor(ambient, ideal, comps, _kind(comps))


def descriptor_for_ideal(ambient: str, ideal: QuadIdeal) -> SurfaceLinkDescriptor:
    return spin(components_of(factor_ideal(ideal)), ambient, ideal)


def classify(x: Dynamial) -> list[SurfaceLinkDescriptor]:
    """One descriptor per ideal of norm m; empty when there is none."""
    ambient = x.ring.spec()
    out = []
    for entry in localize(x):
        comps = components_of(entry.factorization)
        out.append(SurfaceLinkDescriptor(ambient, entry.ideal, comps, _kind(comps)))
    return out


@dataclass(frozen=True)
class SphereKnotLabel:
    p: int
    local_algebra: str

    def to_json(self) -> dict:
        return {"p": self.p, "local_algebra": self.local_algebra}


def sphere_knot_label(p: int) -> SphereKnotLabel:
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    return SphereKnotLabel(p, f"H(Q_{p})")
