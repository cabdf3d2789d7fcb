"""Command-line frontend: one verb per process, deterministic JSON on stdout.

Exit status is 0 on success, 1 on a domain error (for instance when a
dynamial has no classical counterpart) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, TextIO

from .cyclic_algebra import (
    DEFAULT_NORM_BUDGET,
    hasse_profile,
    hilbert_symbol,
    is_division,
    normalize_place,
    parse_algebra,
)
from .dynamial import (
    Dynamial,
    NoClassicalCounterpart,
    factorize,
    is_minimal,
    normalize_crossed_product,
    parse_expr,
    parse_ring,
    signature,
)
from .ideal_lattice import QuadIdeal, factor_ideal, ideals_of_norm
from .numfield import DEFAULT_PELL_BOUND, FundamentalUnitError, make_quadratic_field, parse_field
from .rm_torus import IntMatrix2, rm_cayley_hamilton, rm_matrix, weyl_substitute
from .surface_link import classify

SCHEMA = "dynamial/1"
CONFIG_ENV = "DYNAMIAL_CONFIG"


class UsageError(Exception):
    pass


class DomainError(Exception):
    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}


@dataclass(frozen=True)
class Config:
    field: str = "Q(sqrt,-1)"
    pell_bound: int = DEFAULT_PELL_BOUND
    norm_budget: int = DEFAULT_NORM_BUDGET
    output: str = "json"

    def validate(self) -> Config:
        if self.pell_bound < 1 or self.norm_budget < 1:
            raise UsageError("search bounds must be positive")
        if self.output not in ("json", "text"):
            raise UsageError("output mode must be 'json' or 'text'")
        try:
            parse_field(self.field)
        except ValueError as exc:
            raise UsageError(f"bad default field: {exc}") from exc
        return self


def load_config(path: str | None) -> Config:
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return Config()
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    known = {"field", "pell_bound", "norm_budget", "output"}
    unknown = set(data) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        return Config(**data).validate()
    except TypeError as exc:
        raise UsageError(f"bad config value: {exc}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return value


def _rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational number")
    if value == 0:
        raise argparse.ArgumentTypeError("value must be nonzero")
    return value


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    common.add_argument("--output", choices=("json", "text"))
    common.add_argument("--pell-bound", type=_positive)
    common.add_argument("--norm-budget", type=_positive)

    parser = _Parser(prog="dynamial", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("factor-dynamial", parents=[common], help="prime factorization of D_m")
    p.add_argument("--ring", required=True)
    p.add_argument("--m", type=_positive, required=True)

    p = sub.add_parser("check-division", parents=[common], help="Wedderburn division test")
    p.add_argument("--algebra", required=True)
    p.add_argument("--bound", type=_positive)

    p = sub.add_parser("ideal-factor", parents=[common], help="prime ideal factorization")
    p.add_argument("--field")
    p.add_argument("--ideal", required=True, help="HNF a,b,c")

    p = sub.add_parser("ideals-of-norm", parents=[common], help="all ideals of a given norm")
    p.add_argument("--field")
    p.add_argument("--m", type=_positive, required=True)

    p = sub.add_parser("classify-link", parents=[common], help="surface link descriptors of D_m")
    p.add_argument("--ring", required=True)
    p.add_argument("--m", type=_positive, required=True)

    p = sub.add_parser("weyl-check", parents=[common], help="phase multiplier of a substitution")
    p.add_argument("--matrix", required=True, help="a,b,c,d")

    p = sub.add_parser("rm-matrix", parents=[common], help="real multiplication matrix")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--exponent", type=_positive, required=True)

    p = sub.add_parser("hilbert", parents=[common], help="Hilbert symbol (a,b)_v")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--b", type=_rational, required=True)
    p.add_argument("--place", required=True, help="a prime or 'inf'")

    p = sub.add_parser("hasse", parents=[common], help="local invariants of a quaternion algebra")
    p.add_argument("--algebra", required=True)

    p = sub.add_parser("normalize-cp", parents=[common], help="rewrite a crossed-product expression")
    p.add_argument("--expr", required=True)
    return parser


def _validated(fn: Callable, *args):
    try:
        return fn(*args)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc


# -- verbs --------------------------------------------------------------------------


def _factor_dynamial(args, cfg: Config) -> dict:
    ring = _validated(parse_ring, args.ring)
    x = Dynamial(ring, args.m)
    fact = factorize(x)
    out = fact.to_json()
    out["minimal_factors"] = list(fact.minimal_factors)
    out["is_minimal"] = is_minimal(x)
    return out


def _check_division(args, cfg: Config) -> dict:
    A = _validated(parse_algebra, args.algebra)
    bound = args.bound or (cfg.norm_budget if A.extension.d is not None else None)
    out = is_division(A, bound).to_json()
    out["algebra"] = A.spec()
    return out


def _field(args, cfg: Config):
    return _validated(parse_field, args.field or cfg.field)


def _ideal_factor(args, cfg: Config) -> dict:
    E = _field(args, cfg)
    try:
        a, b, c = (int(v) for v in args.ideal.split(","))
    except ValueError:
        raise UsageError("--ideal needs three comma-separated integers a,b,c")
    I = _validated(QuadIdeal, E, a, b, c)
    return {"ideal": I.to_json(), "norm": I.norm, "factorization": factor_ideal(I).to_json()}


def _ideals_of_norm(args, cfg: Config) -> dict:
    E = _field(args, cfg)
    if E.d is None:
        raise UsageError("ideals are only supported for quadratic fields")
    ideals = ideals_of_norm(E, args.m)
    return {"field": E.spec(), "m": args.m, "ideals": [I.to_json() for I in ideals]}


def _classify_link(args, cfg: Config) -> dict:
    ring = _validated(parse_ring, args.ring)
    if ring.kind != "cyclic_algebra" or ring.payload.extension.d is None:
        raise UsageError("classify-link needs a cyclic algebra over a quadratic field")
    descriptors = classify(Dynamial(ring, args.m))
    if not descriptors:
        raise DomainError(
            "no classical counterpart",
            {"ring": ring.spec(), "m": args.m, "error": "no classical counterpart"},
        )
    return {"ring": ring.spec(), "m": args.m, "descriptors": [d.to_json() for d in descriptors]}


def _weyl_check(args, cfg: Config) -> dict:
    M = _validated(IntMatrix2.parse, args.matrix)
    return {"matrix": M.rows(), "phase_multiplier": weyl_substitute(M), "det": M.det}


def _rm_matrix(args, cfg: Config) -> dict:
    E = _validated(make_quadratic_field, args.d)
    try:
        data = rm_matrix(E, args.p, args.exponent, cfg.pell_bound)
    except FundamentalUnitError as exc:
        raise DomainError(str(exc), {"error": "unit search bound exceeded"}) from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    check = rm_cayley_hamilton(data)
    out = data.to_json()
    out.update({"field": E.spec(), "p": data.p, "exponent": data.k, "trace": data.t, "cayley_hamilton": check.holds})
    return out


def _hilbert(args, cfg: Config) -> dict:
    place = _validated(normalize_place, args.place)
    return {
        "a": _fmt(args.a),
        "b": _fmt(args.b),
        "place": place,
        "symbol": hilbert_symbol(args.a, args.b, place),
    }


def _hasse(args, cfg: Config) -> dict:
    A = _validated(parse_algebra, args.algebra)
    profile = _validated(hasse_profile, A)
    out = profile.to_json()
    out["algebra"] = A.spec()
    return out


def _normalize_cp(args, cfg: Config) -> dict:
    e = _validated(parse_expr, args.expr)
    result = _validated(normalize_crossed_product, e)
    sig = signature(e)
    if isinstance(result, NoClassicalCounterpart):
        payload = result.to_json()
        payload["input"] = e.text()
        raise DomainError("no classical counterpart", payload)
    return {
        "input": e.text(),
        "normal_forms": [x.text() for x in result],
        "signature": {"field": sig.field, "index": sig.index, "galois_order": sig.galois_order, "z_rank": sig.z_rank},
    }


VERBS: dict[str, Callable] = {
    "factor-dynamial": _factor_dynamial,
    "check-division": _check_division,
    "ideal-factor": _ideal_factor,
    "ideals-of-norm": _ideals_of_norm,
    "classify-link": _classify_link,
    "weyl-check": _weyl_check,
    "rm-matrix": _rm_matrix,
    "hilbert": _hilbert,
    "hasse": _hasse,
    "normalize-cp": _normalize_cp,
}


def _render_text(payload: dict, indent: str = "") -> str:
    lines = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_render_text(value, indent + "  "))
        else:
            lines.append(f"{indent}{key}: {json.dumps(value, sort_keys=True)}")
    return "\n".join(lines)


def render(payload: dict, mode: str) -> str:
    if mode == "text":
        return _render_text(payload) + "\n"
    return json.dumps(payload, sort_keys=True) + "\n"


def run(argv: list[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config)
        overrides = {
            k: v
            for k, v in (("output", args.output), ("pell_bound", args.pell_bound), ("norm_budget", args.norm_budget))
            if v is not None
        }
        cfg = replace(cfg, **overrides).validate()
        payload = VERBS[args.verb](args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except DomainError as exc:
        print(f"error: {exc}", file=stderr)
        body = {"schema": SCHEMA, "verb": args.verb}
        body.update(exc.payload)
        stdout.write(render(body, cfg.output))
        return 1
    body = {"schema": SCHEMA, "verb": args.verb}
    body.update(payload)
    stdout.write(render(body, cfg.output))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
