"""Command-line interface and the registry of example matrices.

Every subcommand reads a Seifert matrix from --matrix FILE (the JSON
schema of the seifert module) or --example KEY, runs one library
operation, and prints a machine-readable JSON document.  Exit codes:
0 on success, 1 on a domain error (library precondition), 2 on a usage
error (bad flags, unknown keys, malformed JSON).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal
from fractions import Fraction
from typing import Callable

from .errors import DomainError
from .exact.poly import LaurentPolyQ, RatPoly, format_poly, _rat
from .numtheory import (
    INF,
    NormTestResult,
    Order2Certificate,
    Order4Tower,
    QuadField,
    hilbert_product_check,
    hilbert_q,
    minus_one_norm_test,
    order2_certificate,
    order4_tower,
)
from .seifert import (
    SeifertMatrix,
    alexander,
    cable,
    matrix_from_json,
    matrix_to_json,
    realize,
    surgery_data,
    validate,
)
from .witt import (
    DEFAULT_R_MAX,
    DEFAULT_TOWER_DEPTH,
    CircleRoot,
    OrderClassification,
    order_classify,
    rho_abelian,
    signature_jumps,
    witt_report,
)

SCHEMA = "concordia/1"

_VERDICT_NAMES = {
    "infinite": "Infinite",
    "trivial": "Trivial",
    "order2": "Order2",
    "order4": "Order4",
    "torsion_unknown": "TorsionUnknown",
    "unknown": "Unknown",
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CommandResult:
    status: str  # "ok" | "error"
    payload: dict
    exit_code: int

    def to_json(self, pretty: bool = False) -> str:
        doc = dict(self.payload)
        doc["status"] = self.status
        doc.setdefault("schema", SCHEMA)
        return json.dumps(doc, indent=2 if pretty else None, sort_keys=False)


# ---------------------------------------------------------------------------
# example registry


def _rat_json(x: Fraction):
    x = _rat(x)
    return int(x) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


@dataclass(frozen=True)
class ExampleEntry:
    key: str
    citation: str
    build: Callable[[], SeifertMatrix]
    expected: dict


def _order2_matrix(a: int) -> SeifertMatrix:
    return SeifertMatrix.from_rows([[-a, 1], [0, 1]], 1)


def _order4_matrix(a: int, p: int) -> SeifertMatrix:
    return SeifertMatrix.from_rows([[Fraction(-a, p), 1], [0, 1]], 1)


def _kernel_matrix(a: int) -> SeifertMatrix:
    return SeifertMatrix.from_rows([[a, 1], [0, -a]], 1)


def _eps_minus_4x4(a: int) -> SeifertMatrix:
    return SeifertMatrix.from_rows(
        [[0, 1, a, 0], [0, 0, 1, 0], [-a, -1, -1, 0], [0, 0, 0, 1]], -1
    )


def _pell_matrix(a: int) -> SeifertMatrix:
    poly = RatPoly([1, -3, 1]) * RatPoly([a * a, -(2 * a * a + 1), a * a])
    return realize(LaurentPolyQ(poly), -1)


def _canonical(poly: RatPoly) -> list:
    return [_rat_json(c) for c in LaurentPolyQ(poly).unit_normal().coeffs]


def _build_examples() -> dict[str, ExampleEntry]:
    entries = [
        ExampleEntry(
            "fig8",
            "Seifert matrix of the figure-eight knot; its double cable splits off "
            "non-reciprocal factors, so the class dies in the limit group",
            lambda: SeifertMatrix.from_rows([[1, 1], [0, -1]], 1),
            {"order_verdict": "Trivial", "order_r": 2, "alexander_canonical": _canonical(RatPoly([1, -3, 1]))},
        )
    ]
    for a in (5, 13, 17):
        entries.append(
            ExampleEntry(
                "order2-a%d" % a,
                "genus-one matrix for the order-2 torsion family, parameter a=%d" % a,
                (lambda a=a: _order2_matrix(a)),
                {"order_verdict": "Order2", "alexander_canonical": _canonical(RatPoly([a, -(2 * a + 1), a]))},
            )
        )
    entries.append(
        ExampleEntry(
            "order4-a5-p3",
            "genus-one matrix with a rational (non-integral) entry representing "
            "an order-4 class, parameters (a, p) = (5, 3)",
            lambda: _order4_matrix(5, 3),
            {"order_verdict": "Order4", "alexander_canonical": _canonical(RatPoly([5, -13, 5]))},
        )
    )
    for a in (1, 2, 3):
        entries.append(
            ExampleEntry(
                "kernel-a%d" % a,
                "amphichiral kernel family [[a,1],[0,-a]], a=%d; order two "
                "integrally but trivial in the limit" % a,
                (lambda a=a: _kernel_matrix(a)),
                {
                    "order_verdict": "Trivial",
                    "order_r": 2,
                    "alexander_canonical": _canonical(RatPoly([a * a, -(2 * a * a + 1), a * a])),
                },
            )
        )
    for a in (1, 19):
        poly = RatPoly([1, -3, 1]) * RatPoly([a * a, -(2 * a * a + 1), a * a])
        entries.append(
            ExampleEntry(
                "pell-a%d" % a,
                "even-sign kernel family; a=%d comes from the Pell recurrence "
                "making 5(4a^2+1) a perfect square" % a,
                (lambda a=a: _pell_matrix(a)),
                {"order_verdict": "Trivial", "order_r": 2, "alexander_canonical": _canonical(poly)},
            )
        )
    for a in (5, 13):
        poly = RatPoly([1, 2, 1]) * RatPoly([-a, 2 * a + 1, -a])
        entries.append(
            ExampleEntry(
                "eps-minus-4x4-a%d" % a,
                "4x4 matrix for epsilon = -1 carrying the order-2 family times (t+1)^2, a=%d" % a,
                (lambda a=a: _eps_minus_4x4(a)),
                {"order_verdict": "Order2", "alexander_canonical": _canonical(poly)},
            )
        )
    return {e.key: e for e in entries}


EXAMPLES = _build_examples()


# ---------------------------------------------------------------------------
# JSON serialization helpers


def _poly_json(p: RatPoly) -> dict:
    return {"coeffs": [_rat_json(c) for c in p.coeffs], "display": format_poly(p)}


def _laurent_json(p: LaurentPolyQ) -> dict:
    return {
        "coeffs": [_rat_json(c) for c in p.core.coeffs],
        "lowest_exp": p.shift,
        "display": format_poly(p.core) + ("" if p.shift == 0 else " * t^%d" % p.shift),
        "canonical": _poly_json(p.unit_normal()),
    }


def _root_json(r: CircleRoot) -> dict:
    return {"x_lo": _rat_json(r.x_lo), "x_hi": _rat_json(r.x_hi), "imag_sign": r.imag_sign}


def _dec_str(x: Fraction, digits: int, direction: str) -> str:
    q = Decimal(1).scaleb(-digits)
    d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d.quantize(q, rounding=ROUND_FLOOR if direction == "down" else ROUND_CEILING), "f")


def _padic_json(x) -> dict:
    return {"residue": x.residue, "p": x.p, "precision": x.precision, "display": repr(x)}


def _tower_json(tw: Order4Tower) -> dict:
    levels = []
    for lv in tw.levels:
        entry = {
            "level": lv.level,
            "m": _padic_json(lv.m_i),
            "sigma": _padic_json(lv.sigma_i),
            "sqrt_branch": _padic_json(lv.sqrt_branch),
            "v_sigma": lv.v_sigma,
            "f": lv.f_i,
        }
        if lv.level == 0:
            entry["sigma_exact"] = tw.p * (4 * tw.a + tw.p)
        elif lv.level == 1:
            entry["sigma_exact"] = tw.a * tw.p
        levels.append(entry)
    return {"a": tw.a, "p": tw.p, "depth": tw.depth, "precision": tw.precision, "verdict": tw.verdict, "levels": levels}


def _cert_json(cert: Order2Certificate) -> dict:
    return {
        "a": cert.a,
        "field_m": cert.field_m,
        "verdict": cert.verdict,
        "places": [
            {"place": p.place, "symbol": p.symbol, "valuation": p.valuation, "note": p.note}
            for p in cert.places
        ],
    }


def _normtest_json(res: NormTestResult) -> dict:
    return {
        "verdict": res.verdict,
        "witness": res.witness,
        "places": [
            {"place": p.place, "symbol": p.symbol, "valuation": p.valuation, "note": p.note}
            for p in res.places
        ],
    }


def _order_json(oc: OrderClassification) -> dict:
    doc: dict = {"verdict": _VERDICT_NAMES[oc.verdict]}
    if oc.r is not None:
        doc["r"] = oc.r
    if oc.witness_jump is not None:
        doc["witness"] = {"root": _root_json(oc.witness_jump.root), "jump": oc.witness_jump.jump}
    if oc.witness_factor is not None:
        doc["witness_factor"] = _poly_json(oc.witness_factor)
    if oc.family is not None:
        doc["family"] = {"a": oc.family[0], "p": oc.family[1], "power": oc.family[2]}
    if isinstance(oc.certificate, Order2Certificate):
        doc["certificate"] = _cert_json(oc.certificate)
    elif isinstance(oc.certificate, Order4Tower):
        doc["certificate"] = _tower_json(oc.certificate)
    if oc.verified_depth is not None:
        doc["verified_depth"] = oc.verified_depth
    if oc.note:
        doc["note"] = oc.note
    return doc


# ---------------------------------------------------------------------------
# argument handling


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    ap = _Parser(prog="concordia", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_matrix_flags(p):
        p.add_argument("--matrix", help="JSON file holding the matrix document")
        p.add_argument("--example", help="registry key (see `examples list`)")

    p = sub.add_parser("alexander", parents=[common])
    add_matrix_flags(p)
    p = sub.add_parser("validate", parents=[common])
    add_matrix_flags(p)
    p.add_argument("--check-q2", action="store_true", help="also test signature = 0 mod 16")
    p = sub.add_parser("cable", parents=[common])
    add_matrix_flags(p)
    p.add_argument("--r", type=int, required=True)
    p = sub.add_parser("realize", parents=[common])
    p.add_argument("--coeffs", required=True, help="comma-separated coefficients, lowest degree first")
    p.add_argument("--epsilon", type=int, required=True, choices=(1, -1))
    p = sub.add_parser("invariants", parents=[common])
    add_matrix_flags(p)
    p = sub.add_parser("jumps", parents=[common])
    add_matrix_flags(p)
    p = sub.add_parser("rho", parents=[common])
    add_matrix_flags(p)
    p.add_argument("--tol", default="1/1000000")
    p = sub.add_parser("order", parents=[common])
    add_matrix_flags(p)
    p.add_argument("--r-max", type=int, default=None)
    p = sub.add_parser("hilbert", parents=[common])
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--place", help="a prime, or 'inf'; omit for the full product check")
    p = sub.add_parser("norm-test", parents=[common])
    p.add_argument("--m", type=int, required=True, help="field parameter: K = Q(sqrt(m)), m=1 for K=Q")
    p.add_argument("--a", type=int, required=True)
    p = sub.add_parser("order2-cert", parents=[common])
    p.add_argument("--a", type=int, required=True)
    p = sub.add_parser("order4-tower", parents=[common])
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--precision", type=int, default=2)
    p = sub.add_parser("surgery-data", parents=[common])
    add_matrix_flags(p)
    p = sub.add_parser("examples", parents=[common])
    p.add_argument("action", nargs="?", default="list", choices=("list",))
    return ap


def _load_matrix(args) -> SeifertMatrix:
    if getattr(args, "example", None):
        entry = EXAMPLES.get(args.example)
        if entry is None:
            raise UsageError("unknown example key %r" % args.example)
        return entry.build()
    if getattr(args, "matrix", None):
        try:
            with open(args.matrix) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise UsageError("cannot read %s: %s" % (args.matrix, exc))
        except json.JSONDecodeError as exc:
            raise UsageError("malformed JSON in %s: %s" % (args.matrix, exc))
        return matrix_from_json(doc)
    raise UsageError("either --matrix or --example is required")


def _parse_place(text: str):
    if text.lower() in ("inf", "infinity", "oo"):
        return INF
    try:
        return int(text)
    except ValueError:
        raise UsageError("place must be a prime or 'inf'")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError("environment variable %s must be an integer" % name)


# ---------------------------------------------------------------------------
# dispatch


def run(argv) -> CommandResult:
    try:
        args = _build_parser().parse_args(argv)
    except UsageError as exc:
        return CommandResult("error", {"error": str(exc), "kind": "usage"}, 2)
    try:
        payload = _dispatch(args)
        return CommandResult("ok", payload, 0)
    except UsageError as exc:
        return CommandResult("error", {"error": str(exc), "kind": "usage"}, 2)
    except DomainError as exc:
        return CommandResult("error", {"error": str(exc), "kind": "domain"}, 1)


def _dispatch(args) -> dict:
    cmd = args.command
    if cmd == "alexander":
        S = _load_matrix(args)
        return {"alexander": _laurent_json(alexander(S))}
    if cmd == "validate":
        S_or = _load_matrix_raw(args)
        rep = validate(S_or[0], S_or[1], check_q2_condition=args.check_q2)
        return {
            "nonsingular": rep.nonsingular,
            "even_unimodular_congruent": rep.even_unimodular_congruent,
            "signature_mod8": rep.signature_mod8,
            "det_class_ok": rep.det_class_ok,
            "hasse_mismatch_primes": list(rep.hasse_mismatch_primes),
            "q2_signature_mod16_ok": rep.q2_signature_mod16_ok,
        }
    if cmd == "cable":
        S = _load_matrix(args)
        return {"matrix": matrix_to_json(cable(S, args.r))}
    if cmd == "realize":
        coeffs = [Fraction(c.strip()) for c in args.coeffs.split(",")]
        S = realize(LaurentPolyQ(RatPoly(coeffs)), args.epsilon)
        return {"matrix": matrix_to_json(S), "alexander": _laurent_json(alexander(S))}
    if cmd == "invariants":
        S = _load_matrix(args)
        rep = witt_report(S)
        return {
            "factors": [
                {
                    "poly": _poly_json(f.poly),
                    "multiplicity": f.multiplicity,
                    "reciprocal": f.reciprocal,
                    "e_mod2": f.e_mod2,
                    "circle_roots": [_root_json(r) for r in f.circle_roots],
                }
                for f in rep.factors
            ],
            "jumps": [{"root": _root_json(j.root), "jump": j.jump} for j in rep.jumps],
            "epsilon_convention_note": rep.epsilon_convention_note,
        }
    if cmd == "jumps":
        S = _load_matrix(args)
        return {"jumps": [{"root": _root_json(j.root), "jump": j.jump} for j in signature_jumps(S)]}
    if cmd == "rho":
        S = _load_matrix(args)
        tol = Fraction(args.tol)
        interval = rho_abelian(S, tol)
        digits = max(8, len(str(tol.denominator)) + 2)
        return {
            "lo": _dec_str(interval.lo, digits, "down"),
            "hi": _dec_str(interval.hi, digits, "up"),
            "decimal_digits": digits,
        }
    if cmd == "order":
        S = _load_matrix(args)
        r_max = args.r_max if args.r_max is not None else _env_int("CONCORDIA_RMAX", DEFAULT_R_MAX)
        depth = _env_int("CONCORDIA_PADIC_DEPTH", DEFAULT_TOWER_DEPTH)
        return _order_json(order_classify(S, r_max=r_max, tower_depth=depth))
    if cmd == "hilbert":
        a, b = Fraction(args.a), Fraction(args.b)
        if args.place is not None:
            place = _parse_place(args.place)
            return {"symbol": hilbert_q(a, b, place)}
        ok, symbols = hilbert_product_check(a, b)
        return {
            "symbols": [["inf" if v == INF else v, s] for v, s in symbols],
            "product_is_one": ok,
        }
    if cmd == "norm-test":
        return _normtest_json(minus_one_norm_test(QuadField(args.m), args.a))
    if cmd == "order2-cert":
        return _cert_json(order2_certificate(args.a))
    if cmd == "order4-tower":
        depth = args.depth if args.depth is not None else _env_int("CONCORDIA_PADIC_DEPTH", DEFAULT_TOWER_DEPTH)
        return _tower_json(order4_tower(args.a, args.p, depth, args.precision))
    if cmd == "surgery-data":
        S = _load_matrix(args)
        sd = surgery_data(S)
        return {
            "B": [[_rat_json(e) for e in sd.B.row(i)] for i in range(sd.B.rows)],
            "corrections": [list(c) for c in sd.corrections],
            "linking_matrix": [
                [_rat_json(e) for e in sd.linking_matrix.row(i)] for i in range(sd.linking_matrix.rows)
            ],
        }
    if cmd == "examples":
        return {"examples": [{"key": e.key, "citation": e.citation} for e in EXAMPLES.values()]}
    raise UsageError("unknown command %r" % cmd)


def _load_matrix_raw(args):
    """Like _load_matrix but without the nonsingularity gate, so that
    `validate` can report on honest non-examples."""
    if getattr(args, "example", None):
        S = _load_matrix(args)
        return S.A, S.epsilon
    if not getattr(args, "matrix", None):
        raise UsageError("either --matrix or --example is required")
    try:
        with open(args.matrix) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (args.matrix, exc))
    except json.JSONDecodeError as exc:
        raise UsageError("malformed JSON in %s: %s" % (args.matrix, exc))
    try:
        eps = int(doc["epsilon"])
        rows = [[_rat(e) for e in row] for row in doc["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError("malformed matrix document: %s" % exc)
    from .exact.linalg import MatQ

    return (MatQ.from_rows(rows) if rows else MatQ.zeros(0, 0)), eps


def main(argv=None) -> int:
    result = run(sys.argv[1:] if argv is None else argv)
    pretty = "--pretty" in (sys.argv[1:] if argv is None else argv)
    print(result.to_json(pretty=pretty))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
