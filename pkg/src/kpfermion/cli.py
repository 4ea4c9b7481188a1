"""Command-line interface.

Exit codes: 0 ok, 1 usage error, 2 parse/validation error, 3 cap exceeded,
4 self-check mismatch.  Output is deterministic: identical inputs yield
byte-identical output in both text and JSON formats.
"""

from __future__ import annotations

import argparse
import sys

from . import serialize
from .fock import temporary_boson_sign
from .npoint import MAX_POINTS, npoint_formula, npoint_oracle
from .selftest import run_selftest
from .serialize import ParseError
from .subalgebras import NonPeriodicError, classify
from .tau import PunctureData, check_puncture, tau_series, tau_series_schur
from .loopalg import cocycle_pairs, loop_embed, residue_cocycle

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_SELFCHECK = 4

WEIGHT_CAP = 16
ENERGY_CAP = 16


class UsageError(Exception):
    pass


class CapError(Exception):
    pass


class SelfCheckError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _check_weight(w: int) -> int:
    if w < 0:
        raise CapError("weight cut must be non-negative")
    if w > WEIGHT_CAP:
        raise CapError(f"weight cut {w} exceeds the cap {WEIGHT_CAP}")
    return w


def _emit(args, text: str, payload) -> None:
    if args.format == "json":
        print(serialize.dump_json(payload))
    else:
        print(text)


def cmd_tau(args) -> int:
    weight = _check_weight(args.weight)
    coords = serialize.coords_from_json(serialize.load_json_file(args.coords))
    tau = tau_series(coords, weight)
    if not args.fast and tau != tau_series_schur(coords, weight):
        raise SelfCheckError("fermionic and Schur evaluations disagree")
    _emit(args, serialize.tseries_text(tau), serialize.tseries_to_json(tau))
    return EXIT_OK


def cmd_npoint(args) -> int:
    weight = _check_weight(args.weight)
    if args.n < 2 or args.n > MAX_POINTS:
        raise CapError(f"unsupported n: {args.n} (supported range 2..{MAX_POINTS})")
    coords = serialize.coords_from_json(serialize.load_json_file(args.coords))
    table = npoint_formula(coords, args.n, weight)
    if not args.fast and table != npoint_oracle(coords, args.n, weight):
        raise SelfCheckError("cyclic formula and differentiation oracle disagree")
    _emit(args, serialize.npoint_text(table), serialize.npoint_to_json(table))
    return EXIT_OK


def cmd_classify(args) -> int:
    element = serialize.quad_from_json(serialize.load_json_file(args.element))
    try:
        labels = sorted(classify(element, args.l))
    except NonPeriodicError as exc:
        raise ParseError(str(exc)) from None
    _emit(args, ", ".join(labels) if labels else "(no labels)",
          {"l": args.l, "labels": labels})
    return EXIT_OK


def cmd_cocycle(args) -> int:
    a = serialize.loop_from_json(serialize.load_json_file(args.a))
    b = serialize.loop_from_json(serialize.load_json_file(args.b))
    if a.size != b.size:
        raise ParseError("loop elements must share the matrix size")
    values = {}
    if args.mode in ("count", "both"):
        values["count"] = cocycle_pairs(loop_embed(a), loop_embed(b))
    if args.mode in ("residue", "both"):
        values["residue"] = residue_cocycle(a, b)
    if args.mode == "both" and values["count"] != values["residue"]:
        raise SelfCheckError(
            f"pair count {values['count']} != residue {values['residue']}")
    text = "\n".join(f"{k} = {serialize.fraction_str(v)}"
                     for k, v in sorted(values.items()))
    _emit(args, text, {k: serialize.fraction_str(v) for k, v in values.items()})
    return EXIT_OK


def cmd_embed(args) -> int:
    a = serialize.loop_from_json(serialize.load_json_file(args.element))
    matrix = loop_embed(a)
    rows = [f"({i},{j}) = {serialize.fraction_str(v)}"
            for (i, j), v in sorted(matrix.entries.items())]
    text = f"period = {matrix.period}, band = {matrix.band}\n" + "\n".join(rows)
    _emit(args, text, serialize.band_to_json(matrix))
    return EXIT_OK


def cmd_puncture(args) -> int:
    tau = serialize.tseries_from_json(serialize.load_json_file(args.series))
    try:
        data = PunctureData(args.coxeter, _parse_int_set(args.eplus),
                            _parse_int_set(args.eplus0))
        residual = check_puncture(tau, data)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    passes = not residual.coeffs
    text = (f"residual = {serialize.tseries_text(residual)}\n"
            f"satisfied = {'yes' if passes else 'no'}")
    payload = {"residual": serialize.tseries_to_json(residual), "satisfied": passes}
    _emit(args, text, payload)
    return EXIT_OK


def cmd_selftest(args) -> int:
    if args.corrupt is None:
        ok, lines = run_selftest()
    elif args.corrupt == "boson-sign":
        with temporary_boson_sign(-1):
            ok, lines = run_selftest()
    else:
        raise UsageError(f"unknown corruption hook {args.corrupt!r}")
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_SELFCHECK


def _parse_int_set(spec: str):
    if not spec:
        return frozenset()
    try:
        return frozenset(int(tok) for tok in spec.split(",") if tok.strip())
    except ValueError:
        raise ParseError(f"bad integer list {spec!r}") from None


def build_parser() -> _Parser:
    parser = _Parser(prog="kpfermion",
                     description="Exact tau-function and subalgebra computations")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("tau", help="tau-function series of a big-cell point")
    p.add_argument("coords", help="AffineCoords JSON file")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--fast", action="store_true",
                   help="skip the independent Schur-path check")
    add_format(p)
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("npoint", help="connected n-point function table")
    p.add_argument("coords")
    p.add_argument("-n", type=int, required=True, dest="n")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--fast", action="store_true",
                   help="skip the differentiation-oracle check")
    add_format(p)
    p.set_defaults(func=cmd_npoint)

    p = sub.add_parser("classify", help="affine subalgebra labels of an element")
    p.add_argument("element", help="QuadElement JSON file")
    p.add_argument("--l", type=int, default=1, help="rank parameter")
    add_format(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("cocycle", help="central-extension cocycle of two loop elements")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--mode", choices=("count", "residue", "both"), default="both")
    add_format(p)
    p.set_defaults(func=cmd_cocycle)

    p = sub.add_parser("embed", help="banded-matrix image of a loop element")
    p.add_argument("element")
    add_format(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("puncture", help="puncture-equation residual of a series")
    p.add_argument("series", help="TSeries JSON file")
    p.add_argument("--coxeter", type=int, required=True)
    p.add_argument("--eplus", default="", help="comma list of derivative exponents")
    p.add_argument("--eplus0", default="", help="comma list of quadratic exponents")
    add_format(p)
    p.set_defaults(func=cmd_puncture)

    p = sub.add_parser("selftest", help="run the invariant suites")
    p.add_argument("--corrupt", default=None,
                   help="testing hook: 'boson-sign' flips a sign convention")
    p.set_defaults(func=cmd_selftest)

    parser.add_argument("--energy", type=int, default=None,
                        help="energy cut override where applicable")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "energy", None) is not None:
            if args.energy < 0 or args.energy > ENERGY_CAP:
                raise CapError(f"energy cut outside [0, {ENERGY_CAP}]")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except SelfCheckError as exc:
        print(f"self-check mismatch: {exc}", file=sys.stderr)
        return EXIT_SELFCHECK


if __name__ == "__main__":
    sys.exit(main())
