"""JSON serialization of the domain types and deterministic text formatting.

Scalars are exact fraction strings "p/q" (integers without the "/q"); no
floats appear in any format.  All collections are emitted in sorted order so
identical inputs produce byte-identical output.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .grassmannian import AffineCoords
from .fock import QuadElement
from .loopalg import BandMatrix, LoopElement
from .npoint import NPointTable
from .tau import TSeries


class ParseError(ValueError):
    pass


def fraction_str(x) -> str:
    return str(x)


def parse_fraction(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {s!r}: {exc}") from None


def _require(cond, msg):
    if not cond:
        raise ParseError(msg)


# -- AffineCoords -----------------------------------------------------------


def coords_to_json(A: AffineCoords) -> dict:
    return {"entries": [{"n": n, "m": m, "value": fraction_str(v)}
                        for (n, m), v in sorted(A.entries.items())]}


def coords_from_json(data) -> AffineCoords:
    _require(isinstance(data, dict) and "entries" in data,
             "affine coordinates need an 'entries' list")
    entries = {}
    for item in data["entries"]:
        _require(isinstance(item, dict) and {"n", "m", "value"} <= set(item),
                 "each entry needs n, m, value")
        entries[(int(item["n"]), int(item["m"]))] = parse_fraction(item["value"])
    try:
        return AffineCoords(entries)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# -- QuadElement ------------------------------------------------------------


def quad_to_json(X: QuadElement) -> dict:
    def block(entries):
        return [{"i": i, "j": j, "value": fraction_str(v)}
                for (i, j), v in sorted(entries.items())]
    return {"band": X.band, "period": X.period, "a": block(X.a),
            "b": block(X.b), "c": block(X.c),
            "central": fraction_str(X.central)}


def quad_from_json(data) -> QuadElement:
    _require(isinstance(data, dict), "quadratic element must be an object")

    def block(items):
        out = {}
        for item in items or []:
            _require(isinstance(item, dict) and {"i", "j", "value"} <= set(item),
                     "each block entry needs i, j, value")
            out[(int(item["i"]), int(item["j"]))] = parse_fraction(item["value"])
        return out

    period = data.get("period")
    try:
        return QuadElement(block(data.get("a")), block(data.get("b")),
                           block(data.get("c")),
                           parse_fraction(data.get("central", "0")),
                           period=int(period) if period is not None else None,
                           band=int(data["band"]) if "band" in data and
                           data["band"] is not None else None)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# -- LoopElement ------------------------------------------------------------


def loop_to_json(a: LoopElement) -> dict:
    return {"size": a.size,
            "terms": [{"k": k, "matrix": [[fraction_str(v) for v in row]
                                          for row in a.terms[k]]}
                      for k in sorted(a.terms)]}


def loop_from_json(data) -> LoopElement:
    _require(isinstance(data, dict) and "size" in data,
             "loop element needs a 'size'")
    size = int(data["size"])
    terms = {}
    for item in data.get("terms", []):
        _require(isinstance(item, dict) and {"k", "matrix"} <= set(item),
                 "each term needs k and matrix")
        terms[int(item["k"])] = [[parse_fraction(v) for v in row]
                                 for row in item["matrix"]]
    try:
        return LoopElement(size, terms)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# -- BandMatrix -------------------------------------------------------------


def band_to_json(M: BandMatrix) -> dict:
    return {"band": M.band, "period": M.period,
            "entries": [{"i": i, "j": j, "value": fraction_str(v)}
                        for (i, j), v in sorted(M.entries.items())],
            "central": fraction_str(M.central)}


def band_from_json(data) -> BandMatrix:
    _require(isinstance(data, dict) and "entries" in data,
             "band matrix needs an 'entries' list")
    entries = {}
    for item in data["entries"]:
        entries[(int(item["i"]), int(item["j"]))] = parse_fraction(item["value"])
    period = data.get("period")
    try:
        return BandMatrix(entries, period=int(period) if period is not None else None,
                          central=parse_fraction(data.get("central", "0")))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# -- TSeries ----------------------------------------------------------------


def tseries_to_json(t: TSeries) -> dict:
    return {"weight_cut": t.weight_cut,
            "terms": [{"monomial": [[i, k] for i, k in mono],
                       "value": fraction_str(t.coeffs[mono])}
                      for mono in t.sorted_monomials()]}


def tseries_from_json(data) -> TSeries:
    _require(isinstance(data, dict) and "weight_cut" in data,
             "series needs a 'weight_cut'")
    coeffs = {}
    for item in data.get("terms", []):
        mono = tuple((int(i), int(k)) for i, k in item["monomial"])
        coeffs[mono] = coeffs.get(mono, 0) + parse_fraction(item["value"])
    try:
        return TSeries(coeffs, int(data["weight_cut"]))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def tseries_text(t: TSeries) -> str:
    return t.format_text()


# -- NPointTable ------------------------------------------------------------


def npoint_to_json(table: NPointTable) -> dict:
    return {"n": table.n, "weight_cut": table.weight_cut,
            "cells": [{"orders": list(js), "value": fraction_str(table.cells[js])}
                      for js in table.sorted_cells()]}


def npoint_from_json(data) -> NPointTable:
    _require(isinstance(data, dict) and "n" in data, "table needs 'n'")
    cells = {}
    for item in data.get("cells", []):
        cells[tuple(int(j) for j in item["orders"])] = parse_fraction(item["value"])
    return NPointTable(int(data["n"]), int(data.get("weight_cut", 0)), cells)


def npoint_text(table: NPointTable) -> str:
    if not table.cells:
        return "(empty table)"
    lines = []
    for js in table.sorted_cells():
        key = ",".join(str(j) for j in js)
        lines.append(f"({key}) = {fraction_str(table.cells[js])}")
    return "\n".join(lines)


# -- files ------------------------------------------------------------------


def load_json_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from None


def dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True)
