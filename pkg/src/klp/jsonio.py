"""JSON wire formats: instances, generalized polyhedra, value functions,
reports. Rationals travel as "p/q" strings ("p" when the denominator is 1);
coefficient blocks are keyed by 1-based level and omitted when zero.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .exactnum import Vec, format_rational, frac, vec, zeros
from .genpoly import ExtReal, GenPoly
from .mlp import Level, LevelRow, MlpInstance, SolveReport
from .oracle import BilevelBasisResult, NaiveTrilevelDemo
from .pwl import AFFINE, Piece, PwlFunc


class FormatError(ValueError):
    """Malformed input document."""


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _rat(value) -> Fraction:
    if isinstance(value, float):
        raise FormatError(f"floats are not exact: {value!r}")
    try:
        return frac(value)
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from exc


def _rat_list(values) -> Vec:
    if not isinstance(values, list):
        raise FormatError(f"expected a list of rationals, got {type(values).__name__}")
    return tuple(_rat(v) for v in values)


# -- instances -------------------------------------------------------------------


def _blocks_to_full(blocks, dims, what: str) -> Vec:
    if not isinstance(blocks, dict):
        raise FormatError(f"{what} must be an object keyed by level")
    k = len(dims)
    full: list[Fraction] = []
    for level in range(1, k + 1):
        part = blocks.get(str(level))
        if part is None:
            full.extend(zeros(dims[level - 1]))
            continue
        entries = _rat_list(part)
        if len(entries) != dims[level - 1]:
            raise FormatError(
                f"{what}: block {level} has {len(entries)} entries, "
                f"expected {dims[level - 1]}"
            )
        full.extend(entries)
    for key in blocks:
        if not (key.isdigit() and 1 <= int(key) <= k):
            raise FormatError(f"{what}: unknown level key {key!r}")
    return tuple(full)


def _full_to_blocks(full: Vec, dims) -> dict:
    blocks = {}
    start = 0
    for level, width in enumerate(dims, start=1):
        part = full[start : start + width]
        if any(q != 0 for q in part):
            blocks[str(level)] = [format_rational(q) for q in part]
        start += width
    return blocks


def instance_from_obj(obj) -> MlpInstance:
    if not isinstance(obj, dict):
        raise FormatError("instance document must be an object")
    try:
        k = int(obj["k"])
        dims = tuple(int(n) for n in obj["n"])
        level_objs = obj["levels"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"missing or malformed instance field: {exc}") from exc
    if len(dims) != k or len(level_objs) != k:
        raise FormatError("k, n, and levels disagree on the number of players")
    levels = []
    for li, level_obj in enumerate(level_objs, start=1):
        rows = []
        for row_obj in level_obj.get("rows", []):
            coeffs = _blocks_to_full(row_obj.get("coeffs", {}), dims, f"level {li} row")
            rows.append(
                LevelRow(coeffs, _rat(row_obj.get("rhs", 0)), bool(row_obj.get("strict", False)))
            )
        objective = _blocks_to_full(
            level_obj.get("objective", {}), dims, f"level {li} objective"
        )
        cut = sum(dims[: li - 1])
        if any(q != 0 for q in objective[:cut]):
            raise FormatError(f"level {li} objective touches earlier levels")
        levels.append(Level(tuple(rows), objective))
    eps = _rat(obj.get("eps", 0))
    try:
        return MlpInstance(dims, tuple(levels), eps)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def instance_to_obj(inst: MlpInstance) -> dict:
    levels = []
    for level in inst.levels:
        rows = []
        for row in level.rows:
            row_obj = {
                "coeffs": _full_to_blocks(row.coeffs, inst.dims),
                "rhs": format_rational(row.rhs),
            }
            if row.strict:
                row_obj["strict"] = True
            rows.append(row_obj)
        levels.append(
            {"rows": rows, "objective": _full_to_blocks(level.objective, inst.dims)}
        )
    obj = {"k": inst.k, "n": list(inst.dims), "levels": levels}
    if inst.eps != 0:
        obj["eps"] = format_rational(inst.eps)
    return obj


# -- generalized polyhedra ---------------------------------------------------------


def genpoly_from_obj(obj) -> GenPoly:
    if not isinstance(obj, dict) or "dim" not in obj:
        raise FormatError("polyhedron document needs a dim field")
    try:
        dim = int(obj["dim"])
    except (TypeError, ValueError) as exc:
        raise FormatError("dim must be an integer") from exc

    def rows(key):
        out = []
        for entry in obj.get(key, []):
            if not (isinstance(entry, list) and len(entry) == 2):
                raise FormatError(f"{key} entries must be [coeffs, rhs] pairs")
            coeffs = _rat_list(entry[0])
            if len(coeffs) != dim:
                raise FormatError(f"{key} row of length {len(coeffs)} in dim {dim}")
            out.append((coeffs, _rat(entry[1])))
        return tuple(out)

    return GenPoly(dim, rows("weak"), rows("strict"))


def genpoly_to_obj(poly: GenPoly) -> dict:
    def rows(pairs):
        return [
            [[format_rational(c) for c in coeffs], format_rational(rhs)]
            for coeffs, rhs in pairs
        ]

    return {"dim": poly.dim, "weak": rows(poly.weak), "strict": rows(poly.strict)}


# -- piecewise-linear functions ------------------------------------------------------


def piece_to_obj(piece: Piece):
    if piece.kind != AFFINE:
        return piece.kind
    return {
        "c": [format_rational(q) for q in piece.coeffs],
        "d": format_rational(piece.offset),
    }


def pwl_to_obj(func: PwlFunc) -> dict:
    return {
        "dim": func.dim,
        "cells": [
            {"region": genpoly_to_obj(region), "piece": piece_to_obj(piece)}
            for region, piece in func.cells
        ],
    }


# -- reports ---------------------------------------------------------------------


def extreal_to_obj(value: ExtReal) -> str:
    return str(value)


def report_to_obj(report: SolveReport) -> dict:
    return {
        "status": report.status,
        "value": extreal_to_obj(report.value),
        "attained": report.attained,
        "witness": None
        if report.witness is None
        else [format_rational(q) for q in report.witness],
    }


def basis_result_to_obj(result: BilevelBasisResult) -> dict:
    return {
        "status": result.status,
        "value": extreal_to_obj(result.value),
        "attained": result.attained,
        "witness": None
        if result.witness is None
        else [format_rational(q) for q in result.witness],
        "basis": None if result.basis is None else list(result.basis.indices),
        "bases_total": result.bases_total,
        "bases_singular": result.bases_singular,
        "bases_dual_feasible": result.bases_dual_feasible,
    }


def demo_to_obj(demo: NaiveTrilevelDemo) -> dict:
    return {
        "t": format_rational(demo.threshold),
        "exact": report_to_obj(demo.exact),
        "naive": {
            "status": demo.naive_status,
            "certificate": [format_rational(q) for q in demo.certificate],
            "certificate_feasible": demo.certificate_feasible,
        },
        "mismatch": demo.mismatch,
    }


def parse_point(text: str, expect: int | None = None) -> Vec:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    point = vec(_rat(p) for p in parts)
    if expect is not None and len(point) != expect:
        raise FormatError(f"point has {len(point)} coordinates, expected {expect}")
    return point
