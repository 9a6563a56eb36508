"""File formats: feeder CSV, controller definition text, JSON run reports.

The feeder CSV is column-per-phase with a fixed three-column header; rows
are positional load points and blank cells mean the phase has no point in
that row (phases rarely have equal point counts). The controller format
is a small line grammar so alternative membership layouts can be swapped
in without touching code. Reports serialize a BalanceReport to JSON with
1-based phase numbers and point positions, matching how feeder data is
usually tabulated.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from importlib import resources
from typing import TextIO

from .balancing import INFEASIBLE, BalanceReport
from .fuzzy import (
    DEFAULT_RESOLUTION,
    FuzzyController,
    LinguisticVariable,
    TriangularMF,
)
from .model import FeederSnapshot

__all__ = [
    "FeederFormatError",
    "ControllerFormatError",
    "parse_feeder_csv",
    "write_feeder_csv",
    "parse_controller",
    "write_controller",
    "write_report",
    "write_moves_csv",
    "load_reference_feeder",
    "reference_feeder_text",
    "reference_controller_text",
]

_HEADER = ("phase1", "phase2", "phase3")


class FeederFormatError(ValueError):
    """Malformed feeder CSV."""


class ControllerFormatError(ValueError):
    """Malformed controller definition."""


def parse_feeder_csv(text: str) -> FeederSnapshot:
    """Parse feeder CSV text into a snapshot.

    Header must be exactly phase1,phase2,phase3. Every row needs three
    fields; a blank field is simply the absence of a point in that phase.
    Values must be finite and non-negative. Line numbers in errors are
    1-based and count the header.
    """
    rows = list(csv.reader(_io.StringIO(text)))
    rows = [row for row in rows if row]  # csv yields [] for blank lines
    if not rows:
        raise FeederFormatError("empty feeder file")
    header = tuple(cell.strip().lower() for cell in rows[0])
    if header != _HEADER:
        raise FeederFormatError(
            f"line 1: expected header {','.join(_HEADER)!r}, got {','.join(rows[0])!r}"
        )
    if len(rows) == 1:
        raise FeederFormatError("feeder file has a header but no load points")

    phases: list[list[float]] = [[], [], []]
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise FeederFormatError(
                f"line {lineno}: expected 3 columns, got {len(row)}"
            )
        for col, cell in enumerate(row):
            cell = cell.strip()
            if not cell:
                continue
            try:
                value = float(cell)
            except ValueError:
                raise FeederFormatError(
                    f"line {lineno}: phase{col + 1} value {cell!r} is not a number"
                ) from None
            if not math.isfinite(value):
                raise FeederFormatError(
                    f"line {lineno}: phase{col + 1} value {cell!r} is not finite"
                )
            if value < 0:
                raise FeederFormatError(
                    f"line {lineno}: phase{col + 1} value {value:g} is negative"
                )
            phases[col].append(value)
    if all(not p for p in phases):
        raise FeederFormatError("feeder file has no load points")
    return FeederSnapshot.from_lists(phases)


def _format_power(value: float) -> str:
    return str(int(value)) if value.is_integer() else repr(value)


def write_feeder_csv(snapshot: FeederSnapshot, out: TextIO) -> None:
    """Write a snapshot as feeder CSV, padding shorter phases with blanks."""
    out.write(",".join(_HEADER) + "\n")
    depth = max(len(p) for p in snapshot.phases)
    for row in range(depth):
        cells = [
            _format_power(points[row]) if row < len(points) else ""
            for points in snapshot.phases
        ]
        out.write(",".join(cells) + "\n")


def parse_controller(text: str) -> FuzzyController:
    """Parse a controller definition.

    Line grammar, one statement per line, '#' starts a comment:

        input <name> <min> <max>
        output <name> <min> <max>
        term <label> <left> <apex> <right>     (attaches to the variable
                                                declared most recently)
        rule <input-term> -> <output-term>
        resolution <samples>                   (optional)
    """
    input_decl: tuple[str, float, float] | None = None
    output_decl: tuple[str, float, float] | None = None
    input_terms: list[TriangularMF] = []
    output_terms: list[TriangularMF] = []
    current: list[TriangularMF] | None = None
    rules: list[tuple[str, str]] = []
    resolution = DEFAULT_RESOLUTION

    def fail(lineno: int, msg: str) -> ControllerFormatError:
        return ControllerFormatError(f"line {lineno}: {msg}")

    def floats(lineno: int, parts: list[str]) -> list[float]:
        vals = []
        for p in parts:
            try:
                vals.append(float(p))
            except ValueError:
                raise fail(lineno, f"{p!r} is not a number") from None
        return vals

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        keyword = parts[0].lower()

        if keyword in ("input", "output"):
            if len(parts) != 4:
                raise fail(lineno, f"{keyword} takes a name and two bounds")
            lo, hi = floats(lineno, parts[2:])
            decl = (parts[1], lo, hi)
            if keyword == "input":
                if input_decl is not None:
                    raise fail(lineno, "duplicate input declaration")
                input_decl = decl
                current = input_terms
            else:
                if output_decl is not None:
                    raise fail(lineno, "duplicate output declaration")
                output_decl = decl
                current = output_terms
        elif keyword == "term":
            if current is None:
                raise fail(lineno, "term before any input/output declaration")
            if len(parts) != 5:
                raise fail(lineno, "term takes a label and three breakpoints")
            left, apex, right = floats(lineno, parts[2:])
            try:
                current.append(TriangularMF(parts[1], left, apex, right))
            except ValueError as exc:
                raise fail(lineno, str(exc)) from None
        elif keyword == "rule":
            if len(parts) != 4 or parts[2] != "->":
                raise fail(lineno, "rule syntax is: rule <input-term> -> <output-term>")
            rules.append((parts[1], parts[3]))
        elif keyword == "resolution":
            if len(parts) != 2:
                raise fail(lineno, "resolution takes one integer")
            try:
                resolution = int(parts[1])
            except ValueError:
                raise fail(lineno, f"{parts[1]!r} is not an integer") from None
        else:
            raise fail(lineno, f"unknown statement {parts[0]!r}")

    if input_decl is None:
        raise ControllerFormatError("missing input declaration")
    if output_decl is None:
        raise ControllerFormatError("missing output declaration")
    if not rules:
        raise ControllerFormatError("controller defines no rules")
    try:
        input_var = LinguisticVariable(
            input_decl[0], (input_decl[1], input_decl[2]), tuple(input_terms)
        )
        output_var = LinguisticVariable(
            output_decl[0], (output_decl[1], output_decl[2]), tuple(output_terms)
        )
        return FuzzyController(input_var, output_var, tuple(rules), resolution)
    except (ValueError, KeyError) as exc:
        raise ControllerFormatError(str(exc)) from None


def _format_breakpoint(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def write_controller(controller: FuzzyController, out: TextIO) -> None:
    """Write a controller in the format parse_controller reads."""
    for var, kind in ((controller.input, "input"), (controller.output, "output")):
        lo, hi = var.universe
        out.write(f"{kind} {var.name} {_format_breakpoint(lo)} {_format_breakpoint(hi)}\n")
        for mf in var.terms:
            out.write(
                f"term {mf.label} {_format_breakpoint(mf.left)} "
                f"{_format_breakpoint(mf.apex)} {_format_breakpoint(mf.right)}\n"
            )
        out.write("\n")
    for antecedent, consequent in controller.rules:
        out.write(f"rule {antecedent} -> {consequent}\n")
    if controller.integration_resolution != DEFAULT_RESOLUTION:
        out.write(f"resolution {controller.integration_resolution}\n")


def _jsonify(value: float) -> float | int:
    return int(value) if float(value).is_integer() else float(value)


def _jsonify_unbalance(value: float) -> float | int:
    return _jsonify(round(value, 2))


def write_report(report: BalanceReport) -> str:
    """Serialize a balance run to JSON.

    Moves carry 1-based phase numbers ("from"/"to") and the point's
    1-based row position in the snapshot that iteration started from.
    """
    doc: dict = {"status": report.status}
    if report.status == INFEASIBLE:
        reasons = [r.infeasibility for r in report.iterations if r.infeasibility]
        doc["reason"] = reasons[-1] if reasons else ""
    doc["initial_totals"] = [_jsonify(t) for t in report.initial_totals]
    doc["initial_unbalance"] = _jsonify_unbalance(report.initial_unbalance)
    doc["iterations"] = []
    for rec in report.iterations:
        entry: dict = {
            "totals_before": [_jsonify(t) for t in rec.totals_before],
            "fuzzy_raw": list(rec.suggestion_raw),
            "avg_error": rec.average_error,
            "error_vector": list(rec.error_vector),
            "fuzzy_corrected": list(rec.suggestion_corrected),
        }
        if rec.infeasibility is not None:
            entry["infeasibility"] = rec.infeasibility
        entry["moves"] = [
            {
                "from": mv.source_phase + 1,
                "index": mv.point_index + 1,
                "to": mv.dest_phase + 1,
                "kw": _jsonify(mv.power),
            }
            for mv in (rec.plan.moves if rec.plan is not None else ())
        ]
        entry["totals_after"] = [_jsonify(t) for t in rec.totals_after]
        entry["unbalance_after"] = _jsonify_unbalance(rec.unbalance_after)
        doc["iterations"].append(entry)
    doc["final_totals"] = [_jsonify(t) for t in report.final_totals]
    doc["final_unbalance"] = _jsonify_unbalance(report.final_unbalance)
    return json.dumps(doc, indent=2)


def write_moves_csv(report: BalanceReport, out: TextIO) -> None:
    """Flat CSV of every executed move: iteration,from,index,to,kw (1-based)."""
    out.write("iteration,from,index,to,kw\n")
    for it, rec in enumerate(report.iterations, start=1):
        if rec.plan is None:
            continue
        for mv in rec.plan.moves:
            out.write(
                f"{it},{mv.source_phase + 1},{mv.point_index + 1},"
                f"{mv.dest_phase + 1},{_format_power(mv.power)}\n"
            )


def _read_data(name: str) -> str:
    return resources.files("phasebal.data").joinpath(name).read_text(encoding="utf-8")


def reference_feeder_text() -> str:
    """Raw CSV text of the bundled 50-row reference feeder."""
    return _read_data("reference_feeder.csv")


def load_reference_feeder() -> FeederSnapshot:
    """The bundled three-phase reference feeder (totals 245/120/82 kW)."""
    return parse_feeder_csv(reference_feeder_text())


def reference_controller_text() -> str:
    """Raw text of the bundled controller definition."""
    return _read_data("controller.txt")
